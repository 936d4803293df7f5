import numpy as np
import pytest

from hypermonogenic.clifford import Multivector, get_algebra
from hypermonogenic.diffops import (
    FunctionOracle,
    StencilSpec,
    apply_cauchy_riemann,
    component_oracle,
    kernel_oracle,
    khyper_residual,
    khypharm_residual,
    laplace_beltrami,
    lift_oracle,
    maass_eigenvalue,
    maass_residual,
    maass_transform,
    power_en_oracle,
    qpart_residual,
    residual_norm,
    residual_sweep,
    sample_points,
    write_sweep_csv,
)
from hypermonogenic.errors import DomainError, ShapeError

X = np.array([0.3, -0.2, 0.1, 1.0])


def scalar(n, func):
    return FunctionOracle(lambda p: func(p), n, batched=True)


def test_constant_is_in_every_kernel():
    one = scalar(3, lambda p: np.ones(len(p)))
    assert apply_cauchy_riemann(one, X).norm() == 0
    assert khyper_residual(one, X, -1.7).norm() == 0
    assert khypharm_residual(one, X, 2.0) == 0
    assert maass_residual(one, X, 0.0, 3) == 0


def test_kernel_is_monogenic_at_2en():
    f = kernel_oracle(3, 0.0)
    assert apply_cauchy_riemann(f, [0, 0, 0, 2.0]).norm() < 1e-6


def test_linear_monogenic_n2():
    # f = x0 + x1 e1:  d0 f + e1 d1 f = 1 + e1 e1 = 0
    alg = get_algebra(2)

    def f(p):
        out = np.zeros((len(p), alg.dim), dtype=complex)
        out[:, 0], out[:, 1] = p[:, 0], p[:, 1]
        return out

    oracle = FunctionOracle(f, 2, batched=True)
    assert apply_cauchy_riemann(oracle, [0.2, 0.4, 0.9]).norm() < 1e-12
    # Dbar f = 1 - e1 e1 = 2
    assert apply_cauchy_riemann(oracle, [0.2, 0.4, 0.9], variant="Dbar").allclose(Multivector.scalar(2, 2.0), 1e-9)


def test_reduced_dirac_variant():
    # for f = x1 e1 (n=2), sum_{i>=1} e_i d_i f = e1 e1 = -1
    alg = get_algebra(2)

    def f(p):
        out = np.zeros((len(p), alg.dim), dtype=complex)
        out[:, 1] = p[:, 1]
        return out

    r = apply_cauchy_riemann(FunctionOracle(f, 2, batched=True), [0.1, 0.2, 1.0], variant="dirac")
    assert r.allclose(Multivector.scalar(2, -1.0), 1e-9)


@pytest.mark.parametrize("n,k", [(3, 0.0), (3, -2.0), (2, -1.5), (4, 1.0)])
def test_kernel_khyper_and_derived_equations(n, k):
    f = kernel_oracle(n, k)
    pts = sample_points(n, 5, seed=7)
    lam = maass_eigenvalue(n, k)
    for x in pts:
        assert khyper_residual(f, x, k).norm() < 1e-6
        for blade in range(1 << (n - 1)):
            u = component_oracle(f, blade, "P", real_part=True)
            assert abs(khypharm_residual(u, x, k)) < 1e-5
            assert abs(maass_residual(maass_transform(u, k), x, lam, n)) < 1e-4
            q = component_oracle(f, blade, "Q", real_part=True)
            assert abs(qpart_residual(q, x, k)) < 1e-5


def test_power_en_hand_value():
    # f = x_n^j e_n:  D f = e_n (j x_n^{j-1} e_n) = -j x_n^{j-1};  k main(Q f)/x_n = k x_n^{j-1}
    n, j, k = 3, 1.7, -0.6
    r = khyper_residual(power_en_oracle(n, j), X, k)
    expected = Multivector.scalar(n, (k - j) * X[-1] ** (j - 1))
    assert r.allclose(expected, 1e-8)
    # j = k gives an exact solution
    assert khyper_residual(power_en_oracle(n, k), X, k).norm() < 1e-9


def test_hand_solutions():
    for k in (-2.0, -0.5, 1.5):
        u = scalar(3, lambda p, k=k: p[:, -1] ** (k + 1) / (k + 1))
        assert abs(khypharm_residual(u, X, k)) < 1e-8
        assert abs(qpart_residual(scalar(3, lambda p: p[:, -1]), X, k)) < 1e-9
    # harmonic u, k = 0: x_n^2 Lap u = 0
    harmonic = scalar(3, lambda p: p[:, 0] ** 2 - p[:, 3] ** 2 + p[:, 1] * p[:, 2])
    assert abs(qpart_residual(harmonic, X, 0.0)) < 1e-8


def test_maass_chain_hand_example():
    n, k = 3, -2.0
    u = scalar(n, lambda p: p[:, -1] ** (k + 1) / (k + 1))
    g = maass_transform(u, k)
    assert abs(maass_residual(g, X, maass_eigenvalue(n, k), n)) < 1e-5


@pytest.mark.parametrize("n", [2, 3, 4])
def test_laplace_beltrami_power_eigenvalue(n):
    g = scalar(n, lambda p: p[:, -1] ** ((n - 1) / 2))
    for xn in (0.6, 1.0, 1.7):
        x = np.zeros(n + 1)
        x[-1] = xn
        ratio = laplace_beltrami(g, x).real / xn ** ((n - 1) / 2)
        assert ratio == pytest.approx(-(n * n - 1) / 4, abs=1e-6)


def test_maass_and_laplace_beltrami_relation():
    n, lam = 3, 1.3
    g = scalar(n, lambda p: np.sin(p[:, 0]) * p[:, -1] ** 1.5)
    lhs = X[-1] ** 2 * maass_residual(g, X, lam, n)
    rhs = laplace_beltrami(g, X) + lam * g.eval(X).scalar_part
    assert lhs == pytest.approx(rhs, abs=1e-9)


def test_prop_lift_pde_level():
    for n, k in ((3, -2.0), (3, 0.5), (2, -1.5)):
        f = kernel_oracle(n, k)
        g = lift_oracle(f, k)
        for x in sample_points(n, 4, seed=1):
            assert khyper_residual(g, x, -k).norm() < 1e-5


@pytest.mark.parametrize("order,h,lo,hi", [(2, 0.05, 3.5, 4.5), (4, 0.1, 14.0, 18.0)])
def test_stencil_convergence_order(order, h, lo, hi):
    f = kernel_oracle(3, -2.0)
    r1 = khyper_residual(f, X, -2.0, StencilSpec(h, order)).norm()
    r2 = khyper_residual(f, X, -2.0, StencilSpec(h / 2, order)).norm()
    assert lo <= r1 / r2 <= hi
    u = component_oracle(f, 0, "P", real_part=True)
    r1 = abs(khypharm_residual(u, X, -2.0, StencilSpec(h, order)))
    r2 = abs(khypharm_residual(u, X, -2.0, StencilSpec(h / 2, order)))
    assert lo <= r1 / r2 <= hi


def test_errors():
    f = kernel_oracle(3, 0.0)
    with pytest.raises(DomainError):
        khyper_residual(f, [0, 0, 0, 1e-3], 0.0)
    with pytest.raises(ShapeError):
        khypharm_residual(f, X, 0.0)
    with pytest.raises(ValueError):
        StencilSpec(h=0)
    with pytest.raises(ValueError):
        StencilSpec(order=3)
    with pytest.raises(ValueError):
        residual_norm("nope", f, X, 0.0)


def test_sample_points_are_seeded():
    a, b = sample_points(3, 10, 5), sample_points(3, 10, 5)
    np.testing.assert_array_equal(a, b)
    assert np.all((a[:, -1] >= 0.5) & (a[:, -1] <= 2.0)) and np.all(np.abs(a[:, :3]) <= 1)


def test_sweep_csv(tmp_path):
    f = kernel_oracle(3, 0.0)
    rows = residual_sweep([("khyper", f)], sample_points(3, 3, 0), 0.0)
    path = tmp_path / "sweep.csv"
    write_sweep_csv(rows, path)
    lines = path.read_text().splitlines()
    assert lines[0] == "point,operator,k,residual_norm" and len(lines) == 4
