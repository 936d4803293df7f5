import math

import numpy as np
import pytest
from scipy import special

from hypermonogenic.errors import DomainError, PoleError
from hypermonogenic.specfun import bessel_k, gamma_fn, kv


def k_half(x):
    return math.sqrt(math.pi / (2 * x)) * math.exp(-x)


def test_k_half_at_one():
    assert bessel_k(0.5, 1.0).value == pytest.approx(math.sqrt(math.pi / 2) / math.e, rel=1e-13)
    assert round(kv(0.5, 1.0), 10) == 0.4610685044


@pytest.mark.parametrize("x", [0.05, 0.3, 1.0, 4.0, 17.0, 50.0])
def test_half_integer_closed_forms(x):
    assert kv(0.5, x) == pytest.approx(k_half(x), rel=1e-9)
    assert kv(-0.5, x) == pytest.approx(k_half(x), rel=1e-9)
    assert kv(1.5, x) == pytest.approx(k_half(x) * (1 + 1 / x), rel=1e-9)


def test_against_scipy(rng):
    for _ in range(200):
        nu = rng.uniform(-10, 10)
        x = math.exp(rng.uniform(math.log(0.05), math.log(50)))
        assert kv(nu, x) == pytest.approx(special.kv(nu, x), rel=1e-10)


def test_symmetry_and_recurrence(rng):
    for _ in range(50):
        nu, x = rng.uniform(-4, 4), rng.uniform(0.05, 30)
        assert kv(nu, x) == pytest.approx(kv(-nu, x), rel=1e-12)
        lhs = kv(nu + 1, x) - kv(nu - 1, x)
        rhs = 2 * nu / x * kv(nu, x)
        assert abs(lhs - rhs) <= 1e-8 * max(kv(nu + 1, x), kv(nu - 1, x))


def test_positive_and_decreasing():
    xs = np.linspace(0.05, 40, 60)
    for nu in (0.0, 0.5, 2.3, 7.0):
        vals = [kv(nu, x) for x in xs]
        assert all(v > 0 for v in vals)
        assert all(a > b for a, b in zip(vals, vals[1:]))


def test_large_argument_asymptotics():
    # the first correction is (4 nu^2 - 1) / (8 x); keep it below 5% at x = 30
    for nu in (0.0, 0.5, 1.0, 1.5):
        x = 30.0
        assert kv(nu, x) * math.sqrt(2 * x / math.pi) * math.exp(x) == pytest.approx(1.0, rel=0.05)


def test_error_estimate_and_domain():
    r = bessel_k(1.3, 2.0)
    assert not r.degraded
    assert 0 <= r.abs_err_est < 1e-12
    for bad in (0.0, -1.0, math.nan):
        with pytest.raises(DomainError):
            bessel_k(0.5, bad)


def test_gamma():
    assert gamma_fn(1.0) == 1.0
    assert gamma_fn(0.5) == pytest.approx(math.sqrt(math.pi), rel=1e-15)
    rng = np.random.default_rng(3)
    for x in rng.uniform(0.1, 25, 20):
        assert gamma_fn(x + 1) == pytest.approx(x * gamma_fn(x), rel=1e-11)
    assert gamma_fn(-0.5) == pytest.approx(-2 * math.sqrt(math.pi), rel=1e-14)
    for pole in (0, -1, -4):
        with pytest.raises(PoleError):
            gamma_fn(pole)
