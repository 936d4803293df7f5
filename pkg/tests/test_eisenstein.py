import math

import numpy as np
import pytest

from hypermonogenic.clifford import Multivector
from hypermonogenic.diffops import khyper_residual, lift_oracle, sample_points
from hypermonogenic.eisenstein import (
    EisensteinSpec,
    class_sum_alpha,
    eisenstein_oracle,
    eisenstein_values,
    eval_eisenstein,
    lift_negative_k,
    lifted_oracle,
    tail_estimate,
    term_transform_check,
)
from hypermonogenic.errors import DivergentSpecError
from hypermonogenic.moebius import TruncationPolicy, VahlenMatrix, generators

X = [0.13, -0.21, 0.34, 0.9]


def spec(n=3, p=0, k=0.0, N=3, family="khyper", s=None, B=200.0):
    return EisensteinSpec(n, p, k, N, family, s, TruncationPolicy.norm(B))


def test_identity_coset_only_is_one():
    sv = eval_eisenstein(spec(p=2, k=-2.0, B=1), X)
    assert sv.terms_used == 1
    assert sv.value == Multivector.scalar(3)


def test_convergence_gates():
    with pytest.raises(DivergentSpecError):
        EisensteinSpec(3, 2, -1.0)  # khyper needs k < n - p - 2 = -1
    with pytest.raises(DivergentSpecError):
        EisensteinSpec(3, 0, 2.0, family="hyperharmonic")
    with pytest.raises(DivergentSpecError):
        EisensteinSpec(3, 0, 0.0, family="hecke")
    with pytest.raises(ValueError):
        EisensteinSpec(3, 0, 0.0, family="hyperharmonic", policy=TruncationPolicy.lattice(10))
    with pytest.raises(ValueError):
        EisensteinSpec(3, 0, 0.0, family="nope")


@pytest.mark.parametrize("family,k,s", [("khyper", 0.0, None), ("hecke", 0.0, 0.2),
                                        ("hyperharmonic", -1.0, None), ("invariantQ", -1.0, None)])
def test_term_transform_identity(family, k, s):
    sp = spec(family=family, k=k, s=s, N=1, B=400)
    assert term_transform_check(sp, VahlenMatrix.identity(3), X).max_error == 0
    for g in generators(0, 3):
        res = term_transform_check(sp, g, X)
        assert res.matched > 0
        assert res.max_error < 1e-9


def test_term_transform_p2():
    sp = spec(p=2, k=-2.0, N=1, B=12)
    for g in generators(2, 3)[:4]:
        res = term_transform_check(sp, g, X)
        assert res.matched > 0 and res.max_error < 1e-9


def test_truncation_stability():
    for sp in (spec(k=0.0), spec(k=-1.5, family="hyperharmonic"), spec(k=0.0, family="hecke", s=0.2),
               spec(p=1, k=-2.5)):
        a = eval_eisenstein(sp, X)
        b = eval_eisenstein(sp.with_policy(TruncationPolicy.norm(2 * sp.policy.norm_bound)), X)
        assert math.isfinite(a.tail_estimate)
        assert (a.value - b.value).norm() < a.tail_estimate


def test_tail_is_infinite_without_absolute_convergence():
    # hyperharmonic with n = 3, p = 0, k = 0 passes the gate but |term| ~ |cx+d|^-2
    sp = spec(family="hyperharmonic", k=0.0)
    assert eval_eisenstein(sp, X).tail_estimate == math.inf
    assert tail_estimate(spec(p=2, k=-2.0).with_policy(TruncationPolicy.words(3)), X, 10) == math.inf


def test_limit_towards_one():
    sp = spec(p=2, k=-2.0, B=200)
    errs = [(eval_eisenstein(sp, [0, 0, 0, t]).value - 1).norm() for t in (2.0, 4.0, 8.0)]
    assert errs[0] > errs[1] > errs[2]


def test_khyper_series_is_khyper():
    sp = spec(k=0.0, B=100)
    f = eisenstein_oracle(sp)
    for x in sample_points(3, 4, 2):
        assert khyper_residual(f, x, 0.0).norm() < 1e-4
    sp = spec(p=2, k=-2.0, B=50)
    f = eisenstein_oracle(sp)
    for x in sample_points(3, 3, 3):
        assert khyper_residual(f, x, -2.0).norm() < 1e-4


def test_lift():
    sp = spec(p=2, k=-2.0, B=50)
    en = Multivector.basis(3, 3)
    x = [0, 0, 0, 1.0]
    assert lift_negative_k(sp, x).value.allclose(eval_eisenstein(sp, x).value * en)
    f = eisenstein_oracle(sp)
    g = lifted_oracle(sp)
    for x in sample_points(3, 3, 4):
        assert khyper_residual(g, x, 2.0).norm() < 1e-4
        back = lift_oracle(g, 2.0).eval(x)
        assert back.allclose(-f.eval(x), 1e-12)


def test_hecke_s_to_zero():
    vals = [eval_eisenstein(spec(family="hecke", k=0.0, s=s), X).value for s in (0.2, 0.1, 0.05)]
    assert (vals[2] - vals[1]).norm() < (vals[1] - vals[0]).norm()


def test_invariant_q_is_scalar():
    v = eval_eisenstein(spec(family="invariantQ", k=-1.0), X).value
    assert np.all(np.abs(v.coeffs[1:]) <= 1e-12)
    assert v.scalar_part.real > 1


def test_batched_values_match_pointwise():
    sp = spec(p=1, k=-1.5, B=60)
    pts = sample_points(3, 4, 9)
    batch = eisenstein_values(sp, pts)
    for row, x in zip(batch, pts):
        np.testing.assert_array_equal(row, eval_eisenstein(sp, x).value.coeffs)


def test_word_policy():
    sv = eval_eisenstein(EisensteinSpec(3, 0, 0.0, 1, policy=TruncationPolicy.words(3)), X)
    assert sv.terms_used > 1 and sv.tail_estimate == math.inf


class TestLatticePolicy:
    sp = EisensteinSpec(3, 2, -2.0, 3, policy=TruncationPolicy.lattice(18.0))

    def test_exact_periodicity(self):
        x = np.array(X)
        base = eval_eisenstein(self.sp, x).value
        for i in range(3):
            shifted = x.copy()
            shifted[i] += 1.0
            assert eval_eisenstein(self.sp, shifted).value.allclose(base, 1e-12)

    def test_khyper(self):
        f = eisenstein_oracle(self.sp)
        for x in sample_points(3, 3, 5):
            assert khyper_residual(f, x, -2.0).norm() < 1e-4

    def test_class_sums_are_lower_algebra(self):
        for m in [(1, 0, 0), (1, 1, 0), (0, 1, 1)]:
            alpha = class_sum_alpha(self.sp, m)
            assert alpha.en_mass() < 1e-12
            assert alpha.norm() > 0

    def test_metadata(self):
        sv = eval_eisenstein(self.sp, X)
        assert sv.tail_estimate == math.inf and sv.terms_used > 1
        d = sv.to_dict()
        assert len(d["value_blades"]) == 8 and d["terms_used"] == sv.terms_used
