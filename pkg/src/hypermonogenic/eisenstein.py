"""Truncated Eisenstein series over translation cosets.

For a bottom row ``(c, d)`` write ``y = c x + d``.  Four families of
summands are supported:

============== =====================================================
family         summand
============== =====================================================
khyper         ``conj(y) / |y|^{n+1-k}``
hecke          ``(x_n / |y|^2)^s conj(y) / |y|^{n+1-k}``
hyperharmonic  ``|y|^{-(n-k-1)}``
invariantQ     ``(x_n / |y|^2)^{(n-k-1)/2}``
============== =====================================================

Sums use :func:`math.fsum` per blade in the sorted coset order, so the
result is correctly rounded and independent of platform and thread
count.

With a ``lattice`` truncation policy the khyper series is instead
evaluated class by class.  Each class ``(c, r mod Z^{p+1})`` is summed
over the whole translation lattice, with a smooth erfc cut-off at radius
``R``.  The result is exactly periodic in the lattice directions and
k-hypermonogenic up to terms of order ``exp(-(2 pi w)^2 / 2)``, where
``w`` is the window width.
"""
from __future__ import annotations

import functools
import itertools
import math
from dataclasses import dataclass, field, replace
from typing import NamedTuple

import numpy as np

from .clifford import Multivector, Paravector, get_algebra
from .diffops import FunctionOracle
from .errors import DimensionError, DivergentSpecError, EnumerationError
from .moebius import (
    CosetTable,
    LatticeSpec,
    TruncationPolicy,
    VahlenMatrix,
    _order_product,
    automorphy_factor,
    coset_table,
    mobius_apply,
)

FAMILIES = ("khyper", "hecke", "hyperharmonic", "invariantQ")


@dataclass(frozen=True)
class EisensteinSpec:
    """Full parameterisation of one truncated series.

    Parameters
    ----------
    n, p : int
        Algebra dimension and lattice rank minus one (``0 <= p <= n-1``).
    k : float
        Weight parameter.
    N : int
        Level of the congruence subgroup.
    family : str
        One of ``khyper``, ``hecke``, ``hyperharmonic``, ``invariantQ``.
    hecke_s : float, optional
        Regularisation exponent ``s > 0`` (``hecke`` only).
    policy : TruncationPolicy
        Defaults to ``|c|^2 + |d|^2 <= 400``.

    Raises
    ------
    DivergentSpecError
        If the convergence gate fails: ``k < n - p - 2`` for khyper and
        ``k < n - p - 1`` for hyperharmonic and invariantQ.
    """

    n: int
    p: int
    k: float
    N: int = 1
    family: str = "khyper"
    hecke_s: float | None = None
    policy: TruncationPolicy = field(default_factory=lambda: TruncationPolicy.norm(400))

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown family {self.family!r}; expected one of {FAMILIES}")
        LatticeSpec(self.n, self.p, self.N)  # validates n, p, N
        if self.family == "hecke":
            if self.hecke_s is None or not self.hecke_s > 0:
                raise DivergentSpecError("hecke family needs hecke_s > 0")
        elif self.hecke_s is not None:
            raise ValueError("hecke_s is only meaningful for the hecke family")
        gate = {"khyper": self.n - self.p - 2, "hyperharmonic": self.n - self.p - 1,
                "invariantQ": self.n - self.p - 1}.get(self.family)
        if gate is not None and not self.k < gate:
            raise DivergentSpecError(
                f"{self.family} series needs k < {gate} for n={self.n}, p={self.p}; got k={self.k}")
        if self.policy.kind == "lattice" and self.family != "khyper":
            raise ValueError("the lattice (class) truncation is implemented for the khyper family only")

    @property
    def lattice(self) -> LatticeSpec:
        return LatticeSpec(self.n, self.p, self.N)

    def with_policy(self, policy: TruncationPolicy) -> "EisensteinSpec":
        return replace(self, policy=policy)

    def to_dict(self) -> dict:
        pol = self.policy
        return {
            "n": self.n, "p": self.p, "k": self.k, "N": self.N, "family": self.family,
            "hecke_s": self.hecke_s,
            "policy": {"kind": pol.kind, "norm_bound": pol.norm_bound, "word_length": pol.word_length,
                       "class_bound": pol.class_bound, "window_radius": pol.window_radius,
                       "window_width": pol.window_width},
        }


@dataclass(frozen=True)
class SeriesValue:
    """Value of a truncated series with its tail estimate and term count."""

    value: Multivector
    tail_estimate: float
    terms_used: int

    def to_dict(self) -> dict:
        return {
            "value_blades": [[float(c.real), float(c.imag)] for c in self.value.coeffs],
            "tail_estimate": self.tail_estimate,
            "terms_used": self.terms_used,
        }


# ---------------------------------------------------------------------------
# per-coset terms
# ---------------------------------------------------------------------------

def _family_terms(spec: EisensteinSpec, C: np.ndarray, D: np.ndarray, x: np.ndarray) -> np.ndarray:
    """Summands for rows ``(C, D)`` at one point, shape ``(K, 2**n)`` (real)."""
    alg = get_algebra(spec.n)
    n, k = spec.n, spec.k
    Y = alg.product(C, alg.embed_paravector(x)) + D
    r2 = np.sum(Y * Y, axis=1)
    xn = x[-1]
    out = np.zeros_like(Y)
    if spec.family in ("khyper", "hecke"):
        scale = r2 ** (-(n + 1 - k) / 2)
        if spec.family == "hecke":
            scale = scale * (xn / r2) ** spec.hecke_s
        out = Y * alg.conjugation_signs * scale[:, None]
    elif spec.family == "hyperharmonic":
        out[:, 0] = r2 ** (-(n - k - 1) / 2)
    else:
        out[:, 0] = (xn / r2) ** ((n - k - 1) / 2)
    return out


def _compensated_sum(terms: np.ndarray) -> np.ndarray:
    return np.array([math.fsum(col) for col in terms.T.tolist()])


def _majorant(spec: EisensteinSpec, xn: float) -> tuple[float, float]:
    """Decay exponent ``alpha`` and prefactor of ``|term| <= pref |cx+d|^{-alpha}``."""
    n, k = spec.n, spec.k
    if spec.family == "khyper":
        return n - k, 1.0
    if spec.family == "hecke":
        return n - k + 2 * spec.hecke_s, xn ** spec.hecke_s
    if spec.family == "hyperharmonic":
        return n - k - 1, 1.0
    a = n - k - 1
    return a, xn ** (a / 2)


def tail_estimate(spec: EisensteinSpec, x, terms_used: int) -> float:
    """Integral-comparison estimate of the omitted part of the majorant series.

    The number of bottom rows of norm ``<= r`` grows like ``r^gamma`` with
    ``gamma = 2(p+1)``.  On the other hand ``|cx+d|^2 >= mu (|c|^2 + |d|^2)``,
    where ``mu`` is the smallest eigenvalue of the Gram form of
    ``(c, d) -> c x + d``.  Comparing with the integral gives

        tail = pref * mu^{-alpha/2} * N(B) * gamma / (alpha - gamma) * B^{-alpha/2},

    and ``inf`` when ``alpha <= gamma`` (no absolute convergence) or when
    the policy is not a norm ball.
    """
    pol = spec.policy
    if pol.kind != "norm":
        return math.inf
    x = np.asarray(x.coords if isinstance(x, Paravector) else x, dtype=float)
    alpha, pref = _majorant(spec, x[-1])
    gamma = 2.0 * (spec.p + 1)
    if alpha <= gamma:
        return math.inf
    t = 1.0 + float(x @ x)
    mu = 2.0 * x[-1] ** 2 / (t + math.sqrt(max(t * t - 4.0 * x[-1] ** 2, 0.0)))
    B = pol.norm_bound
    return float(pref * mu ** (-alpha / 2) * terms_used * gamma / (alpha - gamma) * B ** (-alpha / 2))


# ---------------------------------------------------------------------------
# periodic (class) truncation
# ---------------------------------------------------------------------------

class _PeriodicData(NamedTuple):
    shifts: np.ndarray     # (M, p+1) distinct r mod lattice
    weights: np.ndarray    # (M, 2**n) summed nu(c) for each r
    lattice: np.ndarray    # (L, p+1) translation vectors
    constant: np.ndarray   # (2**n,) contribution of c = 0 rows
    classes: int
    cutoff: float


def _unit_constant(spec: EisensteinSpec) -> np.ndarray:
    """Sum of ``conj(u)`` over unit rows ``(0, u)`` with ``u = 1 (mod N)``."""
    alg = get_algebra(spec.n)
    out = np.zeros(alg.dim)
    for mask in range(1 << spec.p):
        for sign in (1, -1):
            u = np.zeros(1 << spec.p, dtype=np.int64)
            u[mask] = sign
            target = u.copy()
            target[0] -= 1
            if np.all(target % spec.N == 0):
                out[mask] += sign * alg.conjugation_signs[mask]
    return out


@functools.lru_cache(maxsize=16)
def _periodic_data(spec: EisensteinSpec) -> _PeriodicData:
    table = coset_table(spec.lattice, spec.policy)
    alg = get_algebra(spec.n)
    p = spec.p
    rs = table.r()
    nus = table.nu(spec.k)[np.any(table.c != 0, axis=1)]
    if len(rs):
        # group classes sharing the same r; r has denominator |c|^2 so rounding is exact
        uniq, inv = np.unique(np.round(rs, 12), axis=0, return_inverse=True)
        weights = np.zeros((len(uniq), alg.dim))
        np.add.at(weights, inv.reshape(-1), nus)
        shifts = uniq
    else:
        shifts = np.zeros((0, p + 1))
        weights = np.zeros((0, alg.dim))
    pol = spec.policy
    cutoff = pol.window_radius + 5.5 * pol.window_width
    reach = cutoff + 1.5 * math.sqrt(p + 1) + 1.0
    m = int(math.ceil(reach))
    grid = np.array(list(itertools.product(range(-m, m + 1), repeat=p + 1)), dtype=float)
    grid = grid[np.sqrt(np.sum(grid * grid, axis=1)) <= reach]
    return _PeriodicData(shifts, weights, grid, _unit_constant(spec), len(rs), cutoff)


def _periodic_values(spec: EisensteinSpec, pts: np.ndarray) -> np.ndarray:
    from ._kernels import windowed_lattice_sums

    data = _periodic_data(spec)
    alg = get_algebra(spec.n)
    n, p, k = spec.n, spec.p, spec.k
    lat = pts[:, : p + 1] - np.floor(pts[:, : p + 1])  # exact periodicity: reduce to the unit cell
    rest = pts[:, p + 1:]
    rest2 = np.sum(rest * rest, axis=1)
    out = np.tile(data.constant.astype(complex), (len(pts), 1))
    if not len(data.shifts):
        return out
    sums = windowed_lattice_sums(
        np.ascontiguousarray(lat), rest2, data.shifts, data.lattice,
        float(n + 1 - k), spec.policy.window_radius, spec.policy.window_width, data.cutoff,
    )  # (P, M, p+2)
    P, M = sums.shape[:2]
    q = np.zeros((P, M, n + 1))
    q[:, :, 0] = sums[:, :, 1]
    q[:, :, 1: p + 1] = -sums[:, :, 2:]
    q[:, :, p + 1:] = -rest[:, None, :] * sums[:, :, :1]
    Q = alg.embed_paravector(q)
    out += np.sum(alg.product(Q, data.weights[None, :, :]), axis=1)
    return out


# ---------------------------------------------------------------------------
# public evaluation API
# ---------------------------------------------------------------------------

def _table(spec: EisensteinSpec) -> CosetTable:
    table = coset_table(spec.lattice, spec.policy)
    if len(table) == 0 and spec.policy.kind != "lattice":
        raise EnumerationError("coset enumeration is empty")
    return table


def _coords(x, n: int) -> np.ndarray:
    c = np.asarray(x.coords if isinstance(x, Paravector) else x, dtype=float)
    if c.shape != (n + 1,):
        raise DimensionError(f"point needs {n + 1} coordinates")
    if not c[-1] > 0:
        raise DimensionError("point must lie in upper half-space")
    return c


def eval_eisenstein(spec: EisensteinSpec, x) -> SeriesValue:
    """Evaluate a truncated Eisenstein series at one point.

    Examples
    --------
    >>> spec = EisensteinSpec(3, 2, -2.0, N=3, policy=TruncationPolicy.norm(1))
    >>> str(eval_eisenstein(spec, [0, 0, 0, 1.0]).value)
    '1.0'
    """
    xc = _coords(x, spec.n)
    if spec.policy.kind == "lattice":
        vals = _periodic_values(spec, xc[None, :])[0]
        data = _periodic_data(spec)
        return SeriesValue(Multivector(spec.n, vals), math.inf, data.classes + 1)
    table = _table(spec)
    C, D = table.embedded()
    total = _compensated_sum(_family_terms(spec, C, D, xc))
    return SeriesValue(Multivector(spec.n, total), tail_estimate(spec, xc, len(table)), len(table))


def eisenstein_values(spec: EisensteinSpec, points) -> np.ndarray:
    """Series values at many points, shape ``(P, 2**n)`` complex."""
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    if spec.policy.kind == "lattice":
        return _periodic_values(spec, pts)
    table = _table(spec)
    C, D = table.embedded()
    return np.array([_compensated_sum(_family_terms(spec, C, D, x)) for x in pts], dtype=complex)


def eisenstein_oracle(spec: EisensteinSpec) -> FunctionOracle:
    """The truncated series as a batched :class:`FunctionOracle`."""
    return FunctionOracle(functools.partial(eisenstein_values, spec), spec.n, batched=True)


def lift_negative_k(spec: EisensteinSpec, x) -> SeriesValue:
    """``E_{-k}(x) = eps_k(x) e_n / x_n^k`` for the khyper family."""
    if spec.family != "khyper":
        raise ValueError("the lift is defined for the khyper family")
    xc = _coords(x, spec.n)
    sv = eval_eisenstein(spec, xc)
    en = Multivector.blade(spec.n, get_algebra(spec.n).en_bit)
    scale = xc[-1] ** (-spec.k)
    return SeriesValue(sv.value * en * scale, sv.tail_estimate * scale, sv.terms_used)


def lifted_oracle(spec: EisensteinSpec) -> FunctionOracle:
    """Batched oracle of :func:`lift_negative_k`."""
    alg = get_algebra(spec.n)
    en = np.zeros(alg.dim)
    en[alg.en_bit] = 1.0

    def func(pts):
        return alg.product(eisenstein_values(spec, pts), en) * pts[:, -1:] ** (-spec.k)

    return FunctionOracle(func, spec.n, batched=True)


# ---------------------------------------------------------------------------
# per-term transformation check
# ---------------------------------------------------------------------------

class TransformCheck(NamedTuple):
    max_error: float
    matched: int
    unmatched: int


def _integral_order_entry(m: Multivector, p: int) -> np.ndarray:
    v = m.coeffs
    dim = 1 << p
    r = np.round(v.real)
    if np.any(np.abs(v - r) > 1e-9) or np.any(r[dim:] != 0):
        raise ValueError("matrix entries must be integral elements of the order O_p")
    return r[:dim].astype(np.int64)


def term_transform_check(spec: EisensteinSpec, M: VahlenMatrix, x) -> TransformCheck:
    """Compare every matched pair of summands across the action of ``M``.

    For each enumerated row ``r = (c, d)`` whose image ``r M`` is also
    enumerated, this measures

        | term_{rM}(x) - phi(M, x) term_r(M<x>) |,

    where ``phi`` is ``j_k(M, x)`` for khyper and hecke,
    ``|c_M x + d_M|^{-(n-k-1)}`` for hyperharmonic and ``1`` for invariantQ.
    The identity holds exactly by the cocycle relation.  Rows whose image
    falls outside the truncation are only counted.
    """
    if spec.policy.kind == "lattice":
        raise ValueError("term matching needs an explicit coset list (norm or word policy)")
    if M.n != spec.n:
        raise DimensionError("matrix and series dimensions differ")
    xc = _coords(x, spec.n)
    p = spec.p
    table = _table(spec)
    a, b, c, d = (_integral_order_entry(e, p) for e in (M.a, M.b, M.c, M.d))
    c2 = _order_product(table.c, a[None], p) + _order_product(table.d, c[None], p)
    d2 = _order_product(table.c, b[None], p) + _order_product(table.d, d[None], p)
    keys = table.keys()
    src, dst = [], []
    for i, (ci, di) in enumerate(zip(c2.tolist(), d2.tolist())):
        j = keys.get((tuple(ci), tuple(di)))
        if j is not None:
            src.append(i)
            dst.append(j)
    unmatched = len(table) - len(src)
    if not src:
        return TransformCheck(0.0, 0, unmatched)
    src = np.array(src)
    dst = np.array(dst)
    C, D = table.embedded()
    lhs = _family_terms(spec, C[dst], D[dst], xc)
    y = mobius_apply(M, xc).coords
    rhs = _family_terms(spec, C[src], D[src], y)
    alg = get_algebra(spec.n)
    if spec.family in ("khyper", "hecke"):
        rhs = alg.product(automorphy_factor(M, xc, spec.k).coeffs.real, rhs)
    elif spec.family == "hyperharmonic":
        den = (M.c * Paravector(xc).to_multivector() + M.d).norm()
        rhs = rhs * den ** (-(spec.n - spec.k - 1))
    err = float(np.max(np.linalg.norm(lhs - rhs, axis=1)))
    return TransformCheck(err, len(src), unmatched)


def class_sum_alpha(spec: EisensteinSpec, m) -> Multivector:
    """``sum over classes of nu(c) exp(2 pi i <m, r>)`` for a class-truncated series.

    For the lattice policy this is the exact Fourier coefficient (relative
    to :func:`hypermonogenic.fourier.beta_closed_form`) of the windowed
    series, up to the window error.  It gives an independent check of
    numerically extracted coefficients.
    """
    if spec.policy.kind != "lattice":
        raise ValueError("class sums are defined for the lattice policy")
    data = _periodic_data(spec)
    m = np.asarray(m, dtype=float)
    phase = np.exp(2j * np.pi * (data.shifts @ m))
    return Multivector(spec.n, np.sum(data.weights * phase[:, None], axis=0))
