"""Finite-difference residuals of the differential operators on upper half-space.

Functions are supplied as :class:`FunctionOracle` objects mapping points
``x = (x0, ..., xn)`` with ``xn > 0`` to multivectors of Cl_n.  All first
and second partial derivatives are central differences of order 2 or 4.
Every residual is returned raw, so tolerances stay with the caller.

Operators (``D = sum_{i=0}^n e_i d/dx_i`` with ``e_0 = 1``, acting from the left):

* ``khyper_residual``     ``D f + (k / xn) main(Q f)``
* ``khypharm_residual``   ``xn Lap u - k d_n u``
* ``qpart_residual``      ``xn^2 Lap u - k xn d_n u + k u``
* ``maass_residual``      ``Lap g - (n-1)/xn d_n g + lambda g / xn^2``
* ``laplace_beltrami``    ``xn^2 Lap g - (n-1) xn d_n g``
"""
from __future__ import annotations

import csv
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

import numpy as np

from .clifford import Multivector, Paravector, get_algebra
from .errors import DimensionError, DomainError, ShapeError

OPERATORS = ("cauchy_riemann", "khyper", "khypharm", "qpart", "maass", "laplace_beltrami")


@dataclass(frozen=True)
class FunctionOracle:
    """A Cl_n-valued function on (a box in) upper half-space.

    Parameters
    ----------
    func : callable
        Maps a point to a value.  If ``batched`` is false, ``func`` takes
        a coordinate array of shape ``(n+1,)`` and returns a
        :class:`Multivector`, a length-``2**n`` array or a scalar.  If
        ``batched`` is true, it takes ``(P, n+1)`` and returns ``(P, 2**n)``
        (or ``(P,)`` for scalar-valued functions).
    n : int
        Dimension of the target algebra.
    domain_hint : tuple of array_like, optional
        ``(lower, upper)`` coordinate bounds of the box where evaluation
        is valid.  Upper half-space is always enforced.
    batched : bool
    """

    func: Callable
    n: int
    domain_hint: tuple | None = None
    batched: bool = False

    def _normalise(self, v, count: int) -> np.ndarray:
        dim = 1 << self.n
        if isinstance(v, Multivector):
            if v.n != self.n:
                raise DimensionError(f"oracle returned n={v.n}, expected n={self.n}")
            return v.coeffs[None, :]
        arr = np.asarray(v, dtype=complex)
        if arr.ndim == 0:
            out = np.zeros((1, dim), dtype=complex)
            out[0, 0] = arr
            return out
        if self.batched and arr.shape == (count,):
            out = np.zeros((count, dim), dtype=complex)
            out[:, 0] = arr
            return out
        arr = arr.reshape(-1, dim) if arr.size % dim == 0 else arr
        if arr.shape != (count, dim):
            raise ShapeError(f"oracle returned shape {np.shape(v)}, expected ({count}, {dim})")
        return arr

    def evaluate(self, points) -> np.ndarray:
        """Values at ``points`` of shape ``(P, n+1)`` as a ``(P, 2**n)`` complex array."""
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        if pts.shape[1] != self.n + 1:
            raise DimensionError(f"points need {self.n + 1} coordinates")
        self.check_domain(pts)
        if self.batched:
            return self._normalise(self.func(pts), len(pts))
        return np.concatenate([self._normalise(self.func(p), 1) for p in pts])

    def eval(self, x) -> Multivector:
        coords = x.coords if isinstance(x, Paravector) else np.asarray(x, dtype=float)
        return Multivector(self.n, self.evaluate(coords[None, :])[0])

    __call__ = eval

    def check_domain(self, pts: np.ndarray) -> None:
        if np.any(pts[:, -1] <= 0):
            raise DomainError("evaluation point leaves upper half-space (x_n <= 0)")
        if self.domain_hint is not None:
            lo, hi = (np.asarray(b, dtype=float) for b in self.domain_hint)
            if np.any(pts < lo) or np.any(pts > hi):
                raise DomainError("evaluation point outside the oracle's domain hint")


@dataclass(frozen=True)
class StencilSpec:
    """Central-difference step ``h`` and accuracy ``order`` (2 or 4)."""

    h: float = 1e-3
    order: int = 4

    def __post_init__(self):
        if not self.h > 0:
            raise ValueError("stencil step must be positive")
        if self.order not in (2, 4):
            raise ValueError("stencil order must be 2 or 4")

    @property
    def reach(self) -> float:
        return self.h * (self.order // 2)


# weights of the symmetric differences f(x + o h) - f(x - o h) (first derivative)
# and f(x + o h) + f(x - o h) - 2 f(x) (second derivative), for offsets o > 0.
# Written this way the stencils annihilate constants exactly.
_W1 = {2: {1: 0.5}, 4: {1: 8 / 12, 2: -1 / 12}}
_W2 = {2: {1: 1.0}, 4: {1: 16 / 12, 2: -1 / 12}}


def _coords(x, n: int) -> np.ndarray:
    c = x.coords if isinstance(x, Paravector) else np.asarray(x, dtype=float)
    if c.shape != (n + 1,):
        raise DimensionError(f"point needs {n + 1} coordinates, got {c.shape}")
    return c


def derivatives(f: FunctionOracle, x, s: StencilSpec = StencilSpec()):
    """Value, gradient and diagonal Hessian of ``f`` at ``x``.

    Returns
    -------
    f0 : ndarray, shape (2**n,)
    grad : ndarray, shape (n+1, 2**n)
        ``d f / d x_i``.
    second : ndarray, shape (n+1, 2**n)
        ``d^2 f / d x_i^2``.
    """
    n = f.n
    x = _coords(x, n)
    if x[-1] - s.reach <= 0:
        raise DomainError(f"stencil of reach {s.reach} escapes upper half-space at x_n = {x[-1]}")
    offs = [o for o in range(-(s.order // 2), s.order // 2 + 1) if o != 0]
    pts = [x]
    for i in range(n + 1):
        for o in offs:
            p = x.copy()
            p[i] += o * s.h
            pts.append(p)
    vals = f.evaluate(np.array(pts))
    f0 = vals[0]
    m = len(offs)
    grad = np.zeros((n + 1, vals.shape[1]), dtype=complex)
    second = np.zeros_like(grad)
    for i in range(n + 1):
        block = dict(zip(offs, vals[1 + i * m: 1 + (i + 1) * m]))
        grad[i] = sum(w * (block[o] - block[-o]) for o, w in _W1[s.order].items()) / s.h
        second[i] = sum(w * ((block[o] - f0) + (block[-o] - f0)) for o, w in _W2[s.order].items()) / s.h**2
    return f0, grad, second


def apply_cauchy_riemann(f: FunctionOracle, x, s: StencilSpec = StencilSpec(), variant: str = "D") -> Multivector:
    """Apply a first-order Clifford operator by central differences.

    Parameters
    ----------
    variant : {"D", "Dbar", "dirac"}
        ``D = d_0 + sum e_i d_i``, its conjugate ``d_0 - sum e_i d_i``, or
        the reduced Dirac operator ``sum_{i>=1} e_i d_i``.
    """
    alg = get_algebra(f.n)
    _, grad, _ = derivatives(f, x, s)
    out = np.zeros(alg.dim, dtype=complex)
    if variant in ("D", "Dbar"):
        out += grad[0]
    elif variant != "dirac":
        raise ValueError(f"unknown operator variant {variant!r}")
    sign = -1.0 if variant == "Dbar" else 1.0
    for i in range(1, f.n + 1):
        e = np.zeros(alg.dim)
        e[1 << (i - 1)] = 1.0
        out += sign * alg.product(e, grad[i])
    return Multivector(alg, out)


def _q_main(alg, v: np.ndarray) -> np.ndarray:
    """``main(Q v)`` as a Cl_n coefficient array."""
    q = np.zeros(alg.dim, dtype=complex)
    low = alg.lower_blades
    q[low] = v[low | alg.en_bit]
    return q * alg.main_signs


def khyper_residual(f: FunctionOracle, x, k: float, s: StencilSpec = StencilSpec()) -> Multivector:
    """``D f + (k / x_n) main(Q f)``; vanishes iff ``f`` is k-hypermonogenic."""
    alg = get_algebra(f.n)
    xc = _coords(x, f.n)
    if xc[-1] <= 2 * s.h:
        raise DomainError("khyper_residual requires x_n > 2h")
    Df = apply_cauchy_riemann(f, xc, s)
    f0 = f.evaluate(xc[None, :])[0]
    return Df + Multivector(alg, (k / xc[-1]) * _q_main(alg, f0))


def _scalar_values(f: FunctionOracle, x, s: StencilSpec):
    f0, grad, second = derivatives(f, x, s)
    support = np.flatnonzero(np.any(np.abs(np.vstack([f0[None], grad, second])) > 0, axis=0))
    if support.size > 1:
        raise ShapeError(f"expected a single-blade (scalar) oracle, found support on blades {support.tolist()}")
    b = int(support[0]) if support.size else 0
    return f0[b], grad[:, b], second[:, b]


def khypharm_residual(u: FunctionOracle, x, k: float, s: StencilSpec = StencilSpec()) -> complex:
    """``x_n Lap u - k d_n u`` for a single-blade oracle ``u``."""
    xc = _coords(x, u.n)
    _, g, h2 = _scalar_values(u, xc, s)
    return complex(xc[-1] * h2.sum() - k * g[-1])


def qpart_residual(u: FunctionOracle, x, k: float, s: StencilSpec = StencilSpec()) -> complex:
    """``x_n^2 Lap u - k x_n d_n u + k u`` for a single-blade oracle ``u``."""
    xc = _coords(x, u.n)
    u0, g, h2 = _scalar_values(u, xc, s)
    xn = xc[-1]
    return complex(xn * xn * h2.sum() - k * xn * g[-1] + k * u0)


def laplace_beltrami(g: FunctionOracle, x, s: StencilSpec = StencilSpec()) -> complex:
    """Hyperbolic Laplacian ``x_n^2 Lap g - (n-1) x_n d_n g``."""
    xc = _coords(x, g.n)
    _, gr, h2 = _scalar_values(g, xc, s)
    xn = xc[-1]
    return complex(xn * xn * h2.sum() - (g.n - 1) * xn * gr[-1])


def maass_residual(g: FunctionOracle, x, lam: float, n: int, s: StencilSpec = StencilSpec()) -> complex:
    """``Lap g - (n-1)/x_n d_n g + lam g / x_n^2``.

    Equals ``(laplace_beltrami(g) + lam g) / x_n^2``.
    """
    if n != g.n:
        raise DimensionError(f"n={n} does not match oracle dimension {g.n}")
    xc = _coords(x, n)
    g0, gr, h2 = _scalar_values(g, xc, s)
    xn = xc[-1]
    return complex(h2.sum() - (n - 1) / xn * gr[-1] + lam * g0 / (xn * xn))


def maass_eigenvalue(n: int, k: float) -> float:
    """``lambda = (n^2 - (k+1)^2) / 4``.

    >>> maass_eigenvalue(3, -2.0)
    2.0
    """
    return (n * n - (k + 1) ** 2) / 4.0


# ---------------------------------------------------------------------------
# oracle builders
# ---------------------------------------------------------------------------

def component_oracle(f: FunctionOracle, blade: int, part: str | None = None, real_part: bool = False) -> FunctionOracle:
    """Scalar oracle for one coefficient of ``f``, of ``P f`` or of ``Q f``.

    Parameters
    ----------
    blade : int
        Blade mask.  For ``part`` ``"P"`` or ``"Q"`` it must not contain ``e_n``.
    part : {None, "P", "Q"}
    real_part : bool
        Keep only the real part.
    """
    alg = get_algebra(f.n)
    if part is not None:
        if part not in ("P", "Q"):
            raise ValueError("part must be None, 'P' or 'Q'")
        if blade & alg.en_bit:
            raise ValueError("P/Q components are indexed by Cl_{n-1} blades")
        src = blade | alg.en_bit if part == "Q" else blade
    else:
        src = blade

    def func(pts):
        v = f.evaluate(pts)[:, src]
        return v.real.astype(complex) if real_part else v

    return FunctionOracle(func, f.n, f.domain_hint, batched=True)


def power_transform(u: FunctionOracle, exponent: float) -> FunctionOracle:
    """``x -> x_n^exponent u(x)``."""

    def func(pts):
        return u.evaluate(pts) * pts[:, -1:] ** exponent

    return FunctionOracle(func, u.n, u.domain_hint, batched=True)


def maass_transform(u: FunctionOracle, k: float) -> FunctionOracle:
    """``g = x_n^{-(1-n+k)/2} u``, mapping k-hyperbolic harmonic ``u`` to Maass solutions."""
    return power_transform(u, -(1 - u.n + k) / 2.0)


def lift_oracle(f: FunctionOracle, k: float) -> FunctionOracle:
    """``g(x) = f(x) e_n / x_n^k``, the weight-changing lift from k to -k."""
    alg = get_algebra(f.n)
    en = np.zeros(alg.dim)
    en[alg.en_bit] = 1.0

    def func(pts):
        return alg.product(f.evaluate(pts), en) / pts[:, -1:] ** k

    return FunctionOracle(func, f.n, f.domain_hint, batched=True)


def kernel_oracle(n: int, k: float) -> FunctionOracle:
    """``f(x) = conj(x) / |x|^{n+1-k}``, the image of ``f = 1`` under ``J``."""
    alg = get_algebra(n)

    def func(pts):
        conj = pts * np.concatenate([[1.0], -np.ones(n)])
        r2 = np.sum(pts * pts, axis=1, keepdims=True)
        return alg.embed_paravector(conj / r2 ** ((n + 1 - k) / 2)).astype(complex)

    return FunctionOracle(func, n, batched=True)


def power_en_oracle(n: int, j: float) -> FunctionOracle:
    """``f(x) = x_n^j e_n``; its k-hypermonogenic residual is ``(k - j) x_n^{j-1}``."""
    alg = get_algebra(n)

    def func(pts):
        out = np.zeros((len(pts), alg.dim), dtype=complex)
        out[:, alg.en_bit] = pts[:, -1] ** j
        return out

    return FunctionOracle(func, n, batched=True)


def sample_points(n: int, count: int, seed: int = 0) -> np.ndarray:
    """Seeded points in ``[-1, 1]^n x [0.5, 2]``, shape ``(count, n+1)``."""
    rng = np.random.default_rng(seed)
    pts = np.empty((count, n + 1))
    pts[:, :n] = rng.uniform(-1.0, 1.0, size=(count, n))
    pts[:, n] = rng.uniform(0.5, 2.0, size=count)
    return pts


# ---------------------------------------------------------------------------
# sweeps
# ---------------------------------------------------------------------------

def residual_norm(op: str, f: FunctionOracle, x, k: float, s: StencilSpec = StencilSpec(), lam: float | None = None) -> float:
    """Norm of one operator residual at one point."""
    if op == "cauchy_riemann":
        return apply_cauchy_riemann(f, x, s).norm()
    if op == "khyper":
        return khyper_residual(f, x, k, s).norm()
    if op == "khypharm":
        return abs(khypharm_residual(f, x, k, s))
    if op == "qpart":
        return abs(qpart_residual(f, x, k, s))
    if op == "maass":
        lam = maass_eigenvalue(f.n, k) if lam is None else lam
        return abs(maass_residual(f, x, lam, f.n, s))
    if op == "laplace_beltrami":
        lam = maass_eigenvalue(f.n, k) if lam is None else lam
        g0 = f.evaluate(_coords(x, f.n)[None, :])[0]
        return abs(laplace_beltrami(f, x, s) + lam * g0[np.argmax(np.abs(g0))])
    raise ValueError(f"unknown operator {op!r}; expected one of {OPERATORS}")


def residual_sweep(cases: Iterable[tuple[str, FunctionOracle]], points: Sequence, k: float,
                   s: StencilSpec = StencilSpec()) -> list[dict]:
    """Evaluate ``(operator, oracle)`` cases at every point.

    Returns rows with keys ``point, operator, k, residual_norm``.
    """
    rows = []
    for op, f in cases:
        for x in points:
            rows.append({
                "point": ";".join(repr(float(v)) for v in np.asarray(x)),
                "operator": op,
                "k": float(k),
                "residual_norm": residual_norm(op, f, x, k, s),
            })
    return rows


def write_sweep_csv(rows: Sequence[dict], path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=["point", "operator", "k", "residual_norm"], lineterminator="\n")
        w.writeheader()
        for r in rows:
            w.writerow({**r, "residual_norm": f"{r['residual_norm']:.6e}"})
