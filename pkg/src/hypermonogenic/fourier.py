"""Fourier analysis of periodic functions on upper half-space.

For a frequency ``m`` (a vector of the dual lattice, written as the
paravector ``m0 + m1 e1 + ...``) with ``mu = |m|``, ``z = 2 pi mu x_n`` and
``s = n + 1 - k``, the Fourier transform over ``R^n`` of the kernel
``q(x) = conj(x) / |x|^{n+1-k}`` at height ``x_n`` is

    beta(m, x_n) = 2 pi^{s/2} / Gamma(s/2) * x_n^{(k+1)/2} mu^{(1-k)/2}
                   * ( -i K_{(k+1)/2}(z) conj(m_hat) - K_{(k-1)/2}(z) e_n ).

This equals ``const(mu) * kernel(m, x_n) * (-i conj(m_hat))``, where

    kernel(m, x_n) = x_n^{(k+1)/2} [K_{(k+1)/2}(z) - i e_n m_hat K_{(k-1)/2}(z)]

is the k-hypermonogenic Fourier kernel used by :func:`reconstruct`.  The
right factor ``conj(m_hat)`` lies in Cl_{n-1}, so both normalisations
describe the same expansion.  They differ only in how the Cl_{n-1}
coefficients are scaled.

:func:`beta_numeric_oracle` evaluates the defining integral independently
with QUADPACK's Fourier-weighted quadrature.
"""
from __future__ import annotations

import csv
import json
import math
import warnings
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .clifford import Multivector, get_algebra
from .diffops import FunctionOracle
from .errors import AliasingError, DomainError
from .specfun import gamma_fn, kv


@dataclass(frozen=True)
class FrequencyVector:
    """Frequency ``m`` in the dual lattice, stored as a tuple of floats.

    Examples
    --------
    >>> m = FrequencyVector([3, 4])
    >>> m.norm, m.padded(3).tolist()
    (5.0, [3.0, 4.0, 0.0])
    """

    m: tuple

    def __init__(self, m):
        object.__setattr__(self, "m", tuple(float(v) for v in np.atleast_1d(m)))

    @property
    def norm(self) -> float:
        return float(math.sqrt(sum(v * v for v in self.m)))

    @property
    def dim(self) -> int:
        return len(self.m)

    def is_zero(self) -> bool:
        return not any(self.m)

    def is_integral(self) -> bool:
        return all(float(v).is_integer() for v in self.m)

    def padded(self, n: int) -> np.ndarray:
        """Coordinates as a length-``n`` vector (one per direction ``x_0..x_{n-1}``)."""
        if self.dim > n:
            raise DomainError(f"frequency has {self.dim} components, more than n={n}")
        out = np.zeros(n)
        out[: self.dim] = self.m
        return out

    def unit_paravector(self, n: int) -> Multivector:
        """``m / |m|`` as the paravector ``(m0 + m1 e1 + ...) / |m|`` of Cl_n."""
        if self.is_zero():
            raise DomainError("zero frequency has no direction")
        coords = np.concatenate([self.padded(n), [0.0]]) / self.norm
        return Multivector.from_paravector(n, coords)

    def __str__(self) -> str:
        return ",".join(f"{v:g}" for v in self.m)


def _freq(m) -> FrequencyVector:
    return m if isinstance(m, FrequencyVector) else FrequencyVector(m)


@dataclass(frozen=True)
class QuadratureSpec:
    """Uniform trapezoidal grid with ``points`` nodes per lattice direction."""

    points: int = 64
    dim: int | None = None

    def __post_init__(self):
        if self.points < 1:
            raise ValueError("need at least one grid point per axis")

    def check_nyquist(self, m: FrequencyVector) -> None:
        need = 2 * max((abs(v) for v in m.m), default=0.0) + 2
        if self.points < need:
            raise AliasingError(f"{self.points} points per axis cannot resolve frequency {m}; need >= {need:g}")


# ---------------------------------------------------------------------------
# closed forms
# ---------------------------------------------------------------------------

def _en(n: int) -> Multivector:
    return Multivector.blade(n, get_algebra(n).en_bit)


def fourier_kernel(m, x_n: float, n: int, k: float) -> Multivector:
    """``x_n^{(k+1)/2} [K_{(k+1)/2}(z) - i e_n m_hat K_{(k-1)/2}(z)]`` with ``z = 2 pi |m| x_n``."""
    m = _freq(m)
    if m.is_zero():
        raise DomainError("m = 0: use the constant-term path")
    if not x_n > 0:
        raise DomainError("x_n must be positive")
    z = 2 * math.pi * m.norm * x_n
    mhat = m.unit_paravector(n)
    val = kv((k + 1) / 2, z) * Multivector.scalar(n) - 1j * kv((k - 1) / 2, z) * (_en(n) * mhat)
    return val * x_n ** ((k + 1) / 2)


def beta_closed_form(m, x_n: float, n: int, k: float) -> Multivector:
    """Fourier transform of ``conj(x)/|x|^{n+1-k}`` over ``R^n`` at height ``x_n``.

    Parameters
    ----------
    m : FrequencyVector or sequence
        Nonzero frequency with at most ``n`` components.
    x_n : float
        Height, positive.
    n : int
    k : float

    Raises
    ------
    DomainError
        For ``m = 0`` or ``x_n <= 0``.
    PoleError
        If ``Gamma((n+1-k)/2)`` is at a pole.
    """
    m = _freq(m)
    if m.is_zero():
        raise DomainError("m = 0: use the constant-term path")
    if not x_n > 0:
        raise DomainError("x_n must be positive")
    s = n + 1 - k
    mu = m.norm
    z = 2 * math.pi * mu * x_n
    const = 2 * math.pi ** (s / 2) / gamma_fn(s / 2) * x_n ** ((k + 1) / 2) * mu ** ((1 - k) / 2)
    mhat_c = m.unit_paravector(n).conj()
    return const * (-1j * kv((k + 1) / 2, z) * mhat_c - kv((k - 1) / 2, z) * _en(n))


def beta_kernel_form(m, x_n: float, n: int, k: float) -> Multivector:
    """``beta`` with the right factor ``2 pi i conj(m)`` removed.

    This is the scalar multiple of :func:`fourier_kernel`

        2^{(k+3)/2} (2 pi |m|)^{-(k+1)/2} pi^{n/2} / ((1-n+k) Gamma((n+1-k)/2 - 1)) * kernel(m, x_n),

    and ``beta_closed_form = beta_kernel_form * (2 pi i conj(m))``.
    Note ``(1-n+k) Gamma((n+1-k)/2 - 1) = -2 Gamma((n+1-k)/2)``, so the
    form has no extra pole at ``k = n - 1``.
    """
    m = _freq(m)
    s = n + 1 - k
    mu = m.norm
    const = -(2 ** ((k + 1) / 2)) * (2 * math.pi * mu) ** (-(k + 1) / 2) * math.pi ** (n / 2) / gamma_fn(s / 2)
    return const * fourier_kernel(m, x_n, n, k)


def _transverse(u: float, a2: float, n: int, s: float) -> float:
    """``int_{R^{n-1}} (u^2 + |v|^2 + a2)^{-s/2} dv`` by radial quadrature."""
    from scipy.integrate import quad

    if n == 1:
        return (u * u + a2) ** (-s / 2)
    omega = 2 * math.pi ** ((n - 1) / 2) / gamma_fn((n - 1) / 2)
    c2 = u * u + a2
    val, _ = quad(lambda r: r ** (n - 2) * (c2 + r * r) ** (-s / 2), 0, np.inf, epsabs=0, epsrel=1e-13, limit=200)
    return omega * val


def beta_numeric_oracle(m, x_n: float, n: int, k: float, full_output: bool = False):
    """Direct quadrature of the defining Fourier integral.

    Rotating ``m`` onto the first axis reduces the ``n``-dimensional
    integral to an oscillatory integral in ``u = <x, m_hat>``:

        beta = -i S conj(m_hat) - x_n C e_n,
        C = 2 int_0^inf h(u) cos(2 pi mu u) du,
        S = 2 int_0^inf u h(u) sin(2 pi mu u) du,

    where ``h`` integrates ``(u^2 + |v|^2 + x_n^2)^{-(n+1-k)/2}`` over the
    transverse directions.  The outer integrals use QUADPACK's QAWF
    algorithm for Fourier integrals over a half line.  The inner one is an
    adaptive radial quadrature.

    Parameters
    ----------
    full_output : bool
        Also return the combined absolute error estimate.
    """
    from scipy.integrate import IntegrationWarning, quad

    m = _freq(m)
    if n not in (2, 3):
        raise DomainError("the quadrature oracle supports n in {2, 3}")
    if m.is_zero():
        raise DomainError("m = 0: use the constant-term path")
    if not k < n - 1:
        raise DomainError("oracle requires k < n - 1")
    s = n + 1 - k
    mu = m.norm
    a2 = x_n * x_n
    w = 2 * math.pi * mu
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", IntegrationWarning)
        # QAWF stops on the absolute tolerance only; beta decays like exp(-2 pi |m| x_n)
        eps = 1e-13 * math.exp(-w * x_n) * _transverse(0.0, a2, n, s)
        C, errC = quad(lambda u: _transverse(u, a2, n, s), 0, np.inf, weight="cos", wvar=w, limlst=200, epsabs=eps)
        S, errS = quad(lambda u: u * _transverse(u, a2, n, s), 0, np.inf, weight="sin", wvar=w, limlst=200,
                       epsabs=eps)
    C, S = 2 * C, 2 * S
    mhat_c = m.unit_paravector(n).conj()
    val = -1j * S * mhat_c - x_n * C * _en(n)
    if full_output:
        return val, 2 * (errS + x_n * errC)
    return val


# ---------------------------------------------------------------------------
# extraction and synthesis
# ---------------------------------------------------------------------------

def _grid(points: int, dim: int) -> np.ndarray:
    g = np.arange(points) / points
    return np.stack(np.meshgrid(*([g] * dim), indexing="ij"), axis=-1).reshape(-1, dim)


def extract_coefficient(f: FunctionOracle, m, x_n: float, q: QuadratureSpec = QuadratureSpec(),
                        transverse: Sequence[float] | None = None) -> Multivector:
    """``int_{[0,1]^d} f(x + x_n e_n) exp(-2 pi i <m, x>) dx`` by the trapezoidal rule.

    Parameters
    ----------
    f : FunctionOracle
        Periodic in the first ``d = len(m)`` coordinates.
    m : FrequencyVector or sequence
    x_n : float
    q : QuadratureSpec
    transverse : sequence of float, optional
        Fixed values of the remaining coordinates ``x_d .. x_{n-1}``
        (default zeros).

    Raises
    ------
    AliasingError
        If the grid cannot resolve ``m``.
    """
    m = _freq(m)
    return sample_grid(f, x_n, q.dim or m.dim, q, transverse).coefficient(m)


@dataclass(frozen=True)
class GridSamples:
    """Values of an oracle on the periodic quadrature grid at one height."""

    n: int
    x_n: float
    quad: QuadratureSpec
    grid: np.ndarray
    values: np.ndarray

    def coefficient(self, m) -> Multivector:
        """Trapezoidal Fourier coefficient at frequency ``m``."""
        m = _freq(m)
        self.quad.check_nyquist(m)
        if m.dim != self.grid.shape[1]:
            raise DomainError(f"frequency has {m.dim} components, quadrature has dimension {self.grid.shape[1]}")
        phase = np.exp(-2j * np.pi * (self.grid @ np.asarray(m.m)))
        return Multivector(self.n, np.mean(self.values * phase[:, None], axis=0))


def sample_grid(f: FunctionOracle, x_n: float, d: int, q: QuadratureSpec = QuadratureSpec(),
                transverse: Sequence[float] | None = None) -> GridSamples:
    """Evaluate ``f`` on the ``q.points^d`` grid of ``[0,1)^d`` at height ``x_n``."""
    n = f.n
    if d > n:
        raise DomainError("more lattice directions than coordinates")
    grid = _grid(q.points, d)
    pts = np.zeros((len(grid), n + 1))
    pts[:, :d] = grid
    if transverse is not None:
        pts[:, d:n] = np.asarray(transverse, dtype=float)
    pts[:, n] = x_n
    return GridSamples(n, float(x_n), q, grid, f.evaluate(pts))


def monogenic_planewave(m, n: int) -> FunctionOracle:
    """Oracle ``x -> (1 - i e_n m_hat) exp(2 pi i <m, x> - 2 pi |m| x_n)``."""
    m = _freq(m)
    if m.is_zero():
        raise DomainError("m = 0: the plane wave is a constant")
    amp = (1 - 1j * (_en(n) * m.unit_paravector(n))).coeffs
    mv = m.padded(n)
    mu = m.norm

    def func(pts):
        ph = np.exp(2j * np.pi * (pts[:, :n] @ mv) - 2 * np.pi * mu * pts[:, n])
        return ph[:, None] * amp[None, :]

    return FunctionOracle(func, n, batched=True)


@dataclass
class FourierExpansion:
    """``f = a0 + alpha0 x_n^k + sum_m kernel(m, x_n) alpha(m) e(<m, x>)``."""

    n: int
    k: float
    N: int = 1
    a0: Multivector | None = None
    alpha0: Multivector | None = None
    coeffs: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.a0 is None:
            self.a0 = Multivector.zero(self.n)
        if self.alpha0 is None:
            self.alpha0 = Multivector.zero(self.n)
        self.coeffs = {_freq(m).m: v for m, v in self.coeffs.items()}

    def lies_in_lower_algebra(self, tol: float = 1e-12) -> bool:
        return all(c.en_mass() <= tol for c in [self.a0, self.alpha0, *self.coeffs.values()])

    def to_json(self) -> str:
        def blades(mv):
            return [[float(c.real), float(c.imag)] for c in mv.coeffs]

        doc = {
            "n": self.n, "k": self.k, "N": self.N,
            "a0_blades": blades(self.a0), "alpha0_blades": blades(self.alpha0),
            "coeffs": [{"m": list(m), "alpha_blades": blades(v)} for m, v in sorted(self.coeffs.items())],
        }
        return json.dumps(doc, indent=2, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "FourierExpansion":
        doc = json.loads(text)
        n = doc["n"]

        def mv(b):
            return Multivector(n, [complex(re, im) for re, im in b])

        coeffs = {tuple(c["m"]): mv(c["alpha_blades"]) for c in doc["coeffs"]}
        return cls(n=n, k=doc["k"], N=doc.get("N", 1), a0=mv(doc["a0_blades"]),
                   alpha0=mv(doc["alpha0_blades"]), coeffs=coeffs)


def reconstruct(expansion: FourierExpansion, x, k: float | None = None, n: int | None = None) -> Multivector:
    """Evaluate a partial Fourier series at ``x``."""
    n = expansion.n if n is None else n
    k = expansion.k if k is None else k
    xc = np.asarray(getattr(x, "coords", x), dtype=float)
    xn = xc[-1]
    out = expansion.a0 + expansion.alpha0 * xn ** k
    for m, alpha in sorted(expansion.coeffs.items()):
        fv = FrequencyVector(m)
        phase = np.exp(2j * np.pi * float(fv.padded(n) @ xc[:n]))
        out = out + fourier_kernel(fv, xn, n, k) * alpha * phase
    return out


def expansion_oracle(expansion: FourierExpansion) -> FunctionOracle:
    def func(x):
        return reconstruct(expansion, x)

    return FunctionOracle(func, expansion.n)


# ---------------------------------------------------------------------------
# coefficients of the Eisenstein series
# ---------------------------------------------------------------------------

@dataclass
class AlphaEstimate:
    """Coefficient recovered from several heights.

    Attributes
    ----------
    m : FrequencyVector
    alpha : Multivector
        Mean over the accepted samples.  For ``m = 0`` this is the
        constant ``a(0)``.
    alpha0 : Multivector or None
        Coefficient of ``x_n^k`` (``m = 0`` only).
    samples : list of Multivector
        Per-height solutions.
    spread : float
        ``max_j |alpha_j - alpha| / |alpha|`` (absolute if ``alpha = 0``).
        For ``m = 0`` it is the relative residual of the two-term fit.
    residuals : list of float
        Relative least-squares residuals per height.
    dropped : list of float
        Heights rejected as ill-conditioned.
    """

    m: FrequencyVector
    alpha: Multivector
    alpha0: Multivector | None
    samples: list
    spread: float
    residuals: list
    dropped: list

    @property
    def en_mass(self) -> float:
        return self.alpha.en_mass()


def alpha_from_series(spec, m, xn_samples: Sequence[float], quad: QuadratureSpec = QuadratureSpec(8),
                      cond_limit: float = 1e12, grids: Sequence[GridSamples] | None = None) -> AlphaEstimate:
    """Recover ``alpha(m)`` from ``coefficient(m, x_n) = beta(m, x_n) alpha(m)``.

    Each height gives one extracted Fourier coefficient.  It is solved for
    a general element of Cl_n by least squares on the blade coefficients,
    so the ``e_n`` part of the result is a genuine measurement.  Heights
    where the left multiplication by ``beta`` is ill-conditioned are
    dropped.  For ``m = 0`` the fit ``a0 + alpha0 x_n^k`` is returned.

    Parameters
    ----------
    spec : EisensteinSpec
        khyper family with ``p = n - 1`` and ``k < -1``.  Use a periodic
        (lattice) truncation policy; norm-ball truncations are not
        periodic.
    m : FrequencyVector or sequence
    xn_samples : sequence of float
    quad : QuadratureSpec
    grids : sequence of GridSamples, optional
        Precomputed series values, one per height (see :func:`alpha_table`).
    """

    if spec.family != "khyper" or spec.p != spec.n - 1 or not spec.k < -1:
        raise DomainError("alpha_from_series needs the khyper family with p = n-1 and k < -1")
    m = _freq(m)
    n, k = spec.n, spec.k
    if grids is None:
        grids = series_grids(spec, xn_samples, quad)
    coefs = [g.coefficient(m) for g in grids]
    if m.is_zero():
        if len(xn_samples) < 2:
            raise DomainError("the constant-term fit needs at least two heights")
        A = np.column_stack([np.ones(len(xn_samples)), np.asarray(xn_samples, dtype=float) ** k])
        Y = np.array([c.coeffs for c in coefs])
        sol, *_ = np.linalg.lstsq(A, Y, rcond=None)
        res = np.linalg.norm(A @ sol - Y) / max(np.linalg.norm(Y), 1e-300)
        return AlphaEstimate(m, Multivector(n, sol[0]), Multivector(n, sol[1]), [Multivector(n, sol[0])],
                             float(res), [float(res)], [])
    samples, residuals, dropped = [], [], []
    for xn, c in zip(xn_samples, coefs):
        b = beta_closed_form(m, xn, n, k)
        L = get_algebra(n).product(b.coeffs[None, :], np.eye(get_algebra(n).dim)).T
        if np.linalg.cond(L) > cond_limit:
            dropped.append(float(xn))
            continue
        sol, *_ = np.linalg.lstsq(L, c.coeffs, rcond=None)
        samples.append(Multivector(n, sol))
        residuals.append(float(np.linalg.norm(L @ sol - c.coeffs) / max(c.norm(), 1e-300)))
    if not samples:
        raise DomainError("all heights were ill-conditioned")
    mean = Multivector(n, np.mean([s.coeffs for s in samples], axis=0))
    scale = mean.norm()
    dev = max((s - mean).norm() for s in samples)
    spread = dev / scale if scale > 0 else dev
    return AlphaEstimate(m, mean, None, samples, float(spread), residuals, dropped)


def series_grids(spec, xn_samples: Sequence[float], quad: QuadratureSpec = QuadratureSpec(8)) -> list:
    """Grid values of the Eisenstein series at each height."""
    from .eisenstein import eisenstein_oracle

    f = eisenstein_oracle(spec)
    return [sample_grid(f, xn, spec.p + 1, quad) for xn in xn_samples]


def alpha_table(spec, ms, xn_samples: Sequence[float], quad: QuadratureSpec = QuadratureSpec(8)) -> list:
    """:func:`alpha_from_series` for several frequencies, sharing the series evaluations."""
    ms = [_freq(m) for m in ms]
    for m in ms:
        quad.check_nyquist(m)
    grids = series_grids(spec, xn_samples, quad)
    return [alpha_from_series(spec, m, xn_samples, quad, grids=grids) for m in ms]


def write_alpha_table(estimates: Sequence[AlphaEstimate], path) -> None:
    """CSV table ``m, alpha_norm, spread``."""
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["m", "alpha_norm", "spread"])
        for e in estimates:
            w.writerow([str(e.m), f"{e.alpha.norm():.12e}", f"{e.spread:.6e}"])
