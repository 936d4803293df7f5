"""Ahlfors-Vahlen matrices, Moebius action and coset enumeration.

A Vahlen matrix ``M = (a, b; c, d)`` acts on paravectors by
``M<x> = (a x + b)(c x + d)^{-1}``.  The arithmetic groups used here are
generated by ``J = (0, -1; 1, 0)`` and the translations
``T_b = (1, b; 0, 1)`` with ``b`` in ``{1, e1, ..., ep}``.  Their entries
lie in the standard order ``O_p``, the integer span of the blades of
Cl_p.

Left translations change only the top row of a group element, so the
cosets of the translation subgroup are indexed by bottom rows ``(c, d)``.
At level ``N`` the bottom rows are exactly the rows with
``c = 0 (mod N)`` and ``d = 1 (mod N)``.

Three truncation policies are supported.

* ``norm`` enumerates every bottom row with ``|c|^2 + |d|^2 <= B``.
  It is a direct lattice search with an exact Euclidean-descent
  certificate of group membership, so the ball is complete.
* ``words`` runs a breadth-first search over words of length
  ``<= L`` in the generators.
* ``lattice`` enumerates translation classes ``(c, r mod Z^{p+1})``
  with ``r = c^{-1} d`` and ``|c|^2 <= C``.  The Eisenstein module sums
  each class over the full translation lattice, which gives an exactly
  periodic truncation.
"""
from __future__ import annotations

import csv
import functools
import math
import os
from dataclasses import dataclass
from pathlib import Path
from typing import Iterator

import numpy as np

from .clifford import (
    Multivector,
    Paravector,
    UpperHalfPoint,
    blade_sign,
    get_algebra,
    popcount,
)
from .errors import DimensionError, DomainError, SingularError

CACHE_ENV = "HYPERMONOGENIC_CACHE_DIR"


# ---------------------------------------------------------------------------
# Vahlen matrices
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class VahlenMatrix:
    """2x2 matrix ``(a, b; c, d)`` of multivectors from one algebra."""

    a: Multivector
    b: Multivector
    c: Multivector
    d: Multivector

    def __post_init__(self):
        ns = {m.n for m in (self.a, self.b, self.c, self.d)}
        if len(ns) != 1:
            raise DimensionError(f"entries belong to different algebras: {sorted(ns)}")

    @property
    def n(self) -> int:
        return self.a.n

    @classmethod
    def from_entries(cls, n: int, a, b, c, d) -> "VahlenMatrix":
        """Build from multivectors or scalars."""

        def conv(v):
            return v if isinstance(v, Multivector) else Multivector.scalar(n, v)

        return cls(conv(a), conv(b), conv(c), conv(d))

    @classmethod
    def identity(cls, n: int) -> "VahlenMatrix":
        return cls.from_entries(n, 1, 0, 0, 1)

    @classmethod
    def inversion(cls, n: int) -> "VahlenMatrix":
        """``J = (0, -1; 1, 0)``."""
        return cls.from_entries(n, 0, -1, 1, 0)

    @classmethod
    def translation(cls, b: Multivector) -> "VahlenMatrix":
        """``T_b = (1, b; 0, 1)``."""
        return cls.from_entries(b.n, 1, b, 0, 1)

    def __matmul__(self, other: "VahlenMatrix") -> "VahlenMatrix":
        if not isinstance(other, VahlenMatrix):
            return NotImplemented
        return VahlenMatrix(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def __neg__(self) -> "VahlenMatrix":
        return VahlenMatrix(-self.a, -self.b, -self.c, -self.d)

    def pseudo_determinant(self) -> Multivector:
        """``a rev(d) - b rev(c)``."""
        return self.a * self.d.rev() - self.b * self.c.rev()

    def inverse(self) -> "VahlenMatrix":
        """Inverse ``(rev d, -rev b; -rev c, rev a) / delta`` for real pseudo-determinant delta."""
        delta = self.pseudo_determinant()
        dv = delta.scalar_part
        if abs(dv) < 1e-14 or np.max(np.abs(delta.coeffs[1:]), initial=0.0) > 1e-10 * max(1.0, abs(dv)):
            raise SingularError("pseudo-determinant is not a nonzero scalar")
        return VahlenMatrix(self.d.rev() / dv, -self.b.rev() / dv, -self.c.rev() / dv, self.a.rev() / dv)

    @property
    def bottom_row(self) -> tuple[Multivector, Multivector]:
        return self.c, self.d

    def allclose(self, other: "VahlenMatrix", atol: float = 1e-12) -> bool:
        return all(
            x.allclose(y, atol) for x, y in zip((self.a, self.b, self.c, self.d), (other.a, other.b, other.c, other.d))
        )


def _is_clifford_group_element(x: Multivector, tol: float) -> bool:
    nn = (x * x.conj()).coeffs
    return bool(np.max(np.abs(nn[1:]), initial=0.0) <= tol * max(1.0, abs(nn[0])))


def check_vahlen_conditions(M: VahlenMatrix, tol: float = 1e-10) -> bool:
    """Check the numerically decidable Ahlfors-Vahlen conditions.

    Verifies that the entries are real, that nonzero entries are
    Clifford-group elements (``x conj(x)`` is a scalar), that the
    pseudo-determinant is a nonzero real scalar, and that ``a^{-1} b`` and
    ``c^{-1} d`` are paravectors whenever defined.
    """
    entries = (M.a, M.b, M.c, M.d)
    if any(not e.is_real(tol * max(1.0, e.norm())) for e in entries):
        return False
    for e in entries:
        if e.norm() > 0 and not _is_clifford_group_element(e, tol):
            return False
    delta = M.pseudo_determinant()
    dv = delta.scalar_part
    if abs(dv) <= tol or np.max(np.abs(delta.coeffs[1:]), initial=0.0) > tol * max(1.0, abs(dv)):
        return False
    for num, den in ((M.b, M.a), (M.d, M.c)):
        if den.norm() <= tol:
            continue
        ratio = den.inverse() * num
        if not ratio.is_paravector(tol):
            return False
    return True


def mobius_apply(M: VahlenMatrix, x):
    """Moebius action ``(a x + b)(c x + d)^{-1}``.

    Parameters
    ----------
    M : VahlenMatrix
    x : UpperHalfPoint, Paravector or coordinate sequence

    Returns
    -------
    UpperHalfPoint or Paravector
        An :class:`UpperHalfPoint` when ``x`` was one (or plain
        coordinates), a :class:`Paravector` for general paravector input.
    """
    upper = not isinstance(x, Paravector) or isinstance(x, UpperHalfPoint)
    pt = x if isinstance(x, Paravector) else Paravector(x)
    if pt.n != M.n:
        raise DimensionError(f"point has n={pt.n}, matrix has n={M.n}")
    xv = pt.to_multivector()
    den = M.c * xv + M.d
    if den.norm() < 1e-14:
        raise SingularError("c x + d vanishes: singular Moebius transform")
    num = M.a * xv + M.b
    y = num * den.inverse()
    if not y.is_paravector(1e-9):
        raise DomainError("image is not a paravector; matrix violates the Vahlen conditions")
    coords = y.coeffs[y.algebra.paravector_blades].real
    return UpperHalfPoint(coords) if upper else Paravector(coords)


def automorphy_factor(M: VahlenMatrix, x, k: float, n: int | None = None) -> Multivector:
    """``j_k(M, x) = conj(c x + d) / |c x + d|^{n + 1 - k}``."""
    n = M.n if n is None else n
    if n != M.n:
        raise DimensionError(f"n={n} does not match matrix dimension {M.n}")
    pt = x if isinstance(x, Paravector) else Paravector(x)
    y = M.c * pt.to_multivector() + M.d
    r = y.norm()
    if r < 1e-14:
        raise SingularError("c x + d vanishes")
    return y.conj() / r ** (n + 1 - k)


def generators(p: int, n: int) -> list[VahlenMatrix]:
    """``[J, T_1, T_e1, ..., T_ep]`` followed by their inverses."""
    if not 0 <= p <= n - 1:
        raise DimensionError(f"need 0 <= p <= n-1, got p={p}, n={n}")
    J = VahlenMatrix.inversion(n)
    units = [Multivector.scalar(n)] + [Multivector.basis(n, i) for i in range(1, p + 1)]
    forward = [J] + [VahlenMatrix.translation(u) for u in units]
    backward = [-J] + [VahlenMatrix.translation(-u) for u in units]
    return forward + backward


def generator_names(p: int) -> list[str]:
    names = ["J", "T1"] + [f"Te{i}" for i in range(1, p + 1)]
    return names + [nm + "^-1" for nm in names]


# ---------------------------------------------------------------------------
# lattices, policies, coset representatives
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LatticeSpec:
    """Standard order ``O_p`` in Cl_n with its period lattice and level ``N``."""

    n: int
    p: int
    N: int = 1

    def __post_init__(self):
        if not 0 <= self.p <= self.n - 1:
            raise DimensionError(f"need 0 <= p <= n-1, got p={self.p}, n={self.n}")
        if self.N < 1:
            raise ValueError(f"level N must be >= 1, got {self.N}")

    @property
    def rank(self) -> int:
        return self.p + 1

    @property
    def basis(self) -> np.ndarray:
        """Rows are the lattice vectors ``1, e1, ..., ep`` as paravector coordinates."""
        return np.eye(self.p + 1, self.n + 1)

    @property
    def dual_basis(self) -> np.ndarray:
        return self.basis  # orthonormal, hence self-dual

    @property
    def translation_basis(self) -> np.ndarray:
        return self.N * self.basis

    @property
    def order_dim(self) -> int:
        """Rank of the order ``O_p`` (blades of Cl_p)."""
        return 1 << self.p


@dataclass(frozen=True)
class TruncationPolicy:
    """How far a coset enumeration reaches.

    Exactly one of ``norm_bound`` (``|c|^2 + |d|^2 <= B``),
    ``word_length`` (words of length ``<= L``) or ``class_bound``
    (translation classes with ``|c|^2 <= C``) must be set.  For the
    class policy, ``window_radius`` and ``window_width`` describe the
    smooth cut-off used for the full translation sums.
    """

    norm_bound: float | None = None
    word_length: int | None = None
    class_bound: float | None = None
    window_radius: float = 4.0
    window_width: float = 1.0

    def __post_init__(self):
        given = [v is not None for v in (self.norm_bound, self.word_length, self.class_bound)]
        if sum(given) != 1:
            raise ValueError("set exactly one of norm_bound, word_length, class_bound")
        if self.norm_bound is not None and self.norm_bound < 1:
            raise ValueError("norm_bound must be >= 1 (the identity coset has norm 1)")
        if self.word_length is not None and self.word_length < 0:
            raise ValueError("word_length must be >= 0")
        if self.class_bound is not None and self.class_bound < 0:
            raise ValueError("class_bound must be >= 0")
        if self.window_radius <= 0 or self.window_width <= 0:
            raise ValueError("window parameters must be positive")

    @classmethod
    def norm(cls, B: float) -> "TruncationPolicy":
        return cls(norm_bound=float(B))

    @classmethod
    def words(cls, L: int) -> "TruncationPolicy":
        return cls(word_length=int(L))

    @classmethod
    def lattice(cls, C: float, radius: float = 4.0, width: float = 1.0) -> "TruncationPolicy":
        return cls(class_bound=float(C), window_radius=float(radius), window_width=float(width))

    @property
    def kind(self) -> str:
        if self.norm_bound is not None:
            return "norm"
        if self.word_length is not None:
            return "words"
        return "lattice"

    @property
    def key(self) -> str:
        if self.kind == "norm":
            return f"B{self.norm_bound:g}"
        if self.kind == "words":
            return f"L{self.word_length}"
        return f"C{self.class_bound:g}"


@dataclass(frozen=True)
class CosetRep:
    """Bottom row ``(c, d)`` of a coset with cached ``nu = conj(c)/|c|^{n+1-k}``."""

    c: Multivector
    d: Multivector
    nu: Multivector | None
    norm: float


# integer arithmetic in the order O_p --------------------------------------

@functools.lru_cache(maxsize=None)
def _order_tables(p: int):
    dim = 1 << p
    sign = np.array([[blade_sign(a, b) for b in range(dim)] for a in range(dim)], dtype=np.int64)
    xor = np.arange(dim)[:, None] ^ np.arange(dim)[None, :]
    grades = np.array([popcount(m) for m in range(dim)])
    conj = np.where((grades * (grades + 1) // 2) % 2, -1, 1).astype(np.int64)
    para = np.zeros(dim, dtype=bool)
    para[0] = True
    for i in range(p):
        para[1 << i] = True
    return sign, xor, conj, para


def _order_product(x: np.ndarray, y: np.ndarray, p: int) -> np.ndarray:
    """Product in Cl_p of integer coefficient arrays ``(..., 2**p)``."""
    sign, xor, _, _ = _order_tables(p)
    dim = 1 << p
    shape = np.broadcast_shapes(x.shape, y.shape)
    out = np.zeros(shape, dtype=np.result_type(x, y))
    for a in range(dim):
        for b in range(dim):
            out[..., xor[a, b]] += sign[a, b] * x[..., a] * y[..., b]
    return out


def _order_conj(x: np.ndarray, p: int) -> np.ndarray:
    return x * _order_tables(p)[2]


def descent_certificate(c: np.ndarray, d: np.ndarray, p: int) -> np.ndarray:
    """Decide which integer rows ``(c, d)`` are bottom rows of group elements.

    The rows are right-multiplied by ``T_beta`` and then ``J``, with ``beta``
    the nearest lattice paravector to ``-c^{-1} d``.  This is Euclidean
    descent.  For ``p <= 2`` the covering radius of ``Z^{p+1}`` is below 1,
    so ``|c|`` strictly decreases until ``c = 0``.  The row is a bottom row
    iff the final ``d`` is a unit.  Rows must satisfy the paravector
    condition on ``conj(c) d``.
    """
    if p > 2:
        raise NotImplementedError("descent certificate requires p <= 2 (Euclidean order)")
    c = np.array(c, dtype=np.int64, copy=True)
    d = np.array(d, dtype=np.int64, copy=True)
    para = _order_tables(p)[3]
    for _ in range(200):
        active = np.any(c != 0, axis=1)
        if not active.any():
            break
        ca, da = c[active], d[active]
        den = np.sum(ca * ca, axis=1)[:, None]
        num = _order_product(_order_conj(ca, p), da, p)
        beta = -np.floor_divide(2 * num + den, 2 * den)
        beta[:, ~para] = 0
        new_c = da + _order_product(ca, beta, p)
        c[active] = new_c
        d[active] = -ca
    else:  # pragma: no cover - descent is strictly norm-decreasing
        raise RuntimeError("Euclidean descent did not terminate")
    return np.sum(d * d, axis=1) == 1


def _shifted_lattice(dim: int, N: int, offset: int, bound: float) -> np.ndarray:
    """Integer vectors ``(offset, 0, ...) + N z`` with squared norm ``<= bound``."""
    r = math.isqrt(int(math.floor(bound))) + 1
    ranges = []
    for i in range(dim):
        o = offset if i == 0 else 0
        lo = -((r + o) // N) - 1
        hi = (r - o) // N + 1
        ranges.append(o + N * np.arange(lo, hi + 1))
    grid = np.stack(np.meshgrid(*ranges, indexing="ij"), axis=-1).reshape(-1, dim)
    return grid[np.sum(grid * grid, axis=1) <= bound]


def _paravector_condition(c: np.ndarray, d: np.ndarray, p: int) -> np.ndarray:
    """``conj(c) d`` has no component outside the paravector blades."""
    para = _order_tables(p)[3]
    if para.all():
        return np.ones(np.broadcast_shapes(c.shape, d.shape)[0], dtype=bool)
    prod = _order_product(_order_conj(c, p), d, p)
    return np.all(prod[..., ~para] == 0, axis=-1)


def _sort_rows(c: np.ndarray, d: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    norms = np.sum(c * c, axis=1) + np.sum(d * d, axis=1)
    keys = [d[:, j] for j in range(d.shape[1] - 1, -1, -1)] + [c[:, j] for j in range(c.shape[1] - 1, -1, -1)]
    order = np.lexsort(keys + [norms])
    return c[order], d[order], norms[order]


def _enumerate_norm_ball(p: int, N: int, B: float):
    dim = 1 << p
    cs = _shifted_lattice(dim, N, 0, B)
    ds = _shifted_lattice(dim, N, 1, B)
    d_norm = np.sum(ds * ds, axis=1)
    order = np.argsort(d_norm, kind="stable")
    ds, d_norm = ds[order], d_norm[order]
    rows_c, rows_d = [], []
    for c in cs:
        cn = int(c @ c)
        m = int(np.searchsorted(d_norm, B - cn, side="right"))
        if m == 0:
            continue
        cand = ds[:m]
        if cn == 0:
            keep = d_norm[:m] == 1  # c = 0 forces a unit d
        else:
            keep = _paravector_condition(c[None, :], cand, p)
        if keep.any():
            rows_d.append(cand[keep])
            rows_c.append(np.broadcast_to(c, (int(keep.sum()), dim)))
    c_all = np.concatenate(rows_c).astype(np.int64)
    d_all = np.concatenate(rows_d).astype(np.int64)
    ok = descent_certificate(c_all, d_all, p)
    return _sort_rows(c_all[ok], d_all[ok])


def _enumerate_words(p: int, N: int, L: int):
    dim = 1 << p
    steps = [np.zeros(dim, dtype=np.int64)]
    for i in range(p + 1):
        v = np.zeros(dim, dtype=np.int64)
        v[0 if i == 0 else 1 << (i - 1)] = 1
        steps.append(v)
    translations = steps[1:] + [-s for s in steps[1:]]
    start = (tuple([0] * dim), tuple([1] + [0] * (dim - 1)))
    seen = {start}
    frontier = [start]
    for _ in range(L):
        nxt = []
        for c, d in frontier:
            ca, da = np.array(c), np.array(d)
            images = [(da, -ca), (-da, ca)]
            for b in translations:
                images.append((ca, _order_product(ca, b, p) + da))
            for ci, di in images:
                key = (tuple(int(v) for v in ci), tuple(int(v) for v in di))
                if key not in seen:
                    seen.add(key)
                    nxt.append(key)
        frontier = nxt
    c_all = np.array([k[0] for k in seen], dtype=np.int64).reshape(-1, dim)
    d_all = np.array([k[1] for k in seen], dtype=np.int64).reshape(-1, dim)
    one = np.zeros(dim, dtype=np.int64)
    one[0] = 1
    ok = np.all(c_all % N == 0, axis=1) & np.all((d_all - one) % N == 0, axis=1)
    return _sort_rows(c_all[ok], d_all[ok])


def _enumerate_classes(p: int, N: int, C: float):
    """One representative per class ``(c, r mod Z^{p+1})`` with ``0 < |c|^2 <= C``.

    The representative has ``r = c^{-1} d`` in the half-open cell
    ``[-1/2, 1/2)^{p+1}``.  Since ``c = 0 (mod N)``, ``d -> d + c b``
    permutes level-``N`` rows within a class.
    """
    dim = 1 << p
    para = _order_tables(p)[3]
    cs = _shifted_lattice(dim, N, 0, C)
    cs = cs[np.sum(cs * cs, axis=1) > 0]
    rows_c, rows_d = [], []
    for c in cs:
        cn = int(c @ c)
        cand = _shifted_lattice(dim, N, 1, cn * (p + 1) / 4.0)
        if not len(cand):
            continue
        num = _order_product(_order_conj(c[None, :], p), cand, p)
        keep = np.all(num[:, ~para] == 0, axis=1)
        keep &= np.all((2 * num[:, para] >= -cn) & (2 * num[:, para] < cn), axis=1)
        if keep.any():
            rows_d.append(cand[keep])
            rows_c.append(np.broadcast_to(c, (int(keep.sum()), dim)))
    if not rows_c:
        empty = np.zeros((0, dim), dtype=np.int64)
        return empty, empty, np.zeros(0, dtype=np.int64)
    c_all = np.concatenate(rows_c).astype(np.int64)
    d_all = np.concatenate(rows_d).astype(np.int64)
    ok = descent_certificate(c_all, d_all, p)
    return _sort_rows(c_all[ok], d_all[ok])


class CosetTable:
    """Sorted integer bottom rows of an enumeration.

    Attributes
    ----------
    spec : LatticeSpec
    policy : TruncationPolicy
    c, d : ndarray of int64, shape (K, 2**p)
        Coefficients in the blades of Cl_p.
    norms : ndarray of int64, shape (K,)
        ``|c|^2 + |d|^2``; rows are sorted by it, then lexicographically.
    """

    def __init__(self, spec: LatticeSpec, policy: TruncationPolicy, c, d):
        c = np.asarray(c, dtype=np.int64).reshape(-1, spec.order_dim)
        d = np.asarray(d, dtype=np.int64).reshape(-1, spec.order_dim)
        self.spec = spec
        self.policy = policy
        self.c, self.d, self.norms = _sort_rows(c, d)
        self._embedded = None

    def __len__(self) -> int:
        return len(self.c)

    def embedded(self) -> tuple[np.ndarray, np.ndarray]:
        """Rows as float coefficient arrays of Cl_n, shape ``(K, 2**n)`` (read-only, cached)."""
        if self._embedded is None:
            dim = 1 << self.spec.n
            C = np.zeros((len(self), dim))
            D = np.zeros((len(self), dim))
            C[:, : self.spec.order_dim] = self.c
            D[:, : self.spec.order_dim] = self.d
            C.setflags(write=False)
            D.setflags(write=False)
            self._embedded = (C, D)
        return self._embedded

    def nu(self, k: float) -> np.ndarray:
        """``conj(c)/|c|^{n+1-k}`` per row (zero where ``c = 0``), shape ``(K, 2**n)``."""
        alg = get_algebra(self.spec.n)
        C, _ = self.embedded()
        cn = np.sum(C * C, axis=1)
        out = np.zeros(C.shape)
        nz = cn > 0
        out[nz] = (C[nz] * alg.conjugation_signs) / cn[nz, None] ** ((self.spec.n + 1 - k) / 2)
        return out

    def r(self) -> np.ndarray:
        """``r = c^{-1} d`` as paravector coordinates in ``R^{p+1}`` (rows with ``c != 0``)."""
        p = self.spec.p
        cn = np.sum(self.c * self.c, axis=1)
        nz = cn > 0
        num = _order_product(_order_conj(self.c[nz], p), self.d[nz], p)
        para = np.flatnonzero(_order_tables(p)[3])
        return num[:, para] / cn[nz, None]

    def keys(self) -> dict:
        """Map from ``(c, d)`` integer tuples to row indices."""
        return {(tuple(c.tolist()), tuple(d.tolist())): i for i, (c, d) in enumerate(zip(self.c, self.d))}

    def reps(self, k: float) -> Iterator[CosetRep]:
        n = self.spec.n
        C, D = self.embedded()
        nus = self.nu(k)
        for i in range(len(self)):
            has_c = bool(np.any(self.c[i]))
            yield CosetRep(
                c=Multivector(n, C[i]),
                d=Multivector(n, D[i]),
                nu=Multivector(n, nus[i]) if has_c else None,
                norm=float(self.norms[i]),
            )

    # -- CSV cache -----------------------------------------------------
    def to_csv(self, path) -> None:
        """Write ``c_blades, d_blades, norm`` (semicolon-separated Cl_n coefficients)."""
        C, D = self.embedded()
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["c_blades", "d_blades", "norm"])
            for ci, di, nm in zip(C.astype(np.int64), D.astype(np.int64), self.norms):
                w.writerow([";".join(map(str, ci)), ";".join(map(str, di)), int(nm)])

    @classmethod
    def from_csv(cls, path, spec: LatticeSpec, policy: TruncationPolicy) -> "CosetTable":
        cs, ds = [], []
        m = spec.order_dim
        with open(path, newline="") as fh:
            for row in csv.DictReader(fh):
                cs.append([int(v) for v in row["c_blades"].split(";")][:m])
                ds.append([int(v) for v in row["d_blades"].split(";")][:m])
        return cls(spec, policy, np.array(cs).reshape(-1, m), np.array(ds).reshape(-1, m))


def cache_path(spec: LatticeSpec, policy: TruncationPolicy, directory=None) -> Path | None:
    """CSV cache file for an enumeration, or ``None`` when caching is off."""
    directory = directory or os.environ.get(CACHE_ENV)
    if not directory:
        return None
    return Path(directory) / f"cosets_n{spec.n}_p{spec.p}_N{spec.N}_{policy.key}.csv"


def _structural_policy(policy: TruncationPolicy) -> TruncationPolicy:
    # window parameters do not influence which rows are enumerated
    if policy.kind == "lattice":
        return TruncationPolicy.lattice(policy.class_bound)
    return policy


@functools.lru_cache(maxsize=32)
def _coset_table_cached(spec: LatticeSpec, policy: TruncationPolicy) -> CosetTable:
    path = cache_path(spec, policy)
    if path is not None and path.exists():
        return CosetTable.from_csv(path, spec, policy)
    if policy.kind == "norm":
        if spec.p > 2:
            raise NotImplementedError("norm-bound enumeration supports p <= 2; use a word-length policy")
        c, d, _ = _enumerate_norm_ball(spec.p, spec.N, policy.norm_bound)
    elif policy.kind == "words":
        c, d, _ = _enumerate_words(spec.p, spec.N, policy.word_length)
    else:
        if spec.p > 2:
            raise NotImplementedError("class enumeration supports p <= 2")
        c, d, _ = _enumerate_classes(spec.p, spec.N, policy.class_bound)
    table = CosetTable(spec, policy, c, d)
    if path is not None:
        path.parent.mkdir(parents=True, exist_ok=True)
        tmp = path.with_suffix(".tmp")
        table.to_csv(tmp)
        os.replace(tmp, path)
    return table


def coset_table(spec: LatticeSpec, policy: TruncationPolicy) -> CosetTable:
    """Enumerate (or load from cache) the bottom rows selected by ``policy``."""
    return _coset_table_cached(spec, _structural_policy(policy))


def enumerate_cosets(spec: LatticeSpec, k: float, policy: TruncationPolicy) -> Iterator[CosetRep]:
    """Stream coset representatives sorted by ``|c|^2 + |d|^2``.

    Examples
    --------
    >>> reps = list(enumerate_cosets(LatticeSpec(2, 0, 1), 0.0, TruncationPolicy.words(1)))
    >>> [(r.c.scalar_part.real, r.d.scalar_part.real) for r in reps][:2]
    [(-1.0, 0.0), (0.0, 1.0)]
    """
    return coset_table(spec, policy).reps(k)


def congruence_membership(M: VahlenMatrix, spec: LatticeSpec, tol: float = 1e-9) -> bool:
    """True iff ``a - 1, b, c, d - 1`` have integer coefficients divisible by ``N``."""
    if M.n != spec.n:
        raise DimensionError(f"matrix has n={M.n}, lattice has n={spec.n}")
    for e in (M.a - 1, M.b, M.c, M.d - 1):
        v = e.coeffs
        if np.any(np.abs(v.imag) > tol):
            return False
        r = np.round(v.real)
        if np.any(np.abs(v.real - r) > tol):
            return False
        if np.any(r.astype(np.int64) % spec.N != 0):
            return False
    return True


def group_element_from_row(c, d, n: int) -> VahlenMatrix:
    """Reconstruct a group element with integer bottom row ``(c, d)``.

    ``c`` and ``d`` are Cl_p coefficient sequences.  The element is built
    by undoing the Euclidean descent with steps ``T_beta J`` and then
    putting the diagonal unit matrix ``diag(rev(u)^{-1}, u)`` in front,
    where ``(0, u)`` is the bottom row the descent ends in.  Its top row
    is not reduced.
    """
    c = np.array(c, dtype=np.int64)
    d = np.array(d, dtype=np.int64)
    dim = c.size
    p = dim.bit_length() - 1
    para = _order_tables(p)[3]
    # (c, d) W = (0, u)  =>  (c, d) = (0, u) W^{-1}
    W = VahlenMatrix.identity(n)

    def emb(v):
        full = np.zeros(1 << n)
        full[:dim] = v
        return Multivector(n, full)

    for _ in range(200):
        if not c.any():
            break
        den = int(c @ c)
        num = _order_product(_order_conj(c, p), d, p)
        beta = -np.floor_divide(2 * num + den, 2 * den)
        beta[~para] = 0
        step = VahlenMatrix.translation(emb(beta)) @ VahlenMatrix.inversion(n)
        W = W @ step
        c, d = d + _order_product(c, beta, p), -c
    if int(d @ d) != 1:
        raise DomainError("row is not the bottom row of a group element")
    u = emb(d)
    unit = VahlenMatrix(u.rev().inverse(), Multivector.zero(n), Multivector.zero(n), u)
    return unit @ W.inverse()
