"""Complexified Clifford algebra Cl_n with negative-definite generators.

Multivectors are stored densely: a coefficient array of length ``2**n``
indexed by blade bitmasks.  Bit ``i - 1`` of a mask is set when the
generator ``e_i`` occurs in the blade, and blades are kept in increasing
index order, so ``0b101`` is ``e1 e3``.  Every generator squares to -1
and distinct generators anticommute.

Besides the user-facing :class:`Multivector` value type the module
exposes :class:`Algebra`, whose ``product`` method works on raw
coefficient arrays of shape ``(..., 2**n)``.  The numerical modules use it
for vectorised evaluation over many points or cosets.
"""
from __future__ import annotations

import functools
import re
from typing import Iterable, Sequence

import numpy as np

from .errors import DimensionError, DomainError, SingularError

MAX_DIMENSION = 6

INVOLUTIONS = ("conjugation", "reversion", "main", "star")


def popcount(x: int) -> int:
    return bin(x).count("1")


def blade_sign(a: int, b: int) -> int:
    """Sign of the product of canonical blades ``e_a e_b``.

    The sign collects one factor -1 per transposition needed to sort the
    concatenated generator list, and one factor -1 for every generator
    shared by both blades (``e_i**2 = -1``).
    """
    swaps = 0
    shifted = a >> 1
    while shifted:
        swaps += popcount(shifted & b)
        shifted >>= 1
    swaps += popcount(a & b)
    return -1 if swaps & 1 else 1


class Algebra:
    """Signature data and vectorised kernels for Cl_n.

    Parameters
    ----------
    n : int
        Number of anticommuting generators, ``1 <= n <= 6``.

    Notes
    -----
    Use :func:`get_algebra` to obtain shared, cached instances.
    """

    def __init__(self, n: int):
        n = int(n)
        if not 1 <= n <= MAX_DIMENSION:
            raise DimensionError(f"n must lie in [1, {MAX_DIMENSION}], got {n}")
        self.n = n
        self.dim = 1 << n
        masks = np.arange(self.dim)
        self.grades = np.array([popcount(int(m)) for m in masks])
        self.sign_table = np.array(
            [[blade_sign(a, b) for b in range(self.dim)] for a in range(self.dim)],
            dtype=np.int8,
        )
        self.xor_table = masks[:, None] ^ masks[None, :]
        # gather form of the product: out[c] = sum_a A[a] * S[a, a^c] * B[a^c]
        self._gsign = np.take_along_axis(self.sign_table, self.xor_table, axis=1).astype(float)
        g = self.grades
        self.reversion_signs = np.where((g * (g - 1) // 2) % 2, -1, 1)
        self.main_signs = np.where(g % 2, -1, 1)
        self.conjugation_signs = self.reversion_signs * self.main_signs
        self.en_bit = 1 << (n - 1)
        self.star_signs = np.where(masks & self.en_bit, -1, 1)
        self.paravector_blades = np.array([0] + [1 << i for i in range(n)])
        self.lower_blades = masks[masks < self.en_bit]  # Cl_{n-1} sub-algebra

    def __repr__(self) -> str:
        return f"Algebra(n={self.n})"

    def signs(self, kind: str) -> np.ndarray:
        """Blade-wise sign vector of an involution."""
        try:
            return {
                "conjugation": self.conjugation_signs,
                "reversion": self.reversion_signs,
                "main": self.main_signs,
                "star": self.star_signs,
            }[kind]
        except KeyError:
            raise ValueError(f"unknown involution {kind!r}; expected one of {INVOLUTIONS}") from None

    def product(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        """Geometric product of coefficient arrays, broadcasting over leading axes."""
        a = np.asarray(a)
        b = np.asarray(b)
        shape = np.broadcast_shapes(a.shape[:-1], b.shape[:-1]) + (self.dim,)
        out = np.zeros(shape, dtype=np.result_type(a, b, float))
        for blade in range(self.dim):
            col = a[..., blade]
            if not np.any(col):
                continue
            out += col[..., None] * self._gsign[blade] * b[..., self.xor_table[blade]]
        return out

    def embed_paravector(self, coords: np.ndarray) -> np.ndarray:
        """Map coordinates ``(..., n+1)`` to coefficient arrays ``(..., 2**n)``."""
        coords = np.asarray(coords)
        out = np.zeros(coords.shape[:-1] + (self.dim,), dtype=coords.dtype)
        out[..., self.paravector_blades] = coords
        return out


@functools.lru_cache(maxsize=None)
def get_algebra(n: int) -> Algebra:
    """Cached :class:`Algebra` instance for dimension ``n``."""
    return Algebra(n)


def _as_algebra(algebra) -> Algebra:
    return algebra if isinstance(algebra, Algebra) else get_algebra(int(algebra))


class Multivector:
    """Immutable element of the complexified Clifford algebra Cl_n.

    Parameters
    ----------
    algebra : Algebra or int
        The algebra, or its dimension ``n``.
    coeffs : array_like
        ``2**n`` blade coefficients (complex or real).
    """

    __slots__ = ("algebra", "coeffs")

    def __init__(self, algebra, coeffs):
        alg = _as_algebra(algebra)
        arr = np.array(coeffs, dtype=complex).reshape(-1)
        if arr.shape != (alg.dim,):
            raise DimensionError(f"expected {alg.dim} coefficients for n={alg.n}, got {arr.size}")
        arr.setflags(write=False)
        object.__setattr__(self, "algebra", alg)
        object.__setattr__(self, "coeffs", arr)

    def __setattr__(self, name, value):
        raise AttributeError("Multivector is immutable")

    # -- constructors -------------------------------------------------
    @classmethod
    def zero(cls, algebra) -> "Multivector":
        alg = _as_algebra(algebra)
        return cls(alg, np.zeros(alg.dim))

    @classmethod
    def scalar(cls, algebra, value: complex = 1.0) -> "Multivector":
        alg = _as_algebra(algebra)
        c = np.zeros(alg.dim, dtype=complex)
        c[0] = value
        return cls(alg, c)

    @classmethod
    def blade(cls, algebra, mask: int, value: complex = 1.0) -> "Multivector":
        alg = _as_algebra(algebra)
        if not 0 <= mask < alg.dim:
            raise DimensionError(f"blade mask {mask} out of range for n={alg.n}")
        c = np.zeros(alg.dim, dtype=complex)
        c[mask] = value
        return cls(alg, c)

    @classmethod
    def basis(cls, algebra, *indices: int) -> "Multivector":
        """Product ``e_{i1} e_{i2} ...`` of generators (1-based, any order)."""
        alg = _as_algebra(algebra)
        out = cls.scalar(alg)
        for i in indices:
            if not 1 <= i <= alg.n:
                raise DimensionError(f"generator index {i} out of range for n={alg.n}")
            out = out * cls.blade(alg, 1 << (i - 1))
        return out

    @classmethod
    def from_paravector(cls, algebra, coords: Sequence[float]) -> "Multivector":
        alg = _as_algebra(algebra)
        coords = np.asarray(coords, dtype=complex)
        if coords.shape != (alg.n + 1,):
            raise DimensionError(f"paravector needs {alg.n + 1} coordinates")
        return cls(alg, alg.embed_paravector(coords))

    # -- basic properties ---------------------------------------------
    @property
    def n(self) -> int:
        return self.algebra.n

    @property
    def scalar_part(self) -> complex:
        return complex(self.coeffs[0])

    def norm(self) -> float:
        """Euclidean norm of the coefficient vector."""
        return float(np.linalg.norm(self.coeffs))

    def is_real(self, tol: float = 0.0) -> bool:
        return bool(np.all(np.abs(self.coeffs.imag) <= tol))

    def is_paravector(self, tol: float = 1e-12) -> bool:
        mask = np.ones(self.algebra.dim, dtype=bool)
        mask[self.algebra.paravector_blades] = False
        scale = max(1.0, self.norm())
        return bool(np.all(np.abs(self.coeffs[mask]) <= tol * scale))

    def en_mass(self) -> float:
        """Norm of the coefficients on blades containing ``e_n``."""
        alg = self.algebra
        return float(np.linalg.norm(self.coeffs[np.arange(alg.dim) & alg.en_bit != 0]))

    # -- algebra ------------------------------------------------------
    def _check(self, other: "Multivector") -> None:
        if other.algebra.n != self.algebra.n:
            raise DimensionError(f"signature mismatch: n={self.n} vs n={other.n}")

    def _coerce(self, other):
        if isinstance(other, Multivector):
            self._check(other)
            return other
        if np.isscalar(other):
            return Multivector.scalar(self.algebra, other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return Multivector(self.algebra, self.coeffs + other.coeffs)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return Multivector(self.algebra, self.coeffs - other.coeffs)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return Multivector(self.algebra, other.coeffs - self.coeffs)

    def __neg__(self):
        return Multivector(self.algebra, -self.coeffs)

    def __mul__(self, other):
        if isinstance(other, Multivector):
            return geometric_product(self, other)
        if np.isscalar(other):
            return Multivector(self.algebra, self.coeffs * other)
        return NotImplemented

    def __rmul__(self, other):
        if np.isscalar(other):
            return Multivector(self.algebra, other * self.coeffs)
        return NotImplemented

    def __truediv__(self, other):
        if np.isscalar(other):
            return Multivector(self.algebra, self.coeffs / other)
        return NotImplemented

    def __eq__(self, other):
        if not isinstance(other, Multivector):
            return NotImplemented
        return self.n == other.n and bool(np.array_equal(self.coeffs, other.coeffs))

    def __hash__(self):
        return hash((self.n, self.coeffs.tobytes()))

    def allclose(self, other: "Multivector", atol: float = 1e-12) -> bool:
        self._check(other)
        return bool(np.max(np.abs(self.coeffs - other.coeffs), initial=0.0) <= atol)

    # -- involutions and splits ----------------------------------------
    def involution(self, kind: str) -> "Multivector":
        return Multivector(self.algebra, self.coeffs * self.algebra.signs(kind))

    def conj(self) -> "Multivector":
        return self.involution("conjugation")

    def rev(self) -> "Multivector":
        return self.involution("reversion")

    def main(self) -> "Multivector":
        return self.involution("main")

    def star(self) -> "Multivector":
        return self.involution("star")

    def pq_split(self) -> tuple["Multivector", "Multivector"]:
        return pq_split(self)

    def inverse(self) -> "Multivector":
        """Inverse of a Clifford-group element (a product of paravectors).

        Uses ``a^{-1} = conj(a) / (a conj(a))``, valid whenever
        ``a conj(a)`` is a nonzero scalar.
        """
        c = self.conj()
        nn = (self * c).coeffs
        scale = abs(nn[0])
        if scale < 1e-300:
            raise SingularError("element is not invertible (zero norm)")
        if np.max(np.abs(nn[1:]), initial=0.0) > 1e-10 * scale:
            raise SingularError("a*conj(a) is not a scalar; element is not a Clifford-group element")
        return c / nn[0]

    # -- text ----------------------------------------------------------
    def __str__(self) -> str:
        return format_multivector(self)

    def __repr__(self) -> str:
        return f"Multivector(n={self.n}, {format_multivector(self)!r})"


def geometric_product(a: Multivector, b: Multivector) -> Multivector:
    """Clifford product of two multivectors of the same algebra.

    Examples
    --------
    >>> e1 = Multivector.basis(3, 1)
    >>> str(geometric_product(e1, e1))
    '-1.0'
    """
    if a.algebra.n != b.algebra.n:
        raise DimensionError(f"signature mismatch: n={a.n} vs n={b.n}")
    return Multivector(a.algebra, a.algebra.product(a.coeffs, b.coeffs))


def involution(a: Multivector, kind: str) -> Multivector:
    """Apply ``conjugation``, ``reversion``, ``main`` or ``star`` blade-wise."""
    return a.involution(kind)


def pq_split(a: Multivector) -> tuple[Multivector, Multivector]:
    """Split ``a = Pa + (Qa) e_n`` with ``Pa, Qa`` free of ``e_n``.

    Both parts are returned as elements of the same algebra.  Because
    ``e_n`` has the largest index, ``e_A e_n`` is the canonical blade
    ``A + {n}`` with sign +1, so the split only moves coefficients.
    """
    alg = a.algebra
    low = alg.lower_blades
    p = np.zeros(alg.dim, dtype=complex)
    q = np.zeros(alg.dim, dtype=complex)
    p[low] = a.coeffs[low]
    q[low] = a.coeffs[low | alg.en_bit]
    return Multivector(alg, p), Multivector(alg, q)


class Paravector:
    """Real paravector ``x0 + x1 e1 + ... + xn en``.

    Parameters
    ----------
    coords : sequence of float
        The ``n + 1`` coordinates ``(x0, x1, ..., xn)``.
    """

    __slots__ = ("coords",)

    def __init__(self, coords: Iterable[float]):
        arr = np.array(list(coords) if not isinstance(coords, np.ndarray) else coords, dtype=float).reshape(-1)
        if arr.size < 2 or arr.size > MAX_DIMENSION + 1:
            raise DimensionError(f"paravector needs between 2 and {MAX_DIMENSION + 1} coordinates")
        if not np.all(np.isfinite(arr)):
            raise DomainError("paravector coordinates must be finite")
        arr.setflags(write=False)
        object.__setattr__(self, "coords", arr)
        self._validate()

    def _validate(self) -> None:
        pass

    def __setattr__(self, name, value):
        raise AttributeError(f"{type(self).__name__} is immutable")

    @classmethod
    def from_parts(cls, x0: float, vec: Sequence[float]):
        return cls([x0, *vec])

    @classmethod
    def from_multivector(cls, a: Multivector, tol: float = 1e-12):
        if not a.is_paravector(tol) or not a.is_real(tol * max(1.0, a.norm())):
            raise DomainError("multivector is not a real paravector")
        return cls(a.coeffs[a.algebra.paravector_blades].real)

    @property
    def n(self) -> int:
        return self.coords.size - 1

    @property
    def x0(self) -> float:
        return float(self.coords[0])

    @property
    def vec(self) -> np.ndarray:
        return self.coords[1:]

    @property
    def xn(self) -> float:
        return float(self.coords[-1])

    def norm(self) -> float:
        return float(np.linalg.norm(self.coords))

    def conj(self) -> "Paravector":
        return Paravector(np.concatenate([[self.x0], -self.vec]))

    def to_multivector(self) -> Multivector:
        return Multivector.from_paravector(self.n, self.coords)

    def __eq__(self, other):
        if not isinstance(other, Paravector):
            return NotImplemented
        return bool(np.array_equal(self.coords, other.coords))

    def __hash__(self):
        return hash(self.coords.tobytes())

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.coords.tolist()})"


class UpperHalfPoint(Paravector):
    """Paravector with strictly positive last coordinate ``x_n``."""

    __slots__ = ()

    def _validate(self) -> None:
        if not self.coords[-1] > 0:
            raise DomainError(f"upper half-space point needs x_n > 0, got {self.coords[-1]}")


def as_point(x, n: int | None = None) -> UpperHalfPoint:
    """Coerce coordinates, a :class:`Paravector` or a multivector to a point."""
    if isinstance(x, UpperHalfPoint):
        pt = x
    elif isinstance(x, Paravector):
        pt = UpperHalfPoint(x.coords)
    elif isinstance(x, Multivector):
        pt = UpperHalfPoint(Paravector.from_multivector(x).coords)
    else:
        pt = UpperHalfPoint(x)
    if n is not None and pt.n != n:
        raise DimensionError(f"point has n={pt.n}, expected n={n}")
    return pt


def paravector_inverse(x: Paravector) -> Paravector:
    """Inverse ``conj(x) / |x|^2`` of a nonzero paravector."""
    nn = float(np.dot(x.coords, x.coords))
    if nn == 0.0:
        raise SingularError("zero paravector has no inverse")
    return Paravector(x.conj().coords / nn)


# ---------------------------------------------------------------------------
# text serialisation:  "1.5*e12 - 0.25*e3 + (1+2j)*e1"
# ---------------------------------------------------------------------------

def _blade_label(mask: int) -> str:
    return "e" + "".join(str(i + 1) for i in range(MAX_DIMENSION) if mask >> i & 1)


def _format_coeff(c: complex) -> tuple[str, str]:
    """Return (sign, magnitude text) for a coefficient."""
    if c.imag == 0.0:
        re_ = c.real
        sign = "-" if np.signbit(re_) else "+"
        return sign, repr(abs(re_))
    im_sign = "-" if np.signbit(c.imag) else "+"
    return "+", f"({c.real!r}{im_sign}{abs(c.imag)!r}j)"


def format_multivector(a: Multivector) -> str:
    """Round-trippable text form, e.g. ``'1.5*e12 - 0.25*e3'``."""
    parts = []
    for mask in range(a.algebra.dim):
        c = complex(a.coeffs[mask])
        if c == 0:
            continue
        sign, mag = _format_coeff(c)
        term = mag if mask == 0 else f"{mag}*{_blade_label(mask)}"
        if not parts:
            parts.append(term if sign == "+" else "-" + term)
        else:
            parts.append(f" {sign} {term}")
    return "".join(parts) if parts else "0"


_NUMBER = r"(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?|inf|nan"
_TERM = re.compile(
    r"\s*([+-])?\s*"
    r"(?:(\([^()]*\)|" + _NUMBER + r")\s*(?:\*\s*(e\d*))?|(e\d*))\s*"
)


def parse_multivector(text: str, n: int) -> Multivector:
    """Inverse of :func:`format_multivector`.

    Blade labels may list generators in any order (``e21`` means
    ``e2 e1 = -e12``); a bare label has coefficient 1.
    """
    alg = get_algebra(n)
    coeffs = np.zeros(alg.dim, dtype=complex)
    s = text.strip()
    if s in ("", "0"):
        return Multivector(alg, coeffs)
    pos = 0
    first = True
    while pos < len(s):
        m = _TERM.match(s, pos)
        if not m or m.end() == pos:
            raise ValueError(f"cannot parse multivector text at {s[pos:]!r}")
        sign, num, blade1, blade2 = m.groups()
        if sign is None and not first:
            raise ValueError(f"missing operator before {s[pos:]!r}")
        value = complex(num) if num is not None else 1.0
        if sign == "-":
            value = -value
        label = blade1 or blade2 or "e"
        mv = Multivector.scalar(alg)
        for ch in label[1:]:
            mv = mv * Multivector.basis(alg, int(ch))
        coeffs = coeffs + value * mv.coeffs
        pos = m.end()
        first = False
    return Multivector(alg, coeffs)


def random_multivector(n: int, rng: np.random.Generator, complex_valued: bool = True) -> Multivector:
    """Multivector with standard-normal coefficients (test helper)."""
    alg = get_algebra(n)
    c = rng.standard_normal(alg.dim)
    if complex_valued:
        c = c + 1j * rng.standard_normal(alg.dim)
    return Multivector(alg, c)
