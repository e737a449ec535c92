"""Exact arithmetic in Z[phi], its finite quotients, and Z[sqrt(phi)].

Elements of Z[phi] are pairs (a, b) standing for a + b*phi with
phi**2 = phi + 1.  Elements of Z[s], s = sqrt(phi), are quadruples
(c0, c1, c2, c3) standing for c0 + c1*s + c2*s**2 + c3*s**3 with
s**4 = s**2 + 1.  sqrt(5) is always written 2*phi - 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from numbers import Rational

import numpy as np

__all__ = [
    "GoldenInt",
    "QuarticInt",
    "PrincipalIdeal",
    "QuotientRing",
    "IntegerModRing",
    "PHI",
    "SQRT5",
    "S",
    "golden_mul",
    "galois_conjugate",
    "ideal_norm",
    "reduce_mod",
    "enumerate_ideals_up_to_norm",
    "quartic_mul",
    "sign_of",
]


@dataclass(frozen=True, slots=True)
class GoldenInt:
    """a + b*phi with arbitrary-precision integer coordinates."""

    a: int = 0
    b: int = 0

    @classmethod
    def coerce(cls, x) -> GoldenInt:
        if isinstance(x, GoldenInt):
            return x
        if isinstance(x, int):
            return cls(x, 0)
        return NotImplemented

    def __add__(self, other):
        other = GoldenInt.coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return GoldenInt(self.a + other.a, self.b + other.b)

    __radd__ = __add__

    def __neg__(self):
        return GoldenInt(-self.a, -self.b)

    def __sub__(self, other):
        other = GoldenInt.coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return GoldenInt(self.a - other.a, self.b - other.b)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = GoldenInt.coerce(other)
        if other is NotImplemented:
            return NotImplemented
        a1, b1, a2, b2 = self.a, self.b, other.a, other.b
        return GoldenInt(a1 * a2 + b1 * b2, a1 * b2 + a2 * b1 + b1 * b2)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative powers are not ring elements in general")
        out, base = GoldenInt(1, 0), self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other):
        other = GoldenInt.coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self.a == other.a and self.b == other.b

    def __hash__(self):
        return hash((self.a, self.b))

    def __bool__(self):
        return bool(self.a or self.b)

    def conjugate(self) -> GoldenInt:
        # sigma(phi) = 1 - phi
        return GoldenInt(self.a + self.b, -self.b)

    def norm(self) -> int:
        """Field norm x * sigma(x) = a**2 + a*b - b**2 (signed)."""
        return self.a * self.a + self.a * self.b - self.b * self.b

    def divides(self, other: GoldenInt) -> bool:
        n = self.norm()
        if n == 0:
            return not other
        q = other * self.conjugate()
        return q.a % n == 0 and q.b % n == 0

    def exact_div(self, other: GoldenInt) -> GoldenInt:
        n = other.norm()
        q = self * other.conjugate()
        if q.a % n or q.b % n:
            raise ArithmeticError(f"{other} does not divide {self}")
        return GoldenInt(q.a // n, q.b // n)

    def to_quartic(self) -> QuarticInt:
        return QuarticInt(self.a, 0, self.b, 0)

    def __float__(self):
        return self.a + self.b * (1 + math.sqrt(5)) / 2

    def __repr__(self):
        return f"GoldenInt({self.a}, {self.b})"

    def __str__(self):
        if not self.b:
            return str(self.a)
        if not self.a:
            return f"{self.b}φ"
        sign = "+" if self.b > 0 else "-"
        return f"{self.a}{sign}{abs(self.b)}φ"


PHI = GoldenInt(0, 1)
SQRT5 = GoldenInt(-1, 2)


def golden_mul(x: GoldenInt, y: GoldenInt) -> GoldenInt:
    return x * y


def galois_conjugate(x: GoldenInt) -> GoldenInt:
    return x.conjugate()


# s**4 = s**2 + 1, s**5 = s**3 + s, s**6 = 2 s**2 + 1
_QUARTIC_REDUCE = {
    4: (1, 0, 1, 0),
    5: (0, 1, 0, 1),
    6: (1, 0, 2, 0),
}


@dataclass(frozen=True, slots=True)
class QuarticInt:
    """c0 + c1 s + c2 s^2 + c3 s^3 with s = sqrt(phi).

    Coefficients are normally integers; rationals are accepted so the same
    type can carry exact geometric quantities into `sign_of`.
    """

    c0: Rational = 0
    c1: Rational = 0
    c2: Rational = 0
    c3: Rational = 0

    @classmethod
    def coerce(cls, x) -> QuarticInt:
        if isinstance(x, QuarticInt):
            return x
        if isinstance(x, GoldenInt):
            return x.to_quartic()
        if isinstance(x, Rational):
            return cls(x, 0, 0, 0)
        return NotImplemented

    @property
    def coeffs(self) -> tuple:
        return (self.c0, self.c1, self.c2, self.c3)

    def __add__(self, other):
        other = QuarticInt.coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return QuarticInt(*(x + y for x, y in zip(self.coeffs, other.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        return QuarticInt(*(-x for x in self.coeffs))

    def __sub__(self, other):
        other = QuarticInt.coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = QuarticInt.coerce(other)
        if other is NotImplemented:
            return NotImplemented
        prod = [0] * 7
        for i, x in enumerate(self.coeffs):
            if x:
                for j, y in enumerate(other.coeffs):
                    if y:
                        prod[i + j] += x * y
        out = prod[:4]
        for k in (4, 5, 6):
            if prod[k]:
                for t, r in enumerate(_QUARTIC_REDUCE[k]):
                    out[t] += r * prod[k]
        return QuarticInt(*out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        out, base = QuarticInt(1), self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other):
        other = QuarticInt.coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __bool__(self):
        return any(self.coeffs)

    def to_golden(self) -> GoldenInt:
        """Inverse of the embedding; fails unless odd coefficients vanish."""
        if self.c1 or self.c3:
            raise ValueError(f"{self} is not in Z[phi]")
        return GoldenInt(int(self.c0), int(self.c2))

    def __float__(self):
        s = math.sqrt((1 + math.sqrt(5)) / 2)
        return float(self.c0 + self.c1 * s + self.c2 * s * s + self.c3 * s**3)

    def __repr__(self):
        return f"QuarticInt({self.c0}, {self.c1}, {self.c2}, {self.c3})"


S = QuarticInt(0, 1, 0, 0)
S_INV = QuarticInt(0, -1, 0, 1)  # s * (s**3 - s) = s**4 - s**2 = 1


def quartic_mul(x: QuarticInt, y: QuarticInt) -> QuarticInt:
    return x * y


def _sqrt_interval(lo: Fraction, hi: Fraction, bits: int) -> tuple[Fraction, Fraction]:
    scale = 1 << bits
    lo_n = math.isqrt(lo.numerator * scale * scale // lo.denominator)
    hi_n = math.isqrt(-(-hi.numerator * scale * scale // hi.denominator)) + 1
    return Fraction(lo_n, scale), Fraction(hi_n, scale)


def _s_interval(bits: int) -> tuple[Fraction, Fraction]:
    scale = 1 << (bits + 4)
    r5 = math.isqrt(5 * scale * scale)
    phi_lo = Fraction(scale + r5, 2 * scale)
    phi_hi = Fraction(scale + r5 + 1, 2 * scale)
    return _sqrt_interval(phi_lo, phi_hi, bits + 2)


def sign_of(x) -> int:
    """Sign (-1, 0, 1) of an element of Q(sqrt(phi)) under s -> +sqrt(phi).

    Zero is decided on coefficients (1, s, s^2, s^3 is a Q-basis); otherwise
    the value is bracketed with rational intervals of doubling precision.
    """
    q = QuarticInt.coerce(x)
    if q is NotImplemented:
        raise TypeError(f"cannot take the sign of {x!r}")
    if not q:
        return 0
    coeffs = [Fraction(c) for c in q.coeffs]
    bits = 32
    while True:
        s_lo, s_hi = _s_interval(bits)
        lo = hi = coeffs[0]
        for k in (1, 2, 3):
            c = coeffs[k]
            p_lo, p_hi = s_lo**k, s_hi**k
            if c >= 0:
                lo += c * p_lo
                hi += c * p_hi
            else:
                lo += c * p_hi
                hi += c * p_lo
        if lo > 0:
            return 1
        if hi < 0:
            return -1
        bits *= 2


def _hnf_2x2(rows: list[tuple[int, int]]) -> tuple[int, int, int]:
    """Hermite form (p, q, r) of the lattice spanned by integer rows.

    The lattice equals {u*(p, q) + v*(0, r)} with p, r > 0 and 0 <= q < r.
    """
    (a1, b1), (a2, b2) = rows
    g, x, y = _ext_gcd(a1, a2)
    if g == 0:
        raise ValueError("degenerate lattice")
    # (p, q) = x*row1 + y*row2 ; second row eliminates the first coordinate
    p, q = g, x * b1 + y * b2
    r = abs((a1 // g) * b2 - (a2 // g) * b1)
    if r == 0:
        raise ValueError("degenerate lattice")
    if p < 0:
        p, q = -p, -q
    return p, q % r, r


def _ext_gcd(a: int, b: int) -> tuple[int, int, int]:
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        t = a // b
        a, b = b, a - t * b
        x0, x1 = x1, x0 - t * x1
        y0, y1 = y1, y0 - t * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


class PrincipalIdeal:
    """The ideal g*Z[phi], reduced through the Hermite form of its lattice."""

    def __init__(self, generator: GoldenInt | int):
        g = GoldenInt.coerce(generator)
        if g is NotImplemented:
            raise TypeError(f"bad ideal generator {generator!r}")
        if not g:
            raise ValueError("the zero ideal has no finite quotient")
        self.generator = g
        # g*1 and g*phi in (a, b) coordinates
        gphi = g * PHI
        self.hnf = _hnf_2x2([(g.a, g.b), (gphi.a, gphi.b)])

    @property
    def norm(self) -> int:
        return abs(self.generator.norm())

    @property
    def basis(self) -> tuple[tuple[int, int], tuple[int, int]]:
        p, q, r = self.hnf
        return ((p, q), (0, r))

    def reduce(self, x: GoldenInt | int) -> tuple[int, int]:
        """Canonical representative (x, y), 0 <= x < p, 0 <= y < r."""
        x = GoldenInt.coerce(x)
        p, q, r = self.hnf
        k, a = divmod(x.a, p)
        return a, (x.b - k * q) % r

    def contains(self, x: GoldenInt | int) -> bool:
        return self.reduce(x) == (0, 0)

    def __eq__(self, other):
        return isinstance(other, PrincipalIdeal) and self.hnf == other.hnf

    def __hash__(self):
        return hash(self.hnf)

    def __repr__(self):
        return f"PrincipalIdeal({self.generator})"

    @cached_property
    def ring(self) -> QuotientRing:
        return QuotientRing(self)


def ideal_norm(ideal: PrincipalIdeal) -> int:
    return ideal.norm


def reduce_mod(x: GoldenInt | int, ideal: PrincipalIdeal) -> int:
    """Index of the canonical residue of x in Z[phi]/I."""
    return ideal.ring.index(x)


class _FiniteRing:
    """Common surface of the finite rings used by group enumeration.

    Elements are indices 0..order-1 with 0 the zero element; `add`, `mul`
    are dense lookup tables and `neg` a lookup vector.
    """

    order: int
    add: np.ndarray
    mul: np.ndarray
    neg: np.ndarray
    one: int

    def _build_tables(self, elements: list) -> None:
        self.order = len(elements)
        self.add = np.empty((self.order, self.order), dtype=np.int64)
        self.mul = np.empty((self.order, self.order), dtype=np.int64)
        for i, x in enumerate(elements):
            for j, y in enumerate(elements):
                self.add[i, j] = self.index(x + y)
                self.mul[i, j] = self.index(x * y)
        self.neg = np.array([self.index(-x) for x in elements], dtype=np.int64)
        self.one = self.index(1)


class QuotientRing(_FiniteRing):
    """Z[phi]/I with residues numbered x*r + y from the Hermite form."""

    def __init__(self, ideal: PrincipalIdeal):
        self.ideal = ideal
        p, _, r = ideal.hnf
        self._r = r
        self.elements = [GoldenInt(x, y) for x in range(p) for y in range(r)]
        self._build_tables(self.elements)

    def index(self, x) -> int:
        a, b = self.ideal.reduce(x)
        return a * self._r + b

    def lift(self, i: int) -> GoldenInt:
        return self.elements[i]

    def prime_field_label(self, i: int) -> int | None:
        """m with m*1 = residue i, when the quotient is Z/NZ (else None)."""
        n = self.order
        seen = {}
        for m in range(n):
            seen.setdefault(self.index(m), m)
        if len(seen) != n:
            return None
        return seen[i]


class IntegerModRing(_FiniteRing):
    """Z/mZ, used for the Euclidean (toric) oracle groups."""

    def __init__(self, m: int):
        if m < 2:
            raise ValueError("modulus must be at least 2")
        self.m = m
        self.elements = list(range(m))
        self._build_tables(self.elements)

    def index(self, x) -> int:
        return int(x) % self.m

    def lift(self, i: int) -> int:
        return i


def enumerate_ideals_up_to_norm(bound: int) -> list[PrincipalIdeal]:
    """All proper ideals of Z[phi] of norm <= bound, sorted by norm.

    Generators are scanned in a box |a|, |b| <= max(B, 4*sqrt(B) + 4) and
    deduplicated by lattice equality.  The box is ample: multiplying by a
    power of the unit phi balances |x| against |sigma(x)|, which leaves a
    generator with |a|, |b| <= 4*sqrt(N).  The kept generator is the first
    met in the order (|a|+|b|, |b|, -a, -b).
    """
    if bound < 2:
        raise ValueError("bound must be at least 2")
    found: dict[tuple[int, int, int], PrincipalIdeal] = {}
    box = max(bound, 4 * math.isqrt(bound) + 4)
    cands = [
        GoldenInt(a, b)
        for a in range(-box, box + 1)
        for b in range(-box, box + 1)
        if 1 < abs(a * a + a * b - b * b) <= bound
    ]
    cands.sort(key=lambda g: (abs(g.a) + abs(g.b), abs(g.b), -g.a, -g.b))
    for g in cands:
        ideal = PrincipalIdeal(g)
        found.setdefault(ideal.hnf, ideal)
    return sorted(found.values(), key=lambda I: (I.norm, I.hnf))
