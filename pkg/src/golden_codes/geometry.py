"""Hyperboloid model of H^4: Lorentz forms, generators, and bound formulas."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

from .arith import PHI, S, S_INV, GoldenInt, QuarticInt

Matrix = tuple[tuple, ...]

# string diagram of the {4,3,3,5} Coxeter group
COXETER_ORDERS = (4, 3, 3, 5)


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    n, m, p = len(a), len(b), len(b[0])
    return tuple(
        tuple(sum((a[i][k] * b[k][j] for k in range(m) if a[i][k] and b[k][j]), 0 * a[0][0]) for j in range(p))
        for i in range(n)
    )


def transpose(a: Matrix) -> Matrix:
    return tuple(zip(*a))


def identity(n: int, one=1) -> Matrix:
    zero = one - one
    return tuple(tuple(one if i == j else zero for j in range(n)) for i in range(n))


def diag(entries: Sequence) -> Matrix:
    zero = entries[0] - entries[0]
    n = len(entries)
    return tuple(tuple(entries[i] if i == j else zero for j in range(n)) for i in range(n))


def mat_pow(a: Matrix, k: int) -> Matrix:
    out = identity(len(a), a[0][0] - a[0][0] + 1)
    for _ in range(k):
        out = mat_mul(out, a)
    return out


def mat_eq(a: Matrix, b: Matrix) -> bool:
    return all(x == y for ra, rb in zip(a, b) for x, y in zip(ra, rb))


def map_entries(a: Matrix, f) -> Matrix:
    return tuple(tuple(f(x) for x in row) for row in a)


def metric_J(ring=QuarticInt) -> Matrix:
    one = ring(1)
    return diag([-one, one, one, one, one])


def metric_J_tilde() -> Matrix:
    one = GoldenInt(1)
    return diag([-PHI, one, one, one, one])


def preserves_metric(g: Matrix, metric: Matrix) -> bool:
    return mat_eq(mat_mul(mat_mul(transpose(g), metric), g), metric)


@dataclass(frozen=True)
class LorentzVector:
    """A vector of R^{1,4}; `mode` is "exact" or "float"."""

    coords: tuple
    mode: str = "float"

    def __post_init__(self):
        if self.mode not in ("exact", "float"):
            raise ValueError(f"unknown mode {self.mode!r}")


def lorentz_inner(u: LorentzVector, v: LorentzVector):
    if u.mode != v.mode:
        raise ValueError(f"mode mismatch: {u.mode} vs {v.mode}")
    x, y = u.coords, v.coords
    return -x[0] * y[0] + sum(a * b for a, b in zip(x[1:], y[1:]))


def _permute_coords(m: Matrix, i: int, j: int) -> Matrix:
    perm = list(range(len(m)))
    perm[i], perm[j] = perm[j], perm[i]
    return tuple(tuple(m[perm[r]][perm[c]] for c in range(len(m))) for r in range(len(m)))


def translation_generators() -> list[tuple[Matrix, Matrix]]:
    """The pairs (g_i, g_i^-1), i = 1..4, with cosh t = phi, sinh t = sqrt(phi)."""
    ch, sh = S * S, S
    zero, one = QuarticInt(0), QuarticInt(1)

    def boost(sinh):
        rows = [[one if r == c else zero for c in range(5)] for r in range(5)]
        rows[0][0] = rows[1][1] = ch
        rows[0][1] = rows[1][0] = sinh
        return tuple(map(tuple, rows))

    g1, g1_inv = boost(sh), boost(-sh)
    out = [(g1, g1_inv)]
    for i in (2, 3, 4):
        out.append((_permute_coords(g1, 1, i), _permute_coords(g1_inv, 1, i)))
    return out


def _perm_matrix(perm: Sequence[int], signs: Sequence[int] | None = None, ring=QuarticInt) -> Matrix:
    n = len(perm)
    signs = signs or [1] * n
    return tuple(
        tuple(ring(signs[r]) if perm[r] == c else ring(0) for c in range(n)) for r in range(n)
    )


def coxeter_generators(metric: str = "J") -> list[Matrix]:
    """r_0..r_4 for metric "J" (entries in Z[s]) or "J_tilde" (entries in Z[phi])."""
    if metric == "J":
        ring = QuarticInt
        phi, root = S * S, S
        r4 = (
            (phi, ring(0), ring(0), ring(0), -root),
            (ring(0), ring(1), ring(0), ring(0), ring(0)),
            (ring(0), ring(0), ring(1), ring(0), ring(0)),
            (ring(0), ring(0), ring(0), ring(1), ring(0)),
            (root, ring(0), ring(0), ring(0), -phi),
        )
    elif metric == "J_tilde":
        ring = GoldenInt
        z, o = ring(0), ring(1)
        r4 = (
            (PHI, z, z, z, -o),
            (z, o, z, z, z),
            (z, z, o, z, z),
            (z, z, z, o, z),
            (PHI, z, z, z, -PHI),
        )
    else:
        raise ValueError(f"unknown metric {metric!r}")
    r0 = _perm_matrix(range(5), [1, -1, 1, 1, 1], ring)
    r1 = _perm_matrix([0, 2, 1, 3, 4], ring=ring)
    r2 = _perm_matrix([0, 1, 3, 2, 4], ring=ring)
    r3 = _perm_matrix([0, 1, 2, 4, 3], ring=ring)
    return [r0, r1, r2, r3, r4]


def conjugate_by_P(g: Matrix) -> Matrix:
    """P^-1 g P with P = diag(sqrt(phi), 1, 1, 1, 1), computed in Z[s]."""
    one = QuarticInt(1)
    P = diag([S, one, one, one, one])
    P_inv = diag([S_INV, one, one, one, one])
    g = map_entries(g, QuarticInt.coerce)
    return mat_mul(mat_mul(P_inv, g), P)


def coxeter_relations(n_gens: int = 5, orders: Sequence[int] = COXETER_ORDERS) -> list[tuple[str, tuple[int, ...], int]]:
    """(name, word, exponent) for every defining relation of a string diagram."""
    rels = [(f"r{i}^2", (i,), 2) for i in range(n_gens)]
    for i in range(n_gens - 1):
        rels.append((f"(r{i}r{i+1})^{orders[i]}", (i, i + 1), orders[i]))
    for i in range(n_gens):
        for j in range(i + 2, n_gens):
            rels.append((f"(r{i}r{j})^2", (i, j), 2))
    return rels


@dataclass
class RelationReport:
    checked: list[tuple[str, bool]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(ok for _, ok in self.checked)

    @property
    def first_failure(self) -> str | None:
        return next((name for name, ok in self.checked if not ok), None)


def verify_coxeter_relations(gens: Sequence[Matrix], orders: Sequence[int] = COXETER_ORDERS) -> RelationReport:
    """Check r_i^2, the string orders, and the commutations, exactly.

    Orders are also checked to be exact (no proper power is the identity),
    otherwise the matrices would only satisfy a quotient of the diagram.
    """
    one = gens[0][0][0] - gens[0][0][0] + 1
    ident = identity(len(gens[0]), one)
    report = RelationReport()
    for name, word, k in coxeter_relations(len(gens), orders):
        w = gens[word[0]]
        for idx in word[1:]:
            w = mat_mul(w, gens[idx])
        power, ok = w, True
        for e in range(1, k + 1):
            is_id = mat_eq(power, ident)
            if (e < k and is_id) or (e == k and not is_id):
                ok = False
                break
            power = mat_mul(power, w)
        report.checked.append((name, ok))
    return report


def dihedral_angle(t: float) -> float:
    """Angle between adjacent 3-faces of the hypercube with half-width t/2."""
    if t < 0:
        raise ValueError("t must be non-negative")
    return math.pi - math.acos(-math.sinh(t / 2) ** 2)


def golden_scale() -> float:
    """The t for which five hypercubes fit around a 2-face."""
    return 2 * math.asinh(math.sqrt(math.cos(2 * math.pi / 5)))


def displacement_lower_bound(trace_abs: float) -> float:
    """rho >= arcosh((|tr g| - 3)/2), from |tr g| <= 2 cosh(rho) + 3."""
    if trace_abs < 0:
        raise ValueError("trace_abs must be non-negative")
    if trace_abs < 5:
        return 0.0
    return math.acosh((trace_abs - 3) / 2)


@dataclass(frozen=True)
class DistanceBounds:
    trace_bound: float
    trace_bound_from_n: float
    systole_bound: float
    injectivity_bound: float
    anderson_area: float
    distance_bound: float
    two_face_area: float
    asymptotic_coefficient: float
    asymptotic_distance: float
    asymptotic_regime_reached: bool


def distance_bound_chain(norm: int, n: int) -> DistanceBounds:
    """Evaluate the trace -> systole -> injectivity -> distance chain.

    Negative intermediates are clamped to 0; `asymptotic_regime_reached` is
    False whenever any clamp fired.
    """
    if norm < 2 or n < 1:
        raise ValueError("need norm >= 2 and n >= 1")
    c = 20**0.8
    raw_trace = norm**2 / 40 - 5
    raw_trace_n = n**0.2 / (2 * c) - 5
    x = (n**0.2 - 18 * c) / (2 * c)
    clamped = raw_trace <= 0 or x <= 1
    systole = math.log(x) if x > 1 else 0.0
    injectivity = systole / 2
    area = 2 * math.pi / 5
    anderson = 2 * math.pi * (math.cosh(injectivity) - 1)
    raw_d = 2.5 * math.sqrt(x) - 5 if x > 0 else -5.0
    coeff = 5 / (2**1.5 * 20**0.4)
    return DistanceBounds(
        trace_bound=max(0.0, raw_trace),
        trace_bound_from_n=max(0.0, raw_trace_n),
        systole_bound=systole,
        injectivity_bound=injectivity,
        anderson_area=anderson,
        distance_bound=max(0.0, raw_d),
        two_face_area=area,
        asymptotic_coefficient=coeff,
        asymptotic_distance=coeff * n**0.1,
        asymptotic_regime_reached=not clamped and raw_d > 0,
    )


def hypercube_orbifold_euler():
    """Euler characteristic of one hypercube cell of {4,3,3,5}, as a Fraction."""
    from fractions import Fraction

    # (k-faces of one hypercube, hypercubes around a k-face) for k = 4 down to 0
    return sum(
        (-1) ** i * Fraction(count, around)
        for i, (count, around) in enumerate([(1, 1), (8, 2), (24, 5), (32, 20), (16, 600)])
    )
