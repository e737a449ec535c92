"""Binary boundary maps, CSS codes, GF(2) rank, and the toric-code oracle."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

import numpy as np
import scipy.sparse as sp
from numba import njit

from .arith import IntegerModRing
from .geometry import hypercube_orbifold_euler
from .group import enumerate_matrix_group
from .tessellation import Tessellation, build_tessellation

__all__ = [
    "SparseBinaryMatrix",
    "CssCode",
    "ChainComplex",
    "CommutationError",
    "RateBound",
    "RankResult",
    "NO_LOGICALS",
    "build_css_code",
    "build_chain_complex",
    "euler_characteristic",
    "rate_lower_bound",
    "hypercube_orbifold_euler",
    "gf2_rank",
    "build_toric_code",
    "build_toric_code_direct",
    "min_distance_brute",
    "write_matrix_market",
    "read_matrix_market",
    "write_alist",
    "read_alist",
    "code_metadata",
]

ASYMPTOTIC_RATE = Fraction(17, 360)


@dataclass(eq=False)
class SparseBinaryMatrix:
    """Binary matrix as per-row sorted column indices (CSR without values)."""

    n_rows: int
    n_cols: int
    indptr: np.ndarray
    indices: np.ndarray

    def __post_init__(self):
        self.indptr = np.asarray(self.indptr, dtype=np.int64)
        self.indices = np.asarray(self.indices, dtype=np.int64)
        if self.indptr.shape != (self.n_rows + 1,) or self.indptr[-1] != len(self.indices):
            raise ValueError("indptr does not match the row count")
        if len(self.indices) and (self.indices.min() < 0 or self.indices.max() >= self.n_cols):
            raise ValueError("column index out of bounds")
        row_of = np.repeat(np.arange(self.n_rows), np.diff(self.indptr))
        step = np.diff(self.indices)
        same_row = row_of[1:] == row_of[:-1]
        if np.any(step[same_row] <= 0):
            raise ValueError("row indices must be strictly increasing")

    @classmethod
    def from_pairs(cls, rows, cols, n_rows: int, n_cols: int) -> SparseBinaryMatrix:
        """Build from (row, col) pairs; duplicates cancel mod 2."""
        rows = np.asarray(rows, dtype=np.int64)
        cols = np.asarray(cols, dtype=np.int64)
        key = rows * n_cols + cols
        uniq, counts = np.unique(key, return_counts=True)
        uniq = uniq[counts % 2 == 1]
        r, c = uniq // n_cols, uniq % n_cols
        indptr = np.zeros(n_rows + 1, dtype=np.int64)
        np.cumsum(np.bincount(r, minlength=n_rows), out=indptr[1:])
        return cls(n_rows, n_cols, indptr, c)

    @classmethod
    def from_dense(cls, dense) -> SparseBinaryMatrix:
        dense = np.asarray(dense) % 2
        r, c = np.nonzero(dense)
        return cls.from_pairs(r, c, dense.shape[0], dense.shape[1])

    @classmethod
    def from_scipy(cls, m) -> SparseBinaryMatrix:
        coo = sp.coo_matrix(m)
        odd = coo.data % 2 == 1
        return cls.from_pairs(coo.row[odd], coo.col[odd], *coo.shape)

    @property
    def shape(self) -> tuple[int, int]:
        return (self.n_rows, self.n_cols)

    @property
    def nnz(self) -> int:
        return int(len(self.indices))

    def row(self, i: int) -> np.ndarray:
        return self.indices[self.indptr[i] : self.indptr[i + 1]]

    def to_scipy(self) -> sp.csr_matrix:
        data = np.ones(self.nnz, dtype=np.uint8)
        return sp.csr_matrix((data, self.indices, self.indptr), shape=self.shape)

    def to_dense(self) -> np.ndarray:
        return self.to_scipy().toarray()

    def transpose(self) -> SparseBinaryMatrix:
        rows = np.repeat(np.arange(self.n_rows), np.diff(self.indptr))
        return SparseBinaryMatrix.from_pairs(self.indices, rows, self.n_cols, self.n_rows)

    @property
    def T(self) -> SparseBinaryMatrix:
        return self.transpose()

    def row_weights(self) -> np.ndarray:
        return np.diff(self.indptr)

    def col_weights(self) -> np.ndarray:
        return np.bincount(self.indices, minlength=self.n_cols)

    def matvec(self, support) -> np.ndarray:
        """Rows with odd overlap with the column set `support`, sorted."""
        x = np.zeros(self.n_cols, dtype=np.uint8)
        x[np.asarray(support, dtype=np.int64)] ^= 1
        return np.flatnonzero(self.to_scipy().dot(x) % 2)

    def __eq__(self, other) -> bool:
        if not isinstance(other, SparseBinaryMatrix):
            return NotImplemented
        return (
            self.shape == other.shape
            and np.array_equal(self.indptr, other.indptr)
            and np.array_equal(self.indices, other.indices)
        )


def _product_mod2(a: SparseBinaryMatrix, b: SparseBinaryMatrix) -> sp.csr_matrix:
    """a @ b^T over GF(2), as a csr matrix with only the odd entries."""
    prod = (a.to_scipy().astype(np.int32) @ b.to_scipy().astype(np.int32).T).tocsr()
    prod.data %= 2
    prod.eliminate_zeros()
    return prod


class CommutationError(ValueError):
    """Raised when H_X H_Z^T != 0; `pair` is the first offending (x-check, z-check)."""

    def __init__(self, pair):
        super().__init__(f"checks {pair[0]} (X) and {pair[1]} (Z) overlap on an odd number of qubits")
        self.pair = pair


@dataclass(eq=False)
class CssCode:
    """H_X (X-checks x qubits) and H_Z (Z-checks x qubits)."""

    hx: SparseBinaryMatrix
    hz: SparseBinaryMatrix
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.hx.n_cols != self.hz.n_cols:
            raise ValueError("H_X and H_Z must have the same number of columns")

    @property
    def n(self) -> int:
        return self.hx.n_cols

    def check_commutation(self) -> None:
        prod = _product_mod2(self.hx, self.hz).tocoo()
        if prod.nnz:
            first = np.lexsort((prod.col, prod.row))[0]
            raise CommutationError((int(prod.row[first]), int(prod.col[first])))


@dataclass(eq=False)
class ChainComplex:
    """boundaries[i] maps i-chains to (i-1)-chains: shape (count_{i-1}, count_i)."""

    boundaries: dict[int, SparseBinaryMatrix]

    def check(self) -> list[int]:
        """Dimensions i with d_i d_{i+1} != 0 (empty when the complex is valid)."""
        bad = []
        for i in sorted(self.boundaries):
            if i + 1 in self.boundaries:
                # d_i @ d_{i+1} = d_i @ (d_{i+1}^T)^T
                if _product_mod2(self.boundaries[i], self.boundaries[i + 1].transpose()).nnz:
                    bad.append(i)
        return bad


def _boundary(tess: Tessellation, i: int) -> SparseBinaryMatrix:
    pairs = tess.incidences[i - 1]
    return SparseBinaryMatrix.from_pairs(pairs[:, 0], pairs[:, 1], tess.counts[i - 1], tess.counts[i])


def build_chain_complex(tess: Tessellation) -> ChainComplex:
    return ChainComplex({i: _boundary(tess, i) for i in range(1, tess.top_dim + 1)})


def build_css_code(tess: Tessellation, qubit_dim: int | None = None, check: bool = True) -> CssCode:
    """Qubits on `qubit_dim`-faces (default: middle dimension).

    X-checks are the (q-1)-faces, Z-checks the (q+1)-faces; rows follow face id order.
    """
    q = tess.top_dim // 2 if qubit_dim is None else qubit_dim
    hx = _boundary(tess, q)
    hz = _boundary(tess, q + 1).transpose()
    code = CssCode(hx, hz, meta=dict(tess.meta))
    code.meta.update(face_counts=list(tess.counts), qubit_dim=q)
    if check:
        code.check_commutation()
    return code


def euler_characteristic(tess: Tessellation | list[int]) -> int:
    counts = tess.counts if isinstance(tess, Tessellation) else tess
    return int(sum((-1) ** i * c for i, c in enumerate(counts)))


@dataclass(frozen=True)
class RateBound:
    k_min: int
    asymptotic_rate: Fraction


def rate_lower_bound(chi: int, n: int) -> RateBound:
    """k >= chi - 2 (from dim H_2 >= chi - dim H_0 - dim H_4), with the 17/360 limit."""
    if n < 1:
        raise ValueError("n must be positive")
    return RateBound(k_min=chi - 2, asymptotic_rate=ASYMPTOTIC_RATE)


# ---------------------------------------------------------------- GF(2) rank


@dataclass(frozen=True)
class RankResult:
    rank: int
    complete: bool
    columns_processed: int
    row_ops: int


def _pack_rows(m: SparseBinaryMatrix) -> np.ndarray:
    words = (m.n_cols + 63) // 64
    packed = np.zeros((m.n_rows, words), dtype=np.uint64)
    rows = np.repeat(np.arange(m.n_rows), np.diff(m.indptr))
    bits = np.left_shift(np.uint64(1), (m.indices % 64).astype(np.uint64))
    np.bitwise_xor.at(packed, (rows, m.indices // 64), bits)
    return packed


@njit(cache=True)
def _eliminate(a, n_cols, budget):
    n_rows, words = a.shape
    rank = 0
    ops = 0
    col = 0
    while col < n_cols and rank < n_rows:
        w = col >> 6
        bit = np.uint64(1) << np.uint64(col & 63)
        piv = -1
        for r in range(rank, n_rows):
            if a[r, w] & bit:
                piv = r
                break
        if piv >= 0:
            if piv != rank:
                for k in range(w, words):
                    t = a[piv, k]
                    a[piv, k] = a[rank, k]
                    a[rank, k] = t
            for r in range(rank + 1, n_rows):
                if a[r, w] & bit:
                    for k in range(w, words):
                        a[r, k] ^= a[rank, k]
                    ops += 1
            rank += 1
        col += 1
        if budget >= 0 and ops >= budget:
            break
    done = col >= n_cols or rank >= n_rows
    return rank, col, ops, done


def gf2_rank(m: SparseBinaryMatrix | np.ndarray, budget: int | None = None) -> RankResult:
    """Rank over GF(2) by packed 64-bit row elimination.

    `budget` bounds the number of row XORs.  It is checked after each
    column, so a run may overshoot by one column's eliminations.  When it
    runs out the result has `complete=False` and the rank found so far (a
    lower bound).
    """
    if not isinstance(m, SparseBinaryMatrix):
        m = SparseBinaryMatrix.from_dense(m)
    if m.n_rows == 0 or m.n_cols == 0 or m.nnz == 0:
        return RankResult(0, True, m.n_cols, 0)
    packed = _pack_rows(m)
    rank, col, ops, done = _eliminate(packed, m.n_cols, -1 if budget is None else int(budget))
    return RankResult(int(rank), bool(done), int(col), int(ops))


# ------------------------------------------------------------- toric oracle


def _toric_generators(p: int) -> list[np.ndarray]:
    """Reflections of the {4,4} flag triangle, as affine 3x3 maps over Z/2p.

    Lattice scaled by 2: vertex (0,0), edge midpoint (1,0), face centre (1,1).
    """
    m = 2 * p
    r0 = np.array([[m - 1, 0, 2], [0, 1, 0], [0, 0, 1]])  # x -> 2 - x
    r1 = np.array([[0, 1, 0], [1, 0, 0], [0, 0, 1]])  # x <-> y
    r2 = np.array([[1, 0, 0], [0, m - 1, 0], [0, 0, 1]])  # y -> -y
    return [r0, r1, r2]


def build_toric_code(p: int) -> CssCode:
    """Toric code on the p x p square torus from the coset construction.

    Qubits are edges; X-checks are vertices and Z-checks are faces.
    """
    if p < 2:
        raise ValueError("p must be at least 2")
    group = enumerate_matrix_group(_toric_generators(p), IntegerModRing(2 * p), label=f"toric-{p}")
    tess = build_tessellation(group)
    code = build_css_code(tess, qubit_dim=1)
    code.meta.update(family="toric", p=p)
    return code


def build_toric_code_direct(p: int) -> CssCode:
    """Same code written down by hand: edge (x, y, d), d=0 horizontal, d=1 vertical."""
    if p < 2:
        raise ValueError("p must be at least 2")

    def v(x, y):
        return (x % p) * p + (y % p)

    def e(x, y, d):
        return 2 * v(x, y) + d

    xr, xc, zr, zc = [], [], [], []
    for x in range(p):
        for y in range(p):
            for q in (e(x, y, 0), e(x, y, 1), e(x - 1, y, 0), e(x, y - 1, 1)):
                xr.append(v(x, y))
                xc.append(q)
            for q in (e(x, y, 0), e(x, y, 1), e(x + 1, y, 1), e(x, y + 1, 0)):
                zr.append(v(x, y))
                zc.append(q)
    hx = SparseBinaryMatrix.from_pairs(xr, xc, p * p, 2 * p * p)
    hz = SparseBinaryMatrix.from_pairs(zr, zc, p * p, 2 * p * p)
    code = CssCode(hx, hz, meta={"family": "toric-direct", "p": p})
    code.check_commutation()
    return code


# ------------------------------------------------------- brute-force distance

NO_LOGICALS = "no logical operators"


def _row_masks(m: SparseBinaryMatrix) -> list[int]:
    return [sum(1 << int(c) for c in m.row(i)) for i in range(m.n_rows)]


def _echelon(masks: list[int]) -> list[int]:
    basis: list[int] = []
    for v in masks:
        for b in basis:
            v = min(v, v ^ b)
        if v:
            basis.append(v)
            basis.sort(reverse=True)
    return basis


def _min_logical(checks: SparseBinaryMatrix, stabs: SparseBinaryMatrix) -> int | None:
    n = checks.n_cols
    vecs = np.arange(1, 1 << n, dtype=np.int64)
    ok = np.ones(len(vecs), dtype=bool)
    for mask in _row_masks(checks):
        ok &= (np.bitwise_count(vecs & mask) & 1) == 0
    cand = vecs[ok]
    reduced = cand.copy()
    for b in _echelon(_row_masks(stabs)):
        top = b.bit_length() - 1
        hit = (reduced >> top) & 1 == 1
        reduced[hit] ^= b
    logical = cand[reduced != 0]
    if logical.size == 0:
        return None
    return int(np.bitwise_count(logical).min())


@dataclass(frozen=True)
class DistanceResult:
    d: int | str
    d_x: int | str
    d_z: int | str


def min_distance_brute(code: CssCode, max_n: int = 20) -> DistanceResult:
    """Minimum logical weight by exhausting all 2^n vectors.

    d_z: lightest Z-logical (kernel of H_X outside the row space of H_Z);
    d_x: the symmetric X version.  Codes with k = 0 get NO_LOGICALS.
    """
    if code.n > max_n:
        raise ValueError(f"n = {code.n} exceeds the brute-force limit {max_n}")
    dz = _min_logical(code.hx, code.hz)
    dx = _min_logical(code.hz, code.hx)
    if dz is None or dx is None:
        return DistanceResult(NO_LOGICALS, NO_LOGICALS, NO_LOGICALS)
    return DistanceResult(min(dx, dz), dx, dz)


# ----------------------------------------------------------------- export


def write_matrix_market(m: SparseBinaryMatrix, path: str | Path) -> None:
    rows = np.repeat(np.arange(m.n_rows), np.diff(m.indptr)) + 1
    body = "\n".join(f"{r} {c}" for r, c in zip(rows.tolist(), (m.indices + 1).tolist()))
    text = f"%%MatrixMarket matrix coordinate pattern general\n{m.n_rows} {m.n_cols} {m.nnz}\n"
    Path(path).write_text(text + body + ("\n" if body else ""))


def read_matrix_market(path: str | Path) -> SparseBinaryMatrix:
    lines = [ln for ln in Path(path).read_text().splitlines() if ln and not ln.startswith("%")]
    n_rows, n_cols, nnz = map(int, lines[0].split())
    data = np.array([ln.split() for ln in lines[1 : 1 + nnz]], dtype=np.int64).reshape(-1, 2)
    return SparseBinaryMatrix.from_pairs(data[:, 0] - 1, data[:, 1] - 1, n_rows, n_cols)


def _padded(lists, width):
    return "\n".join(" ".join(str(x) for x in list(row) + [0] * (width - len(row))) for row in lists)


def write_alist(m: SparseBinaryMatrix, path: str | Path) -> None:
    """MacKay alist: N M, max degrees, column degrees, row degrees, then the lists (1-based, 0-padded)."""
    t = m.transpose()
    cw, rw = m.col_weights(), m.row_weights()
    max_c = int(cw.max()) if len(cw) else 0
    max_r = int(rw.max()) if len(rw) else 0
    parts = [
        f"{m.n_cols} {m.n_rows}",
        f"{max_c} {max_r}",
        " ".join(map(str, cw.tolist())),
        " ".join(map(str, rw.tolist())),
        _padded([(t.row(j) + 1).tolist() for j in range(m.n_cols)], max_c),
        _padded([(m.row(i) + 1).tolist() for i in range(m.n_rows)], max_r),
    ]
    Path(path).write_text("\n".join(parts) + "\n")


def read_alist(path: str | Path) -> SparseBinaryMatrix:
    lines = Path(path).read_text().splitlines()
    n_cols, n_rows = map(int, lines[0].split())
    rows, cols = [], []
    for i in range(n_rows):
        for c in map(int, lines[4 + n_cols + i].split()):
            if c:
                rows.append(i)
                cols.append(c - 1)
    return SparseBinaryMatrix.from_pairs(rows, cols, n_rows, n_cols)


def code_metadata(code: CssCode) -> dict:
    """The fixed-key summary written next to exported matrices."""
    counts = code.meta.get("face_counts", [])
    chi = euler_characteristic(counts) if counts else None
    return {
        "ideal": code.meta.get("ideal"),
        "group_order": code.meta.get("group_order"),
        "face_counts": list(counts),
        "n": code.n,
        "chi": chi,
        "k_lower_bound": None if chi is None else rate_lower_bound(chi, code.n).k_min,
        "row_weights": {
            "hx": sorted(set(code.hx.row_weights().tolist())),
            "hz": sorted(set(code.hz.row_weights().tolist())),
        },
        "col_weights": {
            "hx": sorted(set(code.hx.col_weights().tolist())),
            "hz": sorted(set(code.hz.col_weights().tolist())),
        },
    }


def write_metadata(code: CssCode, path: str | Path) -> None:
    Path(path).write_text(json.dumps(code_metadata(code), indent=2, sort_keys=True) + "\n")
