"""Local cycle-shortening decoders, residual checks, and the Monte Carlo harness.

Z-errors (qubits = 2-faces) have edge-loop syndromes; the Z-decoder looks
for syndrome subpaths of length <= 8 whose endpoints are closer than the
path is long, swaps the path for a shortest one, and flips a set of 2-faces
bounded by the difference.  X-errors have syndromes on 3-faces, i.e. edges
of the dual tessellation; the X-decoder does the same inside the dual
120-cell around one primal vertex.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterator, Sequence

import numpy as np
import scipy.sparse as sp
from scipy.sparse.csgraph import shortest_path

from .chain import CssCode, SparseBinaryMatrix, build_css_code
from .tessellation import Tessellation

__all__ = [
    "ErrorChain",
    "Syndrome",
    "DecoderConfig",
    "DecoderReport",
    "DecoderContext",
    "syndrome_of",
    "decode_z",
    "decode_x",
    "decode_greedy",
    "shorten_move",
    "residual_check",
    "monte_carlo",
    "gf2_solve",
    "trial_rng",
    "sample_error",
    "MonteCarloResult",
    "CSV_HEADER",
]

SUCCESS, LOGICAL_SUSPECT, STALLED = "success", "logical_suspect", "stalled"
CSV_HEADER = ("trial", "weight", "syndrome_weight", "iterations", "verdict")


@dataclass(frozen=True)
class ErrorChain:
    """Sorted qubit ids with the Pauli type ("X" or "Z")."""

    qubits: tuple[int, ...]
    kind: str

    def __post_init__(self):
        if self.kind not in ("X", "Z"):
            raise ValueError(f"error type must be X or Z, got {self.kind!r}")
        object.__setattr__(self, "qubits", tuple(sorted(int(q) for q in self.qubits)))

    def __len__(self):
        return len(self.qubits)

    def __xor__(self, other: ErrorChain) -> ErrorChain:
        if other.kind != self.kind:
            raise ValueError("cannot combine X and Z chains")
        return ErrorChain(tuple(set(self.qubits) ^ set(other.qubits)), self.kind)


@dataclass(frozen=True)
class Syndrome:
    checks: tuple[int, ...]
    kind: str

    def __len__(self):
        return len(self.checks)


def _check_matrix(code: CssCode, kind: str) -> SparseBinaryMatrix:
    # Z errors anticommute with X-checks and vice versa
    return code.hx if kind == "Z" else code.hz


def syndrome_of(code: CssCode, e: ErrorChain) -> Syndrome:
    rows = _check_matrix(code, e.kind).matvec(np.asarray(e.qubits, dtype=np.int64))
    return Syndrome(tuple(int(r) for r in rows), e.kind)


# ------------------------------------------------------------- GF(2) solve


def gf2_solve(columns: Sequence[Sequence[int]], target: Sequence[int]) -> list[int] | None:
    """Indices of a subset of `columns` whose symmetric difference is `target`.

    Columns are taken greedily in the given order; a column already in the
    span of earlier ones is never used, so the answer is the particular
    solution with all free variables at zero.  None if no solution exists.
    """
    rows: dict[int, int] = {}
    for col in columns:
        for r in col:
            rows.setdefault(int(r), len(rows))
    goal = 0
    for r in target:
        r = int(r)
        if r not in rows:
            return None
        goal ^= 1 << rows[r]
    if goal == 0:
        return []
    basis: dict[int, tuple[int, int]] = {}
    for j, col in enumerate(columns):
        v = 0
        for r in col:
            v ^= 1 << rows[int(r)]
        c = 1 << j
        while v:
            p = v.bit_length() - 1
            hit = basis.get(p)
            if hit is None:
                basis[p] = (v, c)
                break
            v ^= hit[0]
            c ^= hit[1]
    v, c = goal, 0
    while v:
        hit = basis.get(v.bit_length() - 1)
        if hit is None:
            return None
        v ^= hit[0]
        c ^= hit[1]
    return [j for j in range(len(columns)) if c >> j & 1]


# --------------------------------------------------------------- context


def _csr_rows(pairs_row: np.ndarray, pairs_col: np.ndarray, n_rows: int) -> tuple[np.ndarray, np.ndarray]:
    order = np.lexsort((pairs_col, pairs_row))
    indptr = np.zeros(n_rows + 1, dtype=np.int64)
    np.cumsum(np.bincount(pairs_row, minlength=n_rows), out=indptr[1:])
    return indptr, pairs_col[order]


@dataclass(frozen=True)
class DecoderConfig:
    max_len: int = 8
    max_replacements: int = 8
    max_len_x: int = 15


class DecoderContext:
    """Incidence lookups for a 4-D tessellation, built once and shared."""

    def __init__(self, tess: Tessellation, code: CssCode | None = None):
        if tess.top_dim != 4:
            raise ValueError("cycle-shortening decoders need a 4-dimensional tessellation")
        self.tess = tess
        self.code = code if code is not None else build_css_code(tess)
        nv = tess.counts[0]
        self.edge_vertices = tess.vertex_sets[1]
        self.square_vertices = tess.vertex_sets[2]
        self.cube_vertices = tess.vertex_sets[3]
        self.square_edges = tess.down(2)[1].reshape(tess.counts[2], -1)
        self.edge_squares = tess.up(1)[1].reshape(tess.counts[1], -1)
        self.cube_squares = tess.down(3)[1].reshape(tess.counts[3], -1)
        self.square_cubes = tess.up(2)[1].reshape(tess.counts[2], -1)
        self.cube_hypercubes = tess.up(3)[1].reshape(tess.counts[3], -1)
        self.vertex_squares = tess.faces_at_vertex(2)
        self.vertex_cubes = tess.faces_at_vertex(3)
        self.vertex_hypercubes = tess.faces_at_vertex(4)
        indptr, nbr, eid = tess.vertex_adjacency
        deg = np.diff(indptr)
        if deg.min() != deg.max():
            raise ValueError("vertex graph is not regular")
        self.neighbors = nbr.reshape(nv, -1)
        self.edge_id = np.full((nv, nv), -1, dtype=np.int32)
        self.edge_id[np.repeat(np.arange(nv), deg), nbr] = eid

    @cached_property
    def vertex_distance(self) -> np.ndarray:
        ev = self.edge_vertices
        nv = self.tess.counts[0]
        a = sp.coo_matrix((np.ones(len(ev)), (ev[:, 0], ev[:, 1])), shape=(nv, nv))
        d = shortest_path((a + a.T).tocsr(), unweighted=True, directed=False)
        return d.astype(np.int16)

    def _star(self, i: int, v: int) -> np.ndarray:
        indptr, idx = getattr(self, ("vertex_squares", "vertex_cubes", "vertex_hypercubes")[i - 2])
        return idx[indptr[v] : indptr[v + 1]]

    @cached_property
    def _cells(self) -> dict:
        return {}

    def cell(self, v: int) -> "_Cell":
        """The dual 120-cell around primal vertex v, cached."""
        c = self._cells.get(v)
        if c is None:
            c = _Cell(self, v)
            if len(self._cells) > 4096:
                self._cells.clear()
            self._cells[v] = c
        return c


class _Cell:
    """Dual 120-cell at a primal vertex: hypercubes as nodes, cubes as edges."""

    def __init__(self, ctx: DecoderContext, v: int):
        self.v = v
        self.nodes = ctx._star(4, v)
        self.edges = ctx._star(3, v)
        ends = ctx.cube_hypercubes[self.edges]
        self.local = {int(h): i for i, h in enumerate(self.nodes)}
        a = np.searchsorted(self.nodes, ends[:, 0])
        b = np.searchsorted(self.nodes, ends[:, 1])
        n = len(self.nodes)
        self.graph = sp.coo_matrix((np.ones(len(a)), (a, b)), shape=(n, n))
        self.graph = (self.graph + self.graph.T).tocsr()
        self.adj = [[] for _ in range(n)]
        for k, (x, y) in enumerate(zip(a.tolist(), b.tolist())):
            c = int(self.edges[k])
            self.adj[x].append((y, c))
            self.adj[y].append((x, c))
        for lst in self.adj:
            lst.sort()
        self._dist: dict[int, np.ndarray] = {}

    def dist_from(self, h: int) -> np.ndarray:
        i = self.local[h]
        d = self._dist.get(i)
        if d is None:
            d = shortest_path(self.graph, unweighted=True, directed=False, indices=i).astype(np.int32)
            self._dist[i] = d
        return d


# ----------------------------------------------------------------- reports


@dataclass
class DecoderReport:
    estimate: ErrorChain
    iterations: int
    flips: int
    residual_syndrome_weight: int
    verdict: str
    paths_examined: int = 0
    notes: list[str] = field(default_factory=list)
    weights: list[int] = field(default_factory=list)  # syndrome weight before each move and at the end


def _syndrome_adjacency(edges, ends) -> dict[int, list[tuple[int, int]]]:
    adj: dict[int, list[tuple[int, int]]] = {}
    for e in sorted(edges):
        a, b = ends(e)
        adj.setdefault(a, []).append((e, b))
        adj.setdefault(b, []).append((e, a))
    return adj


def _paths(adj, start: int, first: tuple[int, int], length: int, allow=None) -> Iterator[tuple[list[int], list[int]]]:
    """Edge-simple paths of exactly `length` edges beginning with edge `first`.

    Vertices may not repeat except that the last may equal the first.
    """
    e0, v1 = first
    verts, edges = [start, v1], [e0]
    used_v = {start, v1}
    used_e = {e0}
    if length == 1:
        yield verts[:], edges[:]
        return

    def rec():
        u = verts[-1]
        for e, w in adj.get(u, ()):
            if e in used_e or (allow is not None and not allow(e)):
                continue
            closing = w == start and len(edges) + 1 == length
            if w in used_v and not closing:
                continue
            verts.append(w)
            edges.append(e)
            used_e.add(e)
            if len(edges) == length:
                yield verts[:], edges[:]
            elif not closing:
                used_v.add(w)
                yield from rec()
                used_v.discard(w)
            used_e.discard(e)
            verts.pop()
            edges.pop()

    yield from rec()


def _near(adj, seeds: set[int], hops: int) -> set[int]:
    """Syndrome edges within `hops` steps of the seed vertices."""
    seen, frontier, out = set(seeds), set(seeds), set()
    for _ in range(hops):
        nxt = set()
        for u in frontier:
            for e, w in adj.get(u, ()):
                out.add(e)
                if w not in seen:
                    seen.add(w)
                    nxt.add(w)
        frontier = nxt
    return out


# ---------------------------------------------------------------- Z-decoder


def _shortest_vertex_paths(ctx: DecoderContext, a: int, b: int, limit: int) -> Iterator[list[int]]:
    """Shortest vertex paths a -> b, lexicographic in vertex ids, at most `limit`."""
    D = ctx.vertex_distance
    if a == b:
        yield [a]
        return
    count = 0
    path = [a]

    def rec(u):
        nonlocal count
        if u == b:
            count += 1
            yield path[:]
            return
        nb = ctx.neighbors[u]
        step = nb[D[nb, b] == D[u, b] - 1]
        for w in np.sort(step).tolist():
            if count >= limit:
                return
            path.append(w)
            yield from rec(w)
            path.pop()

    yield from rec(a)


def _fill_squares(ctx: DecoderContext, cycle: set[int]) -> list[int] | None:
    """2-faces whose boundary is the edge set `cycle`, or None."""
    if not cycle:
        return []
    edges = np.fromiter(cycle, dtype=np.int64)
    verts = np.unique(ctx.edge_vertices[edges])
    in_c = np.zeros(ctx.tess.counts[1], dtype=bool)
    in_c[edges] = True
    level0 = np.unique(ctx.edge_squares[edges])
    star = np.concatenate([ctx._star(2, v) for v in verts.tolist()])
    sq, cnt = np.unique(star, return_counts=True)
    level1 = np.union1d(level0, sq[cnt >= 2])
    for cand in (level0, level1):
        n_edges = in_c[ctx.square_edges[cand]].sum(axis=1)
        n_verts = np.isin(ctx.square_vertices[cand], verts).sum(axis=1)
        cand = cand[np.lexsort((cand, -n_verts, -n_edges))]
        sol = gf2_solve([ctx.square_edges[s] for s in cand.tolist()], edges)
        if sol is not None:
            return sorted(int(cand[j]) for j in sol)
    return None


def shorten_move(ctx: DecoderContext, old_path: Sequence[int], new_path: Sequence[int], kind: str = "Z", vertex: int | None = None) -> list[int] | None:
    """Qubits whose flip turns `old_path` into `new_path` in the syndrome.

    Z: paths are edge ids and the answer is a set of 2-faces with boundary
    old ^ new.  X: paths are 3-face ids inside the dual 120-cell at
    `vertex`, and the answer uses the 2-faces at that vertex.
    None when no such set exists within the candidate region.
    """
    cycle = set(old_path) ^ set(new_path)
    if kind == "Z":
        return _fill_squares(ctx, cycle)
    if vertex is None:
        raise ValueError("X moves need the primal vertex of the 120-cell")
    return _fill_pentagons(ctx, cycle, vertex)


def decode_z(ctx: DecoderContext, s: Syndrome, config: DecoderConfig = DecoderConfig()) -> DecoderReport:
    """Shorten non-minimal syndrome subpaths of length <= max_len until none remain."""
    S = set(s.checks)
    D = ctx.vertex_distance
    ev = ctx.edge_vertices
    estimate: set[int] = set()
    dirty = set(S)
    iterations = flips = examined = 0
    w0 = len(S)
    trace = [w0]

    def ends(e):
        return int(ev[e, 0]), int(ev[e, 1])

    while S and dirty:
        adj = _syndrome_adjacency(S, ends)
        moved = False
        for length in range(2, config.max_len + 1):
            for e in sorted(dirty):
                for a, b in (ends(e), ends(e)[::-1]):
                    for verts, edges in _paths(adj, a, (e, b), length):
                        examined += 1
                        x, y = verts[0], verts[-1]
                        if D[x, y] >= length:
                            continue
                        for q in _shortest_vertex_paths(ctx, x, y, config.max_replacements):
                            q_edges = [int(ctx.edge_id[u, w]) for u, w in zip(q, q[1:])]
                            fill = _fill_squares(ctx, set(edges) ^ set(q_edges))
                            if fill is None:
                                continue
                            before = len(S)
                            S ^= set(edges) ^ set(q_edges)
                            assert len(S) < before, "move did not shorten the syndrome"
                            trace.append(len(S))
                            estimate ^= set(fill)
                            flips += len(fill)
                            iterations += 1
                            adj = _syndrome_adjacency(S, ends)
                            dirty = (dirty & S) | _near(adj, set(q) | {x, y}, config.max_len)
                            moved = True
                            break
                        if moved:
                            break
                    if moved:
                        break
                if moved:
                    break
            if moved:
                break
        if not moved:
            dirty = set()
    bound = max(1, w0) * 2 * max(1, iterations + 1) * 3 ** (config.max_len - 1)
    assert examined <= bound, "path exploration exceeded its bound"
    return DecoderReport(
        estimate=ErrorChain(tuple(sorted(estimate)), "Z"),
        iterations=iterations,
        flips=flips,
        residual_syndrome_weight=len(S),
        verdict=SUCCESS if not S else STALLED,
        paths_examined=examined,
        weights=trace,
    )


# ---------------------------------------------------------------- X-decoder


def _fill_pentagons(ctx: DecoderContext, cycle: set[int], v: int) -> list[int] | None:
    """2-faces at v whose 3-face coboundary is `cycle` (3-faces at v), or None."""
    if not cycle:
        return []
    cubes = np.fromiter(cycle, dtype=np.int64)
    star = ctx._star(2, v)
    in_c = np.zeros(ctx.tess.counts[3], dtype=bool)
    in_c[cubes] = True
    level0 = np.intersect1d(np.unique(ctx.cube_squares[cubes]), star)
    for cand in (level0, star):
        hits = in_c[ctx.square_cubes[cand]].sum(axis=1)
        cand = cand[np.lexsort((cand, -hits))]
        sol = gf2_solve([ctx.square_cubes[s] for s in cand.tolist()], cubes)
        if sol is not None:
            return sorted(int(cand[j]) for j in sol)
    return None


def _cell_shortest_paths(cell: _Cell, a: int, b: int, limit: int) -> Iterator[list[int]]:
    """Shortest cube paths between hypercubes a and b inside the cell."""
    if a == b:
        yield []
        return
    dist_b = cell.dist_from(b)
    count = 0
    path: list[int] = []

    def rec(u):
        nonlocal count
        if u == cell.local[b]:
            count += 1
            yield path[:]
            return
        for w, c in cell.adj[u]:
            if count >= limit:
                return
            if dist_b[w] == dist_b[u] - 1:
                path.append(c)
                yield from rec(w)
                path.pop()

    yield from rec(cell.local[a])


def decode_x(ctx: DecoderContext, s: Syndrome, config: DecoderConfig = DecoderConfig()) -> DecoderReport:
    """Shorten non-minimal syndrome subpaths lying in one dual 120-cell."""
    S = set(s.checks)
    ch = ctx.cube_hypercubes
    cv = ctx.cube_vertices
    estimate: set[int] = set()
    dirty = set(S)
    iterations = flips = examined = 0
    trace = [len(S)]

    def ends(c):
        return int(ch[c, 0]), int(ch[c, 1])

    while S and dirty:
        adj = _syndrome_adjacency(S, ends)
        moved = False
        for length in range(2, config.max_len_x + 1):
            for c0 in sorted(dirty):
                for v in cv[c0].tolist():
                    cell = None
                    on_v = lambda c, v=v: v in cv[c]
                    for a, b in (ends(c0), ends(c0)[::-1]):
                        for nodes, cubes in _paths(adj, a, (c0, b), length, allow=on_v):
                            examined += 1
                            cell = cell or ctx.cell(v)
                            x, y = nodes[0], nodes[-1]
                            if x != y and cell.dist_from(x)[cell.local[y]] >= length:
                                continue
                            for q in _cell_shortest_paths(cell, x, y, config.max_replacements):
                                fill = _fill_pentagons(ctx, set(cubes) ^ set(q), v)
                                if fill is None:
                                    continue
                                before = len(S)
                                S ^= set(cubes) ^ set(q)
                                assert len(S) < before, "move did not shorten the syndrome"
                                trace.append(len(S))
                                estimate ^= set(fill)
                                flips += len(fill)
                                iterations += 1
                                adj = _syndrome_adjacency(S, ends)
                                touched = {x, y} | {h for c in q for h in ends(c)}
                                dirty = (dirty & S) | _near(adj, touched, config.max_len_x)
                                moved = True
                                break
                            if moved:
                                break
                        if moved:
                            break
                    if moved:
                        break
                if moved:
                    break
            if moved:
                break
        if not moved:
            dirty = set()
    return DecoderReport(
        estimate=ErrorChain(tuple(sorted(estimate)), "X"),
        iterations=iterations,
        flips=flips,
        residual_syndrome_weight=len(S),
        verdict=SUCCESS if not S else STALLED,
        paths_examined=examined,
        weights=trace,
    )


# ------------------------------------------------------------ generic codes


def _check_bfs(h: SparseBinaryMatrix, cols: SparseBinaryMatrix, src: int) -> tuple[dict, dict]:
    """Distances and parent (check, qubit) in the graph of checks sharing a qubit."""
    dist, parent = {src: 0}, {}
    frontier = [src]
    while frontier:
        nxt = []
        for c in frontier:
            for q in h.row(c).tolist():
                for d in cols.row(q).tolist():
                    if d not in dist:
                        dist[d] = dist[c] + 1
                        parent[d] = (c, q)
                        nxt.append(d)
        frontier = nxt
    return dist, parent


def decode_greedy(code: CssCode, s: Syndrome, max_iter: int | None = None) -> DecoderReport:
    """Greedy pairing for codes whose qubits touch at most two checks (toric, 2-D).

    Repeatedly joins the closest pair of syndrome checks (ties to the
    smallest ids) along a shortest path.  A defect with no partner in
    reach stalls the decoder.  Codes with heavier columns fall back to
    flipping the qubit that removes the most syndrome bits.
    """
    h = _check_matrix(code, s.kind)
    cols = h.transpose()
    S = set(s.checks)
    estimate: set[int] = set()
    it = 0
    limit = max_iter or 4 * (len(S) + 1)
    pairing = int(cols.row_weights().max(initial=0)) <= 2
    trace = [len(S)]
    while S and it < limit:
        if pairing:
            best = None
            for a in sorted(S):
                dist, parent = _check_bfs(h, cols, a)
                for b in sorted(S):
                    if b > a and b in dist and (best is None or dist[b] < best[0]):
                        best = (dist[b], a, b, parent)
            if best is None:
                break
            _, a, b, parent = best
            path = []
            while b != a:
                b, q = parent[b]
                path.append(q)
            flips = path
        else:
            cand = sorted({int(q) for r in S for q in h.row(r)})
            gain, neg_q = max((2 * sum(int(c) in S for c in cols.row(q)) - len(cols.row(q)), -q) for q in cand)
            if gain <= 0:
                break
            flips = [-neg_q]
        for q in flips:
            S ^= {int(c) for c in cols.row(q)}
            estimate ^= {q}
        it += 1
        trace.append(len(S))
    return DecoderReport(
        estimate=ErrorChain(tuple(sorted(estimate)), s.kind),
        iterations=it,
        flips=len(estimate),
        residual_syndrome_weight=len(S),
        verdict=SUCCESS if not S else STALLED,
        weights=trace,
    )


# ----------------------------------------------------------------- residual


def residual_check(code: CssCode, true_error: ErrorChain, estimate: ErrorChain, max_level: int = 2) -> str:
    """success iff E ^ E' has zero syndrome and is a local sum of stabilizers.

    Z residuals are filled with Z-checks (rows of H_Z), X residuals with
    X-checks.  Candidates start with the checks touching the residual and
    grow by one shell of check adjacency per level.
    """
    r = true_error ^ estimate
    if not r.qubits:
        return SUCCESS
    if syndrome_of(code, r).checks:
        return STALLED
    stab = code.hz if r.kind == "Z" else code.hx
    by_qubit = stab.transpose()
    qubits = np.asarray(r.qubits, dtype=np.int64)
    region = qubits
    for _ in range(max_level):
        cand = np.unique(np.concatenate([by_qubit.row(q) for q in region.tolist()]))
        sol = gf2_solve([stab.row(c) for c in cand.tolist()], qubits)
        if sol is not None:
            return SUCCESS
        region = np.unique(np.concatenate([stab.row(c) for c in cand.tolist()]))
    return LOGICAL_SUSPECT


# -------------------------------------------------------------- Monte Carlo


def trial_rng(seed: int, trial: int) -> np.random.Generator:
    """Counter-based stream: Philox keyed by the master seed, trial in the high counter word."""
    return np.random.Generator(np.random.Philox(key=int(seed), counter=[0, 0, 0, int(trial)]))


def sample_error(n: int, rng: np.random.Generator, weight: int | None = None, p: float | None = None) -> np.ndarray:
    if (weight is None) == (p is None):
        raise ValueError("give exactly one of weight or p")
    if weight is not None:
        return np.sort(rng.choice(n, size=weight, replace=False))
    return np.flatnonzero(rng.random(n) < p)


@dataclass
class MonteCarloResult:
    rows: list[tuple]
    kind: str

    @property
    def success_rate(self) -> float:
        if not self.rows:
            return 1.0
        return sum(r[4] == SUCCESS for r in self.rows) / len(self.rows)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_HEADER)
        w.writerows(self.rows)
        return buf.getvalue()


def _trial_row(code, kind, seed, t, weight, p, ctx, config, col_weight) -> tuple:
    err = ErrorChain(tuple(sample_error(code.n, trial_rng(seed, t), weight, p).tolist()), kind)
    syn = syndrome_of(code, err)
    assert len(syn) <= col_weight * len(err), "syndrome heavier than the column-weight bound"
    if ctx is not None:
        report = (decode_z if kind == "Z" else decode_x)(ctx, syn, config)
    else:
        report = decode_greedy(code, syn)
    verdict = report.verdict if report.verdict != SUCCESS else residual_check(code, err, report.estimate)
    return (t, len(err), len(syn), report.iterations, verdict)


_WORKER_STATE: tuple | None = None


def _worker_rows(trials: range) -> list[tuple]:
    return [_trial_row(*_WORKER_STATE[:3], t, *_WORKER_STATE[3:]) for t in trials]


def monte_carlo(
    code: CssCode,
    kind: str,
    trials: int,
    seed: int,
    weight: int | None = None,
    p: float | None = None,
    ctx: DecoderContext | None = None,
    config: DecoderConfig = DecoderConfig(),
    workers: int = 1,
) -> MonteCarloResult:
    """Decode random errors; one row (trial, weight, syndrome_weight, iterations, verdict) per trial.

    With a DecoderContext the cycle-shortening decoders are used, otherwise
    the greedy decoder.  Each trial draws from its own stream, so `workers`
    forked processes produce the same rows as a serial run.
    """
    global _WORKER_STATE
    if trials < 1:
        raise ValueError("trials must be positive")
    col_weight = int(_check_matrix(code, kind).col_weights().max())
    args = (code, kind, seed, weight, p, ctx, config, col_weight)
    if workers <= 1 or trials < 2 * workers:
        rows = [_trial_row(*args[:3], t, *args[3:]) for t in range(trials)]
        return MonteCarloResult(rows, kind)
    import multiprocessing as mp

    chunks = [range(a, min(a + 50, trials)) for a in range(0, trials, 50)]
    _WORKER_STATE = args
    try:
        with mp.get_context("fork").Pool(workers) as pool:
            rows = [r for part in pool.map(_worker_rows, chunks) for r in part]
    finally:
        _WORKER_STATE = None
    return MonteCarloResult(rows, kind)
