"""Cone containment and the non-minimality lemmas behind the decoders.

A cone C_e for a directed edge e = (v1 -> v2) is the set of points closer
to e than to any other edge at v2: the intersection of the bisector
half-spaces <x, d_f - d_e> <= 0 where d_f are unit tangents at v2.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass, field

import mpmath
import numpy as np

from .tessellation import CombinatorialComplex, build_120cell_skeleton, build_h2_disk, _key

__all__ = [
    "Cone",
    "cone_contains",
    "LemmaReport",
    "H2PathGeometry",
    "verify_lemma_2d",
    "verify_lemma_120cell",
    "search_lemma_4d",
]

YES, NO, UNDECIDED = "yes", "no", "undecided"


@dataclass
class LemmaReport:
    lemma: str
    checked: int
    counterexamples: list = field(default_factory=list)
    budget_exhausted: bool = False
    details: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return not self.counterexamples and not self.budget_exhausted

    def to_json(self) -> str:
        doc = {
            "lemma": self.lemma,
            "checked": self.checked,
            "counterexamples": self.counterexamples,
            "budget_exhausted": self.budget_exhausted,
        }
        return json.dumps(doc, sort_keys=True)

    def to_text(self) -> str:
        status = "FAIL" if self.counterexamples else "budget exhausted" if self.budget_exhausted else "pass"
        lines = [f"lemma {self.lemma}: {status}", f"  checked: {self.checked}"]
        for k, v in self.details.items():
            lines.append(f"  {k}: {v}")
        for c in self.counterexamples[:10]:
            lines.append(f"  counterexample: {c}")
        return "\n".join(lines)


# ------------------------------------------------------------------- cones


def _lorentz(x, y):
    return -x[0] * y[0] + sum(x[i] * y[i] for i in range(1, len(x)))


@dataclass
class Cone:
    """Half-spaces <x, n> <= 0 with an apex; `witnesses` (apex plus ideal
    points of the extreme rays) are given when the cone's extreme directions
    are known, which makes containment a finite sign test."""

    apex: object
    normals: list
    witnesses: list | None = None
    mode: str = "mp"

    def transform(self, g) -> Cone:
        """Image under a Lorentz transformation g (normals map like points)."""
        mul = (lambda v: g * v) if self.mode == "mp" else (lambda v: g @ v)
        return Cone(
            apex=mul(self.apex),
            normals=[mul(n) for n in self.normals],
            witnesses=None if self.witnesses is None else [mul(w) for w in self.witnesses],
            mode=self.mode,
        )


def _tolerances(mode: str) -> tuple[float, float]:
    if mode == "mp":
        eps = mpmath.mpf(10) ** (-(mpmath.mp.dps // 2))
        return eps, eps * 10**5
    return 1e-9, 1e-6


def cone_contains(outer: Cone, inner: Cone, max_cuts: int = 60) -> str:
    """Three-valued test of inner ⊆ outer.

    With witnesses on the inner cone the answer is a finite sign test
    (values within the zero tolerance count as on the boundary).  Otherwise
    each outer half-space is checked by a cutting-plane LP over the inner
    cone in the projective ball; an LP optimum inside the ball with a
    positive value is a sound "no", a non-positive optimum over a superset
    is a sound "yes", and anything else is "undecided".
    """
    if outer.mode != inner.mode:
        raise ValueError("cones must use the same representation mode")
    zero, margin = _tolerances(inner.mode)
    if inner.witnesses is not None:
        worst = max(_lorentz(w, n) / _scale(w) for w in inner.witnesses for n in outer.normals)
        if worst <= zero:
            return YES
        return NO if worst > margin else UNDECIDED
    apex_vals = [_lorentz(inner.apex, n) for n in outer.normals]
    if max(apex_vals) > margin:
        return NO
    verdict = YES
    # likely violators first: a single "no" settles the test
    order = sorted(range(len(apex_vals)), key=lambda i: -float(apex_vals[i]))
    for i in order:
        r = _lp_halfspace(inner, outer.normals[i], max_cuts, zero, margin)
        if r == NO:
            return NO
        if r == UNDECIDED:
            verdict = UNDECIDED
    return verdict


def _scale(w):
    return abs(w[0])


def _sphere_exit(p: np.ndarray, u: np.ndarray) -> float:
    """t >= 0 with |p + t u| = 1, for |p| < 1."""
    a, b, c = u @ u, 2 * p @ u, p @ p - 1
    return (-b + math.sqrt(b * b - 4 * a * c)) / (2 * a)


def _lp_halfspace(inner: Cone, n, max_cuts: int, zero: float, margin: float) -> str:
    """Is max <(1,z), n> over the inner cone (|z| <= 1) non-positive?"""
    from scipy.optimize import linprog

    n = np.asarray(n, dtype=float)
    A = np.array([np.asarray(m, dtype=float)[1:] for m in inner.normals])
    b = np.array([float(m[0]) for m in inner.normals])
    d = len(n) - 1
    apex = np.asarray(inner.apex, dtype=float)
    a0 = apex[1:] / apex[0]
    cuts_A, cuts_b = [], []
    for _ in range(max_cuts):
        A_ub = np.vstack([A] + cuts_A) if cuts_A else A
        b_ub = np.concatenate([b, cuts_b]) if cuts_b else b
        res = linprog(-n[1:], A_ub=A_ub, b_ub=b_ub, bounds=[(-1, 1)] * d, method="highs")
        if res.status != 0:
            return UNDECIDED
        z = res.x
        val = -n[0] + n[1:] @ z
        if val <= zero:
            return YES
        norm = np.linalg.norm(z)
        if norm <= 1 + 1e-12:
            return NO if val > margin else UNDECIDED
        # the segment apex -> z stays in the polyhedron; where it meets the
        # sphere is an ideal point of the inner cone
        y = a0 + _sphere_exit(a0, z - a0) * (z - a0)
        if -n[0] + n[1:] @ y > margin:
            return NO
        cuts_A.append((z / norm)[None, :])
        cuts_b.append(1.0)
    return UNDECIDED


# ------------------------------------------------------------ 2-D geometry


class H2PathGeometry:
    """High-precision motions of the {p,q} tessellation for walking edge paths.

    The base directed edge runs from P_0 to P_1 of the base face.  A path
    is a list of turns j in 1..q-1: the next head is the old tail rotated
    about the current head by j steps of 2*pi/q.
    """

    def __init__(self, p: int, q: int):
        if (p - 2) * (q - 2) <= 4:
            raise ValueError(f"{{{p},{q}}} is not hyperbolic")
        self.p, self.q = p, q
        pi = mpmath.pi
        rot = lambda t: mpmath.matrix([[1, 0, 0], [0, mpmath.cos(t), -mpmath.sin(t)], [0, mpmath.sin(t), mpmath.cos(t)]])
        boost = lambda r: mpmath.matrix([[mpmath.cosh(r), mpmath.sinh(r), 0], [mpmath.sinh(r), mpmath.cosh(r), 0], [0, 0, 1]])
        R = mpmath.acosh(1 / (mpmath.tan(pi / p) * mpmath.tan(pi / q)))
        to_v0 = boost(R)
        rf = rot(2 * pi / p)
        rv = to_v0 * rot(2 * pi / q) * mpmath.inverse(to_v0)
        self.v0 = to_v0 * mpmath.matrix([1, 0, 0])
        self.u0 = rf * self.v0
        apothem = mpmath.acosh(mpmath.cos(pi / q) / mpmath.sin(pi / p))
        to_mid = rot(pi / p) * boost(apothem)
        half_turn = to_mid * rot(pi) * mpmath.inverse(to_mid)
        rot_u0 = rf * rv * mpmath.inverse(rf)
        self.rot_u0 = rot_u0
        self.turn = [rot_u0**j * half_turn for j in range(q)]
        self.base_cone = self._base_cone()

    def _base_cone(self) -> Cone:
        head, tail = self.u0, self.v0
        nbrs = [self.rot_u0**k * tail for k in range(self.q)]
        ch = -_lorentz(head, tail)
        sh = mpmath.sqrt(ch**2 - 1)
        dirs = [(w - ch * head) / sh for w in nbrs]
        de = dirs[0]
        normals = [dirs[k] - de for k in range(1, self.q)]
        witnesses = [head]
        for k in (1, self.q - 1):  # angular neighbours of e
            u = de + dirs[k]
            u = u / mpmath.sqrt(_lorentz(u, u))
            witnesses.append(head + u)
        return Cone(apex=head, normals=normals, witnesses=witnesses, mode="mp")

    def frames(self, turns) -> list:
        """Motion E_k carrying the base edge onto the k-th edge of the path."""
        out = [mpmath.eye(3)]
        for j in turns:
            out.append(out[-1] * self.turn[j])
        return out

    def vertices(self, turns) -> list:
        fr = self.frames(turns)
        return [self.v0] + [f * self.u0 for f in fr]

    def cones(self, turns) -> list[Cone]:
        return [self.base_cone.transform(f) for f in self.frames(turns)]


def _vertex_ids(disk: CombinatorialComplex, points) -> list[int]:
    ids = []
    for x in points:
        key = _key(np.array([float(c) for c in x]))
        if key not in disk.vertex_key:
            raise KeyError("path left the disk; build more layers")
        ids.append(disk.vertex_key[key])
    return ids


def _mirror(turns, q):
    return tuple(q - j for j in turns)


def verify_lemma_2d(p: int = 4, q: int = 5, max_len: int = 4, layers: int = 6, dps: int = 50) -> LemmaReport:
    with mpmath.workdps(dps):
        return _verify_lemma_2d(p, q, max_len, layers)


def _verify_lemma_2d(p: int, q: int, max_len: int, layers: int) -> LemmaReport:
    """Every minimal path of length max_len has edges i < j with C_{e_j} ⊇ C_{e_i}.

    Paths start on the base directed edge (the symmetry group is transitive
    on directed edges) and are counted up to the mirror through that edge.
    Also classifies primitive non-minimal paths (all proper subpaths minimal)
    by (length, endpoint distance).
    """
    disk = build_h2_disk(p, q, layers)
    geo = H2PathGeometry(p, q)
    start_ids = _vertex_ids(disk, [geo.v0, geo.u0])
    d0 = disk.distances_from(start_ids[0])
    d1 = disk.distances_from(start_ids[1])
    classes = set()
    counterexamples = []
    undecided = []
    strong = 0
    primitive = {}
    checked = 0
    for length in range(2, max_len + 1):
        for turns in itertools.product(range(1, q), repeat=length - 1):
            canon = min(turns, _mirror(turns, q))
            if canon != turns:
                continue
            ids = _vertex_ids(disk, geo.vertices(turns))
            end = ids[-1]
            minimal = d0[end] == length
            if not minimal:
                prefix_ok = d0[ids[-2]] == length - 1
                suffix_ok = d1[end] == length - 1
                if prefix_ok and suffix_ok:
                    primitive.setdefault((length, int(d0[end])), []).append(turns)
                continue
            if length != max_len:
                continue
            checked += 1
            classes.add(turns)
            cones = geo.cones(turns)
            pairs = []
            for i, j in itertools.combinations(range(length), 2):
                r = cone_contains(cones[j], cones[i])
                if r == YES:
                    pairs.append((i, j))
                elif r == UNDECIDED:
                    undecided.append((turns, i, j))
            if not pairs:
                counterexamples.append(list(turns))
            elif any(i == 0 for i, _ in pairs):
                strong += 1
    return LemmaReport(
        lemma=f"2d-{{{p},{q}}}",
        checked=checked,
        counterexamples=counterexamples,
        details={
            "minimal_path_classes": len(classes),
            "classes_with_first_edge_contained": strong,
            "undecided_tests": len(undecided),
            "primitive_non_minimal": {f"len{a}->dist{b}": len(v) for (a, b), v in sorted(primitive.items())},
            "disk_faces": len(disk.faces),
        },
    )


# ---------------------------------------------------------------- 120-cell


def verify_lemma_120cell(cx: CombinatorialComplex | None = None) -> LemmaReport:
    """Shortcut through a face beats any path that leaves it, in the 120-cell.

    For every vertex v1, every face F of the 120-cell through v1 (edge,
    pentagon, dodecahedron) and every vertex w outside F with
    dist(v1, w) >= 2 that is adjacent to some x in F:
      |S'| = 1 + min_x dist_F(v1, x)
    must be strictly less than
      |S| >= 1 + min over edges v1-u leaving F of dist(u, w),
    the shortest path from v1 to w whose first edge is not in F.
    """
    cx = cx or build_120cell_skeleton()
    D = cx.all_distances()
    n = cx.n_vertices
    adj = np.zeros((n, n), dtype=bool)
    adj[cx.edges[:, 0], cx.edges[:, 1]] = True
    adj |= adj.T
    faces_by_dim = {
        1: [tuple(e) for e in cx.edges.tolist()],
        2: [tuple(f) for f in cx.faces],
        3: [tuple(c) for c in cx.cells],
    }
    checked = 0
    counterexamples = []
    worst_gap = math.inf
    by_dim = {}
    for dim, faces in faces_by_dim.items():
        count = 0
        for face in faces:
            fv = np.array(sorted(face))
            in_f = np.zeros(n, dtype=bool)
            in_f[fv] = True
            sub = adj[np.ix_(fv, fv)]
            for a_local, v1 in enumerate(fv.tolist()):
                dist_f = _bfs_dense(sub, a_local)
                leaving = np.flatnonzero(adj[v1] & ~in_f)
                s_min = 1 + D[leaving].min(axis=0)
                touch = adj[:, fv]  # w adjacent to x in F
                reach = np.where(touch, dist_f[None, :], np.iinfo(np.int64).max // 2).min(axis=1)
                cand = (~in_f) & (D[v1] >= 2) & touch.any(axis=1)
                s_prime = 1 + reach
                ws = np.flatnonzero(cand)
                count += len(ws)
                gap = s_min[ws] - s_prime[ws]
                if len(gap):
                    worst_gap = min(worst_gap, int(gap.min()))
                bad = ws[gap <= 0]
                for w in bad[:5].tolist():
                    counterexamples.append({"dim": dim, "face": list(map(int, face)), "v1": v1, "w": w,
                                            "S": int(s_min[w]), "S_prime": int(s_prime[w])})
        by_dim[f"dim{dim}"] = count
        checked += count
    return LemmaReport(
        lemma="120cell",
        checked=checked,
        counterexamples=counterexamples,
        details={"configurations_by_face_dim": by_dim, "min_gap_S_minus_S_prime": worst_gap,
                 "vertices": n, "edges": len(cx.edges)},
    )


def _bfs_dense(adj: np.ndarray, s: int) -> np.ndarray:
    n = adj.shape[0]
    dist = np.full(n, np.iinfo(np.int64).max // 2, dtype=np.int64)
    dist[s] = 0
    frontier = np.array([s])
    d = 0
    while len(frontier):
        d += 1
        nxt = np.flatnonzero(adj[frontier].any(axis=0) & (dist > d))
        nxt = nxt[dist[nxt] > d]
        dist[nxt] = d
        frontier = nxt
    return dist


# ------------------------------------------------------------- 4-D search
#
# Exact vertex coordinates live in Z[phi]^5 (metric J~), stored as int64
# pairs (a, b) for a + b*phi.  Cones are built in float from the J-model
# image x -> (sqrt(phi) x0, x1, ..., x4).

_PHI = (1 + 5**0.5) / 2


def _gmul(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    a = x[..., 0] * y[..., 0] + x[..., 1] * y[..., 1]
    b = x[..., 0] * y[..., 1] + x[..., 1] * y[..., 0] + x[..., 1] * y[..., 1]
    return np.stack([a, b], axis=-1)


def _gmatvec(m: np.ndarray, v: np.ndarray) -> np.ndarray:
    """(..., 5, 5, 2) x (..., 5, 2) -> (..., 5, 2) over Z[phi]."""
    return _gmul(m, v[..., None, :, :]).sum(axis=-2)


def _gmatmul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return _gmul(a[..., :, :, None, :], b[..., None, :, :, :]).sum(axis=-3)


def _to_pairs(m) -> np.ndarray:
    return np.array([[[x.a, x.b] for x in row] for row in m], dtype=np.int64)


def _to_float_j(v: np.ndarray) -> np.ndarray:
    """Exact J~ vectors -> points on the standard hyperboloid (float)."""
    x = v[..., 0] + _PHI * v[..., 1]
    x = x.astype(float)
    x[..., 0] *= math.sqrt(_PHI)
    norm = np.sqrt(-(-x[..., :1] ** 2 + (x[..., 1:] ** 2).sum(axis=-1, keepdims=True)))
    return x / norm


def _keys(v: np.ndarray) -> np.ndarray:
    flat = np.ascontiguousarray(v.reshape(len(v), -1))
    return flat.view(np.dtype((np.void, flat.dtype.itemsize * flat.shape[1]))).ravel()


def _lorentz_rows(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    return -x[..., 0] * y[..., 0] + (x[..., 1:] * y[..., 1:]).sum(axis=-1)


def _cone_from_star(head: np.ndarray, tail: np.ndarray, nbrs: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Bisector normals (rows) for the edge tail -> head among the edges at head."""
    ch = -_lorentz_rows(head[None, :], nbrs)
    dirs = (nbrs - ch[:, None] * head[None, :]) / np.sqrt(ch**2 - 1)[:, None]
    e = int(np.argmin(np.abs(nbrs - tail[None, :]).sum(axis=1)))
    normals = np.delete(dirs - dirs[e], e, axis=0)
    return normals, dirs[e]


def _extreme_rays(apex: np.ndarray, normals: np.ndarray, de: np.ndarray, tol: float = 1e-9) -> np.ndarray:
    """Unit tangent rays spanning {u : <u, n> <= 0 for all normals} at apex (H^4).

    Every ray is cut out by three active bisector planes; all triples are
    tried and the feasible ones kept.
    """
    J = np.diag([-1.0, 1, 1, 1, 1])
    rows = []
    idx = np.array(list(itertools.combinations(range(len(normals)), 3)))
    for start in range(0, len(idx), 50_000):
        block = idx[start : start + 50_000]
        stack = np.empty((len(block), 4, 5))
        stack[:, 0] = J @ apex
        stack[:, 1:] = normals[block] @ J
        u = np.empty((len(block), 5))
        for c in range(5):
            u[:, c] = (-1) ** c * np.linalg.det(np.delete(stack, c, axis=2))
        norm2 = _lorentz_rows(u, u)
        ok = norm2 > tol
        u = u[ok] / np.sqrt(norm2[ok])[:, None]
        u *= np.where(_lorentz_rows(u, de[None, :]) >= 0, 1.0, -1.0)[:, None]
        rows.append(u[(u @ J @ normals.T).max(axis=1) <= tol])
    rays = np.concatenate(rows)
    rays = rays[np.lexsort(np.round(rays, 8).T[::-1])]
    keep = np.ones(len(rays), dtype=bool)
    keep[1:] = np.abs(np.diff(rays, axis=0)).max(axis=1) > 1e-7
    return rays[keep]


def _frame_to_j(frame: np.ndarray) -> np.ndarray:
    """Float matrix of an exact J~-isometry, conjugated into the J model."""
    m = frame[..., 0] + _PHI * frame[..., 1]
    P = np.diag([math.sqrt(_PHI), 1, 1, 1, 1])
    return P @ m @ np.linalg.inv(P)


class _Star:
    """Exact neighbourhood of the base vertex v0 of {4,3,3,5}.

    `nbrs[k]` is the k-th neighbour of v0 and `moves[k]` an isometry taking
    the directed edge (r0 v0 -> v0) to (v0 -> nbrs[k]); a vertex with frame
    h therefore has neighbours h @ nbrs and neighbour frames h @ moves.
    """

    def __init__(self):
        from .geometry import coxeter_generators

        gens = [_to_pairs(g) for g in coxeter_generators("J_tilde")]
        self.gens = gens
        self.v0 = np.array([[1, 0]] + [[-1, 1]] * 4, dtype=np.int64)
        n0 = _gmatvec(gens[0], self.v0)
        eye = np.zeros((5, 5, 2), dtype=np.int64)
        eye[np.arange(5), np.arange(5), 0] = 1
        vecs, frames = [n0], [eye]
        seen = {n0.tobytes()}
        head = 0
        while head < len(vecs):
            for g in gens[1:]:
                w = _gmatvec(g, vecs[head])
                if w.tobytes() not in seen:
                    seen.add(w.tobytes())
                    vecs.append(w)
                    frames.append(_gmatmul(g, frames[head]))
            head += 1
        self.nbrs = np.array(vecs)
        self.moves = _gmatmul(np.array(frames), gens[0][None])

    def neighbours(self, frame: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        return _gmatvec(frame[None], self.nbrs), _gmatmul(frame[None], self.moves)


_HASH_W = np.random.Generator(np.random.Philox(7)).integers(1, 2**63, size=10, dtype=np.uint64) | np.uint64(1)


def _hash(v: np.ndarray) -> np.ndarray:
    flat = v.reshape(-1, 10).astype(np.uint64)
    return (flat * _HASH_W).sum(axis=1, dtype=np.uint64)


class _Spheres:
    """Exact metric spheres around v0 (radius <= max_radius) with hashed lookup.

    Hash hits are confirmed against the stored vectors, so membership
    answers are exact.  The edge graph is bipartite (simply connected, all
    2-cells squares), which `dist_at_most` uses for meet-in-the-middle.
    """

    def __init__(self, star: _Star, charge, max_radius: int = 3):
        self.star = star
        self.charge = charge
        self.max_radius = max_radius
        self.vecs = [star.v0[None], star.nbrs]
        self.frames = [None, star.moves]
        self.hashes = []
        self._index(0)
        self._index(1)

    def _index(self, r: int) -> None:
        h = _hash(self.vecs[r])
        order = np.argsort(h, kind="stable")
        self.vecs[r] = self.vecs[r][order]
        if self.frames[r] is not None:
            self.frames[r] = self.frames[r][order]
        self.hashes.append(h[order])

    def _members(self, v: np.ndarray, r: int) -> np.ndarray:
        h = _hash(v)
        hs = self.hashes[r]
        pos = np.minimum(np.searchsorted(hs, h), len(hs) - 1)
        hit = hs[pos] == h
        if hit.any():
            same = (self.vecs[r][pos[hit]] == v[hit]).all(axis=(1, 2))
            hit[np.flatnonzero(hit)[~same]] = False
        return hit

    def grow(self) -> bool:
        r = len(self.vecs)
        if r > self.max_radius:
            return False
        frames = self.frames[r - 1]
        if not self.charge(len(frames) * len(self.star.nbrs)):
            return False
        k = len(self.star.nbrs)
        cand = np.concatenate([
            _gmatvec(frames[a : a + 1024, None], self.star.nbrs[None]).reshape(-1, 5, 2)
            for a in range(0, len(frames), 1024)
        ])
        new = ~self._members(cand, r - 1) & ~self._members(cand, r - 2)
        idx = np.flatnonzero(new)
        h = _hash(cand[idx])
        hu, first = np.unique(h, return_index=True)
        # equal hashes must be equal vectors
        inv = np.searchsorted(hu, h)
        assert (cand[idx] == cand[idx[first[inv]]]).all(), "64-bit hash collision"
        pick = idx[first]
        src, kk = np.divmod(pick, k)
        self.vecs.append(cand[pick])
        if r < self.max_radius:
            self.frames.append(np.concatenate([
                _gmatmul(frames[src[a : a + 4096]], self.star.moves[kk[a : a + 4096]])
                for a in range(0, len(src), 4096)
            ]))
        else:
            self.frames.append(None)
        self._index(r)
        return True

    def _ensure(self, r: int) -> bool:
        while len(self.vecs) <= r:
            if not self.grow():
                return False
        return True

    def dist_at_most(self, v: np.ndarray, frame: np.ndarray, d: int) -> bool | None:
        """dist(v0, v) <= d, or None when out of reach of the stored spheres."""
        a = min(d, self.max_radius)
        b = d - a
        if b > self.max_radius or not self._ensure(a) or not self._ensure(b):
            return None
        if b == 0:
            return any(self._members(v[None], r)[0] for r in range(a % 2, a + 1, 2))
        ball = np.concatenate([self.vecs[r] for r in range(b + 1)])
        if not self.charge(len(ball)):
            return None
        for start in range(0, len(ball), 200_000):
            img = _gmatvec(frame[None], ball[start : start + 200_000])
            for r in range(a + 1):
                if self._members(img, r).any():
                    return True
        return False


def search_lemma_4d(max_len: int = 8, budget: int = 2_000_000) -> LemmaReport:
    """Depth-first search for a minimal edge path of {4,3,3,5} avoiding cone containment.

    Paths start on the base directed edge (v0 -> r0 v0); second edges are
    taken up to the stabiliser <r2, r3, r4> of that edge.  A prefix is
    pruned when it is not minimal (exact distances from v0 via explicit
    spheres) or when the cone of its last edge contains the cone of an
    earlier edge.  Paths reaching `max_len` unpruned are reported as
    survivors.  `budget` caps sphere vertices generated plus path nodes
    visited; running out is reported, not raised.
    """
    star = _Star()
    spent = 0

    def charge(units: int) -> bool:
        nonlocal spent
        if spent + units > budget:
            return False
        spent += units
        return True

    spheres = _Spheres(star, charge)

    # base cone: on the edge (v0 -> n0) at n0, with extreme-ray witnesses
    base_frame = star.moves[0]
    nb, _ = star.neighbours(base_frame)
    apex = _to_float_j(star.nbrs[0])
    normals, de = _cone_from_star(apex, _to_float_j(star.v0), _to_float_j(nb))
    rays = _extreme_rays(apex, normals, de)
    base_w = np.vstack([apex, apex[None] + rays])
    inv0 = np.linalg.inv(_frame_to_j(base_frame))

    def cone_for(frame: np.ndarray) -> Cone:
        g = _frame_to_j(frame) @ inv0
        return Cone(apex=g @ apex, normals=list(normals @ g.T), witnesses=list(base_w @ g.T), mode="float")

    # second-edge classes under the edge stabiliser
    nb1, _ = star.neighbours(base_frame)
    label = {v.tobytes(): i for i, v in enumerate(nb1)}
    parent = list(range(len(nb1)))

    def find(i: int) -> int:
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for g in star.gens[2:]:
        for i, w in enumerate(_gmatvec(g[None], nb1)):
            a, b = find(i), find(label[w.tobytes()])
            if a != b:
                parent[max(a, b)] = min(a, b)
    reps = sorted({find(i) for i in range(len(nb1))})

    frontier = {1: 1}
    pruned = {"backtrack": 0, "non_minimal": 0, "cone": 0}
    undecided = 0
    survivors: list[list[int]] = []
    exhausted = False

    def dfs(path_vs, moves, frame, cones, choices):
        nonlocal undecided, exhausted
        length = len(path_vs) - 1
        nb, fr = star.neighbours(frame)
        for k in choices if choices is not None else range(len(nb)):
            if exhausted:
                return
            if not charge(1):
                exhausted = True
                return
            v = nb[k]
            if np.array_equal(v, path_vs[-2]):
                pruned["backtrack"] += 1
                continue
            near = spheres.dist_at_most(v, fr[k], length - 1)
            if near is None:
                exhausted = True
                return
            if near:
                pruned["non_minimal"] += 1
                continue
            c = cone_for(fr[k])
            hit = False
            for prev in cones:
                r = cone_contains(c, prev)
                if r == YES:
                    hit = True
                    break
                undecided += r == UNDECIDED
            if hit:
                pruned["cone"] += 1
                continue
            depth = length + 1
            frontier[depth] = frontier.get(depth, 0) + 1
            if depth == max_len:
                survivors.append(moves + [k])
                continue
            dfs(path_vs + [v], moves + [k], fr[k], cones + [c], None)

    if max_len >= 2:
        dfs([star.v0, star.nbrs[0]], [0], base_frame, [cone_for(base_frame)], reps)
    deepest = max(frontier)
    if survivors:
        outcome = f"{len(survivors)} surviving path(s) of length {max_len}"
    elif exhausted:
        outcome = f"no counterexample within budget, explored to depth {deepest}"
    else:
        outcome = f"no counterexample within budget, frontier exhausted to depth {deepest}"
    return LemmaReport(
        lemma="4d-{4,3,3,5}",
        checked=sum(frontier.values()),
        counterexamples=[" ".join(map(str, m)) for m in survivors],
        budget_exhausted=exhausted,
        details={
            "outcome": outcome,
            "max_len": max_len,
            "second_edge_classes": len(reps),
            "frontier_by_depth": dict(sorted(frontier.items())),
            "pruned": pruned,
            "undecided_tests": undecided,
            "sphere_sizes": [len(s) for s in spheres.vecs],
            "cone_extreme_rays": len(rays),
            "work": spent,
        },
    )
