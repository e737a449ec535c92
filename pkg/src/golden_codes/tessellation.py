"""Faces of a quotient tessellation as coset partitions of a finite group.

An i-face is an orbit of right multiplication by {r_j : j != i}; two faces
are incident when their cosets share an element.  Partitions are computed
by union-find over element indices using the group's action tables.
"""

from __future__ import annotations

import io
import struct
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
import numpy as np
from numba import njit

from .group import GroupIndex

CACHE_MAGIC = b"GLDC"
CACHE_VERSION = 1

__all__ = [
    "FacePartition",
    "Tessellation",
    "face_partition",
    "incidence",
    "build_tessellation",
    "local_ball",
    "save_cache",
    "load_cache",
    "CacheVersionError",
    "CombinatorialComplex",
    "build_120cell_skeleton",
    "build_h2_disk",
    "h2_base_motions",
    "interior_vertices",
    "square_grid_disk_faces",
]


@njit(cache=True)
def _find(parent, x):
    while parent[x] != x:
        parent[x] = parent[parent[x]]
        x = parent[x]
    return x


@njit(cache=True)
def _union_find_labels(actions, gens):
    n = actions.shape[1]
    parent = np.arange(n, dtype=np.int32)
    for x in range(n):
        for g in gens:
            a = _find(parent, x)
            b = _find(parent, actions[g, x])
            # smaller index wins so every root is its class minimum
            if a < b:
                parent[b] = a
            elif b < a:
                parent[a] = b
    labels = np.empty(n, dtype=np.int32)
    count = 0
    for x in range(n):
        r = _find(parent, x)
        if r == x:
            labels[x] = count
            count += 1
        else:
            labels[x] = labels[r]
    return labels, count


@dataclass
class FacePartition:
    dim: int
    labels: np.ndarray
    count: int

    def class_sizes(self) -> np.ndarray:
        return np.bincount(self.labels, minlength=self.count)


def face_partition(group: GroupIndex, i: int) -> FacePartition:
    """Cosets of S_i = <r_j : j != i>; ids ordered by smallest member index."""
    gens = np.array([j for j in range(len(group.generators)) if j != i], dtype=np.int64)
    labels, count = _union_find_labels(group.actions, gens)
    return FacePartition(dim=i, labels=labels, count=int(count))


def incidence(part_i: FacePartition, part_j: FacePartition, check_uniform: bool = True) -> np.ndarray:
    """Sorted, deduplicated (i-face, j-face) pairs with a common element.

    With `check_uniform`, every incident pair must share the same number of
    elements (|S_i ∩ S_j| in a faithful quotient); otherwise ValueError.
    """
    key = part_i.labels.astype(np.int64) * part_j.count + part_j.labels
    uniq, counts = np.unique(key, return_counts=True)
    if check_uniform and counts.size and counts.min() != counts.max():
        raise ValueError(
            f"non-uniform coset intersections between dims {part_i.dim} and {part_j.dim}: "
            f"{counts.min()}..{counts.max()}"
        )
    return np.stack([uniq // part_j.count, uniq % part_j.count], axis=1)


def _rows_from_pairs(pairs: np.ndarray, n_rows: int, col: int = 1) -> tuple[np.ndarray, np.ndarray]:
    """CSR (indptr, indices) with rows taken from pairs[:, 1-col]."""
    row = pairs[:, 1 - col]
    other = pairs[:, col]
    order = np.lexsort((other, row))
    indptr = np.zeros(n_rows + 1, dtype=np.int64)
    np.cumsum(np.bincount(row, minlength=n_rows), out=indptr[1:])
    return indptr, other[order].astype(np.int64)


@dataclass
class Tessellation:
    """Face counts per dimension and incidences between consecutive dimensions.

    `incidences[i]` holds the pairs (i-face, (i+1)-face), sorted.
    """

    counts: list[int]
    incidences: dict[int, np.ndarray]
    meta: dict = field(default_factory=dict)

    @property
    def top_dim(self) -> int:
        return len(self.counts) - 1

    def down(self, i: int) -> tuple[np.ndarray, np.ndarray]:
        """For each i-face its (i-1)-faces, as CSR arrays."""
        return _rows_from_pairs(self.incidences[i - 1], self.counts[i], col=0)

    def up(self, i: int) -> tuple[np.ndarray, np.ndarray]:
        """For each i-face its (i+1)-faces, as CSR arrays."""
        return _rows_from_pairs(self.incidences[i], self.counts[i], col=1)

    def degrees(self, i: int, j: int) -> np.ndarray:
        """Number of j-faces incident to each i-face, for |i - j| = 1."""
        if j == i + 1:
            return np.bincount(self.incidences[i][:, 0], minlength=self.counts[i])
        if j == i - 1:
            return np.bincount(self.incidences[j][:, 1], minlength=self.counts[i])
        raise ValueError("only consecutive dimensions are stored")

    def euler_characteristic(self) -> int:
        return int(sum((-1) ** i * c for i, c in enumerate(self.counts)))

    @cached_property
    def vertex_sets(self) -> dict[int, np.ndarray]:
        """Vertices of every i-face as a (count_i, k_i) array of sorted ids.

        Needs each i-face to have a constant number of distinct vertices,
        which holds for the regular complexes built here.
        """
        out = {0: np.arange(self.counts[0], dtype=np.int64)[:, None]}
        for i in range(1, self.top_dim + 1):
            indptr, idx = self.down(i)
            width = np.diff(indptr)
            if width.min() != width.max():
                raise ValueError(f"{i}-faces have irregular boundaries")
            sub = out[i - 1][idx.reshape(self.counts[i], -1)].reshape(self.counts[i], -1)
            sub = np.sort(sub, axis=1)
            keep = np.ones_like(sub, dtype=bool)
            keep[:, 1:] = sub[:, 1:] != sub[:, :-1]
            k = keep.sum(axis=1)
            if k.min() != k.max():
                raise ValueError(f"{i}-faces have varying vertex counts")
            out[i] = sub[keep].reshape(self.counts[i], int(k[0]))
        return out

    def faces_at_vertex(self, i: int) -> tuple[np.ndarray, np.ndarray]:
        """CSR arrays listing, per vertex, the i-faces containing it."""
        vs = self.vertex_sets[i]
        pairs = np.stack([np.repeat(np.arange(vs.shape[0]), vs.shape[1]), vs.reshape(-1)], axis=1)
        return _rows_from_pairs(pairs, self.counts[0], col=0)

    @cached_property
    def vertex_adjacency(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """(indptr, neighbour vertex, edge id) for the 1-skeleton."""
        ev = self.vertex_sets[1]
        src = np.concatenate([ev[:, 0], ev[:, 1]])
        dst = np.concatenate([ev[:, 1], ev[:, 0]])
        eid = np.concatenate([np.arange(len(ev)), np.arange(len(ev))])
        order = np.lexsort((eid, dst, src))
        indptr = np.zeros(self.counts[0] + 1, dtype=np.int64)
        np.cumsum(np.bincount(src, minlength=self.counts[0]), out=indptr[1:])
        return indptr, dst[order], eid[order]


def build_tessellation(group: GroupIndex, top_dim: int | None = None) -> Tessellation:
    """Partitions for every dimension plus consecutive incidences."""
    top = len(group.generators) - 1 if top_dim is None else top_dim
    parts = [face_partition(group, i) for i in range(top + 1)]
    inc = {i: incidence(parts[i], parts[i + 1]) for i in range(top)}
    meta = dict(group.meta)
    meta["group_order"] = group.order
    meta["label"] = group.label
    tess = Tessellation(counts=[p.count for p in parts], incidences=inc, meta=meta)
    tess.partitions = parts
    return tess


def local_ball(tess: Tessellation, dim: int, face: int, radius: int) -> dict[int, np.ndarray]:
    """Faces whose vertices all lie within graph distance `radius` of the seed's.

    Returns {dimension: sorted face ids}.  Radius 0 keeps the seed's own
    closure; balls are nested in the radius.
    """
    if radius < 0:
        raise ValueError("radius must be non-negative")
    indptr, nbr, _ = tess.vertex_adjacency
    inside = np.zeros(tess.counts[0], dtype=bool)
    frontier = np.unique(tess.vertex_sets[dim][face])
    inside[frontier] = True
    for _ in range(radius):
        nxt = np.concatenate([nbr[indptr[v] : indptr[v + 1]] for v in frontier]) if len(frontier) else frontier
        nxt = np.unique(nxt)
        nxt = nxt[~inside[nxt]]
        inside[nxt] = True
        frontier = nxt
    return {i: np.flatnonzero(inside[tess.vertex_sets[i]].all(axis=1)) for i in range(tess.top_dim + 1)}


class CacheVersionError(ValueError):
    pass


def save_cache(tess: Tessellation, path: str | Path) -> None:
    """Binary snapshot: magic, version, ideal generator, |G|, counts, incidences."""
    ideal = tess.meta.get("ideal", [0, 0])
    buf = io.BytesIO()
    buf.write(CACHE_MAGIC)
    buf.write(struct.pack("<I", CACHE_VERSION))
    buf.write(struct.pack("<qq", int(ideal[0]), int(ideal[1])))
    buf.write(struct.pack("<Q", int(tess.meta.get("group_order", 0))))
    buf.write(struct.pack("<I", len(tess.counts)))
    buf.write(struct.pack(f"<{len(tess.counts)}Q", *tess.counts))
    for i in range(len(tess.counts) - 1):
        arr = np.ascontiguousarray(tess.incidences[i], dtype="<i4")
        buf.write(struct.pack("<Q", arr.shape[0]))
        buf.write(arr.tobytes())
    Path(path).write_bytes(buf.getvalue())


def load_cache(path: str | Path) -> Tessellation:
    data = Path(path).read_bytes()
    if data[:4] != CACHE_MAGIC:
        raise CacheVersionError(f"{path} is not a tessellation cache")
    (version,) = struct.unpack_from("<I", data, 4)
    if version != CACHE_VERSION:
        raise CacheVersionError(f"cache version {version}, expected {CACHE_VERSION}")
    off = 8
    a, b = struct.unpack_from("<qq", data, off)
    off += 16
    (order,) = struct.unpack_from("<Q", data, off)
    off += 8
    (ndim,) = struct.unpack_from("<I", data, off)
    off += 4
    counts = list(struct.unpack_from(f"<{ndim}Q", data, off))
    off += 8 * ndim
    inc = {}
    for i in range(ndim - 1):
        (rows,) = struct.unpack_from("<Q", data, off)
        off += 8
        arr = np.frombuffer(data, dtype="<i4", count=2 * rows, offset=off).reshape(rows, 2)
        inc[i] = arr.astype(np.int64)
        off += 8 * rows
    meta = {"ideal": [a, b], "group_order": order}
    return Tessellation(counts=[int(c) for c in counts], incidences=inc, meta=meta)


# ------------------------------------------------------ auxiliary complexes


@dataclass
class CombinatorialComplex:
    """Vertices, edges and 2-faces (vertex cycles) of a small polytopal complex."""

    n_vertices: int
    edges: np.ndarray
    faces: list[tuple[int, ...]]
    cells: list[tuple[int, ...]] = field(default_factory=list)
    coords: np.ndarray | None = None
    face_layer: np.ndarray | None = None
    meta: dict = field(default_factory=dict)

    @cached_property
    def adjacency(self) -> list[list[int]]:
        adj: list[list[int]] = [[] for _ in range(self.n_vertices)]
        for a, b in self.edges.tolist():
            adj[a].append(b)
            adj[b].append(a)
        return [sorted(x) for x in adj]

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    def is_simple(self) -> bool:
        e = np.sort(self.edges, axis=1)
        return bool(np.all(e[:, 0] != e[:, 1]) and len(np.unique(e, axis=0)) == len(e))

    def distances_from(self, v: int) -> np.ndarray:
        """BFS distances in the 1-skeleton (-1 where unreachable)."""
        dist = np.full(self.n_vertices, -1, dtype=np.int64)
        dist[v] = 0
        frontier = [v]
        while frontier:
            nxt = []
            for u in frontier:
                for w in self.adjacency[u]:
                    if dist[w] < 0:
                        dist[w] = dist[u] + 1
                        nxt.append(w)
            frontier = nxt
        return dist

    def all_distances(self) -> np.ndarray:
        from scipy.sparse import coo_matrix
        from scipy.sparse.csgraph import shortest_path

        n = self.n_vertices
        a = coo_matrix((np.ones(len(self.edges)), (self.edges[:, 0], self.edges[:, 1])), shape=(n, n))
        return shortest_path((a + a.T).tocsr(), unweighted=True, directed=False).astype(np.int64)


def _cyclic_order(vertices: np.ndarray, edge_set: set[tuple[int, int]]) -> tuple[int, ...]:
    """Order a face's vertices along its boundary cycle, starting at the smallest."""
    vs = sorted(int(v) for v in vertices)
    nbrs = {v: [w for w in vs if (min(v, w), max(v, w)) in edge_set] for v in vs}
    cycle = [vs[0], min(nbrs[vs[0]])]
    while len(cycle) < len(vs):
        nxt = [w for w in nbrs[cycle[-1]] if w != cycle[-2]]
        cycle.append(nxt[0])
    return tuple(cycle)


def build_120cell_skeleton() -> CombinatorialComplex:
    """The {5,3,3} polytope from cosets of its order-14,400 reflection group.

    The group is <r_4, r_3, r_2, r_1> reduced mod sqrt(5) (diagram 5-3-3);
    vertices are cosets of <r_3, r_2, r_1>, edges of <r_4, r_2, r_1>.
    """
    from .arith import SQRT5, PrincipalIdeal
    from .group import enumerate_matrix_group, quotient_generators

    ideal = PrincipalIdeal(SQRT5)
    gens = quotient_generators(ideal)
    group = enumerate_matrix_group([gens[4], gens[3], gens[2], gens[1]], ideal.ring, label="120-cell")
    tess = build_tessellation(group)
    vs = tess.vertex_sets
    edge_set = {(int(a), int(b)) for a, b in vs[1]}
    faces = [_cyclic_order(f, edge_set) for f in vs[2]]
    cells = [tuple(int(x) for x in c) for c in vs[3]]
    cx = CombinatorialComplex(
        n_vertices=tess.counts[0], edges=vs[1].copy(), faces=faces, cells=cells,
        meta={"group_order": group.order, "counts": tess.counts},
    )
    cx.tessellation = tess
    return cx


# 2-D hyperbolic disks: hyperboloid model of H^2, form -x0^2 + x1^2 + x2^2.


def _rot(theta: float) -> np.ndarray:
    c, s = np.cos(theta), np.sin(theta)
    return np.array([[1.0, 0, 0], [0, c, -s], [0, s, c]])


def _boost(r: float) -> np.ndarray:
    return np.array([[np.cosh(r), np.sinh(r), 0], [np.sinh(r), np.cosh(r), 0], [0, 0, 1.0]])


def h2_base_motions(p: int, q: int) -> dict[str, np.ndarray]:
    """Rotations generating the orientation-preserving {p,q} symmetry group.

    The base face is centred at (1,0,0) with vertex P_k at polar angle 2*pi*k/p;
    `rot_face` turns about the centre by 2*pi/p and `rot_vertex` about P_0 by 2*pi/q.
    """
    if (p - 2) * (q - 2) <= 4:
        raise ValueError(f"{{{p},{q}}} is not hyperbolic")
    R = np.arccosh(1 / (np.tan(np.pi / p) * np.tan(np.pi / q)))
    to_v0 = _boost(R)
    return {
        "rot_face": _rot(2 * np.pi / p),
        "rot_vertex": to_v0 @ _rot(2 * np.pi / q) @ np.linalg.inv(to_v0),
        "v0": to_v0[:, 0].copy(),
        "circumradius": R,
    }


def _key(x: np.ndarray, digits: int = 6) -> tuple:
    return tuple(np.round(x[1:], digits).tolist())


def build_h2_disk(p: int, q: int, layers: int) -> CombinatorialComplex:
    """Faces of {p,q} reached from a base face in `layers` vertex-adjacency rounds.

    Faces are vertex cycles in counter-clockwise order; float hyperboloid
    coordinates are attached.  Euclidean and spherical parameters raise.
    """
    if layers < 0:
        raise ValueError("layers must be non-negative")
    m = h2_base_motions(p, q)
    rf, rv, v0 = m["rot_face"], m["rot_vertex"], m["v0"]
    rf_pows = [np.linalg.matrix_power(rf, k) for k in range(p)]
    around = [rf_pows[k] @ np.linalg.matrix_power(rv, j) for k in range(p) for j in range(1, q)]
    origin = np.array([1.0, 0, 0])
    centers = {_key(origin): 0}
    frames = [np.eye(3)]
    layer_of = [0]
    frontier = [0]
    for layer in range(1, layers + 1):
        nxt = []
        for f in frontier:
            for g in around:
                h = frames[f] @ g
                k = _key(h @ origin)
                if k not in centers:
                    centers[k] = len(frames)
                    frames.append(h)
                    layer_of.append(layer)
                    nxt.append(centers[k])
        frontier = nxt
    vid: dict[tuple, int] = {}
    coords = []
    faces = []
    for f in frames:
        cyc = []
        for k in range(p):
            x = f @ rf_pows[k] @ v0
            key = _key(x)
            if key not in vid:
                vid[key] = len(coords)
                coords.append(x)
            cyc.append(vid[key])
        faces.append(tuple(cyc))
    edges = {(min(c[i], c[(i + 1) % p]), max(c[i], c[(i + 1) % p])) for c in faces for i in range(p)}
    cx = CombinatorialComplex(
        n_vertices=len(coords), edges=np.array(sorted(edges), dtype=np.int64), faces=faces,
        coords=np.array(coords), face_layer=np.array(layer_of), meta={"p": p, "q": q, "layers": layers},
    )
    cx.vertex_key = vid
    return cx


def interior_vertices(cx: CombinatorialComplex) -> np.ndarray:
    """Vertices all of whose surrounding faces lie in the disk."""
    q = cx.meta["q"]
    count = np.zeros(cx.n_vertices, dtype=np.int64)
    for f in cx.faces:
        count[list(f)] += 1
    return np.flatnonzero(count == q)


def square_grid_disk_faces(layers: int) -> int:
    """Face count of the Euclidean {4,4} disk grown like `build_h2_disk`."""
    cells = {(0, 0)}
    frontier = set(cells)
    for _ in range(layers):
        nxt = {(x + dx, y + dy) for x, y in frontier for dx in (-1, 0, 1) for dy in (-1, 0, 1)} - cells
        cells |= nxt
        frontier = nxt
    return len(cells)
