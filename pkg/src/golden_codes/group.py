"""Finite matrix groups over quotient rings: packing, admissibility, BFS.

Group elements are D x D matrices whose entries are residue indices of a
finite ring (see `arith._FiniteRing`).  A matrix is packed base-N into two
64-bit words (first half of the entries, second half), which is the
element's identity for hashing and ordering.  Enumeration is a breadth-first
closure from the identity with children taken in generator order, so the
element numbering is canonical; it also records, for every generator, the
permutation x -> x * r_j of element indices.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from numba import njit

from .arith import GoldenInt, PrincipalIdeal, _FiniteRing
from .geometry import COXETER_ORDERS, coxeter_generators

log = logging.getLogger(__name__)

__all__ = [
    "InadmissibleIdeal",
    "GroupTooLarge",
    "GroupIndex",
    "quotient_generators",
    "check_admissible",
    "enumerate_group",
    "enumerate_matrix_group",
    "subgroup_order",
    "subgroup_closure",
]


class InadmissibleIdeal(ValueError):
    """The generators degenerate modulo the ideal."""


class GroupTooLarge(RuntimeError):
    """Enumeration exceeded its `max_order` budget."""


def quotient_generators(ideal: PrincipalIdeal) -> list[np.ndarray]:
    """The tilde generators r_{i,I} as residue-index matrices."""
    ring = ideal.ring
    return [
        np.array([[ring.index(x) for x in row] for row in r], dtype=np.int64)
        for r in coxeter_generators("J_tilde")
    ]


def _index_matmul(a: np.ndarray, b: np.ndarray, ring: _FiniteRing) -> np.ndarray:
    d = a.shape[0]
    out = np.zeros((d, d), dtype=np.int64)
    for i in range(d):
        for j in range(d):
            acc = 0
            for k in range(d):
                acc = ring.add[acc, ring.mul[a[i, k], b[k, j]]]
            out[i, j] = acc
    return out


def _element_order(m: np.ndarray, ring: _FiniteRing, limit: int) -> int | None:
    ident = np.eye(m.shape[0], dtype=np.int64) * ring.one
    p = m.copy()
    for e in range(1, limit + 1):
        if np.array_equal(p, ident):
            return e
        p = _index_matmul(p, m, ring)
    return None


def check_admissible(
    gens: Sequence[np.ndarray], ring: _FiniteRing, orders: Sequence[int] = COXETER_ORDERS
) -> None:
    """Raise InadmissibleIdeal unless the reduced generators keep the diagram.

    Requirements: every generator is a non-identity involution, generators
    are pairwise distinct, and each relation (r_i r_j)^m_ij has exactly the
    order m_ij (2 for non-adjacent nodes).
    """
    d = gens[0].shape[0]
    ident = np.eye(d, dtype=np.int64) * ring.one
    for i, g in enumerate(gens):
        if np.array_equal(g, ident):
            raise InadmissibleIdeal(f"r{i} reduces to the identity")
        if _element_order(g, ring, 2) != 2:
            raise InadmissibleIdeal(f"r{i} is not an involution after reduction")
    for i in range(len(gens)):
        for j in range(i + 1, len(gens)):
            if np.array_equal(gens[i], gens[j]):
                raise InadmissibleIdeal(f"r{i} and r{j} coincide after reduction")
            want = orders[i] if j == i + 1 else 2
            got = _element_order(_index_matmul(gens[i], gens[j], ring), ring, want)
            if got != want:
                raise InadmissibleIdeal(f"(r{i} r{j}) has order {got} instead of {want}")


@njit(cache=True)
def _slot(h, l, shift):
    x = (h * np.uint64(0x9E3779B97F4A7C15)) ^ (l * np.uint64(0xC2B2AE3D27D4EB4F))
    x ^= x >> np.uint64(29)
    x *= np.uint64(0xBF58476D1CE4E5B9)
    return np.int64(x >> np.uint64(shift))


@njit(cache=True)
def _rebuild_table(keys_hi, keys_lo, count, bits):
    table = np.full(1 << bits, -1, dtype=np.int32)
    mask = (1 << bits) - 1
    shift = 64 - bits
    for idx in range(count):
        s = _slot(keys_hi[idx], keys_lo[idx], shift)
        while table[s] != -1:
            s = (s + 1) & mask
        table[s] = idx
    return table


@njit(cache=True)
def _bfs_resume(keys_hi, keys_lo, actions, table, bits, count, head, gk, gc, gn, add, mul, base, dim, half):
    """Advance the BFS until done (status 0) or out of capacity (status 1)."""
    n_gen = gn.shape[0]
    n_ent = dim * dim
    capacity = keys_hi.shape[0]
    mask = (1 << bits) - 1
    shift = 64 - bits
    nb = np.uint64(base)
    x = np.empty(n_ent, dtype=np.int64)
    y = np.empty(n_ent, dtype=np.int64)
    while head < count:
        h = keys_hi[head]
        lo = keys_lo[head]
        for p in range(half):
            x[p] = np.int64(h % nb)
            h //= nb
        for p in range(half, n_ent):
            x[p] = np.int64(lo % nb)
            lo //= nb
        for g in range(n_gen):
            if actions[g, head] != -1:
                continue
            for i in range(dim):
                for j in range(dim):
                    acc = 0
                    for t in range(gn[g, j]):
                        acc = add[acc, mul[x[i * dim + gk[g, j, t]], gc[g, j, t]]]
                    y[i * dim + j] = acc
            kh = np.uint64(0)
            kl = np.uint64(0)
            for p in range(half - 1, -1, -1):
                kh = kh * nb + np.uint64(y[p])
            for p in range(n_ent - 1, half - 1, -1):
                kl = kl * nb + np.uint64(y[p])
            s = _slot(kh, kl, shift)
            while True:
                idx = table[s]
                if idx == -1:
                    if count == capacity:
                        return count, head, 1
                    idx = count
                    keys_hi[idx] = kh
                    keys_lo[idx] = kl
                    table[s] = idx
                    count += 1
                    break
                if keys_hi[idx] == kh and keys_lo[idx] == kl:
                    break
                s = (s + 1) & mask
            actions[g, head] = idx
        head += 1
    return count, head, 0


def _pack(m: np.ndarray, base: int) -> tuple[int, int]:
    flat = [int(v) for v in m.reshape(-1)]
    half = len(flat) // 2
    hi = sum(v * base**p for p, v in enumerate(flat[:half]))
    lo = sum(v * base**p for p, v in enumerate(flat[half:]))
    return hi, lo


def _unpack(hi: np.ndarray, lo: np.ndarray, base: int, dim: int) -> np.ndarray:
    """Vectorized inverse of `_pack` -> array (k, dim, dim)."""
    n_ent = dim * dim
    half = n_ent // 2
    hi = np.asarray(hi, dtype=np.uint64).copy()
    lo = np.asarray(lo, dtype=np.uint64).copy()
    out = np.empty((hi.shape[0], n_ent), dtype=np.int64)
    b = np.uint64(base)
    for p in range(half):
        out[:, p] = hi % b
        hi //= b
    for p in range(half, n_ent):
        out[:, p] = lo % b
        lo //= b
    return out.reshape(-1, dim, dim)


@dataclass
class GroupIndex:
    """An enumerated finite matrix group with right-multiplication tables.

    `actions[j][x]` is the index of element x times generator j.  Index 0 is
    the identity; the numbering is the sequential BFS discovery order.
    """

    ring: _FiniteRing
    generators: list[np.ndarray]
    keys_hi: np.ndarray
    keys_lo: np.ndarray
    actions: np.ndarray
    label: str = ""
    meta: dict = field(default_factory=dict)

    @property
    def order(self) -> int:
        return int(self.keys_hi.shape[0])

    @property
    def dim(self) -> int:
        return int(self.generators[0].shape[0])

    def element(self, i: int) -> np.ndarray:
        return _unpack(self.keys_hi[i : i + 1], self.keys_lo[i : i + 1], self.ring.order, self.dim)[0]

    def index_of(self, m: np.ndarray) -> int | None:
        hi, lo = _pack(np.asarray(m), self.ring.order)
        if not hasattr(self, "_sorted"):
            self._sorted = np.lexsort((self.keys_lo, self.keys_hi))
        order = self._sorted
        key_hi = self.keys_hi[order]
        a = np.searchsorted(key_hi, np.uint64(hi), side="left")
        b = np.searchsorted(key_hi, np.uint64(hi), side="right")
        for pos in range(a, b):
            if int(self.keys_lo[order[pos]]) == lo:
                return int(order[pos])
        return None

    def apply_word(self, x: int, word: Sequence[int]) -> int:
        for g in word:
            x = int(self.actions[g, x])
        return x


def _sparse_columns(gens: Sequence[np.ndarray]):
    n_gen, dim = len(gens), gens[0].shape[0]
    width = max(int(np.count_nonzero(g[:, j])) for g in gens for j in range(dim))
    gk = np.zeros((n_gen, dim, width), dtype=np.int64)
    gc = np.zeros((n_gen, dim, width), dtype=np.int64)
    gn = np.zeros((n_gen, dim), dtype=np.int64)
    for g, m in enumerate(gens):
        for j in range(dim):
            nz = np.flatnonzero(m[:, j])
            gn[g, j] = len(nz)
            gk[g, j, : len(nz)] = nz
            gc[g, j, : len(nz)] = m[nz, j]
    return gk, gc, gn


def enumerate_matrix_group(
    gens: Sequence[np.ndarray],
    ring: _FiniteRing,
    max_order: int = 20_000_000,
    label: str = "",
    initial_capacity: int = 1 << 12,
) -> GroupIndex:
    """Closure of the identity under right multiplication by `gens`."""
    gens = [np.asarray(g, dtype=np.int64) for g in gens]
    dim = gens[0].shape[0]
    n_ent = dim * dim
    half = n_ent // 2
    base = ring.order
    if base ** (n_ent - half) >= 2**64:
        raise GroupTooLarge(f"ring of order {base} does not pack {dim}x{dim} matrices into two words")
    gk, gc, gn = _sparse_columns(gens)
    capacity = min(initial_capacity, max_order)
    keys_hi = np.zeros(capacity, dtype=np.uint64)
    keys_lo = np.zeros(capacity, dtype=np.uint64)
    actions = np.full((len(gens), capacity), -1, dtype=np.int32)
    hi, lo = _pack(np.eye(dim, dtype=np.int64) * ring.one, base)
    keys_hi[0], keys_lo[0] = hi, lo
    count, head = 1, 0
    while True:
        bits = max(4, int(2 * capacity - 1).bit_length())
        table = _rebuild_table(keys_hi, keys_lo, count, bits)
        count, head, status = _bfs_resume(
            keys_hi, keys_lo, actions, table, bits, count, head, gk, gc, gn,
            ring.add, ring.mul, base, dim, half,
        )
        if status == 0:
            break
        if capacity >= max_order:
            raise GroupTooLarge(f"group order exceeds max_order={max_order}")
        del table
        new_cap = min(max_order, capacity * 4)
        log.debug("growing group table %d -> %d", capacity, new_cap)
        keys_hi = np.concatenate([keys_hi, np.zeros(new_cap - capacity, dtype=np.uint64)])
        keys_lo = np.concatenate([keys_lo, np.zeros(new_cap - capacity, dtype=np.uint64)])
        grown = np.full((len(gens), new_cap), -1, dtype=np.int32)
        grown[:, :capacity] = actions
        actions = grown
        capacity = new_cap
    return GroupIndex(
        ring=ring,
        generators=gens,
        keys_hi=keys_hi[:count].copy(),
        keys_lo=keys_lo[:count].copy(),
        actions=np.ascontiguousarray(actions[:, :count]),
        label=label,
        meta={"ordering": "sequential BFS from identity, children in generator order"},
    )


def enumerate_group(ideal: PrincipalIdeal | GoldenInt | int, max_order: int = 20_000_000) -> GroupIndex:
    """Enumerate pi_I of the {4,3,3,5} Coxeter group, after an admissibility check."""
    if not isinstance(ideal, PrincipalIdeal):
        ideal = PrincipalIdeal(ideal)
    gens = quotient_generators(ideal)
    check_admissible(gens, ideal.ring)
    group = enumerate_matrix_group(gens, ideal.ring, max_order=max_order, label=str(ideal.generator))
    group.meta["ideal"] = [ideal.generator.a, ideal.generator.b]
    group.meta["norm"] = ideal.norm
    return group


@njit(cache=True)
def _closure(actions, gens, start):
    n = actions.shape[1]
    seen = np.zeros(n, dtype=np.bool_)
    out = np.empty(n, dtype=np.int64)
    out[0] = start
    seen[start] = True
    count = 1
    head = 0
    while head < count:
        x = out[head]
        for g in gens:
            y = actions[g, x]
            if not seen[y]:
                seen[y] = True
                out[count] = y
                count += 1
        head += 1
    return out[:count]


def subgroup_closure(group: GroupIndex, gens: Sequence[int], start: int = 0) -> np.ndarray:
    """Element indices of start * <gens>, in BFS order."""
    return _closure(group.actions, np.asarray(list(gens), dtype=np.int64), start)


def subgroup_order(group: GroupIndex, i: int) -> int:
    """|S_i| = |<r_j : j != i>| computed by closure from the identity."""
    gens = [j for j in range(len(group.generators)) if j != i]
    return int(subgroup_closure(group, gens).shape[0])
