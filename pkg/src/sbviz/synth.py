"""Synthetic signed networks with a target density and unbalanced-triangle ratio,
and the sign-reshuffling null model.

All randomness comes from ``numpy.random.Generator(PCG64(seed))``. Draw order:

1. ``integers(0, 2, size=n)`` picks each node's side, redrawn while every
   node lands on the same side.
2. Edge removal draws ``integers(0, m)`` over the current edge list and
   rejects bridges; the list is kept in swap-remove order.
3. Sign flips consume blocks of ``random(32768)`` doubles, two per attempt:
   ``floor(u1 * k)`` picks one of the ``k`` candidate edges (edges in at least
   one balanced triangle, kept in swap-remove order) and the pick is accepted
   when ``u2 * t < b``, with ``t`` triangles through the edge of which ``b``
   are balanced. Accepted picks are therefore distributed like "choose a
   uniformly random balanced triangle, then one of its three edges".

The reshuffle is a Fisher-Yates pass with ``integers(0, i + 1)`` for
``i = m-1 .. 1``.
"""

from __future__ import annotations

import warnings
from collections import deque
from dataclasses import dataclass, field
import numba
import numpy as np

from .sgraph import SignedGraph, is_connected

RNG_ID = "numpy.PCG64"
_DRAW_BLOCK = 1 << 15
_CAP_FACTOR = 50


class GeneratorWarning(UserWarning):
    pass


@dataclass(frozen=True)
class GenParams:
    n: int
    delta: float
    nu: float
    seed: int = 0

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError("n must be at least 1")
        if not 0.0 < self.delta <= 1.0:
            raise ValueError("delta must lie in (0, 1]")
        if not 0.0 <= self.nu <= 1.0:
            raise ValueError("nu must lie in [0, 1]")
        if self.nu > 0 and self.n < 3:
            raise ValueError("nu > 0 needs at least 3 nodes")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be an unsigned 64-bit integer")


@dataclass
class Generated:
    graph: SignedGraph
    params: GenParams
    delta_achieved: float
    nu_achieved: float
    nu_trace: list[float] = field(default_factory=list)
    flips: int = 0
    capped: bool = False
    warnings: list[str] = field(default_factory=list)

    def sidecar(self) -> dict:
        return {
            "n": self.params.n,
            "delta_target": self.params.delta,
            "delta_achieved": self.delta_achieved,
            "nu_target": self.params.nu,
            "nu_achieved": self.nu_achieved,
            "seed": self.params.seed,
            "rng_id": RNG_ID,
        }


def _ratio(edges, signs, n) -> float:
    ptr, pa, pb = _triangle_table(edges, n)
    _, unbalanced, total = _count_triangles(np.array(signs, dtype=np.int64), ptr, pa, pb)
    return unbalanced / total if total else 0.0


def make_rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed))


def _reachable_without(adj: list[set[int]], u: int, v: int) -> bool:
    """Is v reachable from u once the edge (u, v) is gone?"""
    seen = {u}
    queue = deque([u])
    while queue:
        a = queue.popleft()
        for b in adj[a]:
            if b in seen or (a == u and b == v):
                continue
            if b == v:
                return True
            seen.add(b)
            queue.append(b)
    return False


def _thin(n: int, delta: float, adj: list[set[int]], rng, check_steps: bool) -> list[tuple[int, int]]:
    """Remove uniformly random non-bridge edges until density <= delta."""
    edges = [(u, v) for u in range(n) for v in range(u + 1, n)]
    pairs = n * (n - 1) // 2
    target = int(np.floor(delta * pairs + 1e-9))

    def drop(i: int) -> None:
        last = edges.pop()
        if i < len(edges):
            edges[i] = last

    while len(edges) > target and len(edges) > n - 1:
        # a connected graph with more than n - 1 edges has a cycle, so some draw succeeds
        i = int(rng.integers(0, len(edges)))
        u, v = edges[i]
        # an edge on a triangle is never a bridge; skip the search then
        if adj[u].isdisjoint(adj[v]) and not _reachable_without(adj, u, v):
            continue
        adj[u].discard(v)
        adj[v].discard(u)
        drop(i)
        if check_steps:
            g = SignedGraph(n, tuple((a, b, 1) for a, b in edges))
            if not is_connected(g):
                raise AssertionError(f"removing {(u, v)} disconnected the graph")
    return sorted(edges)


def _triangle_table(edges: list[tuple[int, int]], n: int):
    """CSR table: for edge i, rows ptr[i]:ptr[i+1] of (pa, pb) hold the other
    two edge indices of every triangle through i, by increasing third node."""
    m = len(edges)
    ends = np.array(edges, dtype=np.int64).reshape(m, 2)
    # sorted adjacency with the edge index alongside each neighbour
    src = np.concatenate([ends[:, 0], ends[:, 1]])
    dst = np.concatenate([ends[:, 1], ends[:, 0]])
    eid = np.concatenate([np.arange(m), np.arange(m)])
    order = np.lexsort((dst, src))
    nbr, nbr_edge = dst[order], eid[order]
    start = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(np.bincount(src, minlength=n), out=start[1:])
    return _fill_triangles(ends, start, nbr, nbr_edge)


@numba.njit(cache=True)
def _merge_common(ends, start, nbr, nbr_edge, i, pa, pb, out):
    u, v = ends[i, 0], ends[i, 1]
    a, a_end = start[u], start[u + 1]
    b, b_end = start[v], start[v + 1]
    k = out
    while a < a_end and b < b_end:
        if nbr[a] < nbr[b]:
            a += 1
        elif nbr[a] > nbr[b]:
            b += 1
        else:
            if pa.shape[0] > 0:
                pa[k] = nbr_edge[a]
                pb[k] = nbr_edge[b]
            k += 1
            a += 1
            b += 1
    return k


@numba.njit(cache=True)
def _fill_triangles(ends, start, nbr, nbr_edge):
    m = ends.shape[0]
    ptr = np.zeros(m + 1, dtype=np.int64)
    empty = np.zeros(0, dtype=np.int64)
    for i in range(m):
        ptr[i + 1] = ptr[i] + _merge_common(ends, start, nbr, nbr_edge, i, empty, empty, 0)
    pa = np.empty(ptr[m], dtype=np.int64)
    pb = np.empty(ptr[m], dtype=np.int64)
    for i in range(m):
        _merge_common(ends, start, nbr, nbr_edge, i, pa, pb, ptr[i])
    return ptr, pa, pb


@numba.njit(cache=True)
def _count_triangles(signs, ptr, pa, pb):
    m = signs.shape[0]
    bal = np.zeros(m, dtype=np.int64)
    unbalanced3 = 0
    for i in range(m):
        for k in range(ptr[i], ptr[i + 1]):
            if signs[i] * signs[pa[k]] * signs[pb[k]] > 0:
                bal[i] += 1
            else:
                unbalanced3 += 1
    return bal, unbalanced3 // 3, (ptr[m] // 3)


@numba.njit(cache=True)
def _set_candidate(i, bal, cand, cpos, st):
    # st[3] is the live length of cand
    if bal[i] > 0 and cpos[i] < 0:
        cpos[i] = st[3]
        cand[st[3]] = i
        st[3] += 1
    elif bal[i] == 0 and cpos[i] >= 0:
        k = cpos[i]
        last = cand[st[3] - 1]
        st[3] -= 1
        cand[k] = last
        cpos[last] = k
        cpos[i] = -1


@numba.njit(cache=True)
def _flip_walk(signs, bal, cand, cpos, st, ptr, pa, pb, nu, cap, draws, best_signs, best_gap, trace):
    """Flip edges until the unbalanced ratio reaches nu.

    st = [unbalanced, total, flips, n_candidates, draw_position].
    Returns 0 reached, 1 no candidate edge, 2 flip cap, 3 draws exhausted.
    """
    while True:
        if st[1] == 0 or st[0] / st[1] >= nu:
            return 0
        if st[3] == 0:
            return 1
        if st[2] >= cap:
            return 2
        while True:
            if st[4] + 2 > draws.shape[0]:
                return 3
            i = cand[int(draws[st[4]] * st[3])]
            accept = draws[st[4] + 1] * (ptr[i + 1] - ptr[i]) < bal[i]
            st[4] += 2
            if accept:
                break
        for k in range(ptr[i], ptr[i + 1]):
            a = pa[k]
            b = pb[k]
            if signs[i] * signs[a] * signs[b] > 0:
                bal[a] -= 1
                bal[b] -= 1
                st[0] += 1
            else:
                bal[a] += 1
                bal[b] += 1
                st[0] -= 1
            _set_candidate(a, bal, cand, cpos, st)
            _set_candidate(b, bal, cand, cpos, st)
        signs[i] = -signs[i]
        bal[i] = (ptr[i + 1] - ptr[i]) - bal[i]
        _set_candidate(i, bal, cand, cpos, st)
        r = st[0] / st[1]
        trace[st[2]] = r
        st[2] += 1
        if abs(r - nu) < best_gap[0]:
            best_gap[0] = abs(r - nu)
            best_signs[:] = signs


def _raise_unbalance(edges, signs, n, nu, rng):
    """Phase 3. Returns (signs, achieved ratio, trace, flips, capped)."""
    signs = np.array(signs, dtype=np.int64)
    ptr, pa, pb = _triangle_table(edges, n)
    bal, unbalanced, total = _count_triangles(signs, ptr, pa, pb)
    m = len(edges)
    cand = np.full(m, -1, dtype=np.int64)
    cpos = np.full(m, -1, dtype=np.int64)
    st = np.array([unbalanced, total, 0, 0, 0], dtype=np.int64)
    for i in range(m):
        _set_candidate(i, bal, cand, cpos, st)
    cap = _CAP_FACTOR * m
    trace = np.zeros(cap, dtype=float)
    best_signs = signs.copy()
    best_gap = np.array([abs((unbalanced / total if total else 0.0) - nu)])
    while True:
        draws = rng.random(_DRAW_BLOCK)
        st[4] = 0
        status = _flip_walk(
            signs, bal, cand, cpos, st, ptr, pa, pb, nu, cap, draws, best_signs, best_gap, trace
        )
        if status != 3:
            break
    capped = status == 2
    if capped:
        signs = best_signs
        _, unbalanced, _ = _count_triangles(signs, ptr, pa, pb)
    else:
        unbalanced = st[0]
    ratio = unbalanced / total if total else 0.0
    flips = int(st[2])
    return [int(s) for s in signs], ratio, trace[:flips].tolist(), flips, capped


def generate(params: GenParams, check_steps: bool = False) -> Generated:
    """Planted two-faction network, thinned to density ``delta``, then pushed
    towards an unbalanced-triangle ratio of ``nu`` by random sign flips of
    edges lying in balanced triangles.

    Flips continue while the ratio is below ``nu`` and stop at the first flip
    that reaches it. After ``50 * |E|`` flips the closest state seen is
    returned. Unreachable targets are reported in ``warnings``.
    """
    n, rng = params.n, make_rng(params.seed)
    notes: list[str] = []

    side = rng.integers(0, 2, size=n)
    while n > 1 and side.min() == side.max():
        # both blocks of the partition must be non-empty
        side = rng.integers(0, 2, size=n)
    adj = [set(range(n)) - {u} for u in range(n)]
    edges = _thin(n, params.delta, adj, rng, check_steps)
    signs = [1 if side[u] == side[v] else -1 for u, v in edges]

    pairs = n * (n - 1) // 2
    delta_achieved = len(edges) / pairs if pairs else 0.0
    if delta_achieved > params.delta + 1e-12:
        notes.append(
            f"density {params.delta} unreachable: stopped at a spanning tree "
            f"with density {delta_achieved:.4f}"
        )

    trace: list[float] = []
    flips = 0
    capped = False
    if params.nu == 0:
        nu_achieved = _ratio(edges, signs, n)
    else:
        signs, nu_achieved, trace, flips, capped = _raise_unbalance(
            edges, signs, n, params.nu, rng
        )
        if nu_achieved < params.nu:
            notes.append(
                f"unbalanced-triangle ratio {params.nu} not reached; "
                f"achieved {nu_achieved:.4f}"
                + (f" after the {flips}-flip cap" if capped else "")
            )

    graph = SignedGraph(n, tuple((u, v, s) for (u, v), s in zip(edges, signs)))
    for note in notes:
        warnings.warn(note, GeneratorWarning, stacklevel=2)
    return Generated(
        graph=graph,
        params=params,
        delta_achieved=delta_achieved,
        nu_achieved=nu_achieved,
        nu_trace=trace,
        flips=flips,
        capped=capped,
        warnings=notes,
    )


def reshuffle_signs(g: SignedGraph, seed: int) -> SignedGraph:
    """Same topology, signs permuted uniformly at random across edges."""
    rng = make_rng(seed)
    signs = [s for _, _, s in g.edges]
    for i in range(len(signs) - 1, 0, -1):
        j = int(rng.integers(0, i + 1))
        signs[i], signs[j] = signs[j], signs[i]
    return g.with_signs(signs)


def shuffle_sidecar(g: SignedGraph, seed: int) -> dict:
    return {
        "nodes": g.node_count,
        "edges": g.edge_count,
        "positive": g.positive_count,
        "negative": g.negative_count,
        "seed": seed,
        "rng_id": RNG_ID,
    }
