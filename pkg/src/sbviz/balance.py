"""Structural balance diagnostics.

The switching test is the production check: a BFS assigns every node a side
(+1/-1) so that positive edges join equal sides and negative edges join
opposite sides, and reports an unbalanced cycle as soon as a non-tree edge
disagrees. Cycle enumeration is kept only as a small-instance oracle.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Optional, Sequence

from .layout import faction_assignment
from .sgraph import GraphError, SignedGraph, require_connected, signed_laplacian
from .spectral import smallest_eigenpair


@dataclass(frozen=True)
class SwitchingResult:
    is_balanced: bool
    assignment: Optional[tuple[int, ...]] = None
    witness: Optional[tuple[int, ...]] = None


@dataclass(frozen=True)
class BalanceReport:
    is_balanced: bool
    lambda_min: float
    frustrated_positive: int
    frustrated_negative: int
    triangle_total: int
    triangle_unbalanced: int

    @property
    def nu(self) -> float:
        return self.triangle_unbalanced / self.triangle_total if self.triangle_total else 0.0

    def to_dict(self) -> dict:
        return {
            "is_balanced": self.is_balanced,
            "lambda_min": self.lambda_min,
            "frustrated_positive": self.frustrated_positive,
            "frustrated_negative": self.frustrated_negative,
            "triangle_total": self.triangle_total,
            "triangle_unbalanced": self.triangle_unbalanced,
            "nu": self.nu,
        }


def switching_balance_test(g: SignedGraph) -> SwitchingResult:
    """BFS two-colouring with signed edges.

    On failure the witness is the tree path from ``u`` up to the common
    ancestor and down to ``v``, closed by the violating edge ``(v, u)``; it
    always carries an odd number of negative edges.
    """
    n = g.node_count
    require_connected(g)
    if n == 0:
        return SwitchingResult(True, assignment=())
    adj = g.signed_neighbors()
    side = [0] * n
    parent = [-1] * n
    depth = [0] * n
    side[0] = 1
    order = deque([0])
    violation = None
    while order and violation is None:
        u = order.popleft()
        for w, s in adj[u]:
            if side[w] == 0:
                side[w] = s * side[u]
                parent[w] = u
                depth[w] = depth[u] + 1
                order.append(w)
            elif side[u] * side[w] != s:
                violation = (u, w)
                break
    if violation is None:
        return SwitchingResult(True, assignment=tuple(side))

    u, v = violation
    up, down = [u], [v]
    a, b = u, v
    while depth[a] > depth[b]:
        a = parent[a]
        up.append(a)
    while depth[b] > depth[a]:
        b = parent[b]
        down.append(b)
    while a != b:
        a, b = parent[a], parent[b]
        up.append(a)
        down.append(b)
    cycle = up + down[-2::-1]
    return SwitchingResult(False, witness=tuple(cycle))


def cycle_negative_parity(g: SignedGraph, cycle: Sequence[int]) -> int:
    """Number of negative edges along a closed node sequence, mod 2."""
    sign = {(u, v): s for u, v, s in g.edges}
    negatives = 0
    k = len(cycle)
    for i in range(k):
        a, b = cycle[i], cycle[(i + 1) % k]
        key = (a, b) if a < b else (b, a)
        if key not in sign:
            raise GraphError(f"{a}-{b} is not an edge of the graph")
        negatives += sign[key] < 0
    return negatives % 2


def frustration_against(g: SignedGraph, assignment: Sequence[int]) -> tuple[int, int]:
    """Count (positive edges across sides, negative edges within a side)."""
    if len(assignment) != g.node_count:
        raise ValueError("assignment length must equal node_count")
    fp = fn = 0
    for u, v, s in g.edges:
        same = assignment[u] == assignment[v]
        if s > 0 and not same:
            fp += 1
        elif s < 0 and same:
            fn += 1
    return fp, fn


def triangle_census(g: SignedGraph) -> tuple[int, int]:
    """(total triangles, triangles with sign product -1).

    Each triangle u < v < w is found once by intersecting the forward
    neighbour sets of ``u`` and ``v`` for the edge ``(u, v)``.
    """
    forward: list[set[int]] = [set() for _ in range(g.node_count)]
    sign: dict[tuple[int, int], int] = {}
    for u, v, s in g.edges:
        forward[u].add(v)
        sign[(u, v)] = s
    total = unbalanced = 0
    for (u, v), s in sign.items():
        for w in forward[u] & forward[v]:
            total += 1
            if s * sign[(u, w)] * sign[(v, w)] < 0:
                unbalanced += 1
    return total, unbalanced


def unbalanced_triangle_ratio(g: SignedGraph) -> float:
    total, unbalanced = triangle_census(g)
    return unbalanced / total if total else 0.0


def cycle_oracle(g: SignedGraph, max_nodes: int = 12) -> bool:
    """True iff every simple cycle has an even number of negative edges.

    Exhaustive; only for tiny graphs.
    """
    if g.node_count > max_nodes:
        raise ValueError(f"cycle oracle limited to {max_nodes} nodes, got {g.node_count}")
    adj = g.signed_neighbors()
    n = g.node_count

    # cycles are rooted at their smallest node and only walk through larger ones
    def odd_cycle_from(start: int) -> bool:
        stack = [(start, 0, iter(adj[start]))]
        on_path = {start}
        while stack:
            node, parity, it = stack[-1]
            step = next(it, None)
            if step is None:
                stack.pop()
                on_path.discard(node)
                continue
            w, s = step
            p = parity ^ (s < 0)
            if w == start:
                if len(stack) >= 3 and p:
                    return True
            elif w > start and w not in on_path:
                on_path.add(w)
                stack.append((w, p, iter(adj[w])))
        return False

    return not any(odd_cycle_from(s) for s in range(n))


def balance_report(g: SignedGraph, spectral=None, assignment=None) -> BalanceReport:
    """Assemble a :class:`BalanceReport`.

    ``assignment`` defaults to the layout factions (left = -1, right = +1);
    ``spectral`` defaults to a fresh eigen-solve of the signed Laplacian.
    """
    if spectral is None:
        spectral = smallest_eigenpair(signed_laplacian(g))
    if assignment is None:
        assignment = faction_assignment(spectral.eigenvector)
    verdict = switching_balance_test(g)
    fp, fn = frustration_against(g, assignment)
    total, unbalanced = triangle_census(g)
    return BalanceReport(verdict.is_balanced, spectral.lambda_min, fp, fn, total, unbalanced)
