"""Signed graph model, edge-list I/O and matrix constructions.

Nodes are dense indices ``0..n-1``. External labels are mapped to indices in
order of first appearance, so the same file always yields the same matrices.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

import numpy as np

SIGN_TOKENS = {"+": 1, "+1": 1, "1": 1, "-": -1, "-1": -1}


class GraphError(ValueError):
    """Invalid graph structure (self-loop, duplicate edge, bad sign...)."""


class ParseError(GraphError):
    def __init__(self, lineno: int, message: str):
        self.lineno = lineno
        super().__init__(f"line {lineno}: {message}")


class DisconnectedGraphError(GraphError):
    def __init__(self, message: str = ""):
        super().__init__(
            message
            or "the signed network must be connected; "
            "spectral balance analysis is only defined for connected graphs"
        )


@dataclass(frozen=True)
class SignedGraph:
    """Undirected graph with +1/-1 edge labels.

    ``edges`` holds ``(u, v, sign)`` triples with ``u < v``; the order given at
    construction is kept because it fixes edge indices for layouts and SVG ids.
    """

    node_count: int
    edges: tuple[tuple[int, int, int], ...] = ()
    node_labels: Optional[tuple[str, ...]] = None

    def __post_init__(self) -> None:
        n = self.node_count
        if n < 0:
            raise GraphError("node_count must be non-negative")
        if self.node_labels is not None:
            labels = tuple(str(x) for x in self.node_labels)
            if len(labels) != n:
                raise GraphError(f"expected {n} node labels, got {len(labels)}")
            object.__setattr__(self, "node_labels", labels)

        normalized = []
        seen = set()
        for u, v, s in self.edges:
            u, v, s = int(u), int(v), int(s)
            if s not in (1, -1):
                raise GraphError(f"edge ({u}, {v}) has sign {s}, expected +1 or -1")
            if u == v:
                raise GraphError(f"self-loop on node {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise GraphError(f"edge ({u}, {v}) references a node outside 0..{n - 1}")
            if u > v:
                u, v = v, u
            if (u, v) in seen:
                raise GraphError(f"duplicate edge ({u}, {v})")
            seen.add((u, v))
            normalized.append((u, v, s))
        object.__setattr__(self, "edges", tuple(normalized))

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    @property
    def positive_count(self) -> int:
        return sum(1 for _, _, s in self.edges if s > 0)

    @property
    def negative_count(self) -> int:
        return sum(1 for _, _, s in self.edges if s < 0)

    def label(self, u: int) -> str:
        return self.node_labels[u] if self.node_labels is not None else str(u)

    def neighbors(self) -> list[list[int]]:
        """Adjacency lists, neighbours in ascending order."""
        adj: list[list[int]] = [[] for _ in range(self.node_count)]
        for u, v, _ in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        for row in adj:
            row.sort()
        return adj

    def signed_neighbors(self) -> list[list[tuple[int, int]]]:
        adj: list[list[tuple[int, int]]] = [[] for _ in range(self.node_count)]
        for u, v, s in self.edges:
            adj[u].append((v, s))
            adj[v].append((u, s))
        for row in adj:
            row.sort()
        return adj

    def degrees(self) -> np.ndarray:
        deg = np.zeros(self.node_count, dtype=np.int64)
        for u, v, _ in self.edges:
            deg[u] += 1
            deg[v] += 1
        return deg

    def density(self) -> float:
        pairs = self.node_count * (self.node_count - 1) // 2
        return self.edge_count / pairs if pairs else 0.0

    def with_signs(self, signs: Iterable[int]) -> "SignedGraph":
        signs = list(signs)
        if len(signs) != self.edge_count:
            raise GraphError("sign vector length does not match edge count")
        edges = tuple((u, v, s) for (u, v, _), s in zip(self.edges, signs))
        return SignedGraph(self.node_count, edges, self.node_labels)


def parse_edge_list(text: str, strict: bool = True) -> SignedGraph:
    """Parse ``"U V S"`` lines into a :class:`SignedGraph`.

    ``#`` starts a comment line, blank lines are skipped. With ``strict=False``
    an exact repeat of an edge (same sign) is ignored instead of rejected;
    conflicting duplicates are always an error.
    """
    index: dict[str, int] = {}
    labels: list[str] = []
    edges: list[tuple[int, int, int]] = []
    signs: dict[tuple[int, int], int] = {}

    def node(label: str) -> int:
        if label not in index:
            index[label] = len(labels)
            labels.append(label)
        return index[label]

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 3:
            raise ParseError(lineno, f"expected 3 fields 'U V S', got {len(parts)}")
        a, b, tok = parts
        if tok not in SIGN_TOKENS:
            raise ParseError(lineno, f"unknown sign token {tok!r}")
        if a == b:
            raise ParseError(lineno, f"self-loop on {a!r}")
        s = SIGN_TOKENS[tok]
        u, v = node(a), node(b)
        key = (min(u, v), max(u, v))
        if key in signs:
            if signs[key] != s:
                raise ParseError(lineno, f"conflicting duplicate edge {a} {b}")
            if strict:
                raise ParseError(lineno, f"duplicate edge {a} {b}")
            continue
        signs[key] = s
        edges.append((key[0], key[1], s))

    return SignedGraph(len(labels), tuple(edges), tuple(labels))


def serialize_edge_list(g: SignedGraph) -> str:
    """Inverse of :func:`parse_edge_list`; always LF and ``+``/``-`` signs."""
    return "".join(
        f"{g.label(u)} {g.label(v)} {'+' if s > 0 else '-'}\n" for u, v, s in g.edges
    )


def read_edge_list(path, strict: bool = True) -> SignedGraph:
    with open(path, encoding="utf-8") as fh:
        return parse_edge_list(fh.read(), strict=strict)


def from_edges(
    node_count: int, edges: Sequence[tuple[int, int, int]], labels=None
) -> SignedGraph:
    return SignedGraph(node_count, tuple(edges), None if labels is None else tuple(labels))


def is_connected(g: SignedGraph) -> bool:
    """Connectivity of the underlying unsigned graph."""
    n = g.node_count
    if n <= 1:
        return True
    adj = g.neighbors()
    seen = [False] * n
    seen[0] = True
    queue = deque([0])
    count = 1
    while queue:
        u = queue.popleft()
        for w in adj[u]:
            if not seen[w]:
                seen[w] = True
                count += 1
                queue.append(w)
    return count == n


def require_connected(g: SignedGraph) -> None:
    if not is_connected(g):
        raise DisconnectedGraphError()


def _readonly(m: np.ndarray) -> np.ndarray:
    m.flags.writeable = False
    return m


def signed_adjacency(g: SignedGraph) -> np.ndarray:
    a = np.zeros((g.node_count, g.node_count))
    for u, v, s in g.edges:
        a[u, v] = s
        a[v, u] = s
    return _readonly(a)


def unsigned_degree_matrix(g: SignedGraph) -> np.ndarray:
    return _readonly(np.diag(g.degrees().astype(float)))


def signed_laplacian(g: SignedGraph) -> np.ndarray:
    """Unsigned degree diagonal minus signed adjacency.

    Filled entry by entry so the result is bit-for-bit symmetric.
    """
    lap = np.zeros((g.node_count, g.node_count))
    for u, v, s in g.edges:
        lap[u, v] = -s
        lap[v, u] = -s
        lap[u, u] += 1.0
        lap[v, v] += 1.0
    return _readonly(lap)
