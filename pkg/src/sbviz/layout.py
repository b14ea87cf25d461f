"""Node coordinates, edge classes, factions and axis tilt.

The abscissa of each node is its entry in the smallest eigenvector of the
signed Laplacian. Entries that agree up to ``x_tolerance`` share a column and
are stacked with consecutive integer heights in node-index order.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Callable, Collection, Optional

import numpy as np

from .sgraph import SignedGraph, require_connected
from .spectral import SpectralResult

POSITIVE_INTERNAL = "positive_internal"
NEGATIVE_INTERNAL = "negative_internal"
POSITIVE_EXTERNAL = "positive_external"
NEGATIVE_EXTERNAL = "negative_external"
EDGE_CLASSES = (POSITIVE_INTERNAL, NEGATIVE_INTERNAL, POSITIVE_EXTERNAL, NEGATIVE_EXTERNAL)

DEFAULT_X_TOLERANCE = 1e-6


@dataclass(frozen=True)
class Measure:
    """A faction statistic; must return 0 for the empty set."""

    name: str
    evaluate: Callable[[SignedGraph, Collection[int]], float]

    def __call__(self, g: SignedGraph, nodes: Collection[int]) -> float:
        if not nodes:
            return 0.0
        return float(self.evaluate(g, nodes))


def _internal_edges(g: SignedGraph, nodes: Collection[int]):
    inside = set(nodes)
    return [(u, v, s) for u, v, s in g.edges if u in inside and v in inside]


def measure_size(g: SignedGraph, nodes: Collection[int]) -> float:
    return float(len(set(nodes)))


def measure_clustering(g: SignedGraph, nodes: Collection[int]) -> float:
    """Mean local clustering coefficient of the induced subgraph, signs ignored.

    Nodes with fewer than two neighbours inside the set contribute 0.
    """
    inside = set(nodes)
    if not inside:
        return 0.0
    adj: dict[int, set[int]] = {u: set() for u in inside}
    for u, v, _ in _internal_edges(g, inside):
        adj[u].add(v)
        adj[v].add(u)
    total = 0.0
    for u in inside:
        nbrs = adj[u]
        k = len(nbrs)
        if k < 2:
            continue
        links = sum(len(adj[w] & nbrs) for w in nbrs) // 2
        total += 2.0 * links / (k * (k - 1))
    return total / len(inside)


def measure_pos_density(g: SignedGraph, nodes: Collection[int]) -> float:
    k = len(set(nodes))
    if k < 2:
        return 0.0
    positive = sum(1 for _, _, s in _internal_edges(g, nodes) if s > 0)
    return positive / (k * (k - 1) / 2)


def measure_pos_ratio(g: SignedGraph, nodes: Collection[int]) -> float:
    internal = _internal_edges(g, nodes)
    if not internal:
        return 0.0
    return sum(1 for _, _, s in internal if s > 0) / len(internal)


MEASURES = {
    "size": Measure("size", measure_size),
    "clustering": Measure("clustering", measure_clustering),
    "pos_density": Measure("pos_density", measure_pos_density),
    "pos_ratio": Measure("pos_ratio", measure_pos_ratio),
}


def get_measure(name: Optional[str]) -> Optional[Measure]:
    if name is None or name == "none":
        return None
    try:
        return MEASURES[name]
    except KeyError:
        raise ValueError(f"unknown measure {name!r}; choose from {sorted(MEASURES)}") from None


def quantize(x, x_tolerance: float = DEFAULT_X_TOLERANCE) -> np.ndarray:
    """Bucket index of each abscissa (round half up to multiples of the tolerance)."""
    if x_tolerance <= 0:
        raise ValueError("x_tolerance must be positive")
    return np.floor(np.asarray(x, dtype=float) / x_tolerance + 0.5).astype(np.int64)


def faction_assignment(x, x_tolerance: float = DEFAULT_X_TOLERANCE) -> list[int]:
    """-1 for the left faction (quantized x < 0), +1 for the right."""
    return [-1 if q < 0 else 1 for q in quantize(x, x_tolerance)]


@dataclass(frozen=True)
class LayoutModel:
    x: tuple[float, ...]
    y: tuple[int, ...]
    edge_class: tuple[str, ...]
    faction_left: tuple[int, ...]
    faction_right: tuple[int, ...]
    gamma: Optional[float]
    lambda_label: float
    mu_name: Optional[str] = None
    mu_left: Optional[float] = None
    mu_right: Optional[float] = None
    x_tolerance: float = DEFAULT_X_TOLERANCE

    @property
    def node_count(self) -> int:
        return len(self.x)

    def assignment(self) -> list[int]:
        left = set(self.faction_left)
        return [-1 if u in left else 1 for u in range(self.node_count)]

    def to_dict(self) -> dict:
        return {
            "x": list(self.x),
            "y": list(self.y),
            "edge_class": list(self.edge_class),
            "faction_left": list(self.faction_left),
            "faction_right": list(self.faction_right),
            "gamma": self.gamma,
            "lambda_label": self.lambda_label,
            "mu_name": self.mu_name,
            "mu_left": self.mu_left,
            "mu_right": self.mu_right,
            "x_tolerance": self.x_tolerance,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "LayoutModel":
        return cls(
            x=tuple(float(v) for v in d["x"]),
            y=tuple(int(v) for v in d["y"]),
            edge_class=tuple(d["edge_class"]),
            faction_left=tuple(int(v) for v in d["faction_left"]),
            faction_right=tuple(int(v) for v in d["faction_right"]),
            gamma=d.get("gamma"),
            lambda_label=float(d["lambda_label"]),
            mu_name=d.get("mu_name"),
            mu_left=d.get("mu_left"),
            mu_right=d.get("mu_right"),
            x_tolerance=float(d.get("x_tolerance", DEFAULT_X_TOLERANCE)),
        )


def compute_layout(
    g: SignedGraph,
    spectral: SpectralResult,
    mu: Optional[Measure] = None,
    x_tolerance: float = DEFAULT_X_TOLERANCE,
) -> LayoutModel:
    require_connected(g)
    if x_tolerance <= 0:
        raise ValueError("x_tolerance must be positive")
    x = np.asarray(spectral.eigenvector, dtype=float)
    if x.size != g.node_count:
        raise ValueError("eigenvector length does not match the graph")
    q = quantize(x, x_tolerance)

    seen: dict[int, int] = {}
    y = []
    for bucket in q.tolist():
        y.append(seen.get(bucket, 0))
        seen[bucket] = y[-1] + 1

    classes = []
    for u, v, s in g.edges:
        internal = q[u] == q[v]
        if s > 0:
            classes.append(POSITIVE_INTERNAL if internal else POSITIVE_EXTERNAL)
        else:
            classes.append(NEGATIVE_INTERNAL if internal else NEGATIVE_EXTERNAL)

    left = tuple(int(u) for u in np.flatnonzero(q < 0))
    right = tuple(int(u) for u in np.flatnonzero(q >= 0))

    gamma = mu_left = mu_right = None
    if mu is not None:
        mu_left, mu_right = mu(g, left), mu(g, right)
        gamma = mu_left - mu_right

    return LayoutModel(
        x=tuple(float(v) for v in x),
        y=tuple(y),
        edge_class=tuple(classes),
        faction_left=left,
        faction_right=right,
        gamma=gamma,
        lambda_label=float(spectral.lambda_min),
        mu_name=None if mu is None else mu.name,
        mu_left=mu_left,
        mu_right=mu_right,
        x_tolerance=x_tolerance,
    )


def layout_to_json(layout: LayoutModel, g: SignedGraph) -> str:
    """Layout plus the graph it was computed from, so ``render`` can run standalone."""
    doc = layout.to_dict()
    doc["graph"] = {
        "node_count": g.node_count,
        "node_labels": None if g.node_labels is None else list(g.node_labels),
        "edges": [[u, v, s] for u, v, s in g.edges],
    }
    return json.dumps(doc, indent=2) + "\n"


def layout_from_json(text: str) -> tuple[LayoutModel, SignedGraph]:
    doc = json.loads(text)
    gd = doc["graph"]
    labels = gd.get("node_labels")
    g = SignedGraph(
        int(gd["node_count"]),
        tuple(tuple(e) for e in gd["edges"]),
        None if labels is None else tuple(labels),
    )
    return LayoutModel.from_dict(doc), g


def edges_by_class(layout: LayoutModel, g: SignedGraph, cls: str) -> list[tuple[int, int, int]]:
    return [e for e, c in zip(g.edges, layout.edge_class) if c == cls]
