"""Convert a KONECT signed edge file (``out.*``) to the sbviz edge-list format.

KONECT lists one directed mention per line as ``source target weight [...]``
with ``%`` comment lines. Mentions are folded into undirected pairs; the sign
of a pair is the sign of its summed weights, and pairs that sum to zero are
dropped unless ``--ties`` says otherwise. ``--largest-component`` keeps only
the biggest connected piece, since layouts need a connected graph.
"""

from __future__ import annotations

import argparse
import sys
from collections import defaultdict

from sbviz.sgraph import SignedGraph, is_connected, serialize_edge_list


def fold(lines, ties: str) -> dict[tuple[str, str], int]:
    total: dict[tuple[str, str], float] = defaultdict(float)
    for raw in lines:
        line = raw.strip()
        if not line or line.startswith("%"):
            continue
        parts = line.split()
        a, b = parts[0], parts[1]
        w = float(parts[2]) if len(parts) > 2 else 1.0
        if a == b:
            continue
        key = (a, b) if (int(a), a) <= (int(b), b) else (b, a)
        total[key] += w
    signs = {}
    for key, w in total.items():
        if w > 0:
            signs[key] = 1
        elif w < 0:
            signs[key] = -1
        elif ties != "drop":
            signs[key] = 1 if ties == "positive" else -1
    return signs


def largest_component(signs: dict[tuple[str, str], int]) -> dict[tuple[str, str], int]:
    adj: dict[str, set[str]] = defaultdict(set)
    for a, b in signs:
        adj[a].add(b)
        adj[b].add(a)
    best: set[str] = set()
    seen: set[str] = set()
    for start in sorted(adj, key=int):
        if start in seen:
            continue
        comp, stack = {start}, [start]
        while stack:
            for w in adj[stack.pop()]:
                if w not in comp:
                    comp.add(w)
                    stack.append(w)
        seen |= comp
        if len(comp) > len(best):
            best = comp
    return {k: s for k, s in signs.items() if k[0] in best}


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("konect_file")
    ap.add_argument("-o", "--output")
    ap.add_argument("--ties", choices=["drop", "positive", "negative"], default="drop")
    ap.add_argument("--largest-component", action="store_true")
    args = ap.parse_args(argv)

    with open(args.konect_file, encoding="utf-8") as fh:
        signs = fold(fh, args.ties)
    if args.largest_component:
        signs = largest_component(signs)

    labels: dict[str, int] = {}
    edges = []
    for (a, b), s in sorted(signs.items(), key=lambda kv: (int(kv[0][0]), int(kv[0][1]))):
        u = labels.setdefault(a, len(labels))
        v = labels.setdefault(b, len(labels))
        edges.append((u, v, s))
    g = SignedGraph(len(labels), tuple(edges), tuple(labels))
    text = serialize_edge_list(g)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    print(
        f"{g.node_count} nodes, {g.edge_count} edges, connected={is_connected(g)}",
        file=sys.stderr,
    )
    return 0


if __name__ == "__main__":
    sys.exit(main())
