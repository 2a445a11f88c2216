"""Plain-text graph file loading: one `src dst [weight]` edge per line."""

from __future__ import annotations

from typing import List, Optional, Tuple

from ..errors import MalformedInputError
from .dynamic import DynamicGraph


def parse_edge_lines(text: str, path: str | None = None) -> Tuple[List[Tuple[int, int, int]], bool, int]:
    """Returns (edges, weighted, max_node_id).  `#` starts a comment."""
    edges: List[Tuple[int, int, int]] = []
    weighted: Optional[bool] = None
    max_id = -1
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) not in (2, 3):
            raise MalformedInputError("expected 'src dst [weight]'", path=path, line=lineno)
        try:
            src, dst = int(parts[0]), int(parts[1])
            w = int(parts[2]) if len(parts) == 3 else 1
        except ValueError as exc:
            raise MalformedInputError(f"non-integer field: {exc}", path=path, line=lineno) from exc
        if src < 0 or dst < 0:
            raise MalformedInputError("negative node id", path=path, line=lineno)
        has_weight = len(parts) == 3
        if weighted is None:
            weighted = has_weight
        elif weighted != has_weight:
            raise MalformedInputError("mixed weighted/unweighted edge lines", path=path, line=lineno)
        if weighted and w < 0:
            raise MalformedInputError("negative edge weight", path=path, line=lineno)
        edges.append((src, dst, w))
        max_id = max(max_id, src, dst)
    return edges, bool(weighted), max_id


def load_graph(
    path: str,
    *,
    directed: bool = True,
    node_count: Optional[int] = None,
    merge_interval: int = 1,
    with_reverse: bool = False,
) -> DynamicGraph:
    """Load a graph file; node_count defaults to 1 + max node id seen."""
    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    edges, weighted, max_id = parse_edge_lines(text, path=path)
    n = node_count if node_count is not None else max_id + 1
    if n <= max_id:
        raise MalformedInputError(f"node_count {n} too small for max node id {max_id}", path=path)
    return DynamicGraph.build(
        edges,
        max(n, 0),
        directed=directed,
        weighted=weighted,
        merge_interval=merge_interval,
        with_reverse=with_reverse,
    )


def dump_graph(g: DynamicGraph, path: str) -> None:
    """Write the live edge set back out (arcs deduplicated for undirected graphs)."""
    with open(path, "w", encoding="utf-8") as fh:
        for v in range(g.node_count):
            loop_arcs = 0
            for e in g.neighbors(v):
                if not g.directed:
                    if e.target < v:
                        continue  # emit each undirected edge once
                    if e.target == v:
                        loop_arcs += 1  # self-loops are stored as two arcs
                        if loop_arcs % 2 == 0:
                            continue
                if g.weighted:
                    fh.write(f"{v} {e.target} {e.weight}\n")
                else:
                    fh.write(f"{v} {e.target}\n")
