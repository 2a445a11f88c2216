"""Independent ground-truth implementations used by tests and acceptance runs.

Everything here is sequential, deterministic, and deliberately shares no code
with the graph store or the execution engine it is used to check.
"""

from __future__ import annotations

import heapq
import math
from collections import deque
from typing import Dict, Iterable, List, Sequence, Set, Tuple

import numpy as np

from .graph.updates import ADD, DELETE, UpdateRecord

INF = float("inf")


def oracle_sssp(
    edges: Sequence[Tuple[int, int, int]], node_count: int, src: int, directed: bool = True
) -> List[float]:
    """Dijkstra over an explicit edge list; unreachable nodes get inf."""
    adj: List[List[Tuple[int, int]]] = [[] for _ in range(node_count)]
    for u, v, w in edges:
        if w < 0:
            raise ValueError("oracle_sssp requires non-negative weights")
        adj[u].append((v, w))
        if not directed:
            adj[v].append((u, w))
    dist = [INF] * node_count
    dist[src] = 0
    heap = [(0, src)]
    while heap:
        d, u = heapq.heappop(heap)
        if d > dist[u]:
            continue
        for v, w in adj[u]:
            nd = d + w
            if nd < dist[v]:
                dist[v] = nd
                heapq.heappush(heap, (nd, v))
    return dist


def oracle_pr(
    edges: Sequence[Tuple[int, int, int]],
    node_count: int,
    damping: float = 0.85,
    beta: float = 0.001,
    max_iter: int = 100,
) -> List[float]:
    """Power iteration with uniform dangling redistribution.

    Stops when the max per-node delta drops below beta, or after max_iter
    rounds.  Duplicate arcs count once (simple-graph semantics, matching the
    per-edge pull the checked engine performs).
    """
    if not (0.0 < damping < 1.0):
        raise ValueError("damping must lie in (0, 1)")
    n = node_count
    if n == 0:
        return []
    arcs = sorted({(u, v) for u, v, _ in edges})
    src_arr = np.array([a[0] for a in arcs], dtype=np.int64)
    dst_arr = np.array([a[1] for a in arcs], dtype=np.int64)
    outdeg = np.zeros(n, dtype=np.int64)
    for u in src_arr:
        outdeg[u] += 1
    rank = np.full(n, 1.0 / n)
    base = (1.0 - damping) / n
    dangling_mask = outdeg == 0
    safe_deg = np.where(outdeg == 0, 1, outdeg)
    for _ in range(max_iter):
        contrib = rank / safe_deg
        incoming = np.zeros(n)
        np.add.at(incoming, dst_arr, contrib[src_arr])
        dangling = rank[dangling_mask].sum()
        new_rank = base + damping * (incoming + dangling / n)
        delta = np.abs(new_rank - rank).max()
        rank = new_rank
        if delta < beta:
            break
    return rank.tolist()


def _simple_undirected_adjacency(
    edges: Iterable[Tuple[int, int, int]], node_count: int
) -> List[Set[int]]:
    adj: List[Set[int]] = [set() for _ in range(node_count)]
    for u, v, _ in edges:
        if u == v:
            continue
        adj[u].add(v)
        adj[v].add(u)
    return adj


def oracle_tc(edges: Sequence[Tuple[int, int, int]], node_count: int) -> int:
    """Exact triangle count, treating the edge set as simple and undirected."""
    adj = _simple_undirected_adjacency(edges, node_count)
    count = 0
    for u in range(node_count):
        for v in adj[u]:
            if v <= u:
                continue
            count += sum(1 for w in adj[u] & adj[v] if w > v)
    return count


class ReplayOracle:
    """Hash-multimap adjacency replaying the same update stream as the store.

    Deletes remove one matching occurrence; missing deletes no-op.  Undirected
    graphs track both arcs, mirroring the store's two-arc representation.
    """

    def __init__(self, edges: Iterable[Tuple[int, int, int]], node_count: int, directed: bool = True):
        self.node_count = node_count
        self.directed = directed
        self.adj: List[Dict[Tuple[int, int], int]] = [dict() for _ in range(node_count)]
        for u, v, w in edges:
            self._add_arc(u, v, w)
            if not directed:
                self._add_arc(v, u, w)

    def _add_arc(self, u: int, v: int, w: int) -> None:
        key = (v, w)
        self.adj[u][key] = self.adj[u].get(key, 0) + 1

    def _del_arc(self, u: int, v: int) -> bool:
        """Remove one occurrence of u->v with any weight (lowest weight first for determinism)."""
        candidates = sorted(k for k in self.adj[u] if k[0] == v)
        if not candidates:
            return False
        key = candidates[0]
        self.adj[u][key] -= 1
        if self.adj[u][key] == 0:
            del self.adj[u][key]
        return True

    def apply(self, records: Iterable[UpdateRecord]) -> int:
        """Apply records in order; returns the number of missed deletes."""
        misses = 0
        for rec in records:
            if rec.kind == ADD:
                self._add_arc(rec.src, rec.dst, rec.weight)
                if not self.directed:
                    self._add_arc(rec.dst, rec.src, rec.weight)
            elif rec.kind == DELETE:
                if self._del_arc(rec.src, rec.dst):
                    if not self.directed and rec.src != rec.dst:
                        self._del_arc(rec.dst, rec.src)
                    elif not self.directed:
                        self._del_arc(rec.src, rec.dst)
                else:
                    misses += 1
        return misses

    def neighbor_multiset(self, v: int) -> Dict[Tuple[int, int], int]:
        return dict(self.adj[v])

    def edge_list(self) -> List[Tuple[int, int, int]]:
        out = []
        for u in range(self.node_count):
            for (v, w), cnt in self.adj[u].items():
                out.extend([(u, v, w)] * cnt)
        return out


def oracle_bfs_reachable(
    edges: Sequence[Tuple[int, int, int]], node_count: int, seeds: Iterable[int]
) -> List[bool]:
    """Nodes reachable from any seed, treating every edge as undirected."""
    adj: List[List[int]] = [[] for _ in range(node_count)]
    for u, v, _ in edges:
        adj[u].append(v)
        adj[v].append(u)
    seen = [False] * node_count
    queue = deque()
    for s in seeds:
        if not seen[s]:
            seen[s] = True
            queue.append(s)
    while queue:
        u = queue.popleft()
        for v in adj[u]:
            if not seen[v]:
                seen[v] = True
                queue.append(v)
    return seen


def bfs_levels(
    edges: Sequence[Tuple[int, int, int]], node_count: int, src: int, directed: bool = True
) -> List[float]:
    """Hop counts from src (inf when unreachable); the diameter oracle for tests."""
    adj: List[List[int]] = [[] for _ in range(node_count)]
    for u, v, _ in edges:
        adj[u].append(v)
        if not directed:
            adj[v].append(u)
    level = [math.inf] * node_count
    level[src] = 0
    queue = deque([src])
    while queue:
        u = queue.popleft()
        for v in adj[u]:
            if level[v] == math.inf:
                level[v] = level[u] + 1
                queue.append(v)
    return level
