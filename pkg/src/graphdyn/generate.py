"""Random graph and update-stream generation for benchmarks and tests."""

from __future__ import annotations

import math
import random
from typing import List, Sequence, Set, Tuple

from .errors import ContractViolation
from .graph.updates import ADD, DELETE, UpdateRecord

Edge = Tuple[int, int, int]


def uniform_random_graph(
    node_count: int,
    edge_count: int,
    *,
    seed: int,
    weighted: bool = False,
    max_weight: int = 10,
    connected: bool = False,
    undirected: bool = False,
) -> List[Edge]:
    """Simple random graph (no duplicate pairs, no self-loops).

    With connected=True a random spanning chain is laid down first, so every
    node ends up in one weak component.
    """
    rng = random.Random(seed)
    pairs: Set[Tuple[int, int]] = set()
    edges: List[Edge] = []

    def norm(u: int, v: int) -> Tuple[int, int]:
        return (min(u, v), max(u, v)) if undirected else (u, v)

    def add(u: int, v: int) -> bool:
        if u == v or norm(u, v) in pairs:
            return False
        pairs.add(norm(u, v))
        w = rng.randint(1, max_weight) if weighted else 1
        edges.append((u, v, w))
        return True

    if connected and node_count > 1:
        order = list(range(node_count))
        rng.shuffle(order)
        for a, b in zip(order, order[1:]):
            add(a, b)
    attempts = 0
    limit = 50 * max(edge_count, 1) + 1000
    while len(edges) < edge_count and attempts < limit:
        attempts += 1
        add(rng.randrange(node_count), rng.randrange(node_count))
    return edges


def rmat_graph(
    node_count_log2: int,
    edge_count: int,
    *,
    seed: int,
    weighted: bool = False,
    max_weight: int = 10,
    a: float = 0.57,
    b: float = 0.19,
    c: float = 0.19,
    undirected: bool = False,
) -> Tuple[List[Edge], int]:
    """Recursive-matrix graph with a skewed degree distribution.

    Returns (edges, node_count); duplicate pairs and self-loops are dropped,
    so the result can fall slightly short of edge_count.
    """
    rng = random.Random(seed)
    n = 1 << node_count_log2
    pairs: Set[Tuple[int, int]] = set()
    edges: List[Edge] = []
    attempts = 0
    limit = 20 * max(edge_count, 1) + 1000
    while len(edges) < edge_count and attempts < limit:
        attempts += 1
        u = v = 0
        for _ in range(node_count_log2):
            r = rng.random()
            if r < a:
                quadrant = (0, 0)
            elif r < a + b:
                quadrant = (0, 1)
            elif r < a + b + c:
                quadrant = (1, 0)
            else:
                quadrant = (1, 1)
            u = (u << 1) | quadrant[0]
            v = (v << 1) | quadrant[1]
        if u == v:
            continue
        key = (min(u, v), max(u, v)) if undirected else (u, v)
        if key in pairs:
            continue
        pairs.add(key)
        w = rng.randint(1, max_weight) if weighted else 1
        edges.append((u, v, w))
    return edges, n


def generate_updates(
    edges: Sequence[Edge],
    node_count: int,
    percent: float,
    *,
    seed: int,
    add_fraction: float = 0.5,
    undirected: bool = False,
) -> List[UpdateRecord]:
    """An update stream sized as a percentage of the edge count.

    Deletes are drawn uniformly (without replacement) from the existing
    edges; adds are drawn uniformly from node pairs that are not edges.  Add
    weights are uniform in [1, max observed weight].  The resulting stream
    is shuffled, and every touched pair is distinct, so the final graph does
    not depend on how the stream is later batched.
    """
    if not (0.0 < percent <= 100.0):
        raise ContractViolation(f"percent must lie in (0, 100], got {percent}")
    if not (0.0 <= add_fraction <= 1.0):
        raise ContractViolation(f"add_fraction must lie in [0, 1], got {add_fraction}")
    rng = random.Random(seed)
    count = math.ceil(percent / 100.0 * len(edges))
    n_adds = int(round(count * add_fraction))
    n_dels = count - n_adds

    def norm(u: int, v: int) -> Tuple[int, int]:
        return (min(u, v), max(u, v)) if undirected else (u, v)

    existing = {norm(u, v) for u, v, _ in edges}
    max_weight = max((w for _, _, w in edges), default=1)

    delete_pool = list(dict.fromkeys(norm(u, v) for u, v, _ in edges))
    n_dels = min(n_dels, len(delete_pool))
    deletes = rng.sample(delete_pool, n_dels)

    chosen: Set[Tuple[int, int]] = set()
    adds: List[Tuple[int, int]] = []
    attempts = 0
    limit = 200 * max(n_adds, 1) + 1000
    while len(adds) < n_adds and attempts < limit:
        attempts += 1
        u, v = rng.randrange(node_count), rng.randrange(node_count)
        if u == v:
            continue
        key = norm(u, v)
        if key in existing or key in chosen:
            continue
        chosen.add(key)
        adds.append((u, v))

    records = [UpdateRecord(DELETE, u, v) for u, v in deletes]
    records += [UpdateRecord(ADD, u, v, rng.randint(1, max_weight)) for u, v in adds]
    rng.shuffle(records)
    return records
