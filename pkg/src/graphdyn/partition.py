"""In-process simulation of the distributed diff-CSR layout.

Logical ranks own contiguous node blocks; a rank's shard stores exactly the
arcs whose source it owns, as its own CSR + diff-CSR chain.  Four logical
windows (base offsets / base coordinates / diff offsets / diff coordinates)
expose each shard; other ranks read adjacency through them and push
property updates as one-sided accumulates.

The cost model counts records, not simulated latency: one cross-rank
adjacency fetch is two window reads (the offset pair, then the coordinate
segment); one cross-rank property update is one accumulate.  Update records
are ingested at rank 0 and routing one to another rank's shard counts once.
Local operations never touch a remote counter.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field
from typing import Dict, List, Tuple

import numpy as np

from .errors import ConfigurationError, ContractViolation
from .engine.properties import NodePropertyTable, coerce, default_for
from .graph.dynamic import DynamicGraph, EdgeRef
from .graph.updates import ADD, DELETE, UpdateBatch, UpdateRecord

RECORD_BYTES = 8  # one window record (node id / offset) modeled as an int64


@dataclass
class CommStats:
    """Per-rank communication counters (attributed to the calling rank)."""

    rank_count: int
    remote_reads: List[int] = field(default_factory=list)
    remote_accumulates: List[int] = field(default_factory=list)
    routed_updates: List[int] = field(default_factory=list)
    bytes_moved: List[int] = field(default_factory=list)

    def __post_init__(self):
        for name in ("remote_reads", "remote_accumulates", "routed_updates", "bytes_moved"):
            if not getattr(self, name):
                setattr(self, name, [0] * self.rank_count)

    def total(self, name: str) -> int:
        return sum(getattr(self, name))

    def all_zero(self) -> bool:
        return all(
            self.total(n) == 0
            for n in ("remote_reads", "remote_accumulates", "routed_updates", "bytes_moved")
        )

    def as_rows(self) -> List[dict]:
        return [
            {
                "rank": r,
                "remote_reads": self.remote_reads[r],
                "remote_accumulates": self.remote_accumulates[r],
                "routed_updates": self.routed_updates[r],
                "bytes_moved": self.bytes_moved[r],
            }
            for r in range(self.rank_count)
        ]


def block_ranges(node_count: int, rank_count: int) -> List[Tuple[int, int]]:
    """Contiguous ownership blocks; the first (n % r) ranks get one extra."""
    base, rem = divmod(node_count, rank_count)
    ranges = []
    start = 0
    for r in range(rank_count):
        size = base + (1 if r < rem else 0)
        ranges.append((start, start + size))
        start += size
    return ranges


class PartitionedGraph:
    """Per-rank diff-CSR shards with window-style remote access.

    Ownership is a contiguous block per rank by default; `mode="hash"`
    switches to modulo ownership for workloads where block locality hurts.
    """

    def __init__(self, g: DynamicGraph, rank_count: int, mode: str = "block"):
        if rank_count < 1:
            raise ConfigurationError("rank_count must be >= 1")
        if rank_count > g.node_count:
            raise ConfigurationError(
                f"rank_count {rank_count} exceeds node count {g.node_count}"
            )
        if mode not in ("block", "hash"):
            raise ConfigurationError(f"unknown partition mode {mode!r}")
        self.node_count = g.node_count
        self.rank_count = rank_count
        self.mode = mode
        self.directed = g.directed
        self.weighted = g.weighted
        self.merge_interval = g.merge_interval
        self._owner = np.empty(g.node_count, dtype=np.int64)
        if mode == "block":
            self.ranges = block_ranges(g.node_count, rank_count)
            for r, (lo, hi) in enumerate(self.ranges):
                self._owner[lo:hi] = r
        else:
            self.ranges = None
            self._owner[:] = np.arange(g.node_count, dtype=np.int64) % rank_count
        # every shard spans the global id range; non-owned sources are empty.
        # shards hold directed arcs even for undirected graphs, so that each
        # arc lives exactly at its source's owner.
        arcs_by_rank: List[List[Tuple[int, int, int]]] = [[] for _ in range(rank_count)]
        for v in range(g.node_count):
            r = int(self._owner[v])
            for e in g.neighbors(v):
                arcs_by_rank[r].append((v, e.target, e.weight))
        self.shards: List[DynamicGraph] = [
            DynamicGraph.build(
                arcs,
                g.node_count,
                directed=True,
                weighted=g.weighted,
                merge_interval=g.merge_interval,
                with_reverse=True,
            )
            for arcs in arcs_by_rank
        ]
        self.stats = CommStats(rank_count)
        self.properties: Dict[str, NodePropertyTable] = {}
        self._acc_lock = threading.Lock()

    # -- ownership and windows ------------------------------------------------

    def owner(self, v: int) -> int:
        if not (0 <= v < self.node_count):
            raise ContractViolation(f"node id {v} out of range")
        return int(self._owner[v])

    def windows(self, rank: int) -> Dict[str, object]:
        """The four logical window views of one rank's shard."""
        shard = self.shards[rank]
        return {
            "base_offsets": shard.base.offsets,
            "base_coordinates": shard.base.coordinates,
            "diff_offsets": [d.offsets for d in shard.deltas],
            "diff_coordinates": [d.coordinates for d in shard.deltas],
        }

    def _bill_read(self, caller: int, slots: int) -> None:
        self.stats.remote_reads[caller] += 2  # offset pair, then the segment
        self.stats.bytes_moved[caller] += RECORD_BYTES * (2 + slots)

    # -- remote operations ------------------------------------------------------

    def remote_neighbors(self, caller: int, v: int) -> List[EdgeRef]:
        """v's live out-edges, read through the owner's windows."""
        owner = self.owner(v)
        edges = list(self.shards[owner].neighbors(v))
        if caller != owner:
            self._bill_read(caller, len(edges))
        return edges

    def remote_in_edges(self, caller: int, v: int) -> List[EdgeRef]:
        """v's live in-edges; arcs live at their source's owner, so the
        caller reads the windows of every rank contributing at least one."""
        out: List[EdgeRef] = []
        for r, shard in enumerate(self.shards):
            edges = list(shard.nodes_to(v))
            if edges and r != caller:
                self._bill_read(caller, len(edges))
            out.extend(edges)
        return out

    def register_property(self, name: str, table: NodePropertyTable) -> None:
        self.properties[name] = table

    def remote_accumulate(self, caller: int, prop: str, v: int, op: str, value) -> None:
        """Atomically fold `value` into the owner's cell; cross-rank calls count."""
        table = self.properties.get(prop)
        if table is None:
            raise ContractViolation(f"property {prop!r} is not registered as partitioned")
        owner = self.owner(v)
        with self._acc_lock:
            cur = table.get(v)
            if op == "min":
                if value < cur:
                    table.set(v, value)
            elif op == "sum":
                table.set(v, cur + value)
            else:
                raise ContractViolation(f"unknown accumulate op {op!r}")
        if caller != owner:
            self.stats.remote_accumulates[caller] += 1
            self.stats.bytes_moved[caller] += RECORD_BYTES

    def bill_accumulate(self, caller: int, v: int) -> None:
        """Accounting-only hook used by the engine adapter for property writes."""
        if caller != self.owner(v):
            self.stats.remote_accumulates[caller] += 1
            self.stats.bytes_moved[caller] += RECORD_BYTES

    # -- structural updates -------------------------------------------------------

    def apply_batch(self, batch: UpdateBatch, caller: int = 0) -> CommStats:
        """Route each arc to its source's owner and apply it there.

        Deletes in the batch are applied before adds, mirroring the driver
        ordering used by the engine.
        """
        self._apply_arcs(batch.deletes, DELETE, caller)
        self._apply_arcs(batch.adds, ADD, caller)
        return self.stats

    def _apply_arcs(self, records, kind: str, caller: int) -> None:
        per_rank: List[List[UpdateRecord]] = [[] for _ in range(self.rank_count)]
        for rec in records:
            arcs = [(rec.src, rec.dst, rec.weight)]
            if not self.directed:
                arcs.append((rec.dst, rec.src, rec.weight))
            for src, dst, w in arcs:
                r = self.owner(src)
                per_rank[r].append(UpdateRecord(kind, src, dst, w))
                if r != caller:
                    self.stats.routed_updates[caller] += 1
                    self.stats.bytes_moved[caller] += RECORD_BYTES * 3
        for r, recs in enumerate(per_rank):
            if not recs:
                continue
            batch = UpdateBatch(recs)
            if kind == DELETE:
                self.shards[r].update_csr_del(batch)
            else:
                self.shards[r].update_csr_add(batch)

    def merge_all(self) -> None:
        for shard in self.shards:
            shard.merge_deltas()

    # -- whole-graph queries -----------------------------------------------------

    def live_edge_count(self) -> int:
        total = sum(s.live_edge_count for s in self.shards)
        return total

    def edge_multiset(self) -> Dict[Tuple[int, int, int], int]:
        out: Dict[Tuple[int, int, int], int] = {}
        for shard in self.shards:
            for v in range(self.node_count):
                for e in shard.neighbors(v):
                    key = (v, e.target, e.weight)
                    out[key] = out.get(key, 0) + 1
        return out


def partition(g: DynamicGraph, rank_count: int, mode: str = "block") -> PartitionedGraph:
    return PartitionedGraph(g, rank_count, mode)


class PartitionedEdgeTable:
    """Edge-slot attributes for partitioned runs, keyed by (segment, index).

    Slots are tagged with (rank, segment) pairs by the adapter, so one dict
    covers all shards.  Any structural change clears the table; attached
    marks are re-written per batch by the programs that use them.
    """

    def __init__(self, name: str, dtype: str, pg: PartitionedGraph, init=None):
        self.name = name
        self.dtype = dtype
        self.pg = pg
        self.default = default_for(dtype) if init is None else coerce(dtype, init)
        self.store: Dict[Tuple[object, int], object] = {}
        self._seen = self._version()
        self._py = bool if dtype == "bool" else (float if dtype in ("float", "double") else int)

    def _version(self) -> tuple:
        return tuple(s.structure_version for s in self.pg.shards)

    def sync(self) -> None:
        v = self._version()
        if v != self._seen:
            self.store.clear()
            self._seen = v

    def fill(self, value) -> None:
        self.sync()
        self.default = coerce(self.dtype, value)
        self.store.clear()

    def get(self, e: EdgeRef):
        self.sync()
        return self._py(self.store.get((e.segment, e.index), self.default))

    def set(self, e: EdgeRef, value) -> None:
        self.sync()
        self.store[(e.segment, e.index)] = coerce(self.dtype, value)


class PartitionedGraphView:
    """Engine adapter: same interface as LocalGraphView, with accounting."""

    is_partitioned = True

    def __init__(self, pg: PartitionedGraph):
        self.pg = pg
        self.node_count = pg.node_count
        self.graph = None  # no single local graph behind this view

    def owner_of(self, v: int) -> int:
        return self.pg.owner(v)

    def _caller(self, frame) -> int:
        home = frame.get("_home") if frame is not None else None
        return 0 if home is None else home

    def neighbors(self, v: int, frame) -> List[EdgeRef]:
        edges = self.pg.remote_neighbors(self._caller(frame), v)
        owner = self.pg.owner(v)
        return [
            EdgeRef(e.source, e.target, e.weight, (owner, e.segment), e.index)
            for e in edges
        ]

    def nodes_to(self, v: int, frame) -> List[EdgeRef]:
        caller = self._caller(frame)
        out = []
        for e in self.pg.remote_in_edges(caller, v):
            owner = self.pg.owner(e.source)
            out.append(EdgeRef(e.source, e.target, e.weight, (owner, e.segment), e.index))
        return out

    def apply_deletes(self, batch: UpdateBatch, frame) -> None:
        self.pg._apply_arcs(batch.deletes, DELETE, self._caller(frame))

    def apply_adds(self, batch: UpdateBatch, frame) -> None:
        self.pg._apply_arcs(batch.adds, ADD, self._caller(frame))

    def merge_due(self, batch_index: int) -> bool:
        return (batch_index + 1) % self.pg.merge_interval == 0

    def merge(self) -> None:
        self.pg.merge_all()

    def bill_node_write(self, v: int, frame) -> None:
        self.pg.bill_accumulate(self._caller(frame), v)

    def make_edge_table(self, name: str, dtype: str) -> PartitionedEdgeTable:
        return PartitionedEdgeTable(name, dtype, self.pg)

    def propagate_flags(self, table: NodePropertyTable) -> int:
        pg = self.pg
        data = table.data
        frontier = [v for v in range(pg.node_count) if data[v]]
        rounds = 0
        while frontier:
            rounds += 1
            nxt = []
            for v in frontier:
                caller = pg.owner(v)
                for e in pg.remote_neighbors(caller, v):
                    if not data[e.target]:
                        data[e.target] = True
                        pg.bill_accumulate(caller, e.target)
                        nxt.append(e.target)
                for e in pg.remote_in_edges(caller, v):
                    if not data[e.source]:
                        data[e.source] = True
                        pg.bill_accumulate(caller, e.source)
                        nxt.append(e.source)
            frontier = nxt
        return rounds
