"""The dynamic graph: a base CSR plus a chain of diff-CSR deltas.

All adjacency queries see the union of the base and every delta, minus the
sentinel-marked slots.  Structural updates are batched: deletes overwrite
slots with the sentinel, inserts reuse vacant slots when possible and spill
into one new delta per batch otherwise.  Merging compacts everything back
into a single clean base.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field
from typing import Dict, Iterator, List, NamedTuple, Optional, Sequence, Tuple

import numpy as np

from ..errors import ConfigurationError, ContractViolation, MalformedInputError
from .csr import SENTINEL, Csr, DiffCsr
from .updates import ADD, DELETE, UpdateBatch, UpdateRecord


class EdgeRef(NamedTuple):
    """A live out-edge plus the physical cell it lives in (segment, index)."""

    source: int
    target: int
    weight: int
    segment: int
    index: int

    @property
    def slot(self) -> Tuple[int, int]:
        return (self.segment, self.index)


@dataclass
class DeleteReport:
    """Outcome of a delete batch: how many records matched, and which did not."""

    applied: int = 0
    misses: int = 0
    missed: List[UpdateRecord] = field(default_factory=list)


class DynamicGraph:
    """CSR + diff-CSR chain with batched structural updates.

    Undirected graphs store every edge as two directed arcs; an update to an
    undirected edge touches both arcs within the same batch.  Reverse
    adjacency (for nodes_to) is maintained in lockstep when enabled at build
    time.
    """

    def __init__(
        self,
        node_count: int,
        base: Csr,
        *,
        directed: bool = True,
        weighted: bool = False,
        merge_interval: int = 1,
        with_reverse: bool = False,
    ):
        if node_count >= SENTINEL:
            raise ContractViolation("node_count collides with the deletion sentinel")
        if merge_interval < 1:
            raise ContractViolation("merge_interval must be >= 1")
        self.node_count = node_count
        self.base = base
        self.deltas: List[DiffCsr] = []
        self.directed = directed
        self.weighted = weighted
        self.merge_interval = merge_interval
        self.live_edge_count = base.live_slot_count()
        self.structure_version = 0
        self.merge_epoch = 0  # bumps on merge: slot identities are invalidated
        # Slots whose contents were overwritten by an insert since the last
        # version bump; edge-property tables reset these cells lazily.
        self.claim_log: List[Tuple[int, int]] = []
        self._with_reverse = with_reverse
        self._reverse: Optional[List[List[Tuple[int, int, int]]]] = None
        if with_reverse:
            self._rebuild_reverse()
        self._mutate_lock = threading.Lock()

    # -- construction -------------------------------------------------------

    @classmethod
    def build(
        cls,
        edge_list: Sequence[Tuple[int, int, int]],
        node_count: int,
        *,
        directed: bool = True,
        weighted: bool = False,
        merge_interval: int = 1,
        with_reverse: bool = False,
    ) -> "DynamicGraph":
        arcs: List[Tuple[int, int, int]] = []
        for i, (src, dst, w) in enumerate(edge_list):
            if not (0 <= src < node_count) or not (0 <= dst < node_count):
                raise MalformedInputError(
                    f"edge {i}: node id out of range (src={src}, dst={dst}, node_count={node_count})"
                )
            if weighted and w < 0:
                raise MalformedInputError(f"edge {i}: negative weight {w}")
            arcs.append((src, dst, w))
            if not directed:
                arcs.append((dst, src, w))
        arcs.sort(key=lambda t: t[0])  # stable: preserves insertion order per source
        base = Csr.from_buckets(node_count, arcs, weighted)
        return cls(
            node_count,
            base,
            directed=directed,
            weighted=weighted,
            merge_interval=merge_interval,
            with_reverse=with_reverse,
        )

    # -- queries ------------------------------------------------------------

    def segments(self) -> List[Csr]:
        return [self.base, *self.deltas]

    def _check_node(self, v: int) -> None:
        if not (0 <= v < self.node_count):
            raise ContractViolation(f"node id {v} out of range [0, {self.node_count})")

    def neighbors(self, v: int) -> Iterator[EdgeRef]:
        """Live out-edges of v: base slots first, then deltas in creation order."""
        self._check_node(v)
        for seg_id, seg in enumerate(self.segments()):
            lo, hi = seg.slot_range(v)
            coords = seg.coordinates
            weights = seg.weights
            for i in range(lo, hi):
                dst = coords[i]
                if dst != SENTINEL:
                    w = int(weights[i]) if weights is not None else 1
                    yield EdgeRef(v, int(dst), w, seg_id, i)

    def degree(self, v: int) -> int:
        self._check_node(v)
        total = 0
        for seg in self.segments():
            lo, hi = seg.slot_range(v)
            total += int(np.count_nonzero(seg.coordinates[lo:hi] != SENTINEL))
        return total

    def nodes_to(self, v: int) -> Iterator[EdgeRef]:
        """Live in-edges of v; requires reverse maintenance to be enabled."""
        self._check_node(v)
        if self._reverse is None:
            raise ConfigurationError("graph was loaded without reverse-adjacency maintenance")
        segs = self.segments()
        for src, seg_id, idx in self._reverse[v]:
            seg = segs[seg_id]
            w = int(seg.weights[idx]) if seg.weights is not None else 1
            yield EdgeRef(src, v, w, seg_id, idx)

    def in_degree(self, v: int) -> int:
        self._check_node(v)
        if self._reverse is None:
            raise ConfigurationError("graph was loaded without reverse-adjacency maintenance")
        return len(self._reverse[v])

    @property
    def has_reverse(self) -> bool:
        return self._reverse is not None

    def total_slot_count(self) -> int:
        return sum(seg.total_slot_count() for seg in self.segments())

    def live_slot_count(self) -> int:
        return sum(seg.live_slot_count() for seg in self.segments())

    def neighbor_multiset(self, v: int) -> Dict[Tuple[int, int], int]:
        """(target, weight) -> multiplicity, for oracle comparisons."""
        out: Dict[Tuple[int, int], int] = {}
        for e in self.neighbors(v):
            key = (e.target, e.weight)
            out[key] = out.get(key, 0) + 1
        return out

    # -- structural updates --------------------------------------------------

    def _expand_arcs(self, records: Sequence[UpdateRecord]) -> List[Tuple[int, int, int]]:
        """Directed arcs touched by the records (two per record if undirected)."""
        arcs = []
        for rec in records:
            arcs.append((rec.src, rec.dst, rec.weight))
            if not self.directed:
                arcs.append((rec.dst, rec.src, rec.weight))
        return arcs

    def _find_live_slot(self, src: int, dst: int, skip: set) -> Optional[Tuple[int, int]]:
        """Oldest (base-first) live slot holding src->dst, excluding `skip`."""
        for seg_id, seg in enumerate(self.segments()):
            lo, hi = seg.slot_range(src)
            coords = seg.coordinates
            for i in range(lo, hi):
                if coords[i] == dst and (seg_id, i) not in skip:
                    return (seg_id, i)
        return None

    def update_csr_del(self, batch: UpdateBatch, workers: int = 1) -> DeleteReport:
        """Sentinel-mark one matching slot per delete record; misses are counted.

        Two deletes of the same pair inside one batch consume distinct slots.
        """
        report = DeleteReport()
        with self._mutate_lock:
            segs = self.segments()
            for rec in batch:
                if rec.kind != DELETE:
                    raise ContractViolation("update_csr_del received a non-delete record")
                self._check_node(rec.src)
                self._check_node(rec.dst)
                slot = self._find_live_slot(rec.src, rec.dst, skip=set())
                if slot is None:
                    report.misses += 1
                    report.missed.append(rec)
                    continue
                claimed = [slot]
                if not self.directed and rec.src != rec.dst:
                    rslot = self._find_live_slot(rec.dst, rec.src, skip=set())
                    if rslot is not None:
                        claimed.append(rslot)
                elif not self.directed and rec.src == rec.dst:
                    second = self._find_live_slot(rec.src, rec.dst, skip={slot})
                    if second is not None:
                        claimed.append(second)
                for seg_id, i in claimed:
                    seg = segs[seg_id]
                    dst = int(seg.coordinates[i])
                    seg.coordinates[i] = SENTINEL
                    self.live_edge_count -= 1
                    if self._reverse is not None:
                        self._reverse[dst].remove((self._slot_source(seg, i), seg_id, i))
                report.applied += 1
            self.structure_version += 1
        return report

    def _slot_source(self, seg: Csr, index: int) -> int:
        return int(np.searchsorted(seg.offsets, index, side="right") - 1)

    def update_csr_add(self, batch: UpdateBatch, workers: int = 1) -> None:
        """Insert records: reuse vacant slots per source, spill the rest into one new delta."""
        with self._mutate_lock:
            leftovers: List[Tuple[int, int, int]] = []
            segs = self.segments()
            for rec in batch:
                if rec.kind != ADD:
                    raise ContractViolation("update_csr_add received a non-add record")
                self._check_node(rec.src)
                self._check_node(rec.dst)
                for src, dst, w in self._expand_arcs([rec]):
                    placed = False
                    for seg_id, seg in enumerate(segs):
                        lo, hi = seg.slot_range(src)
                        coords = seg.coordinates
                        for i in range(lo, hi):
                            if coords[i] == SENTINEL:
                                coords[i] = dst
                                if seg.weights is not None:
                                    seg.weights[i] = w
                                self.claim_log.append((seg_id, i))
                                if self._reverse is not None:
                                    self._reverse[dst].append((src, seg_id, i))
                                placed = True
                                break
                        if placed:
                            break
                    if not placed:
                        leftovers.append((src, dst, w))
                    self.live_edge_count += 1
            if leftovers:
                delta = DiffCsr.from_buckets(self.node_count, leftovers, self.weighted)
                self.deltas.append(delta)
                seg_id = len(self.deltas)  # segments() index of the new delta
                if self._reverse is not None:
                    for i, dst in enumerate(delta.coordinates):
                        self._reverse[int(dst)].append((self._slot_source(delta, i), seg_id, i))
            self.structure_version += 1

    # -- merging -------------------------------------------------------------

    def merged(self) -> "DynamicGraph":
        """A fresh graph with one compacted base: no sentinels, no deltas."""
        arcs: List[Tuple[int, int, int]] = []
        for v in range(self.node_count):
            for e in self.neighbors(v):
                arcs.append((v, e.target, e.weight))
        base = Csr.from_buckets(self.node_count, arcs, self.weighted)
        out = DynamicGraph(
            self.node_count,
            base,
            directed=self.directed,
            weighted=self.weighted,
            merge_interval=self.merge_interval,
            with_reverse=self._with_reverse,
        )
        return out

    def merge_deltas(self) -> None:
        """Compact in place; invalidates slot identities (edge tables rebuild)."""
        compact = self.merged()
        self.base = compact.base
        self.deltas = []
        self.live_edge_count = compact.live_edge_count
        self.claim_log = []
        self.structure_version += 1
        self.merge_epoch += 1
        if self._with_reverse:
            self._rebuild_reverse()

    def _rebuild_reverse(self) -> None:
        rev: List[List[Tuple[int, int, int]]] = [[] for _ in range(self.node_count)]
        for seg_id, seg in enumerate(self.segments()):
            for v in range(self.node_count):
                lo, hi = seg.slot_range(v)
                coords = seg.coordinates
                for i in range(lo, hi):
                    dst = coords[i]
                    if dst != SENTINEL:
                        rev[int(dst)].append((v, seg_id, i))
        self._reverse = rev

    def check_invariants(self) -> None:
        for seg in self.segments():
            seg.check_invariants(self.node_count)
        assert self.live_edge_count == self.live_slot_count()
