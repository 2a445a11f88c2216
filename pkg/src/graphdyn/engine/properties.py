"""Dense per-node and per-edge attribute tables.

Node tables are flat numpy arrays indexed by node id.  Edge tables are
per-segment arrays parallel to the graph's physical slots; they follow the
graph lazily: new delta segments extend the table, an insert that claims a
vacant slot resets that cell, and a merge rebuilds everything to defaults
(slot identities do not survive compaction).
"""

from __future__ import annotations

import math
import threading
from typing import List

import numpy as np

from ..graph.dynamic import DynamicGraph, EdgeRef

INT_INF = np.iinfo(np.int64).max  # saturating "infinity" for integer properties

_DTYPES = {
    "int": np.int64,
    "long": np.int64,
    "float": np.float64,
    "double": np.float64,
    "bool": np.bool_,
}


def default_for(dtype: str):
    return False if dtype == "bool" else (0.0 if dtype in ("float", "double") else 0)


def coerce(dtype: str, value):
    """Scalar conversion into the table's python-level representation."""
    if dtype == "bool":
        return bool(value)
    if dtype in ("float", "double"):
        return float(value)
    if value == math.inf:
        return INT_INF
    return int(value)


class NodePropertyTable:
    def __init__(self, name: str, dtype: str, node_count: int, init=None):
        self.name = name
        self.dtype = dtype
        self.default = default_for(dtype) if init is None else coerce(dtype, init)
        self.data = np.full(node_count, self.default, dtype=_DTYPES[dtype])
        self.lock = threading.Lock()
        self._py = bool if dtype == "bool" else (float if dtype in ("float", "double") else int)

    def fill(self, value) -> None:
        v = coerce(self.dtype, value)
        self.default = v  # a re-attach resets what "cleared" means
        self.data[:] = v

    def get(self, v: int):
        return self._py(self.data[v])

    def set(self, v: int, value) -> None:
        self.data[v] = coerce(self.dtype, value)

    def values(self) -> list:
        return [self._py(x) for x in self.data]

    def copy_from(self, other: "NodePropertyTable") -> None:
        self.data[:] = other.data

    def swap_from(self, nxt: "NodePropertyTable") -> None:
        """Double-buffer boundary: current <- next, next <- its default."""
        self.data[:] = nxt.data
        nxt.data[:] = nxt.default


class EdgePropertyTable:
    """Per-slot values, kept in sync with the graph's physical layout."""

    def __init__(self, name: str, dtype: str, graph: DynamicGraph, init=None):
        self.name = name
        self.dtype = dtype
        self.graph = graph
        self.default = default_for(dtype) if init is None else coerce(dtype, init)
        self.lock = threading.Lock()
        self._py = bool if dtype == "bool" else (float if dtype in ("float", "double") else int)
        self._rebuild()

    def _rebuild(self) -> None:
        self.segments: List[np.ndarray] = [
            np.full(seg.total_slot_count(), self.default, dtype=_DTYPES[self.dtype])
            for seg in self.graph.segments()
        ]
        self._seen_version = self.graph.structure_version
        self._seen_epoch = self.graph.merge_epoch
        self._seen_claims = len(self.graph.claim_log)

    def sync(self) -> None:
        g = self.graph
        if g.structure_version == self._seen_version:
            return
        if g.merge_epoch != self._seen_epoch:
            self._rebuild()
            return
        # claimed slots hold a different edge now: their old values are void
        for seg_id, idx in g.claim_log[self._seen_claims :]:
            self.segments[seg_id][idx] = self.default
        self._seen_claims = len(g.claim_log)
        # inserts may have appended delta segments
        segs = g.segments()
        while len(self.segments) < len(segs):
            seg = segs[len(self.segments)]
            self.segments.append(
                np.full(seg.total_slot_count(), self.default, dtype=_DTYPES[self.dtype])
            )
        self._seen_version = g.structure_version

    def fill(self, value) -> None:
        self.sync()
        v = coerce(self.dtype, value)
        self.default = v
        for arr in self.segments:
            arr[:] = v

    def swap_from(self, nxt: "EdgePropertyTable") -> None:
        self.sync()
        nxt.sync()
        for mine, theirs in zip(self.segments, nxt.segments):
            mine[:] = theirs
            theirs[:] = nxt.default

    def get(self, e: EdgeRef):
        self.sync()
        if e.segment < 0:
            raise ValueError(
                f"edge property {self.name!r} is not defined for update records"
            )
        return self._py(self.segments[e.segment][e.index])

    def set(self, e: EdgeRef, value) -> None:
        self.sync()
        if e.segment < 0:
            raise ValueError(
                f"edge property {self.name!r} is not defined for update records"
            )
        self.segments[e.segment][e.index] = coerce(self.dtype, value)


import itertools

_cell_serial = itertools.count()


class ScalarCell:
    """Boxed mutable scalar; shared across frames via reference.

    Each cell carries a process-unique serial so debug tooling can tell
    distinct cells apart even after their memory is recycled.
    """

    __slots__ = ("value", "uid")

    def __init__(self, value):
        self.value = value
        self.uid = next(_cell_serial)
