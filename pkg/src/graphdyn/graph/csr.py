"""CSR and diff-CSR segments: offsets + coordinates (+ optional weights).

A deleted edge is marked by writing SENTINEL into its coordinates slot; the
offsets never move after a segment is built.  SENTINEL is the largest value
an int64 coordinate can hold, so any real node id is strictly below it.
"""

from __future__ import annotations

from typing import Optional, Sequence, Tuple

import numpy as np

SENTINEL = np.iinfo(np.int64).max


class Csr:
    """One immutable-layout adjacency segment (contents mutate, offsets do not)."""

    __slots__ = ("offsets", "coordinates", "weights")

    def __init__(self, offsets: np.ndarray, coordinates: np.ndarray, weights: Optional[np.ndarray]):
        self.offsets = offsets
        self.coordinates = coordinates
        self.weights = weights

    @classmethod
    def from_buckets(
        cls,
        node_count: int,
        buckets: Sequence[Tuple[int, int, int]],
        weighted: bool,
    ) -> "Csr":
        """Build a segment from (src, dst, weight) triples, grouped by source.

        Within one source, insertion order of the triples is preserved.
        """
        offsets = np.zeros(node_count + 1, dtype=np.int64)
        for src, _, _ in buckets:
            offsets[src + 1] += 1
        np.cumsum(offsets, out=offsets)
        coordinates = np.empty(len(buckets), dtype=np.int64)
        weights = np.empty(len(buckets), dtype=np.int64) if weighted else None
        cursor = offsets[:-1].copy()
        for src, dst, w in buckets:
            i = cursor[src]
            coordinates[i] = dst
            if weights is not None:
                weights[i] = w
            cursor[src] += 1
        return cls(offsets, coordinates, weights)

    def slot_range(self, v: int) -> Tuple[int, int]:
        return int(self.offsets[v]), int(self.offsets[v + 1])

    def live_slot_count(self) -> int:
        return int(np.count_nonzero(self.coordinates != SENTINEL))

    def total_slot_count(self) -> int:
        return len(self.coordinates)

    def check_invariants(self, node_count: int) -> None:
        assert len(self.offsets) == node_count + 1
        assert self.offsets[0] == 0
        assert self.offsets[-1] == len(self.coordinates)
        assert np.all(np.diff(self.offsets) >= 0)
        live = self.coordinates[self.coordinates != SENTINEL]
        assert live.size == 0 or (live.min() >= 0 and live.max() < node_count)
        if self.weights is not None:
            assert len(self.weights) == len(self.coordinates)


class DiffCsr(Csr):
    """A delta segment holding edges inserted after the base was laid out.

    Same structural invariants as Csr; its size is dictated by the number of
    inserts that found no vacant slot to reuse.
    """
