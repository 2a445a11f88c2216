"""Graph-store tests: diff-CSR figure walkthrough plus oracle equivalence."""

import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from graphdyn.errors import ConfigurationError, ContractViolation, MalformedInputError
from graphdyn.graph import (
    ADD,
    DELETE,
    SENTINEL,
    DynamicGraph,
    UpdateBatch,
    UpdateRecord,
)
from graphdyn.oracles import ReplayOracle

# The six-vertex, seven-edge walkthrough graph: A..F = 0..5.
A, B, C, D, E, F = range(6)
FIG_EDGES = [(A, B, 1), (B, C, 1), (B, D, 1), (C, A, 1), (D, E, 1), (D, F, 1), (F, A, 1)]


def fig_graph(**kwargs) -> DynamicGraph:
    return DynamicGraph.build(FIG_EDGES, 6, directed=True, weighted=False, **kwargs)


def targets(g, v):
    return sorted(e.target for e in g.neighbors(v))


class TestBuild:
    def test_offsets_of_third_vertex(self):
        g = fig_graph()
        assert g.base.offsets[C] == 3

    def test_adjacency_of_b(self):
        g = fig_graph()
        assert targets(g, B) == [C, D]

    def test_empty_graph(self):
        g = DynamicGraph.build([], 4)
        assert list(g.base.offsets) == [0, 0, 0, 0, 0]
        assert g.live_edge_count == 0

    def test_out_of_range_node(self):
        with pytest.raises(MalformedInputError):
            DynamicGraph.build([(0, 9, 1)], 3)

    def test_undirected_stores_both_arcs(self):
        g = DynamicGraph.build([(0, 1, 5)], 2, directed=False, weighted=True)
        assert g.live_edge_count == 2
        assert targets(g, 0) == [1] and targets(g, 1) == [0]


class TestDegree:
    def test_fig_degree(self):
        assert fig_graph().degree(B) == 2

    def test_degree_after_delete(self):
        g = fig_graph()
        g.update_csr_del(UpdateBatch([UpdateRecord(DELETE, B, D)]))
        assert g.degree(B) == 1

    def test_isolated_node(self):
        assert fig_graph().degree(E) == 0

    def test_out_of_range(self):
        with pytest.raises(ContractViolation):
            fig_graph().degree(6)


class TestDelete:
    def test_slot_becomes_sentinel(self):
        g = fig_graph()
        g.update_csr_del(UpdateBatch([UpdateRecord(DELETE, B, D)]))
        # B's segment is slots [1, 3); the one that held D must now be the sentinel
        lo, hi = g.base.slot_range(B)
        slots = list(g.base.coordinates[lo:hi])
        assert SENTINEL in slots and D not in slots
        assert g.live_edge_count == 6

    def test_missing_delete_is_reported_noop(self):
        g = fig_graph()
        before = {v: g.neighbor_multiset(v) for v in range(6)}
        report = g.update_csr_del(UpdateBatch([UpdateRecord(DELETE, E, A)]))
        assert report.misses == 1 and report.applied == 0
        assert {v: g.neighbor_multiset(v) for v in range(6)} == before

    def test_parallel_copies_consume_distinct_slots(self):
        g = DynamicGraph.build([(0, 1, 1), (0, 1, 1), (0, 2, 1)], 3)
        report = g.update_csr_del(
            UpdateBatch([UpdateRecord(DELETE, 0, 1), UpdateRecord(DELETE, 0, 1)])
        )
        assert report.applied == 2 and report.misses == 0
        assert targets(g, 0) == [2]

    def test_third_delete_of_pair_misses(self):
        g = DynamicGraph.build([(0, 1, 1), (0, 1, 1)], 2)
        report = g.update_csr_del(UpdateBatch([UpdateRecord(DELETE, 0, 1)] * 3))
        assert report.applied == 2 and report.misses == 1

    def test_rejects_add_records(self):
        with pytest.raises(ContractViolation):
            fig_graph().update_csr_del(UpdateBatch([UpdateRecord(ADD, 0, 1)]))


class TestAdd:
    def test_new_delta_layout_for_edge_without_vacancy(self):
        g = fig_graph()
        g.update_csr_del(UpdateBatch([UpdateRecord(DELETE, B, D)]))
        g.update_csr_add(UpdateBatch([UpdateRecord(ADD, E, C)]))
        # E had no slots anywhere, so the insert materializes a delta:
        # offset[E] = 0, offset[F] = 1, coordinates = [C]
        assert len(g.deltas) == 1
        delta = g.deltas[0]
        assert delta.offsets[E] == 0
        assert delta.offsets[F] == 1
        assert list(delta.coordinates) == [C]

    def test_add_reuses_vacant_slot(self):
        g = fig_graph()
        g.update_csr_del(UpdateBatch([UpdateRecord(DELETE, B, D)]))
        g.update_csr_add(UpdateBatch([UpdateRecord(ADD, E, C)]))
        g.update_csr_add(UpdateBatch([UpdateRecord(ADD, B, E)]))
        # B's sentineled slot is vacant; the insert lands there, not in a new delta
        assert len(g.deltas) == 1
        lo, hi = g.base.slot_range(B)
        assert E in list(g.base.coordinates[lo:hi])
        assert targets(g, B) == [C, E]

    def test_forced_delta_on_fresh_graph(self):
        g = DynamicGraph.build([(0, 1, 1)], 3)
        g.update_csr_add(UpdateBatch([UpdateRecord(ADD, 1, 2)]))
        assert len(g.deltas) == 1
        assert targets(g, 1) == [2]

    def test_out_of_range_endpoint(self):
        with pytest.raises(ContractViolation):
            fig_graph().update_csr_add(UpdateBatch([UpdateRecord(ADD, 0, 99)]))

    def test_rejects_delete_records(self):
        with pytest.raises(ContractViolation):
            fig_graph().update_csr_add(UpdateBatch([UpdateRecord(DELETE, 0, 1)]))


class TestMerge:
    def test_merge_encodes_updated_graph(self):
        g = fig_graph()
        g.update_csr_del(UpdateBatch([UpdateRecord(DELETE, B, D)]))
        g.update_csr_add(UpdateBatch([UpdateRecord(ADD, E, C)]))
        before = {v: g.neighbor_multiset(v) for v in range(6)}
        g.merge_deltas()
        assert not g.deltas
        assert g.base.live_slot_count() == g.base.total_slot_count()  # no sentinels
        assert {v: g.neighbor_multiset(v) for v in range(6)} == before
        assert targets(g, B) == [C] and targets(g, E) == [C]

    def test_merge_is_idempotent_on_clean_graph(self):
        g = fig_graph()
        merged = g.merged()
        assert list(merged.base.offsets) == list(g.base.offsets)
        assert list(merged.base.coordinates) == list(g.base.coordinates)

    def test_merge_matches_oracle_after_many_updates(self):
        rng = random.Random(7)
        n = 100
        edges = [(rng.randrange(n), rng.randrange(n), rng.randrange(1, 10)) for _ in range(300)]
        # parallel copies of a pair always carry the same weight so that
        # "delete one occurrence" is unambiguous
        edges = [(u, v, (u * 31 + v) % 9 + 1) for u, v, _ in edges]
        g = DynamicGraph.build(edges, n, weighted=True)
        oracle = ReplayOracle(edges, n)
        for _ in range(10):
            records = []
            for _ in range(100):
                u, v = rng.randrange(n), rng.randrange(n)
                if rng.random() < 0.5:
                    records.append(UpdateRecord(ADD, u, v, (u * 31 + v) % 9 + 1))
                else:
                    records.append(UpdateRecord(DELETE, u, v))
            batch = UpdateBatch(records)
            g.update_csr_del(batch.only_deletes())
            g.update_csr_add(batch.only_adds())
            oracle.apply(batch.only_deletes())
            oracle.apply(batch.only_adds())
        g.merge_deltas()
        for v in range(n):
            assert g.neighbor_multiset(v) == oracle.neighbor_multiset(v)


class TestNeighbors:
    def test_delete_all_leaves_empty_iterator(self):
        g = fig_graph()
        g.update_csr_del(
            UpdateBatch([UpdateRecord(DELETE, B, C), UpdateRecord(DELETE, B, D)])
        )
        assert list(g.neighbors(B)) == []

    def test_iteration_is_deterministic(self):
        g = fig_graph()
        g.update_csr_del(UpdateBatch([UpdateRecord(DELETE, B, D)]))
        g.update_csr_add(UpdateBatch([UpdateRecord(ADD, E, C), UpdateRecord(ADD, E, A)]))
        assert [e.slot for e in g.neighbors(E)] == [e.slot for e in g.neighbors(E)]

    def test_edge_ref_slot_resolves_to_target(self):
        g = fig_graph()
        for v in range(6):
            for e in g.neighbors(v):
                seg = g.segments()[e.segment]
                assert seg.coordinates[e.index] == e.target


class TestNodesTo:
    def test_requires_reverse_maintenance(self):
        with pytest.raises(ConfigurationError):
            list(fig_graph().nodes_to(C))

    def test_fig_g1_in_edges_of_c(self):
        g = fig_graph(with_reverse=True)
        g.update_csr_del(UpdateBatch([UpdateRecord(DELETE, B, D)]))
        g.update_csr_add(UpdateBatch([UpdateRecord(ADD, E, C)]))
        sources = sorted(e.source for e in g.nodes_to(C))
        assert set(sources) >= {B, E}

    def test_no_in_edges(self):
        g = fig_graph(with_reverse=True)
        g.update_csr_del(UpdateBatch([UpdateRecord(DELETE, B, D)]))
        assert list(g.nodes_to(D)) == []

    def test_undirected_in_set_equals_out_set(self):
        rng = random.Random(3)
        n = 30
        edges = [(rng.randrange(n), rng.randrange(n), 1) for _ in range(60)]
        g = DynamicGraph.build(edges, n, directed=False, with_reverse=True)
        for v in range(n):
            outs = sorted((e.target, e.weight) for e in g.neighbors(v))
            ins = sorted((e.source, e.weight) for e in g.nodes_to(v))
            assert outs == ins

    def test_reverse_tracks_updates(self):
        g = fig_graph(with_reverse=True)
        g.update_csr_del(UpdateBatch([UpdateRecord(DELETE, A, B)]))
        assert list(g.nodes_to(B)) == []
        g.update_csr_add(UpdateBatch([UpdateRecord(ADD, C, B)]))
        assert [e.source for e in g.nodes_to(B)] == [C]


def random_workload(seed: int, n: int, initial_edges: int, num_batches: int, batch_len: int):
    rng = random.Random(seed)
    # weight is a symmetric function of the endpoints, so every physical copy
    # of one logical edge carries the same weight and "delete one occurrence"
    # has a unique multiset outcome
    weight = lambda u, v: (min(u, v) * 31 + max(u, v)) % 9 + 1
    edges = []
    for _ in range(initial_edges):
        u, v = rng.randrange(n), rng.randrange(n)
        edges.append((u, v, weight(u, v)))
    batches = []
    for _ in range(num_batches):
        records = []
        for _ in range(batch_len):
            u, v = rng.randrange(n), rng.randrange(n)
            if rng.random() < 0.45:
                records.append(UpdateRecord(DELETE, u, v))
            else:
                records.append(UpdateRecord(ADD, u, v, weight(u, v)))
        batches.append(UpdateBatch(records))
    return edges, batches


def run_store_against_oracle(seed: int, directed: bool, merge_every: int):
    n = random.Random(seed * 13 + 1).randrange(2, 14)
    edges, batches = random_workload(seed, n, initial_edges=10, num_batches=4, batch_len=6)
    g = DynamicGraph.build(edges, n, directed=directed, weighted=True, with_reverse=True)
    oracle = ReplayOracle(edges, n, directed=directed)
    for i, batch in enumerate(batches):
        g.update_csr_del(batch.only_deletes())
        oracle.apply(batch.only_deletes())
        g.update_csr_add(batch.only_adds())
        oracle.apply(batch.only_adds())
        if merge_every and (i + 1) % merge_every == 0:
            g.merge_deltas()
        # sentinel conservation + cached live count
        assert g.live_slot_count() + sum(
            int(np.count_nonzero(seg.coordinates == SENTINEL)) for seg in g.segments()
        ) == g.total_slot_count()
        assert g.live_edge_count == g.live_slot_count()
        for v in range(n):
            assert g.neighbor_multiset(v) == oracle.neighbor_multiset(v), (seed, i, v)
            assert g.degree(v) == len(list(g.neighbors(v)))
            ins = sorted((e.source, e.weight) for e in g.nodes_to(v))
            oracle_ins = sorted(
                (u, w)
                for u in range(n)
                for (t, w), c in oracle.neighbor_multiset(u).items()
                for _ in range(c)
                if t == v
            )
            assert ins == oracle_ins
    g.check_invariants()


class TestOracleEquivalence:
    def test_thousand_randomized_sequences(self):
        # 1000 independent workloads split across directed/undirected and
        # merge cadences; each replays batches against the hash-map oracle.
        for seed in range(500):
            run_store_against_oracle(seed, directed=True, merge_every=seed % 3)
        for seed in range(500, 1000):
            run_store_against_oracle(seed, directed=False, merge_every=seed % 3)

    @settings(max_examples=60, deadline=None)
    @given(
        seed=st.integers(0, 10_000_000),
        directed=st.booleans(),
        merge_every=st.integers(0, 2),
    )
    def test_hypothesis_workloads(self, seed, directed, merge_every):
        run_store_against_oracle(seed, directed, merge_every)

    def test_worker_count_does_not_change_multisets(self):
        edges, batches = random_workload(99, 40, 80, 3, 30)
        results = []
        for workers in (1, 8):
            g = DynamicGraph.build(edges, 40, weighted=True)
            for batch in batches:
                g.update_csr_del(batch.only_deletes(), workers=workers)
                g.update_csr_add(batch.only_adds(), workers=workers)
            results.append([g.neighbor_multiset(v) for v in range(40)])
        assert results[0] == results[1]
