"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run with `pytest tests/test_acceptance.py -v -s`.  The qualitative trend
check on a million-edge graph is a soft gate: it reports rather than fails,
and only runs when GRAPHDYN_TREND=1 (it takes many minutes under this
interpreter).  The codegen differential is skipped with a notice when no
C++ toolchain is present.
"""

import math
import os
import pathlib
import time

import pytest

from graphdyn.codegen import compile_emitted, emit_openmp, find_toolchain, run_emitted
from graphdyn.engine import INT_INF, run_program
from graphdyn.frontend import parse_source, typecheck, tokenize
from graphdyn.generate import generate_updates, rmat_graph, uniform_random_graph
from graphdyn.graph import ADD, DELETE, SENTINEL, DynamicGraph, UpdateBatch, UpdateRecord, UpdateStream
from graphdyn.oracles import ReplayOracle, oracle_pr, oracle_sssp, oracle_tc
from graphdyn.partition import PartitionedGraphView, partition

from test_frontend import run_fuzz

REPORT = []


def record(name: str, ok: bool, detail: str = ""):
    line = f"ACCEPTANCE {name}: {'PASS' if ok else 'FAIL'}" + (f" ({detail})" if detail else "")
    print(line)
    REPORT.append(line)
    assert ok, line


@pytest.fixture(scope="session", autouse=True)
def write_report():
    yield
    out = pathlib.Path(__file__).parent.parent / "acceptance_report.txt"
    out.write_text("\n".join(REPORT) + "\n")


# -- 1. worked-example reproduction ------------------------------------------------


def test_worked_example_reproduction(checked_corpus):
    start = time.perf_counter()
    edges = [(0, 1, 30), (0, 2, 20), (0, 3, 48), (3, 4, 4), (2, 5, 25), (4, 5, 6)]
    g = DynamicGraph.build(edges, 6, weighted=True, with_reverse=True)
    check = checked_corpus["sssp_dynamic"]
    before = run_program(check, g.merged(), {"src": 0}, entry="staticSSSP")
    b = before.properties["dist"].values()
    updates = UpdateStream([UpdateRecord(DELETE, 2, 5), UpdateRecord(ADD, 1, 3, 10)])
    ctx = run_program(check, g, {"src": 0, "updateList": updates, "batchsize": 2})
    a = ctx.properties["dist"].values()
    elapsed = time.perf_counter() - start
    ok = (
        b[3] == 48 and b[4] == 52  # v=48, w=52 before the batch
        and a[3] == 40 and a[4] == 44 and a[5] == 50  # v 48->40, w 52->44, y->50
        and elapsed < 1.0
    )
    record("worked-example", ok, f"dist v:{b[3]}->{a[3]} w:{b[4]}->{a[4]} y->{a[5]}, {elapsed:.2f}s")


# -- 2. diff-CSR figure reproduction -------------------------------------------------


def test_diffcsr_figure_reproduction():
    start = time.perf_counter()
    A, B, C, D, E, F = range(6)
    edges = [(A, B, 1), (B, C, 1), (B, D, 1), (C, A, 1), (D, E, 1), (D, F, 1), (F, A, 1)]
    g = DynamicGraph.build(edges, 6)
    checks = []
    checks.append(("offsets[C] == 3", g.base.offsets[C] == 3))
    g.update_csr_del(UpdateBatch([UpdateRecord(DELETE, B, D)]))
    lo, hi = g.base.slot_range(B)
    slots = list(g.base.coordinates[lo:hi])
    checks.append(("B->D slot sentineled", SENTINEL in slots and D not in slots))
    g.update_csr_add(UpdateBatch([UpdateRecord(ADD, E, C)]))
    delta = g.deltas[0] if g.deltas else None
    checks.append(("delta exists", delta is not None))
    if delta is not None:
        checks.append(("delta offset[E] == 0", delta.offsets[E] == 0))
        checks.append(("delta offset[F] == 1", delta.offsets[F] == 1))
        checks.append(("delta coordinates == [C]", list(delta.coordinates) == [C]))
    elapsed = time.perf_counter() - start
    failed = [name for name, ok in checks if not ok]
    record("diffcsr-figure", not failed and elapsed < 1.0, f"{len(checks)} checks, {elapsed:.2f}s")


# -- 3. dynamic == static oracle suite ------------------------------------------------

PERCENTS = (1, 5, 10, 20)


def _batch_sizes(update_count):
    return sorted({1, 100, max(1, update_count)})


def test_dynamic_equals_static_suite(checked_corpus):
    start = time.perf_counter()
    configs = 0
    failures = []

    # SSSP: 20 weighted directed graphs
    check = checked_corpus["sssp_dynamic"]
    for i in range(20):
        n = 40 + i * 8
        m = 3 * n
        edges = uniform_random_graph(n, m, seed=100 + i, weighted=True, max_weight=9)
        for pct in PERCENTS:
            recs = generate_updates(edges, n, pct, seed=200 + i)
            rep = ReplayOracle(edges, n)
            rep.apply(recs)
            want = [
                INT_INF if d == math.inf else int(d)
                for d in oracle_sssp(rep.edge_list(), n, 0)
            ]
            for bs in _batch_sizes(len(recs)):
                g = DynamicGraph.build(edges, n, weighted=True, with_reverse=True)
                ctx = run_program(
                    check, g, {"src": 0, "updateList": UpdateStream(recs), "batchsize": bs},
                )
                configs += 1
                if ctx.properties["dist"].values() != want:
                    failures.append(f"sssp g{i} pct{pct} bs{bs}")

    # TC: 20 undirected simple graphs
    check = checked_corpus["tc_dynamic"]
    for i in range(20):
        n = 36 + i * 6
        m = 3 * n
        edges = uniform_random_graph(n, m, seed=300 + i, undirected=True)
        for pct in PERCENTS:
            recs = generate_updates(edges, n, pct, seed=400 + i, undirected=True)
            rep = ReplayOracle(edges, n, directed=False)
            rep.apply(recs)
            want = oracle_tc(rep.edge_list(), n)
            for bs in _batch_sizes(len(recs)):
                g = DynamicGraph.build(edges, n, directed=False)
                ctx = run_program(
                    check, g, {"updateList": UpdateStream(recs), "batchsize": bs},
                )
                configs += 1
                if ctx.return_value != want:
                    failures.append(f"tc g{i} pct{pct} bs{bs}: {ctx.return_value} != {want}")

    # PR: 20 connected directed graphs, tight convergence for the 1e-6 bound
    check = checked_corpus["pr_dynamic"]
    pr_inputs = {"damping": 0.85, "beta": 1e-11, "maxiter": 400}
    for i in range(20):
        n = 24 + i * 3
        m = int(2.5 * n)
        edges = uniform_random_graph(n, m, seed=500 + i, connected=True)
        for pct in PERCENTS:
            recs = generate_updates(edges, n, pct, seed=600 + i)
            rep = ReplayOracle(edges, n)
            rep.apply(recs)
            want = oracle_pr(rep.edge_list(), n, 0.85, 1e-11, 400)
            for bs in _batch_sizes(len(recs)):
                g = DynamicGraph.build(edges, n, with_reverse=True)
                ctx = run_program(
                    check, g,
                    {**pr_inputs, "updateList": UpdateStream(recs), "batchsize": bs},
                )
                configs += 1
                got = ctx.properties["pagerank"].values()
                worst = max(abs(a - b) for a, b in zip(got, want))
                if worst >= 1e-6:
                    failures.append(f"pr g{i} pct{pct} bs{bs}: |delta| {worst:.2e}")

    elapsed = time.perf_counter() - start
    ok = not failures and elapsed < 600
    record(
        "dynamic-equals-static",
        ok,
        f"{configs} configs, {elapsed:.0f}s" + (f"; failures: {failures[:5]}" if failures else ""),
    )


# -- 4. parser corpus + fuzz -----------------------------------------------------------


def test_parser_corpus_and_fuzz(corpus_sources):
    start = time.perf_counter()
    diag_count = 0
    for name, src in corpus_sources.items():
        tokens, lex_diags = tokenize(src)
        program, parse_diags = parse_source(src)
        result = typecheck(program)
        diag_count += len(lex_diags) + len(parse_diags) + len(result.diagnostics)
    crashes = run_fuzz(corpus_sources, cases=10_000, seed=20260810)
    elapsed = time.perf_counter() - start
    ok = diag_count == 0 and crashes == 0 and elapsed < 300
    record(
        "parser-corpus-fuzz",
        ok,
        f"3 programs clean, 10000 fuzz cases, {crashes} crashes, {elapsed:.0f}s",
    )


# -- 5. schedule independence -----------------------------------------------------------


def test_schedule_independence(checked_corpus):
    start = time.perf_counter()
    failures = []

    def results_sssp(workers, edges, recs, n):
        g = DynamicGraph.build(edges, n, weighted=True, with_reverse=True)
        ctx = run_program(
            checked_corpus["sssp_dynamic"], g,
            {"src": 0, "updateList": UpdateStream(recs), "batchsize": 9},
            worker_count=workers,
        )
        return {
            "dist": ctx.properties["dist"].values(),
            "parent": ctx.properties["parent"].values(),
        }

    def results_pr(workers, edges, recs, n):
        g = DynamicGraph.build(edges, n, with_reverse=True)
        ctx = run_program(
            checked_corpus["pr_dynamic"], g,
            {"updateList": UpdateStream(recs), "batchsize": 9,
             "damping": 0.85, "beta": 0.001, "maxiter": 100},
            worker_count=workers,
        )
        return {"pagerank": ctx.properties["pagerank"].values()}

    def results_tc(workers, edges, recs, n):
        g = DynamicGraph.build(edges, n, directed=False)
        ctx = run_program(
            checked_corpus["tc_dynamic"], g,
            {"updateList": UpdateStream(recs), "batchsize": 9},
            worker_count=workers,
        )
        return {"tcount": [ctx.return_value]}

    n = 64
    cases = [
        ("sssp", results_sssp,
         uniform_random_graph(n, 3 * n, seed=70, weighted=True, max_weight=9), False),
        ("pr", results_pr, uniform_random_graph(n, 3 * n, seed=71, connected=True), False),
        ("tc", results_tc, uniform_random_graph(n, 3 * n, seed=72, undirected=True), True),
    ]
    for name, runner, edges, undirected in cases:
        recs = generate_updates(edges, n, 10, seed=73, undirected=undirected)
        baseline = runner(1, edges, recs, n)
        for workers in (1, 2, 8):
            for rep in range(5):
                got = runner(workers, edges, recs, n)
                for key, want in baseline.items():
                    have = got[key]
                    if key == "pagerank":
                        worst = max(
                            abs(a - b) / max(abs(a), 1e-300) for a, b in zip(have, want)
                        )
                        if worst >= 1e-9:
                            failures.append(f"{name} w{workers} r{rep} {key} rel {worst:.1e}")
                    elif have != want:
                        failures.append(f"{name} w{workers} r{rep} {key}")
    elapsed = time.perf_counter() - start
    ok = not failures and elapsed < 600
    record(
        "schedule-independence",
        ok,
        f"3 algos x workers {{1,2,8}} x 5 reps, {elapsed:.0f}s"
        + (f"; failures {failures[:4]}" if failures else ""),
    )


# -- 6. partition transparency -------------------------------------------------------


def test_partition_transparency(checked_corpus):
    start = time.perf_counter()
    failures = []
    n = 48
    edges = uniform_random_graph(n, 3 * n, seed=80, weighted=True, max_weight=9)
    recs = generate_updates(edges, n, 10, seed=81)
    check = checked_corpus["sssp_dynamic"]

    g0 = DynamicGraph.build(edges, n, weighted=True, with_reverse=True)
    base = run_program(
        check, g0, {"src": 0, "updateList": UpdateStream(recs), "batchsize": 7},
    )
    for ranks in (1, 2, 4, 8):
        g = DynamicGraph.build(edges, n, weighted=True, with_reverse=True)
        pg = partition(g, ranks)
        ctx = run_program(
            check, g, {"src": 0, "updateList": UpdateStream(recs), "batchsize": 7},
            gview=PartitionedGraphView(pg),
        )
        if ctx.properties["dist"].values() != base.properties["dist"].values():
            failures.append(f"dist mismatch at ranks={ranks}")
        if ranks == 1 and not pg.stats.all_zero():
            failures.append("rank 1 produced remote communication")

    # shard union equals the global edge multiset after every batch
    for ranks in (2, 4):
        g = DynamicGraph.build(edges, n, weighted=True)
        pg = partition(DynamicGraph.build(edges, n, weighted=True, with_reverse=True), ranks)
        stream = UpdateStream(recs)
        for batch in stream.batches(7):
            g.update_csr_del(batch.only_deletes())
            g.update_csr_add(batch.only_adds())
            pg.apply_batch(batch)
            want = {}
            for v in range(n):
                for e in g.neighbors(v):
                    key = (v, e.target, e.weight)
                    want[key] = want.get(key, 0) + 1
            if pg.edge_multiset() != want:
                failures.append(f"union mismatch at ranks={ranks}")
                break
            if sum(s.live_edge_count for s in pg.shards) != g.live_edge_count:
                failures.append(f"live count mismatch at ranks={ranks}")
                break
    elapsed = time.perf_counter() - start
    ok = not failures and elapsed < 300
    record(
        "partition-transparency",
        ok,
        f"ranks {{1,2,4,8}}, per-batch union checks, {elapsed:.0f}s"
        + (f"; failures {failures[:4]}" if failures else ""),
    )


# -- 7. qualitative trend (soft gate) ---------------------------------------------------


def test_qualitative_trend_soft_gate(checked_corpus):
    if os.environ.get("GRAPHDYN_TREND") != "1":
        line = (
            "ACCEPTANCE qualitative-trend: SOFT-SKIP "
            "(set GRAPHDYN_TREND=1 to run the >=1M-edge RMAT benchmark; "
            "soft gate is reported, never hard-failed)"
        )
        print(line)
        REPORT.append(line)
        return
    start = time.perf_counter()
    edges, n = rmat_graph(17, 1_050_000, seed=90, weighted=True, max_weight=9)
    assert len(edges) >= 1_000_000
    verdicts = []

    def run_trend(algo, check, inputs):
        times = {}
        static_time = None
        for pct in (1, 5, 10, 20):
            recs = generate_updates(edges, n, pct, seed=91)
            g = DynamicGraph.build(edges, n, weighted=True, with_reverse=True)
            t0 = time.perf_counter()
            ctx = run_program(
                check, g,
                {**inputs, "updateList": UpdateStream(recs), "batchsize": len(recs)},
            )
            wall = time.perf_counter() - t0
            times[pct] = wall - ctx.phase_totals.get("static_phase", 0.0)
            if static_time is None:
                static_time = ctx.phase_totals.get("static_phase", 0.0)
            print(
                f"trend {algo} pct={pct}: dynamic {times[pct]:.1f}s"
                f" static {static_time:.1f}s"
            )
        faster_at_1 = times[1] < static_time
        monotone = all(times[a] <= times[b] * 1.25 for a, b in zip((1, 5, 10), (5, 10, 20)))
        verdicts.append((algo, faster_at_1, monotone, times[1], static_time))

    run_trend("sssp", checked_corpus["sssp_dynamic"], {"src": 0})
    run_trend(
        "pr", checked_corpus["pr_dynamic"],
        {"damping": 0.85, "beta": 0.001, "maxiter": 100},
    )
    observed = all(f and m for _, f, m, _, _ in verdicts)
    detail = "; ".join(
        f"{algo} dyn@1%={d1:.1f}s static={st:.1f}s faster={f} monotone={m}"
        for algo, f, m, d1, st in verdicts
    )
    elapsed = time.perf_counter() - start
    line = (
        f"ACCEPTANCE qualitative-trend: {'OBSERVED' if observed else 'NOT OBSERVED'} "
        f"(soft gate; {detail}; {elapsed:.0f}s total)"
    )
    print(line)
    REPORT.append(line)


# -- 8. codegen differential (secondary) -------------------------------------------------


def test_codegen_differential_secondary(checked_corpus, tmp_path):
    toolchain = find_toolchain()
    if toolchain is None:
        line = "ACCEPTANCE codegen-differential: SKIPPED (no C++ toolchain on PATH)"
        print(line)
        REPORT.append(line)
        return
    start = time.perf_counter()
    golden_dir = pathlib.Path(__file__).parent / "golden"
    failures = []
    n = 48
    for name, check in checked_corpus.items():
        emitted = emit_openmp(check, output_name=f"{name}_omp.cc")
        golden = (golden_dir / f"{name}_omp.cc").read_text()
        strip = lambda t: "\n".join(
            l for l in t.splitlines() if not l.startswith("// generated by graphdyn")
        )
        if strip(emitted) != strip(golden):
            failures.append(f"{name}: golden drift")
            continue
        report = compile_emitted(emitted, str(tmp_path / name), name=name)
        if not report.compiled:
            failures.append(f"{name}: compile failed")
            continue
        undirected = name == "tc_dynamic"
        weighted = name == "sssp_dynamic"
        edges = uniform_random_graph(
            n, 3 * n, seed=95, weighted=weighted, max_weight=9,
            connected=True, undirected=undirected,
        )
        recs = generate_updates(edges, n, 10, seed=96, undirected=undirected)
        gfile = tmp_path / f"{name}_g.txt"
        gfile.write_text(
            "".join((f"{u} {v} {w}\n" if weighted else f"{u} {v}\n") for u, v, w in edges)
        )
        ufile = tmp_path / f"{name}_u.txt"
        from graphdyn.graph import dump_update_stream

        dump_update_stream(recs, str(ufile))
        inputs = {"updateList": UpdateStream(recs), "batchsize": 7}
        flags = {"graph": gfile, "updates": ufile, "batchsize": 7}
        if name == "sssp_dynamic":
            inputs["src"] = 0
            flags["src"] = 0
        if name == "pr_dynamic":
            inputs.update({"damping": 0.85, "beta": 1e-10, "maxiter": 300})
            flags.update({"damping": 0.85, "beta": 1e-10, "maxiter": 300})
        if undirected:
            flags["undirected"] = True
        g = DynamicGraph.build(
            edges, n, directed=not undirected, weighted=weighted, with_reverse=True
        )
        ctx = run_program(check, g, inputs)
        result = run_emitted(report.binary, str(tmp_path / f"{name}_out"), flags)
        if name == "sssp_dynamic":
            if [int(x) for x in result["props"]["dist"]] != ctx.properties["dist"].values():
                failures.append("sssp: dist mismatch")
        elif name == "pr_dynamic":
            worst = max(
                abs(a - b)
                for a, b in zip(result["props"]["pagerank"], ctx.properties["pagerank"].values())
            )
            if worst >= 1e-6:
                failures.append(f"pr: |delta| {worst:.1e}")
        else:
            if int(result["scalars"]["return"]) != ctx.return_value:
                failures.append("tc: count mismatch")
    elapsed = time.perf_counter() - start
    ok = not failures
    record(
        "codegen-differential",
        ok,
        f"3 programs compiled+verified with {pathlib.Path(toolchain).name}, {elapsed:.0f}s"
        + (f"; failures {failures}" if failures else ""),
    )
