"""graphdyn command-line interface.

Subcommands: run, gen-updates, bench, emit, sim, oracle.
Exit codes: 0 ok, 1 usage, 2 compile diagnostics, 3 runtime error,
4 equivalence failure.
"""

from __future__ import annotations

import argparse
import csv
import sys
import time
from pathlib import Path
from typing import Dict, List, Optional

from . import __version__
from .errors import CompileError, GraphDynError
from .frontend import compile_source
from .engine import run_program, needs_reverse
from .engine.properties import NodePropertyTable
from .generate import generate_updates
from .graph import (
    DynamicGraph,
    UpdateStream,
    dump_update_stream,
    load_graph,
    load_update_stream,
)
from .manifest import build_manifest, write_manifest
from .oracles import oracle_pr, oracle_sssp, oracle_tc

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_COMPILE = 2
EXIT_RUNTIME = 3
EXIT_EQUIVALENCE = 4


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # usage problems exit 1, not argparse's 2
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


class UsageError(Exception):
    pass


def _add_common_run_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--updates", help="update stream file")
    p.add_argument("--batch", type=int, default=0, help="batch size (0 = whole stream)")
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--src", type=int, default=None, help="source node for SSSP-style programs")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--merge-interval", type=int, default=1)
    p.add_argument("--undirected", action="store_true")
    p.add_argument("--nodes", type=int, default=None, help="override node count")
    p.add_argument("--damping", type=float, default=0.85)
    p.add_argument("--beta", type=float, default=0.001)
    p.add_argument("--maxiter", type=int, default=100)
    p.add_argument("--iteration-cap-factor", type=int, default=10)
    p.add_argument("--param", action="append", default=[], metavar="NAME=VALUE")
    p.add_argument("--strip", action="store_true", help="strip dead code before running")
    p.add_argument("--out", default="graphdyn_out")


def make_parser() -> _Parser:
    parser = _Parser(prog="graphdyn", description="dynamic-graph DSL compiler and runtime")
    parser.add_argument("--version", action="version", version=f"graphdyn {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="compile and execute a program")
    run.add_argument("program")
    run.add_argument("graph")
    run.add_argument("--mode", choices=("dynamic", "static"), default="dynamic")
    run.add_argument("--entry", help="entry function (defaults per mode)")
    _add_common_run_flags(run)

    gen = sub.add_parser("gen-updates", help="generate a random update stream")
    gen.add_argument("graph")
    gen.add_argument("--percent", type=float, required=True)
    gen.add_argument("--add-fraction", type=float, default=0.5)
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--undirected", action="store_true")
    gen.add_argument("--out", required=True, help="output update file")

    bench = sub.add_parser("bench", help="static vs dynamic comparison at update percentages")
    bench.add_argument("program")
    bench.add_argument("graph")
    bench.add_argument("--percents", required=True, help="comma list, e.g. 1,5,10,20")
    bench.add_argument("--add-fraction", type=float, default=0.5)
    bench.add_argument("--ranks", type=int, default=1)
    bench.add_argument("--partitioner", choices=("block", "hash"), default="block")
    _add_common_run_flags(bench)

    emit = sub.add_parser("emit", help="emit backend source code")
    emit.add_argument("program")
    emit.add_argument("--backend", choices=("omp",), default="omp")
    emit.add_argument("--schedule", choices=("dynamic", "static"), default="dynamic")
    emit.add_argument("--out", default="graphdyn_out")

    sim = sub.add_parser("sim", help="run over the distributed diff-CSR simulator")
    sim.add_argument("program")
    sim.add_argument("graph")
    sim.add_argument("--ranks", type=int, required=True)
    sim.add_argument("--partitioner", choices=("block", "hash"), default="block")
    sim.add_argument("--entry")
    _add_common_run_flags(sim)

    oracle = sub.add_parser("oracle", help="run a reference oracle")
    oracle.add_argument("algo", choices=("sssp", "pr", "tc"))
    oracle.add_argument("graph")
    oracle.add_argument("--updates")
    oracle.add_argument("--src", type=int, default=0)
    oracle.add_argument("--damping", type=float, default=0.85)
    oracle.add_argument("--beta", type=float, default=0.001)
    oracle.add_argument("--maxiter", type=int, default=100)
    oracle.add_argument("--undirected", action="store_true")
    oracle.add_argument("--out", default="graphdyn_out")

    return parser


# -- result dumping --------------------------------------------------------------


def _dump_results(ctx, outdir: str) -> List[str]:
    out = Path(outdir)
    out.mkdir(parents=True, exist_ok=True)
    written = []
    for name, table in ctx.properties.items():
        if not isinstance(table, NodePropertyTable):
            continue
        path = out / f"{name}.csv"
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["node", "value"])
            if table.dtype == "bool":
                for v, x in enumerate(table.values()):
                    w.writerow([v, int(x)])
            elif table.dtype in ("float", "double"):
                for v, x in enumerate(table.values()):
                    w.writerow([v, f"{x:.17g}"])
            else:
                for v, x in enumerate(table.values()):
                    w.writerow([v, x])
        written.append(str(path))
    scalars = {
        k: v for k, v in ctx.scalars.items() if isinstance(v, (bool, int, float))
    }
    if ctx.return_value is not None and isinstance(ctx.return_value, (bool, int, float)):
        scalars["return"] = ctx.return_value
    path = out / "scalars.csv"
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["name", "value"])
        for k in sorted(scalars):
            w.writerow([k, scalars[k]])
    written.append(str(path))
    return written


# -- input binding ----------------------------------------------------------------


def _extra_params(pairs: List[str]) -> Dict[str, str]:
    out = {}
    for pair in pairs:
        if "=" not in pair:
            raise UsageError(f"--param expects NAME=VALUE, got {pair!r}")
        name, value = pair.split("=", 1)
        out[name] = value
    return out


def _bind_inputs(entry_fn, args, updates: Optional[UpdateStream]) -> Dict[str, object]:
    extras = _extra_params(args.param)
    inputs: Dict[str, object] = {}
    for p, ptype in zip(entry_fn.params, entry_fn._param_types):
        t = ptype.name
        if t in ("Graph", "propNode", "propEdge"):
            continue
        if t == "updates":
            if updates is None:
                raise UsageError(f"program needs --updates for parameter {p.name!r}")
            inputs[p.name] = updates
            continue
        if p.name in ("batchsize", "batch_size"):
            size = args.batch if args.batch and args.batch > 0 else (
                len(updates) if updates is not None else 0
            )
            if size <= 0:
                raise UsageError("--batch must be positive (or provide --updates)")
            inputs[p.name] = size
        elif p.name == "src":
            if args.src is None:
                raise UsageError("program needs --src")
            inputs[p.name] = args.src
        elif p.name == "damping":
            inputs[p.name] = args.damping
        elif p.name == "beta":
            inputs[p.name] = args.beta
        elif p.name == "maxiter":
            inputs[p.name] = args.maxiter
        elif p.name in extras:
            raw = extras[p.name]
            inputs[p.name] = float(raw) if t in ("float", "double") else int(raw)
        else:
            raise UsageError(f"no value for program parameter {p.name!r} (use --param)")
    return inputs


def _load_for(check, args, path: str) -> DynamicGraph:
    return load_graph(
        path,
        directed=not args.undirected,
        node_count=args.nodes,
        merge_interval=getattr(args, "merge_interval", 1),
        with_reverse=needs_reverse(check.program),
    )


def _apply_all(graph: DynamicGraph, updates: UpdateStream) -> None:
    batch = updates.as_batch()
    graph.update_csr_del(batch.only_deletes())
    graph.update_csr_add(batch.only_adds())
    graph.merge_deltas()


def _static_entry(check) -> str:
    static = check.program.by_role("Static")
    if not static:
        raise UsageError("program has no Static function for --mode static")
    return static[0].name


# -- subcommands -------------------------------------------------------------------


def cmd_run(args) -> int:
    check = compile_source(Path(args.program).read_text(), strip=args.strip)
    updates = load_update_stream(args.updates) if args.updates else None
    graph = _load_for(check, args, args.graph)
    if args.mode == "static":
        entry = args.entry or _static_entry(check)
        if updates is not None:
            _apply_all(graph, updates)
        entry_fn = check.program.function(entry)
        if entry_fn is None:
            raise UsageError(f"no function named {entry!r}")
        inputs = _bind_inputs(entry_fn, args, None)
    else:
        entry = args.entry or check.program.entry
        if entry is None:
            raise UsageError("program has no Dynamic driver; use --mode static or --entry")
        entry_fn = check.program.function(entry)
        if entry_fn is None:
            raise UsageError(f"no function named {entry!r}")
        inputs = _bind_inputs(entry_fn, args, updates)
    start = time.perf_counter()
    ctx = run_program(
        check,
        graph,
        inputs,
        entry=entry,
        worker_count=args.threads,
        iteration_cap_factor=args.iteration_cap_factor,
    )
    wall = time.perf_counter() - start
    files = _dump_results(ctx, args.out)
    manifest = build_manifest(
        command="run",
        args=vars(args),
        seed=args.seed,
        input_files={"program": args.program, "graph": args.graph, "updates": args.updates},
        ctx=ctx,
        extra={"wall_seconds": wall, "mode": args.mode, "entry": entry, "results": files},
    )
    write_manifest(manifest, args.out)
    return EXIT_OK


def cmd_gen_updates(args) -> int:
    graph_edges, weighted, max_id = _read_edges(args.graph)
    node_count = max_id + 1
    records = generate_updates(
        graph_edges,
        node_count,
        args.percent,
        seed=args.seed,
        add_fraction=args.add_fraction,
        undirected=args.undirected,
    )
    dump_update_stream(records, args.out)
    print(f"wrote {len(records)} updates to {args.out}")
    return EXIT_OK


def _read_edges(path: str):
    from .graph.io import parse_edge_lines

    with open(path, "r", encoding="utf-8") as fh:
        return parse_edge_lines(fh.read(), path=path)


def _values_of(ctx) -> Dict[str, object]:
    out = {}
    for name, table in ctx.properties.items():
        if isinstance(table, NodePropertyTable):
            out[name] = (table.dtype, table.values())
    for name, value in ctx.scalars.items():
        if isinstance(value, (bool, int, float)):
            out[f"scalar:{name}"] = ("scalar", value)
    if isinstance(ctx.return_value, (bool, int, float)):
        out["scalar:return"] = ("scalar", ctx.return_value)
    return out


_INT_INF = 2**63 - 1


def _parent_tree_valid(dist, parent, graph: DynamicGraph, src: Optional[int]):
    """Shortest-path tree check: each parent edge must close the distance.

    Distances must already be verified equal; two valid trees over one
    distance array are interchangeable for path reconstruction.
    """
    weights = {}
    for v in range(graph.node_count):
        for e in graph.neighbors(v):
            weights.setdefault((v, e.target), set()).add(e.weight)
    for v in range(graph.node_count):
        if (src is not None and v == src) or dist[v] >= _INT_INF:
            if parent[v] != -1:
                return False, f"node {v}: expected no parent"
            continue
        p = parent[v]
        if p == -1:
            if src is None:
                continue
            return False, f"node {v}: missing parent"
        ws = weights.get((p, v), set())
        if not any(dist[p] + w == dist[v] for w in ws):
            return False, f"node {v}: parent {p} does not close the distance"
    return True, ""


def _equivalent(
    dynamic: Dict,
    static: Dict,
    *,
    float_tol: float = 1e-6,
    final_graph: Optional[DynamicGraph] = None,
    src: Optional[int] = None,
):
    """Compare shared result values; returns (ok, detail).

    A parent table accompanying exact-equal distances is validated by path
    reconstruction rather than entry-wise equality: equal-cost predecessors
    make the tree itself schedule- and algorithm-dependent.
    """
    problems = []
    parent_checked = (
        "dist" in dynamic and "parent" in dynamic and final_graph is not None
    )
    for key in sorted(set(dynamic) & set(static)):
        kind_d, val_d = dynamic[key]
        kind_s, val_s = static[key]
        if kind_d == "scalar":
            if isinstance(val_d, float) or isinstance(val_s, float):
                if abs(val_d - val_s) > float_tol:
                    problems.append(f"{key}: {val_d} vs {val_s}")
            elif val_d != val_s:
                problems.append(f"{key}: {val_d} vs {val_s}")
            continue
        if key == "parent" and parent_checked:
            dist_d = dynamic["dist"][1]
            ok, why = _parent_tree_valid(dist_d, val_d, final_graph, src)
            if not ok:
                problems.append(f"parent: {why}")
            continue
        if kind_d in ("float", "double"):
            worst = max((abs(a - b) for a, b in zip(val_d, val_s)), default=0.0)
            if worst > float_tol:
                problems.append(f"{key}: max |delta| {worst:.3g}")
        elif kind_d in ("int", "long", "node"):
            if val_d != val_s:
                bad = sum(1 for a, b in zip(val_d, val_s) if a != b)
                problems.append(f"{key}: {bad} differing entries")
        # bool properties are scratch flags, not compared
    return (not problems, "; ".join(problems))


def cmd_bench(args) -> int:
    check = compile_source(Path(args.program).read_text(), strip=args.strip)
    try:
        percents = [float(p) for p in args.percents.split(",") if p.strip()]
    except ValueError:
        raise UsageError(f"bad --percents value {args.percents!r}")
    if not percents:
        raise UsageError("--percents must name at least one percentage")
    edges, weighted, max_id = _read_edges(args.graph)
    node_count = args.nodes or (max_id + 1)
    outdir = Path(args.out)
    outdir.mkdir(parents=True, exist_ok=True)
    rows = []
    for percent in percents:
        records = generate_updates(
            edges,
            node_count,
            percent,
            seed=args.seed,
            add_fraction=args.add_fraction,
            undirected=args.undirected,
        )
        updates = UpdateStream(records)
        stream_path = outdir / f"updates_p{percent:g}.txt"
        dump_update_stream(records, str(stream_path))

        # dynamic: batch processing over the update stream
        g_dyn = _load_for(check, args, args.graph)
        entry = check.program.entry
        if entry is None:
            raise UsageError("bench needs a program with a Dynamic driver")
        entry_fn = check.program.function(entry)
        inputs = _bind_inputs(entry_fn, args, updates)
        pg = None
        gview = None
        if args.ranks > 1:
            from .partition import PartitionedGraphView, partition

            pg = partition(g_dyn, args.ranks, args.partitioner)
            gview = PartitionedGraphView(pg)
        t0 = time.perf_counter()
        ctx_dyn = run_program(
            check, g_dyn, inputs, worker_count=args.threads,
            iteration_cap_factor=args.iteration_cap_factor, gview=gview,
        )
        dyn_wall = time.perf_counter() - t0
        dyn_batch = dyn_wall - ctx_dyn.phase_totals.get("static_phase", 0.0)

        # static: all updates applied up front, then recompute from scratch
        g_stat = _load_for(check, args, args.graph)
        _apply_all(g_stat, updates)
        static_entry = _static_entry(check)
        static_fn = check.program.function(static_entry)
        static_inputs = _bind_inputs(static_fn, args, None)
        t0 = time.perf_counter()
        ctx_stat = run_program(
            check, g_stat, static_inputs, entry=static_entry,
            worker_count=args.threads, iteration_cap_factor=args.iteration_cap_factor,
        )
        stat_wall = time.perf_counter() - t0

        ok, detail = _equivalent(
            _values_of(ctx_dyn), _values_of(ctx_stat), final_graph=g_stat, src=args.src
        )
        row = {
            "percent": percent,
            "updates": len(records),
            "static_seconds": round(stat_wall, 6),
            "dynamic_seconds": round(dyn_batch, 6),
            "dynamic_total_seconds": round(dyn_wall, 6),
            "speedup": round(stat_wall / dyn_batch, 3) if dyn_batch > 0 else float("inf"),
            "equivalent": ok,
        }
        if pg is not None:
            row["remote_reads"] = pg.stats.total("remote_reads")
            row["remote_accumulates"] = pg.stats.total("remote_accumulates")
            row["routed_updates"] = pg.stats.total("routed_updates")
        rows.append(row)
        if not ok:
            _write_bench(rows, outdir)
            print(f"equivalence failure at {percent}%: {detail}", file=sys.stderr)
            return EXIT_EQUIVALENCE
        print(
            f"percent={percent:g} updates={len(records)} static={stat_wall:.3f}s "
            f"dynamic={dyn_batch:.3f}s speedup={row['speedup']}"
        )
    _write_bench(rows, outdir)
    manifest = build_manifest(
        command="bench",
        args=vars(args),
        seed=args.seed,
        input_files={"program": args.program, "graph": args.graph},
        extra={"rows": rows},
    )
    write_manifest(manifest, str(outdir))
    return EXIT_OK


def _write_bench(rows, outdir: Path) -> None:
    if not rows:
        return
    path = outdir / "bench.csv"
    fields = list(rows[0].keys())
    with open(path, "w", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=fields)
        w.writeheader()
        for row in rows:
            w.writerow(row)


def cmd_emit(args) -> int:
    from .codegen import SUPPORT_HEADER, emit_openmp, support_header_text

    check = compile_source(Path(args.program).read_text())
    name = Path(args.program).stem
    text = emit_openmp(check, schedule=args.schedule, output_name=f"{name}_omp.cc")
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    src_path = out / f"{name}_omp.cc"
    src_path.write_text(text)
    (out / SUPPORT_HEADER).write_text(support_header_text())
    print(f"wrote {src_path} and {out / SUPPORT_HEADER}")
    return EXIT_OK


def cmd_sim(args) -> int:
    from .partition import PartitionedGraphView, partition

    check = compile_source(Path(args.program).read_text(), strip=args.strip)
    updates = load_update_stream(args.updates) if args.updates else None
    graph = _load_for(check, args, args.graph)
    pg = partition(graph, args.ranks, args.partitioner)
    view = PartitionedGraphView(pg)
    entry = args.entry or check.program.entry or _static_entry(check)
    entry_fn = check.program.function(entry)
    if entry_fn is None:
        raise UsageError(f"no function named {entry!r}")
    inputs = _bind_inputs(entry_fn, args, updates)
    start = time.perf_counter()
    ctx = run_program(
        check, graph, inputs, entry=entry, worker_count=args.threads,
        iteration_cap_factor=args.iteration_cap_factor, gview=view,
    )
    wall = time.perf_counter() - start
    files = _dump_results(ctx, args.out)
    stats_path = Path(args.out) / "commstats.csv"
    with open(stats_path, "w", newline="") as fh:
        w = csv.DictWriter(
            fh,
            fieldnames=["rank", "remote_reads", "remote_accumulates", "routed_updates", "bytes_moved"],
        )
        w.writeheader()
        for row in pg.stats.as_rows():
            w.writerow(row)
    manifest = build_manifest(
        command="sim",
        args=vars(args),
        seed=args.seed,
        input_files={"program": args.program, "graph": args.graph, "updates": args.updates},
        ctx=ctx,
        extra={
            "wall_seconds": wall,
            "ranks": args.ranks,
            "results": files + [str(stats_path)],
            "comm_totals": {
                k: pg.stats.total(k)
                for k in ("remote_reads", "remote_accumulates", "routed_updates", "bytes_moved")
            },
        },
    )
    write_manifest(manifest, args.out)
    print(f"per-rank communication stats in {stats_path}")
    return EXIT_OK


def cmd_oracle(args) -> int:
    edges, weighted, max_id = _read_edges(args.graph)
    node_count = max_id + 1
    if args.updates:
        from .oracles import ReplayOracle

        stream = load_update_stream(args.updates)
        replay = ReplayOracle(edges, node_count, directed=not args.undirected)
        replay.apply(stream.records)
        edges = replay.edge_list()
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    if args.algo == "sssp":
        dist = oracle_sssp(edges, node_count, args.src, directed=not args.undirected)
        _write_oracle_csv(out / "dist.csv", dist, as_int=True)
        print(f"wrote {out / 'dist.csv'}")
    elif args.algo == "pr":
        ranks = oracle_pr(edges, node_count, args.damping, args.beta, args.maxiter)
        _write_oracle_csv(out / "pagerank.csv", ranks, as_int=False)
        print(f"wrote {out / 'pagerank.csv'}")
    else:
        count = oracle_tc(edges, node_count)
        (out / "scalars.csv").write_text(f"name,value\ntcount,{count}\n")
        print(f"triangles: {count}")
    return EXIT_OK


def _write_oracle_csv(path, values, as_int: bool) -> None:
    INT_INF = 2**63 - 1
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["node", "value"])
        for v, x in enumerate(values):
            if as_int:
                w.writerow([v, INT_INF if x == float("inf") else int(x)])
            else:
                w.writerow([v, f"{x:.17g}"])


def main(argv: Optional[List[str]] = None) -> int:
    parser = make_parser()
    args = parser.parse_args(argv)
    handlers = {
        "run": cmd_run,
        "gen-updates": cmd_gen_updates,
        "bench": cmd_bench,
        "emit": cmd_emit,
        "sim": cmd_sim,
        "oracle": cmd_oracle,
    }
    try:
        return handlers[args.command](args)
    except UsageError as exc:
        print(f"graphdyn: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except CompileError as exc:
        print(f"graphdyn: compile diagnostics:\n{exc}", file=sys.stderr)
        return EXIT_COMPILE
    except GraphDynError as exc:
        print(f"graphdyn: error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
