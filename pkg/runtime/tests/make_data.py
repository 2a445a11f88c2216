#!/usr/bin/env python3
"""Generate the differential test graphs and update streams.

Uses the graphdyn package's generators (external surface of the primary),
writing plain graph/update files for both the engine CLI and the emitted
binaries.
"""

import sys
from pathlib import Path

from graphdyn.generate import generate_updates, uniform_random_graph
from graphdyn.graph import dump_update_stream


def main():
    out = Path(sys.argv[1])
    out.mkdir(parents=True, exist_ok=True)
    n = 48

    edges = uniform_random_graph(n, 3 * n, seed=11, weighted=True, max_weight=9, connected=True)
    (out / "g_directed.txt").write_text("".join(f"{u} {v} {w}\n" for u, v, w in edges))
    dump_update_stream(generate_updates(edges, n, 10, seed=12), str(out / "u_directed.txt"))

    edges = uniform_random_graph(n, 3 * n, seed=13, connected=True)
    (out / "g_plain.txt").write_text("".join(f"{u} {v}\n" for u, v, _ in edges))
    dump_update_stream(generate_updates(edges, n, 10, seed=14), str(out / "u_plain.txt"))

    edges = uniform_random_graph(n, 3 * n, seed=15, undirected=True)
    (out / "g_undirected.txt").write_text("".join(f"{u} {v}\n" for u, v, _ in edges))
    dump_update_stream(
        generate_updates(edges, n, 10, seed=16, undirected=True), str(out / "u_undirected.txt")
    )
    print(f"wrote differential data under {out}")


if __name__ == "__main__":
    main()
