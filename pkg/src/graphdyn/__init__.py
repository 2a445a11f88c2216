"""graphdyn: a dynamic-graph DSL compiler and parallel runtime.

The package compiles StarPlat-Dynamic-style programs to a typed AST, runs
them on a shared-memory engine over a diff-CSR graph store (or emits
OpenMP C++ source), and ships a CLI that benchmarks dynamic batch
processing against static recomputation.
"""

__version__ = "0.1.0"

from .graph import DynamicGraph, UpdateBatch, UpdateRecord, UpdateStream

__all__ = ["DynamicGraph", "UpdateBatch", "UpdateRecord", "UpdateStream", "__version__"]
