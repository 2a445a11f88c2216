from .csr import SENTINEL, Csr, DiffCsr
from .dynamic import DeleteReport, DynamicGraph, EdgeRef
from .io import dump_graph, load_graph, parse_edge_lines
from .updates import (
    ADD,
    DELETE,
    UpdateBatch,
    UpdateRecord,
    UpdateStream,
    dump_update_stream,
    load_update_stream,
    parse_update_line,
)

__all__ = [
    "SENTINEL",
    "Csr",
    "DiffCsr",
    "DynamicGraph",
    "DeleteReport",
    "EdgeRef",
    "UpdateBatch",
    "UpdateRecord",
    "UpdateStream",
    "ADD",
    "DELETE",
    "load_graph",
    "dump_graph",
    "parse_edge_lines",
    "load_update_stream",
    "dump_update_stream",
    "parse_update_line",
]
