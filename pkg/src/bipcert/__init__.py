"""Certificates for bipartiteness of graphs without a long odd cycle and a forbidden bipartite family."""
from .errors import GraphParseError, InputError, PreconditionError, StageFailure
from .graph import Graph, bfs_layers, diameter, min_degree_subgraph, power_graph, read_graph, write_graph

__version__ = "0.1.0"

__all__ = [
    "Graph", "GraphParseError", "InputError", "PreconditionError", "StageFailure", "__version__",
    "bfs_layers", "diameter", "min_degree_subgraph", "power_graph", "read_graph", "write_graph",
]
