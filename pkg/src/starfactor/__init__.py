"""Large star factors in graphs of minimum degree d."""

from .constructions import lower_bound_graph, random_min_degree_graph, random_regular_graph
from .cover import CoverConfig, cover_excluding
from .errors import ContractError, InputError, InvariantError, SolverFailure, StarFactorError
from .graph import BipartiteView, Graph, edge_minimalize
from .oracle import exists_factor, max_factor_size
from .packing import Star, StarPacking, verify
from .solver import SolveReport, SolverConfig, solve, solve_regular

__version__ = "0.1.0"

__all__ = [
    "BipartiteView", "ContractError", "CoverConfig", "Graph", "InputError", "InvariantError",
    "SolveReport", "SolverConfig", "SolverFailure", "Star", "StarFactorError", "StarPacking",
    "cover_excluding", "edge_minimalize", "exists_factor", "lower_bound_graph", "max_factor_size",
    "random_min_degree_graph", "random_regular_graph", "solve", "solve_regular", "verify",
]
