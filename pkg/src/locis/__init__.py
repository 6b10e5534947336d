"""Maximization over independence systems defined locally on graphs and
hypergraphs, under approximate local oracles.

The solvers live in locis.algorithms, exact verification in locis.exact,
instance construction in locis.model / locis.generators / locis.reductions,
and text formats in locis.fileio.
"""

from .edgeset import EMPTY, EdgeSet, union_all
from .errors import (
    CapExceededError,
    FormatError,
    InvariantError,
    LocisError,
    OracleContractError,
    SingletonDependenceError,
)
from .model import Graph, Hypergraph, Instance, induced_subhypergraph
from .systems import (
    CardinalityBound,
    ExplicitSystem,
    FreeSystem,
    LocalSystem,
    PartitionMatroid,
    SignSystem,
    TimedMatching,
    greedy_maximal,
    ksystem_param_exact,
    restriction_family,
)
from .oracle import (
    ExhaustiveOracle,
    GreedyPrefOracle,
    LocalOracle,
    ScriptedOracle,
    ValidationReport,
    truncated_exhaustive_scripted,
    validate_oracle,
)
from .ordering import (
    VertexOrder,
    degeneracy_order,
    forest_decompose,
    order_for,
    width1_decompose,
    width_of,
)
from .algorithms import (
    SolveTrace,
    bipartite_approx,
    decom_approx,
    decom_approx_hyper,
    fixed_order,
    greedy,
    ordered_approx,
    ordered_approx_hyper,
    rho,
)
from .exact import (
    ExactResult,
    RatioReport,
    global_ksystem_param,
    max_independent,
    naive_max_independent,
    sweep_certificate,
    verify_ratio,
)
from .reductions import (
    FIXTURES,
    Cnf,
    Fixture,
    MaxSatReduction,
    bmatching_to_instance,
    lowerbound_fixture,
    maxsat_to_instance,
    parse_dimacs,
    random_cnf,
    timed_to_instance,
    write_dimacs,
)
from .kernels import BACKEND

__version__ = "0.1.0"

__all__ = [
    "EMPTY", "EdgeSet", "union_all",
    "LocisError", "SingletonDependenceError", "OracleContractError",
    "CapExceededError", "FormatError", "InvariantError",
    "Graph", "Hypergraph", "Instance", "induced_subhypergraph",
    "LocalSystem", "FreeSystem", "CardinalityBound", "PartitionMatroid",
    "TimedMatching", "SignSystem", "ExplicitSystem",
    "restriction_family", "greedy_maximal", "ksystem_param_exact",
    "LocalOracle", "ExhaustiveOracle", "GreedyPrefOracle", "ScriptedOracle",
    "truncated_exhaustive_scripted", "validate_oracle", "ValidationReport",
    "VertexOrder", "order_for", "width_of", "degeneracy_order",
    "forest_decompose", "width1_decompose",
    "SolveTrace", "rho", "fixed_order", "greedy", "ordered_approx",
    "decom_approx", "bipartite_approx", "ordered_approx_hyper",
    "decom_approx_hyper",
    "ExactResult", "RatioReport", "max_independent", "naive_max_independent",
    "verify_ratio", "sweep_certificate", "global_ksystem_param",
    "Cnf", "parse_dimacs", "write_dimacs", "random_cnf",
    "MaxSatReduction", "maxsat_to_instance", "timed_to_instance",
    "bmatching_to_instance",
    "Fixture", "FIXTURES", "lowerbound_fixture",
    "BACKEND",
]
