"""qflow: rate-optimal entanglement routing for quantum repeater networks.

Computes the maximum total end-to-end EPR-pair distribution rate for multiple
demands under end-to-end fidelity constraints, extracts per-path rates, and
validates them against a brute-force oracle and a protocol-level Monte-Carlo
simulator.
"""

__version__ = "0.1.0"

from .config import DEFAULT_TOLERANCES, Tolerances
from .demands import Demand, DemandSet, reduce_demands
from .extraction import ExtractedPath, PathAssignment, extract_paths, verify_assignment
from .fidelity import (
    end_to_end_fidelity,
    fidelity_to_werner,
    length_bound,
    swap_compose,
    werner_to_fidelity,
)
from .layering import LayeredGraph, SubDemand, build_layered_graph, decompose_demands
from .oracle import enumerate_bounded_paths, oracle_optimum
from .simulate import (
    SimulationConfig,
    analytic_chain_rate,
    build_link_schedule,
    simulate_chain,
    simulate_network,
    storage_time_bound,
)
from .solver import RateMaximizer, solve_rate_maximization
from .topology import NetworkGraph, load_topology, load_topology_zoo, validate_graph

__all__ = [
    "DEFAULT_TOLERANCES",
    "Tolerances",
    "Demand",
    "DemandSet",
    "reduce_demands",
    "ExtractedPath",
    "PathAssignment",
    "extract_paths",
    "verify_assignment",
    "end_to_end_fidelity",
    "fidelity_to_werner",
    "length_bound",
    "swap_compose",
    "werner_to_fidelity",
    "LayeredGraph",
    "SubDemand",
    "build_layered_graph",
    "decompose_demands",
    "enumerate_bounded_paths",
    "oracle_optimum",
    "SimulationConfig",
    "analytic_chain_rate",
    "build_link_schedule",
    "simulate_chain",
    "simulate_network",
    "storage_time_bound",
    "RateMaximizer",
    "solve_rate_maximization",
    "NetworkGraph",
    "load_topology",
    "load_topology_zoo",
    "validate_graph",
]
