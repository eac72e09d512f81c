"""High-level pipeline and an estimator-style facade.

``solve_rate_maximization`` wires the full chain: reduce fidelity targets to
hop bounds, expand the layered graph, build and solve the edge LP, and
optionally decompose the flow into paths. ``RateMaximizer`` wraps the same
pipeline in a scikit-learn compatible fit() interface so it plugs into
ecosystem tooling (cloning, parameter search over q / tolerances, pipelines).
"""

from __future__ import annotations

from dataclasses import dataclass

from sklearn.base import BaseEstimator

from .config import DEFAULT_TOLERANCES, Tolerances
from .demands import DemandSet, reduce_demands
from .edge_lp import FlowSolution, build_edge_lp, flow_from_solution
from .extraction import PathAssignment, extract_paths
from .layering import LayeredGraph, SubDemand, build_layered_graph, decompose_demands
from .lp import LinearProgram, LpSolution, solve_lp
from .topology import NetworkGraph


class InfeasibleProblemError(RuntimeError):
    """The edge LP came back infeasible or unbounded (should not happen for
    well-formed instances: zero flow is always feasible and capacities bound
    the objective)."""


@dataclass(frozen=True)
class SolveResult:
    demand_set: DemandSet
    layered: LayeredGraph
    subs: list[SubDemand]
    lp: LinearProgram
    lp_solution: LpSolution
    flow: FlowSolution


def build_problem(g: NetworkGraph, raw_demands: list[tuple]):
    d = reduce_demands(raw_demands, g)
    lg = build_layered_graph(g, d)
    subs = decompose_demands(d)
    lp, var_index = build_edge_lp(lg, subs, g.swap_success)
    return d, lg, subs, lp, var_index


def solve_rate_maximization(g: NetworkGraph, raw_demands: list[tuple]) -> SolveResult:
    d, lg, subs, lp, var_index = build_problem(g, raw_demands)
    sol = solve_lp(lp)
    if sol.status != "optimal":
        raise InfeasibleProblemError(f"edge LP is {sol.status}")
    flow = flow_from_solution(sol, var_index, g.swap_success)
    return SolveResult(d, lg, subs, lp, sol, flow)


class RateMaximizer(BaseEstimator):
    """Estimator facade over the routing pipeline.

    Parameters
    ----------
    eps : float
        Extraction epsilon; residuals at or below it count as zero.
    tol_feas, tol_obj : float
        Feasibility / objective tolerances used in downstream checks.
    workers : int
        Worker cap for the per-sub-demand path extraction.
    """

    def __init__(self, eps=1e-9, tol_feas=1e-7, tol_obj=1e-7, workers=1):
        self.eps = eps
        self.tol_feas = tol_feas
        self.tol_obj = tol_obj
        self.workers = workers

    def fit(self, graph: NetworkGraph, demands: list[tuple]):
        """Solve the instance and extract paths.

        ``demands`` uses the raw form accepted by the demand reduction:
        (source, destination, ("fidelity", F) | ("length", l)) triples.
        """
        result = solve_rate_maximization(graph, demands)
        assignment = extract_paths(
            result.flow,
            result.layered,
            result.subs,
            graph.swap_success,
            eps=self.eps,
            workers=self.workers,
        )
        self.result_ = result
        self.assignment_ = assignment
        self.total_rate_ = assignment.total_rate
        self.demand_rates_ = [
            assignment.demand_rate(i) for i in range(result.demand_set.k)
        ]
        return self

    def predict(self, demand_index: int) -> PathAssignment:
        """Paths and rates for one demand of the fitted instance."""
        return PathAssignment(
            paths=tuple(self.assignment_.for_demand(demand_index)),
            objective_value=self.assignment_.objective_value,
        )

    def tolerances(self) -> Tolerances:
        return Tolerances(tol_feas=self.tol_feas, tol_obj=self.tol_obj, eps=self.eps)
