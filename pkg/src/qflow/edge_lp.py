"""Edge-based flow formulation over the layered graph.

One variable per (sub-demand, surviving layered edge); the objective weights
source outflow of the layer-j sub-demand by q^(j-1), capacities are shared per
base edge across all sub-demands and layers, and flow is conserved at every
internal layered node.
"""

from __future__ import annotations

from dataclasses import dataclass

from .config import DEFAULT_TOLERANCES, Tolerances
from .layering import LayeredEdge, LayeredGraph, SubDemand, edges_for_subdemand
from .lp import EQ, LEQ, LinearProgram, LpSolution


@dataclass(frozen=True)
class FlowSolution:
    """Per-sub-demand edge flows plus the rate objective they achieve."""

    flows: dict[tuple[int, int], dict[LayeredEdge, float]]
    objective_value: float

    def flow(self, sub_key: tuple[int, int], edge: LayeredEdge) -> float:
        return self.flows.get(sub_key, {}).get(edge, 0.0)


def _power_weights(q: float, l_max: int) -> list[float]:
    # q^(j-1) for j = 0..l_max; index 0 unused.
    w = [1.0] * (l_max + 1)
    for j in range(2, l_max + 1):
        w[j] = w[j - 1] * q
    return w


def build_edge_lp(
    lg: LayeredGraph, subs: list[SubDemand], q: float
) -> tuple[LinearProgram, dict[tuple[int, int], dict[LayeredEdge, int]]]:
    """Build the LP; also returns the (sub-demand, edge) -> variable-index map."""
    if not 0.0 < q <= 1.0:
        raise ValueError(f"swap success probability must lie in (0, 1], got {q}")
    lp = LinearProgram()
    weights = _power_weights(q, max((s.layer for s in subs), default=0))

    var_index: dict[tuple[int, int], dict[LayeredEdge, int]] = {}
    by_base_edge: dict[tuple[str, str], list[int]] = {}
    for sub in subs:
        key = (sub.demand_index, sub.layer)
        edge_vars: dict[LayeredEdge, int] = {}
        for edge in edges_for_subdemand(lg, sub):
            (u, t), (v, _) = edge
            idx = lp.add_variable(f"g_d{sub.demand_index}_j{sub.layer}_t{t}_{u}_{v}")
            edge_vars[edge] = idx
            by_base_edge.setdefault((u, v), []).append(idx)
            if t == 0:  # only source-leaving edges carry objective weight
                lp.objective[idx] = weights[sub.layer]
        var_index[key] = edge_vars

        # Conservation at internal layered nodes touched by surviving edges.
        incident: dict[tuple[str, int], dict[int, float]] = {}
        for ((u, t), (v, t1)), idx in edge_vars.items():
            if (u, t) != sub.source_node:
                incident.setdefault((u, t), {})[idx] = -1.0  # outflow
            if (v, t1) != sub.sink_node:
                incident.setdefault((v, t1), {})[idx] = 1.0  # inflow
        for node in sorted(incident):
            lp.add_constraint(incident[node], EQ, 0.0)

    for u, v in lg.base.edges:
        idxs = by_base_edge.get((u, v))
        if idxs:
            lp.add_constraint({i: 1.0 for i in idxs}, LEQ, lg.base.capacity[(u, v)])
    return lp, var_index


def flow_from_solution(
    sol: LpSolution,
    var_index: dict[tuple[int, int], dict[LayeredEdge, int]],
    q: float,
) -> FlowSolution:
    """Re-index the LP solution by (sub-demand, layered edge) and recompute the
    objective directly from source outflows."""
    if sol.status != "optimal":
        raise ValueError(f"cannot extract a flow from a {sol.status} solution")
    flows: dict[tuple[int, int], dict[LayeredEdge, float]] = {}
    objective = 0.0
    for (i, j), edge_vars in var_index.items():
        fl = {edge: float(sol.values[idx]) for edge, idx in edge_vars.items()}
        flows[(i, j)] = fl
        out = sum(v for ((_, t), _), v in fl.items() if t == 0)
        objective += q ** (j - 1) * out
    return FlowSolution(flows=flows, objective_value=objective)


def check_flow_feasibility(
    f: FlowSolution,
    lg: LayeredGraph,
    subs: list[SubDemand],
    tol: Tolerances = DEFAULT_TOLERANCES,
) -> list[str]:
    """List every violated constraint with its slack; empty means feasible."""
    problems = []
    sub_by_key = {(s.demand_index, s.layer): s for s in subs}

    for key, fl in f.flows.items():
        for edge, value in fl.items():
            if value < -tol.tol_feas:
                problems.append(f"negative flow {value} on {edge} for sub-demand {key}")

    load: dict[tuple[str, str], float] = {}
    for fl in f.flows.values():
        for ((u, _), (v, _)), value in fl.items():
            load[(u, v)] = load.get((u, v), 0.0) + value
    for (u, v), total in sorted(load.items()):
        slack = lg.base.capacity[(u, v)] - total
        if slack < -tol.tol_feas:
            problems.append(f"capacity violated on edge ({u}, {v}): slack {slack}")

    for key, fl in f.flows.items():
        sub = sub_by_key[key]
        balance: dict[tuple[str, int], float] = {}
        for ((u, t), (v, t1)), value in fl.items():
            balance[(u, t)] = balance.get((u, t), 0.0) - value
            balance[(v, t1)] = balance.get((v, t1), 0.0) + value
        for node, net in sorted(balance.items()):
            if node in (sub.source_node, sub.sink_node):
                continue
            if abs(net) > tol.tol_feas:
                problems.append(
                    f"conservation violated for sub-demand {key} at node {node}: net {net}"
                )
    return problems


def export_flow(f: FlowSolution) -> dict:
    """Structured export: (i, j, u, t, v, value) rows, 12 significant digits."""
    rows = []
    for (i, j) in sorted(f.flows):
        for ((u, t), (v, _)), value in sorted(f.flows[(i, j)].items()):
            if value > 0.0:
                rows.append(
                    {"i": i, "j": j, "u": u, "t": t, "v": v,
                     "value": float(f"{value:.12g}")}
                )
    return {"objective_value": float(f"{f.objective_value:.12g}"), "flows": rows}
