"""Decompose a feasible layered edge flow into explicit paths with rates.

For each sub-demand the residual flow is repeatedly traced from source to
sink along strictly positive edges; the path rate is q^(j-1) times the
bottleneck residual and the bottleneck amount is subtracted everywhere along
the path. Each round zeroes at least one edge, so the loop terminates after at
most |E'| iterations per sub-demand. Residuals stay nonnegative and conserved
throughout, and the extracted rates sum to the LP objective.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from .config import DEFAULT_TOLERANCES, Tolerances
from .demands import DemandSet
from .edge_lp import FlowSolution
from .fidelity import end_to_end_fidelity, fidelity_to_werner
from .layering import LayeredEdge, LayeredGraph, SubDemand
from .topology import NetworkGraph


class ExtractionError(RuntimeError):
    """Numerical breakdown: residual source outflow remains but no positive
    source-to-sink path exists."""


@dataclass(frozen=True)
class ExtractedPath:
    demand_index: int
    layer: int                        # = path length in the base graph
    base_path: tuple[tuple[str, str], ...]
    rate: float                       # end-to-end EPR pairs per second

    @property
    def nodes(self) -> tuple[str, ...]:
        return (self.base_path[0][0],) + tuple(v for _, v in self.base_path)

    @property
    def is_simple(self) -> bool:
        nodes = self.nodes
        return len(set(nodes)) == len(nodes)


@dataclass(frozen=True)
class PathAssignment:
    paths: tuple[ExtractedPath, ...]
    objective_value: float            # objective of the flow the paths came from

    def for_demand(self, i: int) -> list[ExtractedPath]:
        return [p for p in self.paths if p.demand_index == i]

    def demand_rate(self, i: int) -> float:
        return sum(p.rate for p in self.for_demand(i))

    @property
    def total_rate(self) -> float:
        return sum(p.rate for p in self.paths)


def find_positive_path(
    residual: dict[LayeredEdge, float],
    sub: SubDemand,
    eps: float,
) -> list[LayeredEdge] | None:
    """DFS over the layered DAG along edges with residual > eps; layer-(t+1)
    neighbors are tried in ascending base-node order, so output is deterministic."""
    succ: dict[tuple[str, int], list[LayeredEdge]] = {}
    for edge, value in residual.items():
        if value > eps:
            succ.setdefault(edge[0], []).append(edge)
    for edges in succ.values():
        edges.sort(key=lambda e: e[1][0])

    target = sub.sink_node
    stack: list[tuple[tuple[str, int], list[LayeredEdge]]] = [
        (sub.source_node, list(reversed(succ.get(sub.source_node, []))))
    ]
    path: list[LayeredEdge] = []
    while stack:
        node, pending = stack[-1]
        if node == target:
            return path
        if not pending:
            stack.pop()
            if path:
                path.pop()
            continue
        edge = pending.pop()
        path.append(edge)
        stack.append((edge[1], list(reversed(succ.get(edge[1], [])))))
    return None


def _extract_one(
    sub: SubDemand,
    flow: dict[LayeredEdge, float],
    q: float,
    eps: float,
    on_step=None,
) -> list[ExtractedPath]:
    residual = {e: v for e, v in flow.items() if v > eps}
    scale = q ** (sub.layer - 1)
    out_edges = [e for e in flow if e[0] == sub.source_node]
    guard = eps * max(len(out_edges), 1)
    paths: list[ExtractedPath] = []

    while sum(residual.get(e, 0.0) for e in out_edges) > guard:
        layered_path = find_positive_path(residual, sub, eps)
        if layered_path is None:
            raise ExtractionError(
                f"sub-demand {(sub.demand_index, sub.layer)}: residual source outflow "
                "remains but no positive path exists (flow too noisy for eps "
                f"{eps})"
            )
        bottleneck = min(residual[e] for e in layered_path)
        for e in layered_path:
            left = residual[e] - bottleneck
            if left > eps:
                residual[e] = left
            else:
                residual.pop(e)
        rate = scale * bottleneck
        if rate > eps * scale:
            base_path = tuple((u, v) for ((u, _), (v, _)) in layered_path)
            paths.append(ExtractedPath(sub.demand_index, sub.layer, base_path, rate))
        if on_step is not None:
            on_step(sub, dict(residual))
    return paths


def extract_paths(
    f: FlowSolution,
    lg: LayeredGraph,
    subs: list[SubDemand],
    q: float,
    eps: float = DEFAULT_TOLERANCES.eps,
    workers: int = 1,
    on_step=None,
) -> PathAssignment:
    """Run the per-sub-demand decomposition; sub-demands are independent, so
    ``workers`` > 1 processes them concurrently without changing the output.
    ``on_step(sub, residual)`` is invoked after every allocation round, for
    instrumentation."""
    if eps <= 0:
        raise ValueError(f"extraction epsilon must be positive, got {eps}")
    jobs = [(sub, f.flows.get((sub.demand_index, sub.layer), {})) for sub in subs]
    if workers > 1 and on_step is None:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(lambda a: _extract_one(a[0], a[1], q, eps), jobs))
    else:
        results = [_extract_one(sub, flow, q, eps, on_step) for sub, flow in jobs]
    paths = tuple(p for chunk in results for p in chunk)
    return PathAssignment(paths=paths, objective_value=f.objective_value)


def verify_assignment(
    pa: PathAssignment,
    g: NetworkGraph,
    d: DemandSet,
    q: float,
    tol: Tolerances = DEFAULT_TOLERANCES,
) -> list[str]:
    """Check capacities, hop bounds, objective preservation and the path-count
    bound; returns the list of violations (empty = verified)."""
    problems = []

    load: dict[tuple[str, str], float] = {}
    for p in pa.paths:
        elementary = p.rate / q ** (len(p.base_path) - 1)
        for edge in p.base_path:
            load[edge] = load.get(edge, 0.0) + elementary
    for edge, total in sorted(load.items()):
        cap = g.capacity.get(edge)
        if cap is None:
            problems.append(f"path uses nonexistent edge {edge}")
        elif total > cap + tol.tol_feas:
            problems.append(f"capacity violated on {edge}: load {total} > {cap}")

    for p in pa.paths:
        dem = d.demands[p.demand_index]
        if len(p.base_path) != p.layer:
            problems.append(f"path length {len(p.base_path)} != layer {p.layer}")
        if p.layer > dem.length_bound:
            problems.append(
                f"demand {p.demand_index}: path of length {p.layer} exceeds bound "
                f"{dem.length_bound}"
            )
        if p.base_path[0][0] != dem.source or p.base_path[-1][1] != dem.destination:
            problems.append(f"demand {p.demand_index}: path endpoints do not match")
        if dem.target_fidelity is not None and not dem.infeasible:
            w = fidelity_to_werner(g.elementary_fidelity)
            if end_to_end_fidelity(w, p.layer) < dem.target_fidelity - tol.tol_feas:
                problems.append(
                    f"demand {p.demand_index}: end-to-end fidelity below target"
                )

    gap = abs(pa.total_rate - pa.objective_value)
    if gap > tol.obj_tol_for(pa.objective_value):
        problems.append(
            f"total extracted rate {pa.total_rate} differs from objective "
            f"{pa.objective_value} by {gap}"
        )

    cap_count = len(g.capacity) * len(g.nodes)
    counts: dict[tuple[int, int], int] = {}
    for p in pa.paths:
        key = (p.demand_index, p.layer)
        counts[key] = counts.get(key, 0) + 1
    for key, n in sorted(counts.items()):
        if n > cap_count:
            problems.append(f"sub-demand {key}: {n} paths exceed bound {cap_count}")
    return problems


def export_assignment(pa: PathAssignment, g: NetworkGraph, d: DemandSet) -> dict:
    """Per-demand path lists with rates and end-to-end fidelities, 12 digits."""
    w = fidelity_to_werner(g.elementary_fidelity)
    demands_out = []
    for i, dem in enumerate(d.demands):
        entry = {
            "source": dem.source,
            "destination": dem.destination,
            "length_bound": dem.length_bound,
            "infeasible": dem.infeasible,
            "rate": float(f"{pa.demand_rate(i):.12g}"),
            "paths": [
                {
                    "nodes": list(p.nodes),
                    "length": p.layer,
                    "rate": float(f"{p.rate:.12g}"),
                    "end_to_end_fidelity": float(
                        f"{end_to_end_fidelity(w, p.layer):.12g}"
                    ),
                    "simple": p.is_simple,
                }
                for p in pa.for_demand(i)
            ],
        }
        demands_out.append(entry)
    return {
        "total_rate": float(f"{pa.total_rate:.12g}"),
        "objective_value": float(f"{pa.objective_value:.12g}"),
        "demands": demands_out,
    }
