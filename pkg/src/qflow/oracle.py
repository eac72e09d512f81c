"""Brute-force path-based formulations, used as the independent oracle.

Enumerates every node-simple path within the hop bound, assigns one rate
variable per path, and maximizes the total rate subject to per-edge shared
capacity (each path consumes rate / q^(len-1) elementary pairs per second on
every edge it crosses). Exponential by design; a hard cap guards against
accidental use on large instances.
"""

from __future__ import annotations

from .demands import DemandSet
from .lp import LEQ, LinearProgram, solve_lp
from .topology import NetworkGraph

DEFAULT_PATH_CAP = 10**6


class EnumerationCapExceeded(RuntimeError):
    pass


def enumerate_bounded_paths(
    g: NetworkGraph, s: str, e: str, l: int, cap: int = DEFAULT_PATH_CAP
) -> list[tuple[str, ...]]:
    """All node-simple directed s->e paths of length <= l, as node tuples in
    lexicographic order."""
    if l < 1:
        raise ValueError(f"length bound must be >= 1, got {l}")
    found: list[tuple[str, ...]] = []

    def walk(node, visited, trail):
        if len(found) > cap:
            raise EnumerationCapExceeded(
                f"more than {cap} candidate paths between {s!r} and {e!r}"
            )
        if node == e:
            found.append(tuple(trail))
            return
        if len(trail) - 1 == l:
            return
        for nxt in g.out_neighbors(node):
            if nxt not in visited:
                visited.add(nxt)
                trail.append(nxt)
                walk(nxt, visited, trail)
                trail.pop()
                visited.remove(nxt)

    walk(s, {s}, [s])
    found.sort()
    return found


def build_path_lp(
    paths_per_demand: list[list[tuple[str, ...]]],
    g: NetworkGraph,
    q: float,
) -> LinearProgram:
    """One rate variable per enumerated path; one shared capacity row per edge."""
    lp = LinearProgram()
    by_edge: dict[tuple[str, str], dict[int, float]] = {}
    for i, paths in enumerate(paths_per_demand):
        for p, nodes in enumerate(paths):
            idx = lp.add_variable(f"r_d{i}_p{p}")
            lp.objective[idx] = 1.0
            length = len(nodes) - 1
            inv = 1.0 / q ** (length - 1)
            for u, v in zip(nodes, nodes[1:]):
                row = by_edge.setdefault((u, v), {})
                row[idx] = row.get(idx, 0.0) + inv
    for edge in sorted(by_edge):
        lp.add_constraint(by_edge[edge], LEQ, g.capacity[edge])
    return lp


def oracle_optimum(
    g: NetworkGraph, d: DemandSet, q: float, cap: int = DEFAULT_PATH_CAP
) -> float:
    """Optimal total rate by the per-demand path formulation (hop bound l_i)."""
    paths_per_demand = [
        enumerate_bounded_paths(g, dem.source, dem.destination, dem.length_bound, cap)
        if not dem.infeasible and dem.length_bound >= 1
        else []
        for dem in d.demands
    ]
    sol = solve_lp(build_path_lp(paths_per_demand, g, q))
    return sol.objective_value


def oracle_optimum_layered(
    g: NetworkGraph, d: DemandSet, q: float, cap: int = DEFAULT_PATH_CAP
) -> float:
    """Same optimum via the layered variant: paths grouped by exact length j.

    The candidate set is the union over j of the exact-length-j path sets,
    which equals the hop-bounded set, so this must agree with oracle_optimum;
    it exists to cross-check that reformulation step.
    """
    paths_per_sub: list[list[tuple[str, ...]]] = []
    for dem in d.demands:
        if dem.infeasible or dem.length_bound < 1:
            continue
        all_paths = enumerate_bounded_paths(
            g, dem.source, dem.destination, dem.length_bound, cap
        )
        for j in range(1, dem.length_bound + 1):
            paths_per_sub.append([p for p in all_paths if len(p) - 1 == j])
    sol = solve_lp(build_path_lp(paths_per_sub, g, q))
    return sol.objective_value
