"""Layered-graph expansion that turns the hop bound into structure.

The expanded graph holds l_max + 1 copies of every base node; a base edge
(u, v) becomes (u^t, v^{t+1}) for every layer t < l_max, carrying the base
capacity. Every path from (s, 0) to (e, j) then has exactly j edges, so a
demand with hop bound l splits into the sub-demands targeting layers 1..l.
"""

from __future__ import annotations

from dataclasses import dataclass

from .demands import DemandSet
from .topology import NetworkGraph

# A layered node is the pair (base node id, layer index).
LayeredNode = tuple[str, int]
LayeredEdge = tuple[LayeredNode, LayeredNode]


@dataclass(frozen=True)
class SubDemand:
    demand_index: int
    layer: int        # target layer j; every admissible path has exactly j edges
    source: str       # base id of s_i, placed at layer 0
    sink: str         # base id of e_i, placed at layer j

    @property
    def source_node(self) -> LayeredNode:
        return (self.source, 0)

    @property
    def sink_node(self) -> LayeredNode:
        return (self.sink, self.layer)


@dataclass(frozen=True)
class LayeredGraph:
    base: NetworkGraph
    l_max: int

    @property
    def num_nodes(self) -> int:
        return (self.l_max + 1) * len(self.base.nodes)

    def edges(self):
        """All layered edges ((u, t), (v, t+1)), deterministic order."""
        for t in range(self.l_max):
            for u, v in self.base.edges:
                yield ((u, t), (v, t + 1))

    def capacity(self, edge: LayeredEdge) -> float:
        (u, _), (v, _) = edge
        return self.base.capacity[(u, v)]


def build_layered_graph(g: NetworkGraph, d: DemandSet) -> LayeredGraph:
    return LayeredGraph(base=g, l_max=d.l_max)


def decompose_demands(d: DemandSet) -> list[SubDemand]:
    """Split demand i with hop bound l_i into sub-demands for layers 1..l_i."""
    subs = []
    for i, dem in enumerate(d.demands):
        if dem.infeasible:
            continue
        for j in range(1, dem.length_bound + 1):
            subs.append(SubDemand(i, j, dem.source, dem.destination))
    return subs


def reachable_by_layer(g: NetworkGraph, start: str, depth: int, forward=True) -> list[set[str]]:
    """reach[t] = base nodes reachable from ``start`` by a walk of exactly t edges
    (backward walks into ``start`` when forward=False)."""
    reach = [set() for _ in range(depth + 1)]
    reach[0].add(start)
    step = g.out_neighbors if forward else g.in_neighbors
    for t in range(depth):
        for u in reach[t]:
            reach[t + 1].update(step(u))
    return reach


def edges_for_subdemand(lg: LayeredGraph, sub: SubDemand) -> list[LayeredEdge]:
    """Layered edges that can carry flow for this sub-demand.

    An edge ((u, t), (v, t+1)) survives pruning iff u is reachable from the
    source in exactly t hops and the sink is reachable from v in exactly
    j - t - 1 hops; every other edge is forced to zero flow by conservation.
    """
    j = sub.layer
    fwd = reachable_by_layer(lg.base, sub.source, j - 1, forward=True)
    bwd = reachable_by_layer(lg.base, sub.sink, j, forward=False)
    edges = []
    for t in range(j):
        for u, v in lg.base.edges:
            if u in fwd[t] and v in bwd[j - t - 1]:
                edges.append(((u, t), (v, t + 1)))
    return edges


def export_layered_graph(lg: LayeredGraph) -> dict:
    """Debug export: plain node/edge lists of the expanded graph."""
    return {
        "l_max": lg.l_max,
        "nodes": [
            {"base": u, "layer": t}
            for t in range(lg.l_max + 1)
            for u in sorted(lg.base.nodes)
        ],
        "edges": [
            {"u": u, "t": t, "v": v, "capacity": lg.base.capacity[(u, v)]}
            for ((u, t), (v, _)) in lg.edges()
        ],
    }
