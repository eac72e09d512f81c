"""Network graph model: directed edges with elementary EPR-pair capacities,
plus a global elementary fidelity F and swap success probability q.

Graphs are loaded either from the native JSON topology document or from a
topology-zoo GraphML file (capacities filled from a seeded random range when
the file does not carry them).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import networkx as nx
import numpy as np


class TopologyError(ValueError):
    """Raised when a topology document violates the schema or the graph model."""


@dataclass(frozen=True)
class NetworkGraph:
    """Directed capacitated graph with uniform fidelity/swap parameters.

    Immutable after construction; safe to share across threads.
    """

    nodes: frozenset[str]
    capacity: dict[tuple[str, str], float]  # (u, v) -> EPR pairs per second
    elementary_fidelity: float
    swap_success: float
    _out: dict[str, list[str]] = field(repr=False, compare=False, default_factory=dict)
    _in: dict[str, list[str]] = field(repr=False, compare=False, default_factory=dict)

    @property
    def edges(self) -> list[tuple[str, str]]:
        return sorted(self.capacity)

    def out_neighbors(self, u: str) -> list[str]:
        return self._out.get(u, [])

    def in_neighbors(self, v: str) -> list[str]:
        return self._in.get(v, [])

    def __post_init__(self):
        out: dict[str, list[str]] = {}
        inn: dict[str, list[str]] = {}
        for u, v in sorted(self.capacity):
            out.setdefault(u, []).append(v)
            inn.setdefault(v, []).append(u)
        object.__setattr__(self, "_out", out)
        object.__setattr__(self, "_in", inn)


def _merge_edges(edge_list) -> dict[tuple[str, str], float]:
    """Merge parallel directed edges by summing their capacities."""
    merged: dict[tuple[str, str], float] = {}
    for u, v, cap in edge_list:
        key = (str(u), str(v))
        merged[key] = merged.get(key, 0.0) + float(cap)
    return merged


def build_graph(nodes, edge_list, fidelity, swap_success, directed=True) -> NetworkGraph:
    """Assemble and validate a NetworkGraph from raw parts.

    ``edge_list`` holds (u, v, capacity) triples. Undirected input doubles every
    edge via :func:`to_directed` before merging.
    """
    node_set = frozenset(str(n) for n in nodes)
    if not directed:
        edge_list = [e for (u, v, c) in edge_list for e in ((u, v, c), (v, u, c))]
    capacity = _merge_edges(edge_list)
    g = NetworkGraph(
        nodes=node_set,
        capacity=capacity,
        elementary_fidelity=float(fidelity),
        swap_success=float(swap_success),
    )
    problems = validate_graph(g)
    if problems:
        raise TopologyError("; ".join(problems))
    return g


def to_directed(nodes, undirected_edges, fidelity, swap_success) -> NetworkGraph:
    """Convert undirected edge data {u,v} into the two directed edges (u,v), (v,u)."""
    return build_graph(nodes, undirected_edges, fidelity, swap_success, directed=False)


def validate_graph(g: NetworkGraph) -> list[str]:
    """Return the list of model-invariant violations (empty list means valid)."""
    problems = []
    for (u, v), cap in sorted(g.capacity.items()):
        if u == v:
            problems.append(f"self-loop on node {u!r}")
        if u not in g.nodes:
            problems.append(f"edge ({u!r}, {v!r}) references undeclared node {u!r}")
        if v not in g.nodes:
            problems.append(f"edge ({u!r}, {v!r}) references undeclared node {v!r}")
        if not cap > 0:
            problems.append(f"edge ({u!r}, {v!r}) has nonpositive capacity {cap}")
    if not 0.5 < g.elementary_fidelity <= 1.0:
        problems.append(
            f"elementary fidelity must exceed 0.5 and be at most 1, got {g.elementary_fidelity}"
        )
    if not 0.0 < g.swap_success <= 1.0:
        problems.append(f"swap success probability must lie in (0, 1], got {g.swap_success}")
    return problems


def load_topology(document) -> NetworkGraph:
    """Load a NetworkGraph from a parsed topology document (dict) or JSON text."""
    if isinstance(document, str):
        document = json.loads(document)
    try:
        directed = bool(document["directed"])
        fidelity = document["fidelity"]
        swap_success = document["swap_success"]
        nodes = [n["id"] for n in document["nodes"]]
        edges = [(e["u"], e["v"], e["capacity"]) for e in document["edges"]]
    except (KeyError, TypeError) as exc:
        raise TopologyError(f"malformed topology document: missing {exc}") from exc
    return build_graph(nodes, edges, fidelity, swap_success, directed=directed)


def serialize(g: NetworkGraph) -> dict:
    """Inverse of load_topology on validated graphs (directed form)."""
    return {
        "directed": True,
        "fidelity": g.elementary_fidelity,
        "swap_success": g.swap_success,
        "nodes": [{"id": n} for n in sorted(g.nodes)],
        "edges": [
            {"u": u, "v": v, "capacity": g.capacity[(u, v)]} for u, v in g.edges
        ],
    }


def load_topology_zoo(
    path,
    fidelity: float,
    swap_success: float,
    capacity_range: tuple[float, float] = (1.0, 400.0),
    seed: int = 0,
) -> NetworkGraph:
    """Ingest the topology-zoo GraphML subset (nodes, edges, optional capacity).

    Edges without a capacity attribute get one drawn uniformly from
    ``capacity_range`` with the given seed. Zoo files are undirected; edges are
    doubled symmetrically.
    """
    zoo = nx.read_graphml(path)
    rng = np.random.default_rng(seed)
    edge_list = []
    for u, v, data in sorted(zoo.edges(data=True)):
        cap = data.get("capacity")
        if cap is None:
            lo, hi = capacity_range
            cap = float(rng.uniform(lo, hi))
        edge_list.append((u, v, float(cap)))
    return build_graph(
        sorted(zoo.nodes), edge_list, fidelity, swap_success,
        directed=zoo.is_directed(),
    )
