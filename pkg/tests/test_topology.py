import json

import networkx as nx
import numpy as np
import pytest

from qflow.topology import (
    NetworkGraph,
    TopologyError,
    build_graph,
    load_topology,
    load_topology_zoo,
    serialize,
    to_directed,
    validate_graph,
)


def test_undirected_document_doubles_edges():
    doc = {
        "directed": False,
        "fidelity": 0.9925,
        "swap_success": 0.5,
        "nodes": [{"id": "s"}, {"id": "e"}],
        "edges": [{"u": "s", "v": "e", "capacity": 3}],
    }
    g = load_topology(doc)
    assert g.capacity == {("s", "e"): 3.0, ("e", "s"): 3.0}


def test_duplicate_directed_edges_merge_by_sum():
    g = build_graph(["u", "v"], [("u", "v", 2), ("u", "v", 5)], 0.9, 0.5)
    assert g.capacity == {("u", "v"): 7.0}


def test_load_topology_accepts_json_text(two_path_graph):
    text = json.dumps(serialize(two_path_graph))
    assert load_topology(text) == two_path_graph


def test_roundtrip_is_identity(two_path_graph):
    assert load_topology(serialize(two_path_graph)) == two_path_graph


def test_to_directed_counts_and_capacities():
    g = to_directed(["s", "a", "e"], [("s", "a", 4), ("a", "e", 2)], 0.9, 1.0)
    assert len(g.edges) == 4
    assert g.capacity[("s", "a")] == g.capacity[("a", "s")] == 4
    assert g.capacity[("a", "e")] == g.capacity[("e", "a")] == 2


def test_to_directed_empty_edges():
    g = to_directed(["a", "b"], [], 0.9, 1.0)
    assert g.edges == []


def test_integer_node_ids_are_stringified():
    g = build_graph([1, 2], [(1, 2, 1.0)], 0.9, 0.5)
    assert g.nodes == frozenset({"1", "2"})


@pytest.mark.parametrize(
    "edges, fidelity, q, fragment",
    [
        ([("a", "b", 0)], 0.9, 0.5, "nonpositive capacity"),
        ([("a", "c", 1)], 0.9, 0.5, "undeclared node"),
        ([("a", "b", 1)], 0.5, 0.5, "fidelity"),
        ([("a", "b", 1)], 0.9, 0.0, "swap success"),
        ([("a", "b", 1)], 0.9, 1.5, "swap success"),
    ],
)
def test_invalid_graphs_rejected(edges, fidelity, q, fragment):
    with pytest.raises(TopologyError, match=fragment):
        build_graph(["a", "b"], edges, fidelity, q)


def test_validate_graph_reports_violations_without_raising():
    g = NetworkGraph(
        nodes=frozenset({"a", "b"}),
        capacity={("a", "b"): 0.0},
        elementary_fidelity=0.5,
        swap_success=0.5,
    )
    report = validate_graph(g)
    assert any("nonpositive capacity" in r for r in report)
    assert any("fidelity" in r for r in report)


def test_validate_graph_empty_report_on_valid(chain_graph):
    assert validate_graph(chain_graph) == []


def test_missing_document_keys():
    with pytest.raises(TopologyError, match="malformed"):
        load_topology({"directed": True})


def test_topology_zoo_ingest(tmp_path):
    zoo = nx.Graph()
    zoo.add_edge("Amsterdam", "Delft")
    zoo.add_edge("Delft", "Leiden", capacity=12.5)
    path = tmp_path / "net.graphml"
    nx.write_graphml(zoo, path)

    g = load_topology_zoo(path, 0.9925, 0.5, capacity_range=(1, 400), seed=42)
    assert g.nodes == frozenset({"Amsterdam", "Delft", "Leiden"})
    assert len(g.edges) == 4  # undirected doubling
    assert g.capacity[("Delft", "Leiden")] == 12.5
    assert 1 <= g.capacity[("Amsterdam", "Delft")] <= 400
    # same seed, same fill-in
    again = load_topology_zoo(path, 0.9925, 0.5, capacity_range=(1, 400), seed=42)
    assert again == g


def test_surfnet_scale_document():
    rng = np.random.default_rng(11)
    n = 50
    nodes = [{"id": str(i)} for i in range(n)]
    edges = [
        {"u": str(i), "v": str((i + 1) % n), "capacity": float(rng.uniform(1, 400))}
        for i in range(n)
    ]
    g = load_topology(
        {"directed": False, "fidelity": 0.9925, "swap_success": 0.5,
         "nodes": nodes, "edges": edges}
    )
    assert len(g.nodes) == 50
    assert all(1 <= c <= 400 for c in g.capacity.values())
