import random

import pytest

from qflow.topology import build_graph


@pytest.fixture
def chain_graph():
    # s -> a -> e, capacities 4, 4
    return build_graph(["s", "a", "e"], [("s", "a", 4), ("a", "e", 4)], 0.9925, 0.5)


@pytest.fixture
def two_path_graph():
    # direct edge s -> e cap 1 plus two-hop route via a, caps 4, 4
    return build_graph(
        ["s", "a", "e"],
        [("s", "a", 4), ("a", "e", 4), ("s", "e", 1)],
        0.9925,
        0.5,
    )


@pytest.fixture
def shared_link_graph():
    # Two demands sharing the (w, e) link: a 4-hop chain from s1 and a 2-hop
    # chain from s2, every link at capacity 20.
    edges = [
        ("s1", "u", 20), ("u", "v", 20), ("v", "w", 20), ("w", "e", 20),
        ("s2", "w", 20),
    ]
    return build_graph(["s1", "s2", "u", "v", "w", "e"], edges, 0.9925, 0.5)


def random_instance(rng: random.Random, max_nodes=8, max_edges=20, max_k=3, max_l=4):
    """Small random directed instance plus raw demands with explicit hop bounds."""
    n = rng.randint(3, max_nodes)
    nodes = [f"n{i}" for i in range(n)]
    m = rng.randint(n, min(max_edges, n * (n - 1)))
    edges = set()
    while len(edges) < m:
        u, v = rng.sample(nodes, 2)
        edges.add((u, v))
    edge_list = [(u, v, rng.uniform(0.5, 10.0)) for u, v in sorted(edges)]
    q = rng.choice([0.5, 0.75, 1.0])
    g = build_graph(nodes, edge_list, 0.9925, q)
    raw = []
    for _ in range(rng.randint(1, max_k)):
        s, e = rng.sample(nodes, 2)
        raw.append((s, e, ("length", rng.randint(1, max_l))))
    return g, raw
