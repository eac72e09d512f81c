"""Acceptance suite: one test per release criterion, each printing a
pass/fail line. Run with `pytest tests/test_acceptance.py -s` to see them.
"""

import json
import random
import time

import networkx as nx
import numpy as np
import pytest

from qflow.cli import EXIT_OK, main
from qflow.demands import reduce_demands
from qflow.extraction import ExtractedPath, PathAssignment, extract_paths, verify_assignment
from qflow.fidelity import end_to_end_fidelity, fidelity_to_werner, length_bound
from qflow.oracle import oracle_optimum
from qflow.simulate import (
    SimulationConfig,
    analytic_chain_rate,
    build_link_schedule,
    simulate_chain,
    simulate_network,
)
from qflow.solver import solve_rate_maximization
from qflow.topology import build_graph, serialize

from conftest import random_instance


def report(name, ok):
    print(f"\nACCEPTANCE {name}: {'PASS' if ok else 'FAIL'}")
    assert ok


def _instances(n, seed):
    rng = random.Random(seed)
    return [random_instance(rng) for _ in range(n)]


def test_criterion_1_oracle_equivalence():
    # edge LP optimum == brute-force path LP optimum on 200 random instances
    start = time.time()
    ok = True
    for g, raw in _instances(200, seed=1001):
        res = solve_rate_maximization(g, raw)
        oracle = oracle_optimum(g, res.demand_set, g.swap_success)
        if abs(oracle - res.flow.objective_value) > 1e-6:
            ok = False
            break
    elapsed = time.time() - start
    report("1 oracle equivalence", ok and elapsed < 60)


def test_criterion_2_extraction_soundness():
    ok = True
    for g, raw in _instances(200, seed=1001):
        res = solve_rate_maximization(g, raw)

        def check_step(sub, residual, _fail=[]):
            if any(v <= 0 for v in residual.values()):
                _fail.append("negative residual")
            balance = {}
            for ((u, t), (v, t1)), value in residual.items():
                balance[(u, t)] = balance.get((u, t), 0.0) - value
                balance[(v, t1)] = balance.get((v, t1), 0.0) + value
            for node, net in balance.items():
                if node not in (sub.source_node, sub.sink_node) and abs(net) > 1e-6:
                    _fail.append(f"conservation at {node}")
            assert not _fail, _fail

        pa = extract_paths(res.flow, res.layered, res.subs, g.swap_success,
                           on_step=check_step)
        problems = verify_assignment(pa, g, res.demand_set, g.swap_success)
        if problems or abs(pa.total_rate - res.flow.objective_value) > 1e-6:
            ok = False
            break
        bound = len(g.edges) * len(g.nodes)
        per_sub = {}
        for p in pa.paths:
            key = (p.demand_index, p.layer)
            per_sub[key] = per_sub.get(key, 0) + 1
            if p.layer > res.demand_set.demands[p.demand_index].length_bound:
                ok = False
        if any(n > bound for n in per_sub.values()):
            ok = False
    report("2 extraction soundness", ok)


def test_criterion_3_chain_rate():
    start = time.time()
    analytic = analytic_chain_rate([4, 2, 3, 5], 0.5)
    rep = simulate_chain([4, 2, 3, 5], SimulationConfig(trials=100_000, seed=42, q=0.5))
    elapsed = time.time() - start
    empirical = rep.per_path[0].empirical_rate
    report(
        "3 chain rate",
        analytic == 0.25
        and abs(empirical - 0.25) / 0.25 < 0.05
        and elapsed < 5,
    )


def test_criterion_4_link_sharing(shared_link_graph):
    p1 = ExtractedPath(0, 4, (("s1", "u"), ("u", "v"), ("v", "w"), ("w", "e")), 0.25)
    p2 = ExtractedPath(1, 2, (("s2", "w"), ("w", "e")), 5.0)
    pa = PathAssignment(paths=(p1, p2), objective_value=5.25)
    schedule = build_link_schedule(pa, shared_link_graph, 0.5)
    shares = schedule[("w", "e")]
    exact = (
        shares[0].elementary_rate == 2.0 and shares[0].time_share == 0.1
        and shares[1].elementary_rate == 10.0 and shares[1].time_share == 0.5
    )
    rep = simulate_network(
        pa, shared_link_graph, SimulationConfig(trials=100_000, seed=4, q=0.5)
    )
    within = all(
        abs(st.empirical_rate - target) <= 3 * st.stderr
        for st, target in zip(rep.per_path, (0.25, 5.0))
    )
    report("4 link sharing", exact and within)


def test_criterion_5_fidelity_arithmetic():
    ok = fidelity_to_werner(0.9925) == pytest.approx(0.99, abs=1e-15)
    ok = ok and abs(end_to_end_fidelity(0.99, 4) - 0.970447) <= 1e-6
    rng = random.Random(5005)
    for _ in range(10_000):
        f_elem = rng.uniform(0.51, 0.9999)
        f_target = rng.uniform(0.501, f_elem)
        l = length_bound(f_target, f_elem)
        w = fidelity_to_werner(f_elem)
        if not (
            l >= 1
            and end_to_end_fidelity(w, l) >= f_target - 1e-12
            and end_to_end_fidelity(w, l + 1) < f_target + 1e-12
        ):
            ok = False
            break
    report("5 fidelity arithmetic", ok)


def test_criterion_6_structural_bounds():
    ok = True
    for g, raw in _instances(100, seed=6006):
        d = reduce_demands(raw, g)
        res = solve_rate_maximization(g, raw)
        V, E, k = len(g.nodes), len(g.edges), d.k
        if len(res.lp.variables) > k * E * V:
            ok = False
        if len(res.lp.constraints) > V * V * E * k + V * E + V**3 * k:
            ok = False
    report("6 structural bounds", ok)


def surfnet_analogue(seed=7007):
    base = nx.connected_watts_strogatz_graph(50, 4, 0.3, seed=seed)
    rng = np.random.default_rng(seed)
    edges = [(str(u), str(v), float(rng.uniform(1, 400))) for u, v in sorted(base.edges)]
    g = build_graph([str(n) for n in range(50)], edges, 0.9925, 0.5, directed=False)
    dem_rng = random.Random(seed)
    raw = []
    while len(raw) < 4:
        s, e = dem_rng.sample(range(50), 2)
        raw.append((str(s), str(e), ("fidelity", dem_rng.uniform(0.93, 0.99))))
    return g, raw


def test_criterion_7_desk_scale_network():
    start = time.time()
    g, raw = surfnet_analogue()
    res = solve_rate_maximization(g, raw)
    pa = extract_paths(res.flow, res.layered, res.subs, g.swap_success)
    problems = verify_assignment(pa, g, res.demand_set, g.swap_success)
    elapsed = time.time() - start
    ok = not problems and res.flow.objective_value > 0 and elapsed < 120

    # oracle agreement on the induced 8-node subgraph
    keep = {str(i) for i in range(8)}
    sub_edges = [
        (u, v, c) for (u, v), c in g.capacity.items() if u in keep and v in keep
    ]
    sub = build_graph(sorted(keep), sub_edges, 0.9925, 0.5)
    sub_raw = [("0", "5", ("length", 4)), ("2", "7", ("length", 3))]
    sub_res = solve_rate_maximization(sub, sub_raw)
    oracle = oracle_optimum(sub, sub_res.demand_set, 0.5)
    ok = ok and abs(oracle - sub_res.flow.objective_value) <= 1e-6
    report("7 desk-scale network", ok)


def test_criterion_8_determinism(tmp_path):
    g, raw = surfnet_analogue()
    topo = tmp_path / "topology.json"
    topo.write_text(json.dumps(serialize(g)))
    dem = tmp_path / "demands.json"
    dem.write_text(json.dumps(
        [{"source": s, "destination": e, "target_fidelity": spec[1]} for s, e, spec in raw]
    ))
    outs = []
    for name in ("a", "b"):
        out = tmp_path / name
        args = ["--topology", str(topo), "--demands", str(dem), "--out", str(out),
                "--seed", "8", "--trials", "2000"]
        assert main(["solve", *args]) == EXIT_OK
        assert main(["extract", *args]) == EXIT_OK
        assert main(["simulate", *args]) == EXIT_OK
        outs.append(out)
    ok = all(
        (outs[0] / f).read_bytes() == (outs[1] / f).read_bytes()
        for f in ("flow.json", "paths.json", "simulation.json", "simulation.csv")
    )
    report("8 determinism", ok)
