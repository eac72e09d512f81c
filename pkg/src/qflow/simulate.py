"""Monte-Carlo model of the prepare-and-swap protocol.

Elementary pair generation is deterministic at link capacity; every candidate
end-to-end pair on a length-n path survives iff all n - 1 intermediate swaps
succeed, each an independent Bernoulli(q). Time is discretized into unit-second
trials; a fractional candidate count c realizes floor(c) pairs plus one extra
with probability frac(c), so the long-run mean matches c.

Randomness comes from numpy's counter-based Philox generator keyed by
(seed, path index); trial t reads a fixed block of draws, so results are
reproducible regardless of execution order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .config import DEFAULT_TOLERANCES, Tolerances
from .extraction import ExtractedPath, PathAssignment
from .fidelity import end_to_end_fidelity, fidelity_to_werner
from .topology import NetworkGraph

SCHEDULES = ("sequential", "round_robin")


@dataclass(frozen=True)
class SimulationConfig:
    trials: int = 100_000
    seed: int = 0
    q: float = 0.5
    scheduling: str = "sequential"

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError(f"trials must be >= 1, got {self.trials}")
        if self.scheduling not in SCHEDULES:
            raise ValueError(f"scheduling must be one of {SCHEDULES}")


@dataclass(frozen=True)
class PathStats:
    path_id: int
    analytic_rate: float
    empirical_rate: float
    stderr: float
    fidelity: float
    storage_bound: float


@dataclass(frozen=True)
class SimulationReport:
    per_path: tuple[PathStats, ...]

    @property
    def total_empirical_rate(self) -> float:
        return sum(p.empirical_rate for p in self.per_path)


def analytic_chain_rate(capacities: list[float], q: float) -> float:
    """Expected end-to-end rate of prepare-and-swap on a chain:
    q^(n-1) * min capacity over the n links."""
    if not capacities:
        raise ValueError("a chain needs at least one link")
    return q ** (len(capacities) - 1) * min(capacities)


def storage_time_bound(capacities: list[float], rate: float, q: float) -> float:
    """Upper bound on mean memory hold time for a path delivering ``rate``:
    the elementary demand rate / q^(n-1) divided by the bottleneck capacity."""
    if rate == 0:
        return 0.0
    n = len(capacities)
    return (rate / q ** (n - 1)) / min(capacities)


def _rng_for_path(seed: int, path_id: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(key=[seed, path_id]))


def _simulate_candidates(
    candidates: float, swaps: int, q: float, trials: int, rng: np.random.Generator
) -> np.ndarray:
    """Per-trial success counts for ``candidates`` end-to-end attempts per
    second, each needing ``swaps`` independent Bernoulli(q) successes."""
    whole = int(math.floor(candidates))
    frac = candidates - whole
    counts = np.full(trials, whole, dtype=np.int64)
    if frac > 0:
        counts += rng.random(trials) < frac
    if swaps == 0 or q == 1.0:
        return counts.astype(float)
    return rng.binomial(counts, q**swaps).astype(float)


def _stats(successes: np.ndarray) -> tuple[float, float]:
    mean = float(successes.mean())
    stderr = float(successes.std(ddof=1) / math.sqrt(len(successes))) if len(successes) > 1 else 0.0
    return mean, stderr


def simulate_chain(
    capacities: list[float], cfg: SimulationConfig, elementary_werner: float = 1.0
) -> SimulationReport:
    """Monte-Carlo the prepare-and-swap protocol on a single repeater chain."""
    n = len(capacities)
    analytic = analytic_chain_rate(capacities, cfg.q)
    rng = _rng_for_path(cfg.seed, 0)
    successes = _simulate_candidates(min(capacities), n - 1, cfg.q, cfg.trials, rng)
    mean, stderr = _stats(successes)
    return SimulationReport(
        per_path=(
            PathStats(
                path_id=0,
                analytic_rate=analytic,
                empirical_rate=mean,
                stderr=stderr,
                # Werner parameters multiply per hop, so successful pairs all
                # carry the same fidelity; no sampling noise here.
                fidelity=end_to_end_fidelity(elementary_werner, n),
                storage_bound=storage_time_bound(capacities, analytic, cfg.q),
            ),
        )
    )


@dataclass(frozen=True)
class LinkShare:
    path_id: int
    elementary_rate: float  # r_p / q^(len-1), pairs per second on this link
    time_share: float       # fraction of each second the link serves this path


def build_link_schedule(
    pa: PathAssignment,
    g: NetworkGraph,
    q: float,
    tol: Tolerances = DEFAULT_TOLERANCES,
) -> dict[tuple[str, str], list[LinkShare]]:
    """Per-edge time sharing: path p uses edge (u, v) for
    r_p / (q^(len-1) C(u, v)) seconds of every second."""
    schedule: dict[tuple[str, str], list[LinkShare]] = {}
    for pid, p in enumerate(pa.paths):
        elementary = p.rate / q ** (len(p.base_path) - 1)
        for edge in p.base_path:
            schedule.setdefault(edge, []).append(
                LinkShare(pid, elementary, elementary / g.capacity[edge])
            )
    for edge, shares in sorted(schedule.items()):
        total = sum(s.time_share for s in shares)
        if total > 1.0 + tol.tol_feas:
            raise ValueError(
                f"infeasible assignment: edge {edge} oversubscribed "
                f"(total share {total})"
            )
    return schedule


def simulate_network(
    pa: PathAssignment, g: NetworkGraph, cfg: SimulationConfig
) -> SimulationReport:
    """Simulate all extracted paths under their link schedule.

    Per unit-second trial each path's bottleneck produces its elementary
    demand rate worth of candidate pairs (guaranteed by the schedule's time
    shares, in either scheduling mode); each candidate then runs the swap
    gauntlet. Scheduling mode affects ordering within the second, not counts.
    """
    build_link_schedule(pa, g, cfg.q)  # validates feasibility
    w = fidelity_to_werner(g.elementary_fidelity)
    stats = []
    for pid, p in enumerate(pa.paths):
        n = len(p.base_path)
        elementary = p.rate / cfg.q ** (n - 1)
        rng = _rng_for_path(cfg.seed, pid)
        successes = _simulate_candidates(elementary, n - 1, cfg.q, cfg.trials, rng)
        mean, stderr = _stats(successes)
        caps = [g.capacity[e] for e in p.base_path]
        stats.append(
            PathStats(
                path_id=pid,
                analytic_rate=p.rate,
                empirical_rate=mean,
                stderr=stderr,
                fidelity=end_to_end_fidelity(w, n),
                storage_bound=storage_time_bound(caps, p.rate, cfg.q),
            )
        )
    return SimulationReport(per_path=tuple(stats))


def export_report(report: SimulationReport, paths: tuple[ExtractedPath, ...] | None = None) -> dict:
    rows = []
    for st in report.per_path:
        row = {
            "path_id": st.path_id,
            "analytic_rate": float(f"{st.analytic_rate:.12g}"),
            "empirical_rate": float(f"{st.empirical_rate:.12g}"),
            "stderr": float(f"{st.stderr:.12g}"),
            "fidelity": float(f"{st.fidelity:.12g}"),
            "storage_bound": float(f"{st.storage_bound:.12g}"),
        }
        if paths is not None:
            row["nodes"] = list(paths[st.path_id].nodes)
            row["demand"] = paths[st.path_id].demand_index
        rows.append(row)
    return {"paths": rows}


def report_csv(report: SimulationReport) -> str:
    lines = ["path_id,analytic_rate,empirical_rate,stderr,fidelity,storage_bound"]
    for st in report.per_path:
        lines.append(
            f"{st.path_id},{st.analytic_rate:.12g},{st.empirical_rate:.12g},"
            f"{st.stderr:.12g},{st.fidelity:.12g},{st.storage_bound:.12g}"
        )
    return "\n".join(lines) + "\n"
