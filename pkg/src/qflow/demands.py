"""Demand sets and the fidelity-to-length reduction.

A raw demand carries either a target end-to-end fidelity or an explicit
maximum path length. Reduction converts fidelity targets into hop bounds l_i
(capped at |V| - 1) and flags demands whose target exceeds the elementary
fidelity as infeasible; those are excluded from the optimization and reported
with rate 0.
"""

from __future__ import annotations

from dataclasses import dataclass

from .fidelity import UNBOUNDED, length_bound
from .topology import NetworkGraph


class DemandError(ValueError):
    pass


@dataclass(frozen=True)
class Demand:
    source: str
    destination: str
    length_bound: int
    target_fidelity: float | None = None
    infeasible: bool = False


@dataclass(frozen=True)
class DemandSet:
    demands: tuple[Demand, ...]

    @property
    def k(self) -> int:
        return len(self.demands)

    @property
    def feasible(self) -> tuple[Demand, ...]:
        return tuple(d for d in self.demands if not d.infeasible)

    @property
    def l_max(self) -> int:
        bounds = [d.length_bound for d in self.demands if not d.infeasible]
        return max(bounds, default=0)


def parse_demand_document(document: list[dict]) -> list[tuple]:
    """Turn the JSON demand document into raw (source, destination, spec) triples.

    ``spec`` is ("fidelity", value) or ("length", value); exactly one of the
    two keys must be present per entry.
    """
    raw = []
    for entry in document:
        try:
            s, e = str(entry["source"]), str(entry["destination"])
        except (KeyError, TypeError) as exc:
            raise DemandError(f"malformed demand entry {entry!r}") from exc
        has_f = "target_fidelity" in entry
        has_l = "max_length" in entry
        if has_f == has_l:
            raise DemandError(
                f"demand {entry!r} must carry exactly one of target_fidelity / max_length"
            )
        if has_f:
            raw.append((s, e, ("fidelity", float(entry["target_fidelity"]))))
        else:
            raw.append((s, e, ("length", int(entry["max_length"]))))
    return raw


def reduce_demands(raw: list[tuple], g: NetworkGraph) -> DemandSet:
    """Reduce raw demands against graph g. Order-preserving and deterministic;
    duplicate (s, e) pairs stay distinct commodities."""
    cap = max(len(g.nodes) - 1, 1)
    out = []
    for s, e, (kind, value) in raw:
        if s not in g.nodes:
            raise DemandError(f"unknown demand endpoint {s!r}")
        if e not in g.nodes:
            raise DemandError(f"unknown demand endpoint {e!r}")
        if s == e:
            raise DemandError(f"demand source and destination coincide: {s!r}")
        if kind == "length":
            if value < 1:
                raise DemandError(f"demand length bound must be >= 1, got {value}")
            out.append(Demand(s, e, min(value, cap)))
            continue
        f_target = value
        if f_target > g.elementary_fidelity:
            # No distillation in this model: unreachable target, rate 0.
            out.append(Demand(s, e, 0, target_fidelity=f_target, infeasible=True))
            continue
        bound = length_bound(f_target, g.elementary_fidelity)
        if bound is UNBOUNDED:
            bound = cap
        if bound < 1:
            out.append(Demand(s, e, 0, target_fidelity=f_target, infeasible=True))
        else:
            out.append(Demand(s, e, min(bound, cap), target_fidelity=f_target))
    return DemandSet(tuple(out))
