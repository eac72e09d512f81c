"""Werner-state arithmetic.

A mixed state with fidelity F to an EPR pair corresponds to a Werner state
with parameter w = (4F - 1) / 3. Werner parameters multiply under noise-free
entanglement swaps, so a path of length n (n - 1 swaps) over elementary pairs
with parameter w ends with fidelity (1 + 3 w^n) / 4. Inverting that relation
gives the maximum usable path length for a target fidelity.
"""

from __future__ import annotations

import math

#: Sentinel returned by length_bound when the elementary pairs are perfect
#: (w = 1): fidelity never decays, so no finite bound applies. Pipelines cap
#: this at |V| - 1 since simple paths cannot be longer.
UNBOUNDED = None

# Log-ratios that are mathematically integers can land just below the integer
# in floating point; snap before flooring.
_INTEGER_SNAP = 1e-9


def _check_fidelity(f: float, name: str = "fidelity") -> None:
    if not 0.5 < f <= 1.0:
        raise ValueError(f"{name} must lie in (0.5, 1], got {f}")


def fidelity_to_werner(f: float) -> float:
    """Werner parameter (4f - 1) / 3 of a state with fidelity f."""
    _check_fidelity(f)
    return (4.0 * f - 1.0) / 3.0


def werner_to_fidelity(w: float) -> float:
    """Fidelity (1 + 3w) / 4 of a Werner state with parameter w."""
    if not 1.0 / 3.0 < w <= 1.0:
        raise ValueError(f"Werner parameter must lie in (1/3, 1], got {w}")
    return (1.0 + 3.0 * w) / 4.0


def swap_compose(w1: float, w2: float) -> float:
    """Werner parameter after a noise-free swap of two Werner pairs: w1 * w2."""
    return w1 * w2


def end_to_end_fidelity(w: float, path_len: int) -> float:
    """Fidelity (1 + 3 w^n) / 4 after connecting n elementary pairs of parameter w."""
    if path_len < 1:
        raise ValueError(f"path length must be >= 1, got {path_len}")
    return (1.0 + 3.0 * w**path_len) / 4.0


def length_bound(f_target: float, f_elem: float) -> int | None:
    """Largest path length whose end-to-end fidelity still meets f_target.

    Returns UNBOUNDED when f_elem = 1. A target above the elementary fidelity
    is infeasible without distillation and raises; callers that prefer to
    report rather than fail should compare the fidelities first.
    """
    _check_fidelity(f_target, "target fidelity")
    _check_fidelity(f_elem, "elementary fidelity")
    if f_target > f_elem:
        raise ValueError(
            f"target fidelity {f_target} exceeds elementary fidelity {f_elem}; "
            "infeasible without distillation"
        )
    if f_elem == 1.0:
        return UNBOUNDED
    ratio = math.log(fidelity_to_werner(f_target)) / math.log(fidelity_to_werner(f_elem))
    nearest = round(ratio)
    if abs(ratio - nearest) <= _INTEGER_SNAP:
        return int(nearest)
    return int(math.floor(ratio))
