"""Central numeric tolerances shared by the LP solver, feasibility checks and
path extraction. All CLI flags that override tolerances funnel into one of
these fields."""

from dataclasses import dataclass


@dataclass(frozen=True)
class Tolerances:
    tol_feas: float = 1e-7   # absolute per-constraint feasibility slack
    tol_obj: float = 1e-7    # relative objective tolerance, scaled by 1+|obj|
    eps: float = 1e-9        # extraction epsilon: residuals <= eps count as zero

    def obj_tol_for(self, objective: float) -> float:
        return self.tol_obj * (1.0 + abs(objective))


DEFAULT_TOLERANCES = Tolerances()
