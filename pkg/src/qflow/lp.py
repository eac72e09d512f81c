"""Minimal linear-program container, a HiGHS-backed solver, and a CPLEX-style
LP text exporter for cross-checking against external solvers.

All variables are nonnegative and the objective is maximized; that covers both
flow formulations used here. The solver contract (feasibility within tol_feas,
objective within tol_obj, deterministic for identical input) is enforced by
the test suite rather than trusted blindly.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import linprog
from scipy.sparse import csr_matrix

LEQ = "<="
EQ = "="


class LpError(ValueError):
    pass


@dataclass
class Constraint:
    coeffs: dict[int, float]   # variable index -> coefficient
    relation: str              # LEQ or EQ
    rhs: float


@dataclass
class LinearProgram:
    """max c.x  s.t.  rows, x >= 0."""

    variables: list[str] = field(default_factory=list)
    objective: dict[int, float] = field(default_factory=dict)
    constraints: list[Constraint] = field(default_factory=list)

    def add_variable(self, name: str) -> int:
        self.variables.append(name)
        return len(self.variables) - 1

    def add_constraint(self, coeffs: dict[int, float], relation: str, rhs: float) -> None:
        if relation not in (LEQ, EQ):
            raise LpError(f"unsupported relation {relation!r}")
        self.constraints.append(Constraint(dict(coeffs), relation, float(rhs)))

    def check_well_formed(self) -> None:
        n = len(self.variables)
        for idx in self.objective:
            if not 0 <= idx < n:
                raise LpError(f"objective references undeclared variable index {idx}")
        for c, row in enumerate(self.constraints):
            if not np.isfinite(row.rhs):
                raise LpError(f"constraint {c} has non-finite rhs {row.rhs}")
            for idx in row.coeffs:
                if not 0 <= idx < n:
                    raise LpError(f"constraint {c} references undeclared variable index {idx}")


@dataclass
class LpSolution:
    status: str                      # "optimal" | "infeasible" | "unbounded"
    objective_value: float
    values: np.ndarray               # per-variable, index-aligned with lp.variables
    dual_ub: np.ndarray | None = None
    dual_eq: np.ndarray | None = None

    @property
    def assignment(self) -> dict[str, float]:
        return dict(zip(self._names, self.values))

    _names: list[str] = field(default_factory=list, repr=False)


def _split_rows(lp: LinearProgram):
    ub = [c for c in lp.constraints if c.relation == LEQ]
    eq = [c for c in lp.constraints if c.relation == EQ]
    return ub, eq


def _sparse(rows: list[Constraint], n: int) -> csr_matrix:
    data, ri, ci = [], [], []
    for r, row in enumerate(rows):
        for idx, coef in row.coeffs.items():
            ri.append(r)
            ci.append(idx)
            data.append(coef)
    return csr_matrix((data, (ri, ci)), shape=(len(rows), n))


def solve_lp(lp: LinearProgram) -> LpSolution:
    """Solve with scipy's HiGHS backend; deterministic for identical input."""
    lp.check_well_formed()
    n = len(lp.variables)
    if n == 0:
        return LpSolution("optimal", 0.0, np.zeros(0), _names=[])
    c = np.zeros(n)
    for idx, coef in lp.objective.items():
        c[idx] = -coef  # linprog minimizes
    ub, eq = _split_rows(lp)
    kwargs = {}
    if ub:
        kwargs["A_ub"] = _sparse(ub, n)
        kwargs["b_ub"] = np.array([r.rhs for r in ub])
    if eq:
        kwargs["A_eq"] = _sparse(eq, n)
        kwargs["b_eq"] = np.array([r.rhs for r in eq])
    res = linprog(c, bounds=(0, None), method="highs", **kwargs)
    if res.status == 2:
        return LpSolution("infeasible", float("nan"), np.zeros(n), _names=list(lp.variables))
    if res.status == 3:
        return LpSolution("unbounded", float("inf"), np.zeros(n), _names=list(lp.variables))
    if res.status != 0:
        raise LpError(f"solver failure: {res.message}")
    return LpSolution(
        "optimal",
        -float(res.fun),
        np.maximum(res.x, 0.0),
        dual_ub=np.asarray(res.ineqlin.marginals) if ub else None,
        dual_eq=np.asarray(res.eqlin.marginals) if eq else None,
        _names=list(lp.variables),
    )


def dual_bound(lp: LinearProgram, sol: LpSolution) -> float:
    """Objective bound from the solver's dual multipliers.

    For a maximization with x >= 0 the dual bound is -(b_ub . y_ub + b_eq . y_eq)
    in linprog's sign convention; it must match the primal optimum up to tol_obj.
    """
    if sol.status != "optimal":
        raise LpError("dual bound requires an optimal solution")
    ub, eq = _split_rows(lp)
    bound = 0.0
    if ub:
        bound += float(np.dot([r.rhs for r in ub], sol.dual_ub))
    if eq:
        bound += float(np.dot([r.rhs for r in eq], sol.dual_eq))
    return -bound


_NAME_RE = re.compile(r"[^A-Za-z0-9_]")


def _mangle_names(names: list[str]) -> list[str]:
    """Make variable names LP-format safe and unique (documented mangling:
    non-alphanumerics become '_', leading digit gets 'x' prefix, duplicates get
    positional suffixes)."""
    out, seen = [], set()
    for i, name in enumerate(names):
        safe = _NAME_RE.sub("_", name) or "v"
        if safe[0].isdigit():
            safe = "x" + safe
        if safe in seen:
            safe = f"{safe}__{i}"
        seen.add(safe)
        out.append(safe)
    return out


def _terms(coeffs: dict[int, float], names: list[str]) -> str:
    parts = []
    for idx in sorted(coeffs):
        coef = coeffs[idx]
        if coef == 0:
            continue
        sign = "-" if coef < 0 else "+"
        parts.append(f"{sign} {abs(coef):.12g} {names[idx]}")
    if not parts:
        return "0 " + (names[0] if names else "x")
    text = " ".join(parts)
    return text[2:] if text.startswith("+ ") else text


def export_lp_text(lp: LinearProgram) -> str:
    """Emit the LP in CPLEX-style text format (Maximize / Subject To / Bounds / End).

    Section order and name mangling are fixed so output is reproducible."""
    lp.check_well_formed()
    names = _mangle_names(lp.variables)
    lines = ["Maximize", f" obj: {_terms(lp.objective, names)}", "Subject To"]
    for i, row in enumerate(lp.constraints):
        op = "<=" if row.relation == LEQ else "="
        lines.append(f" c{i}: {_terms(row.coeffs, names)} {op} {row.rhs:.12g}")
    lines.append("Bounds")
    for name in names:
        lines.append(f" 0 <= {name}")
    lines.append("End")
    return "\n".join(lines) + "\n"
