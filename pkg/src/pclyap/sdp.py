"""Semidefinite feasibility for systems of Lyapunov-type inequalities.

A problem is a list of constraints A' Q_d A <= rate^2 Q_s over one
symmetric matrix variable per node, normalized by Q_s >= I and
trace(Q_s) <= tau.  Feasibility is decided by maximizing the smallest
slack t with constraints A' Q_d A + t I <= rate^2 Q_s: the sign of the
optimum separates feasible from infeasible instances without relying
on solver infeasibility certificates.

Asymmetry of the outcome, by design: a returned certificate is always
re-verified with independent eigenvalue computations, while NotFound is
a budget-bounded heuristic and never a proof of infeasibility.
"""

from __future__ import annotations

import csv
import warnings
from dataclasses import dataclass, field

import numpy as np

from .linalg import QuadraticForm, square_matrix, symmetric_eigenvalues

__all__ = [
    "DEFAULT_TOL",
    "DEFAULT_MAX_ITERS",
    "default_trace_cap",
    "LmiConstraint",
    "LmiProblem",
    "LmiCertificate",
    "NotFound",
    "VerificationReport",
    "solve_feasibility",
    "verify_certificate",
]

DEFAULT_TOL = 1e-7
DEFAULT_MAX_ITERS = 20000


def default_trace_cap(dim: int) -> float:
    return 1e4 * dim


@dataclass(frozen=True)
class LmiConstraint:
    """One inequality A' Q_dest A <= rate^2 Q_source."""

    source: str
    dest: str
    matrix: np.ndarray
    rate: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "matrix", square_matrix(self.matrix))
        if not self.rate > 0:
            raise ValueError("rate must be positive")


@dataclass(frozen=True)
class LmiProblem:
    dim: int
    nodes: tuple[str, ...]
    constraints: tuple[LmiConstraint, ...]
    trace_cap: float = 0.0  # 0 means the default 1e4 * dim

    def __post_init__(self):
        if self.dim < 1:
            raise ValueError("dim must be >= 1")
        if not self.nodes:
            raise ValueError("problem needs at least one node")
        if len(set(self.nodes)) != len(self.nodes):
            raise ValueError("duplicate node names")
        if self.trace_cap == 0.0:
            object.__setattr__(self, "trace_cap", default_trace_cap(self.dim))
        if self.trace_cap < self.dim:
            raise ValueError("trace cap below dim makes Q >= I infeasible")
        known = set(self.nodes)
        for c in self.constraints:
            if c.source not in known or c.dest not in known:
                raise ValueError(f"constraint references unknown node: {c}")
            if c.matrix.shape[0] != self.dim:
                raise ValueError("constraint matrix dimension mismatch")


@dataclass(frozen=True)
class LmiCertificate:
    """Feasible point.  residual is recomputed here, never quoted from
    the solver; it is the most positive eigenvalue over all constraint
    blocks A' Q_d A - rate^2 Q_s and normalization blocks I - Q_s."""

    forms: dict[str, QuadraticForm]
    residual: float

    def __bool__(self):
        return True


@dataclass(frozen=True)
class NotFound:
    """No certificate within budget.  Heuristic verdict."""

    iterations: int
    residual: float
    reason: str = ""

    def __bool__(self):
        return False


@dataclass(frozen=True)
class VerificationReport:
    ok: bool
    residual: float
    worst: str
    violations: tuple[tuple[str, float], ...] = field(default=())

    def __bool__(self):
        return self.ok


def _certificate_residual(p: LmiProblem, forms: dict[str, QuadraticForm]) -> float:
    eye = np.eye(p.dim)
    worst = -np.inf
    for c in p.constraints:
        block = (
            c.matrix.T @ forms[c.dest].matrix @ c.matrix
            - c.rate**2 * forms[c.source].matrix
        )
        worst = max(worst, symmetric_eigenvalues(QuadraticForm(_sym(block)))[-1])
    for s in p.nodes:
        worst = max(
            worst,
            symmetric_eigenvalues(QuadraticForm(_sym(eye - forms[s].matrix)))[-1],
        )
    return float(worst)


def _sym(a: np.ndarray) -> np.ndarray:
    return (a + a.T) / 2.0


def solve_feasibility(
    p: LmiProblem,
    tol: float = DEFAULT_TOL,
    max_iters: int = DEFAULT_MAX_ITERS,
    diagnostics=None,
) -> LmiCertificate | NotFound:
    """Decide feasibility of the constraint system.

    Returns an LmiCertificate whose recomputed residual is <= tol, or
    NotFound carrying the iteration count and the best residual seen.
    diagnostics, if given, is a path or file object receiving one CSV
    row (iterations, margin, residual, status) per solver invocation.
    """
    import cvxpy as cp

    if not tol > 0:
        raise ValueError("tol must be positive")
    if max_iters < 1:
        raise ValueError("max_iters must be >= 1")

    n = p.dim
    eye = np.eye(n)
    q = {s: cp.Variable((n, n), symmetric=True) for s in p.nodes}
    t = cp.Variable()
    cons = [t <= p.trace_cap]
    for s in p.nodes:
        cons.append(q[s] - eye >> 0)
        cons.append(cp.trace(q[s]) <= p.trace_cap)
    for c in p.constraints:
        cons.append(
            c.rate**2 * q[c.source] - c.matrix.T @ q[c.dest] @ c.matrix - t * eye >> 0
        )
    prob = cp.Problem(cp.Maximize(t), cons)

    status = "error"
    iterations = 0
    failure = ""
    for solver, options in (
        (cp.CLARABEL, {"max_iter": max_iters}),
        (cp.SCS, {"max_iters": max_iters}),
    ):
        try:
            with warnings.catch_warnings():
                # inaccurate solutions are re-verified below, so the
                # solver's own caveat is noise here
                warnings.filterwarnings(
                    "ignore", message="Solution may be inaccurate"
                )
                prob.solve(solver=solver, **options)
        except cp.error.SolverError as exc:
            failure = f"{solver}: {exc}"
            continue
        status = prob.status
        stats = prob.solver_stats
        iterations = int(stats.num_iters or 0) if stats is not None else 0
        if status in (cp.OPTIMAL, cp.OPTIMAL_INACCURATE):
            break
    else:
        if status == "error":
            _emit_diagnostics(diagnostics, iterations, float("nan"), float("inf"), "error")
            return NotFound(0, float("inf"), f"solver error: {failure}")

    if status not in (cp.OPTIMAL, cp.OPTIMAL_INACCURATE):
        _emit_diagnostics(diagnostics, iterations, float("nan"), float("inf"), status)
        return NotFound(iterations, float("inf"), f"solver status {status}")

    margin = float(t.value)
    forms = {s: QuadraticForm(_sym(np.asarray(q[s].value))) for s in p.nodes}
    residual = _certificate_residual(p, forms)
    _emit_diagnostics(diagnostics, iterations, margin, residual, status)
    if residual <= tol and all(
        symmetric_eigenvalues(forms[s])[0] > 0 for s in p.nodes
    ):
        return LmiCertificate(forms, residual)
    return NotFound(iterations, residual, f"best margin {margin:.6g}")


def _emit_diagnostics(target, iterations, margin, residual, status) -> None:
    if target is None:
        return
    row = [iterations, margin, residual, status]
    if hasattr(target, "write"):
        csv.writer(target).writerow(row)
    else:
        with open(target, "a", newline="", encoding="utf-8") as fh:
            csv.writer(fh).writerow(row)


def verify_certificate(
    p: LmiProblem, forms: dict[str, QuadraticForm], tol: float
) -> VerificationReport:
    """Independent eigenvalue check of a candidate certificate.

    Passes iff every constraint's violation eigenvalue is <= tol and
    every form is positive definite.  The normalization Q >= I is not
    required here; certificates may be arbitrarily scaled.
    """
    if tol < 0:
        raise ValueError("tol must be nonnegative")
    missing = [s for s in p.nodes if s not in forms]
    if missing:
        raise ValueError(f"certificate misses nodes {missing}")
    for s in p.nodes:
        if forms[s].dim != p.dim:
            raise ValueError(f"form for node {s!r} has wrong dimension")

    violations = []
    worst_val = -np.inf
    worst_desc = "(no constraints)"
    for c in p.constraints:
        block = (
            c.matrix.T @ forms[c.dest].matrix @ c.matrix
            - c.rate**2 * forms[c.source].matrix
        )
        top = float(symmetric_eigenvalues(QuadraticForm(_sym(block)))[-1])
        desc = f"edge {c.source}->{c.dest}"
        if top > tol:
            violations.append((desc, top))
        if top > worst_val:
            worst_val, worst_desc = top, desc
    for s in p.nodes:
        bottom = float(symmetric_eigenvalues(forms[s])[0])
        if not bottom > 0:
            violations.append((f"form {s} not positive definite", -bottom))
            if -bottom > worst_val:
                worst_val, worst_desc = -bottom, f"form {s}"
    residual = worst_val if np.isfinite(worst_val) else 0.0
    return VerificationReport(not violations, float(residual), worst_desc, tuple(violations))
