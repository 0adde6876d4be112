"""Lyapunov analysis of switched linear systems on labeled graphs.

Given x(t+1) = A_{sigma(t)} x(t) with modes picked from a finite set,
a graph whose every label word is realizable as a path turns the edge
inequalities V_dest(A_sigma x) <= V_source(x) into a stability
certificate.  This module searches for such certificates, bisects the
smallest feasible decay rate, builds the induced min-max common
Lyapunov function through the observer graph, and checks monotonicity
along simulated trajectories.
"""

from __future__ import annotations

import csv
import json
import warnings
from dataclasses import dataclass, field

import numpy as np

from . import sdp
from .graphs import GraphError, LabeledGraph, build_observer, is_path_complete
from .linalg import (
    QuadraticForm,
    eval_form,
    load_matrix_set,
    square_matrix,
    symmetric_eigenvalues,
)
from .sdp import LmiCertificate, LmiConstraint, LmiProblem, NotFound, VerificationReport

__all__ = [
    "SwitchingSystem",
    "Pclf",
    "MinMaxClf",
    "Trajectory",
    "GammaInterval",
    "NotPathCompleteWarning",
    "spectral_radius",
    "build_lmi_problem",
    "find_pclf",
    "verify_pclf",
    "gamma_bisect",
    "extract_clf",
    "eval_clf",
    "simulate",
    "check_monotone_decrease",
    "min_max_step_check",
    "save_pclf",
    "load_pclf",
    "write_trajectory_csv",
]


class NotPathCompleteWarning(UserWarning):
    """Feasibility was computed on a graph that certifies nothing."""


@dataclass(frozen=True)
class SwitchingSystem:
    """Modes A_1..A_M of x(t+1) = A_{sigma(t)} x(t)."""

    matrices: tuple[np.ndarray, ...]

    def __post_init__(self):
        mats = tuple(square_matrix(a) for a in self.matrices)
        if not mats:
            raise ValueError("system needs at least one mode")
        if any(a.shape[0] != mats[0].shape[0] for a in mats):
            raise ValueError("modes disagree on dimension")
        for a in mats:
            a.setflags(write=False)
        object.__setattr__(self, "matrices", mats)

    @property
    def dim(self) -> int:
        return self.matrices[0].shape[0]

    @property
    def num_modes(self) -> int:
        return len(self.matrices)

    def mode(self, label: int) -> np.ndarray:
        if not 1 <= label <= self.num_modes:
            raise ValueError(f"label {label} outside 1..{self.num_modes}")
        return self.matrices[label - 1]

    def scaled(self, factor: float) -> "SwitchingSystem":
        return SwitchingSystem(tuple(factor * a for a in self.matrices))

    @classmethod
    def from_file(cls, path) -> "SwitchingSystem":
        return cls(tuple(load_matrix_set(path)))


@dataclass(frozen=True)
class Pclf:
    """One positive definite quadratic per graph node, feasible for the
    edge inequalities at the stored rate.  certifies_stability records
    whether the graph was path-complete when the object was built."""

    graph: LabeledGraph
    forms: dict[str, QuadraticForm]
    gamma: float = 1.0
    certifies_stability: bool = True

    def __post_init__(self):
        missing = [s for s in self.graph.nodes if s not in self.forms]
        if missing:
            raise ValueError(f"missing forms for nodes {missing}")
        for s in self.graph.nodes:
            if symmetric_eigenvalues(self.forms[s])[0] <= 0:
                raise ValueError(f"form for node {s!r} is not positive definite")


@dataclass(frozen=True)
class MinMaxClf:
    """min over observer subsets of max over subset members."""

    subsets: tuple[tuple[str, ...], ...]
    forms: dict[str, QuadraticForm]

    def __post_init__(self):
        if not self.subsets:
            raise ValueError("need at least one subset")
        members = {s for subset in self.subsets for s in subset}
        if any(not subset for subset in self.subsets):
            raise ValueError("subsets must be nonempty")
        if not members <= set(self.forms):
            raise ValueError("subsets reference nodes without forms")
        if not members <= set(self.subsets[0]):
            raise ValueError("first subset must contain every referenced node")


@dataclass(frozen=True)
class Trajectory:
    x0: np.ndarray
    word: tuple[int, ...]
    states: np.ndarray  # shape (len(word) + 1, dim)


@dataclass(frozen=True)
class GammaInterval:
    lo: float
    hi: float
    certificate: LmiCertificate

    @property
    def width(self) -> float:
        return self.hi - self.lo


def spectral_radius(a) -> float:
    return float(np.max(np.abs(np.linalg.eigvals(square_matrix(a)))))


def build_lmi_problem(
    g: LabeledGraph, sys: SwitchingSystem, gamma: float = 1.0
) -> LmiProblem:
    """One constraint A_sigma' Q_dest A_sigma <= gamma^2 Q_source per edge."""
    if g.num_labels != sys.num_modes:
        raise ValueError(
            f"graph has {g.num_labels} labels, system has {sys.num_modes} modes"
        )
    cons = tuple(
        LmiConstraint(s, d, sys.mode(lab), gamma) for s, d, lab in g.edges
    )
    return LmiProblem(sys.dim, g.nodes, cons)


def find_pclf(
    g: LabeledGraph,
    sys: SwitchingSystem,
    gamma: float = 1.0,
    tol: float = sdp.DEFAULT_TOL,
    max_iters: int = sdp.DEFAULT_MAX_ITERS,
) -> Pclf | NotFound:
    """Search for node forms satisfying every edge inequality at rate gamma.

    Warns if the graph is not path-complete: the inequalities are still
    well defined, but feasibility then certifies nothing about
    stability, and the returned object is tagged accordingly.
    """
    certifies = is_path_complete(g)
    if not certifies:
        warnings.warn(
            "graph is not path-complete; a feasible point is not a "
            "stability certificate",
            NotPathCompleteWarning,
            stacklevel=2,
        )
    problem = build_lmi_problem(g, sys, gamma)
    result = sdp.solve_feasibility(problem, tol=tol, max_iters=max_iters)
    if isinstance(result, NotFound):
        return result
    pclf = Pclf(g, result.forms, gamma, certifies)
    report = verify_pclf(pclf, sys, tol=tol)
    if not report.ok:
        return NotFound(0, report.residual, f"re-verification failed: {report.worst}")
    return pclf


def verify_pclf(
    p: Pclf, sys: SwitchingSystem, tol: float = 1e-8
) -> VerificationReport:
    """Independent eigenvalue check of all edge inequalities at p.gamma."""
    problem = build_lmi_problem(p.graph, sys, p.gamma)
    return sdp.verify_certificate(problem, p.forms, tol)


def gamma_bisect(
    g: LabeledGraph,
    sys: SwitchingSystem,
    tol: float = 1e-4,
    solve_tol: float = sdp.DEFAULT_TOL,
    max_iters: int = sdp.DEFAULT_MAX_ITERS,
) -> GammaInterval:
    """Bracket the smallest feasible rate for the edge inequalities.

    hi always carries a verified certificate.  lo is heuristic: the
    solver found no certificate there within budget.  Stops when
    hi - lo <= tol * hi (or hi collapses below 1e-12 for nilpotent-like
    systems).  The initial upper bound max ||A_sigma||_2 + 1 is grown
    geometrically in the unlikely case the solver misses it.
    """
    if not tol > 0:
        raise ValueError("tol must be positive")

    def attempt(rate: float):
        problem = build_lmi_problem(g, sys, rate)
        return sdp.solve_feasibility(problem, tol=solve_tol, max_iters=max_iters)

    hi = max(float(np.linalg.norm(a, 2)) for a in sys.matrices) + 1.0
    cert = attempt(hi)
    grow = 0
    while isinstance(cert, NotFound):
        grow += 1
        if grow > 60:
            raise RuntimeError("no feasible upper bound found; solver kept failing")
        hi *= 2.0
        cert = attempt(hi)

    lo = 0.0
    for _ in range(200):
        if hi - lo <= tol * hi or hi < 1e-12:
            break
        mid = 0.5 * (lo + hi)
        result = attempt(mid)
        if isinstance(result, NotFound):
            lo = mid
        else:
            hi = mid
            cert = result
    return GammaInterval(lo, hi, cert)


def extract_clf(p: Pclf, prune_supersets: bool = False) -> MinMaxClf:
    """Common Lyapunov function induced by a path-complete certificate.

    The candidate subsets are the observer nodes in discovery order
    (the full node set first).  With prune_supersets, later subsets that
    strictly contain another candidate are dropped; their max can never
    strictly win the min, so the evaluated function is unchanged.  The
    leading full set is always kept.
    """
    if not is_path_complete(p.graph):
        raise GraphError("graph is not path-complete; no induced CLF")
    obs = build_observer(p.graph)
    subsets = obs.nodes
    if prune_supersets:
        sets = [set(s) for s in subsets]
        keep = [
            subsets[i]
            for i in range(len(subsets))
            if i == 0 or not any(j != i and sets[j] < sets[i] for j in range(len(sets)))
        ]
        subsets = tuple(keep)
    return MinMaxClf(tuple(subsets), dict(p.forms))


def eval_clf(c: MinMaxClf, x) -> float:
    v = np.asarray(x, dtype=float).reshape(-1)
    return min(
        max(eval_form(c.forms[s], v) for s in subset) for subset in c.subsets
    )


def simulate(sys: SwitchingSystem, word, x0) -> Trajectory:
    """Iterate the system along a label word."""
    labels = tuple(int(w) for w in word)
    x = np.asarray(x0, dtype=float).reshape(-1)
    if x.shape[0] != sys.dim:
        raise ValueError(f"x0 length {x.shape[0]} != system dim {sys.dim}")
    states = [x]
    for lab in labels:
        states.append(sys.mode(lab) @ states[-1])
    return Trajectory(x, labels, np.vstack(states))


def check_monotone_decrease(
    c: MinMaxClf, t: Trajectory, slack: float | None = None
) -> tuple[bool, int | None]:
    """Is the CLF non-increasing along the trajectory?

    slack None uses 1e-9 times the current value at each step, absorbing
    the float drift of near-tight certificates.  Returns (ok, index of
    the first violating step or None).
    """
    values = [eval_clf(c, x) for x in t.states]
    for i in range(len(values) - 1):
        allowed = slack if slack is not None else 1e-9 * values[i]
        if values[i + 1] > values[i] + allowed:
            return False, i
    return True, None


def min_max_step_check(
    p: Pclf,
    sys: SwitchingSystem,
    source_set,
    dest_set,
    label: int,
    samples: int = 1000,
    seed: int = 0,
) -> bool:
    """Sampled check of the one-step min/max inequalities between node sets.

    If every source node has a label edge into the destination set, the
    min inequality min_{d} V_d(A x) <= min_{s} V_s(x) is tested; if
    every destination node has a label edge from the source set, the
    max inequality is tested.  At least one pattern must hold, else the
    comparison is meaningless and a GraphError is raised.  A sampling
    helper for property tests, not a proof.
    """
    g = p.graph
    src = tuple(source_set)
    dst = tuple(dest_set)
    if not src or not dst:
        raise GraphError("node sets must be nonempty")
    left_total = all(
        any(d in dst for d in g.successors(s, label)) for s in src
    )
    right_total = all(
        any(s in src for s in g.predecessors(d, label)) for d in dst
    )
    if not (left_total or right_total):
        raise GraphError(
            "neither edge pattern holds between the given sets for this label"
        )
    a = sys.mode(label)
    rng = np.random.default_rng(seed)
    for _ in range(samples):
        x = rng.standard_normal(sys.dim)
        ax = a @ x
        if left_total:
            before = min(eval_form(p.forms[s], x) for s in src)
            after = min(eval_form(p.forms[d], ax) for d in dst)
            if after > p.gamma**2 * before + 1e-9 * max(before, 1.0):
                return False
        if right_total:
            before = max(eval_form(p.forms[s], x) for s in src)
            after = max(eval_form(p.forms[d], ax) for d in dst)
            if after > p.gamma**2 * before + 1e-9 * max(before, 1.0):
                return False
    return True


# ---------------------------------------------------------------------------
# files


def save_pclf(path, p: Pclf) -> None:
    data = {
        "dim": p.forms[p.graph.nodes[0]].dim,
        "gamma": p.gamma,
        "certifies_stability": p.certifies_stability,
        "forms": {s: p.forms[s].matrix.tolist() for s in p.graph.nodes},
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(data, fh, indent=1)
        fh.write("\n")


def load_pclf(path, graph: LabeledGraph) -> Pclf:
    with open(path, "r", encoding="utf-8") as fh:
        data = json.load(fh)
    forms = {s: QuadraticForm(m) for s, m in data["forms"].items()}
    missing = [s for s in graph.nodes if s not in forms]
    if missing:
        raise ValueError(f"certificate file misses nodes {missing}")
    return Pclf(
        graph,
        forms,
        float(data.get("gamma", 1.0)),
        bool(data.get("certifies_stability", True)),
    )


def write_trajectory_csv(target, t: Trajectory, c: MinMaxClf, nodes) -> None:
    """Rows: step, label applied at that step, state, per-node values,
    min-max value.  The final row has no label."""

    def emit(fh):
        writer = csv.writer(fh)
        dim = t.states.shape[1]
        header = (
            ["t", "sigma"]
            + [f"x{i + 1}" for i in range(dim)]
            + [f"V_{s}" for s in nodes]
            + ["V_star"]
        )
        writer.writerow(header)
        for step, x in enumerate(t.states):
            lab = t.word[step] if step < len(t.word) else ""
            row = [step, lab]
            row += [repr(float(v)) for v in x]
            row += [repr(eval_form(c.forms[s], x)) for s in nodes]
            row.append(repr(eval_clf(c, x)))
            writer.writerow(row)

    if hasattr(target, "write"):
        emit(target)
    else:
        with open(target, "w", newline="", encoding="utf-8") as fh:
            emit(fh)
