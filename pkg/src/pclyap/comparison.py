"""Ordering between analysis graphs via linear combination certificates.

A certificate (C, K_1..K_M) turns any family of node functions feasible
for the premise graph into one feasible for the conclusion graph, by
taking the C-weighted nonnegative combinations.  Existence of such a
certificate is a pure linear feasibility question over the 0/1 edge
selector matrices, decided here in exact rational arithmetic so that a
"none" answer is sound, not a numerical artifact.

The worst-case gadget at the bottom builds, from any positive lambda
table, a rank-one switched system and diagonal quadratics whose values
at the test point reproduce lambda exactly; it turns vector
counterexamples into concrete system counterexamples.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .exactlp import feasible_point
from .graphs import GraphError, LabeledGraph, is_path_complete
from .linalg import QuadraticForm, eval_form
from .lyapunov import Pclf, SwitchingSystem

__all__ = [
    "SelectorPair",
    "ComparisonCertificate",
    "selector_matrices",
    "find_comparison_certificate",
    "verify_comparison_certificate",
    "apply_certificate",
    "lambda_admissible",
    "synthesize_worst_case_vlfc",
    "certificate_to_json",
    "certificate_from_json",
    "save_certificate",
    "load_certificate",
]


@dataclass(frozen=True)
class SelectorPair:
    """Edge-source and edge-destination incidence of one label class.

    Row e marks the source (in s_mat) and destination (in d_mat) of the
    e-th label edge, edges in canonical graph order.  Each row has
    exactly one 1.
    """

    label: int
    s_mat: tuple[tuple[int, ...], ...]
    d_mat: tuple[tuple[int, ...], ...]
    edges: tuple[tuple[str, str, int], ...]


@dataclass(frozen=True)
class ComparisonCertificate:
    """Nonnegative rational (C, K_sigma) with every C row summing to >= 1.

    C has one row per conclusion node and one column per premise node;
    K_sigma has one row per conclusion label edge and one column per
    premise label edge.
    """

    premise: LabeledGraph
    conclusion: LabeledGraph
    c: tuple[tuple[Fraction, ...], ...]
    k: dict[int, tuple[tuple[Fraction, ...], ...]]


def selector_matrices(g: LabeledGraph, label: int) -> SelectorPair:
    if not 1 <= label <= g.num_labels:
        raise GraphError(f"label {label} outside 1..{g.num_labels}")
    idx = g.node_index
    edges = g.edges_with_label(label)
    s_rows = []
    d_rows = []
    for s, d, _ in edges:
        row_s = [0] * len(g.nodes)
        row_d = [0] * len(g.nodes)
        row_s[idx[s]] = 1
        row_d[idx[d]] = 1
        s_rows.append(tuple(row_s))
        d_rows.append(tuple(row_d))
    return SelectorPair(label, tuple(s_rows), tuple(d_rows), edges)


def find_comparison_certificate(
    g: LabeledGraph, g2: LabeledGraph
) -> ComparisonCertificate | None:
    """Search for a certificate carrying feasibility from g to g2.

    Exact rational LP over the entries of C and the K_sigma: C
    nonnegative with row sums >= 1, and per label
    S(g2) C >= K_sigma S(g) and D(g2) C <= K_sigma D(g) entrywise.
    None is a proof that no certificate of this linear form exists.
    """
    if g.num_labels != g2.num_labels:
        raise GraphError("graphs must share the label count")
    n1 = len(g.nodes)
    n2 = len(g2.nodes)
    pairs1 = {lab: selector_matrices(g, lab) for lab in range(1, g.num_labels + 1)}
    pairs2 = {lab: selector_matrices(g2, lab) for lab in range(1, g.num_labels + 1)}

    # variable order: C row-major, then each K_sigma row-major
    def c_var(i: int, j: int) -> int:
        return i * n1 + j

    k_base = {}
    offset = n2 * n1
    for lab in range(1, g.num_labels + 1):
        k_base[lab] = offset
        offset += len(pairs2[lab].edges) * len(pairs1[lab].edges)

    def k_var(lab: int, e2: int, e1: int) -> int:
        return k_base[lab] + e2 * len(pairs1[lab].edges) + e1

    nvars = offset
    zero = Fraction(0)
    rows: list[list[Fraction]] = []
    rhs: list[Fraction] = []

    for i in range(n2):
        row = [zero] * nvars
        for j in range(n1):
            row[c_var(i, j)] = Fraction(1)
        rows.append(row)
        rhs.append(Fraction(1))

    for lab in range(1, g.num_labels + 1):
        sel1 = pairs1[lab]
        sel2 = pairs2[lab]
        for e2 in range(len(sel2.edges)):
            for s in range(n1):
                # (S(g2) C)[e2, s] - (K S(g))[e2, s] >= 0
                row = [zero] * nvars
                for i in range(n2):
                    if sel2.s_mat[e2][i]:
                        row[c_var(i, s)] += Fraction(1)
                for e1 in range(len(sel1.edges)):
                    if sel1.s_mat[e1][s]:
                        row[k_var(lab, e2, e1)] -= Fraction(1)
                rows.append(row)
                rhs.append(zero)
                # (K D(g))[e2, s] - (D(g2) C)[e2, s] >= 0
                row = [zero] * nvars
                for e1 in range(len(sel1.edges)):
                    if sel1.d_mat[e1][s]:
                        row[k_var(lab, e2, e1)] += Fraction(1)
                for i in range(n2):
                    if sel2.d_mat[e2][i]:
                        row[c_var(i, s)] -= Fraction(1)
                rows.append(row)
                rhs.append(zero)

    x = feasible_point(rows, rhs)
    if x is None:
        return None
    c = tuple(
        tuple(x[c_var(i, j)] for j in range(n1)) for i in range(n2)
    )
    k = {
        lab: tuple(
            tuple(x[k_var(lab, e2, e1)] for e1 in range(len(pairs1[lab].edges)))
            for e2 in range(len(pairs2[lab].edges))
        )
        for lab in range(1, g.num_labels + 1)
    }
    cert = ComparisonCertificate(g, g2, c, k)
    if not verify_comparison_certificate(g, g2, cert):
        raise RuntimeError("solver returned a point that fails exact verification")
    return cert


def verify_comparison_certificate(
    g: LabeledGraph, g2: LabeledGraph, cert: ComparisonCertificate
) -> bool:
    """Exact check: nonnegativity, row sums >= 1, and both selector
    inequalities for every label."""
    if g.num_labels != g2.num_labels:
        raise GraphError("graphs must share the label count")
    n1 = len(g.nodes)
    n2 = len(g2.nodes)
    c = cert.c
    if len(c) != n2 or any(len(row) != n1 for row in c):
        raise ValueError(f"C must be {n2}x{n1}")
    if any(entry < 0 for row in c for entry in row):
        return False
    if any(sum(row) < 1 for row in c):
        return False
    for lab in range(1, g.num_labels + 1):
        sel1 = selector_matrices(g, lab)
        sel2 = selector_matrices(g2, lab)
        m2 = len(sel2.edges)
        m1 = len(sel1.edges)
        k = cert.k.get(lab)
        if k is None:
            raise ValueError(f"certificate misses K for label {lab}")
        if len(k) != m2 or any(len(row) != m1 for row in k):
            raise ValueError(f"K for label {lab} must be {m2}x{m1}")
        if any(entry < 0 for row in k for entry in row):
            return False
        for e2 in range(m2):
            for s in range(n1):
                lhs = sum(
                    Fraction(sel2.s_mat[e2][i]) * c[i][s] for i in range(n2)
                )
                rhs_ = sum(
                    k[e2][e1] * Fraction(sel1.s_mat[e1][s]) for e1 in range(m1)
                )
                if lhs < rhs_:
                    return False
                lhs = sum(
                    k[e2][e1] * Fraction(sel1.d_mat[e1][s]) for e1 in range(m1)
                )
                rhs_ = sum(
                    Fraction(sel2.d_mat[e2][i]) * c[i][s] for i in range(n2)
                )
                if lhs < rhs_:
                    return False
    return True


def apply_certificate(cert: ComparisonCertificate, p: Pclf) -> Pclf:
    """Transport a premise-feasible family to the conclusion graph.

    Each conclusion node gets the C-weighted combination of the premise
    forms.  The certificate is re-verified first; an invalid one is
    refused rather than silently producing junk.
    """
    if p.graph != cert.premise:
        raise ValueError("certificate premise does not match the given graph")
    if not verify_comparison_certificate(cert.premise, cert.conclusion, cert):
        raise ValueError("certificate fails exact verification")
    prem_nodes = cert.premise.nodes
    forms = {}
    for i, node in enumerate(cert.conclusion.nodes):
        acc = sum(
            float(cert.c[i][j]) * p.forms[prem_nodes[j]].matrix
            for j in range(len(prem_nodes))
        )
        forms[node] = QuadraticForm(acc)
    return Pclf(
        cert.conclusion, forms, p.gamma, is_path_complete(cert.conclusion)
    )


def lambda_admissible(g: LabeledGraph, lam: Sequence[Sequence]) -> bool:
    """Exact check of the edge value inequalities for a lambda table.

    lam has rows lam[0..M], one value per node; admissible means
    lam[0][source] >= lam[label][dest] for every edge, i.e. the
    synthesized worst-case family satisfies every edge inequality.
    """
    table = [[Fraction(v) for v in row] for row in lam]
    if len(table) != g.num_labels + 1:
        raise ValueError(f"need {g.num_labels + 1} rows, got {len(table)}")
    idx = g.node_index
    return all(
        table[0][idx[s]] >= table[lab][idx[d]] for s, d, lab in g.edges
    )


def synthesize_worst_case_vlfc(
    lam: Sequence[Sequence],
) -> tuple[np.ndarray, SwitchingSystem, tuple[QuadraticForm, ...]]:
    """Build the extremal system hitting a prescribed value table.

    lam is rows lam[0..M], each of length N, strictly positive.
    Returns a point u, M rank-one modes T_sigma of dimension M+1, and N
    diagonal forms U_k with, exactly, U_k(u) = lam[0][k] and
    U_k(T_sigma u) = lam[sigma][k].
    """
    table = [[float(v) for v in row] for row in lam]
    if len(table) < 2:
        raise ValueError("need rows for the base point and at least one label")
    width = len(table[0])
    if width < 1 or any(len(row) != width for row in table):
        raise ValueError("lambda rows must be nonempty and equal length")
    if any(v <= 0 for row in table for v in row):
        raise ValueError("lambda must be strictly positive")
    num_labels = len(table) - 1
    dim = num_labels + 1

    u = np.zeros(dim)
    u[0] = 1.0
    modes = []
    for sig in range(1, num_labels + 1):
        t = np.zeros((dim, dim))
        t[sig, 0] = 1.0
        modes.append(t)
    system = SwitchingSystem(tuple(modes))
    forms = tuple(
        QuadraticForm(np.diag([table[i][k] for i in range(dim)]))
        for k in range(width)
    )
    for k in range(width):
        if eval_form(forms[k], u) != table[0][k]:
            raise RuntimeError("construction broke the base-point identity")
        for sig in range(1, num_labels + 1):
            if eval_form(forms[k], modes[sig - 1] @ u) != table[sig][k]:
                raise RuntimeError("construction broke the step identity")
    return u, system, forms


# ---------------------------------------------------------------------------
# certificate files


def _frac_str(v: Fraction) -> str:
    return f"{v.numerator}/{v.denominator}"


def certificate_to_json(cert: ComparisonCertificate) -> dict:
    return {
        "C": [[_frac_str(v) for v in row] for row in cert.c],
        "K": {
            str(lab): [[_frac_str(v) for v in row] for row in cert.k[lab]]
            for lab in sorted(cert.k)
        },
    }


def certificate_from_json(
    data: dict, premise: LabeledGraph, conclusion: LabeledGraph
) -> ComparisonCertificate:
    c = tuple(tuple(Fraction(v) for v in row) for row in data["C"])
    k = {
        int(lab): tuple(tuple(Fraction(v) for v in row) for row in rows)
        for lab, rows in data["K"].items()
    }
    return ComparisonCertificate(premise, conclusion, c, k)


def save_certificate(path, cert: ComparisonCertificate) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(certificate_to_json(cert), fh, indent=1)
        fh.write("\n")


def load_certificate(
    path, premise: LabeledGraph, conclusion: LabeledGraph
) -> ComparisonCertificate:
    with open(path, "r", encoding="utf-8") as fh:
        return certificate_from_json(json.load(fh), premise, conclusion)
