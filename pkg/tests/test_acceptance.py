"""Acceptance gate: ten numbered end-to-end criteria.

Each test records one machine-greppable line

    criterion NN: PASS|FAIL <detail>

before asserting; the lines are echoed in an "acceptance criteria"
section at the end of the pytest run, so any run that includes this
file doubles as the sign-off checklist.  Tolerances and runtime
budgets are pinned in the assertions themselves.
"""

import sys
import time
from fractions import Fraction

import numpy as np

from pclyap.comparison import (
    ComparisonCertificate,
    apply_certificate,
    find_comparison_certificate,
    lambda_admissible,
    selector_matrices,
    synthesize_worst_case_vlfc,
    verify_comparison_certificate,
)
from pclyap.graphs import (
    LabeledGraph,
    brute_force_path_complete,
    enumerate_co_complete_graphs,
    is_path_complete,
)
from pclyap.linalg import QuadraticForm, eval_form
from pclyap.lyapunov import (
    Pclf,
    SwitchingSystem,
    check_monotone_decrease,
    extract_clf,
    find_pclf,
    gamma_bisect,
    simulate,
    spectral_radius,
    verify_pclf,
)
from pclyap.sdp import NotFound
from conftest import (
    ACCEPTANCE_LINES,
    graph_g0,
    graph_g1,
    graph_g1_minus_bb2,
    graph_g2,
    known_g1_forms,
    system_dense2,
    system_rot2,
    system_tri2,
    system_tri3,
)

F = Fraction


def _record(num: int, ok: bool, detail: str) -> None:
    line = f"criterion {num:02d}: {'PASS' if ok else 'FAIL'} {detail}"
    print(line)
    print(line, file=sys.stderr)
    ACCEPTANCE_LINES.append(line)
    assert ok, line


def test_criterion_01_known_forms_verify():
    start = time.monotonic()
    forms = {k: QuadraticForm(v) for k, v in known_g1_forms().items()}
    p = Pclf(graph_g1(), forms)
    report = verify_pclf(p, system_tri2(), tol=1e-6)
    elapsed = time.monotonic() - start
    _record(
        1,
        report.ok and elapsed < 1.0,
        f"residual {report.residual:.6g}, {elapsed:.3f}s",
    )


def test_criterion_02_no_common_quadratic():
    start = time.monotonic()
    result = find_pclf(graph_g0(), system_tri2(), gamma=1.0)
    interval = gamma_bisect(graph_g0(), system_tri2())
    elapsed = time.monotonic() - start
    ok = (
        isinstance(result, NotFound)
        and interval.lo > 1.0 - 1e-3
        and elapsed < 30.0
    )
    _record(
        2,
        ok,
        f"single-node search {'failed as required' if not result else 'found'}, "
        f"rate interval [{interval.lo:.6g}, {interval.hi:.6g}], {elapsed:.1f}s",
    )


def test_criterion_03_cycle_feasibility_near_critical_pair():
    start = time.monotonic()
    result = find_pclf(graph_g1(), system_dense2(), gamma=1.0)
    elapsed = time.monotonic() - start
    if isinstance(result, NotFound):
        _record(
            3,
            False,
            f"no certificate at rate 1 (best residual {result.residual:.6g}, "
            f"{elapsed:.2f}s); the self-loop forces the rate above the second "
            f"mode's spectral radius {spectral_radius(system_dense2().mode(2)):.6f}",
        )
    report = verify_pclf(result, system_dense2(), tol=1e-6)
    _record(3, report.ok and elapsed < 10.0, f"residual {report.residual:.6g}")


def test_criterion_04_sixteen_graph_sweep():
    start = time.monotonic()
    family = enumerate_co_complete_graphs(2, 2)
    count_ok = len(family) == 16
    tri3 = system_tri3(scale=1.0)
    none_found = all(
        isinstance(find_pclf(g, tri3, gamma=1.0), NotFound) for g in family
    )
    halving = SwitchingSystem((0.5 * np.eye(3), 0.4 * np.eye(3)))
    all_found = all(bool(find_pclf(g, halving, gamma=1.0)) for g in family)
    elapsed = time.monotonic() - start
    _record(
        4,
        count_ok and none_found and all_found and elapsed < 300.0,
        f"{len(family)} graphs, triangular pair 0/16, contractive pair 16/16, "
        f"{elapsed:.1f}s",
    )


def test_criterion_05_selector_fixtures():
    start = time.monotonic()
    g1, g2 = graph_g1(), graph_g2()
    expected = {
        (1, "s1"): ((1, 0), (1, 0)),
        (1, "d1"): ((1, 0), (0, 1)),
        (1, "s2"): ((0, 1), (0, 1)),
        (1, "d2"): ((1, 0), (0, 1)),
        (2, "s1"): ((1, 0, 0), (1, 0, 0), (0, 1, 0)),
        (2, "d1"): ((0, 1, 0), (0, 0, 1), (1, 0, 0)),
        (2, "s2"): ((1, 0, 0), (1, 0, 0), (0, 0, 1)),
        (2, "d2"): ((0, 1, 0), (0, 0, 1), (1, 0, 0)),
    }
    got = {}
    for which, g in ((1, g1), (2, g2)):
        for lab in (1, 2):
            sel = selector_matrices(g, lab)
            got[(which, f"s{lab}")] = sel.s_mat
            got[(which, f"d{lab}")] = sel.d_mat
    matrices_ok = got == expected
    one, zero = F(1), F(0)
    k = ((one, zero, one), (zero, one, one))
    cert = ComparisonCertificate(
        g2, g1, ((one, one, zero), (one, zero, one)), {1: k, 2: k}
    )
    cert_ok = verify_comparison_certificate(g2, g1, cert)
    elapsed = time.monotonic() - start
    _record(
        5,
        matrices_ok and cert_ok and elapsed < 1.0,
        f"8/8 selector matrices exact, known (C, K) verified, {elapsed:.3f}s",
    )


def test_criterion_06_certificate_transport():
    g2, g1 = graph_g2(), graph_g1()
    cert = find_comparison_certificate(g2, g1)
    found = cert is not None and verify_comparison_certificate(g2, g1, cert)
    rng = np.random.default_rng(42)
    transported = 0
    for i in range(50):
        pair = [rng.standard_normal((2, 2)) for _ in range(2)]
        pair = [0.95 * a / np.linalg.norm(a, 2) for a in pair]
        if i % 2:
            # similarity transforms leave graph feasibility unchanged
            t = np.eye(2) + 0.3 * rng.standard_normal((2, 2))
            pair = [t @ a @ np.linalg.inv(t) for a in pair]
        sysm = SwitchingSystem(tuple(pair))
        p = find_pclf(g2, sysm)
        assert p, f"premise search failed on instance {i}"
        out = apply_certificate(cert, p)
        if verify_pclf(out, sysm, tol=1e-8).ok:
            transported += 1
    _record(
        6,
        found and transported == 50,
        f"certificate found, {transported}/50 transported families verified",
    )


def test_criterion_07_single_matrix_rate_tightness():
    g = graph_g0(labels=1)
    rng = np.random.default_rng(11)
    worst = 0.0
    for _ in range(100):
        a = rng.standard_normal((3, 3))
        rho = spectral_radius(a)
        interval = gamma_bisect(g, SwitchingSystem((a,)))
        assert interval.lo - 1e-3 <= rho <= interval.hi + 1e-3, (
            f"interval [{interval.lo}, {interval.hi}] misses radius {rho}"
        )
        worst = max(worst, abs(interval.hi - rho), abs(rho - interval.lo))
    _record(7, True, f"100/100 bracketed, worst gap {worst:.2e}")


def test_criterion_08_path_completeness_oracle():
    rng = np.random.default_rng(7)
    agreements = 0
    positives = 0
    samples = []
    for _ in range(1000):
        n = int(rng.integers(1, 5))
        nodes = tuple("abcd"[:n])
        prob = rng.uniform(0.15, 0.6)
        edges = tuple(
            (s, d, lab)
            for s in nodes
            for d in nodes
            for lab in (1, 2)
            if rng.random() < prob
        )
        samples.append(LabeledGraph(2, nodes, edges))
    samples.append(graph_g1_minus_bb2())
    samples.append(graph_g1())
    for g in samples:
        fast = is_path_complete(g)
        slow = brute_force_path_complete(g, 2 ** len(g.nodes))
        assert fast == slow, f"disagreement on {g}"
        agreements += 1
        positives += fast
    assert not is_path_complete(graph_g1_minus_bb2())
    _record(
        8,
        True,
        f"{agreements} graphs agree ({positives} path-complete), "
        f"dropped-self-loop negative confirmed",
    )


def test_criterion_09_clf_monotonicity():
    fixtures = [
        ("cycle/triangular pair", graph_g1(), system_tri2()),
        ("three-node/triangular pair", graph_g2(), system_tri2()),
        ("single/halving pair", graph_g0(), SwitchingSystem((0.5 * np.eye(2), 0.4 * np.eye(2)))),
        ("cycle/near-critical pair", graph_g1(), system_dense2()),
        ("three-node/near-critical pair", graph_g2(), system_dense2()),
        ("cycle/rotation pair", graph_g1(), system_rot2()),
        ("three-node/rotation pair", graph_g2(), system_rot2()),
    ]
    rng = np.random.default_rng(13)
    checked = []
    skipped = []
    for name, g, sysm in fixtures:
        p = find_pclf(g, sysm)
        if isinstance(p, NotFound):
            skipped.append(name)
            continue
        clf = extract_clf(p)
        for _ in range(100):
            word = tuple(int(v) for v in rng.integers(1, sysm.num_modes + 1, 50))
            x0 = rng.standard_normal(sysm.dim)
            ok, idx = check_monotone_decrease(clf, simulate(sysm, word, x0))
            assert ok, f"{name}: increase at step {idx}"
        checked.append(name)
    _record(
        9,
        bool(checked),
        f"{len(checked)} feasible fixtures x 100 trajectories monotone; "
        f"infeasible skipped: {', '.join(skipped) or 'none'}",
    )


def test_criterion_10_value_table_gadget():
    g = graph_g1()
    rng = np.random.default_rng(29)
    for _ in range(100):
        base = [int(v) / 16.0 for v in rng.integers(1, 65, size=2)]
        table = [base]
        for lab in (1, 2):
            row = []
            for d in g.nodes:
                cap = min(
                    base[g.node_index[s]] for s in g.predecessors(d, lab)
                )
                row.append(cap * int(rng.integers(1, 17)) / 16.0)
            table.append(row)
        assert lambda_admissible(g, table)
        u, modes, forms = synthesize_worst_case_vlfc(table)
        for k in range(2):
            assert eval_form(forms[k], u) == table[0][k]
            for sig in (1, 2):
                assert eval_form(forms[k], modes.mode(sig) @ u) == table[sig][k]
        p = Pclf(g, {"a": forms[0], "b": forms[1]})
        assert verify_pclf(p, modes, tol=1e-12).ok
    _record(10, True, "100/100 tables reproduced exactly and verified")
