"""Shared graph and system definitions for the test suite.

These mirror the bundled corpus entries; one test asserts the shipped
files parse to exactly these values.
"""

import numpy as np

from pclyap.graphs import LabeledGraph
from pclyap.lyapunov import SwitchingSystem


def graph_g0(labels: int = 2) -> LabeledGraph:
    return LabeledGraph(
        labels, ("a",), tuple(("a", "a", lab) for lab in range(1, labels + 1))
    )


def graph_g1() -> LabeledGraph:
    return LabeledGraph(
        2,
        ("a", "b"),
        (("a", "a", 1), ("a", "b", 1), ("b", "a", 2), ("b", "b", 2)),
    )


def graph_g1_minus_bb2() -> LabeledGraph:
    return graph_g1().without_edge("b", "b", 2)


def graph_g2() -> LabeledGraph:
    return LabeledGraph(
        2,
        ("a", "b", "c"),
        (
            ("a", "b", 1),
            ("a", "c", 1),
            ("b", "a", 1),
            ("a", "b", 2),
            ("a", "c", 2),
            ("c", "a", 2),
        ),
    )


TRI2_RAW = (
    np.array([[1.3, 0.0], [1.0, 0.3]]),
    np.array([[-0.3, 1.0], [0.0, -1.3]]),
)
TRI3_RAW = (
    np.array([[0.3, 1.0, 0.0], [0.0, 0.6, 1.0], [0.0, 0.0, 0.7]]),
    np.array([[0.3, 0.0, 0.0], [-0.5, 0.7, 0.0], [-0.2, -0.5, 0.7]]),
)
DENSE2_RAW = (
    np.array([[-0.5, -1.1], [0.9, 1.5]]),
    np.array([[0.2, 1.0], [0.5, 0.5]]),
)
ROT2_RAW = (
    np.array([[0.0, -0.2], [0.8, 0.0]]),
    np.array([[0.25, 0.4], [0.1, 0.3]]),
)


def system_tri2() -> SwitchingSystem:
    return SwitchingSystem(tuple(a / 1.4 for a in TRI2_RAW))


def system_tri3(scale: float = 1.0) -> SwitchingSystem:
    return SwitchingSystem(tuple(a * scale for a in TRI3_RAW))


def system_dense2() -> SwitchingSystem:
    return SwitchingSystem(tuple(a / 1.05 for a in DENSE2_RAW))


def system_rot2() -> SwitchingSystem:
    return SwitchingSystem(tuple(a / 0.55 for a in ROT2_RAW))


# the two quadratics known to satisfy every g1 edge inequality on tri2
def known_g1_forms():
    return {
        "a": np.diag([5.0, 1.0]),
        "b": np.diag([1.0, 5.0]),
    }


# acceptance tests append their verdict lines here; echoed after the run
# because capture hides stdout of passing tests
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for line in ACCEPTANCE_LINES:
        terminalreporter.write_line(line)
