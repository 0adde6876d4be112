"""Labeled directed multigraphs over a finite label alphabet.

A graph here is a set of named nodes together with edges (source,
destination, label) where labels run over 1..M.  These graphs encode
which Lyapunov inequalities are imposed between node functions; the
predicates below (completeness, co-completeness, path-completeness)
classify them.  The observer construction determinizes a graph by the
usual subset construction, starting from the full node set.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

__all__ = [
    "GraphError",
    "GraphParseError",
    "LabeledGraph",
    "ObserverGraph",
    "parse_graph",
    "format_graph",
    "load_graph",
    "save_graph",
    "is_complete",
    "is_co_complete",
    "build_observer",
    "is_path_complete",
    "word_realizable",
    "brute_force_path_complete",
    "enumerate_co_complete_graphs",
]

# enumerate_co_complete_graphs refuses instances with more candidate
# graphs than this
ENUMERATION_CAP = 100_000


class GraphError(ValueError):
    """Invalid graph data."""


class GraphParseError(GraphError):
    """Malformed graph text; carries the 1-based line number."""

    def __init__(self, message: str, line_no: int | None = None):
        if line_no is not None:
            message = f"line {line_no}: {message}"
        super().__init__(message)
        self.line_no = line_no


@dataclass(frozen=True)
class LabeledGraph:
    """Immutable labeled multigraph.

    Node order is declaration order.  Edges are canonicalized on
    construction: sorted by source position, then destination position,
    then label.  Duplicate edge triples are rejected.
    """

    num_labels: int
    nodes: tuple[str, ...]
    edges: tuple[tuple[str, str, int], ...]

    def __post_init__(self):
        if self.num_labels < 1:
            raise GraphError("num_labels must be >= 1")
        nodes = tuple(self.nodes)
        if len(set(nodes)) != len(nodes):
            raise GraphError("duplicate node identifiers")
        if not nodes:
            raise GraphError("graph needs at least one node")
        index = {s: i for i, s in enumerate(nodes)}
        edges = []
        for e in self.edges:
            s, d, lab = e
            if s not in index:
                raise GraphError(f"edge source {s!r} is not a declared node")
            if d not in index:
                raise GraphError(f"edge destination {d!r} is not a declared node")
            if not isinstance(lab, int) or not 1 <= lab <= self.num_labels:
                raise GraphError(f"label {lab!r} outside 1..{self.num_labels}")
            edges.append((s, d, lab))
        if len(set(edges)) != len(edges):
            raise GraphError("duplicate edge triple")
        edges.sort(key=lambda e: (index[e[0]], index[e[1]], e[2]))
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "edges", tuple(edges))

    @cached_property
    def node_index(self) -> dict[str, int]:
        return {s: i for i, s in enumerate(self.nodes)}

    @cached_property
    def _succ(self) -> dict[tuple[str, int], tuple[str, ...]]:
        out: dict[tuple[str, int], list[str]] = {}
        for s, d, lab in self.edges:
            out.setdefault((s, lab), []).append(d)
        return {k: tuple(v) for k, v in out.items()}

    @cached_property
    def _pred(self) -> dict[tuple[str, int], tuple[str, ...]]:
        inc: dict[tuple[str, int], list[str]] = {}
        for s, d, lab in self.edges:
            inc.setdefault((d, lab), []).append(s)
        return {k: tuple(v) for k, v in inc.items()}

    def successors(self, node: str, label: int) -> tuple[str, ...]:
        return self._succ.get((node, label), ())

    def predecessors(self, node: str, label: int) -> tuple[str, ...]:
        return self._pred.get((node, label), ())

    def edges_with_label(self, label: int) -> tuple[tuple[str, str, int], ...]:
        if not 1 <= label <= self.num_labels:
            raise GraphError(f"label {label} outside 1..{self.num_labels}")
        return tuple(e for e in self.edges if e[2] == label)

    def without_edge(self, source: str, dest: str, label: int) -> "LabeledGraph":
        """Copy with one edge removed; the edge must exist."""
        target = (source, dest, label)
        if target not in self.edges:
            raise GraphError(f"no edge {target}")
        return LabeledGraph(
            self.num_labels, self.nodes, tuple(e for e in self.edges if e != target)
        )


@dataclass(frozen=True)
class ObserverGraph:
    """Subset-construction graph of a LabeledGraph.

    Nodes are nonempty subsets of the base nodes, stored as tuples in
    base declaration order; the first node is always the full node set.
    Edges follow the union-of-successors rule; empty successor sets are
    never materialized.
    """

    base: LabeledGraph
    nodes: tuple[tuple[str, ...], ...]
    edges: tuple[tuple[tuple[str, ...], tuple[str, ...], int], ...]

    def __post_init__(self):
        if not self.nodes or set(self.nodes[0]) != set(self.base.nodes):
            raise GraphError("first observer node must be the full node set")
        for subset in self.nodes:
            if not subset:
                raise GraphError("observer nodes must be nonempty")

    def successor(self, subset: tuple[str, ...], label: int) -> tuple[str, ...] | None:
        for p, q, lab in self.edges:
            if p == subset and lab == label:
                return q
        return None

    def as_labeled_graph(self) -> LabeledGraph:
        """Rename subsets to '{a,b}' strings to reuse the graph predicates."""
        name = {subset: "{" + ",".join(subset) + "}" for subset in self.nodes}
        return LabeledGraph(
            self.base.num_labels,
            tuple(name[s] for s in self.nodes),
            tuple((name[p], name[q], lab) for p, q, lab in self.edges),
        )


# ---------------------------------------------------------------------------
# text format


def parse_graph(text: str) -> LabeledGraph:
    """Parse the line-oriented graph format.

    Statements: ``labels M``, ``node ID``, ``edge SRC DST LABEL``.
    ``#`` starts a comment.  The ``labels`` statement must appear once,
    before any edge.  Errors carry line numbers.
    """
    num_labels = None
    nodes: list[str] = []
    edges: list[tuple[str, str, int]] = []
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        kind = parts[0]
        if kind == "labels":
            if num_labels is not None:
                raise GraphParseError("repeated labels statement", line_no)
            if len(parts) != 2:
                raise GraphParseError("expected: labels M", line_no)
            try:
                num_labels = int(parts[1])
            except ValueError:
                raise GraphParseError(f"bad label count {parts[1]!r}", line_no) from None
            if num_labels < 1:
                raise GraphParseError("label count must be >= 1", line_no)
        elif kind == "node":
            if len(parts) != 2:
                raise GraphParseError("expected: node ID", line_no)
            if parts[1] in nodes:
                raise GraphParseError(f"duplicate node {parts[1]!r}", line_no)
            nodes.append(parts[1])
        elif kind == "edge":
            if len(parts) != 4:
                raise GraphParseError("expected: edge SRC DST LABEL", line_no)
            if num_labels is None:
                raise GraphParseError("edge before labels statement", line_no)
            src, dst = parts[1], parts[2]
            try:
                lab = int(parts[3])
            except ValueError:
                raise GraphParseError(f"bad label {parts[3]!r}", line_no) from None
            if src not in nodes:
                raise GraphParseError(f"undeclared node {src!r}", line_no)
            if dst not in nodes:
                raise GraphParseError(f"undeclared node {dst!r}", line_no)
            if not 1 <= lab <= num_labels:
                raise GraphParseError(
                    f"label {lab} outside 1..{num_labels}", line_no
                )
            if (src, dst, lab) in edges:
                raise GraphParseError(f"duplicate edge {src} {dst} {lab}", line_no)
            edges.append((src, dst, lab))
        else:
            raise GraphParseError(f"unknown statement {kind!r}", line_no)
    if num_labels is None:
        raise GraphParseError("missing labels statement")
    if not nodes:
        raise GraphParseError("graph declares no nodes")
    return LabeledGraph(num_labels, tuple(nodes), tuple(edges))


def format_graph(g: LabeledGraph) -> str:
    lines = [f"labels {g.num_labels}"]
    lines += [f"node {s}" for s in g.nodes]
    lines += [f"edge {s} {d} {lab}" for s, d, lab in g.edges]
    return "\n".join(lines) + "\n"


def load_graph(path) -> LabeledGraph:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_graph(fh.read())


def save_graph(path, g: LabeledGraph) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(format_graph(g))


# ---------------------------------------------------------------------------
# predicates


def is_complete(g: LabeledGraph) -> bool:
    """Every node has an outgoing edge for every label."""
    return all(
        g.successors(s, lab) for s in g.nodes for lab in range(1, g.num_labels + 1)
    )


def is_co_complete(g: LabeledGraph) -> bool:
    """Every node has an incoming edge for every label."""
    return all(
        g.predecessors(s, lab) for s in g.nodes for lab in range(1, g.num_labels + 1)
    )


def build_observer(g: LabeledGraph) -> ObserverGraph:
    """Determinize ``g`` by the subset construction from the full node set.

    Discovery is breadth-first with labels taken in ascending order, so
    the node list is deterministic for a canonical input.  Subsets with
    an empty successor set produce no edge and no node.
    """
    order = g.node_index

    def union_successors(subset: tuple[str, ...], lab: int) -> tuple[str, ...]:
        seen: set[str] = set()
        for p in subset:
            seen.update(g.successors(p, lab))
        return tuple(sorted(seen, key=order.__getitem__))

    full = tuple(g.nodes)
    nodes = [full]
    known = {full}
    edges = []
    queue = [full]
    while queue:
        subset = queue.pop(0)
        for lab in range(1, g.num_labels + 1):
            q = union_successors(subset, lab)
            if not q:
                continue
            edges.append((subset, q, lab))
            if q not in known:
                known.add(q)
                nodes.append(q)
                queue.append(q)
    return ObserverGraph(g, tuple(nodes), tuple(edges))


def is_path_complete(g: LabeledGraph) -> bool:
    """True iff every word over the labels is realizable as a path.

    Decided on the observer: the graph is path-complete exactly when
    every observer node has an outgoing edge for every label.
    """
    obs = build_observer(g)
    have = {(p, lab) for p, _, lab in obs.edges}
    return all(
        (subset, lab) in have
        for subset in obs.nodes
        for lab in range(1, g.num_labels + 1)
    )


def word_realizable(g: LabeledGraph, word: Sequence[int]) -> bool:
    """True iff some path of ``g`` carries the given label word."""
    current = set(g.nodes)
    for lab in word:
        if not 1 <= lab <= g.num_labels:
            raise GraphError(f"label {lab} outside 1..{g.num_labels}")
        nxt: set[str] = set()
        for p in current:
            nxt.update(g.successors(p, lab))
        if not nxt:
            return False
        current = nxt
    return True


def brute_force_path_complete(g: LabeledGraph, max_len: int) -> bool:
    """Check every label word of length <= max_len for realizability.

    Conclusive for max_len >= 2**len(g.nodes).  This enumerates the
    whole word tree (sharing prefix propagation, no subset memoization),
    so it stays an independent oracle for is_path_complete.
    """
    if max_len < 1:
        raise GraphError("max_len must be >= 1")
    n = len(g.nodes)
    index = g.node_index
    succ_mask = [[0] * (g.num_labels + 1) for _ in range(n)]
    for s, d, lab in g.edges:
        succ_mask[index[s]][lab] |= 1 << index[d]
    full = (1 << n) - 1
    stack = [(full, 0)]
    while stack:
        mask, depth = stack.pop()
        if depth == max_len:
            continue
        for lab in range(1, g.num_labels + 1):
            q = 0
            m = mask
            while m:
                low = m & -m
                q |= succ_mask[low.bit_length() - 1][lab]
                m ^= low
            if q == 0:
                return False
            stack.append((q, depth + 1))
    return True


def enumerate_co_complete_graphs(num_nodes: int, num_labels: int) -> list[LabeledGraph]:
    """All graphs where each (node, label) pair has exactly one inbound edge.

    Equivalently, all functions from (node, label) pairs to source
    nodes; there are num_nodes ** (num_nodes * num_labels) of them,
    emitted in a fixed order.  Every one is co-complete by
    construction, hence path-complete.
    """
    if num_nodes < 1 or num_labels < 1:
        raise GraphError("need at least one node and one label")
    count = num_nodes ** (num_nodes * num_labels)
    if count > ENUMERATION_CAP:
        raise GraphError(
            f"{count} graphs exceed the enumeration cap {ENUMERATION_CAP}"
        )
    names = _node_names(num_nodes)
    slots = [(d, lab) for d in names for lab in range(1, num_labels + 1)]
    out = []
    for choice in itertools.product(range(num_nodes), repeat=len(slots)):
        edges = tuple(
            (names[src], dest, lab) for (dest, lab), src in zip(slots, choice)
        )
        out.append(LabeledGraph(num_labels, names, edges))
    return out


def _node_names(count: int) -> tuple[str, ...]:
    alphabet = "abcdefghijklmnopqrstuvwxyz"
    if count <= len(alphabet):
        return tuple(alphabet[:count])
    return tuple(f"n{i}" for i in range(count))
