"""Weighted directed graphs with exact-rational or binary64 weights.

The model: nodes carry non-negative weights, edges carry strictly positive
weights, at most one edge per ordered pair, self-loops allowed.  Zero-weight
edges are always *absent* — operations that would produce one drop it.

Strong connectivity uses walks of length >= 1: a lone node is strongly
connected only when it carries a self-loop, and ``v in successors(G, v)``
only when v lies on a cycle through itself.

Two numeric modes exist.  RATIONAL stores ``fractions.Fraction`` weights and
keeps every structural query exact; FLOAT stores binary64.  A graph's mode is
fixed at construction and preserved by every transform.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Union

import numpy as np

from .errors import DomainError, GraphFormatError

Weight = Union[Fraction, float]

#: Relative tolerance for float-mode out-degree equality comparisons.
OUT_REGULAR_RTOL = 1e-9

#: Relative tolerance when comparing component eigenvalues for class checks.
EIGENVALUE_RTOL = 1e-9

#: Katz admissibility margin: alpha * lambda must stay <= 1 - this.
KATZ_MARGIN = 1e-6


class Mode(enum.Enum):
    """Numeric mode of a graph: exact rationals or binary64 floats."""

    RATIONAL = "rational"
    FLOAT = "float"


def parse_weight(token: str, mode: Mode) -> Weight:
    """Parse a weight literal: decimal (``0.2``), integer, or rational ``p/q``.

    In RATIONAL mode the value is exact.  In FLOAT mode a ``p/q`` literal is
    parsed exactly first, then rounded once to the nearest float.
    """
    try:
        value = Fraction(token)
    except (ValueError, ZeroDivisionError) as exc:
        raise GraphFormatError(f"bad weight literal {token!r}") from exc
    if mode is Mode.RATIONAL:
        return value
    return float(value)


def format_weight(w: Weight) -> str:
    """Serialize a weight: lowest-terms ``p/q`` (or bare integer) for
    rationals, shortest round-trip decimal for floats."""
    if isinstance(w, Fraction):
        if w.denominator == 1:
            return str(w.numerator)
        return f"{w.numerator}/{w.denominator}"
    return repr(float(w))


class Graph:
    """A directed graph with weighted nodes and edges.

    Nodes and edges remember insertion order; all iteration, serialization
    and matrix layouts follow it, which keeps every downstream computation
    deterministic.  Treat instances as immutable once built — transforms
    return new graphs.
    """

    __slots__ = ("mode", "_weights", "_edges", "_out", "_in", "_outdeg")

    def __init__(self, mode: Mode = Mode.RATIONAL):
        self.mode = mode
        self._weights: dict[str, Weight] = {}
        self._edges: dict[tuple[str, str], Weight] = {}
        self._out: dict[str, dict[str, Weight]] = {}
        self._in: dict[str, dict[str, Weight]] = {}
        self._outdeg: dict[str, Weight] | None = None

    # -- construction ----------------------------------------------------

    def add_node(self, v: str, weight: Weight) -> None:
        if not v or any(ch.isspace() for ch in v):
            raise GraphFormatError(f"node id must be a non-empty token: {v!r}")
        if v in self._weights:
            raise GraphFormatError(f"duplicate node {v!r}")
        weight = self._coerce(weight)
        if weight < 0:
            raise GraphFormatError(f"negative weight for node {v!r}")
        self._weights[v] = weight
        self._out[v] = {}
        self._in[v] = {}
        self._outdeg = None

    def add_edge(self, u: str, v: str, weight: Weight) -> None:
        for endpoint in (u, v):
            if endpoint not in self._weights:
                raise GraphFormatError(f"edge endpoint {endpoint!r} is not a declared node")
        if (u, v) in self._edges:
            raise GraphFormatError(f"duplicate edge {u!r} -> {v!r}")
        weight = self._coerce(weight)
        if weight <= 0:
            raise GraphFormatError(f"non-positive weight for edge {u!r} -> {v!r}")
        self._edges[(u, v)] = weight
        self._out[u][v] = weight
        self._in[v][u] = weight
        self._outdeg = None

    def _coerce(self, weight: Weight) -> Weight:
        if self.mode is Mode.RATIONAL:
            if isinstance(weight, float):
                raise TypeError("rational-mode graph given a float weight")
            return Fraction(weight)
        return float(weight)

    @classmethod
    def build(
        cls,
        nodes: Iterable[tuple[str, Weight]],
        edges: Iterable[tuple[str, str, Weight]] = (),
        mode: Mode = Mode.RATIONAL,
    ) -> "Graph":
        g = cls(mode)
        for v, w in nodes:
            g.add_node(v, w)
        for u, v, w in edges:
            g.add_edge(u, v, w)
        return g

    # -- basic queries ----------------------------------------------------

    @property
    def node_ids(self) -> list[str]:
        return list(self._weights)

    def __contains__(self, v: str) -> bool:
        return v in self._weights

    def __len__(self) -> int:
        return len(self._weights)

    def node_weight(self, v: str) -> Weight:
        self._require_node(v)
        return self._weights[v]

    def node_weights(self) -> dict[str, Weight]:
        return dict(self._weights)

    def total_node_weight(self) -> Weight:
        zero: Weight = Fraction(0) if self.mode is Mode.RATIONAL else 0.0
        return sum(self._weights.values(), zero)

    @property
    def num_edges(self) -> int:
        return len(self._edges)

    def edges(self) -> Iterator[tuple[str, str, Weight]]:
        for (u, v), w in self._edges.items():
            yield u, v, w

    def has_edge(self, u: str, v: str) -> bool:
        return (u, v) in self._edges

    def edge_weight(self, u: str, v: str) -> Weight:
        try:
            return self._edges[(u, v)]
        except KeyError:
            raise DomainError(f"unknown edge {u!r} -> {v!r}") from None

    def out_edges(self, v: str) -> list[tuple[str, Weight]]:
        self._require_node(v)
        return list(self._out[v].items())

    def in_edges(self, v: str) -> list[tuple[str, Weight]]:
        self._require_node(v)
        return list(self._in[v].items())

    def out_degree(self, v: str) -> Weight:
        """Total weight of v's outgoing edges (self-loop included), 0 if none."""
        self._require_node(v)
        if self._outdeg is None:
            zero: Weight = Fraction(0) if self.mode is Mode.RATIONAL else 0.0
            self._outdeg = {
                u: sum(targets.values(), zero) for u, targets in self._out.items()
            }
        return self._outdeg[v]

    def sinks(self) -> list[str]:
        return [v for v in self._weights if not self._out[v]]

    def _require_node(self, v: str) -> None:
        if v not in self._weights:
            raise DomainError(f"unknown node {v!r}")

    # -- copies and simple derived graphs ---------------------------------

    def copy(self) -> "Graph":
        g = Graph(self.mode)
        for v, w in self._weights.items():
            g.add_node(v, w)
        for (u, v), w in self._edges.items():
            g.add_edge(u, v, w)
        return g

    def to_float(self) -> "Graph":
        """A FLOAT-mode copy (identity if already float)."""
        if self.mode is Mode.FLOAT:
            return self.copy()
        g = Graph(Mode.FLOAT)
        for v, w in self._weights.items():
            g.add_node(v, float(w))
        for (u, v), w in self._edges.items():
            g.add_edge(u, v, float(w))
        return g

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return (
            self.mode is other.mode
            and self._weights == other._weights
            and self._edges == other._edges
        )

    def __hash__(self):  # pragma: no cover - graphs are not meant to be keys
        raise TypeError("Graph is unhashable")

    def __repr__(self) -> str:
        return (
            f"<Graph mode={self.mode.value} nodes={len(self)} edges={self.num_edges}>"
        )


# -- module-level operations ----------------------------------------------


def graph_sum(g: Graph, h: Graph) -> Graph:
    """Disjoint union. Node-id sets must not collide."""
    if g.mode is not h.mode:
        raise DomainError("cannot sum graphs of different numeric modes")
    clash = set(g.node_ids) & set(h.node_ids)
    if clash:
        raise DomainError(f"node-id collision in graph sum: {sorted(clash)!r}")
    out = g.copy()
    for v, w in h.node_weights().items():
        out.add_node(v, w)
    for u, v, w in h.edges():
        out.add_edge(u, v, w)
    return out


def opposite_graph(g: Graph) -> Graph:
    """Reverse every edge; node and edge weights unchanged."""
    out = Graph(g.mode)
    for v, w in g.node_weights().items():
        out.add_node(v, w)
    for u, v, w in g.edges():
        out.add_edge(v, u, w)
    return out


def delete_edge(g: Graph, u: str, v: str) -> Graph:
    """Remove exactly the edge (u, v); nodes are never deleted."""
    if not g.has_edge(u, v):
        raise DomainError(f"unknown edge {u!r} -> {v!r}")
    out = Graph(g.mode)
    for n, w in g.node_weights().items():
        out.add_node(n, w)
    for a, b, w in g.edges():
        if (a, b) != (u, v):
            out.add_edge(a, b, w)
    return out


def successors(g: Graph, v: str) -> set[str]:
    """S(v): nodes reachable from v by a walk of length >= 1."""
    g._require_node(v)
    seen: set[str] = set()
    frontier = [t for t, _ in g.out_edges(v)]
    while frontier:
        node = frontier.pop()
        if node in seen:
            continue
        seen.add(node)
        frontier.extend(t for t, _ in g.out_edges(node) if t not in seen)
    return seen


def predecessors(g: Graph, v: str) -> set[str]:
    """P(v): nodes that reach v by a walk of length >= 1."""
    g._require_node(v)
    seen: set[str] = set()
    frontier = [s for s, _ in g.in_edges(v)]
    while frontier:
        node = frontier.pop()
        if node in seen:
            continue
        seen.add(node)
        frontier.extend(s for s, _ in g.in_edges(node) if s not in seen)
    return seen


@dataclass
class ComponentPartition:
    """SCC partition, components listed in condensation topological order
    (sources of the condensation first).

    ``strongly_connected[i]`` is False exactly for loop-free singletons.
    """

    components: list[list[str]]
    index_of: dict[str, int]
    strongly_connected: list[bool]

    def component_of(self, v: str) -> list[str]:
        return self.components[self.index_of[v]]


def strongly_connected_components(g: Graph) -> ComponentPartition:
    """Tarjan's algorithm, iterative, deterministic by insertion order."""
    index: dict[str, int] = {}
    lowlink: dict[str, int] = {}
    on_stack: set[str] = set()
    stack: list[str] = []
    components: list[list[str]] = []
    counter = 0

    for root in g.node_ids:
        if root in index:
            continue
        # Each work item is (node, iterator over its out-neighbors).
        work = [(root, iter([t for t, _ in g.out_edges(root)]))]
        index[root] = lowlink[root] = counter
        counter += 1
        stack.append(root)
        on_stack.add(root)
        while work:
            node, it = work[-1]
            advanced = False
            for nxt in it:
                if nxt not in index:
                    index[nxt] = lowlink[nxt] = counter
                    counter += 1
                    stack.append(nxt)
                    on_stack.add(nxt)
                    work.append((nxt, iter([t for t, _ in g.out_edges(nxt)])))
                    advanced = True
                    break
                if nxt in on_stack:
                    lowlink[node] = min(lowlink[node], index[nxt])
            if advanced:
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                lowlink[parent] = min(lowlink[parent], lowlink[node])
            if lowlink[node] == index[node]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack.discard(w)
                    comp.append(w)
                    if w == node:
                        break
                comp.reverse()
                components.append(comp)

    # Tarjan emits components in reverse topological order of the condensation.
    components.reverse()
    index_of = {v: i for i, comp in enumerate(components) for v in comp}
    strongly = [
        len(comp) > 1 or g.has_edge(comp[0], comp[0]) for comp in components
    ]
    return ComponentPartition(components, index_of, strongly)


def is_strongly_connected(g: Graph) -> bool:
    part = strongly_connected_components(g)
    return len(part.components) == 1 and part.strongly_connected[0]


def out_regularity(g: Graph) -> Weight | None:
    """The common out-degree x > 0 if the graph is x-out-regular, else None.

    Exact comparison in rational mode, relative 1e-9 in float mode.
    """
    if len(g) == 0:
        return None
    degrees = [g.out_degree(v) for v in g.node_ids]
    if g.mode is Mode.RATIONAL:
        x = degrees[0]
        if x > 0 and all(d == x for d in degrees):
            return x
        return None
    hi, lo = max(degrees), min(degrees)
    if hi > 0 and hi - lo <= OUT_REGULAR_RTOL * max(1.0, hi):
        return hi
    return None


def semi_out_regularity(g: Graph) -> tuple[bool, Weight | None]:
    """(is semi-out-regular, common non-sink out-degree r).

    Semi-out-regular: some r > 0 has every out-degree in {0, r}.  An edgeless
    graph qualifies vacuously (r is None then).
    """
    positive = [g.out_degree(v) for v in g.node_ids if g._out[v]]
    if not positive:
        return True, None
    if g.mode is Mode.RATIONAL:
        r = positive[0]
        return all(d == r for d in positive), r
    hi, lo = max(positive), min(positive)
    ok = hi - lo <= OUT_REGULAR_RTOL * max(1.0, hi)
    return ok, hi if ok else None


# -- matrices ---------------------------------------------------------------


def adjacency_matrix(g: Graph, order: list[str] | None = None) -> np.ndarray:
    """Dense float adjacency A with A[i, j] = weight of edge order[j] -> order[i].

    Rows index the *target*: (A @ x)[v] sums c(u, v) * x[u] over predecessors
    u of v, which is the shape every recursion here uses.
    """
    order = order if order is not None else g.node_ids
    pos = {v: i for i, v in enumerate(order)}
    a = np.zeros((len(order), len(order)))
    for u, v, w in g.edges():
        if u in pos and v in pos:
            a[pos[v], pos[u]] = float(w)
    return a


def transition_matrix(g: Graph, order: list[str] | None = None) -> np.ndarray:
    """Adjacency with each column divided by its node's out-degree.

    Columns of sinks are zero.  When ``order`` restricts to a subset, the
    divisor is still the node's full out-degree in g.
    """
    order = order if order is not None else g.node_ids
    a = adjacency_matrix(g, order)
    for j, u in enumerate(order):
        deg = g.out_degree(u)
        if deg > 0:
            a[:, j] /= float(deg)
    return a


# -- graph classes -----------------------------------------------------------


class ClassTag(enum.Enum):
    ALL = "all"
    KP = "kp"
    EV = "ev"
    KATZ = "katz"


@dataclass(frozen=True)
class GraphClass:
    """An admissibility class for a measure; KATZ carries its decay alpha."""

    tag: ClassTag
    alpha: Weight | None = None

    def __post_init__(self):
        if self.tag is ClassTag.KATZ:
            if self.alpha is None or self.alpha < 0:
                raise DomainError("KATZ class needs a decay alpha >= 0")
        elif self.alpha is not None:
            raise DomainError(f"{self.tag.value} class carries no alpha")


@dataclass
class ClassVerdict:
    ok: bool
    reason: str | None = None
    lam: float | None = None

    def __bool__(self) -> bool:
        return self.ok


def _component_eigenvalues(g: Graph, part: ComponentPartition) -> list[float]:
    from .linalg import perron_value

    lams = []
    for comp, strong in zip(part.components, part.strongly_connected):
        if len(comp) == 1 and not strong:
            lams.append(0.0)
        elif len(comp) == 1:
            lams.append(float(g.edge_weight(comp[0], comp[0])))
        else:
            lams.append(perron_value(adjacency_matrix(g, comp)))
    return lams


def principal_eigenvalue(g: Graph) -> tuple[list[float], float]:
    """Per-component Perron values (condensation order) and the global max.

    Components that are loop-free singletons report 0; singletons with a
    self-loop report the loop weight.
    """
    part = strongly_connected_components(g)
    lams = _component_eigenvalues(g, part)
    return lams, max(lams, default=0.0)


def _check_kp_structure(g: Graph, part: ComponentPartition) -> str | None:
    for comp, strong in zip(part.components, part.strongly_connected):
        if not strong:
            return f"node {comp[0]!r} forms a component with no cycle through it"
    for u, v, _ in g.edges():
        if part.index_of[u] != part.index_of[v]:
            return f"edge {u!r} -> {v!r} crosses strongly connected components"
    return None


def classify(g: Graph, cls: GraphClass) -> ClassVerdict:
    """Membership test with a human-readable diagnostic.

    ALL: every graph.  KP: disjoint union of strongly connected graphs.
    EV: KP plus equal component eigenvalues (relative 1e-9).  KATZ(alpha):
    alpha * lambda <= 1 - 1e-6 for the global principal eigenvalue.
    """
    if cls.tag is ClassTag.ALL:
        return ClassVerdict(True)

    part = strongly_connected_components(g)

    if cls.tag is ClassTag.KP:
        reason = _check_kp_structure(g, part)
        return ClassVerdict(reason is None, reason)

    if cls.tag is ClassTag.EV:
        reason = _check_kp_structure(g, part)
        if reason is not None:
            return ClassVerdict(False, reason)
        lams = _component_eigenvalues(g, part)
        lam = max(lams, default=0.0)
        if lams and lam - min(lams) > EIGENVALUE_RTOL * max(1.0, lam):
            return ClassVerdict(
                False,
                "component principal eigenvalues differ: "
                f"{min(lams):.12g} vs {lam:.12g}",
                lam,
            )
        return ClassVerdict(True, None, lam)

    if cls.tag is ClassTag.KATZ:
        lams = _component_eigenvalues(g, part)
        lam = max(lams, default=0.0)
        alpha = float(cls.alpha)  # type: ignore[arg-type]
        if alpha * lam > 1.0 - KATZ_MARGIN:
            return ClassVerdict(
                False,
                f"alpha * lambda = {alpha * lam:.12g} exceeds the 1 - {KATZ_MARGIN:g} margin",
                lam,
            )
        return ClassVerdict(True, None, lam)

    raise DomainError(f"unknown class {cls.tag!r}")


# -- file format --------------------------------------------------------------


def parse_graph(text: str, mode: Mode = Mode.RATIONAL) -> Graph:
    """Parse the `.dg` edge-list format.

    One declaration per line: ``# comment``, ``node <id> <weight>``, or
    ``edge <src> <dst> <weight>``.  Nodes must be declared before edges that
    reference them.  Weights are decimals or exact rationals ``p/q``.
    """
    g = Graph(mode)
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        fields = line.split()
        try:
            if fields[0] == "node":
                if len(fields) != 3:
                    raise GraphFormatError("expected: node <id> <weight>")
                g.add_node(fields[1], parse_weight(fields[2], mode))
            elif fields[0] == "edge":
                if len(fields) != 4:
                    raise GraphFormatError("expected: edge <src> <dst> <weight>")
                g.add_edge(fields[1], fields[2], parse_weight(fields[3], mode))
            else:
                raise GraphFormatError(f"unknown declaration {fields[0]!r}")
        except GraphFormatError as exc:
            if exc.line is None:
                raise GraphFormatError(str(exc), line=lineno) from None
            raise
    return g


def serialize_graph(g: Graph, canonical: bool = False) -> str:
    """Emit the `.dg` format: nodes then edges, insertion order.

    ``canonical=True`` sorts nodes and edges by id instead, for byte-stable
    comparisons between graphs built in different orders.
    """
    nodes = g.node_ids
    edges = list(g.edges())
    if canonical:
        nodes = sorted(nodes)
        edges.sort(key=lambda e: (e[0], e[1]))
    lines = [f"node {v} {format_weight(g.node_weight(v))}" for v in nodes]
    lines.extend(f"edge {u} {v} {format_weight(w)}" for u, v, w in edges)
    return "\n".join(lines) + "\n"
