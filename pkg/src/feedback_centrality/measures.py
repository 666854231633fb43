"""The four feedback centralities.

Every measure here scores a node by the weighted scores of its in-neighbors:

* ``pagerank(a)``      x_v = a * sum over edges (u,v) of c(u,v)/outdeg(u) * x_u + b(v)
* ``katz(a)``          x_v = a * sum of c(u,v) * x_u + b(v)
* ``katz-prestige``    x_v =     sum of c(u,v)/outdeg(u) * x_u
* ``eigenvector``      x_v = 1/lambda * sum of c(u,v) * x_u

The first pair are linear systems with a unique solution on their class; the
second pair are eigenproblems whose scale is pinned down by node weights:
katz-prestige distributes the total node weight of each strongly connected
component across the component's stationary distribution, and eigenvector
centrality keeps, inside each component, the share of b seen by the
component's left Perron vector.

Each measure owns a graph class and raises DomainError outside of it.
Computations honor the graph's numeric mode; eigenvector centrality is the
exception and exists only in float mode.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import DomainError
from .graph import (
    ClassTag,
    ClassVerdict,
    Graph,
    GraphClass,
    Mode,
    Weight,
    adjacency_matrix,
    classify,
    strongly_connected_components,
    transition_matrix,
)
from .linalg import gauss_rational, perron_triple, solve_refined


class MeasureKind(enum.Enum):
    PAGERANK = "pagerank"
    KATZ = "katz"
    KATZ_PRESTIGE = "katz-prestige"
    EIGENVECTOR = "eigenvector"


#: Kinds whose recursion carries a decay parameter.
PARAMETRIC_KINDS = frozenset({MeasureKind.PAGERANK, MeasureKind.KATZ})


@dataclass
class CentralityVector:
    """Per-node scores, keyed and ordered like the source graph's nodes."""

    values: dict[str, Weight]
    mode: Mode

    def __getitem__(self, v: str) -> Weight:
        return self.values[v]

    def __iter__(self):
        return iter(self.values)

    def __len__(self) -> int:
        return len(self.values)

    def array(self, order: list[str] | None = None) -> np.ndarray:
        order = order if order is not None else list(self.values)
        return np.array([float(self.values[v]) for v in order])

    def total(self) -> Weight:
        zero: Weight = Fraction(0) if self.mode is Mode.RATIONAL else 0.0
        return sum(self.values.values(), zero)


@dataclass
class SpectralData:
    """Per-strongly-connected-component Perron data, condensation order.

    Right and left vectors are float, strictly positive on their component
    (uniform placeholders for loop-free singletons, which have value 0),
    normalized to sum 1.
    """

    components: list[list[str]]
    values: list[float]
    right_vectors: list[np.ndarray]
    left_vectors: list[np.ndarray]
    lam: float

    def component_index(self, v: str) -> int:
        for i, comp in enumerate(self.components):
            if v in comp:
                return i
        raise DomainError(f"unknown node {v!r}")


def spectral_data(g: Graph) -> SpectralData:
    """Perron triple of every strongly connected component's induced subgraph."""
    part = strongly_connected_components(g)
    comps: list[list[str]] = []
    vals: list[float] = []
    rights: list[np.ndarray] = []
    lefts: list[np.ndarray] = []
    for comp in part.components:
        x, y, lam = perron_triple(adjacency_matrix(g, comp))
        comps.append(comp)
        vals.append(lam)
        rights.append(x)
        lefts.append(y)
    return SpectralData(comps, vals, rights, lefts, max(vals, default=0.0))


# -- measure object -----------------------------------------------------------


@dataclass(frozen=True)
class Measure:
    """A centrality measure: a kind plus, where the kind needs one, a decay.

    ``alpha`` must match the numeric mode of the graphs it will be applied
    to (Fraction for rational, float for float).
    """

    kind: MeasureKind
    alpha: Weight | None = None

    def __post_init__(self):
        if self.kind in PARAMETRIC_KINDS:
            if self.alpha is None:
                raise DomainError(f"{self.kind.value} needs a decay parameter")
            if self.alpha < 0:
                raise DomainError("decay parameter must be non-negative")
            if self.kind is MeasureKind.PAGERANK and self.alpha >= 1:
                raise DomainError("pagerank decay must satisfy alpha < 1")
        elif self.alpha is not None:
            raise DomainError(f"{self.kind.value} takes no decay parameter")

    def name(self) -> str:
        if self.alpha is not None:
            return f"{self.kind.value}({self.alpha})"
        return self.kind.value

    def graph_class(self) -> GraphClass:
        if self.kind is MeasureKind.PAGERANK:
            return GraphClass(ClassTag.ALL)
        if self.kind is MeasureKind.KATZ:
            return GraphClass(ClassTag.KATZ, self.alpha)
        if self.kind is MeasureKind.KATZ_PRESTIGE:
            return GraphClass(ClassTag.KP)
        return GraphClass(ClassTag.EV)

    def admits(self, g: Graph) -> ClassVerdict:
        return classify(g, self.graph_class())

    def compute(self, g: Graph) -> CentralityVector:
        if self.kind is MeasureKind.PAGERANK:
            return pagerank(g, self.alpha)
        if self.kind is MeasureKind.KATZ:
            return katz_centrality(g, self.alpha)
        if self.kind is MeasureKind.KATZ_PRESTIGE:
            return katz_prestige(g)
        return eigenvector_centrality(g)


def _check_alpha_mode(g: Graph, alpha: Weight) -> None:
    if g.mode is Mode.RATIONAL and isinstance(alpha, float):
        raise TypeError("rational-mode computation given a float decay parameter")


def _node_weight_vector(g: Graph, order: list[str]) -> np.ndarray:
    return np.array([float(g.node_weight(v)) for v in order])


# -- linear-system measures ---------------------------------------------------


def _rational_transition(g: Graph, order: list[str]) -> list[list[Fraction]]:
    pos = {v: i for i, v in enumerate(order)}
    m = [[Fraction(0)] * len(order) for _ in order]
    for u, v, w in g.edges():
        if u in pos and v in pos:
            m[pos[v]][pos[u]] = Fraction(w) / Fraction(g.out_degree(u))
    return m


def _rational_adjacency(g: Graph, order: list[str]) -> list[list[Fraction]]:
    pos = {v: i for i, v in enumerate(order)}
    m = [[Fraction(0)] * len(order) for _ in order]
    for u, v, w in g.edges():
        if u in pos and v in pos:
            m[pos[v]][pos[u]] = Fraction(w)
    return m


def _solve_damped(g: Graph, alpha: Weight, m_rational, m_float) -> CentralityVector:
    """Solve (I - alpha * M) x = b in the graph's numeric mode."""
    order = g.node_ids
    if g.mode is Mode.RATIONAL:
        a = Fraction(alpha)
        m = m_rational(g, order)
        rows = [
            [
                (Fraction(1) if i == j else Fraction(0)) - a * m[i][j]
                for j in range(len(order))
            ]
            for i in range(len(order))
        ]
        rhs = [Fraction(g.node_weight(v)) for v in order]
        x = gauss_rational(rows, rhs)
        return CentralityVector(dict(zip(order, x)), Mode.RATIONAL)
    k = np.eye(len(order)) - float(alpha) * m_float(g, order)
    x = solve_refined(k, _node_weight_vector(g, order))
    return CentralityVector({v: float(x[i]) for i, v in enumerate(order)}, Mode.FLOAT)


def pagerank(g: Graph, alpha: Weight) -> CentralityVector:
    """Damped distributed feedback: x = alpha * M x + b, alpha in [0, 1).

    M is the out-degree-normalized adjacency; sink nodes pass nothing on.
    Defined for every graph.
    """
    _check_alpha_mode(g, alpha)
    if not 0 <= alpha < 1:
        raise DomainError(f"pagerank needs 0 <= alpha < 1, got {alpha}")
    return _solve_damped(g, alpha, _rational_transition, transition_matrix)


def katz_centrality(g: Graph, alpha: Weight) -> CentralityVector:
    """Damped parallel feedback: x = alpha * A x + b.

    Needs alpha * lambda bounded away from 1 (margin 1e-6), where lambda is
    the graph's largest component eigenvalue; the Neumann series diverges at
    the boundary and the solve becomes meaningless past it.
    """
    _check_alpha_mode(g, alpha)
    if alpha < 0:
        raise DomainError(f"katz needs alpha >= 0, got {alpha}")
    verdict = classify(g, GraphClass(ClassTag.KATZ, alpha))
    if not verdict:
        raise DomainError(f"graph is outside the katz class: {verdict.reason}")
    return _solve_damped(g, alpha, _rational_adjacency, adjacency_matrix)


def katz_prestige(g: Graph) -> CentralityVector:
    """Undamped distributed feedback: x = M x, scale fixed by node weights.

    On each strongly connected component the recursion pins x to the
    stationary distribution of the component's transition matrix, scaled by
    the component's total node weight.  Requires the graph to be a disjoint
    union of strongly connected graphs.
    """
    verdict = classify(g, GraphClass(ClassTag.KP))
    if not verdict:
        raise DomainError(f"graph is outside the katz-prestige class: {verdict.reason}")
    part = strongly_connected_components(g)
    out: dict[str, Weight] = {}
    for comp in part.components:
        comp_weight = sum(
            (g.node_weight(v) for v in comp),
            Fraction(0) if g.mode is Mode.RATIONAL else 0.0,
        )
        for v, share in zip(comp, _stationary_distribution(g, comp)):
            out[v] = share * comp_weight
    return CentralityVector({v: out[v] for v in g.node_ids}, g.mode)


def _stationary_distribution(g: Graph, comp: list[str]) -> list[Weight]:
    """Solve pi = M pi, sum(pi) = 1 on one strongly connected component.

    Uses (I - M) with its last row replaced by all-ones and rhs e_last; that
    system is provably non-singular because the rows of I - M sum to zero
    while the all-ones constraint does not annihilate pi.
    """
    n = len(comp)
    if n == 1:
        return [Fraction(1) if g.mode is Mode.RATIONAL else 1.0]
    if g.mode is Mode.RATIONAL:
        m = _rational_transition(g, comp)
        rows = [
            [(Fraction(1) if i == j else Fraction(0)) - m[i][j] for j in range(n)]
            for i in range(n - 1)
        ]
        rows.append([Fraction(1)] * n)
        rhs = [Fraction(0)] * (n - 1) + [Fraction(1)]
        return gauss_rational(rows, rhs)
    k = np.eye(n) - transition_matrix(g, comp)
    k[n - 1, :] = 1.0
    rhs = np.zeros(n)
    rhs[n - 1] = 1.0
    return [float(x) for x in solve_refined(k, rhs)]


# -- eigenproblem measure -----------------------------------------------------


def eigenvector_centrality(g: Graph) -> CentralityVector:
    """Undamped parallel feedback: x = (1/lambda) A x, scale fixed by b.

    On each component the value is the right Perron vector scaled so the
    left Perron vector sees the same total as it sees of b — the limit of
    the long-run average of the decayed parallel walk.  Float-only; the
    Perron pair has no exact rational form.
    """
    if g.mode is Mode.RATIONAL:
        raise DomainError(
            "eigenvector centrality is float-only; convert the graph with to_float()"
        )
    verdict = classify(g, GraphClass(ClassTag.EV))
    if not verdict:
        raise DomainError(f"graph is outside the eigenvector class: {verdict.reason}")
    data = spectral_data(g)
    out: dict[str, float] = {}
    for comp, x, y in zip(data.components, data.right_vectors, data.left_vectors):
        b = _node_weight_vector(g, comp)
        scale = float(y @ b) / float(y @ x)
        for i, v in enumerate(comp):
            out[v] = float(x[i]) * scale
    return CentralityVector({v: out[v] for v in g.node_ids}, Mode.FLOAT)


# -- recursion residuals ------------------------------------------------------


def recursion_residual(
    g: Graph, measure: Measure, values: dict[str, Weight]
) -> dict[str, Weight]:
    """Per-node defect of the measure's defining recursion at ``values``.

    Exact in rational mode for the linear-system measures.  For eigenvector
    centrality the eigenvalue is taken from float spectral data of the
    component, so the defect is float regardless of input types.
    """
    if set(values) != set(g.node_ids):
        raise DomainError("values do not cover exactly the graph's nodes")
    kind = measure.kind
    if kind is MeasureKind.EIGENVECTOR:
        data = spectral_data(g)
        lam_of = {
            v: data.values[i]
            for i, comp in enumerate(data.components)
            for v in comp
        }
        res: dict[str, Weight] = {}
        for v in g.node_ids:
            lam = lam_of[v]
            if lam <= 0:
                raise DomainError(f"component of {v!r} has eigenvalue 0")
            acc = 0.0
            for u, w in g.in_edges(v):
                acc += float(w) * float(values[u])
            res[v] = float(values[v]) - acc / lam
        return res

    distributed = kind in (MeasureKind.PAGERANK, MeasureKind.KATZ_PRESTIGE)
    damped = kind in PARAMETRIC_KINDS
    res = {}
    for v in g.node_ids:
        zero: Weight = Fraction(0) if g.mode is Mode.RATIONAL else 0.0
        acc = zero
        for u, w in g.in_edges(v):
            term = w * values[u]
            if distributed:
                term /= g.out_degree(u)
            acc += term
        if damped:
            acc = measure.alpha * acc + g.node_weight(v)
        res[v] = values[v] - acc
    return res
