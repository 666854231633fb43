"""Graph surgery and the exact cycle decomposition pipeline.

Three families live here:

* Local rewrites — proportional node combining, per-node edge scaling
  (multiplication and compensation), out-degree normalization, and the
  eigenvector-based regularization that makes a graph lambda-out-regular.
* The impact pipeline — edge impacts of katz-prestige, the integer
  multigraph they induce, its Euler circuit, the constant-weight cycle
  graph synthesized from that circuit, and the recombination that folds
  the cycle back into the original graph *exactly* (rational arithmetic
  end to end).
* Profit — the marginal value an extra in-edge delivers under the damped
  measures, defined constructively on a three-node probe graph, plus the
  decomposition of a measure into per-edge profits.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import DomainError
from .graph import (
    Graph,
    Mode,
    Weight,
    opposite_graph,
    out_regularity,
    semi_out_regularity,
    strongly_connected_components,
)
from .measures import (
    PARAMETRIC_KINDS,
    Measure,
    eigenvector_centrality,
    katz_prestige,
)

#: Default ceiling for the integer scale of an impact multigraph.
DEFAULT_SCALE_CAP = 10**6


def _coerce_scalar(g: Graph, value: Weight, what: str) -> Weight:
    if g.mode is Mode.RATIONAL:
        if isinstance(value, float):
            raise TypeError(f"rational-mode graph given a float {what}")
        return Fraction(value)
    return float(value)


def _zero(mode: Mode) -> Weight:
    return Fraction(0) if mode is Mode.RATIONAL else 0.0


# -- proportional combining ---------------------------------------------------


def proportional_combine(
    g: Graph, u: str, w: str, value_u: Weight, value_w: Weight
) -> Graph:
    """Merge node u into node w, splitting their outgoing weight by value.

    u's out-edges are scaled by value_u/(value_u+value_w) and w's by the
    complementary share; every edge endpoint at u is then re-addressed to w
    (edges between the pair become a self-loop at w), parallel results are
    summed, and anything scaled to zero is dropped.  w absorbs u's node
    weight.  The values must be non-negative and not both zero — combining
    carries no meaning for a pair with no weight to split.
    """
    g._require_node(u)
    g._require_node(w)
    if u == w:
        raise DomainError(f"cannot combine node {u!r} with itself")
    vu = _coerce_scalar(g, value_u, "combining value")
    vw = _coerce_scalar(g, value_w, "combining value")
    if vu < 0 or vw < 0:
        raise DomainError("combining values must be non-negative")
    total = vu + vw
    if total == 0:
        raise DomainError("combining values must not both be zero")
    share_u = vu / total
    share_w = vw / total

    out = Graph(g.mode)
    for n, wt in g.node_weights().items():
        if n == u:
            continue
        out.add_node(n, wt + g.node_weight(u) if n == w else wt)

    merged: dict[tuple[str, str], Weight] = {}
    for a, b, wt in g.edges():
        if a == u:
            wt = wt * share_u
        elif a == w:
            wt = wt * share_w
        key = (w if a == u else a, w if b == u else b)
        merged[key] = merged.get(key, _zero(g.mode)) + wt
    for (a, b), wt in merged.items():
        if wt != 0:
            out.add_edge(a, b, wt)
    return out


def combine_groups(
    g: Graph, groups: dict[str, list[str]], values: dict[str, Weight]
) -> tuple[Graph, dict[str, Weight]]:
    """Fold each group of nodes into its first member, summing values.

    Groups are processed in mapping order, members in list order; the
    surviving node keeps the first member's id and ends up holding the
    group's total value.  Returns the combined graph and the value of every
    surviving node (group representatives updated, other nodes passed
    through when present in ``values``).
    """
    vals = dict(values)
    cur = g
    for key, members in groups.items():
        if not members:
            raise DomainError(f"group {key!r} is empty")
        rep = members[0]
        for member in members[1:]:
            cur = proportional_combine(cur, member, rep, vals[member], vals[rep])
            vals[rep] = vals[rep] + vals.pop(member)
    return cur, vals


# -- per-node edge scaling ----------------------------------------------------


def edge_multiplication(g: Graph, u: str, factor: Weight) -> Graph:
    """Scale every out-edge of u (self-loop included) by a positive factor."""
    g._require_node(u)
    factor = _coerce_scalar(g, factor, "factor")
    if factor <= 0:
        raise DomainError(f"edge multiplication needs a factor > 0, got {factor}")
    out = Graph(g.mode)
    for n, wt in g.node_weights().items():
        out.add_node(n, wt)
    for a, b, wt in g.edges():
        out.add_edge(a, b, wt * factor if a == u else wt)
    return out


def edge_compensation(g: Graph, u: str, factor: Weight) -> Graph:
    """Scale u's out-edges by ``factor``; divide its in-edges and its node
    weight by the same factor.

    The self-loop at u, being both in and out, is left alone.  This is the
    diagonal similarity that divides u's coordinate by ``factor``: walk
    products through u are preserved and the re-weighted node weight feeds
    the recursion exactly as before, so the parallel-feedback measures react
    by scaling u's value only.
    """
    g._require_node(u)
    factor = _coerce_scalar(g, factor, "factor")
    if factor <= 0:
        raise DomainError(f"edge compensation needs a factor > 0, got {factor}")
    out = Graph(g.mode)
    for n, wt in g.node_weights().items():
        out.add_node(n, wt / factor if n == u else wt)
    for a, b, wt in g.edges():
        if a == u and b != u:
            wt = wt * factor
        elif b == u and a != u:
            wt = wt / factor
        out.add_edge(a, b, wt)
    return out


# -- regularization -----------------------------------------------------------


def out_degree_normalize(g: Graph) -> Graph:
    """Divide each edge by its source's out-degree.

    Non-sink nodes become 1-out-regular, and both distributed-feedback
    measures are untouched: the transition matrix is unchanged entry by
    entry.
    """
    out = Graph(g.mode)
    for n, wt in g.node_weights().items():
        out.add_node(n, wt)
    for a, b, wt in g.edges():
        out.add_edge(a, b, wt / g.out_degree(a))
    return out


def ec_regularize(g: Graph) -> Graph:
    """Reweight so the graph becomes lambda-out-regular, with lambda the
    principal eigenvalue.

    Each edge (u, v) is scaled by r(v)/r(u) and each node weight by r(v),
    where r is the eigenvector centrality of the *opposite* graph; the new
    out-degree of u telescopes to exactly lambda everywhere.  Float-only,
    like the eigenvector measure itself, and every component must carry
    positive node weight so that r is strictly positive.
    """
    if g.mode is Mode.RATIONAL:
        raise DomainError(
            "eigenvector-based regularization is float-only; convert with to_float()"
        )
    r = eigenvector_centrality(opposite_graph(g))
    if min(r.values.values(), default=1.0) <= 0:
        raise DomainError(
            "regularization needs positive reverse eigenvector values; "
            "some component has zero total node weight"
        )
    out = Graph(Mode.FLOAT)
    for n, wt in g.node_weights().items():
        out.add_node(n, wt * r[n])
    for a, b, wt in g.edges():
        out.add_edge(a, b, wt * r[b] / r[a])
    return out


# -- impacts and the cycle pipeline -------------------------------------------


def compute_impacts(g: Graph) -> dict[tuple[str, str], Weight]:
    """Impact of each edge: the katz-prestige flow it carries.

    impact(u, v) = KP(u) * c(u, v) / outdeg(u).  At every node the incoming
    impacts sum to the node's katz-prestige, as do the outgoing ones, so
    impacts form a circulation.
    """
    kp = katz_prestige(g)
    return {
        (u, v): kp[u] * wt / g.out_degree(u) for u, v, wt in g.edges()
    }


@dataclass
class ImpactMultigraph:
    """Integer edge multiplicities ``scale * impact`` (scale = lcm of impact
    denominators).  Multiplicities sum to ``scale``, and every node is
    balanced: in-multidegree equals out-multidegree equals
    scale * katz-prestige."""

    node_order: list[str]
    impacts: dict[tuple[str, str], Fraction]
    multiplicity: dict[tuple[str, str], int]
    scale: int

    def out_multidegree(self, v: str) -> int:
        return sum(m for (a, _b), m in self.multiplicity.items() if a == v)


def build_impact_multigraph(g: Graph, max_scale: int = DEFAULT_SCALE_CAP) -> ImpactMultigraph:
    """Clear impact denominators into integer edge multiplicities.

    Rational-mode only, and the node weights must sum to exactly 1 — that
    normalization is what makes the multiplicities sum to the scale itself.
    Every edge needs positive impact (i.e. every strongly connected
    component needs positive total node weight), otherwise zero-multiplicity
    edges would silently fall out of the construction.
    """
    if g.mode is not Mode.RATIONAL:
        raise DomainError("the impact multigraph needs a rational-mode graph")
    total = g.total_node_weight()
    if total != 1:
        raise DomainError(
            f"total node weight must be exactly 1, got {total}; "
            "rescale the node weights first"
        )
    impacts = compute_impacts(g)
    for (u, v), imp in impacts.items():
        if imp <= 0:
            raise DomainError(
                f"edge {u!r} -> {v!r} carries zero impact; every strongly "
                "connected component needs positive total node weight"
            )
    scale = math.lcm(*(imp.denominator for imp in impacts.values()))
    if scale > max_scale:
        raise DomainError(
            f"impact denominators need a scale of {scale}, beyond the cap {max_scale}"
        )
    multiplicity: dict[tuple[str, str], int] = {}
    for edge, imp in impacts.items():
        m = imp * scale
        assert m.denominator == 1
        multiplicity[edge] = int(m)
    assert sum(multiplicity.values()) == scale
    return ImpactMultigraph(g.node_ids, impacts, multiplicity, scale)


def _euler_circuit(targets: dict[str, list[str]], start: str) -> list[str]:
    """Hierholzer's algorithm; targets are consumed in list order.

    Returns the closed walk as a node sequence (first == last).  Assumes the
    multigraph is balanced and connected, which the impact construction
    guarantees per component.
    """
    ptr = {v: 0 for v in targets}
    stack = [start]
    walk: list[str] = []
    while stack:
        v = stack[-1]
        lst = targets.get(v, ())
        if ptr.get(v, 0) < len(lst):
            stack.append(lst[ptr[v]])
            ptr[v] += 1
        else:
            walk.append(stack.pop())
    walk.reverse()
    return walk


@dataclass
class CycleSynthesis:
    """A constant-weight cycle graph equivalent to the source graph.

    ``cycle_graph`` has one directed cycle per source component; each source
    node v appears ``scale * KP(v)`` times, carrying b(v) split evenly over
    the copies, and every edge has the source graph's common out-degree as
    its weight.  ``groups`` maps each source node to its copies in circuit
    order (first copy keeps the source id); ``node_map`` inverts that.
    ``recombine`` folds the groups back and reproduces the source exactly.
    """

    cycle_graph: Graph
    groups: dict[str, list[str]]
    node_map: dict[str, str]
    scale: int
    edge_weight: Fraction
    multigraph: ImpactMultigraph


def synthesize_cycle_graph(
    g: Graph, max_scale: int = DEFAULT_SCALE_CAP
) -> CycleSynthesis:
    """Unroll an out-regular graph into constant-weight cycles.

    Walks an Euler circuit of the impact multigraph in each strongly
    connected component and lays the visits out as a directed cycle.  The
    graph must be out-regular (normalize first if it is not): the common
    out-degree is the only edge weight for which recombination can restore
    the original weights.
    """
    x = out_regularity(g)
    if x is None:
        raise DomainError(
            "cycle synthesis needs an out-regular graph; apply out-degree "
            "normalization first"
        )
    mg = build_impact_multigraph(g, max_scale)
    part = strongly_connected_components(g)

    counts: dict[str, int] = {v: 0 for v in g.node_ids}
    for (u, _v), m in mg.multiplicity.items():
        counts[u] += m

    targets: dict[str, list[str]] = {v: [] for v in g.node_ids}
    for u, v, _wt in g.edges():
        targets[u].extend([v] * mg.multiplicity[(u, v)])

    cycle = Graph(Mode.RATIONAL)
    groups: dict[str, list[str]] = {v: [] for v in g.node_ids}
    node_map: dict[str, str] = {}
    used: set[str] = set()

    def occurrence_name(orig: str) -> str:
        if not groups[orig] and orig not in used:
            return orig
        k = max(len(groups[orig]) + 1, 2)
        while f"{orig}#{k}" in used:
            k += 1
        return f"{orig}#{k}"

    for comp in part.components:
        start = comp[0]
        walk = _euler_circuit({v: targets[v] for v in comp}, start)
        expected = sum(counts[v] for v in comp)
        if len(walk) != expected + 1:
            raise DomainError(
                f"component of {start!r} admits no closed walk covering all "
                "impact multiplicities"
            )
        names: list[str] = []
        for orig in walk[:-1]:
            name = occurrence_name(orig)
            used.add(name)
            groups[orig].append(name)
            node_map[name] = orig
            names.append(name)
            cycle.add_node(name, Fraction(g.node_weight(orig), 1) / counts[orig])
        for i, name in enumerate(names):
            cycle.add_edge(name, names[(i + 1) % len(names)], Fraction(x))

    return CycleSynthesis(cycle, groups, node_map, mg.scale, Fraction(x), mg)


def recombine(synth: CycleSynthesis) -> tuple[Graph, dict[str, Weight]]:
    """Fold a cycle synthesis back together.

    Every cycle node starts with value 1/scale (its katz-prestige: the cycle
    graph has exactly ``scale`` nodes of uniform prestige); combining a
    group then accumulates exactly the source node's prestige, and the
    combined graph equals the source graph weight for weight.
    """
    unit = Fraction(1, synth.scale)
    values = {v: unit for v in synth.cycle_graph.node_ids}
    return combine_groups(synth.cycle_graph, synth.groups, values)


# -- profit -------------------------------------------------------------------


@dataclass(frozen=True)
class ProfitSpec:
    """Arguments of the profit question: what is one in-edge worth?

    ``source_value`` — node weight of the paying node; ``edge_weight`` — the
    edge being priced; ``out_degree`` — the paying node's total out-degree
    (at least the edge weight).
    """

    source_value: Weight
    edge_weight: Weight
    out_degree: Weight

    def __post_init__(self):
        if self.edge_weight <= 0:
            raise DomainError("profit needs a positive edge weight")
        if self.out_degree < self.edge_weight:
            raise DomainError("out-degree cannot be smaller than the edge weight")
        if self.source_value < 0:
            raise DomainError("source value must be non-negative")


def profit_graph(spec: ProfitSpec, mode: Mode) -> Graph:
    """The probe graph behind the profit value.

    A paying node ``src`` holds the source value and spends its out-degree
    on an edge to ``tgt`` (the priced edge) plus, when some out-degree
    remains, one aggregate edge to ``rest``.
    """
    if mode is Mode.RATIONAL:
        x, y, z = (Fraction(t) for t in (spec.source_value, spec.edge_weight, spec.out_degree))
    else:
        x, y, z = (float(t) for t in (spec.source_value, spec.edge_weight, spec.out_degree))
    g = Graph(mode)
    g.add_node("src", x)
    g.add_node("tgt", _zero(mode))
    rest = z - y
    if rest > 0:
        g.add_node("rest", _zero(mode))
    g.add_edge("src", "tgt", y)
    if rest > 0:
        g.add_edge("src", "rest", rest)
    return g


def profit_value(measure: Measure, spec: ProfitSpec) -> Weight:
    """Value the measure assigns to the target of the probe graph.

    Defined for the damped measures (the probe graph is outside the
    undamped measures' classes).  The numeric mode follows the argument
    types: all-rational inputs stay exact.
    """
    if measure.kind not in PARAMETRIC_KINDS:
        raise DomainError(f"profit is not defined for {measure.kind.value}")
    floaty = any(
        isinstance(t, float)
        for t in (spec.source_value, spec.edge_weight, spec.out_degree, measure.alpha)
    )
    mode = Mode.FLOAT if floaty else Mode.RATIONAL
    g = profit_graph(spec, mode)
    alpha = float(measure.alpha) if mode is Mode.FLOAT else Fraction(measure.alpha)
    return Measure(measure.kind, alpha).compute(g)["tgt"]


def profit_decomposition(g: Graph, measure: Measure) -> dict[str, Weight]:
    """Rebuild each node's value as node weight plus in-edge profits.

    On a semi-out-regular graph (every non-sink spends the same total
    out-degree) the damped measures decompose exactly: the value of v is
    b(v) plus the profit of every incoming edge, each priced with the
    source's own value as the source_value.  Self-loops price themselves
    like any other edge.
    """
    if measure.kind not in PARAMETRIC_KINDS:
        raise DomainError(f"profit decomposition is not defined for {measure.kind.value}")
    ok, _r = semi_out_regularity(g)
    if not ok:
        raise DomainError("profit decomposition needs a semi-out-regular graph")
    values = measure.compute(g)
    out: dict[str, Weight] = {}
    for v in g.node_ids:
        acc = g.node_weight(v)
        for u, wt in g.in_edges(v):
            spec = ProfitSpec(values[u], wt, g.out_degree(u))
            acc = acc + profit_value(measure, spec)
        out[v] = acc
    return out
