"""Independent reference implementations used to cross-check the package.

Everything here recomputes results through a different route than the
library: explicit walk enumeration instead of state-vector iteration, dense
numpy eigendecomposition instead of power iteration, least-squares
stationary vectors instead of the replaced-row solve, and networkx for
component structure.  Tests compare the two routes; neither side borrows
code from the other.
"""

from __future__ import annotations

from fractions import Fraction

import networkx as nx
import numpy as np

from feedback_centrality import Graph, Mode, Weight


def _zero(g: Graph) -> Weight:
    return Fraction(0) if g.mode is Mode.RATIONAL else 0.0


def walk_layers(g: Graph, kind: str, steps: int) -> list[dict[str, Weight]]:
    """Per-length walk mass, decay factored out.

    ``layers[L][v]`` is the sum over all directed walks of length exactly L
    ending at v of b(start) times the product of the walk's step factors —
    c(u,w) for the parallel process, c(u,w)/deg+(u) for the distributed one.
    The decayed partial sum at horizon T is then sum(alpha^L * layers[L]).
    """
    if kind not in ("parallel", "distributed"):
        raise ValueError(f"unknown process kind {kind!r}")
    layers = [dict.fromkeys(g.node_ids, _zero(g)) for _ in range(steps + 1)]

    def extend(node: str, length: int, mass: Weight) -> None:
        layers[length][node] = layers[length][node] + mass
        if length == steps:
            return
        for target, w in g.out_edges(node):
            factor = w if kind == "parallel" else w / g.out_degree(node)
            extend(target, length + 1, mass * factor)

    for start in g.node_ids:
        extend(start, 0, g.node_weight(start))
    return layers


def fold_layers(
    layers: list[dict[str, Weight]], alpha: Weight, horizon: int
) -> dict[str, Weight]:
    """Decayed partial sum over walk lengths 0..horizon."""
    nodes = list(layers[0])
    out = {v: layers[0][v] * (alpha**0) for v in nodes}
    for length in range(1, horizon + 1):
        scale = alpha**length
        for v in nodes:
            out[v] = out[v] + scale * layers[length][v]
    return out


def walk_series(
    g: Graph, kind: str, alpha: Weight, steps: int
) -> dict[str, Weight]:
    """Partial sums of the decayed walk process by explicit enumeration."""
    return fold_layers(walk_layers(g, kind, steps), alpha, steps)


def to_networkx(g: Graph) -> nx.DiGraph:
    d = nx.DiGraph()
    d.add_nodes_from(g.node_ids)
    for u, v, w in g.edges():
        d.add_edge(u, v, weight=float(w))
    return d


def nx_components(g: Graph) -> list[set[str]]:
    return [set(c) for c in nx.strongly_connected_components(to_networkx(g))]


def _target_row_adjacency(g: Graph, order: list[str]) -> np.ndarray:
    idx = {v: i for i, v in enumerate(order)}
    a = np.zeros((len(order), len(order)))
    for u, v, w in g.edges():
        if u in idx and v in idx:
            a[idx[v], idx[u]] = float(w)
    return a


def dominant_eig(a: np.ndarray) -> tuple[np.ndarray, np.ndarray, float]:
    """Right and left Perron vectors (sum-normalized) plus the Perron value,
    via dense eigendecomposition.  Intended for irreducible blocks."""
    vals, right = np.linalg.eig(a)
    i = int(np.argmax(vals.real))
    lam = float(vals[i].real)
    x = np.abs(right[:, i].real)
    x = x / x.sum()
    vals_l, left = np.linalg.eig(a.T)
    j = int(np.argmax(vals_l.real))
    y = np.abs(left[:, j].real)
    y = y / y.sum()
    return x, y, lam


def ev_oracle(g: Graph) -> dict[str, float]:
    """Eigenvector centrality via numpy eig, one strongly connected block at
    a time: value = x * (y.b) / (y.x) on each block."""
    out: dict[str, float] = {}
    for comp in nx_components(g):
        order = [v for v in g.node_ids if v in comp]
        a = _target_row_adjacency(g, order)
        x, y, _lam = dominant_eig(a)
        b = np.array([float(g.node_weight(v)) for v in order])
        scale = float(y @ b) / float(y @ x)
        for i, v in enumerate(order):
            out[v] = float(x[i] * scale)
    return out


def stationary_oracle(g: Graph) -> dict[str, float]:
    """Stationary-prestige values via least squares on each component.

    Solves the overdetermined system [M - I; 1] pi = [0; 1] per strongly
    connected component and scales by the component's total node weight.
    """
    out: dict[str, float] = {}
    for comp in nx_components(g):
        order = [v for v in g.node_ids if v in comp]
        idx = {v: i for i, v in enumerate(order)}
        n = len(order)
        m = np.zeros((n, n))
        for u in order:
            deg = float(g.out_degree(u))
            for v, w in g.out_edges(u):
                m[idx[v], idx[u]] = float(w) / deg
        system = np.vstack([m - np.eye(n), np.ones((1, n))])
        rhs = np.zeros(n + 1)
        rhs[-1] = 1.0
        pi, *_ = np.linalg.lstsq(system, rhs, rcond=None)
        mass = sum(float(g.node_weight(v)) for v in order)
        for v in order:
            out[v] = float(pi[idx[v]] * mass)
    return out


def damped_oracle(g: Graph, alpha: float, distributed: bool) -> dict[str, float]:
    """PageRank/Katz values via a dense numpy solve of (I - alpha*W) x = b."""
    order = g.node_ids
    idx = {v: i for i, v in enumerate(order)}
    n = len(order)
    w = np.zeros((n, n))
    for u, v, weight in g.edges():
        value = float(weight)
        if distributed:
            value /= float(g.out_degree(u))
        w[idx[v], idx[u]] = value
    b = np.array([float(g.node_weight(v)) for v in order])
    x = np.linalg.solve(np.eye(n) - alpha * w, b)
    return {v: float(x[idx[v]]) for v in order}
