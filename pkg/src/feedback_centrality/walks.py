"""Token-passing processes whose accumulated series realize the measures.

Both processes start with every node holding its node weight (step 0) and
move amounts along edges, scaled by a decay ``alpha`` per step:

* DISTRIBUTED — a node splits its amount over its out-edges in proportion
  to edge weight; what a sink holds leaves the system.  The step matrix is
  the out-degree-normalized adjacency.
* PARALLEL — every edge transports the full amount times its weight, so a
  node with several out-edges multiplies mass.  The step matrix is the raw
  adjacency.

The bridge to the measures: partial sums of the distributed process with
alpha < 1 solve the pagerank recursion, partial sums of the parallel process
with alpha * lambda < 1 solve the katz recursion, and the long-run averages
of the two undamped processes (alpha = 1, resp. alpha = 1/lambda) yield
katz-prestige and eigenvector centrality.  ``verify_recursion`` checks the
finite-horizon form of these identities exactly.

Float paths run through the compiled kernels; rational-mode graphs are
stepped in pure Python with exact arithmetic.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from ._kernels import run_series, run_totals
from .errors import DomainError
from .graph import (
    Graph,
    Mode,
    Weight,
    adjacency_matrix,
    is_strongly_connected,
    principal_eigenvalue,
    transition_matrix,
)
from .linalg import perron_triple, solve_refined
from .measures import Measure, MeasureKind

#: Katz-side admissibility margin, matching the graph-class margin.
PARALLEL_MARGIN = 1e-6


class ProcessKind(enum.Enum):
    DISTRIBUTED = "distributed"
    PARALLEL = "parallel"


@dataclass
class ProcessState:
    """Snapshot of a process: per-node amounts after ``t`` steps."""

    kind: ProcessKind
    alpha: Weight
    t: int
    amounts: dict[str, Weight]

    def total(self) -> Weight:
        vals = list(self.amounts.values())
        zero: Weight = Fraction(0) if vals and isinstance(vals[0], Fraction) else 0.0
        return sum(vals, zero)


@dataclass
class SeriesAccumulator:
    """Running sums of a process over steps 0..T.

    ``partial_sum`` adds the T+1 states; ``cesaro`` divides that sum by T
    (None when T = 0).  ``last`` is the state at step T, kept so callers can
    extend the series or compute the exact recursion defect.
    """

    kind: ProcessKind
    alpha: Weight
    steps: int
    mode: Mode
    partial_sum: dict[str, Weight]
    last: dict[str, Weight]
    cesaro: dict[str, Weight] | None


def _check_alpha(g: Graph, alpha: Weight) -> None:
    if g.mode is Mode.RATIONAL and isinstance(alpha, float):
        raise TypeError("rational-mode process given a float decay parameter")
    if alpha < 0:
        raise DomainError(f"decay parameter must be non-negative, got {alpha}")


def _step_matrix(g: Graph, kind: ProcessKind) -> np.ndarray:
    """Float step matrix; distributed columns are renormalized to exact sums.

    The renormalization removes the rounding the per-entry division leaves in
    the column sums (mathematically they are exactly 1 for non-sinks), which
    is what keeps long conserved runs drift-free to ~1e-13.
    """
    if kind is ProcessKind.PARALLEL:
        return adjacency_matrix(g)
    m = transition_matrix(g)
    sums = m.sum(axis=0)
    nonzero = sums > 0
    m[:, nonzero] /= sums[nonzero]
    return m


def initial_state(g: Graph, kind: ProcessKind, alpha: Weight) -> ProcessState:
    _check_alpha(g, alpha)
    return ProcessState(kind, alpha, 0, g.node_weights())


def step(g: Graph, state: ProcessState) -> ProcessState:
    """Advance one step in the graph's numeric mode (exact for rational)."""
    distributed = state.kind is ProcessKind.DISTRIBUTED
    zero: Weight = Fraction(0) if g.mode is Mode.RATIONAL else 0.0
    nxt: dict[str, Weight] = {}
    for v in g.node_ids:
        acc = zero
        for u, w in g.in_edges(v):
            share = w * state.amounts[u]
            if distributed:
                share /= g.out_degree(u)
            acc += share
        nxt[v] = state.alpha * acc
    return ProcessState(state.kind, state.alpha, state.t + 1, nxt)


def sum_series(g: Graph, kind: ProcessKind, alpha: Weight, steps: int) -> SeriesAccumulator:
    """Run the process for ``steps`` steps, accumulating the partial sum."""
    _check_alpha(g, alpha)
    if steps < 0:
        raise DomainError("step count must be >= 0")
    order = g.node_ids

    if g.mode is Mode.RATIONAL:
        state = initial_state(g, kind, alpha)
        partial = dict(state.amounts)
        for _ in range(steps):
            state = step(g, state)
            for v in order:
                partial[v] += state.amounts[v]
        last = state.amounts
        cesaro = {v: partial[v] / steps for v in order} if steps >= 1 else None
        return SeriesAccumulator(kind, alpha, steps, g.mode, partial, last, cesaro)

    w = _step_matrix(g, kind)
    b = np.array([float(g.node_weight(v)) for v in order])
    partial_vec, last_vec = run_series(w, b, float(alpha), steps)
    partial = {v: float(partial_vec[i]) for i, v in enumerate(order)}
    last = {v: float(last_vec[i]) for i, v in enumerate(order)}
    cesaro = {v: partial[v] / steps for v in order} if steps >= 1 else None
    return SeriesAccumulator(kind, alpha, steps, g.mode, partial, last, cesaro)


def total_per_step(g: Graph, kind: ProcessKind, alpha: Weight, steps: int) -> list[Weight]:
    """Total amount in the system at each of steps 0..T.

    For the distributed process with alpha = 1 on a sink-free graph this
    sequence is constant — exactly so in rational mode.
    """
    _check_alpha(g, alpha)
    if steps < 0:
        raise DomainError("step count must be >= 0")
    if g.mode is Mode.RATIONAL:
        state = initial_state(g, kind, alpha)
        totals = [state.total()]
        for _ in range(steps):
            state = step(g, state)
            totals.append(state.total())
        return totals
    w = _step_matrix(g, kind)
    b = np.array([float(g.node_weight(v)) for v in g.node_ids])
    totals_vec, _last = run_totals(w, b, float(alpha), steps)
    return [float(t) for t in totals_vec]


def geometric_tail_bound(
    g: Graph, kind: ProcessKind, alpha: Weight, steps: int
) -> dict[str, float]:
    """Rigorous per-node upper bound on the mass arriving after step T.

    Distributed, alpha < 1: each step multiplies the system total by at most
    alpha, so node v's tail is below alpha^(T+1)/(1-alpha) times the initial
    total.  Parallel: on a strongly connected graph the left Perron vector y
    gives the exact decay rate alpha*lambda and the bound (alpha*lambda)^(T+1)
    / (1 - alpha*lambda) * (y.b)/y_v; otherwise z = (I - alpha*A^T)^-1 1 >= 1
    majorizes the step (alpha*A^T z = z - 1 <= theta*z with theta =
    1 - 1/max(z) < 1), giving the same shape of bound with z in place of y.
    """
    _check_alpha(g, alpha)
    order = g.node_ids
    b = np.array([float(g.node_weight(v)) for v in order])

    if kind is ProcessKind.DISTRIBUTED:
        a = float(alpha)
        if a >= 1:
            raise DomainError("distributed tail bound needs alpha < 1")
        tail = a ** (steps + 1) / (1.0 - a) * float(b.sum())
        return {v: tail for v in order}

    a = float(alpha)
    _lams, lam = principal_eigenvalue(g)
    if a * lam > 1.0 - PARALLEL_MARGIN:
        raise DomainError(
            f"parallel tail bound needs alpha * lambda <= 1 - {PARALLEL_MARGIN:g}, "
            f"got {a * lam:.12g}"
        )
    if a == 0.0:
        return {v: 0.0 for v in order}

    if is_strongly_connected(g):
        _x, y, lam_exact = perron_triple(adjacency_matrix(g))
        rate = a * lam_exact
        scale = rate ** (steps + 1) / (1.0 - rate) * float(y @ b)
        return {v: scale / float(y[i]) for i, v in enumerate(order)}

    at = adjacency_matrix(g).T
    z = solve_refined(np.eye(len(order)) - a * at, np.ones(len(order)))
    theta = 1.0 - 1.0 / float(z.max())
    if theta <= 0.0:
        return {v: 0.0 for v in order}
    scale = theta ** (steps + 1) / (1.0 - theta) * float(z @ b)
    return {v: scale / float(z[i]) for i, v in enumerate(order)}


@dataclass
class RecursionCheck:
    """Outcome of matching a finite series against a measure's recursion.

    ``residual`` is the defect of the recursion at the chosen series vector;
    ``predicted`` is its closed form in terms of the step-(T+1) state — the
    two must agree to rounding (exactly, in rational mode)."""

    measure: Measure
    series_field: str
    residual: dict[str, Weight]
    predicted: dict[str, Weight]
    max_residual: float
    max_mismatch: float


def verify_recursion(
    g: Graph, kind: ProcessKind, alpha: Weight, steps: int
) -> RecursionCheck:
    """Check the series-vs-recursion identity at horizon T.

    Writing x for the partial sum up to T and W for the step matrix:
    x - alpha*W*x - b = -p(T+1), always.  Divided by T this becomes the
    undamped statement for the Cesaro average m = x/T: m - W*m =
    (b - p(T+1))/T.  The branch taken (and the measure the series is
    converging to) is picked by the decay:

    * distributed, alpha < 1      -> pagerank(alpha), partial sum
    * distributed, alpha = 1      -> katz-prestige, cesaro average
    * parallel, alpha*lambda <= 1 - 1e-6          -> katz(alpha), partial sum
    * parallel, alpha*lambda within 1e-6 of 1     -> eigenvector, cesaro
    * anything else -> DomainError
    """
    _check_alpha(g, alpha)
    if steps < 0:
        raise DomainError("step count must be >= 0")

    if kind is ProcessKind.DISTRIBUTED:
        if alpha < 1:
            measure = Measure(MeasureKind.PAGERANK, alpha)
            use_cesaro = False
        elif alpha == 1:
            measure = Measure(MeasureKind.KATZ_PRESTIGE)
            use_cesaro = True
        else:
            raise DomainError(
                f"distributed series with alpha = {alpha} matches no measure"
            )
    else:
        _lams, lam = principal_eigenvalue(g)
        product = float(alpha) * lam
        if product <= 1.0 - PARALLEL_MARGIN:
            measure = Measure(MeasureKind.KATZ, alpha)
            use_cesaro = False
        elif abs(product - 1.0) <= PARALLEL_MARGIN:
            measure = Measure(MeasureKind.EIGENVECTOR)
            use_cesaro = True
        else:
            raise DomainError(
                f"parallel series with alpha * lambda = {product:.12g} matches no measure"
            )
    if use_cesaro and steps < 1:
        raise DomainError("the cesaro branch needs at least one step")

    series = sum_series(g, kind, alpha, steps)
    after = step(g, ProcessState(kind, alpha, steps, series.last))
    order = g.node_ids

    vector = series.cesaro if use_cesaro else series.partial_sum
    assert vector is not None
    distributed = kind is ProcessKind.DISTRIBUTED

    residual: dict[str, Weight] = {}
    for v in order:
        zero: Weight = Fraction(0) if g.mode is Mode.RATIONAL else 0.0
        acc = zero
        for u, w in g.in_edges(v):
            share = w * vector[u]
            if distributed:
                share /= g.out_degree(u)
            acc += share
        defect = vector[v] - alpha * acc
        if not use_cesaro:
            defect -= g.node_weight(v)
        residual[v] = defect

    if use_cesaro:
        predicted = {
            v: (g.node_weight(v) - after.amounts[v]) / steps for v in order
        }
    else:
        predicted = {v: -after.amounts[v] for v in order}

    max_residual = max(abs(float(residual[v])) for v in order) if order else 0.0
    max_mismatch = (
        max(abs(float(residual[v] - predicted[v])) for v in order) if order else 0.0
    )
    return RecursionCheck(
        measure,
        "cesaro" if use_cesaro else "partial_sum",
        residual,
        predicted,
        max_residual,
        max_mismatch,
    )
