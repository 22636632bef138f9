"""Payoffs, stability classification and best-response dynamics."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Optional, Sequence, Union

import numpy as np

from .exceptions import ColoringError, DirectedUnsupportedError, InvalidInitError
from .graph import Coloring, Graph, check_coloring


class Stability(str, enum.Enum):
    UNSTABLE = "unstable"
    STABLE_NON_STRICT = "stable-non-strict"
    STRICTLY_STABLE = "strictly-stable"

    def __str__(self) -> str:
        return self.value


def color_counts(g: Graph, c: Coloring, v: int) -> list[int]:
    """``counts[m - 1]`` = number of out-neighbors of ``v`` colored ``m``."""
    counts = [0] * c.k
    for w in g.out_neighbors(v):
        counts[c.colors[w - 1] - 1] += 1
    return counts


def payoff(g: Graph, c: Coloring, v: int) -> int:
    check_coloring(g, c)
    own = c[v]
    return sum(1 for w in g.out_neighbors(v) if c.colors[w - 1] != own)


def social_welfare(g: Graph, c: Coloring) -> int:
    check_coloring(g, c)
    cols = c.colors
    return sum(1 for v, w in g.arcs() if cols[v - 1] != cols[w - 1])


def potential(g: Graph, c: Coloring) -> int:
    """Number of properly colored edges (undirected graphs only)."""
    if g.directed:
        raise DirectedUnsupportedError("the potential is only defined for undirected graphs")
    check_coloring(g, c)
    cols = c.colors
    return sum(1 for v, w in g.edges() if cols[v - 1] != cols[w - 1])


def best_response_set(g: Graph, c: Coloring, v: int) -> frozenset:
    check_coloring(g, c)
    counts = color_counts(g, c, v)
    low = min(counts)
    return frozenset(m for m, x in enumerate(counts, start=1) if x == low)


def is_unhappy(g: Graph, c: Coloring, v: int) -> bool:
    return c[v] not in best_response_set(g, c, v)


def pigeonhole_bound(out_degree: int, k: int) -> int:
    """Smallest payoff a best-responding vertex can have: ceil(deg * (k-1) / k)."""
    return -(-out_degree * (k - 1) // k)


@dataclass(frozen=True)
class StabilityReport:
    best_responses: tuple  # frozenset of colors per vertex
    payoffs: tuple
    unhappy: tuple
    overall: Stability

    @property
    def is_stable(self) -> bool:
        return self.overall is not Stability.UNSTABLE

    @property
    def is_strict(self) -> bool:
        return self.overall is Stability.STRICTLY_STABLE

    @property
    def unhappy_vertices(self) -> list[int]:
        return [v for v, flag in enumerate(self.unhappy, start=1) if flag]

    @property
    def welfare(self) -> int:
        return sum(self.payoffs)


def classify(g: Graph, c: Coloring) -> StabilityReport:
    check_coloring(g, c)
    brs, pays, unhappy = [], [], []
    for v in g.vertices:
        counts = color_counts(g, c, v)
        low = min(counts)
        br = frozenset(m for m, x in enumerate(counts, start=1) if x == low)
        own = c.colors[v - 1]
        brs.append(br)
        pays.append(len(g.out[v - 1]) - counts[own - 1])
        unhappy.append(own not in br)
    if any(unhappy):
        overall = Stability.UNSTABLE
    elif all(len(br) == 1 for br in brs):
        overall = Stability.STRICTLY_STABLE
    else:
        overall = Stability.STABLE_NON_STRICT
    return StabilityReport(tuple(brs), tuple(pays), tuple(unhappy), overall)


class Step(NamedTuple):
    vertex: int
    old: int
    new: int
    phi_before: Optional[int]
    phi_after: Optional[int]


@dataclass(frozen=True)
class DynamicsTrace:
    steps: tuple
    converged: bool
    final: Coloring

    def __len__(self) -> int:
        return len(self.steps)


def _initial_coloring(g: Graph, k: int, init) -> np.ndarray:
    if init is None:
        return np.ones(g.n, dtype=np.int64)
    if isinstance(init, (int, np.integer)) and not isinstance(init, bool):
        rng = np.random.Generator(np.random.PCG64(int(init)))
        return rng.integers(1, k + 1, size=g.n).astype(np.int64)
    colors = init.colors if isinstance(init, Coloring) else tuple(init)
    if isinstance(init, Coloring) and init.k != k:
        raise InvalidInitError(f"initial coloring uses k={init.k}, dynamics run with k={k}")
    if len(colors) != g.n:
        raise InvalidInitError(f"initial coloring has length {len(colors)}, graph has {g.n} vertices")
    arr = np.asarray(colors, dtype=np.int64)
    if arr.size and (arr.min() < 1 or arr.max() > k):
        raise InvalidInitError(f"initial colors must lie in 1..{k}")
    return arr


def run_dynamics(
    g: Graph,
    k: int,
    init: Union[None, int, Coloring, Sequence[int]] = None,
    max_steps: Optional[int] = None,
) -> DynamicsTrace:
    """Greedy best-response dynamics.

    While some vertex is unhappy, the lowest-numbered one switches to the
    smallest color among its best responses. ``init`` is a coloring, a seed for
    a uniform random start, or None for all vertices colored 1. Directed runs
    are capped at ``10 * n * k`` recolorings unless ``max_steps`` says
    otherwise; undirected runs need no cap since each step raises the
    potential.
    """
    if k < 2:
        raise ColoringError(f"dynamics need k >= 2, got {k}")
    colors = _initial_coloring(g, k, init)
    n = g.n
    if max_steps is None and g.directed:
        max_steps = 10 * n * k
    if n == 0:
        return DynamicsTrace((), True, Coloring(k, ()))

    a = g.adjacency.astype(np.int64)
    onehot = np.zeros((n, k), dtype=np.int64)
    onehot[np.arange(n), colors - 1] = 1
    counts = a @ onehot
    ins = [np.asarray(g.in_neighbors(v), dtype=np.int64) - 1 for v in g.vertices]
    idx = np.arange(n)
    unhappy = counts[idx, colors - 1] > counts.min(axis=1)
    phi = None if g.directed else int(np.sum(a * (colors[:, None] != colors[None, :]))) // 2

    steps = []
    converged = False
    while True:
        if not unhappy.any():
            converged = True
            break
        if max_steps is not None and len(steps) >= max_steps:
            break
        v = int(np.argmax(unhappy))
        old = int(colors[v])
        row = counts[v]
        new = int(np.argmin(row)) + 1
        gain = int(row[old - 1] - row[new - 1])
        colors[v] = new
        nb = ins[v]
        counts[nb, old - 1] -= 1
        counts[nb, new - 1] += 1
        touched = np.append(nb, v)
        unhappy[touched] = counts[touched, colors[touched] - 1] > counts[touched].min(axis=1)
        if phi is None:
            steps.append(Step(v + 1, old, new, None, None))
        else:
            steps.append(Step(v + 1, old, new, phi, phi + gain))
            phi += gain
    return DynamicsTrace(tuple(steps), converged, Coloring(k, tuple(int(x) for x in colors)))


def lower_welfare_bound(g: Graph, k: int) -> int:
    """Welfare every stable coloring reaches by the pigeonhole argument."""
    return sum(pigeonhole_bound(int(d), k) for d in g.out_degrees)


def poa_upper_bound(k: int) -> Fraction:
    return Fraction(k, k - 1)


__all__ = [
    "Stability",
    "StabilityReport",
    "Step",
    "DynamicsTrace",
    "payoff",
    "social_welfare",
    "potential",
    "best_response_set",
    "is_unhappy",
    "classify",
    "run_dynamics",
    "color_counts",
    "pigeonhole_bound",
    "lower_welfare_bound",
    "poa_upper_bound",
]
