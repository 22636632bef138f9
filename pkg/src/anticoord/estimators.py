"""scikit-learn style wrappers.

Each estimator is fit on one graph, given either as a :class:`Graph` or as a
square 0/1 adjacency matrix (symmetric means undirected).
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_array, check_is_fitted

from .game import classify, run_dynamics
from .graph import Graph, from_adjacency
from .search import DEFAULT_BUDGET, MODES, enumerate_stable, price_of_anarchy


def check_graph(X) -> Graph:
    """Return ``X`` as a Graph, validating adjacency-matrix input."""
    if isinstance(X, Graph):
        return X
    a = check_array(X, ensure_2d=True, dtype=None, ensure_min_samples=1, ensure_min_features=1)
    return from_adjacency(a)


def _check_k(k) -> int:
    if not isinstance(k, (int, np.integer)) or k < 2:
        raise ValueError(f"n_colors must be an integer >= 2, got {k!r}")
    return int(k)


class BestResponseColoring(BaseEstimator):
    """Stable coloring found by greedy best-response dynamics.

    Parameters
    ----------
    n_colors : int
        Number of colors ``k``.
    init : {"all1", "random"}
        Start from all vertices colored 1, or uniformly at random.
    max_steps : int or None
        Recoloring cap; None means the default cap (none for undirected graphs).
    random_state : int or None
        Seed for ``init="random"``.

    Attributes
    ----------
    coloring_ : Coloring
    labels_ : ndarray of shape (n,)
    trace_ : DynamicsTrace
    converged_ : bool
    n_steps_ : int
    stability_ : Stability
    """

    def __init__(self, n_colors=2, init="all1", max_steps=None, random_state=None):
        self.n_colors = n_colors
        self.init = init
        self.max_steps = max_steps
        self.random_state = random_state

    def fit(self, X, y=None):
        g = check_graph(X)
        k = _check_k(self.n_colors)
        if self.init == "all1":
            start = None
        elif self.init == "random":
            start = 0 if self.random_state is None else int(self.random_state)
        else:
            raise ValueError(f"init must be 'all1' or 'random', got {self.init!r}")
        self.trace_ = run_dynamics(g, k, init=start, max_steps=self.max_steps)
        self.coloring_ = self.trace_.final
        self.labels_ = np.asarray(self.coloring_.colors, dtype=np.int64)
        self.converged_ = self.trace_.converged
        self.n_steps_ = len(self.trace_)
        report = classify(g, self.coloring_)
        self.stability_ = report.overall
        self.welfare_ = report.welfare
        return self

    def predict(self, X=None):
        check_is_fitted(self, "labels_")
        return self.labels_.copy()

    def fit_predict(self, X, y=None):
        return self.fit(X).predict()


class EquilibriumEnumerator(BaseEstimator):
    """Every stable (or strictly stable) coloring of a graph, by exhaustive search."""

    def __init__(self, n_colors=2, mode="stable", budget=DEFAULT_BUDGET, representatives=False):
        self.n_colors = n_colors
        self.mode = mode
        self.budget = budget
        self.representatives = representatives

    def fit(self, X, y=None):
        g = check_graph(X)
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}, got {self.mode!r}")
        self.equilibria_ = enumerate_stable(g, _check_k(self.n_colors), self.mode, self.budget, self.representatives)
        self.n_equilibria_ = len(self.equilibria_)
        self.n_vertices_ = g.n
        return self

    def transform(self, X=None):
        """Equilibria as rows of an ``(n_equilibria, n)`` integer array."""
        check_is_fitted(self, "equilibria_")
        if not self.equilibria_:
            return np.zeros((0, self.n_vertices_), dtype=np.int64)
        return np.array([c.colors for c in self.equilibria_], dtype=np.int64)

    def fit_transform(self, X, y=None):
        return self.fit(X).transform()


class PriceOfAnarchy(BaseEstimator):
    """Exact price of anarchy of the k-color game on a graph."""

    def __init__(self, n_colors=2, budget=DEFAULT_BUDGET):
        self.n_colors = n_colors
        self.budget = budget

    def fit(self, X, y=None):
        g = check_graph(X)
        self.result_ = price_of_anarchy(g, _check_k(self.n_colors), self.budget)
        self.ratio_ = self.result_.ratio
        self.max_welfare_ = self.result_.max_welfare
        self.min_stable_welfare_ = self.result_.min_stable_welfare
        return self

    def score(self, X=None, y=None):
        check_is_fitted(self, "ratio_")
        return float(self.ratio_)
