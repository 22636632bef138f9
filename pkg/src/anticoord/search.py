"""Exhaustive and pruned search over colorings, plus the brute-force oracles.

Exhaustive routines walk the ``k**n`` colorings in lexicographic order (vertex
1 is the most significant digit) in numpy chunks. ``search_stable`` is a
complete backtracking search with constraint propagation and scales to the
reduction outputs that are far too large to enumerate.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Optional, Sequence

import numpy as np

from .exceptions import (
    BudgetExceededError,
    DirectedUnsupportedError,
    GraphError,
    NoEquilibriumError,
    OddOrderError,
    TooLargeError,
    TooManyVariablesError,
)
from .game import classify
from .graph import Coloring, Graph

DEFAULT_BUDGET = 10**8
MODES = ("stable", "strict")
_CHUNK_CELLS = 1 << 21  # colorings per chunk times n*k


def _is_strict_mode(mode: str) -> bool:
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}, got {mode!r}")
    return mode == "strict"


def _check_budget(g: Graph, k: int, budget: int) -> int:
    total = k**g.n
    if total > budget:
        raise BudgetExceededError(total, budget)
    return total


@dataclass
class _Chunk:
    start: int
    colors: np.ndarray  # (B, n), 0-based colors
    stable: np.ndarray
    strict: np.ndarray
    welfare: np.ndarray


def _scan(g: Graph, k: int, budget: int) -> Iterator[_Chunk]:
    total = _check_budget(g, k, budget)
    n = g.n
    if n == 0:
        yield _Chunk(0, np.zeros((1, 0), np.int8), np.ones(1, bool), np.ones(1, bool), np.zeros(1, np.int64))
        return
    adj = g.adjacency.astype(np.float32)
    outdeg = g.out_degrees
    place = k ** np.arange(n - 1, -1, -1, dtype=np.int64)
    step = max(1, _CHUNK_CELLS // (n * k))
    palette = np.arange(k, dtype=np.int8)
    for start in range(0, total, step):
        idx = np.arange(start, min(start + step, total), dtype=np.int64)
        colors = ((idx[:, None] // place[None, :]) % k).astype(np.int8)
        onehot = (colors[:, :, None] == palette).astype(np.float32)
        counts = np.matmul(adj, onehot)
        own = np.take_along_axis(counts, colors[:, :, None].astype(np.int64), axis=2)[:, :, 0]
        low = counts.min(axis=2)
        ok = own == low
        stable = ok.all(axis=1)
        unique = (counts == low[:, :, None]).sum(axis=2) == 1
        strict = (ok & unique).all(axis=1)
        welfare = (outdeg[None, :] - own.astype(np.int64)).sum(axis=1)
        yield _Chunk(start, colors, stable, strict, welfare)


def _to_coloring(row: np.ndarray, k: int) -> Coloring:
    return Coloring(k, tuple(int(x) + 1 for x in row))


def _canonical_mask(colors: np.ndarray) -> np.ndarray:
    """Rows whose colors first appear in the order 1, 2, 3, ... (one per orbit)."""
    if colors.shape[1] == 0:
        return np.ones(colors.shape[0], bool)
    c = colors.astype(np.int16)
    prev_max = np.maximum.accumulate(c, axis=1)
    prev_max = np.concatenate([np.full((c.shape[0], 1), -1, np.int16), prev_max[:, :-1]], axis=1)
    return (c <= prev_max + 1).all(axis=1)


def enumerate_stable(
    g: Graph,
    k: int,
    mode: str = "stable",
    budget: int = DEFAULT_BUDGET,
    representatives: bool = False,
) -> list[Coloring]:
    """All stable (or strictly stable) colorings in lexicographic order.

    With ``representatives=True`` only one coloring per color-permutation
    orbit is kept, namely the one whose colors first appear as 1, 2, 3, ...
    """
    strict = _is_strict_mode(mode)
    found = []
    for chunk in _scan(g, k, budget):
        mask = chunk.strict if strict else chunk.stable
        if representatives:
            mask = mask & _canonical_mask(chunk.colors)
        found.extend(_to_coloring(row, k) for row in chunk.colors[mask])
    return found


def count_stable(g: Graph, k: int, mode: str = "stable", budget: int = DEFAULT_BUDGET) -> int:
    strict = _is_strict_mode(mode)
    return int(sum(int((c.strict if strict else c.stable).sum()) for c in _scan(g, k, budget)))


def first_stable(g: Graph, k: int, mode: str = "stable", budget: int = DEFAULT_BUDGET) -> Optional[Coloring]:
    """Lexicographically first coloring meeting ``mode``, by exhaustive scan."""
    strict = _is_strict_mode(mode)
    for chunk in _scan(g, k, budget):
        hits = np.flatnonzero(chunk.strict if strict else chunk.stable)
        if hits.size:
            return _to_coloring(chunk.colors[hits[0]], k)
    return None


def max_welfare(g: Graph, k: int, budget: int = DEFAULT_BUDGET) -> tuple[int, Coloring]:
    best, witness = -1, None
    for chunk in _scan(g, k, budget):
        i = int(np.argmax(chunk.welfare))
        if chunk.welfare[i] > best:
            best, witness = int(chunk.welfare[i]), chunk.colors[i].copy()
    return best, _to_coloring(witness, k)


@dataclass(frozen=True)
class PoaResult:
    max_welfare: int
    min_stable_welfare: int
    ratio: Fraction
    best: Coloring
    worst: Coloring
    n_stable: int


def price_of_anarchy(g: Graph, k: int, budget: int = DEFAULT_BUDGET) -> PoaResult:
    """Exact ratio of optimal welfare to the worst equilibrium welfare."""
    if g.m == 0:
        raise GraphError("price of anarchy needs a graph with at least one edge")
    best, best_c = -1, None
    worst, worst_c = None, None
    n_stable = 0
    for chunk in _scan(g, k, budget):
        i = int(np.argmax(chunk.welfare))
        if chunk.welfare[i] > best:
            best, best_c = int(chunk.welfare[i]), chunk.colors[i].copy()
        hits = np.flatnonzero(chunk.stable)
        n_stable += hits.size
        if hits.size:
            j = hits[int(np.argmin(chunk.welfare[hits]))]
            if worst is None or chunk.welfare[j] < worst:
                worst, worst_c = int(chunk.welfare[j]), chunk.colors[j].copy()
    if worst is None:
        raise NoEquilibriumError("the graph has no stable coloring")
    # an equilibrium pays every vertex at least ceil(deg (k-1)/k), so with an arc this is positive
    assert worst > 0, "stable coloring with zero welfare on a graph with arcs"
    return PoaResult(best, worst, Fraction(best, worst), _to_coloring(best_c, k), _to_coloring(worst_c, k), n_stable)


# ---------------------------------------------------------------------------
# pruned search


def weak_components(g: Graph) -> list[list[int]]:
    seen = [False] * (g.n + 1)
    comps = []
    for s in g.vertices:
        if seen[s]:
            continue
        seen[s] = True
        stack, comp = [s], []
        while stack:
            v = stack.pop()
            comp.append(v)
            for w in itertools.chain(g.out_neighbors(v), g.in_neighbors(v)):
                if not seen[w]:
                    seen[w] = True
                    stack.append(w)
        comps.append(sorted(comp))
    return comps


class _Propagator:
    """Domains are bitmasks over colors (bit ``m`` is color ``m + 1``)."""

    def __init__(self, g: Graph, k: int, strict: bool):
        self.k = k
        self.strict = int(strict)
        self.out = [None] + [g.out_neighbors(v) for v in g.vertices]
        self.ins = [None] + [g.in_neighbors(v) for v in g.vertices]
        subsets = {}
        for c in range(k):
            others = [m for m in range(k) if m != c]
            subsets[c] = others
        self.others = subsets

    def feasible(self, w: int, c: int, doms: list) -> bool:
        """Can ``w`` colored ``c`` meet the mode for some completion of its out-neighbors?

        Avoiding ``c`` never hurts ``w``, so each neighbor with one option
        besides ``c`` is counted there; the rest are spread over the colors
        short of the target count, which is a b-matching settled by Hall's
        condition over subsets of those colors.
        """
        k = self.k
        cnt = [0] * k
        cbit = 1 << c
        flex = []
        for u in self.out[w]:
            opts = doms[u] & ~cbit
            if opts == 0:
                cnt[c] += 1
            elif opts & (opts - 1) == 0:
                cnt[opts.bit_length() - 1] += 1
            else:
                flex.append(opts)
        need = cnt[c] + self.strict
        short = [(m, need - cnt[m]) for m in self.others[c] if cnt[m] < need]
        if not short:
            return True
        if sum(d for _, d in short) > len(flex):
            return False
        if len(short) == 1:
            m, d = short[0]
            return sum(1 for f in flex if f >> m & 1) >= d
        for r in range(1, len(short) + 1):
            for sub in itertools.combinations(short, r):
                mask = 0
                demand = 0
                for m, d in sub:
                    mask |= 1 << m
                    demand += d
                if sum(1 for f in flex if f & mask) < demand:
                    return False
        return True

    def propagate(self, doms: list, queue: set) -> bool:
        """Prune domains to a fixpoint; False on a wipeout."""
        k = self.k
        while queue:
            w = queue.pop()
            dw = doms[w]
            keep = 0
            for c in range(k):
                if dw >> c & 1 and self.feasible(w, c, doms):
                    keep |= 1 << c
            if keep == 0:
                return False
            changed = []
            if keep != dw:
                doms[w] = keep
                changed.append(w)
            colors_w = [c for c in range(k) if keep >> c & 1]
            for u in self.out[w]:
                du = doms[u]
                if du & (du - 1) == 0:
                    continue
                prune = 0
                for d in range(k):
                    if not du >> d & 1:
                        continue
                    doms[u] = 1 << d
                    if not any(self.feasible(w, c, doms) for c in colors_w):
                        prune |= 1 << d
                    doms[u] = du
                if prune:
                    if du & ~prune == 0:
                        return False
                    doms[u] = du & ~prune
                    changed.append(u)
            for x in changed:
                queue.add(x)
                queue.update(self.ins[x])
        return True


def search_stable(g: Graph, k: int, mode: str = "stable") -> Optional[Coloring]:
    """A coloring meeting ``mode`` if one exists, else None.

    Complete backtracking search, run independently per weakly connected
    component. Vertices are branched on in descending degree order after
    propagation has fixed everything it can; the first branch of each
    component is restricted to color 1 since equilibria are closed under
    color permutations.
    """
    strict = _is_strict_mode(mode)
    if k < 1:
        raise ValueError("k must be positive")
    prop = _Propagator(g, k, strict)
    full = (1 << k) - 1
    degree = {v: len(g.out_neighbors(v)) + len(g.in_neighbors(v)) for v in g.vertices}
    result = [0] * (g.n + 1)

    for comp in weak_components(g):
        order = sorted(comp, key=lambda v: (-degree[v], v))
        doms = [0] * (g.n + 1)
        for v in comp:
            doms[v] = full
        if not prop.propagate(doms, set(comp)):
            return None
        solved = _backtrack(prop, doms, order, comp, full)
        if solved is None:
            return None
        for v in comp:
            result[v] = solved[v].bit_length()
    coloring = Coloring(k, tuple(result[1:]))
    report = classify(g, coloring)
    assert report.is_strict if strict else report.is_stable, "search returned a non-equilibrium"
    return coloring


def _backtrack(prop: _Propagator, doms: list, order: list, comp: list, full: int):
    branch = next((v for v in order if doms[v] & (doms[v] - 1)), None)
    if branch is None:
        return doms
    symmetric = all(doms[v] == full for v in comp)
    d = doms[branch]
    for c in range(prop.k):
        if not d >> c & 1:
            continue
        child = list(doms)
        child[branch] = 1 << c
        queue = {branch, *prop.ins[branch]}
        if prop.propagate(child, queue):
            solved = _backtrack(prop, child, order, comp, full)
            if solved is not None:
                return solved
        if symmetric:
            break
    return None


# ---------------------------------------------------------------------------
# independent oracles


@dataclass(frozen=True)
class Cnf:
    """3-CNF formula; literals are DIMACS-style signed variable ids."""

    num_vars: int
    clauses: tuple

    def __post_init__(self):
        clauses = tuple(tuple(int(x) for x in cl) for cl in self.clauses)
        for i, cl in enumerate(clauses, start=1):
            if len(cl) != 3:
                raise ValueError(f"clause {i} has {len(cl)} literals, expected 3")
            for lit in cl:
                if lit == 0 or abs(lit) > self.num_vars:
                    raise ValueError(f"clause {i} has literal {lit} outside 1..{self.num_vars}")
        object.__setattr__(self, "clauses", clauses)

    def satisfied_by(self, assignment: Sequence[bool]) -> bool:
        return all(any(assignment[abs(l) - 1] == (l > 0) for l in cl) for cl in self.clauses)

    def __str__(self) -> str:
        def lit(l):
            return f"x{abs(l)}" if l > 0 else f"~x{abs(l)}"

        return " & ".join("(" + " | ".join(lit(l) for l in cl) + ")" for cl in self.clauses) or "T"


MAX_SAT_VARS = 24


def sat_brute_force(f: Cnf) -> Optional[tuple]:
    """First satisfying assignment (as bools, variable 1 first) over all 2**vars, else None."""
    nv = f.num_vars
    if nv > MAX_SAT_VARS:
        raise TooManyVariablesError(f"{nv} variables exceeds the brute-force limit of {MAX_SAT_VARS}")
    total = 1 << nv
    step = 1 << 18
    shifts = np.arange(nv - 1, -1, -1, dtype=np.int64)
    for start in range(0, total, step):
        idx = np.arange(start, min(start + step, total), dtype=np.int64)
        # variable 1 is the most significant bit, so all-false comes first
        bits = ((idx[:, None] >> shifts[None, :]) & 1).astype(bool)
        ok = np.ones(idx.size, bool)
        for cl in f.clauses:
            sat = np.zeros(idx.size, bool)
            for l in cl:
                col = bits[:, abs(l) - 1]
                sat |= col if l > 0 else ~col
            ok &= sat
        hits = np.flatnonzero(ok)
        if hits.size:
            return tuple(bool(b) for b in bits[hits[0]])
    return None


def proper_colorable(g: Graph, k: int) -> Optional[Coloring]:
    """A proper ``k``-coloring by backtracking (most constrained vertex first), else None."""
    if g.directed:
        raise DirectedUnsupportedError("proper coloring is defined here for undirected graphs")
    if g.n == 0:
        return Coloring(k, ())
    colors = [0] * (g.n + 1)

    def pick():
        best, key = None, None
        for v in g.vertices:
            if colors[v]:
                continue
            used = {colors[w] for w in g.out_neighbors(v) if colors[w]}
            cand = (-len(used), -len(g.out_neighbors(v)), v)
            if key is None or cand < key:
                best, key = v, cand
        return best

    def solve(n_left):
        if n_left == 0:
            return True
        v = pick()
        used = {colors[w] for w in g.out_neighbors(v)}
        top = max(colors) + 1  # colors never used yet are interchangeable
        for c in range(1, min(k, top) + 1):
            if c in used:
                continue
            colors[v] = c
            if solve(n_left - 1):
                return True
        colors[v] = 0
        return False

    if solve(g.n):
        return Coloring(k, tuple(colors[1:]))
    return None


MAX_PARTITION_ORDER = 24


def balanced_unfriendly_exists(g: Graph) -> Optional[tuple[frozenset, frozenset]]:
    """An equal-halves bipartition with every vertex having at least as many
    neighbors across as on its own side, by exhaustive search; else None."""
    if g.directed:
        raise DirectedUnsupportedError("balanced unfriendly partitions are for undirected graphs")
    n = g.n
    if n % 2:
        raise OddOrderError(f"balanced partition needs an even vertex count, got {n}")
    if n > MAX_PARTITION_ORDER:
        raise TooLargeError(f"{n} vertices exceeds the exhaustive limit of {MAX_PARTITION_ORDER}")
    if n == 0:
        return frozenset(), frozenset()
    nbr = [0] * (n + 1)
    for v in g.vertices:
        for w in g.out_neighbors(v):
            nbr[v] |= 1 << w
    everyone = sum(1 << v for v in g.vertices)
    # vertex 1 sits in the first half; swapping halves covers the rest
    for rest in itertools.combinations(range(2, n + 1), n // 2 - 1):
        side = 1 << 1
        for v in rest:
            side |= 1 << v
        other = everyone & ~side
        good = True
        for v in g.vertices:
            mine = side if side >> v & 1 else other
            same = bin(nbr[v] & mine).count("1")
            if same > len(g.out_neighbors(v)) - same:
                good = False
                break
        if good:
            a = frozenset(v for v in g.vertices if side >> v & 1)
            return a, frozenset(g.vertices) - a
    return None
