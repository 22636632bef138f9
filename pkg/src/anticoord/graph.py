"""Graphs, colorings and deterministic constructors.

Vertices are numbered ``1..n``. An undirected graph keeps both orientations of
each edge in its out-neighbor lists, so every payoff computation can treat the
two cases alike.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .exceptions import (
    ColoringError,
    DirectednessMismatchError,
    DuplicateArcError,
    GraphError,
    SelfLoopError,
    VertexOutOfRangeError,
)


@dataclass(frozen=True)
class Graph:
    n: int
    directed: bool
    out: tuple  # out[v - 1] is the sorted tuple of out-neighbors of v

    @property
    def m(self) -> int:
        """Arc count for directed graphs, edge count for undirected ones."""
        total = sum(len(nbrs) for nbrs in self.out)
        return total if self.directed else total // 2

    @property
    def vertices(self) -> range:
        return range(1, self.n + 1)

    def out_neighbors(self, v: int) -> tuple:
        self._check_vertex(v)
        return self.out[v - 1]

    def in_neighbors(self, v: int) -> tuple:
        self._check_vertex(v)
        return self._in[v - 1]

    def out_degree(self, v: int) -> int:
        return len(self.out_neighbors(v))

    def arcs(self) -> list[tuple[int, int]]:
        return [(v, w) for v in self.vertices for w in self.out[v - 1]]

    def edges(self) -> list[tuple[int, int]]:
        """Arcs for a directed graph; each undirected edge once as ``(low, high)``."""
        if self.directed:
            return self.arcs()
        return [(v, w) for v, w in self.arcs() if v < w]

    def isolated_vertices(self) -> list[int]:
        return [v for v in self.vertices if not self.out[v - 1] and not self._in[v - 1]]

    @cached_property
    def _in(self) -> tuple:
        ins: list[list[int]] = [[] for _ in range(self.n)]
        for v, w in self.arcs():
            ins[w - 1].append(v)
        return tuple(tuple(sorted(x)) for x in ins)

    @cached_property
    def adjacency(self) -> np.ndarray:
        """0-based ``(n, n)`` matrix with ``A[v, w] = 1`` for each arc ``v -> w``."""
        a = np.zeros((self.n, self.n), dtype=np.int8)
        for v, w in self.arcs():
            a[v - 1, w - 1] = 1
        a.setflags(write=False)
        return a

    @cached_property
    def out_degrees(self) -> np.ndarray:
        return np.array([len(x) for x in self.out], dtype=np.int64)

    def _check_vertex(self, v: int) -> None:
        if not 1 <= v <= self.n:
            raise VertexOutOfRangeError(f"vertex {v} not in 1..{self.n}")

    def __repr__(self) -> str:
        kind = "directed" if self.directed else "undirected"
        return f"Graph(n={self.n}, m={self.m}, {kind})"


@dataclass(frozen=True)
class Coloring:
    k: int
    colors: tuple

    def __post_init__(self):
        if self.k < 1:
            raise ColoringError(f"need at least one color, got k={self.k}")
        object.__setattr__(self, "colors", tuple(int(c) for c in self.colors))
        for i, c in enumerate(self.colors, start=1):
            if not 1 <= c <= self.k:
                raise ColoringError(f"vertex {i} has color {c} outside 1..{self.k}")

    @property
    def n(self) -> int:
        return len(self.colors)

    def __getitem__(self, v: int) -> int:
        if not 1 <= v <= len(self.colors):
            raise VertexOutOfRangeError(f"vertex {v} not in 1..{len(self.colors)}")
        return self.colors[v - 1]

    def __iter__(self):
        return iter(self.colors)

    def __len__(self) -> int:
        return len(self.colors)

    def permuted(self, perm: Sequence[int]) -> "Coloring":
        """Relabel colors: color ``c`` becomes ``perm[c - 1]``."""
        return Coloring(self.k, tuple(perm[c - 1] for c in self.colors))

    @classmethod
    def monochromatic(cls, n: int, k: int, color: int = 1) -> "Coloring":
        return cls(k, (color,) * n)


def check_coloring(g: Graph, c: Coloring) -> None:
    if c.n != g.n:
        raise ColoringError(f"coloring has {c.n} entries but graph has {g.n} vertices")


def build_graph(n: int, directed: bool, arc_list: Iterable[tuple[int, int]]) -> Graph:
    """Canonical graph from a list of arcs (or edges, when undirected)."""
    if n < 0:
        raise GraphError(f"negative vertex count {n}")
    out: list[set[int]] = [set() for _ in range(n)]
    for a, b in arc_list:
        a, b = int(a), int(b)
        for x in (a, b):
            if not 1 <= x <= n:
                raise VertexOutOfRangeError(f"endpoint {x} not in 1..{n}")
        if a == b:
            raise SelfLoopError(f"self-loop at vertex {a}")
        if b in out[a - 1]:
            raise DuplicateArcError(f"duplicate arc ({a}, {b})")
        out[a - 1].add(b)
        if not directed:
            out[b - 1].add(a)
    return Graph(n, bool(directed), tuple(tuple(sorted(s)) for s in out))


def complete_graph(q: int, directed: bool = False) -> Graph:
    if q < 1:
        raise GraphError("complete graph needs q >= 1")
    if directed:
        pairs = [(a, b) for a in range(1, q + 1) for b in range(1, q + 1) if a != b]
    else:
        pairs = [(a, b) for a in range(1, q + 1) for b in range(a + 1, q + 1)]
    return build_graph(q, directed, pairs)


def empty_graph(n: int, directed: bool = False) -> Graph:
    return build_graph(n, directed, [])


def path_graph(n: int) -> Graph:
    return build_graph(n, False, [(i, i + 1) for i in range(1, n)])


def cycle_graph(n: int, directed: bool = False) -> Graph:
    if n < 3:
        raise GraphError("a cycle needs at least 3 vertices")
    return build_graph(n, directed, [(i, i % n + 1) for i in range(1, n + 1)])


def star_graph(leaves: int) -> Graph:
    """K_{1,leaves} with center 1."""
    return build_graph(leaves + 1, False, [(1, i) for i in range(2, leaves + 2)])


def disjoint_union(g1: Graph, g2: Graph) -> tuple[Graph, int]:
    """Place ``g2`` after ``g1``; returns the union and the offset added to ``g2``'s ids."""
    if g1.directed != g2.directed:
        raise DirectednessMismatchError("cannot union a directed and an undirected graph")
    offset = g1.n
    shifted = tuple(tuple(w + offset for w in nbrs) for nbrs in g2.out)
    return Graph(g1.n + g2.n, g1.directed, g1.out + shifted), offset


def to_directed(g: Graph) -> Graph:
    """Bidirected copy of an undirected graph (same arc lists, flag flipped)."""
    if g.directed:
        raise DirectednessMismatchError("graph is already directed")
    return Graph(g.n, True, g.out)


def random_graph(n: int, p: float, seed: int, directed: bool = False) -> Graph:
    """Erdos-Renyi G(n, p) from numpy's PCG64 seeded with ``seed``.

    One uniform draw per candidate pair, visited in lexicographic order
    (``i < j`` for undirected, all ``i != j`` for directed); the pair is kept
    when the draw is below ``p``.
    """
    if n < 0 or not 0.0 <= p <= 1.0:
        raise GraphError(f"bad random graph parameters n={n}, p={p}")
    rng = np.random.Generator(np.random.PCG64(seed))
    if directed:
        pairs = [(i, j) for i in range(1, n + 1) for j in range(1, n + 1) if i != j]
    else:
        pairs = [(i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)]
    draws = rng.random(len(pairs))
    return build_graph(n, directed, [pr for pr, u in zip(pairs, draws) if u < p])


def from_adjacency(matrix) -> Graph:
    """Graph from a square 0/1 matrix; symmetric matrices give undirected graphs."""
    a = np.asarray(matrix)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise GraphError(f"adjacency matrix must be square, got shape {a.shape}")
    if np.any(np.diag(a) != 0):
        raise SelfLoopError("adjacency matrix has a nonzero diagonal")
    if not np.all((a == 0) | (a == 1)):
        raise GraphError("adjacency matrix entries must be 0 or 1")
    directed = not np.array_equal(a, a.T)
    rows, cols = np.nonzero(a if directed else np.triu(a))
    return build_graph(a.shape[0], directed, zip(rows + 1, cols + 1))


class VertexRoleMap:
    """Role label -> vertex set, required to partition ``1..n``."""

    def __init__(self, n: int, roles: dict):
        self.n = n
        self._roles = {label: frozenset(vs) for label, vs in roles.items()}
        self._by_vertex: dict[int, str] = {}
        for label, vs in self._roles.items():
            if not vs:
                raise GraphError(f"role {label!r} is empty")
            if any(ch.isspace() for ch in label):
                raise GraphError(f"role label {label!r} contains whitespace")
            for v in vs:
                if not 1 <= v <= n:
                    raise VertexOutOfRangeError(f"role {label!r} names vertex {v} outside 1..{n}")
                if v in self._by_vertex:
                    raise GraphError(f"vertex {v} has roles {self._by_vertex[v]!r} and {label!r}")
                self._by_vertex[v] = label
        if len(self._by_vertex) != n:
            missing = sorted(set(range(1, n + 1)) - set(self._by_vertex))
            raise GraphError(f"vertices without a role: {missing[:10]}")

    @classmethod
    def from_vertex_labels(cls, labels: Sequence[str]) -> "VertexRoleMap":
        roles: dict[str, set] = {}
        for v, label in enumerate(labels, start=1):
            roles.setdefault(label, set()).add(v)
        return cls(len(labels), roles)

    def role_of(self, v: int) -> str:
        return self._by_vertex[v]

    def __getitem__(self, label: str) -> frozenset:
        return self._roles[label]

    def __contains__(self, label: str) -> bool:
        return label in self._roles

    def labels(self) -> list[str]:
        return list(self._roles)

    def items(self):
        return self._roles.items()

    def vertices_with_prefix(self, prefix: str) -> list[int]:
        return sorted(v for label, vs in self._roles.items() if label.startswith(prefix) for v in vs)

    def __eq__(self, other) -> bool:
        return isinstance(other, VertexRoleMap) and self.n == other.n and self._roles == other._roles

    def __repr__(self) -> str:
        return f"VertexRoleMap(n={self.n}, roles={len(self._roles)})"
