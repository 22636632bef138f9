"""Hardness constructions, their gadgets, and witness extraction.

Every constructor is deterministic: vertex ids follow the order in which the
builder adds them, so identical inputs give identical graphs.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache
from typing import NamedTuple, Optional, Union

import numpy as np

from .exceptions import (
    ColoringError,
    ContractViolationError,
    DirectednessMismatchError,
    ExtractionUnsatisfiedError,
    GraphError,
    NotStrictlyStableError,
    OddOrderError,
)
from .game import classify
from .graph import Coloring, Graph, VertexRoleMap, build_graph, to_directed
from .search import (
    DEFAULT_BUDGET,
    Cnf,
    balanced_unfriendly_exists,
    enumerate_stable,
    first_stable,
    proper_colorable,
    sat_brute_force,
    search_stable,
)


@dataclass(frozen=True, eq=False)
class ReductionOutput:
    graph: Graph
    roles: VertexRoleMap
    params: dict = field(default_factory=dict)

    def __eq__(self, other):
        return (
            isinstance(other, ReductionOutput)
            and self.graph == other.graph
            and self.roles == other.roles
            and self.params == other.params
        )


class _Builder:
    def __init__(self, directed: bool):
        self.directed = directed
        self.labels: list[str] = []
        self.arcs: list[tuple[int, int]] = []

    def vertex(self, role: str) -> int:
        self.labels.append(role)
        return len(self.labels)

    def vertices(self, count: int, role: str) -> list[int]:
        return [self.vertex(role) for _ in range(count)]

    def edge(self, a: int, b: int) -> None:
        """Undirected edge, or a pair of opposite arcs in a directed build."""
        self.arcs.append((a, b))
        if self.directed:
            self.arcs.append((b, a))

    def arc(self, a: int, b: int) -> None:
        assert self.directed
        self.arcs.append((a, b))

    def clique(self, vs) -> None:
        for a, b in itertools.combinations(vs, 2):
            self.edge(a, b)

    def embed(self, g: Graph, roles) -> list[int]:
        """Copy ``g`` in; ``roles`` is one label for all vertices or a label per vertex."""
        labels = [roles] * g.n if isinstance(roles, str) else list(roles)
        ids = [self.vertex(label) for label in labels]
        for a, b in g.edges():
            if g.directed:
                self.arc(ids[a - 1], ids[b - 1])
            else:
                self.edge(ids[a - 1], ids[b - 1])
        return ids

    def finish(self, **params) -> ReductionOutput:
        g = build_graph(len(self.labels), self.directed, self.arcs)
        return ReductionOutput(g, VertexRoleMap.from_vertex_labels(self.labels), params)


# ---------------------------------------------------------------------------
# price of anarchy family


def poa_tight_instance(k: int) -> tuple[Graph, Coloring, Coloring]:
    """Two copies of K_k joined by a perfect matching ``i -- i + k``.

    Returns the graph, the worst equilibrium (both copies colored 1..k) and an
    optimal coloring (second copy shifted by one color).
    """
    if k < 2:
        raise GraphError("the construction needs k >= 2")
    edges = [(a, b) for a, b in itertools.combinations(range(1, k + 1), 2)]
    edges += [(a + k, b + k) for a, b in itertools.combinations(range(1, k + 1), 2)]
    edges += [(i, i + k) for i in range(1, k + 1)]
    g = build_graph(2 * k, False, edges)
    first = tuple(range(1, k + 1))
    worst = Coloring(k, first + first)
    best = Coloring(k, first + tuple(range(2, k + 1)) + (1,))
    return g, worst, best


# ---------------------------------------------------------------------------
# strict k-coloring, k >= 3


def reduce_kcolor_to_strict(g: Graph, k: int) -> ReductionOutput:
    """Complete every edge to a K_k with k-2 fresh vertices; give isolated
    vertices an attached K_{k-1} so they are not free to switch."""
    if g.directed:
        raise DirectednessMismatchError("reduction from k-coloring takes an undirected graph")
    if k < 3:
        raise GraphError("this reduction needs k >= 3")
    b = _Builder(directed=False)
    orig = b.embed(g, "original")
    for j, (u, v) in enumerate(g.edges(), start=1):
        gadget = b.vertices(k - 2, f"edge-gadget:{j}")
        b.clique(gadget)
        for x in gadget:
            b.edge(x, orig[u - 1])
            b.edge(x, orig[v - 1])
    for v in g.isolated_vertices():
        extra = b.vertices(k - 1, f"stabilizer:{v}")
        b.clique(extra)
        for x in extra:
            b.edge(x, orig[v - 1])
    return b.finish(k=k, source="k-coloring")


# ---------------------------------------------------------------------------
# k = 2 gadgets
#
# A literal gadget is a vertex pair; the literal is true when the pair is
# monochromatic. Gadgets are accepted only by the exhaustive checks below.


class ClauseGadget(NamedTuple):
    graph: Graph
    literal_pairs: tuple  # three (a, b) pairs
    internal: tuple


class ConnectorGadget(NamedTuple):
    graph: Graph
    side_a: tuple
    side_b: tuple
    internal: tuple


def _ring6_clause() -> ClauseGadget:
    # literals 1..6, centers 7..9, ring 10..15
    edges = []
    for i in range(3):
        center = 7 + i
        edges += [(center, 2 * i + 1), (center, 2 * i + 2), (center, 10 + 2 * i), (center, 11 + 2 * i)]
    ring = list(range(10, 16))
    edges += [(ring[j], ring[(j + 1) % 6]) for j in range(6)]
    g = build_graph(15, False, edges)
    return ClauseGadget(g, ((1, 2), (3, 4), (5, 6)), tuple(range(7, 16)))


CLAUSE_GADGETS = {"ring6": _ring6_clause}
DEFAULT_CLAUSE_GADGET = "ring6"


def _strict_table(g: Graph, internal) -> tuple[np.ndarray, np.ndarray]:
    """All 2-colorings (0/1 rows) and whether every ``internal`` vertex is strictly stable."""
    n = g.n
    idx = np.arange(1 << n, dtype=np.int64)
    bits = ((idx[:, None] >> np.arange(n - 1, -1, -1)) & 1).astype(np.int8)
    a = g.adjacency.astype(np.int16)
    same = (bits[:, None, :] == bits[:, :, None]).astype(np.int16)
    same_count = (same * a[None, :, :]).sum(axis=2)
    strict = 2 * same_count < g.out_degrees[None, :]
    cols = [v - 1 for v in internal]
    return bits, strict[:, cols].all(axis=1)


def _mono(bits: np.ndarray, pair) -> np.ndarray:
    return bits[:, pair[0] - 1] == bits[:, pair[1] - 1]


def check_clause_contract(gadget: ClauseGadget) -> list[str]:
    """Problems found by the exhaustive clause check (empty when it holds).

    (a) whenever every internal vertex is strictly stable, some literal pair is
    monochromatic; (b) every coloring of the six literal vertices with a
    monochromatic pair extends to one where every internal vertex is strictly
    stable.
    """
    bits, ok = _strict_table(gadget.graph, gadget.internal)
    monos = np.stack([_mono(bits, p) for p in gadget.literal_pairs], axis=1)
    problems = []
    bad = ok & ~monos.any(axis=1)
    if bad.any():
        problems.append(f"strict internal coloring with no monochromatic literal: {bits[np.argmax(bad)].tolist()}")
    lit_cols = [v - 1 for p in gadget.literal_pairs for v in p]
    reachable = {tuple(row) for row in bits[ok][:, lit_cols].tolist()}
    for lits in itertools.product((0, 1), repeat=6):
        if any(lits[2 * i] == lits[2 * i + 1] for i in range(3)) and lits not in reachable:
            problems.append(f"literal coloring {lits} has no strictly stable extension")
    return problems


def clause_extension_exists(gadget: ClauseGadget, literal_colors) -> bool:
    """Whether the six literal colors (pair order, values 1/2) extend to a strict interior."""
    bits, ok = _strict_table(gadget.graph, gadget.internal)
    lit_cols = [v - 1 for p in gadget.literal_pairs for v in p]
    target = np.asarray([c - 1 for c in literal_colors], dtype=np.int8)
    return bool((ok & (bits[:, lit_cols] == target).all(axis=1)).any())


@lru_cache(maxsize=None)
def clause_gadget(version: str = DEFAULT_CLAUSE_GADGET) -> ClauseGadget:
    """The registered clause gadget, after its exhaustive contract check.

    ``ring6``: each literal pair hangs off its own center vertex, and every
    center also touches two consecutive vertices of a shared 6-cycle.
    """
    try:
        gadget = CLAUSE_GADGETS[version]()
    except KeyError:
        raise ValueError(f"unknown clause gadget {version!r}; known: {sorted(CLAUSE_GADGETS)}") from None
    problems = check_clause_contract(gadget)
    if problems:
        raise ContractViolationError(f"clause gadget {version!r}: " + "; ".join(problems[:3]))
    return gadget


def check_connector_contract(gadget: ConnectorGadget, negate: bool) -> list[str]:
    """Exhaustive connector check.

    (a) whenever every internal vertex is strictly stable, side_a is
    monochromatic exactly when side_b is (or is not, for negation); (b) every
    coloring of side_a extends to one where every internal vertex is strictly
    stable.
    """
    bits, ok = _strict_table(gadget.graph, gadget.internal)
    ma, mb = _mono(bits, gadget.side_a), _mono(bits, gadget.side_b)
    linked = ma != mb if negate else ma == mb
    problems = []
    bad = ok & ~linked
    if bad.any():
        problems.append(f"strict interior breaks the link: {bits[np.argmax(bad)].tolist()}")
    cols = [v - 1 for v in gadget.side_a]
    reachable = {tuple(row) for row in bits[ok][:, cols].tolist()}
    for side in itertools.product((0, 1), repeat=2):
        if side not in reachable:
            problems.append(f"side_a coloring {side} has no strictly stable extension")
    return problems


@lru_cache(maxsize=None)
def persistence_gadget() -> ConnectorGadget:
    """Sides (1, 2) and (3, 4); degree-2 vertices 5 and 6 join 1-3 and 2-4.

    A strictly stable degree-2 vertex differs from both its neighbors, so it
    forces them to agree.
    """
    g = build_graph(6, False, [(1, 5), (5, 3), (2, 6), (6, 4)])
    gadget = ConnectorGadget(g, (1, 2), (3, 4), (5, 6))
    problems = check_connector_contract(gadget, negate=False)
    if problems:
        raise ContractViolationError("persistence gadget: " + "; ".join(problems))
    return gadget


@lru_cache(maxsize=None)
def negation_gadget() -> ConnectorGadget:
    """Sides (1, 2) and (3, 4); vertex 5 joins 1-3, the path 2-6-7-4 forces 2 != 4."""
    g = build_graph(7, False, [(1, 5), (5, 3), (2, 6), (6, 7), (7, 4)])
    gadget = ConnectorGadget(g, (1, 2), (3, 4), (5, 6, 7))
    problems = check_connector_contract(gadget, negate=True)
    if problems:
        raise ContractViolationError("negation gadget: " + "; ".join(problems))
    return gadget


PENDANTS_PER_LITERAL_VERTEX = 2


def reduce_3sat_to_strict2(f: Cnf, gadget: str = DEFAULT_CLAUSE_GADGET) -> ReductionOutput:
    """Graph with a strictly stable 2-coloring iff ``f`` is satisfiable.

    Each variable gets a reference literal pair; each clause gets a clause
    gadget whose literal pairs are tied to the reference pair of their
    variable by a persistence (positive literal) or negation (negative
    literal) connector. Every literal-pair vertex carries two pendants.
    """
    if not isinstance(f, Cnf):
        raise TypeError("expected a Cnf")
    cg = clause_gadget(gadget)
    pers, neg = persistence_gadget(), negation_gadget()
    b = _Builder(directed=False)
    literal_vertices = []

    reference = {}
    for x in range(1, f.num_vars + 1):
        reference[x] = tuple(b.vertices(2, f"reference:{x}"))
        literal_vertices += reference[x]

    for i, clause in enumerate(f.clauses, start=1):
        labels = []
        pair_of = {}
        for j, pair in enumerate(cg.literal_pairs, start=1):
            for v in pair:
                pair_of[v] = j
        for v in cg.graph.vertices:
            labels.append(f"clause:{i}:literal:{pair_of[v]}" if v in pair_of else f"clause:{i}:internal")
        ids = b.embed(cg.graph, labels)
        for j, (lit, pair) in enumerate(zip(clause, cg.literal_pairs), start=1):
            occ = (ids[pair[0] - 1], ids[pair[1] - 1])
            literal_vertices += occ
            conn = pers if lit > 0 else neg
            ref = reference[abs(lit)]
            # connector side_a is the reference pair, side_b the occurrence
            mapping = {conn.side_a[0]: ref[0], conn.side_a[1]: ref[1], conn.side_b[0]: occ[0], conn.side_b[1]: occ[1]}
            for v in conn.internal:
                mapping[v] = b.vertex(f"connector:{i}:{j}")
            for u, v in conn.graph.edges():
                b.edge(mapping[u], mapping[v])

    for v in literal_vertices:
        for p in b.vertices(PENDANTS_PER_LITERAL_VERTEX, "pendant"):
            b.edge(v, p)
    return b.finish(k=2, source="3-sat", gadget=gadget, formula=f)


def extract_assignment(r: ReductionOutput, c: Coloring) -> tuple:
    """Variable ``x`` is true iff its reference pair is monochromatic."""
    f = r.params.get("formula")
    if f is None:
        raise ValueError("reduction output did not come from reduce_3sat_to_strict2")
    if c.n != r.graph.n:
        raise ColoringError(f"coloring has {c.n} entries, graph has {r.graph.n} vertices")
    if not classify(r.graph, c).is_strict:
        raise NotStrictlyStableError("coloring is not strictly stable")
    assignment = []
    for x in range(1, f.num_vars + 1):
        a, b2 = sorted(r.roles[f"reference:{x}"])
        assignment.append(c[a] == c[b2])
    assignment = tuple(assignment)
    if not f.satisfied_by(assignment):
        raise ExtractionUnsatisfiedError(f"extracted assignment {assignment} falsifies {f}")
    return assignment


# ---------------------------------------------------------------------------
# directed graphs


def undirected_to_directed(g: Graph) -> Graph:
    """Replace every edge by two opposite arcs."""
    return to_directed(g)


def reduce_bup_to_directed2(g: Graph) -> ReductionOutput:
    """Directed graph with a stable 2-coloring iff ``g`` has a balanced
    unfriendly partition.

    Adds u and v (arcs to each other and to every vertex of ``g``), w with an
    arc to v, and a directed 3-cycle whose first vertex points at u and w.
    """
    if g.directed:
        raise DirectednessMismatchError("balanced unfriendly partition instances are undirected")
    if g.n % 2:
        raise OddOrderError(f"need an even number of vertices, got {g.n}")
    b = _Builder(directed=True)
    orig = b.embed(to_directed(g), "original")
    u, v, w = b.vertex("u"), b.vertex("v"), b.vertex("w")
    t1, t2, t3 = b.vertices(3, "cycle")
    b.arc(u, v)
    b.arc(v, u)
    for a in orig:
        b.arc(u, a)
        b.arc(v, a)
    b.arc(w, v)
    b.arc(t1, t2)
    b.arc(t2, t3)
    b.arc(t3, t1)
    b.arc(t1, u)
    b.arc(t1, w)
    return b.finish(k=2, source="balanced-unfriendly-partition")


def copies_for(n: int, copies: Union[str, int] = "paper") -> int:
    """``paper`` is n**3 copies, ``min`` is n; an int is taken as given."""
    if copies == "paper":
        return n**3
    if copies == "min":
        return n
    return int(copies)


def reduce_directed2_to_directedk(g: Graph, k: int, copies: Union[str, int] = "paper") -> ReductionOutput:
    """Directed graph with a stable k-coloring iff ``g`` has a stable 2-coloring.

    Adds mutually adjacent x, y and ``copies`` bidirected copies of K_{k-2};
    every copy vertex points at x and y, and every vertex of ``g`` points at
    every copy vertex.
    """
    if not g.directed:
        raise DirectednessMismatchError("expected a directed graph")
    if k < 3:
        raise GraphError("this reduction needs k >= 3")
    count = copies_for(g.n, copies)
    if count < g.n:
        raise GraphError(f"need at least n={g.n} copies, got {count}")
    b = _Builder(directed=True)
    orig = b.embed(g, "original")
    x, y = b.vertex("x"), b.vertex("y")
    b.arc(x, y)
    b.arc(y, x)
    for j in range(1, count + 1):
        block = b.vertices(k - 2, f"copy:{j}")
        b.clique(block)
        for t in block:
            b.arc(t, x)
            b.arc(t, y)
            for a in orig:
                b.arc(a, t)
    return b.finish(k=k, copies=count, source="directed-2-coloring")


@dataclass(frozen=True)
class MixedGameSpec:
    """Directed skeleton whose arcs either coordinate or anti-coordinate."""

    n: int
    arcs: tuple  # (u, v, coordinate: bool)
    k: int = 2

    def __post_init__(self):
        arcs = tuple((int(u), int(v), bool(cflag)) for u, v, cflag in self.arcs)
        build_graph(self.n, True, [(u, v) for u, v, _ in arcs])
        object.__setattr__(self, "arcs", arcs)


def coordination_proxy_transform(spec: MixedGameSpec) -> ReductionOutput:
    """Pure anti-coordination digraph simulating the coordinate arcs.

    A coordinate arc (u, v) becomes u -> p -> v through one proxy p when k = 2,
    or through a bidirected K_{k-1} of proxies otherwise.
    """
    k = spec.k
    if k < 2:
        raise GraphError("need k >= 2")
    b = _Builder(directed=True)
    orig = b.vertices(spec.n, "original")
    coordinate = []
    for j, (u, v, is_coord) in enumerate(spec.arcs, start=1):
        if not is_coord:
            b.arc(orig[u - 1], orig[v - 1])
            continue
        coordinate.append((u, v))
        proxies = b.vertices(k - 1, f"proxy:{j}")
        b.clique(proxies)
        for p in proxies:
            b.arc(orig[u - 1], p)
            b.arc(p, orig[v - 1])
    return b.finish(k=k, source="mixed-game", coordinate_arcs=tuple(coordinate))


# ---------------------------------------------------------------------------
# end-to-end checks: source oracle against equilibrium existence


@dataclass(frozen=True)
class Verification:
    kind: str
    oracle: bool
    equilibrium: bool
    oracle_witness: object = None
    equilibrium_witness: Optional[Coloring] = None

    @property
    def match(self) -> bool:
        return self.oracle == self.equilibrium


def verify_kcolor_strict(g: Graph, k: int) -> Verification:
    r = reduce_kcolor_to_strict(g, k)
    witness = proper_colorable(g, k)
    found = search_stable(r.graph, k, "strict")
    return Verification("kcolor-strict", witness is not None, found is not None, witness, found)


def verify_sat_strict2(f: Cnf, gadget: str = DEFAULT_CLAUSE_GADGET) -> Verification:
    r = reduce_3sat_to_strict2(f, gadget)
    witness = sat_brute_force(f)
    found = search_stable(r.graph, 2, "strict")
    if found is not None:
        extract_assignment(r, found)
    return Verification("sat-strict2", witness is not None, found is not None, witness, found)


def verify_bup_directed2(g: Graph, exhaustive: bool = False, budget: int = DEFAULT_BUDGET) -> Verification:
    r = reduce_bup_to_directed2(g)
    witness = balanced_unfriendly_exists(g)
    if exhaustive:
        found = first_stable(r.graph, 2, "stable", budget)
    else:
        found = search_stable(r.graph, 2, "stable")
    return Verification("bup-directed2", witness is not None, found is not None, witness, found)


def verify_directed_k(g: Graph, k: int, copies: Union[str, int] = "min") -> Verification:
    r = reduce_directed2_to_directedk(g, k, copies)
    source = search_stable(g, 2, "stable")
    found = search_stable(r.graph, k, "stable")
    return Verification("directed-k", source is not None, found is not None, source, found)


def coordination_holds(r: ReductionOutput, budget: int = DEFAULT_BUDGET) -> tuple[bool, int]:
    """Whether every stable coloring agrees across each coordinate arc, and how many were checked."""
    k = r.params["k"]
    arcs = r.params.get("coordinate_arcs", ())
    stable = enumerate_stable(r.graph, k, "stable", budget)
    ok = all(c[u] == c[v] for c in stable for u, v in arcs)
    return ok, len(stable)
