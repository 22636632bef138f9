"""Text formats: graphs, colorings, DIMACS CNF, mixed games, roles, traces, DOT.

Graph file::

    # comment
    p <n> <m> <u|d>
    e <a> <b>          (exactly m lines; undirected edges listed once)

Coloring file: ``k <K>`` then ``v <vertex> <color>`` for vertices 1..n in order.
"""

from __future__ import annotations

from typing import Iterable, Optional

from .exceptions import GraphError, ParseError
from .game import DynamicsTrace
from .graph import Coloring, Graph, VertexRoleMap, build_graph, check_coloring
from .reductions import MixedGameSpec, ReductionOutput
from .search import Cnf


def _lines(text: str) -> Iterable[tuple[int, list[str]]]:
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        yield lineno, line.split()


def _int(tok: str, lineno: int) -> int:
    try:
        return int(tok)
    except ValueError:
        raise ParseError(f"expected an integer, got {tok!r}", lineno) from None


def parse_graph(text: str) -> Graph:
    header = None
    arcs = []
    for lineno, toks in _lines(text):
        if toks[0] == "p":
            if header is not None:
                raise ParseError("second header line", lineno)
            if len(toks) != 4 or toks[3] not in ("u", "d"):
                raise ParseError("header must be 'p <n> <m> <u|d>'", lineno)
            header = (_int(toks[1], lineno), _int(toks[2], lineno), toks[3] == "d")
            if header[0] < 0 or header[1] < 0:
                raise ParseError("negative count in header", lineno)
        elif toks[0] == "e":
            if header is None:
                raise ParseError("edge line before header", lineno)
            if len(toks) != 3:
                raise ParseError("edge line must be 'e <a> <b>'", lineno)
            a, b = _int(toks[1], lineno), _int(toks[2], lineno)
            n = header[0]
            if not (1 <= a <= n and 1 <= b <= n):
                raise ParseError(f"endpoint outside 1..{n}", lineno)
            arcs.append((a, b, lineno))
        else:
            raise ParseError(f"unknown line type {toks[0]!r}", lineno)
    if header is None:
        raise ParseError("missing header line")
    n, m, directed = header
    if len(arcs) != m:
        raise ParseError(f"header announces {m} edges but {len(arcs)} were given")
    seen = set()
    for a, b, lineno in arcs:
        key = (a, b) if directed else (min(a, b), max(a, b))
        if a == b:
            raise ParseError(f"self-loop at vertex {a}", lineno)
        if key in seen:
            raise ParseError(f"duplicate edge {a} {b}", lineno)
        seen.add(key)
    return build_graph(n, directed, [(a, b) for a, b, _ in arcs])


def format_graph(g: Graph) -> str:
    lines = [f"p {g.n} {g.m} {'d' if g.directed else 'u'}"]
    lines += [f"e {a} {b}" for a, b in g.edges()]
    return "\n".join(lines) + "\n"


def parse_coloring(text: str) -> Coloring:
    k = None
    colors = []
    for lineno, toks in _lines(text):
        if toks[0] == "k":
            if k is not None or len(toks) != 2:
                raise ParseError("expected a single 'k <K>' line", lineno)
            k = _int(toks[1], lineno)
        elif toks[0] == "v":
            if k is None:
                raise ParseError("vertex line before 'k' line", lineno)
            if len(toks) != 3:
                raise ParseError("vertex line must be 'v <vertex> <color>'", lineno)
            v, c = _int(toks[1], lineno), _int(toks[2], lineno)
            if v != len(colors) + 1:
                raise ParseError(f"expected vertex {len(colors) + 1}, got {v}", lineno)
            if not 1 <= c <= k:
                raise ParseError(f"color {c} outside 1..{k}", lineno)
            colors.append(c)
        else:
            raise ParseError(f"unknown line type {toks[0]!r}", lineno)
    if k is None:
        raise ParseError("missing 'k' line")
    return Coloring(k, tuple(colors))


def format_coloring(c: Coloring) -> str:
    return "".join([f"k {c.k}\n"] + [f"v {v} {col}\n" for v, col in enumerate(c.colors, start=1)])


def parse_cnf(text: str) -> Cnf:
    """DIMACS ``cnf`` with exactly three literals per clause line."""
    header = None
    clauses = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("c") or line.startswith("%"):
            continue
        toks = line.split()
        if toks[0] == "p":
            if header is not None or len(toks) != 4 or toks[1] != "cnf":
                raise ParseError("header must be 'p cnf <vars> <clauses>'", lineno)
            header = (_int(toks[2], lineno), _int(toks[3], lineno))
            continue
        if header is None:
            raise ParseError("clause before header", lineno)
        lits = [_int(t, lineno) for t in toks]
        if lits[-1] != 0 or 0 in lits[:-1]:
            raise ParseError("clause must be nonzero literals terminated by 0", lineno)
        if len(lits) != 4:
            raise ParseError(f"clause has {len(lits) - 1} literals, expected 3", lineno)
        for lit in lits[:-1]:
            if abs(lit) > header[0]:
                raise ParseError(f"literal {lit} exceeds declared {header[0]} variables", lineno)
        clauses.append(tuple(lits[:-1]))
    if header is None:
        raise ParseError("missing 'p cnf' header")
    if len(clauses) != header[1]:
        raise ParseError(f"header announces {header[1]} clauses but {len(clauses)} were given")
    return Cnf(header[0], tuple(clauses))


def format_cnf(f: Cnf) -> str:
    lines = [f"p cnf {f.num_vars} {len(f.clauses)}"]
    lines += [" ".join(str(l) for l in cl) + " 0" for cl in f.clauses]
    return "\n".join(lines) + "\n"


def parse_mixed(text: str, k: int = 2) -> MixedGameSpec:
    """``p <n> <m> mixed`` then ``a <u> <v> <c|x>`` (coordinate / anti-coordinate)."""
    header = None
    arcs = []
    for lineno, toks in _lines(text):
        if toks[0] == "p":
            if header is not None or len(toks) != 4 or toks[3] != "mixed":
                raise ParseError("header must be 'p <n> <m> mixed'", lineno)
            header = (_int(toks[1], lineno), _int(toks[2], lineno))
        elif toks[0] == "a":
            if header is None:
                raise ParseError("arc line before header", lineno)
            if len(toks) != 4 or toks[3] not in ("c", "x"):
                raise ParseError("arc line must be 'a <u> <v> <c|x>'", lineno)
            u, v = _int(toks[1], lineno), _int(toks[2], lineno)
            if not (1 <= u <= header[0] and 1 <= v <= header[0]):
                raise ParseError(f"endpoint outside 1..{header[0]}", lineno)
            arcs.append((u, v, toks[3] == "c"))
        else:
            raise ParseError(f"unknown line type {toks[0]!r}", lineno)
    if header is None:
        raise ParseError("missing header line")
    if len(arcs) != header[1]:
        raise ParseError(f"header announces {header[1]} arcs but {len(arcs)} were given")
    try:
        return MixedGameSpec(header[0], tuple(arcs), k)
    except GraphError as exc:
        raise ParseError(str(exc)) from exc


def format_mixed(spec: MixedGameSpec) -> str:
    lines = [f"p {spec.n} {len(spec.arcs)} mixed"]
    lines += [f"a {u} {v} {'c' if c else 'x'}" for u, v, c in spec.arcs]
    return "\n".join(lines) + "\n"


def format_roles(roles: VertexRoleMap) -> str:
    return "".join(f"r {v} {roles.role_of(v)}\n" for v in range(1, roles.n + 1))


def parse_roles(text: str) -> VertexRoleMap:
    labels = []
    for lineno, toks in _lines(text):
        if toks[0] != "r" or len(toks) != 3:
            raise ParseError("role line must be 'r <vertex> <label>'", lineno)
        v = _int(toks[1], lineno)
        if v != len(labels) + 1:
            raise ParseError(f"expected vertex {len(labels) + 1}, got {v}", lineno)
        labels.append(toks[2])
    return VertexRoleMap.from_vertex_labels(labels)


def write_reduction(r: ReductionOutput) -> tuple[str, str]:
    """Graph file text and role sidecar text."""
    return format_graph(r.graph), format_roles(r.roles)


def format_trace(trace: DynamicsTrace) -> str:
    def phi(x):
        return "-" if x is None else str(x)

    return "".join(f"s {s.vertex} {s.old} {s.new} {phi(s.phi_before)} {phi(s.phi_after)}\n" for s in trace.steps)


PALETTE = ("#e6194b", "#3cb44b", "#4363d8", "#ffe119", "#f58231", "#911eb4", "#42d4f4", "#f032e6")


def emit_dot(g: Graph, c: Optional[Coloring] = None, roles: Optional[VertexRoleMap] = None) -> str:
    if c is not None:
        check_coloring(g, c)
    if roles is not None and roles.n != g.n:
        raise GraphError(f"role map covers {roles.n} vertices, graph has {g.n}")
    kind, arrow = ("digraph", "->") if g.directed else ("graph", "--")
    out = [f"{kind} G {{", "  node [shape=circle, style=filled, fillcolor=white];"]
    for v in g.vertices:
        label = str(v)
        if roles is not None:
            label += "\\n" + roles.role_of(v)
        attrs = [f'label="{label}"']
        if c is not None:
            attrs.append(f'fillcolor="{PALETTE[(c[v] - 1) % len(PALETTE)]}"')
        out.append(f"  {v} [{', '.join(attrs)}];")
    for a, b in g.edges():
        out.append(f"  {a} {arrow} {b};")
    out.append("}")
    return "\n".join(out) + "\n"
