"""Command-line front end.

Exit codes: 0 success, 2 input error, 3 dynamics did not converge, 4 budget
exceeded, 5 no equilibrium, 6 verification mismatch. Every report ends with a
``RESULT key=value ...`` line.
"""

from __future__ import annotations

import argparse
import hashlib
import sys
from pathlib import Path
from typing import Optional

from . import io
from .exceptions import (
    AnticoordError,
    BudgetExceededError,
    NoEquilibriumError,
    TooLargeError,
    TooManyVariablesError,
)
from .game import classify, potential, run_dynamics, social_welfare
from .graph import Coloring, complete_graph, cycle_graph, random_graph
from .reductions import (
    coordination_holds,
    coordination_proxy_transform,
    poa_tight_instance,
    reduce_3sat_to_strict2,
    reduce_bup_to_directed2,
    reduce_directed2_to_directedk,
    reduce_kcolor_to_strict,
    verify_bup_directed2,
    verify_directed_k,
    verify_kcolor_strict,
    verify_sat_strict2,
)
from .search import DEFAULT_BUDGET, count_stable, enumerate_stable, price_of_anarchy

EXIT_OK, EXIT_INPUT, EXIT_NONCONVERGED, EXIT_BUDGET, EXIT_NO_EQUILIBRIUM, EXIT_MISMATCH = 0, 2, 3, 4, 5, 6
REDUCTION_KINDS = ("kcolor-strict", "sat-strict2", "bup-directed2", "directed-k", "proxy")


class Report:
    def __init__(self, argv):
        self.lines = ["command: anticoord " + " ".join(argv)]
        self.result: dict[str, object] = {}

    def digest(self, path: str, text: str) -> None:
        self.lines.append(f"input {path} sha256={hashlib.sha256(text.encode()).hexdigest()[:16]}")

    def add(self, line: str) -> None:
        self.lines.append(line)

    def text(self, status: int) -> str:
        self.result["exit"] = status
        tail = " ".join(f"{k}={v}" for k, v in self.result.items())
        return "\n".join(self.lines + [f"RESULT {tail}"]) + "\n"


def _read(report: Report, path: str) -> str:
    text = Path(path).read_text()
    report.digest(path, text)
    return text


def _write(path: str, text: str) -> None:
    Path(path).write_text(text)


def _budget(value: str) -> int:
    return int(float(value))


def cmd_solve(args, report: Report) -> int:
    g = io.parse_graph(_read(report, args.graph))
    if args.init == "random":
        init = args.seed
    else:
        init = None
    trace = run_dynamics(g, args.k, init=init, max_steps=args.max_steps)
    final = trace.final
    cls = classify(g, final)
    report.add(f"steps: {len(trace)}")
    report.add(f"converged: {'yes' if trace.converged else 'no'}")
    report.add(f"classification: {cls.overall}")
    report.add(f"welfare: {social_welfare(g, final)}")
    report.result.update(
        converged=str(trace.converged).lower(),
        steps=len(trace),
        welfare=social_welfare(g, final),
        classification=cls.overall.value,
    )
    if not g.directed:
        report.result["phi"] = potential(g, final)
    if args.output:
        _write(args.output + ".col", io.format_coloring(final))
        _write(args.output + ".trace", io.format_trace(trace))
        report.add(f"wrote {args.output}.col {args.output}.trace")
    else:
        report.add("coloring: " + " ".join(map(str, final.colors)))
    if args.dot:
        _write(args.dot, io.emit_dot(g, final))
    return EXIT_OK if trace.converged else EXIT_NONCONVERGED


def cmd_check(args, report: Report) -> int:
    g = io.parse_graph(_read(report, args.graph))
    c = io.parse_coloring(_read(report, args.coloring))
    if c.n != g.n:
        report.add(f"error: coloring has {c.n} vertices, graph has {g.n}")
        report.result["error"] = "size-mismatch"
        return EXIT_INPUT
    cls = classify(g, c)
    unhappy = cls.unhappy_vertices
    report.add(f"classification: {cls.overall}")
    report.add("unhappy: " + (" ".join(map(str, unhappy)) if unhappy else "none"))
    report.add(f"welfare: {cls.welfare}")
    report.result.update(classification=cls.overall.value, welfare=cls.welfare, unhappy=len(unhappy))
    if not g.directed:
        phi = potential(g, c)
        report.add(f"phi: {phi}")
        report.result["phi"] = phi
    return EXIT_OK


def cmd_enumerate(args, report: Report) -> int:
    g = io.parse_graph(_read(report, args.graph))
    if args.list:
        found = enumerate_stable(g, args.k, args.mode, args.budget)
        count = len(found)
        for c in found:
            report.add("coloring: " + " ".join(map(str, c.colors)))
    else:
        count = count_stable(g, args.k, args.mode, args.budget)
    report.add(f"equilibria ({args.mode}): {count}")
    report.result.update(mode=args.mode, count=count)
    return EXIT_OK if count else EXIT_NO_EQUILIBRIUM


def cmd_poa(args, report: Report) -> int:
    g = io.parse_graph(_read(report, args.graph))
    res = price_of_anarchy(g, args.k, args.budget)
    ratio = f"{res.ratio.numerator}/{res.ratio.denominator}"
    report.add(f"max welfare: {res.max_welfare}")
    report.add(f"min stable welfare: {res.min_stable_welfare}")
    report.add(f"equilibria: {res.n_stable}")
    report.add(f"PoA {ratio}")
    report.result.update(poa=ratio, max_welfare=res.max_welfare, min_stable_welfare=res.min_stable_welfare)
    if args.output:
        _write(args.output + ".best.col", io.format_coloring(res.best))
        _write(args.output + ".worst.col", io.format_coloring(res.worst))
        report.add(f"wrote {args.output}.best.col {args.output}.worst.col")
    return EXIT_OK


def cmd_gen(args, report: Report) -> int:
    fam, params = args.family, args.params
    try:
        if fam == "poa-tight":
            (k,) = params
            g = poa_tight_instance(int(k))[0]
        elif fam == "complete":
            (q,) = params
            g = complete_graph(int(q), directed=args.directed)
        elif fam == "cycle":
            (n,) = params
            g = cycle_graph(int(n), directed=args.directed)
        elif fam == "random":
            n, p = params
            g = random_graph(int(n), float(p), args.seed, directed=args.directed)
        else:
            raise ValueError(f"unknown family {fam!r}")
    except (TypeError, ValueError) as exc:
        report.add(f"error: bad parameters for {fam}: {exc}")
        report.result["error"] = "bad-params"
        return EXIT_INPUT
    text = io.format_graph(g)
    if args.output:
        _write(args.output, text)
        report.add(f"wrote {args.output}")
    else:
        sys.stdout.write(text)
    report.result.update(n=g.n, m=g.m)
    return EXIT_OK


def _build_reduction(args, text: str):
    kind = args.kind
    if kind == "kcolor-strict":
        return reduce_kcolor_to_strict(io.parse_graph(text), args.k)
    if kind == "sat-strict2":
        return reduce_3sat_to_strict2(io.parse_cnf(text))
    if kind == "bup-directed2":
        return reduce_bup_to_directed2(io.parse_graph(text))
    if kind == "directed-k":
        return reduce_directed2_to_directedk(io.parse_graph(text), args.k, _copies(args.copies or "paper"))
    if kind == "proxy":
        return coordination_proxy_transform(io.parse_mixed(text, args.k))
    raise ValueError(kind)


def _copies(value: str):
    return value if value in ("paper", "min") else int(value)


def cmd_reduce(args, report: Report) -> int:
    r = _build_reduction(args, _read(report, args.instance))
    graph_text, roles_text = io.format_graph(r.graph), io.format_roles(r.roles)
    if args.output:
        _write(args.output + ".graph", graph_text)
        _write(args.output + ".roles", roles_text)
        report.add(f"wrote {args.output}.graph {args.output}.roles")
    else:
        sys.stdout.write(graph_text)
    report.add(f"reduced graph: n={r.graph.n} m={r.graph.m} {'directed' if r.graph.directed else 'undirected'}")
    report.result.update(kind=args.kind, n=r.graph.n, m=r.graph.m)
    return EXIT_OK


def cmd_verify(args, report: Report) -> int:
    text = _read(report, args.instance)
    kind = args.kind
    if kind == "proxy":
        r = coordination_proxy_transform(io.parse_mixed(text, args.k))
        ok, count = coordination_holds(r, args.budget)
        report.add(f"stable colorings checked: {count}")
        report.add("coordinate endpoints agree: " + ("yes" if ok else "no"))
        report.add("MATCH" if ok else "MISMATCH")
        report.result.update(kind=kind, match=str(ok).lower(), checked=count)
        return EXIT_OK if ok else EXIT_MISMATCH
    if kind == "kcolor-strict":
        v = verify_kcolor_strict(io.parse_graph(text), args.k)
    elif kind == "sat-strict2":
        v = verify_sat_strict2(io.parse_cnf(text))
    elif kind == "bup-directed2":
        v = verify_bup_directed2(io.parse_graph(text))
    else:
        v = verify_directed_k(io.parse_graph(text), args.k, _copies(args.copies or "min"))
    yn = {True: "yes", False: "no"}
    report.add(f"source oracle: {yn[v.oracle]}")
    if v.oracle_witness is not None:
        report.add(f"source witness: {_show(v.oracle_witness)}")
    report.add(f"equilibrium search: {yn[v.equilibrium]}")
    if v.equilibrium_witness is not None:
        report.add("equilibrium witness: " + " ".join(map(str, v.equilibrium_witness.colors)))
    report.add("MATCH" if v.match else "MISMATCH")
    report.result.update(kind=kind, oracle=yn[v.oracle], equilibrium=yn[v.equilibrium], match=str(v.match).lower())
    return EXIT_OK if v.match else EXIT_MISMATCH


def _show(w) -> str:
    if isinstance(w, Coloring):
        return " ".join(map(str, w.colors))
    if isinstance(w, tuple) and w and isinstance(w[0], bool):
        return " ".join(f"x{i}={'T' if b else 'F'}" for i, b in enumerate(w, start=1))
    if isinstance(w, tuple) and len(w) == 2 and all(isinstance(s, frozenset) for s in w):
        return " | ".join(" ".join(map(str, sorted(s))) for s in w)
    return str(w)


def cmd_dot(args, report: Report) -> int:
    g = io.parse_graph(_read(report, args.graph))
    c = io.parse_coloring(_read(report, args.coloring)) if args.coloring else None
    roles = io.parse_roles(_read(report, args.roles)) if args.roles else None
    text = io.emit_dot(g, c, roles)
    if args.output:
        _write(args.output, text)
        report.add(f"wrote {args.output}")
    else:
        sys.stdout.write(text)
    report.result.update(n=g.n, m=g.m)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="anticoord", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def colors(sp, default=2):
        sp.add_argument("-k", type=int, default=default, help="number of colors")

    sp = sub.add_parser("solve", help="run best-response dynamics")
    sp.add_argument("graph")
    colors(sp)
    sp.add_argument("--init", choices=("all1", "random"), default="all1")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--max-steps", type=int, default=None)
    sp.add_argument("-o", "--output", help="write <prefix>.col and <prefix>.trace")
    sp.add_argument("--dot")
    sp.set_defaults(func=cmd_solve)

    sp = sub.add_parser("check", help="classify a coloring")
    sp.add_argument("graph")
    sp.add_argument("coloring")
    sp.set_defaults(func=cmd_check)

    for name, func in (("enumerate", cmd_enumerate), ("poa", cmd_poa)):
        sp = sub.add_parser(name)
        sp.add_argument("graph")
        colors(sp)
        sp.add_argument("--mode", choices=("stable", "strict"), default="stable")
        sp.add_argument("--budget", type=_budget, default=DEFAULT_BUDGET)
        sp.add_argument("--list", action="store_true")
        sp.add_argument("-o", "--output")
        sp.set_defaults(func=func)

    sp = sub.add_parser("gen", help="emit a graph file: poa-tight K | complete Q | cycle N | random N P")
    sp.add_argument("family", choices=("poa-tight", "complete", "cycle", "random"))
    sp.add_argument("params", nargs="*")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--directed", action="store_true")
    sp.add_argument("-o", "--output")
    sp.set_defaults(func=cmd_gen)

    for name, func in (("reduce", cmd_reduce), ("verify", cmd_verify)):
        sp = sub.add_parser(name)
        sp.add_argument("kind", choices=REDUCTION_KINDS)
        sp.add_argument("instance")
        colors(sp, default=None)
        sp.add_argument("--copies", help="paper (n^3), min (n) or a number")
        sp.add_argument("--budget", type=_budget, default=DEFAULT_BUDGET)
        sp.add_argument("-o", "--output")
        sp.set_defaults(func=func)

    sp = sub.add_parser("dot", help="render a graph as DOT")
    sp.add_argument("graph")
    sp.add_argument("--coloring")
    sp.add_argument("--roles")
    sp.add_argument("-o", "--output")
    sp.set_defaults(func=cmd_dot)
    return p


def main(argv: Optional[list] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    if args.command in ("reduce", "verify") and args.k is None:
        args.k = 3 if args.kind in ("kcolor-strict", "directed-k") else 2
    report = Report(argv)
    out = sys.stderr if args.command in ("gen", "dot") and not getattr(args, "output", None) else sys.stdout
    if args.command == "reduce" and not args.output:
        out = sys.stderr
    try:
        status = args.func(args, report)
    except BudgetExceededError as exc:
        report.add(f"error: {exc}")
        report.result.update(error="budget", needed=exc.needed)
        status = EXIT_BUDGET
    except (TooManyVariablesError, TooLargeError) as exc:
        report.add(f"error: {exc}")
        report.result["error"] = "budget"
        status = EXIT_BUDGET
    except NoEquilibriumError as exc:
        report.add(f"error: {exc}")
        report.result["error"] = "no-equilibrium"
        status = EXIT_NO_EQUILIBRIUM
    except (AnticoordError, OSError, ValueError) as exc:
        report.add(f"error: {exc}")
        report.result["error"] = "input"
        status = EXIT_INPUT
    out.write(report.text(status))
    return status


if __name__ == "__main__":
    sys.exit(main())
