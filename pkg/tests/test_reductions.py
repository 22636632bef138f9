import itertools

import numpy as np
import pytest

from anticoord import (
    Cnf,
    Coloring,
    MixedGameSpec,
    build_graph,
    classify,
    clause_gadget,
    complete_graph,
    coordination_proxy_transform,
    enumerate_stable,
    extract_assignment,
    negation_gadget,
    path_graph,
    persistence_gadget,
    poa_tight_instance,
    reduce_3sat_to_strict2,
    reduce_bup_to_directed2,
    reduce_directed2_to_directedk,
    reduce_kcolor_to_strict,
    search_stable,
    social_welfare,
    star_graph,
    undirected_to_directed,
)
from anticoord.exceptions import (
    DirectednessMismatchError,
    ExtractionUnsatisfiedError,
    GraphError,
    NotStrictlyStableError,
    OddOrderError,
)
from anticoord.reductions import (
    ClauseGadget,
    check_clause_contract,
    check_connector_contract,
    clause_extension_exists,
    coordination_holds,
    verify_bup_directed2,
    verify_directed_k,
    verify_kcolor_strict,
    verify_sat_strict2,
)

from conftest import oracle_equilibria, oracle_label


@pytest.mark.parametrize("k, m, worst, best", [(2, 4, 4, 8), (3, 9, 12, 18), (4, 16, 24, 32), (5, 25, 40, 50)])
def test_poa_tight_instance_shape(k, m, worst, best):
    g, w, b = poa_tight_instance(k)
    assert (g.n, g.m) == (2 * k, m)
    assert social_welfare(g, w) == worst
    assert social_welfare(g, b) == best == 2 * m
    assert classify(g, w).is_stable


def test_poa_tight_extremes_k2_k3_by_oracle():
    for k, worst, best in ((2, 4, 8), (3, 12, 18)):
        g, _, _ = poa_tight_instance(k)
        arcs = g.arcs()
        stable = oracle_equilibria(g.n, arcs, k)
        welfare = [sum(1 for a, b in arcs if c[a - 1] != c[b - 1]) for c in stable]
        assert min(welfare) == worst
        everything = itertools.product(range(1, k + 1), repeat=g.n)
        assert max(sum(1 for a, b in arcs if c[a - 1] != c[b - 1]) for c in everything) == best


@pytest.mark.parametrize(
    "g, n, strict_count",
    [(complete_graph(3), 6, 6), (complete_graph(4), 10, 0), (complete_graph(1), 3, 6)],
)
def test_kcolor_strict_examples(g, n, strict_count):
    r = reduce_kcolor_to_strict(g, 3)
    assert r.graph.n == n
    assert len(enumerate_stable(r.graph, 3, "strict")) == strict_count
    assert (search_stable(r.graph, 3, "strict") is not None) == (strict_count > 0)


def test_kcolor_strict_roles():
    g = build_graph(3, False, [(1, 2)])
    r = reduce_kcolor_to_strict(g, 4)
    assert r.roles["original"] == {1, 2, 3}
    assert r.roles["edge-gadget:1"] == {4, 5}
    assert r.roles["stabilizer:3"] == {6, 7, 8}


def test_kcolor_strict_errors():
    with pytest.raises(GraphError):
        reduce_kcolor_to_strict(complete_graph(3), 2)
    with pytest.raises(DirectednessMismatchError):
        reduce_kcolor_to_strict(complete_graph(3, directed=True), 3)


def test_gadget_contracts_hold():
    assert check_clause_contract(clause_gadget()) == []
    assert check_connector_contract(persistence_gadget(), negate=False) == []
    assert check_connector_contract(negation_gadget(), negate=True) == []


def test_clause_contract_detects_a_bad_gadget():
    # a lone 6-cycle through the literal vertices forces nothing
    g = build_graph(6, False, [(1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (6, 1)])
    assert check_clause_contract(ClauseGadget(g, ((1, 2), (3, 4), (5, 6)), (1, 2, 3, 4, 5, 6)))


def test_persistence_contract_rejects_negation():
    assert check_connector_contract(persistence_gadget(), negate=True)


@pytest.mark.parametrize(
    "literal_colors, expected",
    [
        ((1, 1, 2, 2, 1, 1), True),
        ((1, 2, 1, 2, 2, 1), False),
        ((2, 1, 2, 2, 1, 2), True),
        ((1, 1, 1, 2, 2, 1), True),
    ],
)
def test_clause_extension_examples(literal_colors, expected):
    assert clause_extension_exists(clause_gadget(), literal_colors) is expected


def test_connector_forcing_examples():
    gadget = persistence_gadget()
    table = oracle_strict_interior(gadget)
    assert all((c[2] == c[3]) == (c[0] == c[1]) for c in table)
    assert any(c[0] == c[1] for c in table) and any(c[0] != c[1] for c in table)
    neg = negation_gadget()
    assert all((c[2] == c[3]) != (c[0] == c[1]) for c in oracle_strict_interior(neg))


def oracle_strict_interior(gadget):
    g = gadget.graph
    out = {v: g.out_neighbors(v) for v in g.vertices}
    keep = []
    for colors in itertools.product((1, 2), repeat=g.n):
        if all(2 * sum(colors[w - 1] == colors[v - 1] for w in out[v]) < len(out[v]) for v in gadget.internal):
            keep.append(colors)
    return keep


SAT_EXAMPLES = [
    (Cnf(3, ((1, 2, -3),)), True),
    (Cnf(1, ((1, 1, 1), (-1, -1, -1))), False),
    (Cnf(3, ((1, 2, 3), (-1, -2, -3))), True),
]


@pytest.mark.parametrize("f, sat", SAT_EXAMPLES)
def test_3sat_reduction_examples(f, sat):
    r = reduce_3sat_to_strict2(f)
    found = search_stable(r.graph, 2, "strict")
    assert (found is not None) == sat
    if sat:
        assert classify(r.graph, found).is_strict
        assert f.satisfied_by(extract_assignment(r, found))


def test_3sat_reduction_sizes():
    assert reduce_3sat_to_strict2(SAT_EXAMPLES[0][0]).graph.n == 52
    assert reduce_3sat_to_strict2(SAT_EXAMPLES[1][0]).graph.n == 75
    assert reduce_3sat_to_strict2(SAT_EXAMPLES[2][0]).graph.n == 87


def test_3sat_roles_partition_the_graph():
    r = reduce_3sat_to_strict2(SAT_EXAMPLES[0][0])
    assert r.roles["reference:1"] == {1, 2}
    assert len(r.roles["clause:1:literal:2"]) == 2
    assert len(r.roles["pendant"]) == 2 * (2 * 3 + 2 * 3)


def test_extract_rejects_non_strict():
    f = SAT_EXAMPLES[0][0]
    r = reduce_3sat_to_strict2(f)
    with pytest.raises(NotStrictlyStableError):
        extract_assignment(r, Coloring(2, (1,) * r.graph.n))


def test_extract_reports_unsatisfied():
    # swap in a formula the graph was not built from
    f = Cnf(1, ((1, 1, 1),))
    r = reduce_3sat_to_strict2(f)
    c = search_stable(r.graph, 2, "strict")
    forged = type(r)(r.graph, r.roles, {**r.params, "formula": Cnf(1, ((-1, -1, -1),))})
    with pytest.raises(ExtractionUnsatisfiedError):
        extract_assignment(forged, c)


def test_reductions_are_deterministic():
    f = SAT_EXAMPLES[2][0]
    assert reduce_3sat_to_strict2(f) == reduce_3sat_to_strict2(f)
    assert reduce_kcolor_to_strict(complete_graph(4), 3) == reduce_kcolor_to_strict(complete_graph(4), 3)
    assert reduce_bup_to_directed2(complete_graph(4)) == reduce_bup_to_directed2(complete_graph(4))
    g = build_graph(3, True, [(1, 2), (2, 3)])
    assert reduce_directed2_to_directedk(g, 4, 3) == reduce_directed2_to_directedk(g, 4, 3)


@pytest.mark.parametrize(
    "g, arcs, colors, label",
    [
        (complete_graph(2), 2, (1, 2), "strictly-stable"),
        (complete_graph(3), 6, (1, 1, 2), "stable-non-strict"),
        (path_graph(3), 4, (1, 2, 1), "strictly-stable"),
    ],
)
def test_undirected_to_directed_examples(g, arcs, colors, label):
    d = undirected_to_directed(g)
    assert d.directed and d.m == arcs
    c = Coloring(2, colors)
    assert classify(g, c).overall.value == classify(d, c).overall.value == label


def test_undirected_to_directed_preserves_every_classification():
    for seed_edges in ([(1, 2), (2, 3), (3, 4), (4, 1), (1, 3)], [(1, 2), (3, 4)]):
        g = build_graph(4, False, seed_edges)
        d = undirected_to_directed(g)
        for colors in itertools.product((1, 2, 3), repeat=4):
            c = Coloring(3, colors)
            assert classify(g, c).overall is classify(d, c).overall


@pytest.mark.parametrize(
    "g, n, stable_count, oracle",
    [
        (complete_graph(4), 10, 12, True),
        (star_graph(3), 10, 0, False),
        (complete_graph(2), 8, 4, True),
    ],
)
def test_bup_reduction_examples(g, n, stable_count, oracle):
    r = reduce_bup_to_directed2(g)
    assert r.graph.n == n
    assert len(enumerate_stable(r.graph, 2)) == stable_count
    assert len(oracle_equilibria(r.graph.n, r.graph.arcs(), 2)) == stable_count
    v = verify_bup_directed2(g, exhaustive=True)
    assert v.oracle is oracle and v.match


def test_bup_reduction_wiring():
    r = reduce_bup_to_directed2(complete_graph(2))
    g = r.graph
    (u,), (v,), (w,) = r.roles["u"], r.roles["v"], r.roles["w"]
    t1, t2, t3 = sorted(r.roles["cycle"])
    assert set(g.out_neighbors(u)) == {1, 2, v}
    assert set(g.out_neighbors(v)) == {1, 2, u}
    assert g.out_neighbors(w) == (v,)
    assert set(g.out_neighbors(t1)) == {t2, u, w}
    assert g.out_neighbors(t3) == (t1,)


def test_bup_reduction_errors():
    with pytest.raises(OddOrderError):
        reduce_bup_to_directed2(complete_graph(3))
    with pytest.raises(DirectednessMismatchError):
        reduce_bup_to_directed2(complete_graph(2, directed=True))


def test_directed_k_examples():
    arc = build_graph(2, True, [(1, 2)])
    r = reduce_directed2_to_directedk(arc, 3, copies=2)
    assert r.graph.n == 6
    assert len(enumerate_stable(r.graph, 3)) == 12
    assert len(oracle_equilibria(6, r.graph.arcs(), 3)) == 12
    cycle = build_graph(3, True, [(1, 2), (2, 3), (3, 1)])
    r = reduce_directed2_to_directedk(cycle, 3, copies=3)
    assert r.graph.n == 8
    assert search_stable(r.graph, 3) is None
    assert enumerate_stable(r.graph, 3) == []


def test_directed_k_x_y_differ_and_copies_counted():
    arc = build_graph(2, True, [(1, 2)])
    r = reduce_directed2_to_directedk(arc, 4, copies=2)
    (x,), (y,) = r.roles["x"], r.roles["y"]
    copy_vertices = [v for j in (1, 2) for v in r.roles[f"copy:{j}"]]
    for c in enumerate_stable(r.graph, 4):
        assert c[x] != c[y]
        for v in r.roles["original"]:
            seen = [c[t] for t in copy_vertices]
            for color in set(range(1, 5)) - {c[x], c[y]}:
                assert seen.count(color) == 2


def test_directed_k_copies_parameter():
    g = build_graph(2, True, [(1, 2)])
    assert reduce_directed2_to_directedk(g, 3).params["copies"] == 8
    assert reduce_directed2_to_directedk(g, 3, "min").params["copies"] == 2
    with pytest.raises(GraphError):
        reduce_directed2_to_directedk(g, 3, copies=1)
    with pytest.raises(GraphError):
        reduce_directed2_to_directedk(g, 2, copies=2)
    with pytest.raises(DirectednessMismatchError):
        reduce_directed2_to_directedk(complete_graph(2), 3)


def test_proxy_k2():
    r = coordination_proxy_transform(MixedGameSpec(2, ((1, 2, True),), 2))
    assert r.graph.n == 3
    stable = [c.colors for c in enumerate_stable(r.graph, 2)]
    assert stable == [(1, 1, 2), (2, 2, 1)]
    assert stable == oracle_equilibria(3, r.graph.arcs(), 2)


def test_proxy_k3():
    r = coordination_proxy_transform(MixedGameSpec(2, ((1, 2, True),), 3))
    assert r.graph.n == 4
    stable = [c.colors for c in enumerate_stable(r.graph, 3)]
    assert len(stable) == 6
    assert all(c[0] == c[1] for c in stable)
    assert coordination_holds(r) == (True, 6)


def test_proxy_leaves_anticoordination_alone():
    r = coordination_proxy_transform(MixedGameSpec(2, ((1, 2, False),), 2))
    assert r.graph == build_graph(2, True, [(1, 2)])
    assert r.params["coordinate_arcs"] == ()


def test_verifications_match():
    assert verify_kcolor_strict(complete_graph(4), 3).match
    assert verify_kcolor_strict(complete_graph(3), 3).oracle
    assert verify_sat_strict2(SAT_EXAMPLES[1][0]).match
    assert verify_directed_k(build_graph(3, True, [(1, 2), (2, 3), (3, 1)]), 3).match


def test_kcolor_reduction_agrees_with_oracle_on_small_graphs():
    rng = np.random.default_rng(0)
    for _ in range(6):
        n = 4
        edges = [p for p in itertools.combinations(range(1, n + 1), 2) if rng.random() < 0.5]
        g = build_graph(n, False, edges)
        r = reduce_kcolor_to_strict(g, 3)
        if 3 ** r.graph.n > 3**10:
            continue
        oracle = any(oracle_label(r.graph.n, r.graph.arcs(), c, 3) == "strictly-stable"
                     for c in itertools.product((1, 2, 3), repeat=r.graph.n))
        assert verify_kcolor_strict(g, 3).equilibrium == oracle
