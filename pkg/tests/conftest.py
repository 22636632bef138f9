"""Shared fixtures and a package-independent brute-force oracle.

The oracle works from plain arc lists and ``itertools.product``; it never
imports the code under test, so it can cross-check the vectorized
enumeration and the pruned search.
"""

import contextlib
import itertools
import time

import pytest

from anticoord import build_graph, complete_graph, cycle_graph, path_graph


def oracle_label(n, arcs, colors, k):
    """'unstable' / 'stable-non-strict' / 'strictly-stable' by direct counting."""
    out = {v: [] for v in range(1, n + 1)}
    for a, b in arcs:
        out[a].append(b)
    strict = True
    for v in range(1, n + 1):
        counts = [sum(1 for w in out[v] if colors[w - 1] == m) for m in range(1, k + 1)]
        own = counts[colors[v - 1] - 1]
        if own > min(counts):
            return "unstable"
        if sum(1 for x in counts if x == own) > 1:
            strict = False
    return "strictly-stable" if strict else "stable-non-strict"


def oracle_welfare(arcs, colors):
    return sum(1 for a, b in arcs if colors[a - 1] != colors[b - 1])


def oracle_equilibria(n, arcs, k, strict=False):
    found = []
    for colors in itertools.product(range(1, k + 1), repeat=n):
        label = oracle_label(n, arcs, colors, k)
        if label == "strictly-stable" or (label == "stable-non-strict" and not strict):
            found.append(colors)
    return found


def arcs_of(g):
    return g.arcs()


@pytest.fixture
def k2():
    return complete_graph(2)


@pytest.fixture
def triangle():
    return complete_graph(3)


@pytest.fixture
def path3():
    return path_graph(3)


@pytest.fixture
def dicycle3():
    return build_graph(3, True, [(1, 2), (2, 3), (3, 1)])


@pytest.fixture
def c4():
    return cycle_graph(4)


_acceptance_lines = {}


@pytest.fixture
def criterion():
    """Context manager timing one acceptance criterion and recording PASS/FAIL."""

    @contextlib.contextmanager
    def run(number, title, limit, already=0.0):
        start = time.perf_counter()
        status = "FAIL"
        try:
            yield
            elapsed = already + time.perf_counter() - start
            assert elapsed < limit, f"took {elapsed:.1f}s, limit {limit}s"
            status = "PASS"
        finally:
            elapsed = already + time.perf_counter() - start
            line = f"{status} criterion {number:>2} [{elapsed:7.2f}s / {limit}s] {title}"
            _acceptance_lines[number] = line
            print(line)

    return run


def pytest_terminal_summary(terminalreporter):
    if _acceptance_lines:
        terminalreporter.section("acceptance criteria")
        for number in sorted(_acceptance_lines):
            terminalreporter.write_line(_acceptance_lines[number])
