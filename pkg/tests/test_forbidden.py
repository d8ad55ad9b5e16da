import itertools
import math

import networkx as nx
import pytest
from hypothesis import given, strategies as st

from bipcert.errors import InputError
from bipcert.forbidden import (CompleteBipartite, EvenCycle, FamilySpec, OddCycle, Theta, cycle_spectrum,
                               cycle_through_edge, find_cycle_exact, find_kst, find_theta, girth,
                               is_family_free, kst_through_edge, validate_witness)
from bipcert.generators import incidence_graph
from bipcert.graph import Graph

from conftest import bigraphs, graphs, petersen, to_nx


def brute_kst(g, s, t):
    for left in itertools.combinations(range(g.n), s):
        common = set(range(g.n)) - set(left)
        for x in left:
            common &= set(g.neighbors(x))
        if len(common) >= t:
            return True
    return False


def brute_cycle_lengths(g, max_len):
    return {len(c) for c in nx.simple_cycles(to_nx(g), length_bound=max_len)}


def brute_theta(g, t, ell):
    h = to_nx(g)
    for a, b in itertools.combinations(range(g.n), 2):
        paths = [p for p in nx.all_simple_paths(h, a, b, cutoff=ell) if len(p) == ell + 1]
        for combo in itertools.combinations(paths, t):
            inner = [v for p in combo for v in p[1:-1]]
            if len(set(inner)) == len(inner):
                return True
    return False


def test_petersen_girth_and_spectrum():
    g = petersen()
    assert girth(g) == 5
    assert cycle_spectrum(g, 10) == brute_cycle_lengths(g, 10) == {5, 6, 8, 9}


def test_fano_incidence_is_c4_free_with_girth_6():
    g = incidence_graph(2)
    assert g.n == 14 and all(g.degree(v) == 3 for v in range(14))
    assert girth(g) == 6
    assert find_kst(g, 2, 2) is None
    assert find_cycle_exact(g, 6) is not None


def test_forest_has_infinite_girth():
    assert girth(Graph.path(5)) == math.inf


@given(graphs(max_n=9), st.integers(1, 3), st.integers(1, 3))
def test_kst_matches_brute_force(g, s, t):
    s, t = min(s, t), max(s, t)
    w = find_kst(g, s, t)
    assert (w is not None) == brute_kst(g, s, t)
    if w is not None:
        assert validate_witness(g, w)


@given(graphs(max_n=9), st.integers(3, 9))
def test_cycle_detection_matches_networkx(g, length):
    w = find_cycle_exact(g, length)
    assert (w is not None) == (length in brute_cycle_lengths(g, length))
    if w is not None:
        assert validate_witness(g, w)


@given(graphs(max_n=9))
def test_girth_and_spectrum_match_networkx(g):
    lengths = brute_cycle_lengths(g, 9)
    assert girth(g) == min(lengths, default=math.inf)
    assert cycle_spectrum(g, 9) == lengths


@given(graphs(min_n=2, max_n=8), st.integers(3, 7))
def test_cycle_through_edge(g, length):
    if not g.m:
        return
    u, v = g.edges()[0]
    h = to_nx(g)
    expected = any(len(c) == length and _uses(c, u, v) for c in nx.simple_cycles(h, length_bound=length))
    assert cycle_through_edge(g, length, u, v) == expected


def _uses(cycle, u, v):
    pairs = {frozenset((cycle[i], cycle[(i + 1) % len(cycle)])) for i in range(len(cycle))}
    return frozenset((u, v)) in pairs


@given(graphs(min_n=2, max_n=8), st.integers(1, 2), st.integers(1, 3))
def test_kst_through_edge(g, s, t):
    s, t = min(s, t), max(s, t)
    if not g.m:
        return
    u, v = g.edges()[-1]
    expected = False
    for left in itertools.combinations(range(g.n), s):
        right = set(range(g.n)) - set(left)
        for x in left:
            right &= set(g.neighbors(x))
        for rs in itertools.combinations(sorted(right), t):
            verts = set(left) | set(rs)
            if {u, v} <= verts and ((u in left) != (v in left)):
                expected = True
    assert kst_through_edge(g, s, t, u, v) == expected


@given(bigraphs(max_side=5), st.integers(2, 3), st.integers(2, 3))
def test_theta_matches_brute_force(g, t, ell):
    w = find_theta(g, t, ell)
    assert (w is not None) == brute_theta(g, t, ell)
    if w is not None:
        assert validate_witness(g, w)
        assert all(len(p) == ell + 1 for p in w.theta_paths())


def test_theta_2_ell_is_even_cycle():
    g = Graph.cycle(6)
    assert find_theta(g, 2, 3) is not None
    assert find_theta(g, 2, 2) is None


def test_family_freeness_and_json_roundtrip():
    fam = FamilySpec.of(CompleteBipartite(2, 2), EvenCycle(3), Theta(2, 2), OddCycle(5))
    assert FamilySpec.from_json(fam.to_json()) == fam
    free, w = is_family_free(incidence_graph(2), FamilySpec.of(CompleteBipartite(2, 2)))
    assert free and w is None
    free, w = is_family_free(Graph.complete(4), FamilySpec.of(CompleteBipartite(2, 2)))
    assert not free and validate_witness(Graph.complete(4), w)


@pytest.mark.parametrize("obj", [{}, {"forbidden": []}, {"forbidden": [{"type": "nope"}]},
                                 {"forbidden": [{"type": "complete_bipartite", "s": 3, "t": 2}]}])
def test_bad_family_json(obj):
    with pytest.raises(InputError):
        FamilySpec.from_json(obj)


def test_caps_are_enforced():
    with pytest.raises(InputError):
        find_kst(Graph.complete(3), 1, 9)
    with pytest.raises(InputError):
        find_cycle_exact(Graph.complete(3), 65)
