import math

import pytest
from hypothesis import given, strategies as st

from bipcert.errors import InputError
from bipcert.forbidden import find_cycle_exact, find_kst, find_theta, girth
from bipcert.generators import (absolute_points, bipartite_with_noise, incidence_graph, layered_graph,
                                polarity_graph, random_mindeg_graph, random_theta_free, regular_tree,
                                theta_copy_bound, theta_p_even, theta_p_odd)
from bipcert.gf import MODULI, PrimePower, field, projective_points
from bipcert.graph import read_graph, write_graph


@pytest.mark.parametrize("q", [2, 3, 4, 5, 7, 8, 9, 11, 13, 16])
def test_field_axioms(q):
    assert field(q).check_axioms() == []


@pytest.mark.parametrize("q", sorted(MODULI))
def test_moduli_are_irreducible(q):
    pp = PrimePower.of(q)
    f = field(q)
    # a field has no zero divisors
    assert all(f.mul[a, b] != 0 for a in range(1, q) for b in range(1, q))
    assert pp.p ** pp.e == q


@pytest.mark.parametrize("q", [1, 6, 10, 12, 15])
def test_non_prime_powers_rejected(q):
    with pytest.raises(InputError):
        incidence_graph(q)


@pytest.mark.parametrize("q", [2, 3, 4, 5, 7])
def test_incidence_graph_shape(q):
    g = incidence_graph(q)
    n = q * q + q + 1
    assert g.n == 2 * n and g.m == n * (q + 1)
    assert all(g.degree(v) == q + 1 for v in range(g.n))
    assert girth(g) == 6 and find_kst(g, 2, 2) is None


def test_fano_incidence_text_roundtrip():
    g = incidence_graph(2)
    text = write_graph(g)
    assert write_graph(read_graph(text)) == text
    assert text.splitlines()[0] == "bigraph 7 7"


@pytest.mark.parametrize("q", [2, 3, 4, 5, 7])
def test_polarity_graph(q):
    g = polarity_graph(q)
    n = q * q + q + 1
    absolute = absolute_points(q)
    assert g.n == n and len(absolute) == q + 1
    assert sorted(v for v in range(n) if g.degree(v) == q) == absolute
    assert all(g.degree(v) in (q, q + 1) for v in range(n))
    assert find_kst(g, 2, 2) is None
    # direct recount of x.x = 0
    f = field(q)
    pts = projective_points(f)
    direct = [i for i, x in enumerate(pts) if f.add[f.add[f.mul[x[0], x[0]], f.mul[x[1], x[1]]], f.mul[x[2], x[2]]] == 0]
    assert direct == absolute


def test_polarity_q2():
    g = polarity_graph(2)
    assert (g.n, g.m) == (7, 9)


def test_polarity_has_triangles_for_odd_q():
    assert find_cycle_exact(polarity_graph(3), 3) is not None


@pytest.mark.parametrize("t,ell", [(2, 2), (3, 2), (2, 3)])
def test_theta_free_output(t, ell):
    g, rep = random_theta_free(12, 12, t, ell, seed=5)
    assert find_theta(g, t, ell) is None
    assert rep.edges_after == g.m == rep.edges_before - rep.copies_destroyed
    assert rep.p_rule == ("closed-form" if ell % 2 else "numeric")
    again, rep2 = random_theta_free(12, 12, t, ell, seed=5)
    assert again == g and rep2.to_json() == rep.to_json()


@given(st.integers(2, 40), st.integers(2, 40), st.integers(2, 4), st.sampled_from([2, 4]))
def test_even_p_balances_the_bound(m, n, t, ell):
    p = theta_p_even(m, n, t, ell)
    if p < 1:
        assert theta_copy_bound(m, n, t, ell, p) == pytest.approx(0.5 * m * n * p, rel=1e-9)


@given(st.integers(2, 40), st.integers(2, 40), st.integers(2, 4), st.sampled_from([3, 5]))
def test_odd_p_closed_form(m, n, t, ell):
    q = ell // 2
    assert theta_p_odd(m, n, t, ell) == pytest.approx((m * n) ** (-t * q / (2 * t * q + t - 1)), rel=1e-15)


def test_theta_cap():
    with pytest.raises(InputError):
        random_theta_free(40, 40, 2, 2, seed=0)


def test_mindeg_models():
    g = random_mindeg_graph(20, 3, seed=1)
    assert all(g.degree(v) == 3 for v in range(20))
    h = random_mindeg_graph(21, 4, seed=1, model="gnp")
    assert h.min_degree() >= 4
    e = random_mindeg_graph(2, 1, seed=0)
    assert e.edges() == [(0, 1)]
    with pytest.raises(InputError):
        random_mindeg_graph(5, 2, seed=0)  # odd n with matchings


def test_layered_and_tree_shapes():
    g = layered_graph(3, 2)
    assert g.n == 7 and g.m == 3 + 9 and g.is_bipartite()
    t = regular_tree(2, 3)
    assert t.n == 15 and t.m == 14 and girth(t) == math.inf


def test_noise_vertices():
    g = bipartite_with_noise(6, 6, 0.9, 2, 3, seed=0)
    assert g.n == 14 and [g.degree(v) for v in (12, 13)] == [3, 3]
