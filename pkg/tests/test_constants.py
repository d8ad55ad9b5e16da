from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from bipcert.constants import as_fraction, b_sequence, derive_constants, derive_constants_c2l, ell0_of, mu_of
from bipcert.errors import InputError

from oracles import constants_c2l, constants_general


def test_ell0_beta_one_branch():
    assert ell0_of(1.5, 1) == 3
    assert ell0_of(Fraction(4, 3), 1) == 4  # floor(3)+1, exact at the integer boundary


def test_ell0_beta_above_one():
    # alpha=1.75, beta=1.5: log_{1.5}(0.5*0.75/0.25) = log_{1.5} 1.5 = 1, so floor+2 = 3
    assert ell0_of(1.75, 1.5) == 3


def test_general_constants_at_unit_parameters():
    c = derive_constants(1.5, 1, 1, 1)
    assert c.ell0 == 3
    assert c.gamma == pytest.approx(1 / 144, rel=1e-15)
    terms = [0.5 * (1 / 2) ** 2, (1 / 4) * (1 / 144) ** 0.5, (1 / 144) / 3]
    assert c.mu == pytest.approx(min(terms), rel=1e-15)
    assert c.bigL == int(3 / mu_of(1.5, 1, 1, 0.5)) * 3
    assert c.k0 == 2 * 3 + c.bigL + 2


@pytest.mark.parametrize("ell,delta,big_l,k0", [(2, 1, 1536, 1542), (2, 16, 6, 12), (3, 1, 9 * 24 ** 3, None)])
def test_c2l_constants(ell, delta, big_l, k0):
    c = derive_constants_c2l(ell, delta)
    assert c.bigL == big_l
    assert c.k0 == 2 * ell + big_l + 2
    if k0 is not None:
        assert c.k0 == k0


GRID = [(1.5, 1, 1, 1), (1.5, 1, 2, 0.5), (1.25, 1, 1, 0.1), (1.9, 1.5, 1, 1), (1.75, 1.5, 0.5, 2),
        (1.6, 1.2, 1, 0.3), (1.34, 1, 3, 1), (1.5, 1.25, 1, 1), (1.99, 1.01, 1, 1), (1.1, 1.05, 1, 0.01)]


@pytest.mark.parametrize("alpha,beta,rho,delta", GRID)
def test_general_constants_match_second_implementation(alpha, beta, rho, delta):
    got = derive_constants(alpha, beta, rho, delta)
    ref = constants_general(alpha, beta, rho, delta)
    assert (got.ell0, got.bigL, got.k0) == (ref["ell0"], ref["bigL"], ref["k0"])
    for key in ("gamma", "mu", "mu_half"):
        assert getattr(got, key) == pytest.approx(ref[key], rel=1e-12)


@given(st.integers(2, 6), st.fractions(Fraction(1, 100), Fraction(50)))
def test_c2l_constants_match_second_implementation(ell, delta):
    got = derive_constants_c2l(ell, delta)
    ref = constants_c2l(ell, delta)
    assert (got.bigL, got.k0) == (ref["bigL"], ref["k0"])
    assert got.mu == pytest.approx(ref["mu"], rel=1e-12)
    assert got.gamma == pytest.approx(ref["gamma"], rel=1e-12)


def test_b_sequence_recurrence():
    bs = b_sequence(1.5, 1, 4)
    assert bs[0] == Fraction(1, 2)
    assert all(b2 == b1 + Fraction(1, 2) for b1, b2 in zip(bs, bs[1:]))


def test_float_inputs_read_as_decimals():
    assert as_fraction(1.1) == Fraction(11, 10)
    assert as_fraction("0.25") == Fraction(1, 4)


@pytest.mark.parametrize("args", [(2, 1, 1, 1), (1.5, 1.5, 1, 1), (1.5, 0.5, 1, 1), (1.5, 1, 0, 1), (1.5, 1, 1, -1)])
def test_domain_errors(args):
    with pytest.raises(InputError):
        derive_constants(*args)


def test_c2l_domain_errors():
    with pytest.raises(InputError):
        derive_constants_c2l(1, 1)
    with pytest.raises(InputError):
        derive_constants_c2l(2, 0)
