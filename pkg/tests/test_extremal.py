import itertools

import pytest
from hypothesis import given, strategies as st

from bipcert.errors import InputError
from bipcert.extremal import (SmoothnessParams, check_quasi_smooth, furedi_bound, furedi_holds, iroot,
                              kst_family, turan, verify_record, write_z_table, z_table, zarankiewicz)
from bipcert.forbidden import EvenCycle, FamilySpec, OddCycle

from oracles import furedi_float, naive_z22

K22 = kst_family(2, 2)


@pytest.mark.parametrize("m,n,value", [(2, 2, 3), (3, 3, 6), (2, 3, 4), (3, 4, 7), (4, 4, 9)])
def test_known_z22_values(m, n, value):
    rec = zarankiewicz(m, n, K22)
    assert rec.value == value
    assert verify_record(rec)


@pytest.mark.parametrize("m,n", [(1, 4), (2, 4), (3, 5), (2, 6)])
def test_z22_matches_naive_enumerator(m, n):
    assert zarankiewicz(m, n, K22).value == naive_z22(m, n)


def test_z23_small():
    # K_{2,3}-free 3x3: any two rows share at most 2 columns
    brute = max(
        sum(map(sum, rows)) for rows in itertools.product(itertools.product((0, 1), repeat=3), repeat=3)
        if all(sum(a & b for a, b in zip(r1, r2)) <= 2 for r1, r2 in itertools.combinations(rows, 2))
        and all(sum(col) <= 3 for col in zip(*rows))
    )
    rec = zarankiewicz(3, 3, kst_family(2, 3))
    assert rec.value == brute == 7


@pytest.mark.parametrize("n,value", [(1, 0), (2, 1), (3, 3), (4, 4), (5, 6), (6, 7), (7, 9)])
def test_turan_c4(n, value):
    rec = turan(n, FamilySpec.of(EvenCycle(2)))
    assert rec.value == value and verify_record(rec)


@pytest.mark.parametrize("n", range(2, 8))
def test_turan_triangle_is_mantel(n):
    assert turan(n, FamilySpec.of(OddCycle(3))).value == n * n // 4


def test_heuristic_is_a_valid_lower_bound():
    rec = zarankiewicz(4, 5, K22, exact=False, seed=3, restarts=10)
    assert not rec.exact and verify_record(rec)
    assert rec.value <= zarankiewicz(4, 5, K22).value


def test_parallel_search_is_deterministic():
    a = zarankiewicz(3, 4, K22, jobs=1)
    b = zarankiewicz(3, 4, K22, jobs=2)
    assert a.value == b.value and a.witness == b.witness


@given(st.integers(1, 12), st.integers(1, 12), st.integers(1, 3), st.integers(0, 3), st.integers(0, 150))
def test_furedi_exact_comparison_agrees_with_decimal(m, n, s, dt, value):
    m, n = min(m, n), max(m, n)
    t = s + dt
    bound = furedi_float(m, n, s, t)
    if abs(float(bound) - value) > 1e-9:
        assert furedi_holds(value, m, n, s, t) == (value <= bound)
    assert abs(furedi_bound(m, n, s, t) - float(bound)) < 1e-9 * float(bound)


@given(st.integers(0, 10 ** 30), st.integers(1, 5))
def test_iroot(a, k):
    r = iroot(a, k)
    assert r ** k <= a < (r + 1) ** k


def test_furedi_holds_on_perfect_square_boundary():
    # s=2,t=2,m=n=4: 4*2 + 8 + 2*4 = 24 exactly
    assert furedi_holds(24, 4, 4, 2, 2)
    assert not furedi_holds(25, 4, 4, 2, 2)


def test_quasi_smooth_check_flags_violations():
    recs = z_table(6, K22)
    assert check_quasi_smooth(recs, SmoothnessParams(1.5, 1.0, 1.0, 1.0, 1.0)).ok
    bad = check_quasi_smooth(recs, SmoothnessParams(1.5, 1.0, 0.1, 0.1, 1.0))
    assert bad.violations and all(v.kind == "upper" for v in bad.violations)


def test_z_table_csv(tmp_path):
    recs = z_table(5, K22)
    assert [(r.m, r.n) for r in recs] == [(1, 1), (1, 2), (1, 3), (2, 2), (1, 4), (2, 3)]
    path = write_z_table(recs, tmp_path)
    lines = path.read_text().splitlines()
    assert lines[0] == "m,n,family-hash,value,exact,witness-file"
    assert len(lines) == 1 + len(recs)
    assert all((tmp_path / line.split(",")[-1]).exists() for line in lines[1:])


def test_exact_cap_and_domain_errors():
    with pytest.raises(InputError):
        zarankiewicz(3, 2, K22)
    with pytest.raises(InputError):
        zarankiewicz(20, 20, K22)
    with pytest.raises(InputError):
        furedi_bound(5, 4, 2, 2)
    with pytest.raises(InputError):
        SmoothnessParams(2.0, 1.0, 1.0, 1.0, 1.0)
