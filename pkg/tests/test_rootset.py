import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from unity_filters import divlattice as dl
from unity_filters import rootset as rs
from unity_filters.cyclotomic import as_integer, is_zero
from unity_filters.errors import CapExceeded, EmptyReduction, InvalidInput


def S(n, E):
    return rs.DivisorSystem(n, E)


def test_power_sum_examples():
    assert rs.power_sum(S(12, [3]), 1) == 0
    assert rs.power_sum(S(12, [4, 12]), 3) == 3
    assert rs.power_sum(S(12, [4, 12]), 2) == 0
    assert rs.power_sums(S(12, [4, 12])) == {1: 0, 2: 0, 3: 3, 4: 0, 6: 3, 12: 3}
    with pytest.raises(InvalidInput):
        rs.power_sum(S(12, [4]), 5)
    with pytest.raises(InvalidInput):
        S(12, [13])
    with pytest.raises(InvalidInput):
        S(12, [])


def test_closed_form_examples():
    assert rs.filter_power_sum_closed_form(12, 1, 12) == 12
    for c in dl.divisors(12):
        assert rs.filter_power_sum_closed_form(12, 12, c) == 1
    assert rs.filter_power_sum_closed_form(12, 4, 6) == 3


def test_is_divisor_filter_examples():
    assert rs.is_divisor_filter(S(12, [4, 12])) == 4
    assert rs.is_divisor_filter(S(12, dl.divisors(12))) == 1
    assert rs.is_divisor_filter(S(12, [4, 6, 12])) is None


def test_reduce_examples():
    assert rs.reduce(S(12, [4, 6, 12]), 2) == S(6, [2, 3, 6])
    assert rs.reduce(S(12, [4, 12]), 3) == S(4, [4])
    with pytest.raises(EmptyReduction):
        rs.reduce(S(12, [3]), 2)
    with pytest.raises(InvalidInput):
        rs.reduce(S(12, [4]), 4)


def test_check_roots_theorem_examples():
    rep = rs.check_roots_theorem(12)
    assert (rep.tested, rep.filters, rep.failed) == (63, 6, 0)
    for p in (2, 3, 13, 97):
        rep = rs.check_roots_theorem(p)
        assert (rep.tested, rep.filters, rep.failed) == (3, 2, 0)
    with pytest.raises(CapExceeded):
        rs.check_roots_theorem(720720)


def test_explicit_examples():
    assert is_zero(rs.power_sum_explicit(rs.ExplicitRootSet(12, range(12)), 1))
    assert as_integer(rs.power_sum_explicit(rs.ExplicitRootSet(12, [6]), 1)) == -1
    assert as_integer(rs.power_sum_explicit(rs.ExplicitRootSet(12, [0, 4]), 1)) is None
    assert rs.is_group_explicit(rs.ExplicitRootSet(12, [0]))
    assert rs.is_group_explicit(rs.ExplicitRootSet(12, [0, 6]))
    assert not rs.is_group_explicit(rs.ExplicitRootSet(12, [0, 4]))
    assert rs.galois_orbit_decomposition(rs.ExplicitRootSet(12, [4, 8])) == S(12, [4])
    assert rs.galois_orbit_decomposition(rs.ExplicitRootSet(12, [0, 3, 6, 9])) == S(12, [3, 6, 12])
    assert rs.galois_orbit_decomposition(rs.ExplicitRootSet(12, [0, 4])) is None


def test_json_roundtrip():
    s = S(60, [5, 10, 60])
    assert rs.DivisorSystem.from_json(s.to_json()) == s
    assert s.to_json() == {"n": 60, "E": [5, 10, 60]}


@pytest.mark.parametrize("n", range(1, 361))
def test_filter_closed_form_agrees(n):
    for e in dl.divisors(n):
        f = rs.DivisorSystem.filter(n, e)
        assert rs.is_divisor_filter(f) == e
        for c in dl.divisors(n):
            assert rs.power_sum(f, c) == rs.filter_power_sum_closed_form(n, e, c)


def test_modifications_break_filters():
    for n in range(2, 101):
        f = dl.factorize(n)
        full = rs.DivisorSystem.filter(n, 1)
        if len(f) > 1:
            for e in dl.divisors(n)[1:]:
                grown = S(n, rs.DivisorSystem.filter(n, e).E + (1,))
                assert min(rs.power_sums(grown).values()) < 0
            shrunk = S(n, full.E[1:])
            assert min(rs.power_sums(shrunk).values()) < 0
        else:
            p = f[0][0]
            grown = S(n, rs.DivisorSystem.filter(n, p).E + (1,))
            assert rs.is_divisor_filter(grown) == 1
            shrunk = S(n, full.E[1:])
            assert rs.is_divisor_filter(shrunk) == p
            assert min(rs.power_sums(shrunk).values()) >= 0


systems = st.integers(1, 60).flatmap(lambda n: st.tuples(
    st.just(n), st.sets(st.sampled_from(dl.divisors(n)), min_size=1)))


@settings(max_examples=200, deadline=None)
@given(systems)
def test_integer_formula_matches_cyclotomic(data):
    n, E = data
    s = S(n, E)
    u = rs.ExplicitRootSet.from_system(s)
    assert rs.galois_orbit_decomposition(u) == s
    for c in dl.divisors(n):
        assert as_integer(rs.power_sum_explicit(u, c)) == rs.power_sum(s, c)


@settings(max_examples=200, deadline=None)
@given(systems)
def test_reduction_recurrence(data):
    n, E = data
    s = S(n, E)
    a = rs.power_sums(s)
    for p in dl.prime_divisors(n):
        try:
            r = rs.reduce(s, p)
        except EmptyReduction:
            continue
        for c in dl.divisors(n // p):
            if (n // p) % (p * c) == 0:
                assert rs.power_sum(r, c) == a[c]
            else:
                assert p * rs.power_sum(r, c) == (p - 1) * a[c] + a[p * c]


def test_vectorized_helpers_match_scalar():
    assert rs.oracle_discrepancies(12)[1] == []
    assert rs.acp_violations(24)[1] == []
    M = rs.term_matrix(12)
    divs = dl.divisors(12)
    for i, d in enumerate(divs):
        for j, c in enumerate(divs):
            assert M[i, j] == rs.power_sum_term(12, d, c)


@pytest.mark.parametrize("n", range(1, 11))
def test_explicit_theorem_exhaustive_small(n):
    checked, bad = rs.explicit_theorem_mismatches(n, rs.explicit_masks(n))
    assert checked == (1 << n) - 1 and bad == []


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 14), st.data())
def test_explicit_theorem_scalar(n, data):
    ex = data.draw(st.sets(st.integers(0, n - 1), min_size=1))
    u = rs.ExplicitRootSet(n, ex)
    values = [as_integer(rs.power_sum_explicit(u, k)) for k in range(n)]
    nonneg = all(v is not None and v >= 0 for v in values)
    assert nonneg == rs.is_group_explicit(u)


def test_parallel_report_identical():
    assert rs.check_roots_theorem(120, jobs=1).as_dict() == rs.check_roots_theorem(120, jobs=3).as_dict()
