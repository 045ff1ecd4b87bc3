import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from unity_filters import divlattice as dl
from unity_filters.cyclotomic import (CyclotomicElement, IntPolynomial, _remainder,
                                      as_integer, as_integer_batch, cyclotomic_polynomial,
                                      is_zero, is_zero_batch, reduce_batch)
from unity_filters.errors import InvalidInput, ModulusMismatch


def test_cyclotomic_polynomial_examples():
    assert cyclotomic_polynomial(1).coeffs == (-1, 1)
    assert cyclotomic_polynomial(4).coeffs == (1, 0, 1)
    assert cyclotomic_polynomial(6).coeffs == (1, -1, 1)
    p105 = cyclotomic_polynomial(105)
    assert p105.degree == 48
    assert p105[7] == -2
    assert -2 in p105.coeffs


@pytest.mark.parametrize("n", range(1, 121))
def test_product_over_divisors_is_x_n_minus_1(n):
    prod = IntPolynomial((1,))
    for d in dl.divisors(n):
        prod = prod * cyclotomic_polynomial(d)
    assert prod.coeffs == (-1,) + (0,) * (n - 1) + (1,)


@pytest.mark.parametrize("n", range(1, 61))
def test_degree_is_phi_and_roots_vanish(n):
    p = cyclotomic_polynomial(n)
    assert p.degree == dl.euler_phi(n)
    z = cmath.exp(2j * cmath.pi / n)
    assert abs(p.evaluate(z)) < 1e-6 * (1 + sum(abs(c) for c in p.coeffs))


def test_multiplication_examples():
    a = CyclotomicElement.root(4, 1) * CyclotomicElement.root(4, 3)
    assert a.coeffs == (1, 0, 0, 0)
    one_plus = CyclotomicElement(3, [1, 1, 0])
    assert (one_plus * CyclotomicElement(3, [1, 0, 1])).coeffs == (2, 1, 1)
    x = CyclotomicElement(5, [1, -2, 0, 3, 1])
    assert x + CyclotomicElement.zero(5) == x


def test_is_zero_examples():
    assert is_zero(CyclotomicElement(3, [1, 1, 1]))
    assert not is_zero(CyclotomicElement(3, [1, 0, 0]))
    assert is_zero(CyclotomicElement(6, [1, 0, -1, 1, 0, -1]))


def test_as_integer_examples():
    assert as_integer(CyclotomicElement(4, [3, 0, 0, 0])) == 3
    # xi_6 + xi_6^4 = xi_6 - xi_6 = 0, which is an integer
    assert as_integer(CyclotomicElement(6, [0, 1, 0, 0, 1, 0])) == 0
    assert as_integer(CyclotomicElement(12, [1, 0, 0, 0, 1, 0, 0, 0, 1, 0, 0, 0])) == 0
    assert as_integer(CyclotomicElement(12, [1, 0, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0])) is None
    assert as_integer(CyclotomicElement(4, [0, 1, 0, 0])) is None


def test_modulus_mismatch_and_lift():
    a = CyclotomicElement.root(4, 1)
    b = CyclotomicElement.root(8, 2)
    with pytest.raises(ModulusMismatch):
        a + b
    assert a != b
    assert a.lift(8) == b
    with pytest.raises(InvalidInput):
        CyclotomicElement(4, [1, 2, 3])


def test_equality_is_value_equality():
    # 1 + xi_3 == -xi_3^2
    assert CyclotomicElement(3, [1, 1, 0]) == CyclotomicElement(3, [0, 0, -1])
    assert hash(CyclotomicElement(3, [1, 1, 0])) == hash(CyclotomicElement(3, [0, 0, -1]))


elements = st.integers(1, 30).flatmap(
    lambda n: st.tuples(st.just(n), st.lists(st.integers(-5, 5), min_size=n, max_size=n),
                        st.lists(st.integers(-5, 5), min_size=n, max_size=n)))


@settings(max_examples=150, deadline=None)
@given(elements)
def test_ring_arithmetic_matches_complex_evaluation(data):
    n, a, b = data
    x, y = CyclotomicElement(n, a), CyclotomicElement(n, b)
    for got, want in ((x + y, x.evaluate() + y.evaluate()),
                      (x - y, x.evaluate() - y.evaluate()),
                      (x * y, x.evaluate() * y.evaluate())):
        assert abs(got.evaluate() - want) < 1e-6 * (1 + abs(want))
    assert x - x == CyclotomicElement.zero(n)
    assert is_zero(x - x)


@settings(max_examples=150, deadline=None)
@given(elements)
def test_matrix_reduction_agrees_with_long_division(data):
    n, a, _ = data
    red = reduce_batch(np.array([a]), n)[0]
    slow = _remainder(tuple(a), n)
    phi = dl.euler_phi(n)
    assert list(red[:phi]) == list(slow) + [0] * (phi - len(slow))
    assert bool(is_zero_batch(np.array([a]), n)[0]) == all(v == 0 for v in slow)


@settings(max_examples=150, deadline=None)
@given(elements)
def test_zero_test_agrees_with_float_when_clear(data):
    n, a, _ = data
    x = CyclotomicElement(n, a)
    if abs(x.evaluate()) > 1e-6:
        assert not is_zero(x)
    if is_zero(x):
        assert abs(x.evaluate()) < 1e-9


@settings(max_examples=100, deadline=None)
@given(st.integers(1, 40), st.integers(-20, 20))
def test_integers_certify(n, m):
    x = CyclotomicElement.constant(n, m)
    assert as_integer(x) == m
    vals, ok = as_integer_batch(np.array([x.coeffs]), n)
    assert ok[0] and vals[0] == m


@settings(max_examples=100, deadline=None)
@given(st.integers(2, 40), st.data())
def test_full_orbit_sums_are_ramanujan_integers(n, data):
    # the sum of all primitive n-th roots is mu(n); the sum of all n-th roots is 0
    prim = [k for k in range(n) if math.gcd(k, n) == 1]
    assert as_integer(CyclotomicElement.from_exponents(n, prim)) == dl.moebius(n)
    assert as_integer(CyclotomicElement.from_exponents(n, range(n))) == 0
    u = data.draw(st.integers(1, n - 1).filter(lambda u: math.gcd(u, n) == 1))
    x = CyclotomicElement(n, data.draw(st.lists(st.integers(-3, 3), min_size=n, max_size=n)))
    assert is_zero(x) == is_zero(x.galois(u))
