from __future__ import annotations

import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from stabsearch.gf2poly import (
    cyclic_shift,
    cyclotomic_cosets,
    degree,
    factors_of_xn_minus_1,
    from_bitstring,
    irreducible_factorization,
    poly_divmod,
    poly_gcd,
    poly_mul,
    poly_mul_mod,
    poly_reciprocal,
    to_bitstring,
    xn1,
)


def P(*powers: int) -> int:
    return sum(1 << p for p in powers)


@pytest.mark.parametrize(
    "a, b, mod, expected",
    [
        (P(0, 1), P(0, 1), xn1(5), P(0, 2)),
        (P(1), P(4), xn1(5), P(0)),
        (P(0, 1), P(0, 1, 2, 3), xn1(5), P(0, 4)),
    ],
)
def test_mul_mod_examples(a, b, mod, expected):
    assert poly_mul_mod(a, b, mod) == expected


def test_zero_modulus_rejected():
    with pytest.raises(ValueError):
        poly_mul_mod(3, 5, 0)


def test_zero_polynomial_degree():
    assert degree(0) == -1


@pytest.mark.parametrize("a, n, expected", [(1, 7, 1), (P(1), 5, P(4)), (P(0, 1, 3), 7, P(0, 4, 6))])
def test_reciprocal_examples(a, n, expected):
    assert poly_reciprocal(a, n) == expected


def test_reciprocal_rejects_high_degree():
    with pytest.raises(ValueError):
        poly_reciprocal(P(5), 5)


@given(st.integers(1, 12).flatmap(lambda n: st.tuples(st.just(n), st.integers(0, (1 << n) - 1))))
def test_reciprocal_involution(na):
    n, a = na
    assert poly_reciprocal(poly_reciprocal(a, n), n) == a


@given(st.integers(0, 1 << 14), st.integers(1, 1 << 10))
def test_divmod_identity(a, b):
    q, r = poly_divmod(a, b)
    assert poly_mul(q, b) ^ r == a
    assert degree(r) < degree(b)


@given(st.integers(0, 1 << 12), st.integers(0, 1 << 12), st.integers(0, 1 << 12))
def test_mul_distributes(a, b, c):
    assert poly_mul(a, b ^ c) == poly_mul(a, b) ^ poly_mul(a, c)


@given(st.integers(1, 12).flatmap(lambda n: st.tuples(st.just(n), st.integers(0, (1 << n) - 1), st.integers(0, 30))))
def test_cyclic_shift_is_multiplication_by_x_power(nas):
    n, a, s = nas
    assert cyclic_shift(a, n, s) == poly_mul_mod(a, 1 << (s % n), xn1(n))


def test_small_divisor_sets():
    assert set(factors_of_xn_minus_1(1)) == {1, P(0, 1)}
    assert set(factors_of_xn_minus_1(3)) == {1, P(0, 1), P(0, 1, 2), P(0, 3)}
    assert len(factors_of_xn_minus_1(7)) == 8


def _divisor_count_from_cosets(n: int) -> int:
    e, m = 0, n
    while m % 2 == 0:
        m //= 2
        e += 1
    cosets = cyclotomic_cosets(m)
    return (2**e + 1) ** len(cosets)


@pytest.mark.parametrize("n", range(1, 13))
def test_divisors_exact_and_counted(n):
    divs = factors_of_xn_minus_1(n)
    assert len(set(divs)) == len(divs)
    assert len(divs) == _divisor_count_from_cosets(n)
    assert len(divs) == math.prod(m + 1 for _, m in irreducible_factorization(n))
    for f in divs:
        assert poly_divmod(xn1(n), f)[1] == 0
    # brute force: every divisor of x^n+1 of degree <= n
    brute = [f for f in range(1, 1 << (n + 1)) if poly_divmod(xn1(n), f)[1] == 0]
    assert sorted(brute) == sorted(divs)


def test_factor_zero_rejected():
    with pytest.raises(ValueError):
        factors_of_xn_minus_1(0)


def test_bitstring_little_endian():
    assert to_bitstring(P(0, 1, 3)) == "1101"
    assert from_bitstring("11010") == P(0, 1, 3)
    assert to_bitstring(P(0), 6) == "100000"
    with pytest.raises(ValueError):
        from_bitstring("1021")


@given(st.integers(0, 1 << 10), st.integers(0, 1 << 10))
def test_gcd_divides_both(a, b):
    g = poly_gcd(a, b)
    if g:
        assert poly_divmod(a, g)[1] == 0 and poly_divmod(b, g)[1] == 0
