import itertools
from math import gcd

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from freysymp.numutil import (
    FpElem,
    FqField,
    crt_classes,
    defining_polynomial,
    euler_phi,
    find_alpha_beta,
    is_irreducible,
    is_prime,
    legendre,
    nonzero_alpha_beta_exists,
    primes_in_range,
    primitive_root,
    smallest_nonsquare,
    sqrt_mod,
    valuation,
    valuation_or_none,
)

SMALL_PRIMES = [p for p in range(3, 200) if all(p % q for q in range(2, p))]


def trial_division_prime(n):
    return n >= 2 and all(n % q for q in range(2, int(n**0.5) + 1))


def test_is_prime_matches_trial_division():
    assert [n for n in range(-5, 3000) if is_prime(n)] == [n for n in range(-5, 3000) if trial_division_prime(n)]


def test_is_prime_large():
    assert is_prime(2**61 - 1)
    assert not is_prime(2**61 + 1)
    assert not is_prime(3215031751)  # strong pseudoprime to bases 2, 3, 5, 7


def test_primes_in_range():
    assert primes_in_range(17, 50) == [17, 19, 23, 29, 31, 37, 41, 43, 47]
    assert primes_in_range(10, 10) == []
    assert len(primes_in_range(3, 1000)) == 167


@pytest.mark.parametrize("p", SMALL_PRIMES)
def test_legendre_matches_square_enumeration(p):
    squares = {x * x % p for x in range(1, p)}
    for a in range(-p, 2 * p):
        expected = 0 if a % p == 0 else (1 if a % p in squares else -1)
        assert legendre(a, p) == expected


@pytest.mark.parametrize("p", [2, 9, 1, 15])
def test_legendre_rejects_non_odd_primes(p):
    with pytest.raises(ValueError):
        legendre(1, p)


def test_valuation_examples():
    assert valuation(-34992, 3) == 7  # -34992 = -2^4 3^7
    assert valuation(-34992, 2) == 4
    assert valuation(7, 2) == 0
    assert valuation_or_none(0, 5) is None
    with pytest.raises(ValueError):
        valuation(0, 3)


@given(st.integers(min_value=1, max_value=10**12), st.sampled_from([2, 3, 5, 7, 11]))
def test_valuation_property(n, ell):
    v = valuation(n, ell)
    assert n % ell**v == 0 and (n // ell**v) % ell != 0
    assert valuation(-n, ell) == v


def test_smallest_nonsquare_and_primitive_root():
    assert [smallest_nonsquare(p) for p in (3, 5, 7, 11, 13, 17, 23)] == [2, 2, 3, 2, 2, 3, 5]
    for p in SMALL_PRIMES:
        g = primitive_root(p)
        assert len({pow(g, k, p) for k in range(p - 1)}) == p - 1


def test_euler_phi_matches_count():
    for n in range(1, 200):
        assert euler_phi(n) == sum(1 for k in range(1, n + 1) if gcd(k, n) == 1)


def test_fp_elem_arithmetic():
    a, b = FpElem(3, 7), FpElem(5, 7)
    assert a + b == FpElem(1, 7)
    assert a * b == 1
    assert a / b == a * b.inverse()
    assert a**6 == 1
    assert -a == 4
    with pytest.raises(ValueError):
        FpElem(1, 8)
    with pytest.raises(ZeroDivisionError):
        FpElem(0, 7).inverse()


@pytest.mark.parametrize("p", SMALL_PRIMES)
def test_sqrt_mod_matches_enumeration(p):
    for a in range(p):
        roots = sorted(x for x in range(p) if x * x % p == a)
        r = sqrt_mod(FpElem(a, p))
        if roots:
            assert r is not None and r.value == roots[0]
        else:
            assert r is None


def test_sqrt_mod_examples():
    assert sqrt_mod(FpElem(2, 7)).value == 3
    assert sqrt_mod(FpElem(3, 7)) is None
    assert sqrt_mod(FpElem(-1, 13)).value == 5


def test_find_alpha_beta_examples():
    al, be = find_alpha_beta(7)
    assert (al.value, be.value) == (2, 3)
    al, be = find_alpha_beta(5)
    assert (al.value, be.value) == (0, 2)
    assert not nonzero_alpha_beta_exists(5)
    assert nonzero_alpha_beta_exists(7)


@pytest.mark.parametrize("p", SMALL_PRIMES)
def test_find_alpha_beta_solves_equation(p):
    al, be = find_alpha_beta(p)
    assert (al * al + be * be) == -1  # det of (al, be - 1; be + 1, -al) is 2
    # smallest alpha admitting a solution, then smallest beta
    sols = sorted((a, b) for a in range(p) for b in range(p) if (a * a + b * b + 1) % p == 0)
    assert (al.value, be.value) == sols[0]
    assert nonzero_alpha_beta_exists(p) == any(a and b for a, b in sols)


def test_crt_classes_examples():
    assert crt_classes([(5, {2, 3})], 15) == {2, 3, 7, 8, 12, 13}
    assert crt_classes([(3, {2})], 15) == {2, 5, 8, 11, 14}
    assert crt_classes([(3, {2}), (5, {2, 3})], 15) == {2, 3, 5, 7, 8, 11, 12, 13, 14}
    assert crt_classes([]) == set()


@given(
    st.lists(
        st.tuples(st.integers(2, 12), st.sets(st.integers(0, 11), max_size=4)),
        min_size=1,
        max_size=3,
    )
)
def test_crt_classes_union_of_lifts(conds):
    conds = [(m, {r % m for r in rs}) for m, rs in conds]
    M = 1
    for m, _ in conds:
        M = M * m // gcd(M, m)
    expected = {n for n in range(M) if any(n % m in rs for m, rs in conds)}
    assert crt_classes(conds, M) == expected


def _smallest_rootless(p, k):
    # degree 2 or 3: irreducible iff no root; scan high-to-low coefficient order
    for hi_to_lo in itertools.product(range(p), repeat=k):
        f = list(reversed(hi_to_lo)) + [1]
        if all(sum(c * x**i for i, c in enumerate(f)) % p for x in range(p)):
            return tuple(f)


def test_defining_polynomials_are_irreducible_and_smallest():
    assert defining_polynomial(2, 2) == (1, 1, 1)
    assert defining_polynomial(2, 4) == (1, 1, 0, 0, 1)  # x^4 + x + 1
    for p, k in [(2, 2), (2, 3), (3, 2), (3, 3), (5, 2), (7, 2), (11, 3)]:
        f = defining_polynomial(p, k)
        assert len(f) == k + 1 and f[-1] == 1
        assert f == _smallest_rootless(p, k)
    assert is_irreducible(list(defining_polynomial(2, 4)), 2)
    assert not is_irreducible([1, 0, 1, 0, 1], 2)  # (x^2 + x + 1)^2


def test_fq_field_is_cached():
    assert FqField(3, 2) is FqField(3, 2)
    assert FqField(3, 2).order == 9


@pytest.mark.parametrize("p,k", [(2, 2), (3, 2), (5, 2), (7, 2)])
def test_field_axioms_exhaustive(p, k):
    F = FqField(p, k)
    els = F.elements()
    assert len(els) == p**k == len(set(els))
    zero, one = F(0), F(1)
    nonzero = [x for x in els if x]
    for x in nonzero:
        assert x * x.inverse() == one
        assert x ** (p**k - 1) == one
    # the unit group is cyclic
    assert max(x.multiplicative_order() for x in nonzero) == p**k - 1
    for x in els:
        assert x + zero == x and x * one == x and x - x == zero
    if p**k <= 9:
        for x, y, z in itertools.product(els, repeat=3):
            assert (x + y) * z == x * z + y * z
            assert (x * y) * z == x * (y * z)


@settings(max_examples=200)
@given(st.data())
def test_field_axioms_random(data):
    p, k = data.draw(st.sampled_from([(5, 2), (7, 2), (2, 4), (3, 3)]))
    F = FqField(p, k)
    el = st.lists(st.integers(0, p - 1), min_size=k, max_size=k).map(lambda c: F(tuple(c)))
    x, y, z = data.draw(el), data.draw(el), data.draw(el)
    assert x + y == y + x and x * y == y * x
    assert (x + y) * z == x * z + y * z
    assert (x * y) * z == x * (y * z)
    if y:
        assert (x / y) * y == x
    assert x**p + y**p == (x + y) ** p  # Frobenius is additive
