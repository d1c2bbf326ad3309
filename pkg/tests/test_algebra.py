import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import has_root_mod_p, valuation_by_division

from kodaira.errors import DomainError, FieldDivisionError
from kodaira.expressions import parse_rational
from kodaira.fields import GF, PrimeField, extension_of_degree
from kodaira.polynomials import Poly
from kodaira.rational import Place, RationalFunction, local_expand, valuation

F5 = PrimeField(5)


def test_prime_field_examples():
    assert F5.add(2, 4) == 1
    assert PrimeField(7).inv(3) == 5


def test_extension_field_example():
    F4 = GF(2, [1, 1, 1])
    x = F4.gen
    assert F4.mul(x, F4.add(x, F4.one)) == F4.one


def test_field_errors():
    with pytest.raises(DomainError):
        PrimeField(4)
    with pytest.raises(FieldDivisionError):
        F5.inv(0)
    with pytest.raises(DomainError):
        GF(2, [1, 0, 1])            # x^2 + 1 = (x + 1)^2 over F_2


@pytest.mark.parametrize("F", [extension_of_degree(PrimeField(2), 3),
                               extension_of_degree(PrimeField(5), 2),
                               extension_of_degree(extension_of_degree(PrimeField(2), 2), 2)])
def test_extension_field_axioms(F):
    rng = random.Random(7)
    for _ in range(300):
        a, b, c = F.random(rng), F.random(rng), F.random(rng)
        assert F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c))
        assert F.mul(F.mul(a, b), c) == F.mul(a, F.mul(b, c))
        if a != F.zero:
            assert F.mul(a, F.inv(a)) == F.one
        assert F.pow(a, F.q) == a


def poly(F, text):
    r = parse_rational(text, F)
    assert r.is_polynomial()
    return r.num


def test_factor_examples():
    F2 = PrimeField(2)
    assert poly(F2, "t^2 + 1").factor() == [(poly(F2, "t + 1"), 2)]
    assert poly(F5, "t").factor() == [(poly(F5, "t"), 1)]
    assert sorted(poly(F5, "t^2 + 1").factor(), key=lambda x: x[0].coeffs) == \
        sorted([(poly(F5, "t + 2"), 1), (poly(F5, "t + 3"), 1)], key=lambda x: x[0].coeffs)


def test_valuation_examples():
    t0 = Place.at(F5, 0)
    assert valuation(parse_rational("t^3/(t+1)", F5), t0) == 3
    assert valuation(parse_rational("t^3", F5), Place.infinity(F5)) == -3
    assert valuation(parse_rational("(t+1)^2*t", F5), Place.at(F5, F5.neg(1))) == 2


def test_local_expand_examples():
    t0 = Place.at(F5, 0)
    s = local_expand(parse_rational("t/(1-t)", F5), t0, 3)
    assert (s.valuation, s.coeffs) == (1, (1, 1, 1))
    s = local_expand(parse_rational("t^3", F5), Place.infinity(F5), 1)
    assert (s.valuation, s.coeffs) == (-3, (1,))
    s = local_expand(RationalFunction.one(F5), Place.at(F5, 3), 4)
    assert (s.valuation, s.coeffs) == (0, (1, 0, 0, 0))


small_primes = st.sampled_from([2, 3, 5, 7, 11])


@st.composite
def prime_polys(draw, p, max_degree=5):
    coeffs = draw(st.lists(st.integers(0, p - 1), min_size=1, max_size=max_degree + 1))
    return coeffs


@settings(max_examples=300)
@given(st.data())
def test_valuation_matches_repeated_division(data):
    p = data.draw(small_primes)
    F = PrimeField(p)
    num = data.draw(prime_polys(p).filter(lambda c: any(c)))
    den = data.draw(prime_polys(p).filter(lambda c: any(c)))
    root = data.draw(st.integers(0, p - 1))
    r = RationalFunction(Poly(F, num), Poly(F, den))
    assert valuation(r, Place.at(F, root)) == valuation_by_division(num, den, root, p)


@settings(max_examples=300)
@given(st.data())
def test_small_factors_have_no_roots(data):
    p = data.draw(small_primes)
    F = PrimeField(p)
    coeffs = data.draw(prime_polys(p, 7).filter(lambda c: any(c[1:])))
    for g, _ in Poly(F, coeffs).factor():
        if 2 <= g.degree <= 3:
            assert not has_root_mod_p(list(g.coeffs), p)


@settings(max_examples=200)
@given(st.data())
def test_local_expand_is_coherent(data):
    p = data.draw(small_primes)
    F = PrimeField(p)
    num = data.draw(prime_polys(p).filter(lambda c: any(c)))
    den = data.draw(prime_polys(p).filter(lambda c: any(c)))
    r = RationalFunction(Poly(F, num), Poly(F, den))
    place = Place.infinity(F) if data.draw(st.booleans()) else Place.at(F, data.draw(st.integers(0, p - 1)))
    lo, hi = local_expand(r, place, 3), local_expand(r, place, 7)
    assert hi.truncate(3) == lo
