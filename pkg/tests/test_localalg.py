import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kodaira.actions import parse_polynomial
from kodaira.fields import PrimeField
from kodaira.localalg import local_length
from kodaira.multivariate import PolyRing

F5 = PrimeField(5)
RING = PolyRing(F5, ("t", "x", "y"))


def P(text):
    return parse_polynomial(text, RING)


@pytest.mark.parametrize("surface, gens, length", [
    ("t + x*y", ["x^2 - y^3", "x*y"], 5),
    ("t", ["x^2", "y^3"], 6),
    ("t", ["x^4 + y^7", "x*y^2"], 15),
    ("t - x^3", ["x", "y"], 1),
    ("t", ["x + 1", "y"], 0),
])
def test_local_length_examples(surface, gens, length):
    assert local_length(P(surface), [P(g) for g in gens]) == length


@settings(max_examples=30)
@given(st.integers(1, 6), st.integers(1, 6))
def test_monomial_ideal_length(a, b):
    # k[[x, y]]/(x^a, y^b) has the monomials x^i y^j with i < a, j < b as a basis
    assert local_length(P("t + x*y^2"), [P(f"x^{a}"), P(f"y^{b}")]) == a * b
