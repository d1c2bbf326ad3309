from fractions import Fraction

import pytest

from oracles import eichler_deuring_count, primes_up_to

from kodaira.errors import DomainError, NotApplicableError
from kodaira.igusa import (h_p, igusa_datum, igusa_genus, max_admissible_n, supersingular_count,
                           theorem_c_bound)


def test_small_characteristics():
    assert supersingular_count(2) == supersingular_count(3) == 1
    assert h_p(2) == Fraction(11, 8) and h_p(3) == Fraction(4, 3)


@pytest.mark.parametrize("p", [q for q in primes_up_to(60) if q >= 5])
def test_supersingular_count_closed_form(p):
    assert supersingular_count(p) == eichler_deuring_count(p)


def test_genus_values():
    assert igusa_genus(13, 1) == 1
    assert igusa_genus(3, 1) == 0 and igusa_genus(5, 1) == 0
    assert theorem_c_bound(13, 1) == 1
    assert theorem_c_bound(2, 1) == Fraction(1, 8)


def test_genus_needs_a_representable_level():
    with pytest.raises(NotApplicableError):
        igusa_genus(2, 1)
    assert igusa_datum(2, 1).genus is None
    with pytest.raises(DomainError):
        igusa_genus(4, 1)
    with pytest.raises(DomainError):
        igusa_genus(5, 0)


@pytest.mark.parametrize("p", [2, 3, 5, 7, 13])
@pytest.mark.parametrize("g", [0, 1, 5, 40])
def test_max_admissible_n_is_the_last_level_within_g(p, g):
    n = max_admissible_n(p, g)
    assert theorem_c_bound(p, n + 1) > g
    if n:
        assert theorem_c_bound(p, n) <= g


@pytest.mark.parametrize("p", [3, 5, 7, 11])
def test_bound_never_decreases_with_the_level(p):
    values = [theorem_c_bound(p, n) for n in range(1, 6)]
    assert values == sorted(values) and values[-1] > values[0]
