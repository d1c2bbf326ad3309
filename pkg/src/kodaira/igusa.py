"""Supersingular j-invariants, the genus of the Igusa curve Ig(p^n), and the base-genus bound
for surfaces carrying a vertical mu_{p^n}-action."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb

from .errors import DomainError, InternalConsistencyError, NotApplicableError
from .fields import PrimeField, extension_of_degree, is_prime
from .polynomials import Poly

__all__ = ["IgusaDatum", "supersingular_count", "supersingular_j_invariants", "h_p",
           "theorem_c_bound", "igusa_genus", "igusa_datum", "max_admissible_n"]

MAX_SCAN = 64


def _check_prime(p: int):
    if not isinstance(p, int) or not is_prime(p):
        raise DomainError(f"p = {p} is not prime")


def hasse_polynomial(p: int) -> Poly:
    """sum_i binom(m, i)^2 lambda^i with m = (p - 1)/2 (Legendre-form Hasse invariant)."""
    F = PrimeField(p)
    m = (p - 1) // 2
    return Poly(F, [F.from_int(comb(m, i) ** 2) for i in range(m + 1)])


@lru_cache(maxsize=None)
def supersingular_j_invariants(p: int) -> tuple:
    """Raw values in F_{p^2} (as built by extension_of_degree) of the supersingular j."""
    _check_prime(p)
    if p in (2, 3):
        return (0,)
    F = PrimeField(p)
    K = extension_of_degree(F, 2)
    H = hasse_polynomial(p).change_field(K)
    found = set()
    c256 = K.from_int(256)
    for lam, _ in H.roots():
        num = K.sub(K.add(K.mul(lam, lam), K.one), lam)
        num = K.mul(c256, K.mul(num, K.mul(num, num)))
        lm1 = K.sub(lam, K.one)
        den = K.mul(K.mul(lam, lam), K.mul(lm1, lm1))
        found.add(K.div(num, den))
    return tuple(sorted(found, key=K.index))


def supersingular_count(p: int) -> int:
    return len(supersingular_j_invariants(p))


def h_p(p: int) -> Fraction:
    """Supersingular count plus the automorphism correction at p = 2 and 3."""
    extra = {2: Fraction(3, 8), 3: Fraction(1, 3)}.get(p, Fraction(0))
    return supersingular_count(p) + extra


def theorem_c_bound(p: int, n: int) -> Fraction:
    """(1/48)(p-1)(p^(2n-1) - 12 p^(n-1) + 1) + 1 - h_p/2, defined for every n >= 1."""
    _check_prime(p)
    if n < 1:
        raise DomainError("n must be at least 1")
    main = Fraction((p - 1) * (p ** (2 * n - 1) - 12 * p ** (n - 1) + 1), 48)
    return main + 1 - h_p(p) / 2


def igusa_genus(p: int, n: int) -> int:
    """Genus of Ig(p^n); the curve is only representable for p^n >= 3."""
    _check_prime(p)
    if n < 1:
        raise DomainError("n must be at least 1")
    if p ** n < 3:
        raise NotApplicableError(f"p^n = {p ** n} < 3: the Igusa curve is not representable")
    value = theorem_c_bound(p, n)
    if value.denominator != 1 or value < 0:
        raise InternalConsistencyError(f"genus formula gives {value} at (p, n) = ({p}, {n})")
    return int(value)


def max_admissible_n(p: int, g: int) -> int:
    """Largest n with bound(p, n) <= g (0 when even n = 1 exceeds g)."""
    best = 0
    for n in range(1, MAX_SCAN + 1):
        if theorem_c_bound(p, n) > g:
            return best
        best = n
    raise InternalConsistencyError("bound did not exceed g within the scan limit")


@dataclass(frozen=True)
class IgusaDatum:
    p: int
    n: int
    ss_count: int
    h_p: Fraction
    genus: int | None
    bound: Fraction

    def to_dict(self) -> dict:
        def frac(x: Fraction):
            return int(x) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
        return {"p": self.p, "n": self.n, "ssCount": self.ss_count, "h_p": frac(self.h_p),
                "genus": self.genus, "bound": frac(self.bound)}


def igusa_datum(p: int, n: int) -> IgusaDatum:
    bound = theorem_c_bound(p, n)
    genus = igusa_genus(p, n) if p ** n >= 3 else None
    return IgusaDatum(p, n, supersingular_count(p), h_p(p), genus, bound)
