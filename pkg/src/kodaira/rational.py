"""Rational functions in one variable, places of the projective line, valuations
and Laurent expansions."""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

from .errors import DomainError, DomainMismatchError, FieldDivisionError
from .fields import ExtensionField, FiniteField
from .polynomials import Poly

INFINITE_VALUATION = math.inf


class RationalFunction:
    """num/den with den monic and gcd(num, den) = 1."""

    __slots__ = ("num", "den")

    def __init__(self, num: Poly, den: Poly | None = None, _canonical: bool = False):
        field = num.field
        if den is None:
            den = Poly(field, [field.one])
        elif den.field != field:
            raise DomainMismatchError("numerator and denominator over different fields")
        if den.is_zero():
            raise FieldDivisionError("rational function with zero denominator")
        if not _canonical:
            if num.is_zero():
                den = Poly(field, [field.one])
            else:
                g = num.gcd(den)
                if g.degree > 0:
                    num = num.exact_div(g)
                    den = den.exact_div(g)
                lead = den.lc()
                if lead != field.one:
                    inv = field.inv(lead)
                    num = num.scale(inv)
                    den = den.scale(inv)
        self.num = num
        self.den = den

    @property
    def field(self) -> FiniteField:
        return self.num.field

    @classmethod
    def from_poly(cls, p: Poly) -> "RationalFunction":
        return cls(p, Poly(p.field, [p.field.one]), _canonical=True)

    @classmethod
    def constant(cls, field, c) -> "RationalFunction":
        return cls.from_poly(Poly(field, [c]))

    @classmethod
    def from_int(cls, field, n: int) -> "RationalFunction":
        return cls.constant(field, field.from_int(n))

    @classmethod
    def t(cls, field) -> "RationalFunction":
        return cls.from_poly(Poly.x(field))

    @classmethod
    def zero(cls, field) -> "RationalFunction":
        return cls.from_poly(Poly(field))

    @classmethod
    def one(cls, field) -> "RationalFunction":
        return cls.from_poly(Poly(field, [field.one]))

    def _lift(self, other):
        if isinstance(other, RationalFunction):
            if other.field != self.field:
                raise DomainMismatchError(f"rational functions over {self.field} and {other.field}")
            return other
        if isinstance(other, Poly):
            return RationalFunction.from_poly(other)
        if isinstance(other, int):
            return RationalFunction.from_int(self.field, other)
        return NotImplemented

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_polynomial(self) -> bool:
        return self.den.degree == 0

    def is_constant(self) -> bool:
        return self.num.degree <= 0 and self.den.degree == 0

    def constant_value(self):
        if not self.is_constant():
            raise DomainError("rational function is not constant")
        return self.num.constant_term()

    def __eq__(self, other):
        other = self._lift(other) if not isinstance(other, RationalFunction) else other
        if other is NotImplemented:
            return NotImplemented
        return self.field == other.field and self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.num, self.den))

    def __add__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        if self.den == other.den:
            return RationalFunction(self.num + other.num, self.den)
        return RationalFunction(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction(-self.num, self.den, _canonical=True)

    def __sub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        if self.is_zero() or other.is_zero():
            return RationalFunction.zero(self.field)
        if self.den.is_one() and other.den.is_one():
            return RationalFunction(self.num * other.num, self.den, _canonical=True)
        return RationalFunction(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def inverse(self) -> "RationalFunction":
        if self.is_zero():
            raise FieldDivisionError("inverse of the zero rational function")
        return RationalFunction(self.den, self.num)

    def __truediv__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return other * self.inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        return RationalFunction(self.num ** k, self.den ** k, _canonical=True)

    def scale(self, c) -> "RationalFunction":
        return RationalFunction(self.num.scale(c), self.den, _canonical=not self.field.is_zero(c)) \
            if not self.field.is_zero(c) else RationalFunction.zero(self.field)

    def substitute_power(self, k: int) -> "RationalFunction":
        """r(t) -> r(t^k)."""
        return RationalFunction(self.num.inflate(k), self.den.inflate(k), _canonical=True)

    def substitute_inverse(self) -> "RationalFunction":
        """r(t) -> r(1/t)."""
        n, d = self.num, self.den
        if n.is_zero():
            return self
        shift = n.degree - d.degree
        rn, rd = n.reverse(), d.reverse()
        if shift > 0:
            rd = rd.shift(shift)
        elif shift < 0:
            rn = rn.shift(-shift)
        return RationalFunction(rn, rd)

    def substitute(self, other: "RationalFunction") -> "RationalFunction":
        """r(t) -> r(other)."""
        def ev(p: Poly):
            acc = RationalFunction.zero(self.field)
            for c in reversed(p.coeffs):
                acc = acc * other + RationalFunction.constant(self.field, c)
            return acc
        return ev(self.num) / ev(self.den)

    def derivative(self) -> "RationalFunction":
        n, d = self.num, self.den
        return RationalFunction(n.derivative() * d - n * d.derivative(), d * d)

    def change_field(self, target) -> "RationalFunction":
        return RationalFunction(self.num.change_field(target), self.den.change_field(target))

    def evaluate(self, value):
        d = self.den(value)
        if self.field.is_zero(d):
            raise FieldDivisionError("evaluation at a pole")
        return self.field.div(self.num(value), d)

    def format(self, var: str = "t") -> str:
        ns = self.num.format(var)
        if self.den.is_one():
            return ns
        ds = self.den.format(var)
        if len(self.num.coeffs) > 1 and "+" in ns:
            ns = f"({ns})"
        return f"{ns}/({ds})"

    def __repr__(self):
        return self.format()


class Place:
    """A closed point of P^1: a monic irreducible polynomial, or infinity."""

    __slots__ = ("field", "poly", "__dict__")

    def __init__(self, field: FiniteField, poly: Poly | None):
        self.field = field
        if poly is not None:
            if poly.field != field:
                raise DomainMismatchError("place polynomial over the wrong field")
            poly = poly.monic()
            if not poly.is_irreducible():
                raise DomainError(f"{poly} is not irreducible")
        self.poly = poly

    @classmethod
    def finite(cls, poly: Poly) -> "Place":
        return cls(poly.field, poly)

    @classmethod
    def infinity(cls, field: FiniteField) -> "Place":
        return cls(field, None)

    @classmethod
    def at(cls, field: FiniteField, value) -> "Place":
        """The degree-one place t = value."""
        return cls(field, Poly(field, [field.neg(value), field.one]))

    @property
    def is_infinite(self) -> bool:
        return self.poly is None

    @property
    def degree(self) -> int:
        return 1 if self.poly is None else self.poly.degree

    def __eq__(self, other):
        return isinstance(other, Place) and self.field == other.field and self.poly == other.poly

    def __hash__(self):
        return hash((self.field, self.poly))

    def sort_key(self):
        if self.poly is None:
            return (1, ())
        return (0, self.poly.sort_key())

    def label(self, var: str = "t") -> str:
        return "inf" if self.poly is None else self.poly.format(var)

    def __repr__(self):
        return f"Place({self.label()})"

    @cached_property
    def residue_field(self) -> FiniteField:
        if self.poly is None or self.poly.degree == 1:
            return self.field
        return ExtensionField(self.field, self.poly.coeffs, name="r", check=False)

    @cached_property
    def root(self):
        """The class of t in the residue field (raw value)."""
        if self.poly is None:
            raise DomainError("infinity has no finite root")
        if self.poly.degree == 1:
            return self.field.neg(self.poly.coeffs[0])
        return self.residue_field.gen

    def residue_poly(self, p: Poly):
        if self.poly is None:
            raise DomainError("use the chart at infinity for residues at infinity")
        if self.poly.degree == 1:
            return p(self.root)
        rf = self.residue_field
        return rf.coerce(list((p % self.poly).coeffs))

    def residue(self, r: RationalFunction):
        """Reduction of r (which must have non-negative valuation) in the residue field."""
        rf = self.residue_field
        n = self.residue_poly(r.num)
        d = self.residue_poly(r.den)
        if rf.is_zero(d):
            if valuation(r, self) < 0:
                raise DomainError("residue of a function with a pole")
            # cancel common powers of the uniformizer
            v = valuation_poly(r.den, self)
            pi_v = self.poly ** v
            n = self.residue_poly(r.num.exact_div(pi_v))
            d = self.residue_poly(r.den.exact_div(pi_v))
        return rf.div(n, d)

    def lift(self, value) -> Poly:
        """A polynomial of degree < deg(place) reducing to `value`."""
        if self.poly is None:
            raise DomainError("infinity has no polynomial lift")
        if self.poly.degree == 1:
            return Poly(self.field, [value])
        return Poly(self.field, list(value))

    def uniformizer(self) -> RationalFunction:
        if self.poly is None:
            return RationalFunction.t(self.field).inverse()
        return RationalFunction.from_poly(self.poly)


def valuation_poly(p: Poly, place: Place):
    if p.is_zero():
        return INFINITE_VALUATION
    if place.poly is None:
        return -p.degree
    pi = place.poly
    if pi.degree == 1 and pi.coeffs[0] == p.field.zero:
        return p.valuation_at_zero()
    v = 0
    while True:
        q, r = divmod(p, pi)
        if not r.is_zero():
            return v
        p = q
        v += 1


def valuation(r, place: Place):
    """v_P(r); +inf for r = 0; v(pi) = 1 and v_inf(t) = -1."""
    if isinstance(r, Poly):
        r = RationalFunction.from_poly(r)
    if r.is_zero():
        return INFINITE_VALUATION
    if place.poly is None:
        return r.den.degree - r.num.degree
    return valuation_poly(r.num, place) - valuation_poly(r.den, place)


@dataclass(frozen=True)
class LaurentSeries:
    """sum_{i} coeffs[i] * s^(valuation + i), known modulo s^(valuation + len(coeffs))."""

    field: FiniteField
    valuation: float
    coeffs: tuple

    @property
    def is_zero(self) -> bool:
        return self.valuation == INFINITE_VALUATION

    @property
    def precision(self) -> int:
        return len(self.coeffs)

    def leading_coefficient(self):
        if self.is_zero:
            return self.field.zero
        return self.coeffs[0]

    def truncate(self, precision: int) -> "LaurentSeries":
        return LaurentSeries(self.field, self.valuation, self.coeffs[:precision])

    def format(self, var: str = "s") -> str:
        if self.is_zero:
            return "0"
        f = self.field
        terms = []
        for i, c in enumerate(self.coeffs):
            if f.is_zero(c):
                continue
            e = self.valuation + i
            cs = f.format(c)
            if "+" in cs:
                cs = f"({cs})"
            mon = "" if e == 0 else (var if e == 1 else f"{var}^{e}")
            if not mon:
                terms.append(cs)
            elif c == f.one:
                terms.append(mon)
            else:
                terms.append(f"{cs}*{mon}")
        return " + ".join(terms) + f" + O({var}^{self.valuation + len(self.coeffs)})"


def _power_series(p: Poly, target, shift_value, n: int):
    """Coefficients of p(shift + s) in s up to s^(n-1), computed over `target`."""
    coeffs = [target.embed(c, p.field) for c in p.coeffs]
    # Taylor shift by repeated synthetic division
    out = []
    work = coeffs
    for _ in range(n):
        if not work:
            out.append(target.zero)
            continue
        acc = target.zero
        quot = []
        for c in reversed(work):
            acc = target.add(target.mul(acc, shift_value), c)
            quot.append(acc)
        out.append(quot[-1])
        work = list(reversed(quot[:-1]))
    return out


def _series_divide(num, den, n, field):
    """Power series num/den to n terms; den[0] must be nonzero."""
    inv0 = field.inv(den[0])
    out = []
    for i in range(n):
        acc = num[i] if i < len(num) else field.zero
        for j in range(1, min(i, len(den) - 1) + 1):
            acc = field.sub(acc, field.mul(den[j], out[i - j]))
        out.append(field.mul(acc, inv0))
    return out


def local_expand(r: RationalFunction, place: Place, precision: int) -> LaurentSeries:
    """Laurent expansion of r in a local parameter at `place`.

    At a finite place of degree one at t = a the parameter is t - a; at a place
    of higher degree it is t - theta over the residue field, where theta is the
    class of t; at infinity it is s = 1/t.
    """
    if precision < 1:
        raise DomainError("precision must be at least 1")
    if isinstance(r, Poly):
        r = RationalFunction.from_poly(r)
    if r.is_zero():
        return LaurentSeries(r.field, INFINITE_VALUATION, ())
    if place.poly is None:
        rs = r.substitute_inverse()
        target = r.field
        center = target.zero
        num, den = rs.num, rs.den
    else:
        target = place.residue_field
        center = place.root
        num, den = r.num, r.den
    vn = _order_at(num, target, center)
    vd = _order_at(den, target, center)
    n = precision
    ns = _power_series(num, target, center, vn + n)[vn:]
    ds = _power_series(den, target, center, vd + n)[vd:]
    coeffs = _series_divide(ns, ds, n, target)
    return LaurentSeries(target, vn - vd, tuple(coeffs))


def _order_at(p: Poly, target, center) -> int:
    v = 0
    coeffs = [target.embed(c, p.field) for c in p.coeffs]
    while True:
        # synthetic division by (s - center)
        acc = target.zero
        quot = []
        for c in reversed(coeffs):
            acc = target.add(target.mul(acc, center), c)
            quot.append(acc)
        if not target.is_zero(quot[-1]):
            return v
        coeffs = list(reversed(quot[:-1]))
        v += 1


def places_of(r: RationalFunction, seed: int = 0, include_infinity: bool = True):
    """All places where r has a zero or a pole."""
    out = []
    for p in (r.num, r.den):
        if p.degree > 0:
            for g, _ in p.factor(seed):
                out.append(Place.finite(g))
    if include_infinity and r.num.degree != r.den.degree:
        out.append(Place.infinity(r.field))
    return sorted(set(out), key=lambda pl: pl.sort_key())


def divisor(r: RationalFunction, seed: int = 0):
    """[(place, valuation)] over all zeros and poles, including infinity."""
    return [(pl, valuation(r, pl)) for pl in places_of(r, seed)]
