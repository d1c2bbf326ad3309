"""Quadratic twists in every characteristic, twist equivalence, Frobenius base change and the
characteristic-2 construction turning a wild II fiber into a III fiber."""

from __future__ import annotations

from dataclasses import dataclass

from .errors import DomainError, NotApplicableError
from .rational import Place, RationalFunction, valuation
from .tate import _Local, _singular_point, minimal_model_at, tate_local
from .weierstrass import (CoordinateChange, WeierstrassModel, apply_change, frobenius_pullback,
                          short_form)

__all__ = [
    "TwistParameter", "quadratic_twist", "twist_is_trivial", "frobenius_pullback",
    "pullback_place", "frobenius_comparison", "construct_twist_II_to_III", "artin_schreier_reduce",
]


@dataclass(frozen=True)
class TwistParameter:
    d: RationalFunction

    @property
    def mode(self) -> str:
        return "artin-schreier" if self.d.field.p == 2 else "multiplicative"

    def __post_init__(self):
        if self.d.field.p != 2 and self.d.is_zero():
            raise DomainError("twist parameter must be nonzero when p != 2")


def _param(d) -> RationalFunction:
    return d.d if isinstance(d, TwistParameter) else d


def quadratic_twist(model: WeierstrassModel, d) -> WeierstrassModel:
    """p != 2: complete the square, then (a2, a4, a6) -> (d a2, d^2 a4, d^3 a6).
    p = 2: a2 -> a2 + d a1^2 and a6 -> a6 + d a3^2 on the model as given."""
    d = _param(d)
    if d.field != model.field:
        raise DomainError("twist parameter over a different field")
    if model.p == 2:
        a1, a2, a3, a4, a6 = model.coefficients
        return model.with_coefficients([a1, a2 + d * a1 * a1, a3, a4, a6 + d * a3 * a3])
    if d.is_zero():
        raise DomainError("twist parameter must be nonzero when p != 2")
    m, _ = short_form(model)
    _, a2, _, a4, a6 = m.coefficients
    z = RationalFunction.zero(model.field)
    return model.with_coefficients([z, d * a2, z, d * d * a4, d * d * d * a6])


def _odd_places(r: RationalFunction, seed: int = 0):
    """Places where r has odd valuation."""
    out = []
    for poly in (r.num, r.den):
        if poly.degree <= 0:
            continue
        for g, mult in poly.factor(seed):
            if mult % 2:
                out.append(Place.finite(g))
    if (r.den.degree - r.num.degree) % 2:
        out.append(Place.infinity(r.field))
    return out


def artin_schreier_reduce(e: RationalFunction, seed: int = 0) -> RationalFunction:
    """e + c^2 + c for some c, with every remaining pole of odd order (p = 2)."""
    field = e.field
    if field.p != 2:
        raise DomainError("Artin-Schreier reduction needs p = 2")
    while True:
        changed = False
        if e.den.degree > 0:
            for g, mult in e.den.factor(seed):
                place = Place.finite(g)
                order = -valuation(e, place)
                if order > 0 and order % 2 == 0:
                    i = order // 2
                    L = _Local(place)
                    lead = L.red(e * L.pi ** order)
                    c = L.lift(L.sqrt(lead)) / L.pi ** i
                    e = e + c * c + c
                    changed = True
                    break
        if not changed:
            order = e.num.degree - e.den.degree
            if order > 0 and order % 2 == 0:
                lead = field.div(e.num.lc(), e.den.lc())
                c = RationalFunction.constant(field, field.sqrt(lead)) * \
                    RationalFunction.t(field) ** (order // 2)
                e = e + c * c + c
                changed = True
        if not changed:
            return e


def twist_is_trivial(d1, d2, seed: int = 0) -> bool:
    """Whether twisting by d1 and by d2 gives isomorphic surfaces over the algebraic closure.

    Leading constants are ignored: over the algebraic closure every constant is a square
    (p != 2) and of the form l^2 + l (p = 2)."""
    d1, d2 = _param(d1), _param(d2)
    if d1.field != d2.field:
        raise DomainError("twist parameters over different fields")
    if d1.field.p != 2:
        if d1.is_zero() or d2.is_zero():
            raise DomainError("twist parameter must be nonzero when p != 2")
        return not _odd_places(d1 / d2, seed)
    reduced = artin_schreier_reduce(d1 + d2, seed)
    return reduced.is_constant()


def pullback_place(place: Place, iterations: int) -> Place:
    """The place lying under `place` after t -> t^(p^n), as a reduced place."""
    if place.is_infinite or iterations == 0:
        return place
    field = place.field
    coeffs = list(place.poly.coeffs)
    for _ in range(iterations):
        coeffs = [field.pth_root(c) for c in coeffs]
    from .polynomials import Poly
    return Place.finite(Poly(field, coeffs))


def frobenius_comparison(model: WeierstrassModel, iterations: int, seed: int = 0):
    """[(place, before, after)] over the bad places of `model`, matched through the pullback."""
    from .tate import local_data
    pulled = frobenius_pullback(model, iterations)
    rows = []
    for before in local_data(model, seed):
        target = pullback_place(before.place, iterations)
        rows.append((before.place, before, tate_local(pulled, target)))
    return rows


def construct_twist_II_to_III(model: WeierstrassModel, place: Place) -> TwistParameter:
    """d = (c6/c3^2)/pi where c3, c6 are the leading coefficients of a3 and a6 at the place.

    The local parameter in the denominator is what makes pi^2 divide a6 + d a3^2."""
    if model.p != 2:
        raise NotApplicableError("the construction is specific to p = 2")
    data = tate_local(model, place)
    if data.type.kind != "II" or data.swan != 2:
        raise NotApplicableError(f"needs a type II fiber with swan 2, found {data.type} "
                                 f"with swan {data.swan}")
    m, _ = minimal_model_at(model, place)
    L = _Local(place)
    x0, y0 = _singular_point(m, L)
    if not (L.k.is_zero(x0) and L.k.is_zero(y0)):
        m = apply_change(m, CoordinateChange.of(m.field, r=L.lift(x0), w=L.lift(y0)))
    for name, a in (("a3", m.a3), ("a6", m.a6)):
        if L.v(a) != 1:
            raise NotApplicableError(f"v({name}) = {L.v(a)} at {place.label()}, expected 1")
    k = L.k
    c3 = L.red_div(m.a3, 1)
    c6 = L.red_div(m.a6, 1)
    d = L.lift(k.div(c6, k.mul(c3, c3))) / L.pi
    return TwistParameter(d)

