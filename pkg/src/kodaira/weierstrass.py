"""Weierstrass models over F_q(t): standard quantities, coordinate changes and
the chart at infinity."""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

from .errors import DomainError, DomainMismatchError, InternalConsistencyError, SingularModelError
from .rational import Place, RationalFunction, valuation

WEIGHTS = {"a1": 1, "a2": 2, "a3": 3, "a4": 4, "a6": 6}
KEYS = ("a1", "a2", "a3", "a4", "a6")


@dataclass(frozen=True)
class StandardQuantities:
    b2: RationalFunction
    b4: RationalFunction
    b6: RationalFunction
    b8: RationalFunction
    c4: RationalFunction
    c6: RationalFunction
    delta: RationalFunction
    j: RationalFunction


class WeierstrassModel:
    """y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6 with a_i in F_q(t).

    `var` only affects printing (charts at infinity print in s).
    """

    def __init__(self, field, a1=None, a2=None, a3=None, a4=None, a6=None, var: str = "t",
                 fieldmod: str | None = None):
        self.field = field
        coeffs = []
        for a in (a1, a2, a3, a4, a6):
            if a is None:
                a = RationalFunction.zero(field)
            elif isinstance(a, int):
                a = RationalFunction.from_int(field, a)
            elif not isinstance(a, RationalFunction):
                a = RationalFunction.from_poly(a)
            if a.field != field:
                raise DomainMismatchError("coefficient over a different field")
            coeffs.append(a)
        self.a1, self.a2, self.a3, self.a4, self.a6 = coeffs
        self.var = var
        self.fieldmod = fieldmod
        if self.quantities.delta.is_zero():
            raise SingularModelError("discriminant vanishes identically")

    @classmethod
    def _unchecked(cls, field, coeffs, var="t", fieldmod=None):
        m = cls.__new__(cls)
        m.field = field
        m.a1, m.a2, m.a3, m.a4, m.a6 = coeffs
        m.var = var
        m.fieldmod = fieldmod
        return m

    @property
    def p(self) -> int:
        return self.field.p

    @property
    def q(self) -> int:
        return self.field.q

    @property
    def coefficients(self):
        return (self.a1, self.a2, self.a3, self.a4, self.a6)

    def coefficient_map(self):
        return dict(zip(KEYS, self.coefficients))

    def with_coefficients(self, coeffs, var=None) -> "WeierstrassModel":
        return WeierstrassModel(self.field, *coeffs, var=self.var if var is None else var,
                                fieldmod=self.fieldmod)

    def __eq__(self, other):
        return (isinstance(other, WeierstrassModel) and self.field == other.field
                and self.coefficients == other.coefficients)

    def __hash__(self):
        return hash(self.coefficients)

    @cached_property
    def quantities(self) -> StandardQuantities:
        return standard_quantities_of(self.field, self.coefficients)

    @property
    def delta(self) -> RationalFunction:
        return self.quantities.delta

    @property
    def j(self) -> RationalFunction:
        return self.quantities.j

    def is_short(self) -> bool:
        return self.a1.is_zero() and self.a3.is_zero()

    def equation(self) -> str:
        v = self.var
        lhs = "y^2"
        rhs = "x^3"

        def term(c, mon):
            if c.is_zero():
                return ""
            s = c.format(v)
            if c == RationalFunction.one(self.field):
                return f" + {mon}"
            if "+" in s or "/" in s:
                s = f"({s})"
            return f" + {s}*{mon}"

        lhs += term(self.a1, "xy") + term(self.a3, "y")
        rhs += term(self.a2, "x^2") + term(self.a4, "x")
        if not self.a6.is_zero():
            s = self.a6.format(v)
            rhs += f" + {s}" if "/" not in s else f" + ({s})"
        return f"{lhs} = {rhs}"

    def __repr__(self):
        return f"WeierstrassModel({self.equation()} over {self.field})"


def standard_quantities_of(field, coeffs) -> StandardQuantities:
    a1, a2, a3, a4, a6 = coeffs

    def k(n):
        return RationalFunction.from_int(field, n)

    b2 = a1 * a1 + k(4) * a2
    b4 = k(2) * a4 + a1 * a3
    b6 = a3 * a3 + k(4) * a6
    b8 = a1 * a1 * a6 + k(4) * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4
    c4 = b2 * b2 - k(24) * b4
    c6 = -b2 * b2 * b2 + k(36) * b2 * b4 - k(216) * b6
    delta = -b2 * b2 * b8 - k(8) * b4 * b4 * b4 - k(27) * b6 * b6 + k(9) * b2 * b4 * b6
    if k(4) * b8 != b2 * b6 - b4 * b4:
        raise InternalConsistencyError("4 b8 = b2 b6 - b4^2 failed")
    if k(1728) * delta != c4 * c4 * c4 - c6 * c6:
        raise InternalConsistencyError("1728 delta = c4^3 - c6^2 failed")
    j = c4 * c4 * c4 / delta if not delta.is_zero() else RationalFunction.zero(field)
    return StandardQuantities(b2, b4, b6, b8, c4, c6, delta, j)


def standard_quantities(model: WeierstrassModel) -> StandardQuantities:
    return model.quantities


@dataclass(frozen=True)
class CoordinateChange:
    """x = u^2 x' + r, y = u^3 y' + u^2 s x' + w."""

    u: RationalFunction
    r: RationalFunction
    s: RationalFunction
    w: RationalFunction

    @classmethod
    def identity(cls, field) -> "CoordinateChange":
        z = RationalFunction.zero(field)
        return cls(RationalFunction.one(field), z, z, z)

    @classmethod
    def of(cls, field, u=None, r=None, s=None, w=None) -> "CoordinateChange":
        def conv(v, default):
            if v is None:
                return default
            if isinstance(v, int):
                return RationalFunction.from_int(field, v)
            if not isinstance(v, RationalFunction):
                return RationalFunction.from_poly(v)
            return v
        z = RationalFunction.zero(field)
        return cls(conv(u, RationalFunction.one(field)), conv(r, z), conv(s, z), conv(w, z))

    def is_identity(self) -> bool:
        f = self.u.field
        return (self.u == RationalFunction.one(f) and self.r.is_zero() and self.s.is_zero()
                and self.w.is_zero())

    def then(self, other: "CoordinateChange") -> "CoordinateChange":
        """The change equal to applying self first and then other."""
        u1, r1, s1, t1 = self.u, self.r, self.s, self.w
        u2, r2, s2, t2 = other.u, other.r, other.s, other.w
        return CoordinateChange(
            u1 * u2,
            r1 + u1 * u1 * r2,
            s1 + u1 * s2,
            t1 + u1 * u1 * s1 * r2 + u1 * u1 * u1 * t2,
        )

    def inverse(self) -> "CoordinateChange":
        u, r, s, t = self.u, self.r, self.s, self.w
        ui = u.inverse()
        return CoordinateChange(ui, -r * ui * ui, -s * ui, (r * s - t) * ui * ui * ui)


def apply_change(model: WeierstrassModel, change: CoordinateChange) -> WeierstrassModel:
    """The model in the new coordinates; the discriminant scales by u^-12."""
    u, r, s, t = change.u, change.r, change.s, change.w
    if u.is_zero():
        raise DomainError("coordinate change with u = 0")
    field = model.field

    def k(n):
        return RationalFunction.from_int(field, n)

    a1, a2, a3, a4, a6 = model.coefficients
    ui = u.inverse()
    ui2 = ui * ui
    ui3 = ui2 * ui
    ui4 = ui2 * ui2
    ui6 = ui3 * ui3
    b1 = (a1 + k(2) * s) * ui
    b2 = (a2 - s * a1 + k(3) * r - s * s) * ui2
    b3 = (a3 + r * a1 + k(2) * t) * ui3
    b4 = (a4 - s * a3 + k(2) * r * a2 - (t + r * s) * a1 + k(3) * r * r - k(2) * s * t) * ui4
    b6 = (a6 + r * a4 + r * r * a2 + r * r * r - t * a3 - t * t - r * t * a1) * ui6
    return WeierstrassModel(field, b1, b2, b3, b4, b6, var=model.var, fieldmod=model.fieldmod)


def short_form(model: WeierstrassModel) -> tuple[WeierstrassModel, CoordinateChange]:
    """Complete the square (p != 2): y^2 = x^3 + a2 x^2 + a4 x + a6."""
    if model.p == 2:
        raise DomainError("completing the square needs p != 2")
    if model.is_short():
        return model, CoordinateChange.identity(model.field)
    field = model.field
    half = RationalFunction.constant(field, field.inv(field.from_int(2)))
    change = CoordinateChange.of(field, s=-model.a1 * half, w=-model.a3 * half)
    return apply_change(model, change), change


def chart_weight(model: WeierstrassModel) -> int:
    """Least w with every a_i(1/s) * s^(w i) integral at s = 0."""
    w = None
    inf = Place.infinity(model.field)
    for key, a in zip(KEYS, model.coefficients):
        if a.is_zero():
            continue
        need = math.ceil(-valuation(a, inf) / WEIGHTS[key])
        w = need if w is None else max(w, need)
    return 0 if w is None else w


def chart_at_infinity(model: WeierstrassModel) -> WeierstrassModel:
    """The model in s = 1/t, rescaled so that every coefficient is integral at s = 0."""
    field = model.field
    w = chart_weight(model)
    s = RationalFunction.t(field)
    coeffs = []
    for key, a in zip(KEYS, model.coefficients):
        coeffs.append(a.substitute_inverse() * s ** (w * WEIGHTS[key]))
    new_var = "s" if model.var == "t" else "t"
    return WeierstrassModel(field, *coeffs, var=new_var, fieldmod=model.fieldmod)


def integral_minimal_at(model: WeierstrassModel, place: Place):
    """(minimal model at `place`, change used); the change is the identity when
    the input is already integral and minimal there."""
    from .tate import minimal_model_at
    return minimal_model_at(model, place)


def frobenius_pullback(model: WeierstrassModel, iterations: int) -> WeierstrassModel:
    """Every a_i(t) becomes a_i(t^(p^n))."""
    if iterations < 0:
        raise DomainError("iterations must be non-negative")
    if iterations == 0:
        return model
    k = model.p ** iterations
    return model.with_coefficients([a.substitute_power(k) for a in model.coefficients])
