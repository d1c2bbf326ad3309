"""Local fiber classification by Tate's algorithm, valid in every characteristic.

Only valuations and residues are used; no step divides by 2 or 3 in a
characteristic where that is not invertible.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import DomainError, InternalConsistencyError
from .polynomials import Poly
from .rational import INFINITE_VALUATION, Place, RationalFunction, valuation
from .weierstrass import CoordinateChange, WeierstrassModel, apply_change

# kind -> (json spelling, euler offset, component offset); n-dependent kinds add n
_KINDS = {
    "I0": ("I0", 0, 1),
    "In": ("In", 0, 0),
    "II": ("II", 2, 1),
    "III": ("III", 3, 2),
    "IV": ("IV", 4, 3),
    "I0*": ("I0star", 6, 5),
    "In*": ("Instar", 6, 5),
    "IV*": ("IVstar", 8, 7),
    "III*": ("IIIstar", 9, 8),
    "II*": ("IIstar", 10, 9),
}
_BY_JSON = {v[0]: k for k, v in _KINDS.items()}


@dataclass(frozen=True, order=True)
class KodairaType:
    """A Kodaira symbol; `n` is only meaningful for In and In*."""

    kind: str
    n: int = 0

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise DomainError(f"unknown Kodaira kind {self.kind!r}")
        if self.kind in ("In", "In*"):
            if self.n < 1:
                raise DomainError(f"{self.kind} needs n >= 1")
        elif self.n != 0:
            raise DomainError(f"{self.kind} takes no index")

    @classmethod
    def parse(cls, text: str) -> "KodairaType":
        """Accepts I0, I9, I3*, I3star, II*, IIstar, In (with --n) style spellings."""
        s = text.strip().replace("star", "*").replace("_", "")
        if s in ("I0", "II", "III", "IV", "I0*", "IV*", "III*", "II*"):
            return cls(s)
        if s.startswith("I"):
            star = s.endswith("*")
            body = s[1:-1] if star else s[1:]
            if body.isdigit() and int(body) >= 1:
                return cls("In*" if star else "In", int(body))
        raise DomainError(f"cannot parse Kodaira type {text!r}")

    @classmethod
    def from_json(cls, name: str, n: int = 0) -> "KodairaType":
        if name not in _BY_JSON:
            raise DomainError(f"unknown type spelling {name!r}")
        return cls(_BY_JSON[name], n)

    @property
    def json_name(self) -> str:
        return _KINDS[self.kind][0]

    @property
    def euler(self) -> int:
        return _KINDS[self.kind][1] + (self.n if self.kind in ("In", "In*") else 0)

    @property
    def components(self) -> int:
        if self.kind == "In":
            return self.n
        return _KINDS[self.kind][2] + (self.n if self.kind == "In*" else 0)

    @property
    def is_smooth(self) -> bool:
        return self.kind == "I0"

    @property
    def is_multiplicative(self) -> bool:
        return self.kind == "In"

    @property
    def is_additive(self) -> bool:
        return not (self.is_smooth or self.is_multiplicative)

    def __str__(self):
        if self.kind == "In":
            return f"I{self.n}"
        if self.kind == "In*":
            return f"I{self.n}*"
        return self.kind


def swan_lower_bound(kind: KodairaType, p: int) -> int:
    """Least swan conductor the local constraint table allows."""
    if p not in (2, 3) or not kind.is_additive:
        return 0
    if p == 3 and kind.kind in ("III", "III*", "I0*", "In*"):
        return 0
    if p == 2 and kind.kind in ("IV", "IV*"):
        return 0
    if p == 2 and (kind.kind in ("II", "I0*") or (kind.kind == "In*" and kind.n != 1)):
        return 2
    return 1


def swan_must_vanish(kind: KodairaType, p: int) -> bool:
    """True when the table forces swan = 0 (tame cases); I0* counts as In* with n = 0."""
    if p not in (2, 3) or not kind.is_additive:
        return True
    if p == 3:
        return kind.kind in ("III", "III*", "I0*", "In*")
    return kind.kind in ("IV", "IV*")


def swan_allowed(kind: KodairaType, p: int, swan: int) -> bool:
    if swan_must_vanish(kind, p):
        return swan == 0
    return swan >= swan_lower_bound(kind, p)


@dataclass(frozen=True)
class LocalFiberData:
    place: Place
    type: KodairaType
    vDelta: int
    eulerNumber: int
    swan: int
    components: int

    def to_dict(self, var: str = "t") -> dict:
        return {
            "place": self.place.label(var),
            "placeDegree": self.place.degree,
            "type": self.type.json_name,
            "vDelta": self.vDelta,
            "euler": self.eulerNumber,
            "swan": self.swan,
            "components": self.components,
        }


class _Local:
    """Valuation, residue and lifting at one place, including infinity."""

    def __init__(self, place: Place):
        self.place = place
        self.base = place.field
        self.k = self.base if place.is_infinite else place.residue_field
        self.p = self.base.p
        self.pi = place.uniformizer()

    def v(self, r: RationalFunction):
        return valuation(r, self.place)

    def red(self, r: RationalFunction):
        if r.is_zero():
            return self.k.zero
        if self.place.is_infinite:
            d = r.den.degree - r.num.degree
            if d < 0:
                raise DomainError("residue of a function with a pole")
            if d > 0:
                return self.k.zero
            return self.k.div(r.num.lc(), r.den.lc())
        return self.place.residue(r)

    def lift(self, c) -> RationalFunction:
        if self.place.is_infinite:
            return RationalFunction.constant(self.base, c)
        return RationalFunction.from_poly(self.place.lift(c))

    def red_div(self, r: RationalFunction, k: int):
        """Residue of r / pi^k (r must be divisible by pi^k)."""
        return self.red(r / self.pi ** k)

    def poly(self, coeffs) -> Poly:
        return Poly(self.k, list(coeffs))

    def two(self):
        return self.k.from_int(2)

    def half(self, c):
        return self.k.div(c, self.two())

    def sqrt(self, c):
        return self.k.sqrt(c)


def _change(field, u=None, r=None, s=None, w=None) -> CoordinateChange:
    return CoordinateChange.of(field, u=u, r=r, s=s, w=w)


def _integralize(model: WeierstrassModel, L: _Local):
    """Scale by u = pi^-k with k least such that all a_i become integral."""
    k = 0
    for a, wt in zip(model.coefficients, (1, 2, 3, 4, 6)):
        va = L.v(a)
        if va != INFINITE_VALUATION and va < 0:
            k = max(k, -((va) // wt))
    if k == 0:
        return model, CoordinateChange.identity(model.field)
    change = _change(model.field, u=L.pi ** (-k))
    return apply_change(model, change), change


def _multiple_root(P: Poly, L: _Local):
    """(root, multiplicity) of the unique repeated root of P, or None if P is squarefree."""
    best = None
    for g, m in P.squarefree_decomposition():
        if m >= 2:
            if g.degree != 1:
                raise InternalConsistencyError("repeated factor of degree > 1")
            best = (L.k.neg(g.coeffs[0]), m)
    return best


def _quadratic_distinct(a, b, c, L: _Local) -> bool:
    """a X^2 + b X + c (a != 0) has distinct roots over the algebraic closure."""
    k = L.k
    if L.p == 2:
        return not k.is_zero(b)
    disc = k.sub(k.mul(b, b), k.mul(k.from_int(4), k.mul(a, c)))
    return not k.is_zero(disc)


def _quadratic_double_root(a, b, c, L: _Local):
    k = L.k
    if L.p == 2:
        return L.sqrt(k.div(c, a))
    return k.neg(k.div(b, k.mul(L.two(), a)))


def _singular_point(model: WeierstrassModel, L: _Local):
    """Residues (x0, y0) of the singular point of the reduced cubic."""
    k = L.k
    a1, a2, a3, a4, a6 = (L.red(a) for a in model.coefficients)
    if L.p == 2:
        if not k.is_zero(a1):
            x0 = k.div(a3, a1)
            y0 = k.div(k.add(k.mul(x0, x0), a4), a1)
        else:
            x0 = L.sqrt(a4)
            val = k.add(k.add(k.mul(k.mul(x0, x0), x0), k.mul(a2, k.mul(x0, x0))),
                        k.add(k.mul(a4, x0), a6))
            y0 = L.sqrt(val)
        return x0, y0
    q = model.quantities
    b2, b4, b6 = L.red(q.b2), L.red(q.b4), L.red(q.b6)
    cubic = L.poly([b6, k.mul(L.two(), b4), b2, k.from_int(4)])
    found = _multiple_root(cubic, L)
    if found is None:
        raise InternalConsistencyError("reduced cubic is squarefree although pi | delta")
    x0 = found[0]
    y0 = k.neg(L.half(k.add(k.mul(a1, x0), a3)))
    return x0, y0


@dataclass
class _Outcome:
    type: KodairaType
    model: WeierstrassModel         # integral model at the start of the last pass
    change: CoordinateChange        # input -> model
    vDelta: int


def _run(model: WeierstrassModel, place: Place) -> _Outcome:
    L = _Local(place)
    field = model.field
    current, total = _integralize(model, L)
    start_model, start_change = (model, CoordinateChange.identity(field)) if total.is_identity() \
        else (current, total)
    vdelta0 = L.v(current.delta)
    bound = vdelta0 // 12 + 1
    for _ in range(bound + 1):
        result = _classify_pass(current, L)
        if result[0] is not None:
            kind = result[0]
            return _Outcome(kind, start_model, start_change, L.v(start_model.delta))
        # non-minimal: apply the accumulated change and scale by pi
        inner = result[1]
        scale = _change(field, u=L.pi)
        step = inner.then(scale)
        current = apply_change(current, step)
        total = total.then(step)
        start_model, start_change = current, total
    raise InternalConsistencyError("minimization did not terminate within the v(delta)/12 bound")


def _classify_pass(m: WeierstrassModel, L: _Local):
    """(type, None) or (None, change) when the model is not minimal."""
    field = m.field
    k = L.k
    p = L.p
    pi = L.pi
    change = CoordinateChange.identity(field)

    def step(c: CoordinateChange):
        nonlocal m, change
        m = apply_change(m, c)
        change = change.then(c)

    vd = L.v(m.delta)
    if vd == 0:
        return KodairaType("I0"), None

    x0, y0 = _singular_point(m, L)
    if not (k.is_zero(x0) and k.is_zero(y0)):
        step(_change(field, r=L.lift(x0), w=L.lift(y0)))
    for a, need in ((m.a3, 1), (m.a4, 1), (m.a6, 1)):
        if L.v(a) < need:
            raise InternalConsistencyError("singular point not moved to the origin")

    if L.v(m.quantities.b2) == 0:
        return KodairaType("In", vd), None
    if L.v(m.a6) < 2:
        return KodairaType("II"), None
    if L.v(m.quantities.b8) < 3:
        return KodairaType("III"), None
    if L.v(m.quantities.b6) < 3:
        return KodairaType("IV"), None

    # normalize: pi | a1, a2; pi^2 | a3, a4; pi^3 | a6
    if p == 2:
        s = L.sqrt(L.red(m.a2))
        if not k.is_zero(s):
            step(_change(field, s=L.lift(s)))
        tt = L.sqrt(L.red_div(m.a6, 2))
        if not k.is_zero(tt):
            step(_change(field, w=pi * L.lift(tt)))
    else:
        s = k.neg(L.half(L.red(m.a1)))
        tt = k.neg(L.half(L.red_div(m.a3, 1)))
        if not (k.is_zero(s) and k.is_zero(tt)):
            step(_change(field, s=L.lift(s), w=pi * L.lift(tt)))
    for a, need in ((m.a1, 1), (m.a2, 1), (m.a3, 2), (m.a4, 2), (m.a6, 3)):
        if L.v(a) < need:
            raise InternalConsistencyError("normalization before the star cases failed")

    a21 = L.red_div(m.a2, 1)
    a42 = L.red_div(m.a4, 2)
    a63 = L.red_div(m.a6, 3)
    P = L.poly([a63, a42, a21, k.one])
    found = _multiple_root(P, L)
    if found is None:
        return KodairaType("I0*"), None
    root, mult = found
    if not k.is_zero(root):
        step(_change(field, r=pi * L.lift(root)))

    if mult == 2:
        return KodairaType("In*", _star_chain(m, L, vd, step, lambda: m)), None

    # triple root
    a32 = L.red_div(m.a3, 2)
    a64 = L.red_div(m.a6, 4)
    if _quadratic_distinct(k.one, a32, k.neg(a64), L):
        return KodairaType("IV*"), None
    alpha = _quadratic_double_root(k.one, a32, k.neg(a64), L)
    if not k.is_zero(alpha):
        step(_change(field, w=pi ** 2 * L.lift(alpha)))
    if L.v(m.a4) < 4:
        return KodairaType("III*"), None
    if L.v(m.a6) < 6:
        return KodairaType("II*"), None
    for a, need in ((m.a1, 1), (m.a2, 2), (m.a3, 3), (m.a4, 4), (m.a6, 6)):
        if L.v(a) < need:
            raise InternalConsistencyError("non-minimal model lacks the expected divisibility")
    return None, change


def _star_chain(m0, L: _Local, vd: int, step, current) -> int:
    """Length n of the In* chain; alternates y- and x-stage quadratics."""
    k = L.k
    field = m0.field
    pi = L.pi
    n = 1
    mx = my = 2
    while n <= vd:
        m = current()
        a2 = L.red_div(m.a2, 1)
        a3 = L.red_div(m.a3, my)
        a6 = L.red_div(m.a6, mx + my)
        if _quadratic_distinct(k.one, a3, k.neg(a6), L):
            return n
        alpha = _quadratic_double_root(k.one, a3, k.neg(a6), L)
        if not k.is_zero(alpha):
            step(_change(field, w=pi ** my * L.lift(alpha)))
        my += 1
        n += 1
        m = current()
        a4 = L.red_div(m.a4, mx + 1)
        a6 = L.red_div(m.a6, mx + my)
        if _quadratic_distinct(a2, a4, a6, L):
            return n
        beta = _quadratic_double_root(a2, a4, a6, L)
        if not k.is_zero(beta):
            step(_change(field, r=pi ** mx * L.lift(beta)))
        mx += 1
        n += 1
    raise InternalConsistencyError("In* chain exceeded v(delta)")


def minimal_model_at(model: WeierstrassModel, place: Place):
    """Integral minimal model at `place` and the change producing it."""
    if place.field != model.field:
        raise DomainError("place over a different field")
    out = _run(model, place)
    return out.model, out.change


def tate_local(model: WeierstrassModel, place: Place) -> LocalFiberData:
    if place.field != model.field:
        raise DomainError("place over a different field")
    out = _run(model, place)
    kind = out.type
    vd = out.vDelta
    if kind.is_smooth and vd != 0:
        raise InternalConsistencyError("good reduction with positive v(delta)")
    swan = vd - kind.euler
    if not swan_allowed(kind, model.p, swan):
        raise InternalConsistencyError(f"swan {swan} violates the table for {kind} at p={model.p}")
    return LocalFiberData(place, kind, vd, kind.euler, swan, kind.components)


def candidate_places(model: WeierstrassModel, seed: int = 0):
    """Finite places dividing the discriminant or a pole of some a_i, plus infinity."""
    polys = [model.delta.num]
    polys.extend(a.den for a in model.coefficients if not a.is_zero())
    seen = {}
    for f in polys:
        if f.degree <= 0:
            continue
        for g, _ in f.factor(seed):
            seen[g] = Place.finite(g)
    places = sorted(seen.values(), key=Place.sort_key)
    places.append(Place.infinity(model.field))
    return places


def bad_places(model: WeierstrassModel, seed: int = 0):
    return [pl for pl in candidate_places(model, seed) if tate_local(model, pl).type.kind != "I0"]


def local_data(model: WeierstrassModel, seed: int = 0):
    """tate_local at every bad place, sorted by place."""
    out = []
    for pl in candidate_places(model, seed):
        d = tate_local(model, pl)
        if not d.type.is_smooth:
            out.append(d)
    return out
