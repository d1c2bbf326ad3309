"""Infinitesimal group-scheme actions on Weierstrass charts.

A coaction is a substitution of the chart coordinates by polynomials in the
coordinates and a parameter `a`, where `a` lives in k[a]/(a^N) (alpha_N),
k[a]/(a^N - 1) (mu_N) or k[a] (G_a).  Charts:

    affine     t, x, y        W = y^2 + a1 x y + a3 y - x^3 - a2 x^2 - a4 x - a6
    plane      t, x, y, z     the cubic homogenised in z
    weighted   s, t, x, y     P(1, 1, 2w, 3w) with a_i homogenised to degree w*i

Vector fields (derivations) live on the affine chart with D(t) in k[t].
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

from .errors import (DomainError, InternalConsistencyError, MalformedExpressionError,
                     NotApplicableError, ParseError)
from .expressions import Algebra, parse_expression
from .fields import ExtensionField
from .localalg import local_length
from .multivariate import MPoly, PolyRing, Relation, lex_order
from .polynomials import Poly
from .rational import Place
from .tate import _Local, _singular_point, bad_places, minimal_model_at, tate_local
from .weierstrass import KEYS, WEIGHTS, WeierstrassModel, chart_weight

__all__ = [
    "CHARTS", "Coaction", "CoactionVerdict", "Derivation", "PClosedVerdict", "MarginReport",
    "MalformedCoactionError", "chart_coordinates", "surface_polynomial", "parse_polynomial",
    "parse_coaction", "verify_coaction", "coaction_group_law", "induced_derivation",
    "classify_p_closed", "zero_scheme_margin", "apply_derivation", "tangency_residual",
]

CHARTS = {
    "affine": ("t", "x", "y"),
    "plane": ("t", "x", "y", "z"),
    "weighted": ("s", "t", "x", "y"),
}
# y first so that the leading monomial of W is y^2 (times z in the plane chart)
_ORDER_PRIORITY = ("y", "z", "x", "s", "t")
DEFAULT_DEGREE_CAP = 64


class MalformedCoactionError(ParseError):
    code = "MALFORMED_COACTION"


def chart_coordinates(chart: str):
    if chart not in CHARTS:
        raise DomainError(f"unknown chart {chart!r}; expected one of {sorted(CHARTS)}")
    return CHARTS[chart]


class _PolyAlgebra(Algebra):
    """Expression hooks evaluating into a PolyRing; `g` is the field generator."""

    def __init__(self, ring: PolyRing, generator: str = "g"):
        self.ring = ring
        self.generator = generator

    def const(self, n: int):
        return self.ring.from_int(n)

    def name(self, name: str):
        if name in self.ring.index:
            return self.ring.var(name)
        F = self.ring.field
        if name == self.generator and getattr(F, "degree", 1) > 1:
            return self.ring.const(F.gen)
        raise KeyError(name)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def div(self, a, b):
        if b.variables():
            raise TypeError("division by a non-constant polynomial")
        c = b.constant_term()
        if self.ring.field.is_zero(c):
            raise ZeroDivisionError("division by zero")
        return a.scale(self.ring.field.inv(c))

    def pow(self, a, k: int):
        if k < 0:
            return self.div(self.const(1), a ** (-k))
        return a ** k


def parse_polynomial(text: str, ring: PolyRing, line: int | None = None, column: int = 0) -> MPoly:
    return parse_expression(text, _PolyAlgebra(ring), line, column)


def _poly_in_t(r, ring: PolyRing, var: str = "t") -> MPoly:
    if not r.is_polynomial():
        raise NotApplicableError(f"coefficient {r.format()} is not a polynomial in {var}")
    inv = ring.field.inv(r.den.lc())
    return ring.from_univariate(r.num.scale(inv), var)


def surface_polynomial(model: WeierstrassModel, chart: str = "affine",
                       ring: PolyRing | None = None) -> tuple[PolyRing, MPoly]:
    """The defining polynomial of the model in the requested chart."""
    coords = chart_coordinates(chart)
    if ring is None:
        ring = PolyRing(model.field, coords)
    a = {k: v for k, v in zip(KEYS, model.coefficients)}
    x, y = ring.var("x"), ring.var("y")
    if chart == "affine":
        A = {k: _poly_in_t(v, ring) for k, v in a.items()}
        W = y * y + A["a1"] * x * y + A["a3"] * y - x ** 3 - A["a2"] * x * x - A["a4"] * x - A["a6"]
        return ring, W
    if chart == "plane":
        A = {k: _poly_in_t(v, ring) for k, v in a.items()}
        z = ring.var("z")
        W = (y * y * z + A["a1"] * x * y * z + A["a3"] * y * z * z - x ** 3
             - A["a2"] * x * x * z - A["a4"] * x * z * z - A["a6"] * z ** 3)
        return ring, W
    w = max(1, chart_weight(model))
    s, t = ring.var("s"), ring.var("t")
    H = {}
    for key, r in a.items():
        if not r.is_polynomial():
            raise NotApplicableError(f"{key} is not a polynomial in t")
        num = r.num.scale(ring.field.inv(r.den.lc()))
        deg = w * WEIGHTS[key]
        if num.degree > deg:
            raise InternalConsistencyError("chart weight too small for a coefficient")
        h = ring.zero()
        for k, c in enumerate(num.coeffs):
            if not ring.field.is_zero(c):
                h = h + (t ** k) * (s ** (deg - k)) * ring.const(c)
        H[key] = h
    # x has weight 2w and y weight 3w; the a_i above already carry matching degrees
    W = y * y + H["a1"] * x * y + H["a3"] * y - x ** 3 - H["a2"] * x * x - H["a4"] * x - H["a6"]
    return ring, W


# ---------------------------------------------------------------------------
# coactions


@dataclass
class Coaction:
    """Substitution coordinate -> polynomial in the coordinates, `a` and any extra symbols."""

    field: object
    kind: str                      # "nilpotent" | "multiplicative" | "free"
    order: int | None              # N in a^N = 0 or a^N = 1
    chart: str
    substitution: dict             # coordinate -> expression text
    symbols: tuple = ()            # free symbols treated as indeterminates (e.g. "u")
    param: str = "a"

    def __post_init__(self):
        chart_coordinates(self.chart)
        if self.kind not in ("nilpotent", "multiplicative", "free"):
            raise DomainError(f"unknown relation kind {self.kind!r}")
        if self.kind != "free":
            if self.order is None or self.order < 1:
                raise DomainError("relation order must be a positive integer")
            n, p = self.order, self.field.p
            while n % p == 0:
                n //= p
            if n != 1:
                raise DomainError(f"relation order {self.order} is not a power of p = {p}")
        extra = set(self.substitution) - set(CHARTS[self.chart])
        if extra:
            raise DomainError(f"substitution for unknown coordinates {sorted(extra)}")

    @property
    def coordinates(self):
        return CHARTS[self.chart]

    @property
    def identity_value(self) -> int:
        return 1 if self.kind == "multiplicative" else 0

    def relation(self) -> Relation | None:
        if self.kind == "free":
            return None
        return Relation(self.kind, self.order)

    def ring(self, params=("a",), base=None) -> PolyRing:
        rel = self.relation()
        rels = {p: rel for p in params} if rel else {}
        names = (base or self.coordinates) + tuple(self.symbols) + tuple(params)
        return PolyRing(self.field, names, rels)

    def images(self, ring: PolyRing, param: str = "a") -> dict[str, MPoly]:
        """Coordinate images in `ring` with the parameter renamed to `param`."""
        own = self.ring((self.param,))
        out = {}
        for c in self.coordinates:
            text = self.substitution.get(c, c)
            if isinstance(text, MPoly):
                poly = text.change_ring(own)
            else:
                try:
                    poly = parse_polynomial(str(text), own)
                except MalformedExpressionError as exc:
                    raise MalformedCoactionError(f"act.{c}: {exc}", exc.line, exc.column,
                                                 exc.token) from exc
            if param != self.param:
                poly = poly.substitute({self.param: ring.var(param)})
            else:
                poly = poly.change_ring(ring)
            out[c] = poly
        return out

    def check_identity(self):
        ring = self.ring()
        images = self.images(ring)
        ident = {self.param: ring.from_int(self.identity_value)}
        for c, img in images.items():
            if img.substitute(ident) != ring.var(c):
                raise MalformedCoactionError(
                    f"act.{c} is not the identity at {self.param} = {self.identity_value}",
                    None, None, f"act.{c}")


@dataclass
class CoactionVerdict:
    status: str                    # "verified" | "fails" | "holds"
    witness: str | None = None
    residual: str | None = None
    coordinate: str | None = None

    @property
    def ok(self) -> bool:
        return self.status in ("verified", "holds")

    def to_dict(self) -> dict:
        out = {"status": self.status}
        if self.witness is not None:
            out["witness"] = self.witness
            out["residual"] = self.residual
        if self.coordinate is not None:
            out["coordinate"] = self.coordinate
        return out


def _reduce(f: MPoly, W: MPoly) -> MPoly:
    return f.remainder(W, lex_order(f.ring, _ORDER_PRIORITY))


def _witness(f: MPoly) -> tuple[str, str]:
    e, c = f.leading(lex_order(f.ring, _ORDER_PRIORITY))
    F = f.ring.field
    mono = MPoly(f.ring, {e: c})
    return mono.format(), f.format()


def verify_coaction(surface, coaction: Coaction, degree_cap: int = DEFAULT_DEGREE_CAP) -> CoactionVerdict:
    """Whether substituting the coaction into W lands in the ideal (W) over the parameter ring.

    `surface` is a WeierstrassModel (written in the coaction's chart) or a polynomial W whose
    ring contains the chart coordinates and any extra symbols."""
    coaction.check_identity()
    ring = coaction.ring()
    images = coaction.images(ring)
    for c, img in images.items():
        if img.total_degree() > degree_cap:
            raise DomainError(f"act.{c} has degree {img.total_degree()} above the cap {degree_cap}")
    if isinstance(surface, WeierstrassModel):
        if surface.field != coaction.field:
            raise DomainError("coaction and model over different fields")
        _, W = surface_polynomial(surface, coaction.chart, ring)
    else:
        W = surface.change_ring(ring)
    image = W.substitute(images)
    residual = _reduce(image, W)
    if residual.is_zero():
        return CoactionVerdict("verified")
    witness, text = _witness(residual)
    return CoactionVerdict("fails", witness, text)


def coaction_group_law(coaction: Coaction) -> CoactionVerdict:
    """Acting by a and then by b agrees with acting by a+b (alpha, G_a) or a*b (mu)."""
    coaction.check_identity()
    ring = coaction.ring(("a", "b"))
    first = coaction.images(ring, "a")
    second = coaction.images(ring, "b")
    a, b = ring.var("a"), ring.var("b")
    combined = a * b if coaction.kind == "multiplicative" else a + b
    for c in coaction.coordinates:
        composed = second[c].substitute(first)
        direct = first[c].substitute({"a": combined})
        diff = composed - direct
        if not diff.is_zero():
            witness, text = _witness(diff)
            return CoactionVerdict("fails", witness, text, c)
    return CoactionVerdict("holds")


def _parse_relation(text: str, lineno: int, col: int):
    body = text.replace(" ", "")
    if body in ("none", "free", ""):
        return "free", None
    if "=" not in body:
        raise MalformedCoactionError("relation must read a^N=0, a^N=1 or none", lineno, col, text)
    lhs, rhs = body.split("=", 1)
    if not lhs.startswith("a^") or not lhs[2:].isdigit() or rhs not in ("0", "1"):
        raise MalformedCoactionError("relation must read a^N=0, a^N=1 or none", lineno, col, text)
    return ("nilpotent" if rhs == "0" else "multiplicative"), int(lhs[2:])


def parse_coaction(text: str, field) -> Coaction:
    """Stanza of `act.<coord> = expr` lines plus `relation = a^N=1` and an optional
    `chart = affine|plane|weighted` and `symbols = u,v` line."""
    subs, relation, chart, symbols = {}, None, "affine", ()
    positions = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        if not line.strip():
            continue
        if "=" not in line:
            raise MalformedCoactionError("expected key=value", lineno, 1, line.strip())
        key_part, value = line.split("=", 1)
        key = key_part.strip()
        col = len(key_part) + 1
        if key == "relation":
            relation = _parse_relation(value.strip(), lineno, col + 1)
        elif key == "chart":
            chart = value.strip()
            if chart not in CHARTS:
                raise MalformedCoactionError(f"unknown chart {chart!r}", lineno, col + 1, chart)
        elif key == "symbols":
            symbols = tuple(s.strip() for s in value.split(",") if s.strip())
        elif key.startswith("act."):
            coord = key[4:]
            if coord in subs:
                raise MalformedCoactionError(f"duplicate key {key!r}", lineno, 1, key)
            subs[coord] = value.strip()
            positions[coord] = (lineno, col)
        else:
            raise MalformedCoactionError(f"unknown key {key!r}", lineno, 1, key)
    if relation is None:
        raise MalformedCoactionError("missing relation line", None, None, None)
    unknown = set(subs) - set(CHARTS[chart])
    if unknown:
        coord = sorted(unknown)[0]
        raise MalformedCoactionError(f"coordinate {coord!r} is not in the {chart} chart",
                                     positions[coord][0], 1, f"act.{coord}")
    kind, order = relation
    c = Coaction(field, kind, order, chart, subs, symbols)
    ring = c.ring()
    for coord, text_value in subs.items():
        lineno, col = positions[coord]
        try:
            parse_polynomial(text_value, ring, lineno, col)
        except MalformedExpressionError as exc:
            raise MalformedCoactionError(str(exc), exc.line, exc.column, exc.token) from exc
    c.check_identity()
    return c


# ---------------------------------------------------------------------------
# derivations


@dataclass
class Derivation:
    """D on the affine chart k[t, x, y]; unspecified components are zero."""

    ring: PolyRing
    components: dict

    @classmethod
    def from_strings(cls, field, **components) -> "Derivation":
        ring = PolyRing(field, CHARTS["affine"])
        comps = {c: parse_polynomial(str(components.get(c, "0")), ring) for c in ring.names}
        return cls(ring, comps)

    def __post_init__(self):
        for c in self.ring.names:
            self.components.setdefault(c, self.ring.zero())
        if self.components["t"].variables() - {"t"}:
            raise DomainError("D(t) must be a polynomial in t alone")

    def __call__(self, f: MPoly) -> MPoly:
        return apply_derivation(self, f)

    def format(self) -> str:
        parts = []
        for c in self.ring.names:
            comp = self.components[c]
            if not comp.is_zero():
                parts.append(f"({comp.format()})*d/d{c}")
        return " + ".join(parts) or "0"


def apply_derivation(D: Derivation, f: MPoly) -> MPoly:
    total = f.ring.zero()
    for c in D.ring.names:
        comp = D.components[c]
        if comp.is_zero():
            continue
        df = f.derivative(c)
        if not df.is_zero():
            total = total + comp * df
    return total


def tangency_residual(D: Derivation, model: WeierstrassModel) -> MPoly:
    _, W = surface_polynomial(model, "affine", D.ring)
    return _reduce(apply_derivation(D, W), W)


def induced_derivation(coaction: Coaction, weight: int = 1) -> Derivation:
    """Differentiate the coaction at the identity parameter and restrict to the affine chart.

    Projective charts are dehomogenised at s = 1 (weighted, with x and y of weights 2w and 3w)
    or z = 1 (plane); a scaling of s by a power of a is undone by the weighted rescaling."""
    if coaction.symbols:
        raise NotApplicableError("derivation of a coaction with free symbols")
    ring = coaction.ring()
    images = coaction.images(ring)
    affine = PolyRing(coaction.field, CHARTS["affine"])
    ident = {"a": ring.from_int(coaction.identity_value)}
    if coaction.chart == "affine":
        return Derivation(affine, {c: _project(images[c].derivative("a").substitute(ident), affine)
                                   for c in affine.names})
    fixed = "s" if coaction.chart == "weighted" else "z"
    a = ring.var("a")
    exponent = None
    for e in range((coaction.order or 1) + 1):
        if images[fixed] == (a ** e) * ring.var(fixed):
            exponent = e
            break
    if exponent is None:
        raise NotApplicableError(f"act.{fixed} is not a scaling of {fixed} by a power of a")
    if exponent and coaction.kind != "multiplicative":
        raise NotApplicableError(f"act.{fixed} scales by a non-unit")
    lam = a ** ((coaction.order - exponent) % coaction.order) if exponent else ring.one()
    weights = {"t": 1, "x": 2 * weight, "y": 3 * weight} if fixed == "s" else \
        {"t": 0, "x": 1, "y": 1}
    dehom = {fixed: ring.one()}
    comps = {}
    for c in affine.names:
        image = (lam ** weights[c]) * images[c]
        image = image.substitute(dehom)
        comps[c] = _project(image.derivative("a").substitute(ident), affine)
    return Derivation(affine, comps)


def _project(poly: MPoly, affine: PolyRing) -> MPoly:
    """Move a polynomial that only involves affine coordinates into the affine ring."""
    used = poly.variables()
    if used - set(affine.names):
        raise NotApplicableError(f"derivation component involves {sorted(used - set(affine.names))}")
    pos = [poly.ring.index[n] for n in affine.names]
    return MPoly(affine, {tuple(e[i] for i in pos): c for e, c in poly.terms.items()})


@dataclass
class PClosedVerdict:
    kind: str                      # "multiplicative" | "additive" | "p_closed" | "not_p_closed"
    lam: object = None

    def to_dict(self, field=None) -> dict:
        out = {"kind": self.kind}
        if self.lam is not None:
            out["lambda"] = field.format(self.lam) if field is not None else str(self.lam)
        return out


def classify_p_closed(D: Derivation, model: WeierstrassModel) -> PClosedVerdict:
    """Compare D^p with D on the coordinate functions modulo W."""
    _, W = surface_polynomial(model, "affine", D.ring)
    residual = _reduce(apply_derivation(D, W), W)
    if not residual.is_zero():
        raise DomainError(f"derivation is not tangent to the surface: residual {residual.format()}")
    p = model.p
    F = D.ring.field
    powers, firsts = {}, {}
    for c in D.ring.names:
        f = D.ring.var(c)
        for _ in range(p):
            f = _reduce(apply_derivation(D, f), W)
        powers[c] = f
        firsts[c] = _reduce(D.components[c], W)
    if all(powers[c] == firsts[c] for c in powers):
        return PClosedVerdict("multiplicative")
    if all(powers[c].is_zero() for c in powers):
        return PClosedVerdict("additive")
    lam = None
    for c in powers:
        if not firsts[c].is_zero():
            e, v = firsts[c].leading(lex_order(D.ring, _ORDER_PRIORITY))
            lam = F.div(powers[c].terms.get(e, F.zero), v)
            break
    if lam is not None and all(powers[c] == firsts[c].scale(lam) for c in powers):
        return PClosedVerdict("p_closed", lam)
    return PClosedVerdict("not_p_closed")


# ---------------------------------------------------------------------------
# zero scheme of a vector field


@dataclass
class MarginReport:
    divisorial: list                     # [(Place, multiplicity)] of chart fiber components
    isolated_length: int
    self_intersection: int
    margin: int
    c2: int
    excluded_type: str
    verdict: dict
    contributions: list = dc_field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "divisorialPart": [{"place": P.label(), "multiplicity": m} for P, m in self.divisorial],
            "isolatedLength": self.isolated_length,
            "selfIntersection": self.self_intersection,
            "margin": self.margin,
            "c2": self.c2,
            "excludedFiber": self.excluded_type,
            "lemma51Verdict": self.verdict,
            "contributions": self.contributions,
        }


def _t_coefficients(f: MPoly) -> dict:
    """{(i, j): Poly in t} grouping f by its x^i y^j monomials."""
    ring = f.ring
    it, ix, iy = ring.index["t"], ring.index["x"], ring.index["y"]
    F = ring.field
    groups: dict = {}
    for e, c in f.terms.items():
        key = (e[ix], e[iy])
        groups.setdefault(key, {})[e[it]] = c
    out = {}
    for key, coeffs in groups.items():
        d = max(coeffs)
        out[key] = Poly(F, [coeffs.get(k, F.zero) for k in range(d + 1)])
    return out


def _divide_by_t_poly(f: MPoly, h: Poly) -> MPoly:
    ring = f.ring
    it, ix, iy = ring.index["t"], ring.index["x"], ring.index["y"]
    out = ring.zero()
    for (i, j), poly in _t_coefficients(f).items():
        q = poly.exact_div(h)
        mono = ring.var("x") ** i * ring.var("y") ** j
        out = out + ring.from_univariate(q, "t") * mono
    return out


def _at_place(f: MPoly, place: Place, K):
    """f(t = root of place) as a polynomial over K in the remaining variables."""
    ring = f.ring
    Kring = PolyRing(K, tuple(n for n in ring.names if n != "t"))
    theta = place.root
    out = {}
    it = ring.index["t"]
    Kpow = {}
    for e, c in f.terms.items():
        k = e[it]
        if k not in Kpow:
            Kpow[k] = K.pow(theta, k)
        v = K.mul(K.embed(c, ring.field) if K != ring.field else c, Kpow[k])
        ne = tuple(x for i, x in enumerate(e) if i != it)
        if ne in out:
            v = K.add(out[ne], v)
        if K.is_zero(v):
            out.pop(ne, None)
        else:
            out[ne] = v
    return MPoly(Kring, out)


def _univariate(f: MPoly, name: str) -> Poly:
    return f.to_univariate(name) if not f.is_zero() else Poly(f.ring.field, [])


def _extension_root(g: Poly):
    """(field, root) adjoining a root of the monic irreducible g."""
    K = g.field
    if g.degree == 1:
        return K, K.neg(g.monic().coeffs[0])
    L = ExtensionField(K, g.monic().coeffs, name="r", check=False)
    return L, L.gen


def _lift_to(value, source, target):
    return value if source == target else target.embed(value, source)


def _shifted(f: MPoly, field, point: dict) -> MPoly:
    """f over `field`, recentred so that `point` becomes the origin."""
    ring = PolyRing(field, f.ring.names)
    g = f.change_ring(ring)
    return g.substitute({n: ring.var(n) + ring.const(point[n]) for n in ring.names})


def _chart_points(Dp: dict, W: MPoly, place: Place, seed: int):
    """Common zeros of D'(x), D'(y) and W on the fiber over `place` (D'(t) vanishes there)."""
    K = place.residue_field
    Wk = _at_place(W, place, K)
    A = Wk.coefficient_in("y", 1)
    B = Wk.coefficient_in("y", 0)
    A_x, B_x = _univariate(A, "x"), _univariate(B, "x")
    parts = []
    for c in ("x", "y"):
        g = _at_place(_reduce(Dp[c], W), place, K)
        r, s = _univariate(g.coefficient_in("y", 0), "x"), _univariate(g.coefficient_in("y", 1), "x")
        parts.append((r, s))
    res = []
    for r, s in parts:
        if r.is_zero() and s.is_zero():
            continue
        res.append(r * r - A_x * r * s + B_x * s * s)
    if not res:
        raise InternalConsistencyError("derivation vanishes on a whole fiber after removing it")
    R = res[0]
    for other in res[1:]:
        R = R.gcd(other)
    points = []
    if R.degree <= 0:
        return points
    for g, _ in R.factor(seed):
        K2, x0 = _extension_root(g)
        rs = [(r.change_field(K2)(x0) if not r.is_zero() else K2.zero,
               s.change_field(K2)(x0) if not s.is_zero() else K2.zero) for r, s in parts]
        a0 = A_x.change_field(K2)(x0) if not A_x.is_zero() else K2.zero
        b0 = B_x.change_field(K2)(x0) if not B_x.is_zero() else K2.zero
        quad = Poly(K2, [b0, a0, K2.one])
        candidates = []
        lin = [(r0, s0) for r0, s0 in rs if not K2.is_zero(s0)]
        if lin:
            r0, s0 = lin[0]
            candidates.append((K2, K2.neg(K2.div(r0, s0))))
        else:
            for h, _ in quad.factor(seed):
                K3, y0 = _extension_root(h)
                candidates.append((K3, y0))
        for K3, y0 in candidates:
            x3 = _lift_to(x0, K2, K3)
            if not K3.is_zero(quad.change_field(K3)(y0)):
                continue
            if any(not K3.is_zero(K3.add(_lift_to(r0, K2, K3), K3.mul(_lift_to(s0, K2, K3), y0)))
                   for r0, s0 in rs):
                continue
            t0 = _lift_to(place.root, K, K3)
            points.append((K3, {"t": t0, "x": x3, "y": y0}))
    return points


def _zero_section_chart(W_model: WeierstrassModel, ring3: PolyRing, Dp: dict):
    """Chart (t, z, w) with x = z/w, y = 1/w: equation E and the components D'(z), D'(w)."""
    F = ring3.field
    zr = PolyRing(F, ("t", "z", "w"))
    z, w = zr.var("z"), zr.var("w")
    A = {k: _poly_in_t(v, zr) for k, v in zip(KEYS, W_model.coefficients)}
    E = (w + A["a1"] * z * w + A["a3"] * w * w - z ** 3 - A["a2"] * z * z * w
         - A["a4"] * z * w * w - A["a6"] * w ** 3)

    def laurent(f: MPoly, shift: int, zshift: int, sign) -> dict:
        # x^i y^j -> z^(i + zshift) w^(shift - i - j)
        out = {}
        it, ix, iy = f.ring.index["t"], f.ring.index["x"], f.ring.index["y"]
        for e, c in f.terms.items():
            key = (e[it], e[ix] + zshift, shift - e[ix] - e[iy])
            v = F.mul(c, sign)
            if key in out:
                v = F.add(out[key], v)
            if F.is_zero(v):
                out.pop(key, None)
            else:
                out[key] = v
        return out

    minus = F.neg(F.one)
    dz = laurent(Dp["x"], 1, 0, F.one)
    for key, v in laurent(Dp["y"], 1, 1, minus).items():
        s = F.add(dz.get(key, F.zero), v)
        if F.is_zero(s):
            dz.pop(key, None)
        else:
            dz[key] = s
    dw = laurent(Dp["y"], 2, 0, minus)
    for comp in (dz, dw):
        if any(k[2] < 0 for k in comp):
            raise NotApplicableError("derivation has a pole along the zero section in this chart")
    Dz = MPoly(zr, dz)
    Dw = MPoly(zr, dw)
    Dt = Dp["t"].change_ring(PolyRing(F, ("t", "x", "y"))).substitute(
        {"t": zr.var("t"), "x": zr.zero(), "y": zr.zero()})
    return zr, E, {"t": Dt, "z": Dz, "w": Dw}


def _weights_in_prime_field(value, F) -> int:
    for i in range(F.p):
        if F.from_int(i) == value:
            return i
    raise NotApplicableError("linear part of the derivation has weights outside F_p")


def _node_analysis(D: Derivation, W: MPoly, model: WeierstrassModel, place: Place, point: dict,
                   theta_multiplicity: int):
    """Toric bookkeeping at an A_{n-1} point of an I_n fiber fixed by a multiplicative D.

    Chain C_0..C_n with C_0 = C_n the two branches of the nodal component.  C_j lies in the
    zero divisor iff j*w_t = w_u (mod p); a node between two chain curves outside the zero
    divisor is an isolated zero of length 1."""
    data = tate_local(model, place)
    if data.type.kind != "In" or data.type.n < 2:
        raise NotApplicableError(f"derivation fixes a singular point of a {data.type} fiber")
    if place.degree != 1:
        raise NotApplicableError("singular point over a place of degree > 1")
    _, change = minimal_model_at(model, place)
    if not change.is_identity():
        raise NotApplicableError("model is not minimal at a fixed singular point")
    F = W.ring.field
    p, n = model.p, data.type.n
    shifted = {c: _shifted(D.components[c], F, point) for c in ("t", "x", "y")}

    def linear(f: MPoly, var: str):
        e = tuple(1 if nm == var else 0 for nm in f.ring.names)
        return f.terms.get(e, F.zero)

    w_t = _weights_in_prime_field(linear(shifted["t"], "t"), F)
    m = [[linear(shifted[r], c) for c in ("x", "y")] for r in ("x", "y")]
    tr = F.add(m[0][0], m[1][1])
    det = F.sub(F.mul(m[0][0], m[1][1]), F.mul(m[0][1], m[1][0]))
    eig = [i for i in range(p)
           if F.is_zero(F.add(F.sub(F.mul(F.from_int(i), F.from_int(i)),
                                    F.mul(tr, F.from_int(i))), det))]
    if not eig:
        raise NotApplicableError("branch weights at the node are not in F_p")
    w_u = eig[0]
    w_v = (_weights_in_prime_field(tr, F) - w_u) % p
    if (w_u + w_v - n * w_t) % p:
        raise NotApplicableError("branch weights incompatible with the A_{n-1} equation")
    in_z = [((j * w_t - w_u) % p == 0) for j in range(n + 1)]
    if in_z[0] != in_z[n] or in_z[0] != (theta_multiplicity >= 1) or theta_multiplicity > 1:
        raise NotApplicableError("nodal component multiplicity disagrees with the branch weights")
    members = [j for j in range(n) if in_z[j]]
    adjacent = sum(1 for j in range(n) if in_z[j] and in_z[(j + 1) % n])
    if adjacent:
        raise NotApplicableError("adjacent chain curves both in the zero divisor")
    self_int = -2 * len(members)
    isolated = sum(1 for j in range(n) if not in_z[j] and not in_z[j + 1])
    return {
        "place": place.label(),
        "kind": "node",
        "type": str(data.type),
        "weights": {"t": w_t, "u": w_u, "v": w_v},
        "zeroComponents": members,
        "isolated": isolated,
        "selfIntersection": self_int,
    }


def zero_scheme_margin(D: Derivation, model: WeierstrassModel, excluded: Place | None = None,
                       sections: int = 1, seed: int = 0) -> MarginReport:
    """length(W|X-F) - (Z|X-F)^2 for the vector field D, with F the fiber at infinity."""
    from .invariants import analyze

    field = model.field
    if excluded is None:
        excluded = Place.infinity(field)
    if not excluded.is_infinite:
        raise NotApplicableError("only the fiber at infinity can be excluded (affine chart)")
    if sections < 1:
        raise DomainError("at least one section is required")
    ring = D.ring
    _, W = surface_polynomial(model, "affine", ring)
    residual = _reduce(apply_derivation(D, W), W)
    if not residual.is_zero():
        raise DomainError(f"derivation is not tangent to the surface: residual {residual.format()}")
    comps = {c: _reduce(D.components[c], W) for c in ring.names}
    Dt = comps["t"].to_univariate("t") if not comps["t"].is_zero() else None
    if Dt is None:
        raise NotApplicableError("vertical vector field (D(t) = 0)")

    # divisorial part: common t-factor of every coefficient in the normal form
    h = Poly(field, [])
    for comp in comps.values():
        for poly in _t_coefficients(comp).values():
            h = poly if h.is_zero() else h.gcd(poly)
    divisorial = []
    if h.degree > 0:
        for g, mult in h.factor(seed):
            divisorial.append((Place.finite(g), mult))
        h = h.monic()
        Dp = {c: _divide_by_t_poly(comps[c], h) for c in ring.names}
    else:
        Dp = dict(comps)
    theta_mult = {P: m for P, m in divisorial}

    contributions = []
    isolated = 0
    self_int = 0
    handled_places = set()

    # singular points of the chart
    singular = []
    dWt = W.derivative("t")
    for place in bad_places(model, seed):
        if place.is_infinite:
            continue
        L = _Local(place)
        m, change = minimal_model_at(model, place)
        try:
            x0, y0 = _singular_point(model, L)
        except (InternalConsistencyError, DomainError):
            continue
        K = L.k
        theta = place.root
        pt = {"t": theta, "x": x0, "y": y0}
        if not K.is_zero(_at_place(dWt, place, K).evaluate({"x": x0, "y": y0})):
            continue
        singular.append((place, pt))
    for place, pt in singular:
        K = place.residue_field
        fixes = all(K.is_zero(_at_place(D.components[c], place, K).evaluate(
            {"x": pt["x"], "y": pt["y"]})) for c in ring.names)
        if not fixes:
            raise NotApplicableError(f"derivation moves the singular point over {place.label()}")
        if classify_p_closed(D, model).kind != "multiplicative":
            raise NotApplicableError("fixed singular point of a non-multiplicative derivation")
        node = _node_analysis(D, W, model, place, pt, theta_mult.get(place, 0))
        contributions.append(node)
        isolated += node["isolated"]
        self_int += node["selfIntersection"]
        handled_places.add(place)

    # fiber components in Z away from singular points: whole irreducible fibers, square 0
    for place, mult in divisorial:
        if place in handled_places:
            continue
        data = tate_local(model, place)
        if data.components != 1:
            raise NotApplicableError(f"zero divisor meets the reducible fiber over {place.label()}")
        contributions.append({"place": place.label(), "kind": "fiber", "multiplicity": mult,
                              "selfIntersection": 0})

    # isolated zeros at smooth points of the affine chart and along the zero section
    Dpt = Dp["t"].to_univariate("t") if not Dp["t"].is_zero() else None
    if Dpt is None:
        raise NotApplicableError("vertical vector field after removing fiber components")
    if Dpt.degree > 0:
        zr, E, Dzw = _zero_section_chart(model, ring, Dp)
        for g, _ in Dpt.factor(seed):
            place = Place.finite(g)
            for K3, pt in _chart_points(Dp, W, place, seed):
                if any(place == sp and _same_point(pt, spt, K3, place) for sp, spt in singular):
                    continue
                Ws = _shifted(W, K3, pt)
                gens = [_shifted(Dp[c], K3, pt) for c in ring.names]
                length = local_length(Ws, gens)
                deg = K3.absolute_degree // field.absolute_degree
                isolated += length * deg
                contributions.append({"place": place.label(), "kind": "chart", "length": length,
                                      "degree": deg})
            K = place.residue_field
            origin = {"t": place.root, "z": K.zero, "w": K.zero}
            if all(K.is_zero(_at_place(Dzw[c], place, K).evaluate({"z": K.zero, "w": K.zero}))
                   for c in ("z", "w")):
                Es = _shifted(E, K, origin)
                gens = [_shifted(Dzw[c], K, origin) for c in ("t", "z", "w")]
                length = local_length(Es, gens)
                deg = K.absolute_degree // field.absolute_degree
                isolated += length * deg
                contributions.append({"place": place.label(), "kind": "zero-section",
                                      "length": length, "degree": deg})

    margin = isolated - self_int
    report = analyze(model, seed)
    excluded_data = tate_local(model, excluded)
    verdict = _margin_verdict(excluded_data.type, margin, report.c2, sections, model.p, D, model,
                             Dt)
    return MarginReport(divisorial, isolated, self_int, margin, report.c2, str(excluded_data.type),
                        verdict, contributions)


def _same_point(pt, spt, K3, place) -> bool:
    K = place.residue_field
    return all(K3.is_zero(K3.sub(pt[c], _lift_to(spt[c], K, K3))) for c in ("x", "y"))


def _margin_verdict(ftype, margin, c2, sections, p, D, model, Dt: Poly) -> dict:
    base_ok = Dt.degree <= 1
    out = {"baseVectorFieldVanishesAtExcluded": base_ok}
    if ftype.kind == "II":
        threshold = c2 - 4 * sections
        out.update(case="II", threshold=threshold, satisfied=base_ok and margin > threshold)
    elif ftype.kind == "III" and p == 2 and sections >= 2:
        threshold = c2 - 6
        mult = classify_p_closed(D, model).kind == "multiplicative"
        out.update(case="III", threshold=threshold, multiplicative=mult,
                   satisfied=base_ok and mult and margin > threshold)
    else:
        out.update(case="not_applicable", satisfied=False)
    return out
