"""Sparse multivariate polynomials over a finite field, with optional parameter relations
(a^N = 0 or a^N = 1) applied eagerly after every product."""

from __future__ import annotations

from dataclasses import dataclass

from .errors import DomainError, DomainMismatchError
from .polynomials import Poly


@dataclass(frozen=True)
class Relation:
    """a^order = 0 ("nilpotent") or a^order = 1 ("multiplicative")."""

    kind: str
    order: int

    def reduce(self, e: int):
        """Reduced exponent, or None when the monomial vanishes."""
        if e < self.order:
            return e
        if self.kind == "nilpotent":
            return None
        return e % self.order


class PolyRing:
    def __init__(self, field, names, relations: dict[str, Relation] | None = None):
        self.field = field
        self.names = tuple(names)
        if len(set(self.names)) != len(self.names):
            raise DomainError("duplicate variable names")
        self.index = {n: i for i, n in enumerate(self.names)}
        self.relations = {self.index[k]: v for k, v in (relations or {}).items()}
        self.nvars = len(self.names)

    def __eq__(self, other):
        return (isinstance(other, PolyRing) and self.field == other.field
                and self.names == other.names and self.relations == other.relations)

    def __hash__(self):
        return hash((self.field, self.names))

    def __repr__(self):
        return f"PolyRing({self.field}, {self.names})"

    def zero(self) -> "MPoly":
        return MPoly(self, {})

    def one(self) -> "MPoly":
        return self.const(self.field.one)

    def const(self, c) -> "MPoly":
        if self.field.is_zero(c):
            return self.zero()
        return MPoly(self, {(0,) * self.nvars: c})

    def from_int(self, n: int) -> "MPoly":
        return self.const(self.field.from_int(n))

    def var(self, name: str) -> "MPoly":
        e = [0] * self.nvars
        e[self.index[name]] = 1
        return MPoly(self, {tuple(e): self.field.one})

    def gens(self):
        return [self.var(n) for n in self.names]

    def normalize_exps(self, e):
        if not self.relations:
            return e
        out = list(e)
        for i, rel in self.relations.items():
            r = rel.reduce(out[i])
            if r is None:
                return None
            out[i] = r
        return tuple(out)

    def from_univariate(self, p: Poly, name: str) -> "MPoly":
        i = self.index[name]
        terms = {}
        for k, c in enumerate(p.coeffs):
            if not self.field.is_zero(c):
                e = [0] * self.nvars
                e[i] = k
                terms[tuple(e)] = c
        return MPoly(self, terms)

    def extend(self, names, relations=None) -> "PolyRing":
        rels = {self.names[i]: r for i, r in self.relations.items()}
        rels.update(relations or {})
        return PolyRing(self.field, self.names + tuple(n for n in names if n not in self.index), rels)

    def with_field(self, field) -> "PolyRing":
        return PolyRing(field, self.names, {self.names[i]: r for i, r in self.relations.items()})


class MPoly:
    __slots__ = ("ring", "terms")

    def __init__(self, ring: PolyRing, terms: dict):
        self.ring = ring
        self.terms = terms

    # -- basic protocol ---------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other):
        if isinstance(other, int):
            other = self.ring.from_int(other)
        return isinstance(other, MPoly) and self.ring == other.ring and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def _coerce(self, other) -> "MPoly":
        if isinstance(other, MPoly):
            if other.ring != self.ring:
                raise DomainMismatchError("polynomials from different rings")
            return other
        if isinstance(other, int):
            return self.ring.from_int(other)
        return self.ring.const(other)

    def __add__(self, other):
        other = self._coerce(other)
        F = self.ring.field
        terms = dict(self.terms)
        for e, c in other.terms.items():
            if e in terms:
                s = F.add(terms[e], c)
                if F.is_zero(s):
                    del terms[e]
                else:
                    terms[e] = s
            else:
                terms[e] = c
        return MPoly(self.ring, terms)

    __radd__ = __add__

    def __neg__(self):
        F = self.ring.field
        return MPoly(self.ring, {e: F.neg(c) for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        other = self._coerce(other)
        ring = self.ring
        F = ring.field
        out: dict = {}
        norm = ring.normalize_exps
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = norm(tuple(a + b for a, b in zip(e1, e2)))
                if e is None:
                    continue
                c = F.mul(c1, c2)
                if e in out:
                    s = F.add(out[e], c)
                    if F.is_zero(s):
                        del out[e]
                    else:
                        out[e] = s
                elif not F.is_zero(c):
                    out[e] = c
        return MPoly(ring, out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise DomainError("negative power of a polynomial")
        result = self.ring.one()
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def scale(self, c) -> "MPoly":
        F = self.ring.field
        if F.is_zero(c):
            return self.ring.zero()
        return MPoly(self.ring, {e: F.mul(v, c) for e, v in self.terms.items()})

    # -- structure --------------------------------------------------------
    def degree_in(self, name: str) -> int:
        i = self.ring.index[name]
        return max((e[i] for e in self.terms), default=-1)

    def total_degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def min_total_degree(self) -> int:
        return min((sum(e) for e in self.terms), default=-1)

    def variables(self) -> set[str]:
        used = set()
        for e in self.terms:
            for i, k in enumerate(e):
                if k:
                    used.add(self.ring.names[i])
        return used

    def constant_term(self):
        return self.terms.get((0,) * self.ring.nvars, self.ring.field.zero)

    def derivative(self, name: str) -> "MPoly":
        i = self.ring.index[name]
        F = self.ring.field
        out = {}
        for e, c in self.terms.items():
            k = e[i]
            if k == 0:
                continue
            v = F.mul(c, F.from_int(k))
            if F.is_zero(v):
                continue
            ne = list(e)
            ne[i] -= 1
            out[tuple(ne)] = v
        return MPoly(self.ring, out)

    def coefficient_in(self, name: str, k: int) -> "MPoly":
        """Coefficient of name^k (a polynomial in the other variables)."""
        i = self.ring.index[name]
        out = {}
        for e, c in self.terms.items():
            if e[i] == k:
                ne = list(e)
                ne[i] = 0
                out[tuple(ne)] = c
        return MPoly(self.ring, out)

    def substitute(self, mapping: dict) -> "MPoly":
        """Simultaneous substitution name -> MPoly (same target ring for every value)."""
        if not mapping:
            return self
        target = next(iter(mapping.values())).ring
        ring = self.ring
        subs = []
        for n in ring.names:
            if n in mapping:
                subs.append(mapping[n])
            elif n in target.index:
                subs.append(target.var(n))
            else:
                subs.append(None)
        cache: dict = {}

        def power(i, k):
            key = (i, k)
            if key not in cache:
                if k == 1:
                    cache[key] = subs[i]
                else:
                    half = power(i, k // 2)
                    sq = half * half
                    cache[key] = sq * subs[i] if k % 2 else sq
            return cache[key]

        result = target.zero()
        F = target.field
        for e, c in self.terms.items():
            term = target.const(F.embed(c, ring.field) if F != ring.field else c)
            for i, k in enumerate(e):
                if k == 0:
                    continue
                if subs[i] is None:
                    raise DomainError(f"no substitution for {ring.names[i]}")
                term = term * power(i, k)
                if term.is_zero():
                    break
            result = result + term
        return result

    def evaluate(self, values: dict):
        """Field value after substituting raw constants for every variable."""
        F = self.ring.field
        idx = self.ring.index
        total = F.zero
        for e, c in self.terms.items():
            v = c
            for i, k in enumerate(e):
                if k:
                    v = F.mul(v, F.pow(values[self.ring.names[i]], k))
            total = F.add(total, v)
        return total

    def partial_evaluate(self, values: dict) -> "MPoly":
        ring = self.ring
        mapping = {n: ring.const(v) for n, v in values.items()}
        return self.substitute(mapping)

    def change_ring(self, ring: PolyRing) -> "MPoly":
        """Same polynomial in a ring with a superset of variables (and possibly a larger field)."""
        F = ring.field
        out = {}
        pos = [ring.index[n] for n in self.ring.names]
        for e, c in self.terms.items():
            ne = [0] * ring.nvars
            for i, k in enumerate(e):
                ne[pos[i]] = k
            ne = ring.normalize_exps(tuple(ne))
            if ne is None:
                continue
            cc = F.embed(c, self.ring.field) if F != self.ring.field else c
            if ne in out:
                cc = F.add(out[ne], cc)
            if F.is_zero(cc):
                out.pop(ne, None)
            else:
                out[ne] = cc
        return MPoly(ring, out)

    def to_univariate(self, name: str) -> Poly:
        if self.variables() - {name}:
            raise DomainError(f"polynomial involves variables other than {name}")
        i = self.ring.index[name]
        d = self.degree_in(name)
        coeffs = [self.ring.field.zero] * (d + 1)
        for e, c in self.terms.items():
            coeffs[e[i]] = c
        return Poly(self.ring.field, coeffs)

    def truncate(self, degree: int) -> "MPoly":
        """Drop monomials of total degree >= degree."""
        return MPoly(self.ring, {e: c for e, c in self.terms.items() if sum(e) < degree})

    # -- ordering and division --------------------------------------------
    def leading(self, order):
        """(exponent, coeff) of the largest monomial under `order` (a key function)."""
        if not self.terms:
            raise DomainError("zero polynomial has no leading term")
        e = max(self.terms, key=order)
        return e, self.terms[e]

    def remainder(self, divisor: "MPoly", order) -> "MPoly":
        """Remainder of division by a single polynomial whose leading coefficient is a unit."""
        F = self.ring.field
        lm, lc = divisor.leading(order)
        inv = F.inv(lc)
        rest = dict(self.terms)
        out = {}
        while rest:
            e = max(rest, key=order)
            c = rest.pop(e)
            if all(a >= b for a, b in zip(e, lm)):
                q = tuple(a - b for a, b in zip(e, lm))
                factor = F.mul(c, inv)
                for de, dc in divisor.terms.items():
                    if de == lm:
                        continue
                    ne = self.ring.normalize_exps(tuple(a + b for a, b in zip(q, de)))
                    if ne is None:
                        continue
                    v = F.neg(F.mul(factor, dc))
                    if ne in rest:
                        s = F.add(rest[ne], v)
                        if F.is_zero(s):
                            del rest[ne]
                        else:
                            rest[ne] = s
                    else:
                        rest[ne] = v
            else:
                out[e] = c
        return MPoly(self.ring, out)

    # -- printing ---------------------------------------------------------
    def format_monomial(self, e) -> str:
        parts = []
        for n, k in zip(self.ring.names, e):
            if k == 1:
                parts.append(n)
            elif k > 1:
                parts.append(f"{n}^{k}")
        return "*".join(parts) if parts else "1"

    def format(self) -> str:
        if not self.terms:
            return "0"
        F = self.ring.field
        pieces = []
        for e in sorted(self.terms, key=lambda e: (-sum(e), tuple(-k for k in e))):
            c = self.terms[e]
            cs = F.format(c)
            mono = self.format_monomial(e)
            if mono == "1":
                pieces.append(cs)
            elif c == F.one:
                pieces.append(mono)
            else:
                if "+" in cs:
                    cs = f"({cs})"
                pieces.append(f"{cs}*{mono}")
        return " + ".join(pieces)

    def __repr__(self):
        return self.format()


def lex_order(ring: PolyRing, priority):
    """Key function for lex order with the variables in `priority` first (in that order)."""
    first = [ring.index[n] for n in priority if n in ring.index]
    rest = [i for i in range(ring.nvars) if i not in first]
    perm = first + rest

    def key(e):
        return tuple(e[i] for i in perm)
    return key
