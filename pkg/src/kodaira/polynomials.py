"""Univariate polynomials over a finite field, with factorization.

Coefficients are raw field values stored low degree first; the tuple never
ends in a zero, so the zero polynomial is the empty tuple.
"""

from __future__ import annotations

import random
from functools import reduce

from .errors import DomainError, DomainMismatchError, FieldDivisionError


class Poly:
    __slots__ = ("field", "coeffs")

    def __init__(self, field, coeffs=()):
        coeffs = list(coeffs)
        zero = field.zero
        while coeffs and coeffs[-1] == zero:
            coeffs.pop()
        self.field = field
        self.coeffs = tuple(coeffs)

    # construction helpers

    @classmethod
    def constant(cls, field, c) -> "Poly":
        return cls(field, [c])

    @classmethod
    def monomial(cls, field, degree: int, c=None) -> "Poly":
        c = field.one if c is None else c
        return cls(field, [field.zero] * degree + [c])

    @classmethod
    def x(cls, field) -> "Poly":
        return cls(field, [field.zero, field.one])

    def _lift(self, other):
        if isinstance(other, Poly):
            if other.field != self.field:
                raise DomainMismatchError(f"polynomials over {self.field} and {other.field}")
            return other
        if isinstance(other, int):
            return Poly(self.field, [self.field.from_int(other)])
        return NotImplemented

    # basic properties

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_one(self) -> bool:
        return self.coeffs == (self.field.one,)

    def is_constant(self) -> bool:
        return len(self.coeffs) <= 1

    def lc(self):
        return self.coeffs[-1] if self.coeffs else self.field.zero

    def coeff(self, i: int):
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else self.field.zero

    def constant_term(self):
        return self.coeff(0)

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.field == other.field and self.coeffs == other.coeffs
        if isinstance(other, int):
            return self.coeffs == Poly(self.field, [self.field.from_int(other)]).coeffs
        return NotImplemented

    def __hash__(self):
        return hash((self.field, self.coeffs))

    def sort_key(self):
        f = self.field
        return (self.degree, tuple(f.index(c) for c in reversed(self.coeffs)))

    # arithmetic

    def __add__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        f = self.field
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] = f.add(out[i], c)
        return Poly(f, out)

    __radd__ = __add__

    def __neg__(self):
        f = self.field
        return Poly(f, [f.neg(c) for c in self.coeffs])

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
        f = self.field
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return Poly(f)
        if f.q == f.p:
            p = f.p
            out = [0] * (len(a) + len(b) - 1)
            for i, x in enumerate(a):
                if x:
                    for j, y in enumerate(b):
                        out[i + j] += x * y
            return Poly(f, [c % p for c in out])
        out = [f.zero] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if f.is_zero(x):
                continue
            for j, y in enumerate(b):
                if not f.is_zero(y):
                    out[i + j] = f.add(out[i + j], f.mul(x, y))
        return Poly(f, out)

    __rmul__ = __mul__

    def scale(self, c) -> "Poly":
        f = self.field
        if f.is_zero(c):
            return Poly(f)
        return Poly(f, [f.mul(c, x) for x in self.coeffs])

    def shift(self, k: int) -> "Poly":
        """Multiply by x^k."""
        if not self.coeffs:
            return self
        return Poly(self.field, [self.field.zero] * k + list(self.coeffs))

    def __pow__(self, k: int) -> "Poly":
        if k < 0:
            raise DomainError("negative power of a polynomial")
        result = Poly(self.field, [self.field.one])
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __divmod__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        f = self.field
        if other.is_zero():
            raise FieldDivisionError("polynomial division by zero")
        if self.degree < other.degree:
            return Poly(f), self
        rem = list(self.coeffs)
        db = other.degree
        inv_lead = f.inv(other.lc())
        b = other.coeffs
        quot = [f.zero] * (len(rem) - db)
        if f.q == f.p:
            p = f.p
            for i in range(len(rem) - 1, db - 1, -1):
                c = rem[i]
                if c:
                    c = (c * inv_lead) % p
                    quot[i - db] = c
                    off = i - db
                    for j in range(db + 1):
                        rem[off + j] = (rem[off + j] - c * b[j]) % p
            return Poly(f, quot), Poly(f, rem[:db])
        for i in range(len(rem) - 1, db - 1, -1):
            c = rem[i]
            if not f.is_zero(c):
                c = f.mul(c, inv_lead)
                quot[i - db] = c
                off = i - db
                for j in range(db + 1):
                    rem[off + j] = f.sub(rem[off + j], f.mul(c, b[j]))
        return Poly(f, quot), Poly(f, rem[:db])

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def exact_div(self, other) -> "Poly":
        q, r = divmod(self, other)
        if not r.is_zero():
            raise DomainError("polynomial division is not exact")
        return q

    def divides(self, other: "Poly") -> bool:
        return (other % self).is_zero()

    def monic(self) -> "Poly":
        if not self.coeffs or self.lc() == self.field.one:
            return self
        return self.scale(self.field.inv(self.lc()))

    def gcd(self, other: "Poly") -> "Poly":
        a, b = self, other
        while not b.is_zero():
            a, b = b, a % b
        return a.monic()

    def xgcd(self, other: "Poly"):
        """(g, s, t) with g = s*self + t*other, g monic (or zero)."""
        f = self.field
        r0, r1 = self, other
        s0, s1 = Poly(f, [f.one]), Poly(f)
        t0, t1 = Poly(f), Poly(f, [f.one])
        while not r1.is_zero():
            q, r = divmod(r0, r1)
            r0, r1 = r1, r
            s0, s1 = s1, s0 - q * s1
            t0, t1 = t1, t0 - q * t1
        if r0.is_zero():
            return r0, s0, t0
        c = f.inv(r0.lc())
        return r0.scale(c), s0.scale(c), t0.scale(c)

    def inverse_mod(self, m: "Poly") -> "Poly":
        g, s, _ = self.xgcd(m)
        if not g.is_one():
            raise FieldDivisionError("polynomial is not invertible modulo the given modulus")
        return s % m

    def pow_mod(self, k: int, m: "Poly") -> "Poly":
        result = Poly(self.field, [self.field.one]) % m
        base = self % m
        while k:
            if k & 1:
                result = (result * base) % m
            base = (base * base) % m
            k >>= 1
        return result

    def derivative(self) -> "Poly":
        f = self.field
        return Poly(f, [f.mul(f.from_int(i), c) for i, c in enumerate(self.coeffs)][1:])

    def __call__(self, value):
        """Horner evaluation at a raw value of this field (or of an extension via `at`)."""
        f = self.field
        acc = f.zero
        for c in reversed(self.coeffs):
            acc = f.add(f.mul(acc, value), c)
        return acc

    def evaluate_in(self, target, value):
        """Evaluate at a raw value of `target`, a field containing this one."""
        acc = target.zero
        src = self.field
        for c in reversed(self.coeffs):
            acc = target.add(target.mul(acc, value), target.embed(c, src))
        return acc

    def compose(self, other: "Poly") -> "Poly":
        f = self.field
        acc = Poly(f)
        for c in reversed(self.coeffs):
            acc = acc * other + Poly(f, [c])
        return acc

    def inflate(self, k: int) -> "Poly":
        """p(t) -> p(t^k)."""
        if k == 1 or not self.coeffs:
            return self
        f = self.field
        out = [f.zero] * (k * self.degree + 1)
        for i, c in enumerate(self.coeffs):
            out[i * k] = c
        return Poly(f, out)

    def reverse(self, degree: int | None = None) -> "Poly":
        n = self.degree if degree is None else degree
        coeffs = list(self.coeffs) + [self.field.zero] * (n + 1 - len(self.coeffs))
        return Poly(self.field, coeffs[: n + 1][::-1])

    def map_coeffs(self, target, fn) -> "Poly":
        return Poly(target, [fn(c) for c in self.coeffs])

    def change_field(self, target) -> "Poly":
        """Embed coefficients into a field containing the current one."""
        src = self.field
        return Poly(target, [target.embed(c, src) for c in self.coeffs])

    def pth_root(self) -> "Poly":
        """g with g(t)^p = self, assuming self is a polynomial in t^p."""
        f = self.field
        p = f.p
        out = []
        for i, c in enumerate(self.coeffs):
            if i % p:
                if not f.is_zero(c):
                    raise DomainError("polynomial is not a p-th power")
            else:
                out.append(f.pth_root(c))
        return Poly(f, out)

    def valuation_at_zero(self) -> int:
        for i, c in enumerate(self.coeffs):
            if not self.field.is_zero(c):
                return i
        raise DomainError("valuation of the zero polynomial")

    # factorization

    def squarefree_decomposition(self):
        """List of (factor, multiplicity) with pairwise coprime monic squarefree factors."""
        if self.is_zero():
            raise DomainError("squarefree decomposition of the zero polynomial")
        f = self.monic()
        parts: dict[int, Poly] = {}
        _sqf(f, 1, parts)
        one = Poly(self.field, [self.field.one])
        return [(g, m) for m, g in sorted(parts.items()) if g != one]

    def is_squarefree(self) -> bool:
        return self.gcd(self.derivative()).degree == 0

    def is_irreducible(self) -> bool:
        """Rabin's test."""
        n = self.degree
        if n < 1:
            return False
        if n == 1:
            return True
        f = self.monic()
        q = self.field.q
        x = Poly.x(self.field)
        if not x.pow_mod(q ** n, f) == x % f:
            return False
        for r in _prime_factors(n):
            h = x.pow_mod(q ** (n // r), f) - x
            if f.gcd(h).degree != 0:
                return False
        return True

    def distinct_degree(self):
        """For squarefree monic self: list of (d, product of all degree-d factors)."""
        f = self
        q = self.field.q
        x = Poly.x(self.field)
        h = x
        out = []
        d = 0
        while f.degree >= 2 * (d + 1):
            d += 1
            h = h.pow_mod(q, f)
            g = f.gcd(h - x)
            if g.degree > 0:
                out.append((d, g))
                f = f.exact_div(g)
                h = h % f
        if f.degree > 0:
            out.append((f.degree, f))
        return out

    def equal_degree(self, d: int, rng: random.Random):
        """Split a squarefree monic product of degree-d irreducibles (Cantor-Zassenhaus)."""
        if self.degree == d:
            return [self]
        field = self.field
        q = field.q
        n = self.degree
        while True:
            a = Poly(field, [field.random(rng) for _ in range(n)])
            if a.degree < 1:
                continue
            if q % 2:
                b = a.pow_mod((q ** d - 1) // 2, self) - 1
            else:
                # absolute trace to F_2 of F_{q^d}
                k = field.absolute_degree * d
                b = a % self
                acc = b
                for _ in range(k - 1):
                    b = (b * b) % self
                    acc = acc + b
                b = acc
            g = self.gcd(b)
            if 0 < g.degree < n:
                return g.equal_degree(d, rng) + self.exact_div(g).equal_degree(d, rng)

    def factor(self, seed: int = 0):
        """Monic irreducible factors with multiplicities, sorted by (degree, coefficients)."""
        if self.is_zero():
            raise DomainError("cannot factor the zero polynomial")
        rng = random.Random(seed)
        out: dict[Poly, int] = {}
        for g, m in self.squarefree_decomposition():
            for d, h in g.distinct_degree():
                for irr in h.equal_degree(d, rng):
                    out[irr] = out.get(irr, 0) + m
        return sorted(out.items(), key=lambda kv: kv[0].sort_key())

    def roots(self, seed: int = 0):
        """Distinct roots in the coefficient field (raw values), with multiplicities."""
        f = self.field
        return [(f.neg(g.coeffs[0]), m) for g, m in self.factor(seed) if g.degree == 1]

    # printing

    def format(self, var: str = "t") -> str:
        f = self.field
        if not self.coeffs:
            return "0"
        terms = []
        for i in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[i]
            if f.is_zero(c):
                continue
            cs = f.format(c)
            if i == 0:
                terms.append(cs)
                continue
            if "+" in cs:
                cs = f"({cs})"
            mon = var if i == 1 else f"{var}^{i}"
            if c == f.one:
                terms.append(mon)
            else:
                terms.append(f"{cs}*{mon}")
        return " + ".join(terms)

    def __repr__(self):
        return self.format()


def _sqf(f: Poly, mult: int, parts: dict):
    """Musser's squarefree decomposition adapted to characteristic p."""
    field = f.field
    one = Poly(field, [field.one])
    if f.degree < 1:
        return
    c = f.gcd(f.derivative())
    w = f.exact_div(c)
    i = 1
    while w.degree > 0:
        y = w.gcd(c)
        z = w.exact_div(y)
        if z.degree > 0:
            key = i * mult
            parts[key] = parts.get(key, one) * z
        i += 1
        w = y
        c = c.exact_div(y)
    if c.degree > 0:
        _sqf(c.pth_root(), mult * field.p, parts)


def _prime_factors(n: int):
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def product(polys, field) -> Poly:
    return reduce(lambda a, b: a * b, polys, Poly(field, [field.one]))
