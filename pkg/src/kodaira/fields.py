"""Finite fields: prime fields and extension towers.

Field objects operate on *raw* values: plain ints for a prime field and
tuples of base-field raw values (low degree first) for an extension.  Raw
values are always fully reduced, so equality is structural.  `FieldElement`
wraps a raw value for operator-style use.
"""

from __future__ import annotations

import random

from .errors import DomainError, DomainMismatchError, FieldDivisionError

DEFAULT_PRIME_CAP = 1000


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


class FiniteField:
    """Operations shared by prime and extension fields."""

    p: int
    q: int
    zero = None
    one = None

    def __call__(self, value) -> "FieldElement":
        if isinstance(value, FieldElement):
            if value.field != self:
                raise DomainMismatchError(f"element of {value.field} used in {self}")
            return value
        return FieldElement(self, self.coerce(value))

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def pow(self, a, k: int):
        if k < 0:
            a = self.inv(a)
            k = -k
        result = self.one
        while k:
            if k & 1:
                result = self.mul(result, a)
            a = self.mul(a, a)
            k >>= 1
        return result

    def is_zero(self, a) -> bool:
        return a == self.zero

    def pth_root(self, a):
        """Inverse of Frobenius: a^(q/p)."""
        return self.pow(a, self.q // self.p)

    def sqrt(self, a):
        """A square root of `a`, or None if `a` is not a square."""
        if self.is_zero(a):
            return self.zero
        if self.p == 2:
            return self.pth_root(a)
        if self.pow(a, (self.q - 1) // 2) != self.one:
            return None
        return _tonelli_shanks(self, a)

    def elements(self):
        for i in range(self.q):
            yield self.from_index(i)

    def random(self, rng: random.Random):
        return self.from_index(rng.randrange(self.q))

    def random_nonzero(self, rng: random.Random):
        return self.from_index(rng.randrange(1, self.q))

    def generator_element(self) -> "FieldElement":
        return FieldElement(self, self.gen)

    def frobenius_check(self, a) -> bool:
        return self.pow(a, self.q) == a


class PrimeField(FiniteField):
    """The prime field F_p; raw values are ints in [0, p)."""

    degree = 1
    zero = 0
    one = 1

    def __init__(self, p: int, cap: int = DEFAULT_PRIME_CAP):
        if not is_prime(p):
            raise DomainError(f"{p} is not prime")
        if p > cap:
            raise DomainError(f"p = {p} exceeds the configured cap {cap}")
        self.p = p
        self.q = p
        self.gen = 1 if p == 2 else _primitive_root(p)
        self.prime_field = self
        self.absolute_degree = 1

    def __repr__(self):
        return f"GF({self.p})"

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("GF", self.p))

    def coerce(self, value):
        if isinstance(value, int):
            return value % self.p
        raise DomainError(f"cannot coerce {value!r} into {self}")

    def from_int(self, n: int):
        return n % self.p

    def add(self, a, b):
        s = a + b
        return s - self.p if s >= self.p else s

    def neg(self, a):
        return (self.p - a) if a else 0

    def sub(self, a, b):
        s = a - b
        return s + self.p if s < 0 else s

    def mul(self, a, b):
        return (a * b) % self.p

    def inv(self, a):
        if a == 0:
            raise FieldDivisionError(f"division by zero in {self}")
        return pow(a, self.p - 2, self.p)

    def pow(self, a, k: int):
        if k < 0:
            a = self.inv(a)
            k = -k
        return pow(a, k, self.p)

    def pth_root(self, a):
        return a

    def from_index(self, i: int):
        return i

    def index(self, a) -> int:
        return a

    def embed(self, a, source):
        if source != self:
            raise DomainMismatchError(f"cannot embed {source} into {self}")
        return a

    def format(self, a) -> str:
        return str(a)


# extension fields up to this size multiply through discrete-log tables
LOG_TABLE_LIMIT = 4096


class ExtensionField(FiniteField):
    """base[x]/(modulus) for a monic irreducible modulus over `base`.

    `modulus` lists base raw coefficients from constant term to the leading 1.
    """

    def __init__(self, base: FiniteField, modulus, name: str = "g", check: bool = True):
        modulus = tuple(base.coerce(c) if not isinstance(c, FieldElement) else base(c).raw
                        for c in modulus)
        while len(modulus) > 1 and base.is_zero(modulus[-1]):
            modulus = modulus[:-1]
        if len(modulus) < 2:
            raise DomainError("extension modulus must have degree >= 1")
        lead = modulus[-1]
        if lead != base.one:
            inv = base.inv(lead)
            modulus = tuple(base.mul(c, inv) for c in modulus)
        self.base = base
        self.modulus = modulus
        self.degree = len(modulus) - 1
        self.name = name
        self.p = base.p
        self.q = base.q ** self.degree
        self.prime_field = base.prime_field
        self.absolute_degree = base.absolute_degree * self.degree
        self.zero = tuple([base.zero] * self.degree)
        self.one = tuple([base.one] + [base.zero] * (self.degree - 1))
        self.gen = self._from_coeffs([base.zero, base.one]) if self.degree > 1 else \
            self._from_coeffs([base.neg(modulus[0])])
        if check:
            from .polynomials import Poly
            if not Poly(base, modulus).is_irreducible():
                raise DomainError(f"modulus {self.format_modulus()} is not irreducible over {base}")
        self._hash = hash(("EXT", base, modulus))
        self._tables = None
        # prime-field raw values are ints mod p, so coefficientwise ops can skip dispatch
        self._prime_base = isinstance(base, PrimeField)

    def __repr__(self):
        return f"{self.base!r}[{self.name}]/({self.format_modulus()})"

    def format_modulus(self) -> str:
        from .polynomials import Poly
        return Poly(self.base, self.modulus).format("x")

    def __eq__(self, other):
        return (isinstance(other, ExtensionField) and other.base == self.base
                and other.modulus == self.modulus)

    def __hash__(self):
        return self._hash

    def _from_coeffs(self, coeffs):
        base = self.base
        coeffs = list(coeffs)
        m = self.modulus
        d = self.degree
        for i in range(len(coeffs) - 1, d - 1, -1):
            c = coeffs[i]
            if not base.is_zero(c):
                for j in range(d):
                    coeffs[i - d + j] = base.sub(coeffs[i - d + j], base.mul(c, m[j]))
            coeffs[i] = base.zero
        coeffs = coeffs[:d] + [base.zero] * (d - len(coeffs))
        return tuple(coeffs)

    def coerce(self, value):
        if isinstance(value, int):
            return self._from_coeffs([self.base.coerce(value)])
        if isinstance(value, tuple) and len(value) == self.degree:
            return value
        if isinstance(value, (list, tuple)):
            return self._from_coeffs([self.base.coerce(c) for c in value])
        raise DomainError(f"cannot coerce {value!r} into {self}")

    def from_int(self, n: int):
        return self._from_coeffs([self.base.from_int(n)])

    def embed(self, a, source):
        """Map a raw value of a subfield in this tower into this field."""
        if source == self:
            return a
        return self._from_coeffs([self.base.embed(a, source)])

    def add(self, a, b):
        if self._prime_base:
            p = self.p
            return tuple((x + y) % p for x, y in zip(a, b))
        add = self.base.add
        return tuple(add(x, y) for x, y in zip(a, b))

    def neg(self, a):
        if self._prime_base:
            p = self.p
            return tuple(-x % p for x in a)
        neg = self.base.neg
        return tuple(neg(x) for x in a)

    def sub(self, a, b):
        if self._prime_base:
            p = self.p
            return tuple((x - y) % p for x, y in zip(a, b))
        sub = self.base.sub
        return tuple(sub(x, y) for x, y in zip(a, b))

    def _log_tables(self):
        """(log, exp) for a primitive element, built on first use; None for large fields."""
        if self.q > LOG_TABLE_LIMIT:
            return None
        if self._tables is None:
            order = self.q - 1
            for i in range(1, self.q):
                g = self.from_index(i)
                exp, x = [self.one], self._mul_direct(self.one, g)
                while x != self.one:
                    exp.append(x)
                    x = self._mul_direct(x, g)
                if len(exp) == order:
                    self._tables = ({v: k for k, v in enumerate(exp)}, exp)
                    break
        return self._tables

    def mul(self, a, b):
        if a == self.zero or b == self.zero:
            return self.zero
        tables = self._log_tables()
        if tables is None:
            return self._mul_direct(a, b)
        log, exp = tables
        return exp[(log[a] + log[b]) % (self.q - 1)]

    def _mul_direct(self, a, b):
        base = self.base
        if a == self.zero or b == self.zero:
            return self.zero
        d = self.degree
        prod = [base.zero] * (2 * d - 1)
        for i, x in enumerate(a):
            if base.is_zero(x):
                continue
            for j, y in enumerate(b):
                if not base.is_zero(y):
                    prod[i + j] = base.add(prod[i + j], base.mul(x, y))
        return self._from_coeffs(prod)

    def scale(self, c, a):
        """Multiply by a base-field raw value."""
        return tuple(self.base.mul(c, x) for x in a)

    def inv(self, a):
        if a == self.zero:
            raise FieldDivisionError(f"division by zero in {self}")
        tables = self._log_tables()
        if tables is not None:
            log, exp = tables
            return exp[-log[a] % (self.q - 1)]
        from .polynomials import Poly
        base = self.base
        f = Poly(base, a)
        m = Poly(base, self.modulus)
        g, s, _ = f.xgcd(m)
        # g is a nonzero constant since the modulus is irreducible
        c = base.inv(g.coeffs[0])
        return self._from_coeffs([base.mul(c, x) for x in s.coeffs])

    def from_index(self, i: int):
        bq = self.base.q
        coeffs = []
        for _ in range(self.degree):
            i, r = divmod(i, bq)
            coeffs.append(self.base.from_index(r))
        return tuple(coeffs)

    def index(self, a) -> int:
        bq = self.base.q
        n = 0
        for c in reversed(a):
            n = n * bq + self.base.index(c)
        return n

    def format(self, a) -> str:
        from .polynomials import Poly
        text = Poly(self.base, a).format(self.name)
        return text


class FieldElement:
    """An element of a finite field, supporting Python arithmetic operators."""

    __slots__ = ("field", "raw")

    def __init__(self, field: FiniteField, raw):
        self.field = field
        self.raw = raw

    def _other(self, other):
        if isinstance(other, FieldElement):
            if other.field != self.field:
                raise DomainMismatchError(f"operands live in {self.field} and {other.field}")
            return other.raw
        if isinstance(other, int):
            return self.field.from_int(other)
        return NotImplemented

    def __add__(self, other):
        b = self._other(other)
        if b is NotImplemented:
            return b
        return FieldElement(self.field, self.field.add(self.raw, b))

    __radd__ = __add__

    def __sub__(self, other):
        b = self._other(other)
        if b is NotImplemented:
            return b
        return FieldElement(self.field, self.field.sub(self.raw, b))

    def __rsub__(self, other):
        b = self._other(other)
        if b is NotImplemented:
            return b
        return FieldElement(self.field, self.field.sub(b, self.raw))

    def __mul__(self, other):
        b = self._other(other)
        if b is NotImplemented:
            return b
        return FieldElement(self.field, self.field.mul(self.raw, b))

    __rmul__ = __mul__

    def __truediv__(self, other):
        b = self._other(other)
        if b is NotImplemented:
            return b
        return FieldElement(self.field, self.field.div(self.raw, b))

    def __rtruediv__(self, other):
        b = self._other(other)
        if b is NotImplemented:
            return b
        return FieldElement(self.field, self.field.div(b, self.raw))

    def __neg__(self):
        return FieldElement(self.field, self.field.neg(self.raw))

    def __pow__(self, k: int):
        return FieldElement(self.field, self.field.pow(self.raw, k))

    def inverse(self):
        return FieldElement(self.field, self.field.inv(self.raw))

    def is_zero(self) -> bool:
        return self.field.is_zero(self.raw)

    def __bool__(self):
        return not self.is_zero()

    def __eq__(self, other):
        if isinstance(other, FieldElement):
            return self.field == other.field and self.raw == other.raw
        if isinstance(other, int):
            return self.raw == self.field.from_int(other)
        return NotImplemented

    def __hash__(self):
        return hash((self.field, self.raw))

    def __repr__(self):
        return self.field.format(self.raw)


def _primitive_root(p: int) -> int:
    order = p - 1
    factors = []
    n = order
    d = 2
    while d * d <= n:
        if n % d == 0:
            factors.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        factors.append(n)
    for g in range(2, p):
        if all(pow(g, order // f, p) != 1 for f in factors):
            return g
    return 1


def _tonelli_shanks(field: FiniteField, a):
    q = field.q
    s, e = q - 1, 0
    while s % 2 == 0:
        s //= 2
        e += 1
    # any non-residue will do; scan in index order for determinism
    z = None
    for i in range(1, q):
        c = field.from_index(i)
        if field.pow(c, (q - 1) // 2) != field.one:
            z = c
            break
    x = field.pow(a, (s + 1) // 2)
    b = field.pow(a, s)
    g = field.pow(z, s)
    r = e
    while b != field.one:
        m, t = 0, b
        while t != field.one:
            t = field.mul(t, t)
            m += 1
        gs = field.pow(g, 1 << (r - m - 1))
        x = field.mul(x, gs)
        g = field.mul(gs, gs)
        b = field.mul(b, g)
        r = m
    return x


def find_irreducible(base: FiniteField, degree: int, rng: random.Random | None = None):
    """Smallest-index monic irreducible of the given degree over `base` (deterministic)."""
    from .polynomials import Poly
    for i in range(base.q ** degree):
        coeffs = []
        n = i
        for _ in range(degree):
            n, r = divmod(n, base.q)
            coeffs.append(base.from_index(r))
        f = Poly(base, coeffs + [base.one])
        if f.is_irreducible():
            return f
    raise DomainError(f"no irreducible polynomial of degree {degree} over {base}")


def extension_of_degree(base: FiniteField, degree: int, name: str = "g") -> FiniteField:
    if degree == 1:
        return base
    f = find_irreducible(base, degree)
    return ExtensionField(base, f.coeffs, name=name, check=False)


def GF(p: int, modulus=None, name: str = "g") -> FiniteField:
    """F_p, or F_p[name]/(modulus) when a modulus (int coefficient list) is given."""
    base = PrimeField(p)
    if modulus is None:
        return base
    return ExtensionField(base, [base.coerce(c) for c in modulus], name=name)
