"""Global invariants of a Weierstrass surface and the classification checks built on them."""

from __future__ import annotations

import enum
import itertools
import math
from dataclasses import dataclass, field

from .errors import DomainError, InternalConsistencyError
from .fields import is_prime
from .tate import KodairaType, LocalFiberData, local_data, swan_must_vanish
from .weierstrass import WeierstrassModel

GEOMETRIC_NOTE = ("fiber types are geometric: split and non-split multiplicative "
                  "reduction are not distinguished")


@dataclass
class SurfaceReport:
    model: WeierstrassModel
    fibers: list[LocalFiberData]
    c2: int
    chi: int
    isotrivial: bool
    jMap: object
    notes: list[str] = field(default_factory=list)

    @property
    def p(self) -> int:
        return self.model.p

    @property
    def types(self) -> list[KodairaType]:
        return [f.type for f in self.fibers]

    def to_dict(self) -> dict:
        from .modelio import model_to_dict
        return {
            "model": model_to_dict(self.model),
            "fibers": [f.to_dict() for f in self.fibers],
            "c2": self.c2,
            "chi": self.chi,
            "isotrivial": self.isotrivial,
            "notes": list(self.notes),
        }


def analyze(model: WeierstrassModel, seed: int = 0) -> SurfaceReport:
    fibers = local_data(model, seed)
    c2 = sum(f.place.degree * f.vDelta for f in fibers)
    if c2 % 12:
        raise InternalConsistencyError(f"c2 = {c2} is not divisible by 12")
    j = model.j
    report = SurfaceReport(model, fibers, c2, c2 // 12, j.is_constant(), j)
    report.notes = surface_notes(report)
    return report


def surface_notes(report: SurfaceReport) -> list[str]:
    notes = [GEOMETRIC_NOTE]
    fibers = report.fibers
    if report.p == 2 and len(fibers) == 1:
        t = fibers[0].type
        if t.kind == "In*" and t.n % 8 == 4:
            k = (t.n - 4) // 8
            notes.append(
                f"unique I{t.n}* fiber in characteristic 2: swan = 4k+2 = {4 * k + 2} "
                f"(k = {k}); the alternative value 4k+8 = {4 * k + 8} would give "
                f"c2 = {t.n + 6 + 4 * k + 8}, which is not divisible by 12"
            )
    return notes


# ---------------------------------------------------------------------------
# root lattices of the non-identity fiber components

@dataclass(frozen=True)
class RootLatticeDatum:
    name: str
    rank: int
    discriminant: int


def root_lattice(t: KodairaType) -> RootLatticeDatum:
    """Lattice spanned by the components missing the zero section (additive types only)."""
    k = t.kind
    if k == "II":
        return RootLatticeDatum("0", 0, 1)
    if k == "III":
        return RootLatticeDatum("A1", 1, 2)
    if k == "IV":
        return RootLatticeDatum("A2", 2, 3)
    if k in ("I0*", "In*"):
        m = t.n + 4
        return RootLatticeDatum(f"D{m}", m, 4)
    if k == "IV*":
        return RootLatticeDatum("E6", 6, 3)
    if k == "III*":
        return RootLatticeDatum("E7", 7, 2)
    if k == "II*":
        return RootLatticeDatum("E8", 8, 1)
    raise DomainError(f"{t} has no additive root lattice")


_TWIST_SWAP = {"II": "IV*", "IV*": "II", "III": "III*", "III*": "III", "IV": "II*",
               "II*": "IV", "I0*": "I0*"}


def quadratic_twist_type(t: KodairaType) -> KodairaType:
    """Fiber type after twisting by a function with a simple zero or pole there (p != 2)."""
    if t.kind == "In":
        return KodairaType("In*", t.n)
    if t.kind == "In*":
        return KodairaType("In", t.n)
    if t.kind == "I0":
        return KodairaType("I0*")
    return KodairaType(_TWIST_SWAP[t.kind])


class ExclusionReason(enum.Enum):
    SWAN_FORCED = "SWAN_FORCED"              # a type needs positive swan in this characteristic
    RANK_MISMATCH = "RANK_MISMATCH"          # Euler numbers do not sum to a multiple of 12
    DISCRIMINANT = "DISCRIMINANT"            # lattice discriminant is not a p-power times a square
    QUADRATIC_TWIST = "QUADRATIC_TWIST"      # a twist would produce a forbidden configuration


@dataclass(frozen=True)
class LatticeVerdict:
    status: str                              # "admissible" | "excluded" | "not_applicable"
    case: str | None = None
    reasons: tuple[ExclusionReason, ...] = ()
    detail: str = ""

    @property
    def admissible(self) -> bool:
        return self.status == "admissible"

    @property
    def reason(self) -> ExclusionReason | None:
        return self.reasons[0] if self.reasons else None

    def to_dict(self) -> dict:
        return {
            "status": self.status,
            "case": self.case,
            "reasons": [r.value for r in self.reasons],
            "detail": self.detail,
        }


def _is_p_power_times_square(value: int, p: int) -> bool:
    while value % p == 0:
        value //= p
    r = math.isqrt(value)
    return r * r == value


def _is_power_of(n: int, p: int) -> bool:
    while n % p == 0:
        n //= p
    return n == 1


def _wild_first(t: KodairaType, p: int) -> int | None:
    """v(delta) of a wild II/III fiber of the two-fiber setting, or None."""
    if p == 3 and t.kind == "II":
        return 3
    if p == 2 and t.kind in ("II", "III"):
        return 4
    return None


def _case_name(t1: KodairaType, t2: KodairaType) -> str:
    def nm(t):
        return t.json_name if t.kind not in ("In", "In*") else str(t).replace("*", "star")
    return f"{nm(t1)}+{nm(t2)}"


def lattice_check(t1: KodairaType, t2: KodairaType, p: int) -> LatticeVerdict:
    """Admissibility of a two-fiber configuration on a surface with c2 = e1 + e2 + swans."""
    if not is_prime(p):
        raise DomainError(f"{p} is not prime")
    if t1.is_smooth or t2.is_smooth:
        return LatticeVerdict("not_applicable", detail="a smooth fiber is not a singular fiber")
    if _wild_first(t2, p) is not None and _wild_first(t1, p) is None:
        t1, t2 = t2, t1
    v1 = _wild_first(t1, p)
    if v1 is not None:
        return _wild_check(t1, t2, p, v1)
    if not (t1.is_additive and t2.is_additive):
        return LatticeVerdict("not_applicable",
                              detail="multiplicative fibers only occur next to a wild II/III fiber")
    return _tame_check(t1, t2, p)


def _tame_check(t1, t2, p) -> LatticeVerdict:
    reasons = []
    if not (swan_must_vanish(t1, p) and swan_must_vanish(t2, p)):
        reasons.append(ExclusionReason.SWAN_FORCED)
    if (t1.euler + t2.euler) % 12:
        reasons.append(ExclusionReason.RANK_MISMATCH)
    d = root_lattice(t1).discriminant * root_lattice(t2).discriminant
    if not _is_p_power_times_square(d, p):
        reasons.append(ExclusionReason.DISCRIMINANT)
    if p != 2:
        u1, u2 = quadratic_twist_type(t1), quadratic_twist_type(t2)
        if u1.is_multiplicative or u2.is_multiplicative:
            reasons.append(ExclusionReason.QUADRATIC_TWIST)
    case = _case_name(t1, t2)
    rank = 2 + root_lattice(t1).rank + root_lattice(t2).rank
    detail = (f"c2 = {t1.euler + t2.euler}; rank(T) = {rank}, b2 = {t1.euler + t2.euler - 2}; "
              f"discriminant {d}")
    if reasons:
        return LatticeVerdict("excluded", case, tuple(reasons), detail)
    return LatticeVerdict("admissible", case, (), detail)


def _wild_check(t1, t2, p, v1) -> LatticeVerdict:
    reasons = []
    if not swan_must_vanish(t2, p):
        reasons.append(ExclusionReason.SWAN_FORCED)
    total = v1 + t2.euler
    if total % 12:
        reasons.append(ExclusionReason.RANK_MISMATCH)
    if t2.kind in ("In", "In*") and not _is_power_of(t2.n, p):
        reasons.append(ExclusionReason.DISCRIMINANT)
    case = _case_name(t1, t2)
    detail = f"c2 = {v1} + {t2.euler} = {total}"
    if t2.kind in ("In", "In*") and _is_power_of(t2.n, p):
        i = round(math.log(t2.n, p))
        detail += f"; n = {p}^{i}"
    if reasons:
        return LatticeVerdict("excluded", case, tuple(reasons), detail)
    return LatticeVerdict("admissible", case, (), detail)


# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RestrictionVerdict:
    status: str                              # "allowed" | "forbidden" | "not_applicable"
    detail: str = ""

    def to_dict(self) -> dict:
        return {"status": self.status, "detail": self.detail}


_MOD12_ALLOWED = {
    1: {"I0*"},
    7: {"III", "III*", "I0*"},
    5: {"II", "IV", "IV*", "II*", "I0*"},
    11: {"II", "III", "IV", "I0*", "IV*", "III*", "II*"},
}


def mu_p_fiber_restrictions(t: KodairaType, p: int) -> RestrictionVerdict:
    """Additive fiber types compatible with mu_p inside the generic automorphism scheme."""
    if not is_prime(p):
        raise DomainError(f"{p} is not prime")
    if p <= 3:
        return RestrictionVerdict("not_applicable", "only defined for p > 3")
    if not t.is_additive:
        return RestrictionVerdict("not_applicable", "only additive fibers are restricted")
    if t.kind == "In*":
        return RestrictionVerdict("forbidden", "In* with n >= 1 never occurs")
    allowed = _MOD12_ALLOWED[p % 12]
    if t.kind in allowed:
        return RestrictionVerdict("allowed", f"p = {p % 12} mod 12")
    return RestrictionVerdict("forbidden", f"p = {p % 12} mod 12 allows {sorted(allowed)}")


# ---------------------------------------------------------------------------

def prime_power_base(pn: int) -> tuple[int, int]:
    """(p, n) with pn = p^n; raises for non prime powers."""
    if pn < 2:
        raise DomainError(f"{pn} is not a prime power")
    for p in range(2, math.isqrt(pn) + 1):
        if pn % p == 0:
            n = 0
            m = pn
            while m % p == 0:
                m //= p
                n += 1
            if m != 1:
                raise DomainError(f"{pn} is not a prime power")
            return p, n
    return pn, 1


def fixed_locus_euler_options(t: KodairaType, pn: int) -> list[int]:
    """Possible Euler numbers of the fixed locus of mu_{p^n} on a fiber of type t."""
    if t.is_smooth:
        return [0]
    if t.kind == "II":
        opts = {2}
        if pn == 3:
            opts.add(3)
        if pn == 2:
            opts |= {3, 4}
        return sorted(opts)
    if t.kind == "III":
        return [3, 4] if pn == 2 else [3]
    return [t.euler]


@dataclass(frozen=True)
class LedgerVerdict:
    status: str                              # "consistent" | "inconsistent" | "not_applicable"
    assignments: tuple[tuple[int, ...], ...] = ()
    detail: str = ""

    def to_dict(self) -> dict:
        return {"status": self.status, "assignments": [list(a) for a in self.assignments],
                "detail": self.detail}


def ledger_for_types(types, c2: int, pn: int) -> LedgerVerdict:
    """Every choice of fixed-locus Euler numbers summing to c2."""
    prime_power_base(pn)
    options = [fixed_locus_euler_options(t, pn) for t in types]
    hits = tuple(combo for combo in itertools.product(*options) if sum(combo) == c2)
    if hits:
        return LedgerVerdict("consistent", hits, f"{len(hits)} assignment(s) sum to c2 = {c2}")
    return LedgerVerdict("inconsistent", (), f"no assignment sums to c2 = {c2}")


def fixed_point_ledger(report: SurfaceReport, pn: int) -> LedgerVerdict:
    p, _ = prime_power_base(pn)
    if p != report.p:
        raise DomainError(f"mu_{pn} does not live in characteristic {report.p}")
    if len(report.fibers) != 2:
        return LedgerVerdict("not_applicable",
                             detail=f"needs exactly two singular fibers, found {len(report.fibers)}")
    return ledger_for_types(report.types, report.c2, pn)
