import itertools

import pytest

from kodaira.errors import DomainError
from kodaira.invariants import (analyze, fixed_point_ledger, ledger_for_types, lattice_check,
                                mu_p_fiber_restrictions)
from kodaira.modelio import parse_model
from kodaira.tate import KodairaType
from kodaira.twists import frobenius_pullback

T = KodairaType.parse


def test_analyze_two_fiber_surface():
    report = analyze(parse_model("p=5\na6=t\n"))
    assert [str(t) for t in report.types] == ["II", "II*"]
    assert (report.c2, report.chi, report.isotrivial) == (12, 1, True)


def test_analyze_wild_surface():
    report = analyze(parse_model("p=3\na2=1\na6=t^9\n"))
    assert [(str(f.type), f.swan) for f in report.fibers] == [("I9", 0), ("II", 1)]
    assert report.c2 == 12 and not report.isotrivial


def test_lattice_check_examples():
    assert lattice_check(T("III"), T("II*"), 5).status == "excluded"
    assert lattice_check(T("I0*"), T("I0*"), 2).status == "excluded"
    assert lattice_check(T("II"), T("II*"), 5).admissible
    assert lattice_check(T("II*"), T("II"), 7).admissible
    assert lattice_check(T("I1"), T("I11"), 5).status == "not_applicable"
    with pytest.raises(DomainError):
        lattice_check(T("II"), T("II*"), 4)


def _tame_pairs(p):
    pairs = {("II", "II*"): p not in (2, 3), ("III", "III*"): p != 2,
             ("IV", "IV*"): p != 3, ("I0*", "I0*"): p != 2}
    return {frozenset(k) for k, ok in pairs.items() if ok}


def _wild_pairs(p, limit):
    out = set()
    if p == 3:
        out.add(frozenset(["II", "III*"]))
        for k in range(1, 4):
            if 3 ** (2 * k) <= limit:
                out.add(frozenset(["II", f"I{3 ** (2 * k)}"]))
            if 3 ** (2 * k - 1) <= limit:
                out.add(frozenset(["II", f"I{3 ** (2 * k - 1)}*"]))
    if p == 2:
        out |= {frozenset(["II", "IV*"]), frozenset(["III", "IV*"])}
        for k in range(1, 4):
            if 2 ** (2 * k + 1) <= limit:
                out |= {frozenset(["II", f"I{2 ** (2 * k + 1)}"]),
                        frozenset(["III", f"I{2 ** (2 * k + 1)}"])}
    return out


LIMIT = 90
SINGULAR = [T(s) for s in ("II", "III", "IV", "I0*", "IV*", "III*", "II*")] + \
    [KodairaType("In", n) for n in range(1, LIMIT + 1)] + \
    [KodairaType("In*", n) for n in range(1, LIMIT + 1)]


@pytest.mark.parametrize("p", [2, 3, 5, 7, 13])
def test_lattice_check_matches_the_classification(p):
    expected = _tame_pairs(p) | _wild_pairs(p, LIMIT)
    admitted = set()
    for t1, t2 in itertools.combinations_with_replacement(SINGULAR, 2):
        if lattice_check(t1, t2, p).admissible:
            admitted.add(frozenset([str(t1), str(t2)]))
        assert lattice_check(t1, t2, p).status == lattice_check(t2, t1, p).status
    assert admitted == expected


def test_mu_p_restrictions():
    assert mu_p_fiber_restrictions(T("I1*"), 13).status == "forbidden"
    assert mu_p_fiber_restrictions(T("III"), 7).status == "allowed"
    assert mu_p_fiber_restrictions(T("II"), 7).status == "forbidden"
    assert mu_p_fiber_restrictions(T("I0*"), 13).status == "allowed"
    assert mu_p_fiber_restrictions(T("I5"), 13).status == "not_applicable"
    assert mu_p_fiber_restrictions(T("II"), 3).status == "not_applicable"


def test_ledger_examples():
    report = analyze(parse_model("p=5\na6=t\n"))
    verdict = fixed_point_ledger(report, 5)
    assert verdict.status == "consistent" and verdict.assignments == ((2, 10),)
    assert ledger_for_types([T("II"), T("II")], 12, 5).status == "inconsistent"
    with pytest.raises(DomainError):
        fixed_point_ledger(report, 3)


def test_ledger_ignores_smooth_fibers():
    with_smooth = ledger_for_types([T("II"), T("II*"), T("I0")], 12, 5)
    assert with_smooth.status == ledger_for_types([T("II"), T("II*")], 12, 5).status


@pytest.mark.parametrize("text", ["p=5\na1=1\na6=t\n", "p=3\na1=1\na6=t\n",
                                  "p=2\na1=1\na6=t\n"])
@pytest.mark.parametrize("k", [1, 2])
def test_frobenius_pullback_scales_multiplicative_fibers(text, k):
    # poles of j pull back with order multiplied by p^k
    m = parse_model(text)
    before = sorted(f.type.n for f in analyze(m).fibers if f.type.is_multiplicative)
    after = sorted(f.type.n for f in analyze(frobenius_pullback(m, k)).fibers
                   if f.type.is_multiplicative)
    assert after == [n * m.p ** k for n in before]


@pytest.mark.parametrize("k", [1, 2, 3])
def test_frobenius_pullback_of_tame_additive_fiber(k):
    # tame: the minimal v(delta) of the pullback is p^k v(delta) reduced mod 12
    m = parse_model("p=5\na1=1\na6=t\n")
    (at_inf,) = [f for f in analyze(m).fibers if f.place.is_infinite]
    (pulled,) = [f for f in analyze(frobenius_pullback(m, k)).fibers if f.place.is_infinite]
    assert pulled.vDelta == at_inf.vDelta * 5 ** k % 12
