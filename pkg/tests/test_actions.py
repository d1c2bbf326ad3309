import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kodaira.actions import (Coaction, Derivation, MalformedCoactionError, apply_derivation,
                             classify_p_closed, coaction_group_law, induced_derivation,
                             parse_coaction, parse_polynomial, tangency_residual, verify_coaction,
                             zero_scheme_margin)
from kodaira.catalog import CATALOG, entry_by_id
from kodaira.errors import DomainError, NotApplicableError
from kodaira.fields import PrimeField
from kodaira.modelio import parse_model
from kodaira.multivariate import PolyRing
from kodaira.rational import Place, RationalFunction
from kodaira.weierstrass import CoordinateChange, apply_change

# the printed mu_3 action on x^3 + t x + t and the deliberately corrupted alpha_4 action
FAILING = {"mu3-II-IIIstar", "alpha4-plane-corrupted"}
WITH_ACTION = [e for e in CATALOG if e.coaction]


def load(entry_id):
    e = entry_by_id(entry_id)
    m = parse_model(e.model)
    return m, parse_coaction(e.coaction, m.field)


@pytest.mark.parametrize("entry", WITH_ACTION, ids=lambda e: e.id)
def test_catalog_coactions(entry):
    m, co = load(entry.id)
    verdict = verify_coaction(m, co)
    assert verdict.ok == (entry.id not in FAILING)
    if not verdict.ok:
        assert verdict.witness and verdict.residual


def test_failing_verdict_names_a_residual_term():
    m, co = load("alpha4-plane-corrupted")
    assert verify_coaction(m, co).to_dict()["status"] == "fails"
    assert coaction_group_law(co).coordinate == "t"



def test_identity_coaction_verifies():
    m = parse_model("p=5\na6=t\n")
    co = parse_coaction("relation=a^5=1\n", m.field)
    assert verify_coaction(m, co).ok and coaction_group_law(co).ok


def test_group_law_failure_names_the_coordinate():
    F = PrimeField(5)
    co = Coaction(F, "multiplicative", 5, "affine", {"x": "a^2*x + a - 1"})
    verdict = coaction_group_law(co)
    assert not verdict.ok and verdict.coordinate == "x"


def test_induced_derivation_of_mu_action_is_multiplicative():
    m, co = load("weights-II-IIstar-p5")
    D = induced_derivation(co)
    assert D.format() == "(t)*d/dt + (2*x)*d/dx + (3*y)*d/dy"
    assert classify_p_closed(D, m).kind == "multiplicative"


def test_translation_of_a_constant_surface_is_additive():
    m = parse_model("p=5\na4=1\n")
    co = parse_coaction("relation=a^5=0\nact.t=t+a\n", m.field)
    assert verify_coaction(m, co).ok
    assert classify_p_closed(induced_derivation(co), m).kind == "additive"


SCALABLE = ["weights-II-IIstar-p5", "weights-III-IIIstar-p5", "weights-IV-IVstar-p7",
            "weights-I0star-I0star-p7"]


@settings(max_examples=30)
@given(st.sampled_from(SCALABLE), st.integers(1, 4))
def test_weight_action_survives_constant_scaling(entry_id, u):
    # x -> u^2 x, y -> u^3 y commutes with the diagonal action
    m, co = load(entry_id)
    scaled = apply_change(m, CoordinateChange.of(m.field, u=RationalFunction.from_int(m.field, u)))
    assert verify_coaction(scaled, co).ok


@settings(max_examples=20)
@given(st.integers(0, 2))
def test_translation_action_survives_constant_shift(c):
    m, co = load("Ga-IIstar-p3")
    shifted = apply_change(m, CoordinateChange.of(m.field, r=RationalFunction.from_int(m.field, c)))
    assert verify_coaction(shifted, co).ok


def test_wrong_weight_on_t_is_caught():
    m = parse_model("p=5\na6=t\n")
    co = parse_coaction("relation=a^5=1\nact.t=a^5*t\nact.x=a^2*x\nact.y=a^3*y\n", m.field)
    assert not verify_coaction(m, co).ok


@st.composite
def affine_polys(draw, ring):
    terms = draw(st.lists(st.tuples(st.integers(0, 4), st.integers(0, 3), st.integers(0, 3),
                                    st.integers(1, ring.field.p - 1)), max_size=5))
    text = " + ".join(f"{c}*t^{i}*x^{j}*y^{k}" for i, j, k, c in terms) or "0"
    return parse_polynomial(text, ring)


F5 = PrimeField(5)
RING = PolyRing(F5, ("t", "x", "y"))


@settings(max_examples=100)
@given(affine_polys(RING), affine_polys(RING), affine_polys(RING), affine_polys(RING))
def test_derivations_kill_pth_powers(f, dt_seed, dx, dy):
    dt = parse_polynomial("t^2 + 3*t", RING)
    D = Derivation(RING, {"t": dt, "x": dx, "y": dy})
    assert apply_derivation(D, f ** 5).is_zero()
    assert apply_derivation(D, f * f) == apply_derivation(D, f) * f * 2


def test_margin_of_the_weighted_vector_field():
    m = parse_model("p=5\na6=t\n")
    D = Derivation.from_strings(m.field, t="t", x="2*x", y="3*y")
    assert tangency_residual(D, m).is_zero()
    assert zero_scheme_margin(D, m).c2 == 12


def test_margin_preconditions():
    m = parse_model("p=5\na6=t\n")
    with pytest.raises(DomainError):
        zero_scheme_margin(Derivation.from_strings(m.field, t="1"), m)
    with pytest.raises(NotApplicableError):
        zero_scheme_margin(Derivation.from_strings(m.field, x="2*y", y="3*x^2"), m)
    D = Derivation.from_strings(m.field, t="t", x="2*x", y="3*y")
    with pytest.raises(NotApplicableError):
        zero_scheme_margin(D, m, Place.at(m.field, 1))
    with pytest.raises(DomainError):
        zero_scheme_margin(D, m, sections=0)


@pytest.mark.parametrize("text", [
    "act.x=x\n",                               # no relation
    "relation=a^5=1\nfoo=1\n",
    "relation=a^5=2\n",
    "relation=a^5=1\nact.z=z\n",              # z is not an affine coordinate
    "relation=a^5=1\nact.x=x+1\n",            # not the identity at a = 1
    "relation=a^5=1\nact.x=x+*a\n",
    "relation=a^5=1\nact.x=x\nact.x=x\n",
])
def test_malformed_coactions(text):
    with pytest.raises(MalformedCoactionError) as info:
        parse_coaction(text, F5)
    assert info.value.code == "MALFORMED_COACTION"
