import json
import math

import jsonschema
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import pure_states
from tristeer.kernel import tensor
from tristeer.states import gghz, ghz, make_state, one_param_w, projector, w_state
from tristeer.steering import (
    G1, G2, INEQUALITIES, INEQUALITY_SCHEMA, W1, W2, ConsistencyError, Scenario, SteeringInequality,
    evaluate, evaluate_terms, expectation, get_inequality, resolve, violation_range,
)

ALL = [G1, G2, W1, W2]


def g1_closed_form(theta):
    # Z-pair terms give -2/3, the four XXX-type terms give -(4/3) sin 2theta
    return 1.0 + 0.1547 - 2.0 / 3.0 - (4.0 / 3.0) * math.sin(2 * theta)


def g2_closed_form(theta):
    return -3 * 0.183 - 4 * 0.258 * math.sin(2 * theta) + 1.0


def test_expectations_on_ghz_family():
    assert expectation(ghz(), "IZZ") == pytest.approx(1.0)
    for theta in (0.3, 0.6, 1.1):
        assert expectation(gghz(theta), "XXX") == pytest.approx(math.sin(2 * theta))
        assert expectation(gghz(theta), "ZII") == pytest.approx(math.cos(2 * theta))


def test_expectations_on_w():
    assert expectation(w_state(), "IIZ") == pytest.approx(1.0 / 3.0)
    assert expectation(w_state(), "XXI") == pytest.approx(2.0 / 3.0)
    assert expectation(w_state(), "ZZZ") == pytest.approx(-1.0)


@pytest.mark.parametrize("theta", np.linspace(0.01, math.pi / 2 - 0.01, 50))
def test_g1_matches_closed_form(theta):
    assert evaluate(G1, gghz(theta)) == pytest.approx(g1_closed_form(theta), abs=1e-12)


@pytest.mark.parametrize("theta", np.linspace(0.01, math.pi / 2 - 0.01, 17))
def test_g2_matches_closed_form(theta):
    assert evaluate(G2, gghz(theta)) == pytest.approx(g2_closed_form(theta), abs=1e-12)


def test_optimal_values_at_target_states():
    assert evaluate(G1, ghz()) == pytest.approx(-0.8453, abs=1e-4)
    assert evaluate(G2, ghz()) == pytest.approx(-0.581, abs=1e-3)
    assert evaluate(W1, w_state()) == pytest.approx(-0.7595, abs=1e-4)
    assert evaluate(W2, w_state()) == pytest.approx(-0.48037, abs=1e-5)


@pytest.mark.parametrize("ineq", ALL, ids=lambda i: i.name)
def test_product_state_does_not_violate(ineq):
    e = np.zeros(8)
    e[0] = 1
    assert evaluate(ineq, projector(e)) >= 0.0


@pytest.mark.parametrize("ineq", ALL, ids=lambda i: i.name)
def test_maximally_mixed_state_gives_constant(ineq):
    assert evaluate(ineq, np.eye(8) / 8) == pytest.approx(ineq.constant, abs=1e-12)


@given(pure_states(), pure_states(), st.floats(0.0, 1.0), st.sampled_from(ALL))
@settings(max_examples=40)
def test_affine_in_state_and_terms_cross_check(a, b, lam, ineq):
    mix = lam * a + (1 - lam) * b
    expected = lam * evaluate(ineq, a) + (1 - lam) * evaluate(ineq, b)
    assert evaluate(ineq, mix) == pytest.approx(expected, abs=1e-12)
    assert evaluate_terms(ineq, mix) == pytest.approx(evaluate(ineq, mix), abs=1e-12)


def test_term_counts_and_scenarios():
    assert [len(i.terms) for i in ALL] == [7, 7, 19, 19]
    assert G1.scenario is W1.scenario is Scenario.ONE_TO_TWO
    assert G2.scenario is W2.scenario is Scenario.TWO_TO_ONE


def test_resolve_and_alternative_assignment():
    assert resolve(("A1", "B2", "Y")) == "XYY"
    assert resolve(("A1", "I", "I"), {"A1": "Z"}) == "ZII"
    swapped = {"A1": "Y", "A2": "X"}
    assert evaluate(G1, ghz(), swapped) != pytest.approx(evaluate(G1, ghz()))
    with pytest.raises(ValueError):
        resolve(("A1", "I", "I"), {"A1": "Q"})


def test_rejects_trust_violations():
    with pytest.raises(ValueError):
        SteeringInequality("bad", 0.0, ((1.0, ("A1", "B1", "Z")),), Scenario.ONE_TO_TWO)
    with pytest.raises(ValueError):
        SteeringInequality("bad", 0.0, ((1.0, ("A1", "X", "Z")),), Scenario.TWO_TO_ONE)
    with pytest.raises(ValueError):
        SteeringInequality("bad", 0.0, ((1.0, ("X", "I", "Z")),), Scenario.ONE_TO_TWO)


@pytest.mark.parametrize("ineq", ALL, ids=lambda i: i.name)
def test_json_round_trip_and_schema(ineq):
    data = json.loads(ineq.to_json())
    jsonschema.validate(data, INEQUALITY_SCHEMA)
    back = SteeringInequality.from_json(ineq.to_json())
    assert back == ineq
    assert evaluate(back, ghz()) == pytest.approx(evaluate(ineq, ghz()), abs=0)


def test_schema_rejects_bad_slot():
    data = G1.to_dict()
    data["terms"][0]["ops"] = ["B1", "I", "Z"]
    with pytest.raises(jsonschema.ValidationError):
        jsonschema.validate(data, INEQUALITY_SCHEMA)


def test_lookup():
    assert get_inequality("G1") is G1
    assert set(INEQUALITIES) == {"g1", "g2", "w1", "w2"}
    with pytest.raises(ValueError):
        get_inequality("g3")


def test_g1_violation_window():
    lo, hi = violation_range(G1, "gghz", "theta", 0.01, math.pi / 4)
    assert lo == pytest.approx(math.asin(0.4880333 * 0.75) / 2, abs=1e-4)
    assert hi == math.pi / 4


def test_violation_range_none_without_sign_change():
    # always violated on the window: no boundary
    assert violation_range(G1, "gghz", "theta", 0.4, 0.7) is None
    # never violated
    assert violation_range(G1, "gghz", "theta", 0.01, 0.1) is None


def test_w2_violation_window_on_one_param_family():
    lo, hi = violation_range(W2, "w1p", "d0", 0.01, 1 / math.sqrt(3))
    assert hi == pytest.approx(1 / math.sqrt(3))
    assert evaluate(W2, one_param_w(lo + 1e-3)) < 0 < evaluate(W2, one_param_w(lo - 1e-3))


def test_imaginary_expectation_raises():
    rho = np.zeros((8, 8), dtype=complex)
    rho[0, 1] = 1.0  # not Hermitian, <XII> picks up i
    with pytest.raises(ConsistencyError):
        expectation(rho + 1j * rho, "IIY")
    with pytest.raises(ValueError):
        expectation(ghz(), "XX")


def test_wclass_family_values():
    rho = make_state("wclass", {"c0": 0.3, "c1": 0.5})
    assert evaluate(W1, rho) == pytest.approx(evaluate_terms(W1, rho), abs=1e-13)
