import math

import pytest
from hypothesis import given, settings, strategies as st

from sendov import bounds, certify, claims
from sendov.certify import Box, bracket_constant, certify_positive, interval_eval, point_eval
from sendov.intervals import DomainError, Interval

# variable ranges on which each registered function is used
DOMAINS = {
    "a9": {"x": (0.01, 0.45)},
    "halfplane_R1": {"a": (0.4314, 0.51952)},
    "halfplane_R04": {"a": (0.5195, 0.9995)},
    "halfplane_R04_slope": {"a": (0.9995, 1.0)},
    "lemma38": {"x": (0.3, 1.0)},
    "lemma310_Y": {"a": (0.5, 0.95), "x": (0.4, 0.999)},
    "lambda_radius_R1": {"a": (0.4314, 0.51952)},
    "lambda_radius_R04": {"a": (0.5195, 1.0)},
}


def domain_of(fn_id):
    if fn_id in DOMAINS:
        return DOMAINS[fn_id]
    if fn_id.endswith("_gap"):
        return {"x": (0.4, 0.99)}
    return {"a": (0.5195, 0.8449)}


def test_registry_variables_are_known():
    assert claims.REGISTRY
    for fn in claims.REGISTRY.values():
        assert set(fn.variables) <= claims.VARIABLES


def test_lemma38_certified_and_refuted():
    ok = certify_positive("lemma38", {"x": Interval(0.4, 1.0)})
    assert ok.status == "certified"
    bad = certify_positive("lemma38", {"x": Interval(0.3, 1.0)})
    assert bad.status == "refuted"
    x = bad.witness["x"]
    assert 0.3 <= x < (3 - math.sqrt(5)) / 2
    assert abs(x - 0.35) < 0.02
    assert point_eval("lemma38", bad.witness).hi < 0


def test_positive_at_root_box_needs_one_box():
    cert = certify_positive("lemma38", {"x": Interval(0.9, 1.0)})
    assert cert.status == "certified" and cert.boxes == 1


def test_depth_starvation_is_inconclusive_not_a_crash():
    cert = certify_positive("a9", {"x": Interval(0.01, 0.4314)}, max_depth=1)
    assert cert.status == "inconclusive"
    certs = certify.run_all_claims(max_depth=4, ids=["C1", "C2", "C5"])
    assert any(c.status == "inconclusive" for c in certs)


def test_max_depth_limit():
    with pytest.raises(ValueError):
        certify_positive("lemma38", {"x": Interval(0.4, 1.0)}, max_depth=61)


def test_constant_brackets():
    a9 = bracket_constant("a9", "0.4314", "0.4315")
    assert a9.status == "certified"
    assert bracket_constant("a1_gap", "0.636", "0.637").status == "certified"
    assert bracket_constant("a2_gap", "0.723", "0.724").status == "certified"
    # a bracket that misses the constant is refuted, not certified
    assert bracket_constant("a1_gap", "0.62", "0.63").status == "refuted"


def test_constant_values():
    assert math.isclose(bounds.a1_closed(), 0.6368662396373497, rel_tol=1e-14)
    assert math.isclose(bounds.a2_closed(), 0.7230714254146415, rel_tol=1e-14)
    enc = certify.constant_enclosures()
    assert enc["a1"].contains(bounds.a1_closed()) and enc["a1"].width < 1e-13
    assert enc["a2"].contains(bounds.a2_closed()) and enc["a2"].width < 1e-13


def test_case_selection_flips_at_the_constants():
    a1, a2 = bounds.a1_closed(), bounds.a2_closed()
    assert bounds.v_index(a1 - 1e-6) == 7 and bounds.v_index(a1 + 1e-6) == 6
    assert bounds.vstar_index(a2 - 1e-6) == 7 and bounds.vstar_index(a2 + 1e-6) == 6


def test_contradiction_tail_piece_and_spot_value():
    hi = certify.constant_enclosures()["a2"].hi
    cert = certify_positive("contra_66", {"a": Interval(hi, 0.8449)}, claim_id="C6c")
    assert cert.status == "certified"
    assert bounds.contradiction_margin(0.7, 6, 6) > 0


def test_sign_change_diagnostic_above_0845():
    a = certify.contradiction_sign_change()
    assert 0.845 < a < 0.85
    assert bounds.contradiction_margin(a - 1e-6, 6, 6) > 0 > bounds.contradiction_margin(a + 1e-6, 6, 6)


def test_certificates_are_deterministic():
    one = certify.run_claim("C4").to_json()
    two = certify.run_claim("C4").to_json()
    assert one == two
    assert one["claim"] == "C4" and one["status"] == "certified"
    assert set(one) >= {"claim", "status", "boxes", "max_depth", "domain"}


def test_box_json_round_trip():
    box = Box.of({"a": Interval(0.5, 0.6), "x": Interval(0.4, 0.999)})
    assert Box.from_json(box.to_json()) == box
    with pytest.raises(ValueError):
        Box.of({"y": Interval(0, 1)})


@pytest.mark.parametrize("fn_id", sorted(claims.REGISTRY))
@settings(max_examples=15)
@given(data=st.data())
def test_enclosures_contain_point_values(fn_id, data):
    fn = claims.get(fn_id)
    dom = domain_of(fn_id)
    box = {}
    for v in fn.variables:
        lo, hi = dom[v]
        u = data.draw(st.floats(lo, hi))
        w = data.draw(st.floats(0, 1)) * (hi - lo) * 0.1
        box[v] = Interval(u, min(hi, u + w))
    try:
        enc = interval_eval(fn_id, box)
    except DomainError:
        return
    for _ in range(100):
        pt = {v: iv.lo + data.draw(st.floats(0, 1)) * iv.width for v, iv in box.items()}
        val = float(fn(pt))
        slack = 1e-11 * (1 + abs(val))
        assert enc.lo - slack <= val <= enc.hi + slack, (fn_id, pt, val, enc)


# regions around each function's sign change, so both outcomes occur
SIGN_REGIONS = {"lemma38": (0.2, 0.6), "a9": (0.3, 0.6), "contra_66": (0.82, 0.9)}


@pytest.mark.parametrize("fn_id", sorted(SIGN_REGIONS))
@settings(max_examples=25)
@given(data=st.data())
def test_refutations_carry_negative_witnesses(fn_id, data):
    (var,) = claims.get(fn_id).variables
    lo, hi = SIGN_REGIONS[fn_id]
    u = data.draw(st.floats(lo, hi - 0.01))
    w = data.draw(st.floats(0.005, hi - u))
    cert = certify_positive(fn_id, {var: Interval(u, u + w)}, max_depth=8)
    if cert.status == "refuted":
        assert point_eval(fn_id, cert.witness).hi < 0
