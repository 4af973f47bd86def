import cmath
import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from sendov import halfplane as H
from sendov.instance import build_instance

params = st.tuples(st.floats(0.02, 0.98), st.floats(0.01, 0.99)).map(
    lambda t: H.GParams(t[0], t[0] * t[1]))


def test_gparams_validation():
    with pytest.raises(ValueError):
        H.GParams(0.5, 0.6)
    with pytest.raises(ValueError):
        H.GParams(1.0, 0.2)


def test_g_examples():
    p = H.GParams(0.8, 0.3)
    assert H.g_func(p, 1.0) == 1.0
    x0 = 133 / 208
    assert math.isclose(H.g_func(p, x0), 2.875, rel_tol=1e-14)
    assert abs(H.g_func(p, 0.5) - H.g_from_cos_beta0(p, 0.5)) <= 1e-12
    assert abs(H.g_func(p, 0.5) - H.g_from_bisector(p, 0.5)) <= 1e-12
    assert H.f_func(p, -0.5) == -H.g_func(p, 0.5)
    with pytest.raises(ValueError):
        H.g_func(p, 0.2)


def test_closed_form_argmax_examples():
    x0, phi0, gmax = H.g_argmax_closed_form(H.GParams(0.8, 0.3))
    assert math.isclose(x0, 1.33 / 2.08, rel_tol=1e-14)
    assert math.isclose(phi0, 0.55 / 1.3, rel_tol=1e-14)
    assert 0.25 <= phi0 <= 0.55
    assert gmax == pytest.approx(2.875, rel=1e-15)


def test_numeric_max_examples():
    x, g = H.g_max_numeric(H.GParams(0.8, 0.3))
    assert abs(x - 0.6394230769) < 1e-8 and abs(g - 2.875) < 1e-8
    # dense grid oracle
    p = H.GParams(0.8, 0.3)
    xs = np.linspace(p.lo, 1, 10**6)
    vals = [H._g_unchecked(0.8, 0.3, v) for v in xs[::1000]]
    assert max(vals) <= g + 1e-12
    _, g2 = H.g_max_numeric(H.GParams(0.5, 0.1))
    assert abs(g2 - 4.2) < 1e-8


@given(params)
def test_closed_form_argmax_invariants(p):
    x0, phi0, gmax = H.g_argmax_closed_form(p)
    a, r = p.a, p.r
    assert p.lo - 1e-12 <= x0 <= 1 + 1e-12
    assert (a - r) ** 2 - 1e-12 <= phi0 <= a * a - r * r + 1e-12
    d, e1 = 1 - r * r, a * a - 1
    val = d * phi0**2 - 2 * (e1 + d) * phi0 + (e1 + d) ** 2
    assert abs(val) <= 1e-12 * max(1.0, (e1 + d) ** 2)


@given(params)
def test_numeric_max_matches_closed_form(p):
    assert H.g_max_check(p).passed


@given(params)
def test_g_prime_changes_sign_once(p):
    xs = np.linspace(p.lo, 1, 1002)[1:-1]
    signs = np.sign([H.g_prime(p, x) for x in xs])
    signs = signs[signs != 0]
    assert signs[0] > 0 and signs[-1] < 0
    assert np.count_nonzero(np.diff(signs)) == 1


def test_quartic_examples():
    assert H.quartic_identity_check(0.8, 0.3, 0.4).passed
    _, phi0, _ = H.g_argmax_closed_form(H.GParams(0.8, 0.3))
    q = H.quartic_parts(0.8, 0.3, phi0)
    assert abs(q["quartic"]) < 1e-14


@given(st.floats(0, 1), st.floats(0, 1), st.floats(0, 2))
def test_quartic_identity_everywhere(a, r, phi):
    res = H.quartic_identity_check(a, r, phi)
    assert res.residual <= 1e-9


def test_bisector_examples():
    plus, minus = H.bisector_point(1)
    assert abs(plus - complex(0.5, math.sqrt(3) / 2)) < 1e-15
    assert abs(minus - complex(0.5, -math.sqrt(3) / 2)) < 1e-15
    assert H.bisector_point(2) == (1, 1)
    for bad in (0, 2.5):
        with pytest.raises(ValueError):
            H.bisector_point(bad)


@given(st.floats(1e-3, 2), st.floats(0, 2 * math.pi))
def test_bisector_points_are_equidistant(m, t):
    z0 = m * cmath.exp(1j * t)
    assert H.bisector_identity_check(z0).passed


@given(st.floats(0.05, 0.95), st.floats(0.01, 0.99), st.floats(0, math.pi))
def test_cos_beta0_is_the_plus_branch(a, rr, alpha):
    r = a * rr
    z0 = a + r * cmath.exp(1j * alpha)
    plus, _ = H.bisector_point(z0)
    assert abs(H.cos_beta0(a, r, alpha) - plus.real) <= 1e-12


def test_theorem1_bound_examples():
    assert math.isclose(H.theorem1_lower_bound(0.8, 0.2), 0.125)
    assert math.isclose(H.theorem1_lower_bound(0.5, 0.1), 0.04)
    assert abs(H.theorem1_lower_bound(0.6, 1e-12) - 0.3) < 1e-11
    lams = np.linspace(0.01, 0.59, 200)
    vals = [H.theorem1_lower_bound(0.6, l) for l in lams]
    assert np.all(np.diff(vals) < 0)
    with pytest.raises(ValueError):
        H.theorem1_lower_bound(0.5, 0.6)


def test_verify_theorem1_gates(rou, golden):
    rep = H.verify_theorem1(rou, 0.3)
    assert not rep.hypothesis_held and rep.to_check().vacuous
    rep = H.verify_theorem1(golden, 0.2)
    assert not rep.hypothesis_held
    assert not rep.conjecture_critical


def test_theorem1_witness_rule():
    crit = [0.2 + 0.1j, -0.4, 0.1j]
    assert H.theorem1_witness(crit, 0.125) == 0.2 + 0.1j
    assert H.theorem1_witness(crit, 0.3) is None
    rep = H.Theorem1Report(0.2, 0.3, None, True, "no witness")
    assert rep.conjecture_critical and rep.to_check().conjecture_critical


def test_lemma_2_1_examples(rou):
    assert H.lemma_2_1_check(rou, 0.3).vacuous
    lam = math.sin(math.pi / 9)
    assert math.isclose(1 - (1 - lam) ** 9, 1 - 0.657979856674331**9, rel_tol=1e-12)
    with pytest.raises(ValueError):
        H.lemma_2_1_check(rou, 0.3, nodes=100)


def test_lemma_2_1_evaluates_when_gate_holds():
    # off the disk the gate can open; the sampled minimum is then compared
    inst = build_instance(0.5, [2.0 * complex(math.cos(t), math.sin(t)) for t in np.linspace(0.3, 6, 8)],
                          check_disk=False)
    assert inst.rho[0] > 1
    res = H.lemma_2_1_check(inst, 0.2)
    assert res.hypothesis_held and res.passed and "not certified" in res.detail
