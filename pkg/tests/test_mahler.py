import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from sendov import mahler as M
from sendov.generate import generate_random_instance
from sendov.poly import Polynomial, from_roots

CHORDS = [2 * math.sin(math.pi * k / 9) for k in range(1, 9)]


# --- closed form and quadrature


@pytest.mark.parametrize("coeffs, expected", [
    ([-2, 1], 2.0),
    ([-0.5, 1], 1.0),
    (from_roots([2, 0.5], lead=3).coeffs, 6.0),
    ([5.0], 5.0),
])
def test_closed_form_values(coeffs, expected):
    assert M.mahler_closed_form(Polynomial(coeffs)) == pytest.approx(expected, rel=1e-12)


def test_closed_form_rejects_zero_polynomial():
    with pytest.raises(ValueError):
        M.mahler_closed_form(Polynomial([0.0]))


def test_quadrature_root_off_circle_is_exact():
    rep = M.mahler_quadrature(Polynomial([-2, 1]), 4096)
    assert rep.abs_diff <= 1e-10 and rep.patched == 0


@pytest.mark.parametrize("p, nodes", [
    (Polynomial([-1, 1]), 4096),
    (Polynomial([-1] + [0] * 8 + [1]), 8192),
])
def test_quadrature_roots_on_circle_patched(p, nodes):
    rep = M.mahler_quadrature(p, nodes)
    assert rep.patched >= 1
    assert rep.abs_diff <= 1e-3


@pytest.mark.parametrize("nodes", [32, 100, 4095])
def test_quadrature_rejects_bad_node_counts(nodes):
    with pytest.raises(ValueError):
        M.log_mean_quadrature(Polynomial([-2, 1]), nodes)


def test_quadrature_all_nodes_singular():
    with pytest.raises(ArithmeticError):
        M.log_mean_quadrature(lambda z: np.zeros_like(z), 64)


def test_quadrature_converges_when_roots_avoid_circle():
    rng = np.random.default_rng(3)
    for _ in range(5):
        rad = rng.uniform(0.2, 0.8, 6) * rng.choice([1, 3], 6)
        roots = rad * np.exp(2j * np.pi * rng.random(6))
        p = from_roots(roots)
        coarse, _ = M.log_mean_quadrature(p, 1024)
        fine, _ = M.log_mean_quadrature(p, 2048)
        assert abs(coarse - fine) < 1e-8
        assert math.exp(fine) == pytest.approx(M.mahler_closed_form(p), rel=1e-8)


ROOT = st.one_of(
    st.just(0j),
    st.builds(lambda r, t: r * complex(math.cos(t), math.sin(t)),
              st.floats(1e-3, 3.0), st.floats(0, 2 * math.pi)),
)


@given(st.lists(ROOT, min_size=1, max_size=5), st.lists(ROOT, min_size=1, max_size=5))
def test_measure_is_multiplicative(r1, r2):
    p, q = from_roots(r1, lead=2.0), from_roots(r2, lead=0.5)
    pq = from_roots(list(r1) + list(r2), lead=1.0)
    assert M.mahler_closed_form(pq) == pytest.approx(
        M.mahler_closed_form(p) * M.mahler_closed_form(q), rel=1e-6)


# --- Szego composition and Bruijn-Springer


def test_szego_known_values():
    out = M.szego_compose(Polynomial([1, 4, 6]), Polynomial([1, 2, 1]))
    assert np.allclose(out.coeffs, [1, 4, 6])


@given(st.integers(1, 10), st.integers(0, 2**32 - 1))
def test_szego_binomial_is_identity(n, seed):
    rng = np.random.default_rng(seed)
    q = Polynomial(rng.normal(size=n + 1) + 1j * rng.normal(size=n + 1))
    ones = Polynomial([math.comb(n, k) for k in range(n + 1)])
    assert np.allclose(M.szego_compose(q, ones).coeffs, q.coeffs, rtol=1e-12, atol=1e-12)


def test_szego_monomial():
    n = 5
    zn = Polynomial([0] * n + [1])
    q = Polynomial([1, 2, 3, 4, 5, 6.0])
    assert np.allclose(M.szego_compose(q, zn).coeffs, [0] * n + [6.0])


def test_szego_degree_mismatch_needs_n():
    with pytest.raises(ValueError):
        M.szego_compose(Polynomial([1, 1]), Polynomial([1, 2, 1]))
    out = M.szego_compose(Polynomial([1, 1]), Polynomial([1, 2, 1]), n=2)
    assert out.degree <= 1


def test_bruijn_springer_equalities():
    n = 4
    ones = Polynomial([math.comb(n, k) for k in range(n + 1)])
    q = from_roots([0.3, 2.0, -1.5j, 0.7 + 0.1j])
    res = M.bruijn_springer_check(q, ones)
    assert res.hypothesis_held and res.passed
    zn = Polynomial([0] * n + [1])
    res = M.bruijn_springer_check(zn, zn)
    assert res.passed and abs(res.residual) <= 1e-12


def test_bruijn_springer_vacuous_when_top_vanishes():
    res = M.bruijn_springer_check(Polynomial([1, 1]), Polynomial([1, 2, 1]), n=2)
    assert not res.hypothesis_held


@given(st.integers(1, 10), st.integers(0, 2**32 - 1))
def test_bruijn_springer_random_pairs(d, seed):
    rng = np.random.default_rng(seed)
    c = rng.normal(size=(2, d + 1)) + 1j * rng.normal(size=(2, d + 1))
    res = M.bruijn_springer_check(Polynomial(c[0]), Polynomial(c[1]))
    assert res.hypothesis_held and res.passed


# --- measure identities for an instance


def test_lemma_4_1_roots_of_unity(rou):
    assert M.lemma_4_1_formula(rou, 1.0) == pytest.approx(9.0)
    res = M.lemma_4_1_check(rou, 1.0)
    assert res.passed and "near_circle=True" in res.detail


def test_lemma_4_1_large_radius(rou):
    rho = 2.0 + 1e-3
    assert M.lemma_4_1_formula(rou, rho) == pytest.approx(9 * rho**8)
    assert M.lemma_4_1_check(rou, rho).passed


def test_lemma_4_1_rejects_nonpositive_radius(rou):
    with pytest.raises(ValueError):
        M.lemma_4_1_check(rou, 0.0)


@pytest.mark.parametrize("index", range(6))
@pytest.mark.parametrize("rho", [0.4, 1.0, 1.7])
def test_lemma_4_1_random_instances(index, rho):
    inst = generate_random_instance(11, index)
    res = M.lemma_4_1_check(inst, rho)
    assert res.passed, res.detail


def test_lemma_4_2_degree_nine_unit_radius():
    formula, near = M.lemma_4_2_formula(9, 1.0, 1.0)
    assert formula == pytest.approx(math.prod(CHORDS[1:7]) / 9, rel=1e-14)
    assert near == 0
    assert M.lemma_4_2_check(9, 1.0, 1.0).passed


@given(st.integers(2, 12), st.floats(0.05, 2.0), st.floats(-2.0, 2.0))
def test_lemma_4_2_random(n, rho, m):
    res = M.lemma_4_2_check(n, rho, m)
    assert res.passed, res.detail


@pytest.mark.parametrize("m", [1.0, 0.0])
def test_decomposition_roots_of_unity(rou, m):
    res = M.szego_decomposition_check(rou, 1.0, m)
    assert res.passed and res.residual <= 1e-12


@given(st.integers(0, 10_000), st.floats(0.05, 2.0), st.floats(-2.0, 2.0))
def test_decomposition_random(index, rho, m):
    res = M.szego_decomposition_check(generate_random_instance(5, index), rho, m)
    assert res.passed, res.detail


def test_theorem3_roots_of_unity_equality(rou):
    lhs, rhs, near = M.theorem3_sides(rou, 1.0, 1.0)
    assert lhs == pytest.approx(rhs, rel=1e-12)
    assert near > 0
    assert M.theorem3_check(rou, 1.0, 1.0).passed


def test_theorem3_empty_products(golden):
    # every r_k and rho_j below the threshold and every chord factor below 1
    lhs, rhs, _ = M.theorem3_sides(golden, 10.0, 2.0)
    assert lhs == 1.0
    assert M.theorem3_check(golden, 10.0, 2.0).passed


@given(st.integers(3, 12), st.integers(0, 10_000), st.floats(0.05, 2.0), st.floats(-2.0, 2.0))
def test_theorem3_random(n, index, rho, m):
    res = M.theorem3_check(generate_random_instance(9, index, n), rho, m)
    assert res.passed, res.detail


def test_lemma_4_2_root_just_off_circle():
    # roots of the weighted sum at modulus 1/0.99999: slow trapezoid convergence
    res = M.lemma_4_2_check(6, 0.99999, 0.0)
    assert res.passed and "near_circle=True" in res.detail


def test_near_circle_band_scales_with_nodes():
    assert M.near_circle([1 + 1e-3], 16384)
    assert not M.near_circle([1.1], 16384)
    assert M.near_circle([1.1], 64)
    assert not M.near_circle([0.5, 2.0], 16384)


def test_closed_form_multiple_root_on_circle():
    assert M.mahler_closed_form(from_roots([1, 1, 1], lead=2.0)) == pytest.approx(2.0, rel=1e-12)
