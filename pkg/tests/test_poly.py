import numpy as np
import pytest
from hypothesis import given, strategies as st

from sendov.poly import (
    Polynomial, RootFindError, antiderivative_zero_at, compose_linear, deflate, derivative,
    evaluate, find_roots, from_roots, merge_clusters, roots_batch, scaled_residual,
)


def match_distance(found, expected):
    """Largest distance in a greedy pairing of two multisets."""
    rest = list(expected)
    worst = 0.0
    for z in found:
        k = int(np.argmin([abs(z - w) for w in rest]))
        worst = max(worst, abs(z - rest.pop(k)))
    return worst


def test_from_roots_examples():
    assert np.allclose(from_roots([1, -1]).coeffs, [-1, 0, 1])
    assert np.array_equal(from_roots([0, 0, 0]).coeffs, [0, 0, 0, 1])
    p = from_roots(np.exp(2j * np.pi * np.arange(9) / 9))
    target = np.zeros(10, dtype=complex)
    target[0], target[9] = -1, 1
    assert np.max(np.abs(p.coeffs - target)) <= 1e-14
    z = np.random.default_rng(0).normal(size=20) + 1j * np.random.default_rng(1).normal(size=20)
    assert np.allclose(p(z), z**9 - 1, rtol=1e-12, atol=1e-12)


def test_from_roots_rejects_zero_lead():
    with pytest.raises(ValueError):
        from_roots([1, 2], lead=0)


def test_derivative_examples():
    assert np.allclose(derivative(from_roots(np.exp(2j * np.pi * np.arange(9) / 9))).coeffs,
                       [0] * 8 + [9], atol=1e-13)
    assert derivative(Polynomial([5])).is_zero
    dp = derivative(from_roots([0.5] + [-0.5] * 8))
    expected = from_roots([-0.5] * 7 + [7 / 18], lead=9)
    assert np.allclose(dp.coeffs, expected.coeffs, atol=1e-13)


def test_evaluate_examples():
    p = Polynomial([-1, 0, 1])
    assert evaluate(p, 1j) == -2
    assert abs(from_roots(np.exp(2j * np.pi * np.arange(9) / 9))(1.0)) < 1e-14


@given(st.lists(st.complex_numbers(max_magnitude=2, allow_nan=False, allow_infinity=False),
                min_size=1, max_size=12),
       st.complex_numbers(max_magnitude=2, allow_nan=False, allow_infinity=False))
def test_horner_matches_power_sum(coeffs, z):
    p = Polynomial(coeffs)
    naive = sum(c * z**k for k, c in enumerate(p.coeffs))
    scale = sum(abs(c) * abs(z) ** k for k, c in enumerate(p.coeffs)) or 1.0
    assert abs(evaluate(p, z) - naive) <= 1e-12 * scale


def test_find_roots_examples():
    r = find_roots(Polynomial([1, 0, 1]))
    assert match_distance(r.roots, [1j, -1j]) <= 1e-12
    units = np.exp(2j * np.pi * np.arange(9) / 9)
    r = find_roots(from_roots(units))
    assert match_distance(r.roots, units) <= 1e-12
    cubic = from_roots([0.3, 0.3, 0.3])
    r = find_roots(cubic)
    assert max(r.residuals) <= 1e-12
    assert max(abs(z - 0.3) for z in r.roots) < 1e-4
    assert len(r.roots) == 3


def test_find_roots_failure_is_explicit():
    with pytest.raises(RootFindError):
        find_roots(from_roots(np.exp(2j * np.pi * np.arange(12) / 12)), max_iter=1)
    with pytest.raises(ValueError):
        find_roots(Polynomial([3]))


def test_merge_clusters_restores_multiple_root():
    p = from_roots([0.3] * 3 + [-0.7])
    merged = merge_clusters(p, find_roots(p).roots)
    assert sorted(round(z.real, 12) for z in merged) == [-0.7, 0.3, 0.3, 0.3]
    # two genuinely distinct close roots are not merged
    q = from_roots([0.3, 0.3 + 1e-4])
    merged = merge_clusters(q, find_roots(q).roots)
    assert abs(merged[0] - merged[1]) > 5e-5


def test_antiderivative_examples():
    assert np.allclose(antiderivative_zero_at(Polynomial([0] * 8 + [9]), 1).coeffs, [-1] + [0] * 8 + [1])
    assert np.allclose(antiderivative_zero_at(Polynomial([0, 2]), 1).coeffs, [-1, 0, 1])
    q = from_roots([1, 1], lead=3)
    expected = from_roots([1, 1, 1]) + 1
    assert np.allclose(antiderivative_zero_at(q, 0).coeffs, expected.coeffs)


separated = st.lists(
    st.tuples(st.floats(0.05, 1.0), st.floats(0, 2 * np.pi)), min_size=1, max_size=12
).map(lambda xs: [r * np.exp(1j * t) for r, t in xs]).filter(
    lambda zs: all(abs(a - b) >= 1e-3 for i, a in enumerate(zs) for b in zs[i + 1:])
)


@given(separated)
def test_round_trip_roots(roots):
    found = find_roots(from_roots(roots)).roots
    assert match_distance(found, roots) <= 1e-8


@given(st.lists(st.complex_numbers(max_magnitude=3, allow_nan=False, allow_infinity=False),
                min_size=2, max_size=10).filter(lambda c: abs(c[-1]) > 1e-3),
       st.complex_numbers(max_magnitude=1, allow_nan=False, allow_infinity=False))
def test_antiderivative_inverts_derivative(coeffs, a):
    q = Polynomial(coeffs)
    P = antiderivative_zero_at(q, a)
    back = derivative(P).coeffs
    assert np.max(np.abs(back - q.coeffs)) <= 1e-14 * max(1.0, np.max(np.abs(q.coeffs)))
    assert abs(P(a)) <= 1e-12 * max(1.0, float(np.sum(np.abs(P.coeffs))))


@given(separated)
def test_root_product_gives_constant_term(roots):
    p = from_roots(roots)
    found = find_roots(p).roots
    prod = np.prod(found)
    n = p.degree
    # relative forward error of each root: eps * sum|c_k||z|^k / (|p'(z)| |z|)
    z = np.asarray(found)
    cond = Polynomial(np.abs(p.coeffs))(np.abs(z)).real / (np.abs(derivative(p)(z)) * np.abs(z))
    tol = 1e-10 + 64 * np.finfo(float).eps * float(np.sum(cond))
    assert abs((-1) ** n * prod - p.coeffs[0]) <= tol * max(abs(p.coeffs[0]), 1e-300) + 1e-14


def test_root_product_of_a_tight_real_cluster():
    # roots 1/32 apart: forward error near 5e-11 each, above a fixed 1e-10 product tolerance
    p = from_roots([1, 0.5, 0.75, 0.875, 0.8125, 0.84375])
    found = find_roots(p)
    assert max(found.residuals) <= 1e-15
    assert abs(np.prod(found.roots) - p.coeffs[0]) <= 1e-8 * abs(p.coeffs[0])


def test_scaled_residual_and_batch_agree():
    p = from_roots([0.2, -0.4j, 0.9])
    x, res, _, conv = roots_batch(np.stack([p.coeffs, p.coeffs]))
    assert conv.all() and np.array_equal(x[0], x[1])
    assert np.all(scaled_residual(p, x[0]) <= 1e-12)


def test_compose_and_deflate():
    p = from_roots([1, 2])
    q = compose_linear(p, 2.0, 1.0)  # p(2z + 1) = (2z)(2z - 1)
    assert np.allclose(q.coeffs, [0, -2, 4])
    quo, rem = deflate(p, 1)
    assert abs(rem) < 1e-15 and np.allclose(quo.coeffs, [-2, 1])


def test_json_round_trip():
    p = Polynomial([1 + 2j, -3, 0.5j])
    assert Polynomial.from_json(p.to_json()) == p


def test_merge_finds_multiple_root_next_to_a_simple_one():
    # double root of p' at e^i, 0.19 away from a simple root of p'
    w = complex(np.cos(1), np.sin(1))
    zs = [0.5] + [1] * 4 + [w] * 3 + [0.3153223623952687 + 0.9489846193555862j]
    dp = derivative(from_roots(zs))
    merged = merge_clusters(dp, find_roots(dp).roots)
    assert sum(abs(z - 1) < 1e-12 for z in merged) == 3
    assert sum(abs(z - w) < 1e-12 for z in merged) == 2


def test_exact_roots_at_origin():
    assert find_roots(from_roots([0, 0, 2])).roots[:2] == (0j, 0j)


def test_merge_peels_simple_root_off_a_ring():
    # 6-fold root at 1 whose float ring touches a simple root 0.055 away
    from sendov.poly import derivative
    dp = derivative(from_roots([0.5] + [1] * 7 + [0.9980475107000991 + 0.0624593178423802j]))
    merged = merge_clusters(dp, find_roots(dp).roots)
    assert sum(abs(z - 1) < 1e-10 for z in merged) == 6


@pytest.mark.parametrize("zeros", [
    [0.5, 1, 0.7071067811865476, 0.7071067811865476, 0.7071067811865476, 0.7071067811865476,
     0.7071067811865476, 0.8660254037844386, 0.75],
    [0.8125, 1, 1, 1, 0.7071067811865476, 0.7071067811865476, 0.7071067811865476,
     0.7905694150420949, 0.7905694150420949],
])
def test_merge_leaves_nearby_simple_roots_alone(zeros):
    from sendov.poly import derivative
    dp = derivative(from_roots(zeros))
    merged = merge_clusters(dp, find_roots(dp).roots)
    s = 0.7071067811865476
    reference = sorted(complex(z).real for z in np.roots(dp.coeffs[::-1]))
    simple = [z for z in merged if abs(z - s) > 1e-3 and abs(z - 1) > 1e-3]
    for z in simple:
        assert min(abs(z.real - r) for r in reference) < 1e-6
