"""Distance bounds, zero/critical-point identities and hypothesis-gated lemma checks."""

from __future__ import annotations

import math
from typing import Optional, Sequence

import numpy as np

from . import bounds
from .instance import CheckResult, SendovInstance, judged, vacuous
from .poly import Polynomial, derivative, find_roots, merge_clusters

# strict rho_1 > 1 gates need a clear margin so root-finder noise cannot trip them
STRICT_GATE = 1e-9
LEMMA_39_A = 0.5195
LEMMA_39_Z = (0.4, 1.0)


def _rel(lhs, rhs) -> float:
    diff = abs(lhs - rhs)
    scale = max(abs(lhs), abs(rhs))
    return diff / scale if scale > 1 else diff


def _prod(xs) -> complex:
    out = 1.0
    for x in xs:
        out *= x
    return out


def i_measure(inst: SendovInstance) -> tuple[float, float]:
    """(I(a), I(p)): distance from a to its nearest critical point, and the largest
    such distance over every zero, a included."""
    crit = np.asarray(inst.criticals)
    per_zero = [float(np.min(np.abs(z - crit))) for z in inst.all_zeros]
    return inst.rho[0], max(per_zero)


def distance_bounds_check(inst: SendovInstance, tol: float = 1e-9) -> CheckResult:
    """2 rho_1 sin(pi/n) <= r_k <= 1 + a for every k."""
    lower = 2 * inst.rho[0] * math.sin(math.pi / inst.n)
    upper = 1 + inst.a
    res = max(lower - inst.r[0], inst.r[-1] - upper)
    return judged("distance_bounds", res, tol, f"lower={lower:.12g} upper={upper:.12g}")


# ---------------------------------------------------------------------------
# identities


def identity_suite(inst: SendovInstance, tol: float = 1e-8) -> list[CheckResult]:
    """The unconditional zero/critical-point identities, one result per identity.

    Sums that carry the constants 8 and 9/8 at degree nine are evaluated with
    n - 1 and n/(n - 1) so they apply to every degree.
    """
    n, a = inst.n, inst.a
    z = np.asarray(inst.zeros)
    zeta = np.asarray(inst.criticals)
    r = np.abs(a - z)
    rho = np.abs(a - zeta)
    out = []

    lhs, rhs = _prod(a - z), n * _prod(a - zeta)
    out.append(judged("lemma_3_2_product_complex", _rel(lhs, rhs), tol))
    lhs, rhs = _prod(r), n * _prod(rho)
    out.append(judged("lemma_3_2_product", _rel(lhs, rhs), tol))
    lhs, rhs = (a + z.sum()) / n, zeta.sum() / (n - 1)
    out.append(judged("lemma_3_2_centroid", _rel(lhs, rhs), tol))

    if r.min() > 0 and rho.min() > 0:
        lhs, rhs = np.sum(1 / (a - zeta)), np.sum(2 / (a - z))
        out.append(judged("lemma_3_2_reciprocal_sum", _rel(lhs, rhs), tol))
    else:
        out.append(vacuous("lemma_3_2_reciprocal_sum", "a coincides with a zero or critical point"))

    if a == 0 or r.min() == 0 or rho.min() == 0:
        why = "needs a != 0 and a distinct from every zero and critical point"
        for cid in ("lemma_3_2_real_part", "lemma_3_9_sum", "lemma_3_11_sum"):
            out.append(vacuous(cid, why))
    else:
        pts = np.concatenate([z, zeta])
        lhs = (1 / (a - pts)).real
        rhs = 1 / (2 * a) - (np.abs(pts) ** 2 - a * a) / (2 * a * np.abs(a - pts) ** 2)
        out.append(judged("lemma_3_2_real_part", max(_rel(x, y) for x, y in zip(lhs, rhs)), tol))
        cos_t = (zeta - a).real / rho
        lhs = np.sum((np.abs(z) ** 2 - a * a) / r**2)
        rhs = (n - 1) + a * np.sum(cos_t / rho)
        out.append(judged("lemma_3_9_sum", _rel(lhs, rhs), tol))
        lhs = np.sum((a * a - np.abs(zeta) ** 2) / rho**2)
        rhs = (n - 1) + 2 * np.sum((a * a - np.abs(z) ** 2) / r**2)
        out.append(judged("lemma_3_11_sum", _rel(lhs, rhs), tol))

    if inst.delta is None:
        why = "needs a != 0 and every z_k != 0"
        out.append(vacuous("derivative_at_zero", why))
        out.append(vacuous("delta_decomposition", why))
    else:
        lhs = n * _prod(np.abs(zeta))
        rhs = a * _prod(np.abs(z)) * abs(1 / a + np.sum(1 / z))
        out.append(judged("derivative_at_zero", _rel(lhs, rhs), tol))
        absz = np.abs(z)
        cos_th = z.real / absz
        rhs = (1 - a * a) / a + n / (n - 1) * zeta.sum().real + np.sum((1 - absz**2) / absz * cos_th)
        out.append(judged("delta_decomposition", _rel(inst.delta, rhs), tol))
    return out


def gamma_product_check(inst: SendovInstance, tol: float = 1e-10) -> CheckResult:
    """prod |gamma_j| <= prod |w_k| / (9 - 4a^2/(1+a^2) - 6a)."""
    cid = "gamma_product"
    if inst.n != 9:
        return vacuous(cid, "stated for n = 9 only")
    den = bounds.gamma_denominator(inst.a)
    if den <= 0:
        return vacuous(cid, f"denominator {den:.6g} <= 0")
    if inst.gamma is None or inst.w is None:
        return vacuous(cid, "Moebius image undefined (a z = 1)")
    lhs = _prod(abs(g) for g in inst.gamma)
    rhs = _prod(abs(w) for w in inst.w) / den
    return judged(cid, lhs - rhs, tol, f"lhs={lhs:.6g} rhs={rhs:.6g}")


# ---------------------------------------------------------------------------
# gated lemma checks


def lambda_from_instance(inst: SendovInstance) -> float:
    """The smallest admissible lambda, 1 - (1 - |p(0)|)^(1/n)."""
    p0 = abs(inst.p.coeffs[0])
    return 1 - (1 - p0) ** (1 / inst.n) if p0 < 1 else 1.0


def _strictly_above_one(rho1: float) -> bool:
    return rho1 > 1 + STRICT_GATE


def condition_36_holds(a: float, sigma: float, grid: int = 601) -> tuple[bool, float]:
    """Whether f_a(x) + (1 - a^2)(sigma - 4) <= 0 on a grid over [0.4, 1];
    returns the flag and the largest sampled value."""
    xs = np.linspace(0.4, 1.0, grid)
    worst = max(bounds.condition_36(float(x), a, sigma) for x in xs)
    return worst <= 0, worst


def _phi_stat(inst: SendovInstance) -> Optional[float]:
    absz = np.abs(np.asarray(inst.zeros))
    if absz.min() == 0:
        return None
    a = inst.a
    r = np.asarray(inst.r)
    s = np.sum((absz**2 - a * a) / r / r)
    return (a * a - 1 + s / 4) * _prod(absz) ** -0.25


def scalar_stats(inst: SendovInstance):
    """(sigma, Delta, R_k, Phi); Delta and Phi are None when some z_k = 0."""
    return inst.sigma, inst.delta, inst.bigR, _phi_stat(inst)


def _lemma_39_hyp(inst: SendovInstance) -> tuple[bool, str]:
    absz = np.abs(np.asarray(inst.zeros))
    if not _strictly_above_one(inst.rho[0]):
        return False, f"rho_1={inst.rho[0]:.12g} not > 1"
    if not LEMMA_39_A <= inst.a <= 1:
        return False, f"a={inst.a} outside [{LEMMA_39_A}, 1]"
    if absz.min() < LEMMA_39_Z[0] or absz.max() > LEMMA_39_Z[1]:
        return False, "some |z_k| outside [0.4, 1]"
    if inst.delta is None:
        return False, "Delta undefined"
    return True, ""


def gated_lemma_checks(inst: SendovInstance, tol: float = 1e-9) -> list[CheckResult]:
    """Each lemma's hypothesis is evaluated first; the conclusion is asserted only
    when the hypothesis holds. Results flagged ``critical`` can only fail on an
    instance with rho_1 >= 1, i.e. on a potential counterexample."""
    if inst.n != 9:
        ids = ["lemma_3_4", "lemma_3_5", "lemma_3_6", "lemma_3_9", "lemma_3_11",
               "lemma_3_12", "lemma_3_13", "sigma_upper_U", "phi_bound"]
        return [vacuous(c, "stated for n = 9 only") for c in ids]
    a, rho1 = inst.a, inst.rho[0]
    z = np.asarray(inst.zeros)
    absz = np.abs(z)
    r = np.asarray(inst.r)
    rho = np.asarray(inst.rho)
    out: list[CheckResult] = []

    # |gamma_0| > 1/sqrt(1 + (1 - a^2) lam (lam + 2))
    lam = lambda_from_instance(inst)
    cid = "lemma_3_4"
    if not _strictly_above_one(rho1):
        out.append(vacuous(cid, f"rho_1={rho1:.12g} not > 1", critical=True))
    elif not (0 < a < 1 and lam <= math.sin(math.pi / 9) and lam < a) or inst.gamma is None:
        out.append(vacuous(cid, f"lambda={lam:.6g} outside its window", critical=True))
    else:
        bound = 1 / math.sqrt(1 + (1 - a * a) * lam * (lam + 2))
        best = max(abs(g) for g in inst.gamma)
        out.append(judged(cid, bound - best, tol, f"lambda={lam:.6g}", critical=True))

    # |gamma_j| <= 1/(1 + a - a^2)  =>  rho_j <= 1
    cid = "lemma_3_5"
    if not a < 1 or inst.gamma is None:
        out.append(vacuous(cid, "needs a < 1"))
    else:
        thr = 1 / (1 + a - a * a)
        hits = [rho[j] - 1 for j, g in enumerate(inst.gamma) if abs(g) <= thr]
        res = max(hits) if hits else 0.0
        out.append(judged(cid, res, tol, f"{len(hits)} critical points meet the premise"))

    # |w| <= (|z| + a)/(a|z| + 1) <= (R + a)/(aR + 1), R = max |z_k|
    cid = "lemma_3_6"
    if inst.w is None:
        out.append(vacuous(cid, "Moebius image undefined"))
    else:
        R = float(absz.max())
        mid = (absz + a) / (a * absz + 1)
        outer = (R + a) / (a * R + 1)
        res = max(float(np.max(np.abs(np.asarray(inst.w)) - mid)), float(np.max(mid - outer)))
        out.append(judged(cid, res, tol, f"R={R:.6g}"))

    hyp39, why39 = _lemma_39_hyp(inst)
    cid = "lemma_3_9"
    if not hyp39:
        out.append(vacuous(cid, why39, critical=True))
    else:
        rhs = -8 / a + 8 * a + 9 / (8 * a) * (1 - a * a) * inst.sigma
        out.append(judged(cid, inst.delta - rhs, tol, critical=True))

    cid = "lemma_3_11"
    if rho1 < 1:
        out.append(vacuous(cid, f"rho_1={rho1:.12g} < 1", critical=True))
    else:
        zeta_abs = np.abs(np.asarray(inst.criticals))
        s = np.sum((absz**2 - a * a) / r**2)
        lhs = _prod(zeta_abs)
        rhs = _prod(rho) * (a * a - 1 + s / 4) ** 4
        out.append(judged(cid, lhs - rhs, tol, critical=True))

    # sigma > 4, rho_1 > 1, condition on f_a; inherits the hypotheses it is built on
    phi = _phi_stat(inst)
    gate12 = hyp39 and a < 1 and inst.sigma > 4 and phi is not None
    why12 = why39 or ("needs a < 1 and sigma > 4" if not gate12 else "")
    if gate12:
        ok36, worst36 = condition_36_holds(a, inst.sigma)
        if not ok36:
            gate12, why12 = False, f"condition on f_a fails (max {worst36:.6g})"
    for cid in ("lemma_3_12", "phi_bound"):
        if not gate12:
            out.append(vacuous(cid, why12, critical=True))
            continue
        if cid == "lemma_3_12":
            lhs = 4**4 * (8 - 9 / 8 * inst.sigma) * (1 - a * a) ** -3
            rhs = (inst.sigma - 4) ** 4 * 9 * _prod(rho)
        else:
            lhs, rhs = phi, (1 - a * a) * (inst.sigma - 4) / 4
        out.append(judged(cid, lhs - rhs, tol, critical=True))

    cid = "lemma_3_13"
    if not _strictly_above_one(rho1) or inst.bigR is None or not 0 < a < 1:
        out.append(vacuous(cid, "needs rho_1 > 1, 0 < a < 1 and all r_k > 0", critical=True))
    else:
        vs = bounds.vstar_index(a)
        lhs = math.fsum(1 / x**2 for x in inst.bigR)
        out.append(judged(cid, lhs - bounds.U_star(a, vs), tol, f"v*={vs}", critical=True))

    cid = "sigma_upper_U"
    if not _strictly_above_one(rho1) or not 0 < a < 1:
        out.append(vacuous(cid, "needs rho_1 > 1 and 0 < a < 1", critical=True))
    else:
        v = bounds.v_index(a)
        out.append(judged(cid, inst.sigma - bounds.U(a, v), tol, f"v={v}", critical=True))
    return out


# ---------------------------------------------------------------------------
# hull and half-plane statements


def convex_hull(points: Sequence[complex]) -> list[complex]:
    """Monotone-chain hull, counter-clockwise, collinear points dropped."""
    pts = sorted({(p.real, p.imag) for p in points})
    if len(pts) <= 2:
        return [complex(*p) for p in pts]

    def cross(o, a, b):
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])

    lower, upper = [], []
    for p in pts:
        while len(lower) >= 2 and cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    for p in reversed(pts):
        while len(upper) >= 2 and cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    return [complex(*p) for p in lower[:-1] + upper[:-1]]


def _segment_distance(z: complex, u: complex, v: complex) -> float:
    d = v - u
    if d == 0:
        return abs(z - u)
    # divide by d rather than |d|^2, which underflows for tiny segments
    t = min(1.0, max(0.0, ((z - u) / d).real))
    return abs(z - (u + t * d))


def hull_excess(hull: Sequence[complex], z: complex) -> float:
    """Signed distance from z to the hull: <= 0 inside, > 0 outside."""
    m = len(hull)
    if m == 1:
        return abs(z - hull[0])
    if m == 2:
        return _segment_distance(z, hull[0], hull[1])
    worst = -math.inf
    for i in range(m):
        u, v = hull[i], hull[(i + 1) % m]
        d = v - u
        # outward normal of a counter-clockwise edge points right
        worst = max(worst, -((z - u) * d.conjugate()).imag / abs(d))
    if worst > 0:
        return min(_segment_distance(z, hull[i], hull[(i + 1) % m]) for i in range(m))
    return worst


def gauss_lucas_check(inst: SendovInstance, tol: float = 1e-9) -> CheckResult:
    """Every critical point lies in the convex hull of the zeros (inflated by ``tol``)."""
    hull = convex_hull(inst.all_zeros)
    res = max(hull_excess(hull, c) for c in inst.criticals)
    return judged("gauss_lucas", res, tol, f"hull vertices={len(hull)}")


def bisector_signed_distance(z: complex, u: complex, v: complex) -> float:
    """Signed distance of z from the perpendicular bisector of [u, v], positive toward v."""
    d = v - u
    return ((z - (u + v) / 2) * d.conjugate()).real / abs(d)


def grace_heawood_check(p: Polynomial, u: complex, v: complex, tol: float = 1e-9) -> CheckResult:
    """If p(u) = p(v), each closed half-plane bounded by the bisector of [u, v]
    contains a critical point of p."""
    u, v = complex(u), complex(v)
    if u == v:
        raise ValueError("u and v must differ")
    scale = float(np.sum(np.abs(p.coeffs))) * max(1.0, abs(u), abs(v)) ** p.degree
    gap = abs(p(u) - p(v))
    if gap > 1e-9 * scale:
        raise ValueError(f"p(u) != p(v): |difference| = {gap:.3g}")
    if p.degree < 2:
        raise ValueError("a polynomial taking a value twice has degree >= 2")
    dp = derivative(p)
    crit = merge_clusters(dp, find_roots(dp).roots)
    s = [bisector_signed_distance(c, u, v) for c in crit]
    res = max(-max(s), min(s))
    return judged("grace_heawood", res, tol, f"signed distances in [{min(s):.3g}, {max(s):.3g}]")


def equal_value_pair(p: Polynomial, c: complex, rng: np.random.Generator) -> tuple[complex, complex]:
    """Two distinct solutions of p(z) = c, picked at random."""
    roots = find_roots(p - c).roots
    i, j = rng.choice(len(roots), size=2, replace=False)
    return roots[int(i)], roots[int(j)]
