"""Mahler measure, Szego composition and the measure identities built on them."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .instance import CheckResult, SendovInstance, judged, vacuous
from .poly import Polynomial, compose_linear, derivative, find_roots, from_roots, merge_clusters

SINGULAR = 1e-300
NEAR_BOUNDARY = 1e-9
MAX_BINOMIAL_N = 64
# half-step grid; a root of multiplicity m on |z| = 1 costs at most m log(2)/nodes
QUAD_NODES = 16384
# trapezoid error from a root at modulus e^(+-d) is about e^(-d nodes)/nodes
NEAR_CIRCLE_DECAY = 40.0


@dataclass(frozen=True)
class Factored:
    """lead * prod (z - roots), evaluated as a product rather than by Horner.

    Near a multiple root the expanded coefficients cancel catastrophically
    (|h| bottoms out near eps * sum|c_k|); the product form does not.
    """

    lead: complex
    roots: tuple[complex, ...]

    def __call__(self, z):
        z = np.asarray(z, dtype=np.complex128)
        out = np.full(z.shape, self.lead, dtype=np.complex128)
        for r in self.roots:
            out = out * (z - r)
        return out


@dataclass(frozen=True)
class MeasureReport:
    quadrature_value: float
    closed_form_value: float
    abs_diff: float
    nodes: int
    patched: int = 0


def near_circle(moduli, nodes: int) -> bool:
    """Whether some modulus is close enough to 1 to spoil the 1e-6 quadrature tolerance."""
    band = NEAR_CIRCLE_DECAY / nodes
    return any(abs(math.log(x)) <= band for x in moduli if x > 0)


def mahler_closed_form(p: Polynomial) -> float:
    """|lead| * prod max(1, |root|).

    Multiple roots are merged first; unmerged, a root of multiplicity m on
    the circle scatters by ~eps**(1/m) and inflates the product by as much.
    """
    if p.is_zero:
        raise ValueError("Mahler measure of the zero polynomial")
    if p.degree == 0:
        return abs(p.lead)
    roots = merge_clusters(p, find_roots(p).roots)
    return abs(p.lead) * math.prod(max(1.0, abs(z)) for z in roots)


def log_mean_quadrature(p, nodes: int, offset: float = 0.0) -> tuple[float, int]:
    """Trapezoid mean of log|p(e^{i theta})| and the number of patched nodes.

    ``p`` is anything callable on an array of points (a Polynomial or Factored).

    Nodes sit at theta_k = 2 pi (k + offset)/nodes. Nodes where |p| underflows
    are replaced by the average log of their two neighbours; the sum is
    compensated so the result does not depend on order.
    """
    if nodes < 64 or nodes & (nodes - 1):
        raise ValueError("nodes must be a power of two >= 64")
    theta = 2 * np.pi * (np.arange(nodes) + offset) / nodes
    vals = np.abs(p(np.exp(1j * theta)))
    bad = vals < SINGULAR
    if bad.all():
        raise ArithmeticError("every quadrature node is singular")
    logs = np.log(np.where(bad, 1.0, vals))
    for i in np.flatnonzero(bad):
        nb = [logs[j] for j in ((i - 1) % nodes, (i + 1) % nodes) if not bad[j]]
        logs[i] = sum(nb) / len(nb) if nb else float(np.mean(logs[~bad]))
    return math.fsum(logs) / nodes, int(bad.sum())


def mahler_quadrature(p: Polynomial, nodes: int = 4096) -> MeasureReport:
    m, patched = log_mean_quadrature(p, nodes)
    q = math.exp(m)
    c = mahler_closed_form(p)
    return MeasureReport(q, c, abs(q - c), nodes, patched)


# ---------------------------------------------------------------------------
# Szego composition


def _binomials(n: int) -> np.ndarray:
    if n > MAX_BINOMIAL_N:
        raise ValueError(f"degree {n} above {MAX_BINOMIAL_N}")
    return np.array([float(math.comb(n, k)) for k in range(n + 1)])


def _padded(p: Polynomial, n: int) -> np.ndarray:
    if p.degree > n:
        raise ValueError(f"degree {p.degree} exceeds declared degree {n}")
    out = np.zeros(n + 1, dtype=np.complex128)
    out[: p.coeffs.size] = p.coeffs
    return out


def szego_compose(Q: Polynomial, R: Polynomial, n: Optional[int] = None) -> Polynomial:
    """sum binom(n,k) a_k b_k z^k for Q = sum binom(n,k) a_k z^k, R likewise.

    Without ``n`` both degrees must agree; with ``n`` the shorter one is read
    as having zero top coefficients.
    """
    if n is None:
        if Q.degree != R.degree:
            raise ValueError(f"degrees differ ({Q.degree} vs {R.degree}); pass n to pad")
        n = Q.degree
    q, r = _padded(Q, n), _padded(R, n)
    return Polynomial(q * r / _binomials(n))


def bruijn_springer_check(Q: Polynomial, R: Polynomial, n: Optional[int] = None, tol: float = 1e-9) -> CheckResult:
    """M(Q (x) R) <= M(Q) M(R) when the top weighted coefficients are nonzero."""
    cid = "bruijn_springer"
    if n is None:
        n = max(Q.degree, R.degree)
    q, r = _padded(Q, n), _padded(R, n)
    if q[n] * r[n] == 0:
        return vacuous(cid, "a_n b_n = 0")
    comp = szego_compose(Q, R, n)
    lhs = mahler_closed_form(comp)
    mq, mr = mahler_closed_form(Q), mahler_closed_form(R)
    return judged(cid, (lhs - mq * mr) / (mq * mr), tol, f"M(Q(x)R)={lhs:.6g} M(Q)M(R)={mq * mr:.6g}")


# ---------------------------------------------------------------------------
# measure identities for an instance


def _membership(values, threshold: float) -> tuple[list[float], int]:
    """Values >= threshold, and how many sit within NEAR_BOUNDARY of it."""
    kept = [v for v in values if v >= threshold]
    near = sum(1 for v in values if abs(v - threshold) <= NEAR_BOUNDARY * max(1.0, threshold))
    return kept, near


def lemma_4_1_formula(inst: SendovInstance, rho: float) -> float:
    """n rho^(n-1) prod_{rho_k >= rho} rho_k / rho."""
    kept, _ = _membership(inst.rho, rho)
    return inst.n * rho ** (inst.n - 1) * math.prod(x / rho for x in kept)


def lemma_4_1_poly(inst: SendovInstance, rho: float) -> Factored:
    """p'(z rho + a) = n rho^(n-1) prod (z - beta_k/rho), beta_k = zeta_k - a."""
    betas = tuple((c - inst.a) / rho for c in inst.criticals)
    return Factored(inst.n * rho ** (inst.n - 1), betas)


def lemma_4_1_check(inst: SendovInstance, rho: float, nodes: int = QUAD_NODES) -> CheckResult:
    """Quadrature measure of p'(z rho + a) against n rho^(n-1) prod_{rho_k >= rho} rho_k/rho.

    Relative tolerance 1e-6, or 1e-3 when some rho_k/rho is within
    NEAR_CIRCLE_DECAY/nodes of 1 in log scale (a root on or next to the
    unit circle, where the trapezoid rule converges slowly). The factored polynomial is also
    compared coefficientwise with the composition of p' itself, and the
    integrand is evaluated in product form so multiple roots stay resolved.
    """
    if rho <= 0:
        raise ValueError("rho must be positive")
    factored = lemma_4_1_poly(inst, rho)
    expanded = from_roots(factored.roots, lead=factored.lead)
    composed = compose_linear(derivative(inst.p), rho, inst.a)
    coeff_gap = float(np.max(np.abs(expanded.coeffs - composed.coeffs)) / np.max(np.abs(composed.coeffs)))
    m, patched = log_mean_quadrature(factored, nodes, offset=0.5)
    formula = lemma_4_1_formula(inst, rho)
    near = near_circle([x / rho for x in inst.rho], nodes)
    tol = 1e-3 if near else 1e-6
    rel = abs(math.exp(m) - formula) / formula
    ok = rel <= tol and coeff_gap <= 1e-9
    detail = f"formula={formula:.12g} coeff_gap={coeff_gap:.2g} patched={patched} near_circle={near}"
    return CheckResult("lemma_4_1", True, bool(ok), rel, detail)


def lemma_4_2_poly(n: int, rho: float, m: float) -> Polynomial:
    """sum_k binom(n-1,k)/(k+1) (z rho^(1-m))^k."""
    t = rho ** (1 - m)
    return Polynomial([math.comb(n - 1, k) / (k + 1) * t**k for k in range(n)])


def lemma_4_2_formula(n: int, rho: float, m: float) -> tuple[float, int]:
    """(1/n) rho^((1-m)(n-1)) prod_{rho^(m-1) 2 sin(pi k/n) >= 1} rho^(m-1) 2 sin(pi k/n),
    and the count of factors within 1e-9 of the threshold."""
    s = rho ** (m - 1)
    factors = [s * 2 * math.sin(math.pi * k / n) for k in range(1, n)]
    kept, near = _membership(factors, 1.0)
    return rho ** ((1 - m) * (n - 1)) * math.prod(kept) / n, near


def lemma_4_2_check(n: int, rho: float, m: float, nodes: int = QUAD_NODES) -> CheckResult:
    """Quadrature measure of the weighted binomial sum against its product formula.

    Also checks the root representation (1/n) prod (z rho^(1-m) - (e^{2 pi i k/n} - 1))
    and the chord lengths |e^{2 pi i k/n} - 1| = 2 sin(pi k/n).
    """
    if n < 2 or rho <= 0:
        raise ValueError("need n >= 2 and rho > 0")
    poly = lemma_4_2_poly(n, rho, m)
    t = rho ** (1 - m)
    units = np.exp(2j * np.pi * np.arange(1, n) / n)
    # (1/n) prod (t z - (u - 1)) = (t^(n-1)/n) prod (z - (u - 1)/t)
    rep = from_roots((units - 1) / t, lead=t ** (n - 1) / n)
    rep_gap = float(np.max(np.abs(rep.coeffs - poly.coeffs)) / np.max(np.abs(poly.coeffs)))
    chord_gap = float(np.max(np.abs(np.abs(units - 1) - 2 * np.sin(np.pi * np.arange(1, n) / n))))
    mq, patched = log_mean_quadrature(poly, nodes, offset=0.5)
    formula, near = lemma_4_2_formula(n, rho, m)
    close = near_circle(np.abs(units - 1) / t, nodes)
    tol = 1e-3 if close else 1e-6
    rel = abs(math.exp(mq) - formula) / formula
    detail = (f"formula={formula:.12g} root_rep_gap={rep_gap:.2g} chord_gap={chord_gap:.2g} "
              f"patched={patched} near_boundary={near} near_circle={close}")
    ok = rel <= tol and rep_gap <= 1e-10 and chord_gap <= 1e-14
    return CheckResult("lemma_4_2", True, bool(ok), rel, detail)


def shifted_quotient(inst: SendovInstance) -> Polynomial:
    """Q(z + a) where p(z + a) = z Q(z + a), i.e. prod (z - (z_k - a))."""
    return from_roots([z - inst.a for z in inst.zeros])


def szego_decomposition_check(inst: SendovInstance, rho: float, m: float, tol: float = 1e-10) -> CheckResult:
    """Q(z rho + a) = p'(z rho^m + a) (x) sum binom(n-1,k)/(k+1) (z rho^(1-m))^k, coefficientwise."""
    if rho <= 0:
        raise ValueError("rho must be positive")
    n = inst.n
    shifted = shifted_quotient(inst)
    lhs = compose_linear(shifted, rho, 0.0)
    dp = compose_linear(derivative(inst.p), rho**m, inst.a)
    rhs = szego_compose(dp, lemma_4_2_poly(n, rho, m), n - 1)
    lc, rc = _padded(lhs, n - 1), _padded(rhs, n - 1)
    scale = max(1.0, float(np.max(np.abs(lc))))
    res = float(np.max(np.abs(lc - rc))) / scale
    return judged("szego_decomposition", res, tol, f"coefficient scale={scale:.3g}")


def theorem3_sides(inst: SendovInstance, rho: float, m: float) -> tuple[float, float, int]:
    """Both sides of the product inequality and the near-threshold count."""
    n = inst.n
    kept_r, near_r = _membership(inst.r, rho)
    lhs = math.prod(x / rho for x in kept_r)
    rm = rho**m
    kept_rho, near_rho = _membership(inst.rho, rm)
    s = rho ** (m - 1)
    factors = [s * 2 * math.sin(math.pi * k / n) for k in range(1, n)]
    kept_f, near_f = _membership(factors, 1.0)
    rhs = math.prod(x / rm for x in kept_rho) * math.prod(kept_f)
    return lhs, rhs, near_r + near_rho + near_f


def theorem3_check(inst: SendovInstance, rho: float, m: float, tol: float = 1e-9) -> CheckResult:
    """prod_{r_k >= rho} r_k/rho <= prod_{rho_j >= rho^m} rho_j/rho^m
    * prod_{rho^(m-1) 2 sin(pi k/n) >= 1} rho^(m-1) 2 sin(pi k/n)."""
    if rho <= 0:
        raise ValueError("rho must be positive")
    lhs, rhs, near = theorem3_sides(inst, rho, m)
    detail = f"lhs={lhs:.6g} rhs={rhs:.6g}"
    if near:
        detail += f"; {near} factors within {NEAR_BOUNDARY:g} of their threshold"
    return judged("theorem_3", (lhs - rhs) / max(lhs, rhs), tol, detail)
