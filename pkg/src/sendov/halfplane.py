"""Bisector geometry and the extremal analysis behind the critical-point
half-plane bound Re zeta_0 >= (a - lam(lam+2)/a)/2."""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .instance import CheckResult, SendovInstance, judged, vacuous

GOLDEN = (math.sqrt(5) - 1) / 2
DOMAIN_SLACK = 1e-12


@dataclass(frozen=True)
class GParams:
    """A zero at a on the real axis and a circle |z - a| = r around it."""

    a: float
    r: float

    def __post_init__(self):
        if not 0 < self.r < self.a < 1:
            raise ValueError(f"need 0 < r < a < 1, got a={self.a}, r={self.r}")

    @property
    def lo(self) -> float:
        return self.r / self.a


def _check_domain(params: GParams, x: float) -> None:
    if not params.lo - DOMAIN_SLACK <= x <= 1 + DOMAIN_SLACK:
        raise ValueError(f"x={x} outside [r/a, 1] = [{params.lo}, 1]")


def _g_unchecked(a: float, r: float, x: float) -> float:
    phi = a * a - 2 * a * r * x + r * r
    psi = (4 - phi) / phi
    return x + math.sqrt(psi) * math.sqrt(max(0.0, 1 - x * x))


def g_func(params: GParams, x: float) -> float:
    """G(x) = x + sqrt((4 - a^2 + 2arx - r^2)/(a^2 - 2arx + r^2)) sqrt(1 - x^2)."""
    _check_domain(params, x)
    return _g_unchecked(params.a, params.r, min(1.0, x))


def f_func(params: GParams, x: float) -> float:
    """F(x) = -G(-x) on [-1, -r/a]."""
    return -g_func(params, -x)


def g_prime(params: GParams, x: float) -> float:
    """G'(x) for x in the open domain (r/a, 1)."""
    a, r = params.a, params.r
    phi = a * a - 2 * a * r * x + r * r
    psi = (4 - phi) / phi
    dpsi = 8 * a * r / phi**2
    s = math.sqrt(1 - x * x)
    return 1 + 0.5 * dpsi * s / math.sqrt(psi) - math.sqrt(psi) * x / s


def g_argmax_closed_form(params: GParams) -> tuple[float, float, float]:
    """(x0, phi0, G(x0)) = ((2r+a^2+r^2)/(2a(1+r)), (a^2-r^2)/(1+r), (r+2)/a)."""
    a, r = params.a, params.r
    x0 = (2 * r + a * a + r * r) / (2 * a * (1 + r))
    phi0 = (a * a - r * r) / (1 + r)
    return x0, phi0, (r + 2) / a


def g_max_numeric(params: GParams, xtol: float = 1e-10) -> tuple[float, float]:
    """Golden-section maximisation of G on [r/a, 1]."""
    a, r = params.a, params.r
    lo, hi = params.lo, 1.0
    x1 = hi - GOLDEN * (hi - lo)
    x2 = lo + GOLDEN * (hi - lo)
    g1, g2 = _g_unchecked(a, r, x1), _g_unchecked(a, r, x2)
    while hi - lo > xtol:
        if g1 < g2:
            lo, x1, g1 = x1, x2, g2
            x2 = lo + GOLDEN * (hi - lo)
            g2 = _g_unchecked(a, r, x2)
        else:
            hi, x2, g2 = x2, x1, g1
            x1 = hi - GOLDEN * (hi - lo)
            g1 = _g_unchecked(a, r, x1)
    x = 0.5 * (lo + hi)
    return x, _g_unchecked(a, r, x)


# ---------------------------------------------------------------------------
# the sextic L = R and its quartic factorisation


def quartic_parts(a: float, r: float, phi: float) -> dict[str, float]:
    """Every polynomial in phi that enters the stationarity analysis of G."""
    s = a * a + r * r
    p2 = a * a * r * r
    d, e1 = 1 - r * r, a * a - 1
    ed = e1 + d
    return {
        "quartic": e1 * d * phi**4 - 2 * ed**2 * phi**3 + (4 + e1 - d) * ed**2 * phi**2 - ed**4,
        "product": (e1 * phi**2 - 2 * ed * phi - ed**2) * (d * phi**2 - 2 * ed * phi + ed**2),
        "L_factored": phi**3 * (4 - phi) * (4 * p2 - s * s + 2 * s * phi - phi * phi),
        "L_expanded": phi**6 - 2 * (s + 2) * phi**5 + (8 * s - 4 * p2 + s * s) * phi**4
        + (16 * p2 - 4 * s * s) * phi**3,
        "R_factored": (phi**3 - (s + 2) * phi**2 + 2 * s * s - 8 * p2) ** 2,
        "R_expanded": phi**6 - 2 * (s + 2) * phi**5 + (s + 2) ** 2 * phi**4
        + 4 * (a * a - r * r) ** 2 * phi**3 - 4 * (s + 2) * (a * a - r * r) ** 2 * phi**2
        + 4 * (a * a - r * r) ** 4,
    }


def quartic_identity_check(a: float, r: float, phi: float, tol: float = 1e-10) -> CheckResult:
    """The quartic equals its two-quadratic factorisation, L and R match their
    expansions, and L - R = 4 * quartic; residual is the worst relative gap."""
    q = quartic_parts(a, r, phi)
    pairs = {
        "factorisation": (q["quartic"], q["product"]),
        "L": (q["L_expanded"], q["L_factored"]),
        "R": (q["R_expanded"], q["R_factored"]),
        "L-R": (q["L_factored"] - q["R_factored"], 4 * q["quartic"]),
    }
    scale = max(1.0, max(abs(v) for v in q.values()))
    gaps = {k: abs(x - y) / scale for k, (x, y) in pairs.items()}
    worst = max(gaps, key=gaps.get)
    return judged("quartic_identity", gaps[worst], tol, f"worst part: {worst}")


# ---------------------------------------------------------------------------
# bisector points and the cos(beta_0) formula


def bisector_point(z0: complex) -> tuple[complex, complex]:
    """The two unit-circle points equidistant from 0 and z0, as
    (1/2 + i c) z0 and (1/2 - i c) z0 with c = sqrt(4 - |z0|^2)/(2|z0|)."""
    z0 = complex(z0)
    m = abs(z0)
    if m == 0 or m > 2:
        raise ValueError(f"need 0 < |z0| <= 2, got {z0}")
    c = math.sqrt(max(0.0, 4 - m * m)) / (2 * m)
    return (0.5 + 1j * c) * z0, (0.5 - 1j * c) * z0


def cos_beta0(a: float, r: float, alpha: float) -> float:
    """cos(beta_0) for z0 = a + r e^{i alpha}, written out in a, r, alpha."""
    ca, sa = math.cos(alpha), math.sin(alpha)
    m2 = a * a + 2 * a * r * ca + r * r
    return 0.5 * (a + r * ca) - 0.5 * math.sqrt(4 - m2) / math.sqrt(m2) * r * sa


def theorem1_lower_bound(a: float, lam: float) -> float:
    """(a - lam(lam+2)/a)/2, the lower bound on Re zeta_0."""
    if not 0 < lam < a < 1:
        raise ValueError(f"need 0 < lam < a < 1, got a={a}, lam={lam}")
    return 0.5 * (a - lam * (lam + 2) / a)


@dataclass(frozen=True)
class Theorem1Report:
    lam: float
    bound: Optional[float]
    witness: Optional[complex]
    hypothesis_held: bool
    detail: str = ""

    @property
    def conjecture_critical(self) -> bool:
        return self.hypothesis_held and self.witness is None

    def to_check(self) -> CheckResult:
        if not self.hypothesis_held:
            return vacuous("theorem_1", self.detail, critical=True)
        best = self.witness.real if self.witness is not None else -math.inf
        return CheckResult("theorem_1", True, self.witness is not None,
                           float(self.bound - best) if self.witness is not None else math.inf,
                           self.detail, True)


def theorem1_witness(criticals: Sequence[complex], bound: float, tol: float = 1e-9) -> Optional[complex]:
    """The critical point with the largest real part, if it reaches ``bound - tol``."""
    best = max(criticals, key=lambda z: (z.real, z.imag))
    return best if best.real >= bound - tol else None


def lambda_window(inst: SendovInstance) -> tuple[float, float]:
    """[1 - (1 - |p(0)|)^(1/n), sin(pi/n)]; empty (lo > hi) when |p(0)| >= 1."""
    p0 = abs(inst.p.coeffs[0])
    lo = 1 - (1 - p0) ** (1 / inst.n) if p0 < 1 else math.inf
    return lo, math.sin(math.pi / inst.n)


def verify_theorem1(inst: SendovInstance, lam: float) -> Theorem1Report:
    """Check the half-plane bound on an instance, gating on its hypotheses."""
    a = inst.a
    lo, hi = lambda_window(inst)
    reasons = []
    if not lo <= lam <= hi:
        reasons.append(f"lambda={lam:g} outside window [{lo:.6g}, {hi:.6g}]")
    if not 0 < a < 1:
        reasons.append(f"a={a:g} not in (0, 1)")
    if not lam < a:
        reasons.append(f"lambda={lam:g} not < a")
    if inst.rho[0] < 1:
        reasons.append(f"rho_1={inst.rho[0]:.6g} < 1")
    if reasons or lam <= 0:
        return Theorem1Report(lam, None, None, False, "; ".join(reasons) or "lambda <= 0")
    bound = theorem1_lower_bound(a, lam)
    w = theorem1_witness(inst.criticals, bound)
    detail = "witness found" if w is not None else "no critical point reaches the bound"
    return Theorem1Report(lam, bound, w, True, detail)


def lemma_2_1_check(inst: SendovInstance, lam: float, nodes: int = 360, tol: float = 1e-9) -> CheckResult:
    """min |p| over ``nodes`` points of |z - a| = lam exceeds 1 - (1 - lam)^n.

    The minimum is sampled, not certified; the node count is kept in ``detail``.
    """
    cid = "lemma_2_1"
    if nodes < 360:
        raise ValueError("nodes must be >= 360")
    a, n = inst.a, inst.n
    if not 0 < a < 1:
        return vacuous(cid, f"a={a:g} not in (0, 1)", critical=True)
    if inst.rho[0] < 1:
        return vacuous(cid, f"rho_1={inst.rho[0]:.6g} < 1", critical=True)
    if not 0 < lam <= math.sin(math.pi / n):
        return vacuous(cid, f"lambda={lam:g} not in (0, sin(pi/n)]", critical=True)
    theta = 2 * np.pi * np.arange(nodes) / nodes
    vals = np.abs(inst.p(a + lam * np.exp(1j * theta)))
    threshold = 1 - (1 - lam) ** n
    return judged(cid, threshold - float(vals.min()), tol,
                  f"sampled minimum over {nodes} nodes (not certified)", critical=True)


def g_from_cos_beta0(params: GParams, x: float) -> float:
    """G(x) recomputed through cos(beta_0): G(x) = -F(-x) with F = (2 cos beta_0 - a)/r."""
    alpha = math.acos(-x)
    return -(2 * cos_beta0(params.a, params.r, alpha) - params.a) / params.r


def g_from_bisector(params: GParams, x: float) -> float:
    """G(x) recomputed through the bisector point of z0 = a + r e^{i alpha}, cos alpha = -x."""
    alpha = math.acos(-x)
    z0 = params.a + params.r * cmath.exp(1j * alpha)
    plus, _ = bisector_point(z0)
    return -(2 * plus.real - params.a) / params.r


def g_max_check(params: GParams, value_tol: float = 1e-8, arg_tol: float = 1e-6) -> CheckResult:
    """Numerical maximum of G against (r+2)/a and its argmax against x0."""
    x0, _, gmax = g_argmax_closed_form(params)
    x, g = g_max_numeric(params)
    dv, dx = abs(g - gmax), abs(x - x0)
    ok = dv <= value_tol and dx <= arg_tol
    return CheckResult("g_maximum", True, bool(ok), dv, f"argmax gap={dx:.3g}")


def bisector_identity_check(z0: complex, tol: float = 1e-12) -> CheckResult:
    """Both bisector points lie on the unit circle at distance 1 from z0."""
    gaps = []
    for z in bisector_point(z0):
        gaps += [abs(abs(z) - 1), abs(abs(z - z0) - 1)]
    return judged("bisector_identity", max(gaps), tol)
