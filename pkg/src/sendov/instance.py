"""The normalised Sendov instance p(z) = (z - a) prod (z - z_k) and check results."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import mpmath
import numpy as np

from .poly import Polynomial, derivative, find_roots, from_roots, merge_clusters

DISK_TOL = 1e-12
CRITICAL_RESIDUAL_TOL = 1e-10
# refine in high precision when eps * (root condition number) exceeds this
REFINE_ERROR = 1e-13
REFINE_DPS = 40
FALLBACK_DPS = 60
FALLBACK_LINK = 1e-9
ZEROWISE_FACTOR = 64


def _order_key(z: complex):
    return (round(z.real, 15), round(z.imag, 15), z.real, z.imag)


@dataclass(frozen=True)
class SendovInstance:
    """A zero ``a`` in [0, 1], the other zeros, the critical points and derived scalars.

    ``zeros`` are ordered by r_k = |a - z_k| and ``criticals`` by
    rho_j = |a - zeta_j|, ascending, so ``r``/``w``/``bigR`` line up with
    ``zeros`` and ``rho``/``gamma`` with ``criticals``.
    """

    n: int
    a: float
    zeros: tuple[complex, ...]
    criticals: tuple[complex, ...]
    r: tuple[float, ...]
    rho: tuple[float, ...]
    sigma: float
    delta: Optional[float]
    bigR: Optional[tuple[float, ...]]
    gamma: Optional[tuple[complex, ...]]
    w: Optional[tuple[complex, ...]]
    p: Polynomial = field(repr=False, compare=False)

    @property
    def rho1(self) -> float:
        return self.rho[0]

    @property
    def all_zeros(self) -> tuple[complex, ...]:
        return (complex(self.a),) + self.zeros

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "a": self.a,
            "zeros": [[z.real, z.imag] for z in self.zeros],
            "criticals": [[z.real, z.imag] for z in self.criticals],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json())

    @classmethod
    def from_json(cls, doc: dict, check_disk: bool = True) -> "SendovInstance":
        """Rebuild from JSON; any ``criticals`` present are ignored and recomputed."""
        zeros = [complex(re, im) for re, im in doc["zeros"]]
        inst = build_instance(float(doc["a"]), zeros, check_disk=check_disk)
        if "n" in doc and int(doc["n"]) != inst.n:
            raise ValueError(f"n={doc['n']} does not match {len(zeros)} zeros plus a")
        return inst


def build_instance(
    a: float, zeros: Sequence[complex], check_disk: bool = True, tol: float = 1e-12
) -> SendovInstance:
    """Construct an instance from ``a`` and the n - 1 remaining zeros.

    The critical points come from the root finder applied to p', with
    numerically multiple roots merged. When a multiple root was merged or a
    simple one is ill-conditioned, they are polished in high precision. ``check_disk=False`` admits zeros
    outside the closed unit disk (used to exercise hypothesis gates).
    """
    a = float(a)
    zeros = [complex(z) for z in zeros]
    n = len(zeros) + 1
    if not 2 <= n <= 12:
        raise ValueError(f"degree n={n} outside [2, 12]")
    if check_disk:
        if not 0.0 <= a <= 1.0:
            raise ValueError(f"a={a} outside [0, 1]")
        bad = [z for z in zeros if abs(z) > 1.0 + DISK_TOL]
        if bad:
            raise ValueError(f"zeros outside the closed unit disk: {bad}")
    if not all(math.isfinite(z.real) and math.isfinite(z.imag) for z in zeros):
        raise ValueError("non-finite zero")

    # a canonical order before expansion makes permuted inputs bit-identical
    canon = sorted(zeros, key=_order_key)
    p = from_roots([complex(a)] + canon)
    dp = derivative(p)
    res = find_roots(dp, tol=tol)
    crit = list(merge_clusters(dp, res.roots, tol=tol))
    _check_criticals(dp, crit)
    if _ill_conditioned(dp, crit):
        crit = _refine_criticals([complex(a)] + canon, crit)

    zeros_sorted = sorted(canon, key=lambda z: (abs(a - z), _order_key(z)))
    crit_sorted = sorted(crit, key=lambda z: (abs(a - z), _order_key(z)))
    r = tuple(abs(a - z) for z in zeros_sorted)
    rho = tuple(abs(a - z) for z in crit_sorted)

    sigma = math.fsum((1.0 / x) * (1.0 / x) for x in r) if min(r) > 0 else math.inf
    if a != 0 and all(z != 0 for z in zeros_sorted):
        delta = (1.0 / a + sum(1.0 / z for z in zeros_sorted)).real
    else:
        delta = None
    if min(r) > 0:
        logmean = math.fsum(math.log(x) for x in r) / (n - 1)
        bigR = tuple(math.exp(math.log(x) - logmean) for x in r)
    else:
        bigR = None
    gamma = _moebius(a, crit_sorted)
    w = _moebius(a, zeros_sorted)
    return SendovInstance(
        n=n,
        a=a,
        zeros=tuple(zeros_sorted),
        criticals=tuple(crit_sorted),
        r=r,
        rho=rho,
        sigma=sigma,
        delta=delta,
        bigR=bigR,
        gamma=gamma,
        w=w,
        p=p,
    )


def _moebius(a: float, pts: Sequence[complex]) -> Optional[tuple[complex, ...]]:
    """(z - a)/(a z - 1) for each point; None when some denominator vanishes."""
    out = []
    for z in pts:
        den = a * z - 1
        if den == 0:
            return None
        out.append((z - a) / den)
    return tuple(out)


def _ill_conditioned(dp: Polynomial, crit: Sequence[complex]) -> bool:
    """A merged multiple root, or a simple root whose forward error bound
    eps * sum|c_k||z|^k / |dp'(z)| exceeds REFINE_ERROR."""
    if len(set(crit)) < len(crit):
        return True
    z = np.asarray(crit, dtype=np.complex128)
    scale = Polynomial(np.abs(dp.coeffs))(np.abs(z)).real
    slope = np.abs(derivative(dp)(z))
    with np.errstate(divide="ignore"):
        err = np.finfo(float).eps * scale / slope
    return bool(np.any(err > REFINE_ERROR))


def _mp_deriv(coeffs: list, k: int) -> list:
    for _ in range(k):
        d = len(coeffs) - 1
        coeffs = [c * (d - i) for i, c in enumerate(coeffs[:-1])]
    return coeffs


def _mp_newton(q: list, x, dps: int):
    for _ in range(40):
        v, dv = mpmath.polyval(q, x, derivative=True)
        if dv == 0:
            break
        step = v / dv
        x -= step
        if abs(step) <= mpmath.mpf(10) ** (-dps + 5) * (1 + abs(x)):
            break
    return x


def _mp_multiple(all_zeros: Sequence[complex], dp: list, x, m: int, dps: int) -> bool:
    """True when p', ..., p'^(m-1) vanish at x up to what rounding the zeros
    by a relative eps can produce (ZEROWISE_FACTOR times the first-order
    zero-wise scale), or up to half the working digits.

    Rounding zero z_j moves p by a multiple of q_j = p / (z - z_j), so the
    first-order scale of the k-th derivative of p' is
    eps * sum_j |z_j| |q_j^(k+1)(x)|."""
    eps = mpmath.mpf(np.finfo(float).eps)
    floor = mpmath.mpf(10) ** (-dps // 2)
    others = [_mp_expand(all_zeros[:j] + all_zeros[j + 1:]) for j in range(len(all_zeros))]
    for k in range(m):
        q = _mp_deriv(dp, k)
        scale = mpmath.polyval([abs(c) for c in q], max(1, abs(x)))
        zerowise = eps * sum(abs(z) * abs(mpmath.polyval(_mp_deriv(o, k + 1), x))
                             for z, o in zip(all_zeros, others))
        if abs(mpmath.polyval(q, x)) > ZEROWISE_FACTOR * zerowise + floor * scale:
            return False
    return True


def _refine_criticals(all_zeros: Sequence[complex], crit: Sequence[complex]) -> list[complex]:
    """Newton-polish the critical points on p' expanded from the zeros at
    REFINE_DPS digits; an m-fold point is polished as a simple root of the
    (m - 1)-th derivative of p'. A result that moved by more than a quarter
    of the distance to the nearest other critical point is discarded, which
    keeps a point from jumping to a neighbour. If a merged point is not a
    root of the claimed multiplicity at high precision, all critical points
    are recomputed from scratch at FALLBACK_DPS digits."""
    with mpmath.workdps(REFINE_DPS):
        dp = _mp_critical_poly(all_zeros)
        mult: dict[complex, int] = {}
        for c in crit:
            mult[c] = mult.get(c, 0) + 1
        refined = {}
        for c, m in mult.items():
            x = _mp_newton(_mp_deriv(dp, m - 1), mpmath.mpc(c.real, c.imag), REFINE_DPS)
            if m > 1 and not _mp_multiple(list(all_zeros), dp, x, m, REFINE_DPS):
                return _recompute_criticals(all_zeros, crit)
            z = complex(x)
            gap = min((abs(c - o) for o in mult if o != c), default=math.inf)
            ok = math.isfinite(z.real) and math.isfinite(z.imag) and abs(z - c) <= gap / 4
            refined[c] = z if ok else c
    return [refined[c] for c in crit]


def _mp_expand(zeros: Sequence[complex]) -> list:
    """Monic coefficients, highest degree first, of the product of (z - z_j)."""
    desc = [mpmath.mpc(1)]
    for z in zeros:
        zc = mpmath.mpc(z.real, z.imag)
        desc = [c - zc * d for c, d in zip(desc + [0], [0] + desc)]
    return desc


def _mp_critical_poly(all_zeros: Sequence[complex]) -> list:
    return _mp_deriv(_mp_expand(all_zeros), 1)


def _recompute_criticals(all_zeros: Sequence[complex], crit: Sequence[complex]) -> list[complex]:
    """Critical points at FALLBACK_DPS digits from the factorisation
    p' = prod (z - w)^(m_w - 1) * r over the distinct zeros w of multiplicity
    m_w, with r = sum_w m_w prod_{v != w} (z - v). A zero of multiplicity m is
    an exact critical point of multiplicity m - 1 and never a root of r. Roots
    of r grouped by single linkage are merged when their polished centre
    passes the multiplicity test, and split at a quarter of the radius
    otherwise. Returns ``crit`` unchanged when mpmath does not converge."""
    mult: dict[complex, int] = {}
    for z in all_zeros:
        mult[z] = mult.get(z, 0) + 1
    out: list[complex] = [w for w, m in mult.items() for _ in range(m - 1)]
    if len(mult) == 1:
        return out
    with mpmath.workdps(FALLBACK_DPS):
        dp = _mp_critical_poly(all_zeros)
        distinct = list(mult)
        r = [mpmath.mpc(0)] * len(distinct)
        for j, w in enumerate(distinct):
            part = _mp_expand(distinct[:j] + distinct[j + 1:])
            r = [x + mult[w] * y for x, y in zip(r, part)]
        try:
            roots = mpmath.polyroots(r, maxsteps=400, extraprec=8 * FALLBACK_DPS)
        except mpmath.mp.NoConvergence:
            return list(crit)

        def visit(members: list, rad: float) -> None:
            groups: list[list] = []
            for x in members:
                near = [g for g in groups if min(abs(x - y) for y in g) <= rad]
                for g in near:
                    groups.remove(g)
                groups.append([x] + [y for g in near for y in g])
            for g in groups:
                if len(g) == 1:
                    out.append(complex(g[0]))
                    continue
                x = _mp_newton(_mp_deriv(r, len(g) - 1), sum(g) / len(g), FALLBACK_DPS)
                if _mp_multiple(all_zeros, dp, x, len(g), FALLBACK_DPS):
                    out.extend([complex(x)] * len(g))
                elif rad / 4 >= FALLBACK_LINK:
                    visit(g, rad / 4)
                else:
                    out.extend(complex(y) for y in g)

        visit(list(roots), 0.1)
    return out


def _check_criticals(dp: Polynomial, crit: Sequence[complex]) -> None:
    scale = float(np.sum(np.abs(dp.coeffs)))
    for z in crit:
        den = scale * max(1.0, abs(z)) ** dp.degree
        if abs(dp(z)) > CRITICAL_RESIDUAL_TOL * den:
            raise ArithmeticError(f"critical point {z} has residual {abs(dp(z)) / den:.3g}")


@dataclass(frozen=True)
class CheckResult:
    """Outcome of one identity or inequality check.

    ``residual`` is signed for inequalities (positive means violated) and an
    absolute or relative difference for identities; ``passed`` is
    ``residual <= tol`` when the hypothesis held and vacuously true otherwise.
    ``critical`` marks checks whose hypothesis forces rho_1 >= 1 or more, so a
    failure there would contradict the conjecture rather than the code.
    """

    check_id: str
    hypothesis_held: bool
    passed: bool
    residual: float
    detail: str = ""
    critical: bool = False

    @property
    def vacuous(self) -> bool:
        return not self.hypothesis_held

    @property
    def conjecture_critical(self) -> bool:
        return self.critical and self.hypothesis_held and not self.passed

    def to_json(self) -> dict:
        return {
            "check_id": self.check_id,
            "hypothesis_held": self.hypothesis_held,
            "pass": self.passed,
            "residual": self.residual,
            "detail": self.detail,
            "critical": self.critical,
        }


def judged(check_id: str, residual: float, tol: float, detail: str = "", critical: bool = False) -> CheckResult:
    residual = float(residual)
    return CheckResult(check_id, True, bool(residual <= tol), residual, detail, critical)


def vacuous(check_id: str, detail: str, critical: bool = False) -> CheckResult:
    return CheckResult(check_id, False, True, 0.0, detail, critical)
