"""Scalar functions behind the degree-9 argument.

Everything here is written once and evaluated in three arithmetic modes:
plain floats (instance checks, scans), :class:`~sendov.intervals.Interval`
(certification) and :class:`~sendov.intervals.Dual` (mean-value enclosures).
Constants that are not exact binary floats go through ``decimal_like`` or
the interval constant for pi so that interval mode stays rigorous.
"""

from __future__ import annotations

import math
from fractions import Fraction as Fr

from .intervals import decimal_like, log, pi_like, powr, sin, sqrt

N = 9


def two_sin_pi9(like):
    return 2 * sin(pi_like(like) / 9)


def _nine(like):
    return decimal_like(9, like)


# ----------------------------------------------------------------------------
# Lemma-level scalar functions


def a9_defining(x):
    """9 - 4x^2/(1+x^2) - 6x - (1+x-x^2)^8; its smallest positive root is A9."""
    x2 = x * x
    return 9 - 4 * x2 / (1 + x2) - 6 * x - (1 + x - x2) ** 8


def gamma_denominator(a):
    """9 - 4a^2/(1+a^2) - 6a, the denominator of the gamma-product bound."""
    a2 = a * a
    return 9 - 4 * a2 / (1 + a2) - 6 * a


def lambda_choice(a, R):
    """lambda = 1 - (1 - aR)^(1/9)."""
    return 1 - powr(1 - a * R, Fr(1, 9))


def halfplane_margin(a, R):
    """(9-4a^2/(1+a^2)-6a)(aR+1)/(R+a) - sqrt(1+(1-a^2)lam(lam+2)) (1+a-a^2)^7."""
    lam = lambda_choice(a, R)
    return gamma_denominator(a) * (a * R + 1) / (R + a) - sqrt(
        1 + (1 - a * a) * lam * (lam + 2)
    ) * (1 + a - a * a) ** 7


def lambda_radius_margin(a, R):
    """(1 - (1 - sin(pi/9))^9) - aR, nonnegative iff R <= a^-1 (1-(1-sin(pi/9))^9)."""
    s = sin(pi_like(a) / 9)
    return 1 - (1 - s) ** 9 - a * R


def lemma38_margin(x):
    """9x^2 - (1+x^2)^2."""
    x2 = x * x
    return 9 * x2 - (1 + x2) ** 2


def lemma310_numerator(a, x):
    """Y(a, x) with m = 1/4, the sign-carrying factor of f'(x)."""
    m = decimal_like(Fr(1, 4), x)
    t = powr(x, Fr(1, 4))  # x^m
    return ((m - 2) * x * t - m * t / x + 2 * x) * a + m * x * x * t - (2 + m) * t + 2


def lemma310_f(a, x):
    """(x^2 - 1) / ((1 - x^(1/4)) (a + x)^2)."""
    return (x * x - 1) / ((1 - powr(x, Fr(1, 4))) * (a + x) ** 2)


def condition_36(x, a, sigma):
    """f_a(x) + (1 - a^2)(sigma - 4), whose nonnegativity on [x0, 1] rules out a
    critical point outside the disk; x = 1 uses the limit -8/(a+1)^2."""
    if x == 1:
        head = -8 / (a + 1) ** 2
    else:
        head = lemma310_f(a, x)
    return head + (1 - a * a) * (sigma - 4)


def sigma_headroom(a):
    """4 + 8/((1-a)(1+a)^3) - 64/9."""
    return 4 + 8 / ((1 - a) * (1 + a) ** 3) - decimal_like(Fr(64, 9), a)


# ----------------------------------------------------------------------------
# U, U*, and the integer case selectors v, v*


def v_ratio(a):
    """log(9 s^-8) / log((1+a)/s) with s = 2 sin(pi/9); v = ceil of this."""
    s = two_sin_pi9(a)
    return log(_nine(a) * s**-8) / log((1 + a) / s)


def vstar_ratio(a):
    """7 log((1+a)/s) / log((1+a)^(15/8) / (9^(1/8) s^(7/8))); v* = ceil of this."""
    s = two_sin_pi9(a)
    num = 7 * log((1 + a) / s)
    den = log(powr(1 + a, Fr(15, 8)) / (powr(_nine(a), Fr(1, 8)) * powr(s, Fr(7, 8))))
    return num / den


def v_index(a: float) -> int:
    return math.ceil(v_ratio(float(a)))


def vstar_index(a: float) -> int:
    return math.ceil(vstar_ratio(float(a)))


def U(a, v: int):
    """Upper bound for sigma = sum 1/r_k^2 at piecewise-constant v."""
    s = two_sin_pi9(a)
    return (
        (8 - v) * s**-2
        + (v - 1) * (1 + a) ** -2
        + (s ** (8 - v) * (1 + a) ** (v - 1) / 9) ** 2
    )


def U_star(a, vs: int):
    """Upper bound for sum 1/R_k^2 at piecewise-constant v*."""
    s = two_sin_pi9(a)
    q = s / (1 + a)
    M = (1 + a) / powr(_nine(a), Fr(1, 8))
    if vs == 8:
        tail = M ** (vs - 1)
    else:
        tail = powr(q, Fr(7 * (8 - vs), 8)) * M ** (vs - 1)
    return (8 - vs) * powr(q, Fr(-7, 4)) + (vs - 1) * M**-2 + tail * tail


def contradiction_margin(a, v: int, vs: int):
    """4U/(U-4) ((8 - 9U/8)/(1-a^2)^3)^(1/4) - U*; positive means no room for rho_1 > 1."""
    u = U(a, v)
    inner = (8 - decimal_like(Fr(9, 8), a) * u) / (1 - a * a) ** 3
    return 4 * u / (u - 4) * powr(inner, Fr(1, 4)) - U_star(a, vs)


def contradiction_margin_auto(a: float) -> float:
    """contradiction_margin with v, v* chosen from their defining formulas; nan if undefined."""
    try:
        return contradiction_margin(a, v_index(a), vstar_index(a))
    except (ValueError, ArithmeticError):
        return float("nan")


# ----------------------------------------------------------------------------
# closed-form constants


def a1_closed(like=0.0):
    """9^(1/6) (2 sin(pi/9))^(-1/3) - 1."""
    s = two_sin_pi9(like)
    return powr(_nine(like), Fr(1, 6)) * powr(s, Fr(-1, 3)) - 1


def a2_closed(like=0.0):
    """9^(3/17) (2 sin(pi/9))^(-7/17) - 1."""
    s = two_sin_pi9(like)
    return powr(_nine(like), Fr(3, 17)) * powr(s, Fr(-7, 17)) - 1


def v5_threshold_closed(like=0.0):
    """9^(1/5) (2 sin(pi/9))^(-3/5) - 1 (the 0.948... boundary of v = 5)."""
    s = two_sin_pi9(like)
    return powr(_nine(like), Fr(1, 5)) * powr(s, Fr(-3, 5)) - 1


def vstar7_threshold_closed(like=0.0):
    """(9 / (2 sin(pi/9)))^(1/7) - 1 (the 0.445... boundary of v* = 7)."""
    s = two_sin_pi9(like)
    return powr(_nine(like) / s, Fr(1, 7)) - 1
