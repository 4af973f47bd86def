"""Outward-rounded interval arithmetic and interval-valued forward derivatives.

Rounding is handled by epsilon inflation: every elementary result is widened
by ``4 * eps`` relative to each endpoint. The module-level functions
(:func:`sqrt`, :func:`exp`, ...) dispatch on the argument type, so one claim
function can be evaluated on floats, on :class:`Interval` boxes, or on
:class:`Dual` numbers carrying a gradient.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

EPS = 2.0**-52
INFLATE = 4 * EPS


class DomainError(ArithmeticError):
    """An interval operation left its domain (0 in a divisor, log of <= 0, ...)."""


def _dn(x: float) -> float:
    return x - INFLATE * abs(x)


def _up(x: float) -> float:
    return x + INFLATE * abs(x)


@dataclass(frozen=True, slots=True)
class Interval:
    lo: float
    hi: float

    def __post_init__(self):
        if not (math.isfinite(self.lo) and math.isfinite(self.hi)):
            raise DomainError(f"non-finite interval [{self.lo}, {self.hi}]")
        if self.lo > self.hi:
            raise ValueError(f"empty interval [{self.lo}, {self.hi}]")

    # -- construction -----------------------------------------------------
    @classmethod
    def point(cls, x: float) -> "Interval":
        x = float(x)
        return cls(x, x)

    @classmethod
    def decimal(cls, text: Union[str, int, Fraction]) -> "Interval":
        """Tightest float interval containing an exact decimal/rational."""
        q = Fraction(text)
        x = float(q)
        if Fraction(x) == q:
            return cls(x, x)
        return cls(math.nextafter(x, -math.inf), math.nextafter(x, math.inf))

    @staticmethod
    def _coerce(v):
        if isinstance(v, Interval):
            return v
        if isinstance(v, Fraction):
            return Interval.decimal(v)
        if isinstance(v, (int, float)):
            return Interval.point(v)
        return None

    # -- queries ----------------------------------------------------------
    @property
    def width(self) -> float:
        return self.hi - self.lo

    @property
    def mid(self) -> float:
        return 0.5 * (self.lo + self.hi)

    def contains(self, x: float) -> bool:
        return self.lo <= x <= self.hi

    def subset_of(self, other: "Interval") -> bool:
        return other.lo <= self.lo and self.hi <= other.hi

    def intersect(self, other: "Interval") -> "Interval":
        lo, hi = max(self.lo, other.lo), min(self.hi, other.hi)
        if lo > hi:
            raise ValueError("disjoint intervals")
        return Interval(lo, hi)

    def bisect(self) -> tuple["Interval", "Interval"]:
        m = self.mid
        return Interval(self.lo, m), Interval(m, self.hi)

    def __repr__(self):
        return f"[{self.lo!r}, {self.hi!r}]"

    # -- arithmetic -------------------------------------------------------
    def __neg__(self):
        return Interval(-self.hi, -self.lo)

    def __pos__(self):
        return self

    def __add__(self, other):
        o = Interval._coerce(other)
        if o is None:
            return NotImplemented
        return Interval(_dn(self.lo + o.lo), _up(self.hi + o.hi))

    __radd__ = __add__

    def __sub__(self, other):
        o = Interval._coerce(other)
        if o is None:
            return NotImplemented
        return Interval(_dn(self.lo - o.hi), _up(self.hi - o.lo))

    def __rsub__(self, other):
        o = Interval._coerce(other)
        return NotImplemented if o is None else o - self

    def __mul__(self, other):
        o = Interval._coerce(other)
        if o is None:
            return NotImplemented
        ps = (self.lo * o.lo, self.lo * o.hi, self.hi * o.lo, self.hi * o.hi)
        return Interval(_dn(min(ps)), _up(max(ps)))

    __rmul__ = __mul__

    def reciprocal(self):
        if self.lo <= 0.0 <= self.hi:
            raise DomainError(f"division by interval containing 0: {self!r}")
        return Interval(_dn(1.0 / self.hi), _up(1.0 / self.lo))

    def __truediv__(self, other):
        o = Interval._coerce(other)
        if o is None:
            return NotImplemented
        if o.lo <= 0.0 <= o.hi:
            raise DomainError(f"division by interval containing 0: {o!r}")
        qs = (self.lo / o.lo, self.lo / o.hi, self.hi / o.lo, self.hi / o.hi)
        return Interval(_dn(min(qs)), _up(max(qs)))

    def __rtruediv__(self, other):
        o = Interval._coerce(other)
        return NotImplemented if o is None else o / self

    def __pow__(self, n):
        if not isinstance(n, int):
            return powr(self, n)
        return ipow(self, n)

    def __abs__(self):
        if self.lo >= 0:
            return self
        if self.hi <= 0:
            return -self
        return Interval(0.0, max(-self.lo, self.hi))


Number = Union[float, Interval, "Dual"]


def ipow(x: Interval, n: int) -> Interval:
    """Integer power with even-power tightening, by repeated squaring."""
    if n < 0:
        return ipow(x, -n).reciprocal()
    if n == 0:
        return Interval(1.0, 1.0)
    if n % 2 == 0:
        m = abs(x)
        return _pos_pow(m, n)
    if x.lo >= 0:
        return _pos_pow(x, n)
    if x.hi <= 0:
        return -_pos_pow(-x, n)
    return Interval(-_pos_pow(Interval(0.0, -x.lo), n).hi, _pos_pow(Interval(0.0, x.hi), n).hi)


def _pos_pow(x: Interval, n: int) -> Interval:
    result = Interval(1.0, 1.0)
    base = x
    while n:
        if n & 1:
            result = result * base
        n >>= 1
        if n:
            base = base * base
    # products of nonnegative intervals can only dip below 0 by inflation
    return Interval(max(result.lo, 0.0), result.hi)


def _isqrt(x: Interval) -> Interval:
    if x.lo < 0:
        raise DomainError(f"sqrt of interval touching negative reals: {x!r}")
    return Interval(max(0.0, _dn(math.sqrt(x.lo))), _up(math.sqrt(x.hi)))


def _iexp(x: Interval) -> Interval:
    try:
        return Interval(max(0.0, _dn(math.exp(x.lo))), _up(math.exp(x.hi)))
    except OverflowError as exc:
        raise DomainError(f"exp overflow on {x!r}") from exc


def _ilog(x: Interval) -> Interval:
    if x.lo <= 0:
        raise DomainError(f"log of interval touching nonpositive reals: {x!r}")
    return Interval(_dn(math.log(x.lo)), _up(math.log(x.hi)))


PI = Interval(math.pi, math.nextafter(math.pi, math.inf))


def _isin(x: Interval) -> Interval:
    if x.width >= 2 * math.pi:
        return Interval(-1.0, 1.0)
    lo, hi = math.sin(x.lo), math.sin(x.hi)
    vlo, vhi = min(lo, hi), max(lo, hi)
    # extrema at pi/2 + k*pi inside the interval
    k0 = math.floor((x.lo - math.pi / 2) / math.pi) - 1
    for k in range(k0, k0 + 5):
        c = math.pi / 2 + k * math.pi
        # widen the membership test so near-boundary extrema are not missed
        if x.lo - 1e-15 * (1 + abs(c)) <= c <= x.hi + 1e-15 * (1 + abs(c)):
            if k % 2 == 0:
                vhi = 1.0
            else:
                vlo = -1.0
    return Interval(max(-1.0, _dn(vlo)), min(1.0, _up(vhi)))


def _icos(x: Interval) -> Interval:
    return _isin(x + PI / 2)


# ---------------------------------------------------------------------------
# forward-mode derivatives


class Dual:
    """Value plus gradient; the value may be a float or an Interval."""

    __slots__ = ("val", "grad")

    def __init__(self, val, grad):
        self.val = val
        self.grad = tuple(grad)

    @classmethod
    def variable(cls, val, index: int, nvars: int) -> "Dual":
        return cls(val, tuple(1.0 if i == index else 0.0 for i in range(nvars)))

    def _lift(self, other) -> "Dual":
        if isinstance(other, Dual):
            return other
        return Dual(other, (0.0,) * len(self.grad))

    def __repr__(self):
        return f"Dual({self.val!r}, {self.grad!r})"

    def __neg__(self):
        return Dual(-self.val, tuple(-g for g in self.grad))

    def __add__(self, other):
        o = self._lift(other)
        return Dual(self.val + o.val, tuple(g + h for g, h in zip(self.grad, o.grad)))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._lift(other)
        return Dual(self.val - o.val, tuple(g - h for g, h in zip(self.grad, o.grad)))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        if not isinstance(other, Dual):
            return Dual(self.val * other, tuple(g * other for g in self.grad))
        return Dual(
            self.val * other.val,
            tuple(g * other.val + h * self.val for g, h in zip(self.grad, other.grad)),
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        if not isinstance(other, Dual):
            inv = 1.0 / other
            return Dual(self.val * inv, tuple(g * inv for g in self.grad))
        q = self.val / other.val
        return Dual(q, tuple((g - q * h) / other.val for g, h in zip(self.grad, other.grad)))

    def __rtruediv__(self, other):
        q = other / self.val
        return Dual(q, tuple(-(q * g) / self.val for g in self.grad))

    def __pow__(self, n):
        if not isinstance(n, int):
            return powr(self, n)
        if n == 0:
            return Dual(_one_like(self.val), (0.0,) * len(self.grad))
        vn1 = _int_pow(self.val, n - 1)
        return Dual(vn1 * self.val if n > 0 else _int_pow(self.val, n), tuple(n * vn1 * g for g in self.grad))


def _one_like(v):
    return Interval(1.0, 1.0) if isinstance(v, Interval) else 1.0


def _int_pow(v, n: int):
    if isinstance(v, Interval):
        return ipow(v, n)
    return v**n


# ---------------------------------------------------------------------------
# type-dispatching elementary functions


def sqrt(x):
    if isinstance(x, Dual):
        s = sqrt(x.val)
        return Dual(s, tuple(g / (2 * s) for g in x.grad))
    if isinstance(x, Interval):
        return _isqrt(x)
    return math.sqrt(x)


def exp(x):
    if isinstance(x, Dual):
        e = exp(x.val)
        return Dual(e, tuple(e * g for g in x.grad))
    if isinstance(x, Interval):
        return _iexp(x)
    return math.exp(x)


def log(x):
    if isinstance(x, Dual):
        return Dual(log(x.val), tuple(g / x.val for g in x.grad))
    if isinstance(x, Interval):
        return _ilog(x)
    if x <= 0:
        raise DomainError(f"log of {x}")
    return math.log(x)


def sin(x):
    if isinstance(x, Dual):
        return Dual(sin(x.val), tuple(cos(x.val) * g for g in x.grad))
    if isinstance(x, Interval):
        return _isin(x)
    return math.sin(x)


def cos(x):
    if isinstance(x, Dual):
        return Dual(cos(x.val), tuple(-(sin(x.val) * g) for g in x.grad))
    if isinstance(x, Interval):
        return _icos(x)
    return math.cos(x)


def powr(x, p):
    """x**p for real p via exp(p*log(x)); needs x > 0. ``p`` may be a Fraction."""
    if isinstance(p, int):
        return x**p
    if isinstance(_leaf(x), Interval):
        return exp(Interval.decimal(p) * log(x))
    if isinstance(x, Dual):
        return exp(float(p) * log(x))
    if x <= 0:
        raise DomainError(f"fractional power of nonpositive {x}")
    return math.exp(float(p) * math.log(x))


def _leaf(x):
    return x.val if isinstance(x, Dual) else x


def is_interval_mode(x) -> bool:
    return isinstance(_leaf(x), Interval)


def decimal_like(text, like):
    """A decimal/rational constant in the arithmetic mode of ``like``: an
    enclosing Interval for interval evaluation, the nearest float otherwise."""
    if is_interval_mode(like):
        return Interval.decimal(text)
    return float(Fraction(text))


def pi_like(like):
    return PI if is_interval_mode(like) else math.pi
