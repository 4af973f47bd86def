"""Registry of the scalar functions whose positivity the certifier proves.

Each entry maps variable names to a function of an environment dict; the
function must work for floats, Intervals and Duals alike (see ``bounds``).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction as Fr
from typing import Callable, Mapping

from . import bounds
from .intervals import Dual, decimal_like

VARIABLES = frozenset({"a", "x", "r", "phi", "R"})


@dataclass(frozen=True)
class ClaimFn:
    fn_id: str
    variables: tuple[str, ...]
    func: Callable[[Mapping[str, object]], object]
    description: str
    # mean-value enclosures need a first derivative; functions that already
    # differentiate internally are evaluated in natural form only
    mean_value: bool = True

    def __call__(self, env: Mapping[str, object]):
        return self.func(env)


REGISTRY: dict[str, ClaimFn] = {}


def register(fn_id: str, variables, description: str, mean_value: bool = True):
    variables = tuple(variables)
    unknown = set(variables) - VARIABLES
    if unknown:
        raise ValueError(f"unknown variables {unknown}")

    def deco(f):
        REGISTRY[fn_id] = ClaimFn(fn_id, variables, f, description, mean_value)
        return f

    return deco


def get(fn_id: str) -> ClaimFn:
    try:
        return REGISTRY[fn_id]
    except KeyError:
        raise KeyError(f"unregistered claim function {fn_id!r}") from None


def _R(text, like):
    return decimal_like(Fr(text), like)


@register("a9", "x", "9 - 4x^2/(1+x^2) - 6x - (1+x-x^2)^8")
def _a9(e):
    return bounds.a9_defining(e["x"])


@register("halfplane_R1", "a", "half-plane margin with R = 1, lambda = 1-(1-a)^(1/9)")
def _hp1(e):
    return bounds.halfplane_margin(e["a"], 1)


@register("halfplane_R04", "a", "half-plane margin with R = 0.4")
def _hp04(e):
    a = e["a"]
    return bounds.halfplane_margin(a, _R("0.4", a))


@register("halfplane_R04_slope", "a", "minus d/da of the R = 0.4 half-plane margin", mean_value=False)
def _hp04_slope(e):
    a = e["a"]
    d = bounds.halfplane_margin(Dual(a, (1.0,)), _R("0.4", a))
    return -d.grad[0]


@register("lemma38", "x", "9x^2 - (1+x^2)^2")
def _l38(e):
    return bounds.lemma38_margin(e["x"])


@register("lemma310_Y", ("a", "x"), "Y(a, x) with m = 1/4")
def _y(e):
    return bounds.lemma310_numerator(e["a"], e["x"])


for _v, _vs in ((7, 7), (6, 7), (6, 6)):

    def _contra(e, v=_v, vs=_vs):
        return bounds.contradiction_margin(e["a"], v, vs)

    register(f"contra_{_v}{_vs}", "a", f"contradiction margin with (v, v*) = ({_v}, {_vs})")(_contra)

for _v in (7, 6):

    def _u_low(e, v=_v):
        return bounds.U(e["a"], v) - 4

    def _u_high(e, v=_v):
        a = e["a"]
        return decimal_like(Fr(64, 9), a) - bounds.U(a, v)

    register(f"U_above_4_v{_v}", "a", f"U(a) - 4 with v = {_v}")(_u_low)
    register(f"U_below_64_9_v{_v}", "a", f"64/9 - U(a) with v = {_v}")(_u_high)


@register("sigma_headroom", "a", "4 + 8/((1-a)(1+a)^3) - 64/9")
def _head(e):
    return bounds.sigma_headroom(e["a"])


@register("lambda_radius_R1", "a", "1 - (1 - sin(pi/9))^9 - a")
def _lr1(e):
    return bounds.lambda_radius_margin(e["a"], 1)


@register("lambda_radius_R04", "a", "1 - (1 - sin(pi/9))^9 - 0.4a")
def _lr04(e):
    a = e["a"]
    return bounds.lambda_radius_margin(a, _R("0.4", a))


# integer case selection: v = ceil(v_ratio), v* = ceil(vstar_ratio)
for _name, _ratio in (("v", bounds.v_ratio), ("vstar", bounds.vstar_ratio)):
    for _j in (5, 6, 7):

        def _above(e, f=_ratio, j=_j):
            return f(e["a"]) - j

        def _below(e, f=_ratio, j=_j):
            return j - f(e["a"])

        register(f"{_name}_ratio_above_{_j}", "a", f"{_name} ratio - {_j}")(_above)
        register(f"{_name}_ratio_below_{_j}", "a", f"{_j} - {_name} ratio")(_below)


# closed-form constants, as (closed form - x): positive left of the constant
for _name, _cf in (
    ("a1", bounds.a1_closed),
    ("a2", bounds.a2_closed),
    ("v5_threshold", bounds.v5_threshold_closed),
    ("vstar7_threshold", bounds.vstar7_threshold_closed),
):

    def _gap(e, cf=_cf):
        x = e["x"]
        return cf(x) - x

    register(f"{_name}_gap", "x", f"closed form of {_name} minus x")(_gap)
