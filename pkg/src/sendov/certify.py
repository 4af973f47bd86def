"""Branch-and-bound positivity certificates for the registered claim functions."""

from __future__ import annotations

import json
import math
import time
from collections import deque
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Iterable, Mapping, Optional, Sequence, Union

from . import bounds, claims
from .intervals import DomainError, Dual, Interval

MAX_DEPTH_LIMIT = 60
DEFAULT_DEPTH = 48
DEFAULT_BOX_BUDGET = 400_000

Endpoint = Union[str, float, int, Fraction]


def _point_or_decimal(x: Endpoint) -> Interval:
    """Decimal strings and rationals become their tightest enclosure; floats are exact."""
    if isinstance(x, float):
        return Interval.point(x)
    return Interval.decimal(x)


@dataclass(frozen=True)
class Box:
    """Named product of intervals, ordered by variable name."""

    items: tuple[tuple[str, Interval], ...]

    @classmethod
    def of(cls, mapping: Mapping[str, Interval]) -> "Box":
        if not mapping:
            raise ValueError("empty box")
        unknown = set(mapping) - claims.VARIABLES
        if unknown:
            raise ValueError(f"unknown variables {unknown}")
        return cls(tuple(sorted(mapping.items())))

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(k for k, _ in self.items)

    def as_dict(self) -> dict[str, Interval]:
        return dict(self.items)

    def widest(self) -> int:
        widths = [iv.width for _, iv in self.items]
        return widths.index(max(widths))

    def bisect(self) -> tuple["Box", "Box"]:
        i = self.widest()
        name, iv = self.items[i]
        left, right = iv.bisect()
        lst = list(self.items)
        lst[i] = (name, left)
        a = Box(tuple(lst))
        lst[i] = (name, right)
        return a, Box(tuple(lst))

    def midpoint(self) -> dict[str, float]:
        return {k: iv.mid for k, iv in self.items}

    def to_json(self) -> dict:
        return {k: [iv.lo, iv.hi] for k, iv in self.items}

    @classmethod
    def from_json(cls, doc: Mapping[str, Sequence[float]]) -> "Box":
        return cls.of({k: Interval(float(v[0]), float(v[1])) for k, v in doc.items()})


def _env_for(fn: claims.ClaimFn, box: Box) -> dict:
    env = box.as_dict()
    missing = set(fn.variables) - set(env)
    if missing:
        raise ValueError(f"box lacks variables {missing} needed by {fn.fn_id}")
    return env


def _as_interval(v) -> Interval:
    if isinstance(v, Interval):
        return v
    return Interval.point(float(v))


def point_eval(fn_id: str, point: Mapping[str, float]) -> Interval:
    """Rigorous enclosure of the function at a single point."""
    fn = claims.get(fn_id)
    return _as_interval(fn({k: Interval.point(point[k]) for k in fn.variables}))


def interval_eval(fn_id: str, box: Union[Box, Mapping[str, Interval]], form: str = "best") -> Interval:
    """Enclosure of the range of ``fn_id`` over ``box``.

    ``form`` is "natural" (plain interval evaluation), "mean_value"
    (f(mid) + grad(box) . (box - mid)) or "best", the intersection of both.
    Raises DomainError when the box leaves the function's domain.
    """
    if not isinstance(box, Box):
        box = Box.of(box)
    fn = claims.get(fn_id)
    env = _env_for(fn, box)
    names = fn.variables
    if form == "natural" or not fn.mean_value:
        return _as_interval(fn({k: env[k] for k in names}))
    duals = {k: Dual.variable(env[k], i, len(names)) for i, k in enumerate(names)}
    d = fn(duals)
    natural = _as_interval(d.val)
    mid = {k: env[k].mid for k in names}
    try:
        mv = point_eval(fn_id, mid)
        for g, k in zip(d.grad, names):
            mv = mv + _as_interval(g) * (env[k] - mid[k])
    except DomainError:
        if form == "mean_value":
            raise
        return natural
    if form == "mean_value":
        return mv
    try:
        return natural.intersect(mv)
    except ValueError:  # disjoint only if an enclosure were unsound
        raise ArithmeticError(f"disjoint enclosures for {fn_id} on {box.to_json()}")


@dataclass(frozen=True)
class Certificate:
    """Outcome of a positivity proof (or of a composite claim built from several).

    status is "certified", "refuted" (``witness`` is a point where the function
    is provably negative) or "inconclusive" (depth or box budget exhausted).
    """

    claim_id: str
    domain: dict
    status: str
    boxes: int
    max_depth: int
    fn: str = ""
    witness: Optional[dict] = None
    detail: str = ""
    parts: tuple["Certificate", ...] = ()
    elapsed: float = field(default=0.0, compare=False)

    @property
    def certified(self) -> bool:
        return self.status == "certified"

    def to_json(self) -> dict:
        """Deterministic body; timing lives in ``timing_json``."""
        out = {
            "claim": self.claim_id,
            "status": self.status,
            "boxes": self.boxes,
            "max_depth": self.max_depth,
            "domain": self.domain,
        }
        if self.fn:
            out["fn"] = self.fn
        if self.witness is not None:
            out["witness"] = self.witness
        if self.detail:
            out["detail"] = self.detail
        if self.parts:
            out["parts"] = [p.to_json() for p in self.parts]
        return out

    def timing_json(self) -> dict:
        out = {"claim": self.claim_id, "elapsed_s": self.elapsed}
        if self.parts:
            out["parts"] = [p.timing_json() for p in self.parts]
        return out


def certify_positive(
    fn_id: str,
    box: Union[Box, Mapping[str, Interval]],
    max_depth: int = DEFAULT_DEPTH,
    claim_id: Optional[str] = None,
    box_budget: int = DEFAULT_BOX_BUDGET,
) -> Certificate:
    """Prove fn > 0 on ``box`` by bisection of the widest side.

    Boxes are processed first-in first-out. A box is closed when its enclosure
    is strictly positive; a midpoint whose enclosure is strictly negative
    refutes the claim and stops the search. Boxes that stay undecided at
    ``max_depth`` make the result inconclusive, but the rest of the tree is
    still explored so a refutation elsewhere is not missed.
    """
    if max_depth > MAX_DEPTH_LIMIT:
        raise ValueError(f"max_depth must be <= {MAX_DEPTH_LIMIT}")
    if not isinstance(box, Box):
        box = Box.of(box)
    t0 = time.perf_counter()
    queue = deque([(box, 0, None)])
    processed = 0
    deepest = 0
    undecided = 0
    status, witness, detail = "certified", None, ""
    while queue:
        if processed >= box_budget:
            status, detail = "inconclusive", f"box budget {box_budget} exhausted"
            break
        b, depth, parent = queue.popleft()
        processed += 1
        deepest = max(deepest, depth)
        try:
            enc = interval_eval(fn_id, b)
            if parent is not None:
                # the range over a sub-box lies inside the parent's enclosure too
                enc = enc.intersect(parent)
        except DomainError:
            enc = None
        if enc is not None and enc.lo > 0:
            continue
        mid = b.midpoint()
        try:
            pv = point_eval(fn_id, mid)
        except DomainError:
            pv = None
        if pv is not None and pv.hi < 0:
            status, witness = "refuted", mid
            detail = f"f(witness) in [{pv.lo:.6g}, {pv.hi:.6g}]"
            break
        if depth >= max_depth:
            undecided += 1
            continue
        for child in b.bisect():
            queue.append((child, depth + 1, enc))
    if status == "certified" and undecided:
        status, detail = "inconclusive", f"{undecided} boxes undecided at depth {max_depth}"
    return Certificate(
        claim_id=claim_id or fn_id,
        domain=box.to_json(),
        status=status,
        boxes=processed,
        max_depth=deepest,
        fn=fn_id,
        witness=witness,
        detail=detail,
        elapsed=time.perf_counter() - t0,
    )


def bracket_constant(
    fn_id: str,
    lo: Endpoint,
    hi: Endpoint,
    positive_from: Optional[Endpoint] = None,
    max_depth: int = DEFAULT_DEPTH,
    claim_id: Optional[str] = None,
) -> Certificate:
    """Certify a root of ``fn_id`` (one variable) strictly inside (lo, hi).

    The function is evaluated on enclosures of the decimal endpoints and must
    have strictly opposite signs there. With ``positive_from`` it must also be
    certified positive on [positive_from, lo], which makes the root the
    smallest one above ``positive_from`` given positivity below it.
    """
    fn = claims.get(fn_id)
    if len(fn.variables) != 1:
        raise ValueError("bracket_constant needs a one-variable function")
    (var,) = fn.variables
    if not Fraction(lo) < Fraction(hi):
        raise ValueError("need lo < hi")
    t0 = time.perf_counter()
    lo_iv, hi_iv = _point_or_decimal(lo), _point_or_decimal(hi)
    cid = claim_id or f"{fn_id}_bracket"
    try:
        flo = interval_eval(fn_id, {var: lo_iv})
        fhi = interval_eval(fn_id, {var: hi_iv})
    except DomainError as exc:
        return Certificate(cid, {var: [lo_iv.lo, hi_iv.hi]}, "inconclusive", 2, 0, fn_id,
                           detail=str(exc), elapsed=time.perf_counter() - t0)
    signs = (1 if flo.lo > 0 else -1 if flo.hi < 0 else 0, 1 if fhi.lo > 0 else -1 if fhi.hi < 0 else 0)
    if 0 in signs:
        status = "inconclusive"
    elif signs[0] == signs[1]:
        status = "refuted"
    else:
        status = "certified"
    detail = f"f(lo) in [{flo.lo:.6g}, {flo.hi:.6g}], f(hi) in [{fhi.lo:.6g}, {fhi.hi:.6g}]"
    sign_cert = Certificate(cid + ":sign_change", {var: [lo_iv.lo, hi_iv.hi]}, status, 2, 0, fn_id,
                            witness={var: float(lo_iv.mid)} if status == "refuted" else None,
                            detail=detail, elapsed=time.perf_counter() - t0)
    if positive_from is None:
        return replace(sign_cert, claim_id=cid)
    pos = certify_positive(fn_id, {var: _iv(positive_from, lo)}, max_depth,
                           claim_id=cid + ":positive_below")
    return combine(cid, [sign_cert, pos])


def combine(claim_id: str, parts: Sequence[Certificate], detail: str = "") -> Certificate:
    """A claim that holds iff every part is certified."""
    statuses = [p.status for p in parts]
    if all(s == "certified" for s in statuses):
        status = "certified"
    elif "refuted" in statuses:
        status = "refuted"
    else:
        status = "inconclusive"
    domain: dict = {}
    for p in parts:
        for k, (lo, hi) in p.domain.items():
            if k in domain:
                domain[k] = [min(domain[k][0], lo), max(domain[k][1], hi)]
            else:
                domain[k] = [lo, hi]
    return Certificate(
        claim_id=claim_id,
        domain=domain,
        status=status,
        boxes=sum(p.boxes for p in parts),
        max_depth=max(p.max_depth for p in parts),
        detail=detail,
        parts=tuple(parts),
        elapsed=sum(p.elapsed for p in parts),
    )


# ---------------------------------------------------------------------------
# the eight named claims


def _enclosure(cf) -> Interval:
    return cf(Interval.point(0.0))


def constant_enclosures() -> dict[str, Interval]:
    """Rigorous enclosures of a1 and a2 from their closed forms."""
    return {"a1": _enclosure(bounds.a1_closed), "a2": _enclosure(bounds.a2_closed)}


def _iv(lo: Endpoint, hi: Endpoint) -> Interval:
    """[lo, hi] widened outward to cover decimal endpoints exactly."""
    return Interval(_point_or_decimal(lo).lo, _point_or_decimal(hi).hi)


def claim_c1(depth: int = DEFAULT_DEPTH) -> Certificate:
    return bracket_constant("a9", "0.4314", "0.4315", positive_from="0.01", max_depth=depth, claim_id="C1")


def claim_c2(depth: int = DEFAULT_DEPTH) -> Certificate:
    return certify_positive("halfplane_R1", {"a": _iv("0.4314", "0.51952")}, depth, claim_id="C2")


def claim_c3(depth: int = DEFAULT_DEPTH) -> Certificate:
    main = certify_positive("halfplane_R04", {"a": _iv("0.5195", "0.9995")}, depth, claim_id="C3:main")
    tail = certify_positive("halfplane_R04_slope", {"a": _iv("0.9995", "1")}, depth, claim_id="C3:tail_decreasing")
    f1 = bounds.halfplane_margin(1.0, 0.4)
    detail = (
        "on [0.9995, 1] the margin is strictly decreasing (tail part) and vanishes at a = 1 "
        f"(float value {f1!r}; at a = 1 every factor is exactly 1), so it is positive on [0.9995, 1)"
    )
    return combine("C3", [main, tail], detail)


def claim_c4(depth: int = DEFAULT_DEPTH) -> Certificate:
    return certify_positive("lemma38", {"x": _iv("0.4", "1")}, depth, claim_id="C4")


def claim_c5(depth: int = DEFAULT_DEPTH) -> Certificate:
    return certify_positive("lemma310_Y", {"a": _iv("0.5", "0.95"), "x": _iv("0.4", "0.999")}, depth, claim_id="C5")


# half-width of the slivers around a1 and a2 where the integer case is left open
SLIVER = 1e-9


def claim_c6(depth: int = DEFAULT_DEPTH) -> Certificate:
    """The contradiction margin is positive on three pieces with fixed (v, v*).

    Exactly at a1 (a2) the v (v*) ratio is an integer, so the case cannot be
    decided in floating point there. Around each constant a sliver of
    half-width SLIVER is covered by both neighbouring cases, and on it the
    ratio is only shown to lie strictly between the two candidate integers.
    """
    enc = constant_enclosures()
    a1, a2 = enc["a1"], enc["a2"]
    s1 = Interval(a1.lo - SLIVER, a1.hi + SLIVER)
    s2 = Interval(a2.lo - SLIVER, a2.hi + SLIVER)
    span = _iv("0.5195", "0.8449")
    lo, hi = span.lo, span.hi
    p = lambda f, l, h, cid: certify_positive(f, {"a": Interval(l, h)}, depth, claim_id=cid)
    parts = [
        bracket_constant("a1_gap", "0.636", "0.637", max_depth=depth, claim_id="C6:a1_bracket"),
        bracket_constant("a2_gap", "0.723", "0.724", max_depth=depth, claim_id="C6:a2_bracket"),
        p("contra_77", lo, s1.hi, "C6a"),
        p("contra_67", s1.lo, s2.hi, "C6b"),
        p("contra_66", s2.lo, hi, "C6c"),
        # v = ceil(v ratio)
        p("v_ratio_above_6", lo, s1.lo, "C6:v=7_lower"),
        p("v_ratio_below_7", lo, s1.lo, "C6:v=7_upper"),
        p("v_ratio_above_5", s1.lo, s1.hi, "C6:v_in_6_7_lower"),
        p("v_ratio_below_7", s1.lo, s1.hi, "C6:v_in_6_7_upper"),
        p("v_ratio_above_5", s1.hi, hi, "C6:v=6_lower"),
        p("v_ratio_below_6", s1.hi, hi, "C6:v=6_upper"),
        # v* = ceil(v* ratio)
        p("vstar_ratio_above_6", lo, s2.lo, "C6:v*=7_lower"),
        p("vstar_ratio_below_7", lo, s2.lo, "C6:v*=7_upper"),
        p("vstar_ratio_above_5", s2.lo, s2.hi, "C6:v*_in_6_7_lower"),
        p("vstar_ratio_below_7", s2.lo, s2.hi, "C6:v*_in_6_7_upper"),
        p("vstar_ratio_above_5", s2.hi, hi, "C6:v*=6_lower"),
        p("vstar_ratio_below_6", s2.hi, hi, "C6:v*=6_upper"),
    ]
    scan = contradiction_sign_change()
    detail = (
        f"a1 in [{a1.lo!r}, {a1.hi!r}], a2 in [{a2.lo!r}, {a2.hi!r}], slivers of half-width "
        f"{SLIVER:g} carry both neighbouring cases; diagnostic (not certified): the (6, 6) margin "
        f"changes sign near a = {scan:.6f}"
    )
    return combine("C6", parts, detail)


def contradiction_sign_change(lo: float = 0.845, hi: float = 0.9, steps: int = 5500) -> float:
    """Float scan for the first sign change of the (6, 6) contradiction margin above ``lo``,
    refined by bisection. Diagnostic only."""
    f = lambda a: bounds.contradiction_margin(a, 6, 6)
    prev_a, prev = lo, f(lo)
    for i in range(1, steps + 1):
        a = lo + (hi - lo) * i / steps
        try:
            val = f(a)
        except (ValueError, ArithmeticError):
            return a
        if (val > 0) != (prev > 0):
            left, right = prev_a, a
            for _ in range(60):
                m = 0.5 * (left + right)
                if (f(m) > 0) == (prev > 0):
                    left = m
                else:
                    right = m
            return 0.5 * (left + right)
        prev_a, prev = a, val
    return math.nan


def claim_c7(depth: int = DEFAULT_DEPTH) -> Certificate:
    a1 = constant_enclosures()["a1"]
    parts = [
        certify_positive("U_above_4_v7", {"a": _iv("0.5195", a1.hi)}, depth, claim_id="C7:U>4,v=7"),
        certify_positive("U_below_64_9_v7", {"a": _iv("0.5195", a1.hi)}, depth, claim_id="C7:U<64/9,v=7"),
        certify_positive("U_above_4_v6", {"a": _iv(a1.lo, "0.8449")}, depth, claim_id="C7:U>4,v=6"),
        certify_positive("U_below_64_9_v6", {"a": _iv(a1.lo, "0.8449")}, depth, claim_id="C7:U<64/9,v=6"),
        certify_positive("sigma_headroom", {"a": _iv("0.5195", "0.8449")}, depth, claim_id="C7:headroom"),
    ]
    return combine("C7", parts)


def claim_c8(depth: int = DEFAULT_DEPTH) -> Certificate:
    parts = [
        certify_positive("lambda_radius_R1", {"a": _iv("0.4314", "0.51952")}, depth, claim_id="C8:R=1"),
        certify_positive("lambda_radius_R04", {"a": _iv("0.5195", "1")}, depth, claim_id="C8:R=0.4"),
        bracket_constant("v5_threshold_gap", "0.948", "0.949", max_depth=depth, claim_id="C8:0.948"),
        bracket_constant("vstar7_threshold_gap", "0.445", "0.446", max_depth=depth, claim_id="C8:0.445"),
    ]
    return combine("C8", parts)


CLAIMS = {
    "C1": claim_c1,
    "C2": claim_c2,
    "C3": claim_c3,
    "C4": claim_c4,
    "C5": claim_c5,
    "C6": claim_c6,
    "C7": claim_c7,
    "C8": claim_c8,
}


def run_claim(claim_id: str, max_depth: int = DEFAULT_DEPTH) -> Certificate:
    try:
        builder = CLAIMS[claim_id]
    except KeyError:
        raise KeyError(f"unknown claim {claim_id!r}; known: {', '.join(CLAIMS)}") from None
    return builder(max_depth)


def run_all_claims(max_depth: int = DEFAULT_DEPTH, ids: Optional[Iterable[str]] = None) -> list[Certificate]:
    return [run_claim(c, max_depth) for c in (ids or CLAIMS)]


def certificates_document(certs: Sequence[Certificate]) -> dict:
    """{"certificates": [...], "meta": {...}}; everything outside "meta" is deterministic."""
    return {
        "certificates": [c.to_json() for c in certs],
        "all_certified": all(c.certified for c in certs),
        "meta": {"timing": [c.timing_json() for c in certs]},
    }


def dumps_body(doc: dict) -> str:
    return json.dumps({k: v for k, v in doc.items() if k != "meta"}, sort_keys=True)
