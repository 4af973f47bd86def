"""Reproducible random Sendov instances.

Every draw uses its own generator seeded by ``SeedSequence([seed, index])``,
so an instance depends only on (seed, index) and never on scheduling.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .instance import SendovInstance, build_instance
from .poly import RootFindError, antiderivative_zero_at, find_roots, from_roots, roots_batch

A_RANGE = (0.05, 0.95)
EXCLUSION = 1e-3
DISK_ACCEPT_TOL = 1e-10
MAX_DRAWS = 10_000


def rng_for(seed: int, index: int, stream: int = 0) -> np.random.Generator:
    """Generator for draw ``index`` of run ``seed``; ``stream`` separates uses."""
    return np.random.default_rng(np.random.SeedSequence([int(seed), int(index), int(stream)]))


def uniform_disk(rng: np.random.Generator, size: int) -> np.ndarray:
    """``size`` points uniform on the closed unit disk."""
    rad = np.sqrt(rng.random(size))
    ang = 2 * np.pi * rng.random(size)
    return rad * np.exp(1j * ang)


def generate_random_instance(seed: int, index: int, n: int = 9) -> SendovInstance:
    """a uniform in [0.05, 0.95] and n - 1 zeros uniform on the disk, each
    redrawn while it lies within 1e-3 of 0 or of a."""
    if not 2 <= n <= 12:
        raise ValueError(f"degree n={n} outside [2, 12]")
    rng = rng_for(seed, index)
    a = float(rng.uniform(*A_RANGE))
    zeros = []
    while len(zeros) < n - 1:
        z = complex(uniform_disk(rng, 1)[0])
        if abs(z) >= EXCLUSION and abs(z - a) >= EXCLUSION:
            zeros.append(z)
    return build_instance(a, zeros)


@dataclass(frozen=True)
class CriticalsDraw:
    """Outcome of one attempt to build an instance from chosen critical points."""

    accepted: bool
    instance: Optional[SendovInstance]
    reason: str
    criticals: tuple[complex, ...] = ()
    max_modulus: float = math.nan


def instance_from_criticals(a: float, criticals: Sequence[complex]) -> CriticalsDraw:
    """Integrate n prod (z - zeta_j) from a and keep it if every zero is in the disk.

    Critical points closer than 1 to ``a`` are rejected before integrating,
    since the point of the construction is rho_1 >= 1. Zeros found within
    1e-10 outside the circle are pulled back onto it.
    """
    crit = tuple(complex(z) for z in criticals)
    n = len(crit) + 1
    if not 0 < a <= 1:
        raise ValueError(f"a={a} outside (0, 1]")
    near = min(abs(z - a) for z in crit)
    if near < 1:
        return CriticalsDraw(False, None, f"prefilter: min |zeta - a| = {near:.6g} < 1", crit)
    p = antiderivative_zero_at(from_roots(crit, lead=float(n)), a)
    try:
        roots = list(find_roots(p).roots)
    except RootFindError as exc:
        return CriticalsDraw(False, None, f"root finder failed: {exc}", crit)
    k = min(range(n), key=lambda i: abs(roots[i] - a))
    others = roots[:k] + roots[k + 1:]
    top = max(abs(z) for z in others)
    if top > 1 + DISK_ACCEPT_TOL:
        return CriticalsDraw(False, None, f"zero outside the disk: max |z| = {top:.6g}", crit, top)
    others = [z / abs(z) if abs(z) > 1 else z for z in others]
    return CriticalsDraw(True, build_instance(a, others), "accepted", crit, top)


def _sample_far_point(rng: np.random.Generator, a: float) -> complex:
    for _ in range(MAX_DRAWS):
        z = complex(uniform_disk(rng, 1)[0])
        if abs(z - a) >= 1:
            return z
    raise RuntimeError(f"no disk point at distance >= 1 from a={a} after {MAX_DRAWS} draws")


def generate_from_criticals(seed: int, index: int, a: float, n: int = 9) -> CriticalsDraw:
    """One rejection-sampling attempt: n - 1 critical points uniform on the part
    of the disk at distance >= 1 from a, then ``instance_from_criticals``."""
    if not 0 < a <= 1:
        raise ValueError(f"a={a} outside (0, 1]")
    return instance_from_criticals(a, _draw_criticals(seed, index, a, n))


def _draw_criticals(seed: int, index: int, a: float, n: int) -> list[complex]:
    rng = rng_for(seed, index, stream=1)
    return [_sample_far_point(rng, a) for _ in range(n - 1)]


@dataclass
class AcceptanceStats:
    a: float
    attempts: int = 0
    accepted: int = 0
    reasons: dict = field(default_factory=dict)
    accepted_indices: list = field(default_factory=list)

    @property
    def rate(self) -> float:
        return self.accepted / self.attempts if self.attempts else 0.0

    def to_json(self) -> dict:
        return {
            "a": self.a,
            "attempts": self.attempts,
            "accepted": self.accepted,
            "rate": self.rate,
            "rejections": dict(sorted(self.reasons.items())),
            "accepted_indices": list(self.accepted_indices),
        }


def acceptance_run(seed: int, a: float, attempts: int, n: int = 9, batch: int = 2048) -> AcceptanceStats:
    """Tally ``generate_from_criticals`` over indices 0..attempts-1.

    The draws are the same as the one-at-a-time path; only the root finding
    of the integrated polynomials is batched. Accepted rows are rebuilt
    through ``instance_from_criticals`` so outcomes match it exactly.
    """
    stats = AcceptanceStats(a)
    for start in range(0, attempts, batch):
        idx = range(start, min(attempts, start + batch))
        crits = [_draw_criticals(seed, i, a, n) for i in idx]
        rows = np.array([antiderivative_zero_at(from_roots(c, lead=float(n)), a).coeffs for c in crits])
        roots, _, _, conv = roots_batch(rows)
        for i, c, rts, ok in zip(idx, crits, roots, conv):
            stats.attempts += 1
            k = int(np.argmin(np.abs(rts - a)))
            top = float(np.max(np.abs(np.delete(rts, k)))) if ok else math.inf
            if ok and top > 1 + 10 * DISK_ACCEPT_TOL:
                draw = CriticalsDraw(False, None, "zero outside the disk")
            else:
                draw = instance_from_criticals(a, c)
            if draw.accepted:
                stats.accepted += 1
                stats.accepted_indices.append(i)
            else:
                key = draw.reason.split(":")[0]
                stats.reasons[key] = stats.reasons.get(key, 0) + 1
    return stats
