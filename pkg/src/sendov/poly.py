"""Complex polynomials with ascending coefficient storage and a batched
Aberth-Ehrlich root finder.

Coefficients are always stored lowest degree first, so ``coeffs[k]`` is the
coefficient of ``z**k``.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

import numpy as np

MAX_ITER = 500
DEFAULT_TOL = 1e-12
# a merged cluster may be at most this many times the predicted rounding ring
RING_RATIO = 2.0
_ANGLE_OFFSET = 0.4  # radians; breaks symmetry with real-coefficient inputs


class RootFindError(RuntimeError):
    """Raised when the root finder hits its iteration cap without meeting tol."""

    def __init__(self, message: str, result: "RootFindResult"):
        super().__init__(message)
        self.result = result


@dataclass(frozen=True, eq=False)
class Polynomial:
    coeffs: np.ndarray

    def __post_init__(self):
        c = np.array(self.coeffs, dtype=np.complex128).ravel()
        if c.size == 0:
            c = np.zeros(1, dtype=np.complex128)
        if not np.all(np.isfinite(c)):
            raise ValueError("polynomial coefficients must be finite")
        nz = np.nonzero(c)[0]
        c = c[: nz[-1] + 1] if nz.size else c[:1]
        c.flags.writeable = False
        object.__setattr__(self, "coeffs", c)

    @property
    def degree(self) -> int:
        return self.coeffs.size - 1

    @property
    def lead(self) -> complex:
        return complex(self.coeffs[-1])

    @property
    def is_zero(self) -> bool:
        return self.coeffs.size == 1 and self.coeffs[0] == 0

    def __call__(self, z):
        return evaluate(self, z)

    def __eq__(self, other):
        if not isinstance(other, Polynomial):
            return NotImplemented
        return np.array_equal(self.coeffs, other.coeffs)

    def __hash__(self):
        return hash(self.coeffs.tobytes())

    def __repr__(self):
        return f"Polynomial({self.coeffs.tolist()!r})"

    def __add__(self, other):
        other = _as_poly(other)
        n = max(self.coeffs.size, other.coeffs.size)
        out = np.zeros(n, dtype=np.complex128)
        out[: self.coeffs.size] += self.coeffs
        out[: other.coeffs.size] += other.coeffs
        return Polynomial(out)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial(-self.coeffs)

    def __sub__(self, other):
        return self + (-_as_poly(other))

    def __rsub__(self, other):
        return _as_poly(other) - self

    def __mul__(self, other):
        other = _as_poly(other)
        return Polynomial(np.convolve(self.coeffs, other.coeffs))

    __rmul__ = __mul__

    def to_json(self) -> dict:
        return {"coeffs": [[float(c.real), float(c.imag)] for c in self.coeffs]}

    @classmethod
    def from_json(cls, doc: dict) -> "Polynomial":
        return cls([complex(re, im) for re, im in doc["coeffs"]])

    def dumps(self) -> str:
        return json.dumps(self.to_json())


def _as_poly(x) -> Polynomial:
    if isinstance(x, Polynomial):
        return x
    return Polynomial([complex(x)])


@dataclass(frozen=True)
class RootFindResult:
    roots: tuple[complex, ...]
    residuals: tuple[float, ...]
    iterations: int
    converged: bool


def from_roots(roots: Iterable[complex], lead: complex = 1.0) -> Polynomial:
    if lead == 0:
        raise ValueError("leading coefficient must be nonzero")
    c = np.array([lead], dtype=np.complex128)
    for r in roots:
        # multiply by (z - r); ascending order
        nxt = np.zeros(c.size + 1, dtype=np.complex128)
        nxt[1:] += c
        nxt[:-1] -= r * c
        c = nxt
    return Polynomial(c)


def derivative(p: Polynomial) -> Polynomial:
    if p.degree == 0:
        return Polynomial([0.0])
    k = np.arange(1, p.coeffs.size)
    return Polynomial(p.coeffs[1:] * k)


def evaluate(p: Polynomial, z):
    """Horner evaluation; ``z`` may be a scalar or an array."""
    c = p.coeffs
    z = np.asarray(z, dtype=np.complex128)
    acc = np.full(z.shape, c[-1], dtype=np.complex128)
    for ck in c[-2::-1]:
        acc = acc * z + ck
    return complex(acc) if acc.ndim == 0 else acc


def scaled_residual(p: Polynomial, z) -> np.ndarray:
    """|p(z)| / sum_k |c_k| |z|^k, elementwise."""
    z = np.asarray(z, dtype=np.complex128)
    num = np.abs(evaluate(p, z))
    den = evaluate(Polynomial(np.abs(p.coeffs)), np.abs(z)).real
    with np.errstate(invalid="ignore", divide="ignore"):
        out = np.where(den > 0, num / np.where(den > 0, den, 1.0), np.where(num > 0, np.inf, 0.0))
    return out


def antiderivative_zero_at(q: Polynomial, a: complex) -> Polynomial:
    """The polynomial P with P' = q and P(a) = 0."""
    if q.is_zero:
        raise ValueError("antiderivative of the zero polynomial is not normalised")
    k = np.arange(1, q.coeffs.size + 1)
    c = np.concatenate([[0.0], q.coeffs / k])
    P = Polynomial(c)
    return P - evaluate(P, a)


def compose_linear(p: Polynomial, scale: complex, shift: complex) -> Polynomial:
    """Return z -> p(scale*z + shift)."""
    lin = Polynomial([shift, scale])
    out = Polynomial([p.coeffs[-1]])
    for ck in p.coeffs[-2::-1]:
        out = out * lin + ck
    return out


def deflate(p: Polynomial, a: complex) -> tuple[Polynomial, complex]:
    """Synthetic division p(z) = (z - a) q(z) + rem; returns (q, rem)."""
    c = p.coeffs
    n = c.size - 1
    if n == 0:
        return Polynomial([0.0]), complex(c[0])
    q = np.zeros(n, dtype=np.complex128)
    acc = c[-1]
    for k in range(n - 1, -1, -1):
        q[k] = acc
        acc = acc * a + c[k]
    return Polynomial(q), complex(acc)


# --------------------------------------------------------------------------
# batched Aberth-Ehrlich


def _horner_rows(C: np.ndarray, x: np.ndarray) -> np.ndarray:
    acc = np.repeat(C[:, -1:], x.shape[1], axis=1)
    for j in range(C.shape[1] - 2, -1, -1):
        acc = acc * x + C[:, j : j + 1]
    return acc


def _cauchy_start(C: np.ndarray) -> np.ndarray:
    n = C.shape[1] - 1
    ratios = np.abs(C[:, :-1] / C[:, -1:])
    radius = 1.0 + ratios.max(axis=1)
    ang = 2 * math.pi * np.arange(n) / n + _ANGLE_OFFSET
    return radius[:, None] * np.exp(1j * ang)[None, :]


def _row_residuals(C: np.ndarray, x: np.ndarray) -> np.ndarray:
    num = np.abs(_horner_rows(C, x))
    den = _horner_rows(np.abs(C).astype(np.complex128), np.abs(x).astype(np.complex128)).real
    with np.errstate(invalid="ignore", divide="ignore"):
        return np.where(den > 0, num / np.where(den > 0, den, 1.0), np.where(num > 0, np.inf, 0.0))


def roots_batch(C: np.ndarray, tol: float = DEFAULT_TOL, max_iter: int = MAX_ITER):
    """Roots of every row of ``C`` (shape (B, n+1), ascending, nonzero lead).

    Returns (roots (B, n), residuals (B, n), iterations (B,), converged (B,)).
    """
    C = np.asarray(C, dtype=np.complex128)
    if C.ndim != 2 or C.shape[1] < 2:
        raise ValueError("need a 2-d array of polynomials of degree >= 1")
    if np.any(C[:, -1] == 0):
        raise ValueError("leading coefficients must be nonzero")
    C = C / C[:, -1:]
    B, n = C.shape[0], C.shape[1] - 1
    at_zero = C[:, 0] == 0
    if at_zero.any():
        # componentwise residuals of z^k are identically 1, so exact roots at
        # the origin are split off instead of iterated on
        out = [np.empty((B, n), dtype=np.complex128), np.empty((B, n)),
               np.zeros(B, dtype=int), np.ones(B, dtype=bool)]
        if (~at_zero).any():
            for o, v in zip(out, roots_batch(C[~at_zero], tol, max_iter)):
                o[~at_zero] = v
        for b in np.flatnonzero(at_zero):
            k = int(np.argmax(C[b] != 0))
            out[0][b, :k], out[1][b, :k] = 0.0, 0.0
            if k < n:
                x, r, it, cv = roots_batch(C[b:b + 1, k:], tol, max_iter)
                out[0][b, k:], out[1][b, k:], out[2][b], out[3][b] = x[0], r[0], it[0], cv[0]
        return tuple(out)
    if n == 1:
        x = -C[:, :1]
        return x, _row_residuals(C, x), np.zeros(B, dtype=int), np.ones(B, dtype=bool)

    D = C[:, 1:] * np.arange(1, n + 1)[None, :]
    x = _cauchy_start(C)
    active = np.ones((B, n), dtype=bool)
    iters = np.zeros(B, dtype=int)
    eye = np.eye(n, dtype=bool)
    res_floor = min(tol * 1e-2, 4 * n * np.finfo(float).eps)
    for it in range(max_iter):
        rows = np.any(active, axis=1)
        if not rows.any():
            break
        iters[rows] = it + 1
        xr = x[rows]
        pv = _horner_rows(C[rows], xr)
        dv = _horner_rows(D[rows], xr)
        diff = xr[:, :, None] - xr[:, None, :]
        diff[:, eye] = 1.0
        with np.errstate(divide="ignore", invalid="ignore"):
            inv = 1.0 / diff
            inv[:, eye] = 0.0
            s = inv.sum(axis=2)
            ratio = pv / dv
            w = ratio / (1.0 - ratio * s)
        bad = ~np.isfinite(w)
        w[bad] = 0.0
        # exact hits (pv == 0) are done; dv == 0 gets a small kick instead
        kick = bad & (pv != 0)
        w[kick] = 1e-3 * (1.0 + np.abs(xr[kick]))
        w[~active[rows]] = 0.0
        xr = xr - w
        x[rows] = xr
        small = np.abs(w) <= 4 * np.finfo(float).eps * (1.0 + np.abs(xr))
        tiny_res = _row_residuals(C[rows], xr) <= res_floor
        act = active[rows] & ~((small | tiny_res) & ~kick)
        active[rows] = act

    # one Newton polish pass, kept only where it lowers the residual
    pv = _horner_rows(C, x)
    dv = _horner_rows(D, x)
    with np.errstate(divide="ignore", invalid="ignore"):
        xn = x - pv / dv
    res_old = _row_residuals(C, x)
    ok = np.isfinite(xn)
    xn = np.where(ok, xn, x)
    res_new = _row_residuals(C, xn)
    x = np.where(res_new < res_old, xn, x)
    res = np.minimum(res_old, res_new)
    converged = np.all(res <= tol, axis=1)
    return x, res, iters, converged


def find_roots(p: Polynomial, tol: float = DEFAULT_TOL, max_iter: int = MAX_ITER) -> RootFindResult:
    if p.degree < 1:
        raise ValueError("find_roots needs degree >= 1")
    x, res, iters, conv = roots_batch(p.coeffs[None, :], tol=tol, max_iter=max_iter)
    result = RootFindResult(
        roots=tuple(complex(v) for v in x[0]),
        residuals=tuple(float(v) for v in res[0]),
        iterations=int(iters[0]),
        converged=bool(conv[0]),
    )
    if not result.converged:
        raise RootFindError(
            f"root finder did not reach tol={tol:g} (worst residual {max(result.residuals):.3g})",
            result,
        )
    return result


def _normwise_residual(p: Polynomial, z: complex) -> float:
    den = float(np.sum(np.abs(p.coeffs))) * max(1.0, abs(z)) ** p.degree
    return abs(evaluate(p, z)) / den if den > 0 else 0.0


def _linkage_groups(points: Sequence[complex], radius: float) -> list[list[int]]:
    """Single-linkage groups of ``points`` at distance ``radius * (1 + |z|)``."""
    n = len(points)
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(n):
        for j in range(i + 1, n):
            if abs(points[i] - points[j]) <= radius * (1.0 + abs(points[i])):
                parent[find(i)] = find(j)
    groups: dict[int, list[int]] = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    return list(groups.values())


def _multiple_root(p: Polynomial, cluster: Sequence[complex], tol: float) -> Optional[complex]:
    """The m-fold root of p that ``cluster`` (m points) approximates, if p and
    its first m - 1 derivatives all vanish there to normwise error ``tol``."""
    m = len(cluster)
    c = complex(np.mean(cluster))
    # an m-fold root of p is a simple root of p^(m-1): polish there
    q = p
    for _ in range(m - 1):
        q = derivative(q)
    dq = derivative(q)
    for _ in range(8):
        dv = evaluate(dq, c)
        if dv == 0:
            break
        step = evaluate(q, c) / dv
        c -= step
        if abs(step) <= 4 * np.finfo(float).eps * (1.0 + abs(c)):
            break
    mean = complex(np.mean(cluster))
    if abs(c - mean) > max(abs(z - mean) for z in cluster):
        return None  # the polish left the cluster for some other root
    q = p
    for _ in range(m):
        if _normwise_residual(q, c) > tol:
            return None
        q = derivative(q)
    # rounding scatters an m-fold root into a ring of radius about
    # (n eps |p|_1 / |p^(m)(c)/m!|)^(1/m); a wider cluster is several simple roots
    top = abs(evaluate(q, c)) / math.factorial(m)
    if top == 0:
        return None
    scale = float(np.sum(np.abs(p.coeffs))) * max(1.0, abs(c)) ** p.degree
    ring = (16 * p.degree * np.finfo(float).eps * scale / top) ** (1.0 / m)
    if max(abs(z - c) for z in cluster) > RING_RATIO * ring:
        return None
    return c


def merge_clusters(
    p: Polynomial, roots: Sequence[complex], tol: float = DEFAULT_TOL, radius: float = 0.1,
    min_radius: float = 1e-9,
) -> tuple[complex, ...]:
    """Replace root clusters that are numerically a single multiple root.

    A multiple root of multiplicity m comes back from the iteration as a
    ring of radius ~eps**(1/m). Roots are grouped by single linkage; a group
    of m is merged into m copies of one point c only if p, p', ..., p^(m-1)
    all vanish at c to normwise backward error ``tol`` and the group is no
    wider than RING_RATIO times the ring rounding would produce. A group that fails
    is first peeled (farthest-from-centroid members dropped one at a time)
    and otherwise regrouped at a quarter of the radius, so a multiple root
    sitting near an unrelated simple root is still found.
    """
    out = [complex(z) for z in roots]

    def visit(idx: list[int], rad: float) -> None:
        for g in _linkage_groups([out[i] for i in idx], rad):
            members = [idx[i] for i in g]
            if len(members) < 2:
                continue
            c = _multiple_root(p, [out[i] for i in members], tol)
            if c is not None:
                for i in members:
                    out[i] = c
                continue
            core = peel(members)
            if core:
                visit([i for i in members if i not in core], rad)
            elif rad / 4 >= min_radius:
                visit(members, rad / 4)

    def peel(members: list[int]) -> list[int]:
        # drop the member farthest from the centroid until the rest is a multiple root
        core = list(members)
        while len(core) > 2:
            mean = np.mean([out[i] for i in core])
            core.remove(max(core, key=lambda i: abs(out[i] - mean)))
            c = _multiple_root(p, [out[i] for i in core], tol)
            if c is not None:
                for i in core:
                    out[i] = c
                return core
        return []

    visit(list(range(len(out))), radius)
    return tuple(out)
