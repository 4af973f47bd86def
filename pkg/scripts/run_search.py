"""Multistart search for large I(p), reporting the best configuration."""

from __future__ import annotations

import argparse
import time

from sendov.search import SearchConfig, extremal_search


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, default=9)
    ap.add_argument("--restarts", type=int, default=200)
    ap.add_argument("--seed", type=int, default=7)
    ap.add_argument("--workers", type=int, default=1)
    args = ap.parse_args()
    cfg = SearchConfig(n=args.n, restarts=args.restarts, seed=args.seed)
    t0 = time.perf_counter()
    res = extremal_search(config=cfg, workers=args.workers)
    vals = sorted(res.restart_values, reverse=True)
    print(f"best I = {res.best_I:.12f} ({time.perf_counter() - t0:.1f} s)")
    print("top restart values:", " ".join(f"{v:.6f}" for v in vals[:10]))
    print(f"zeros on the circle: {res.boundary_zeros}, longest empty arc {res.longest_empty_arc:.4f}")
    for z in res.best_zeros:
        print(f"  {z.real:+.9f} {z.imag:+.9f}i  |z| = {abs(z):.9f}")
    if res.conjecture_flag:
        print(f"CONJECTURE-CRITICAL: high-precision value {res.confirmed_I}")


if __name__ == "__main__":
    main()
