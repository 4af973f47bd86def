"""Rejection-sampling statistics for instances built from far critical points.

Critical points are drawn at distance >= 1 from a, integrated from a, and
the draw is kept only if every other zero lands in the closed disk.
Prints one JSON line per value of a.
"""

from __future__ import annotations

import argparse
import json
import time
from dataclasses import dataclass

from sendov.generate import acceptance_run


@dataclass(frozen=True)
class Config:
    seed: int = 11
    attempts: int = 100_000
    a_values: tuple[float, ...] = (0.8, 0.9, 0.99, 1.0)
    n: int = 9


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--seed", type=int, default=Config.seed)
    ap.add_argument("--attempts", type=int, default=Config.attempts)
    ap.add_argument("--a", type=float, nargs="+", default=list(Config.a_values))
    args = ap.parse_args()
    cfg = Config(args.seed, args.attempts, tuple(args.a))
    for a in cfg.a_values:
        t0 = time.perf_counter()
        stats = acceptance_run(cfg.seed, a, cfg.attempts, cfg.n)
        doc = stats.to_json()
        doc["accepted_indices"] = doc["accepted_indices"][:20]
        doc["elapsed_seconds"] = round(time.perf_counter() - t0, 2)
        print(json.dumps(doc))


if __name__ == "__main__":
    main()
