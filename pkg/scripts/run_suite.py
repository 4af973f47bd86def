"""Property suite over generated instances, with a per-check summary table."""

from __future__ import annotations

import argparse
import time

from sendov.suite import SECTIONS, RunConfig, emit_report, run_check_suite


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--count", type=int, default=1000)
    ap.add_argument("--seed", type=int, default=42)
    ap.add_argument("--tol", type=float, default=1e-9)
    ap.add_argument("--sections", default=",".join(SECTIONS))
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("--out", default="report.json")
    args = ap.parse_args()
    cfg = RunConfig(seed=args.seed, count=args.count, tol=args.tol, out_path=args.out,
                    workers=args.workers, sections=tuple(args.sections.split(",")))
    t0 = time.perf_counter()
    report = run_check_suite(cfg)
    report.elapsed = time.perf_counter() - t0
    emit_report(report, cfg.out_path, {"workers": cfg.workers})
    print(f"{'check':28s} {'runs':>6s} {'pass':>6s} {'fail':>5s} {'vacuous':>7s}  worst residual")
    for a in report.aggregates:
        worst = "-" if a.worst_residual is None else f"{a.worst_residual:.3g}"
        print(f"{a.check_id:28s} {a.runs:6d} {a.passes:6d} {a.failures:5d} {a.vacuous:7d}  {worst}")
    print(f"{report.elapsed:.1f} s, exit status {report.exit_code}, "
          f"{len(report.findings)} conjecture-critical findings")


if __name__ == "__main__":
    main()
