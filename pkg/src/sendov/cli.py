"""Command line: ``sendov check | certify | search | measure``.

Exit codes: 0 success, 1 usage or I/O error, 2 check failure,
3 conjecture-critical finding, 4 certification inconclusive or refuted.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from typing import Optional, Sequence

from . import certify, mahler
from .instance import SendovInstance
from .poly import Polynomial
from .search import SearchConfig, extremal_search
from .suite import SECTIONS, RunConfig, emit_report, run_check_suite

log = logging.getLogger("sendov")

EXIT_OK, EXIT_USAGE, EXIT_FAIL, EXIT_CRITICAL, EXIT_UNCERTIFIED = 0, 1, 2, 3, 4


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: error: {message}")


def _write_json(doc: dict, path: Optional[str]) -> None:
    text = json.dumps(doc, sort_keys=True, indent=1, allow_nan=False)
    if path in (None, "-"):
        print(text)
        return
    try:
        with open(path, "w") as fh:
            fh.write(text + "\n")
    except OSError as exc:
        raise OSError(f"cannot write {path!r}: {exc.strerror or exc}") from exc


def _read_json(path: str):
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise OSError(f"cannot read {path!r}: {exc.strerror or exc}") from exc
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path!r} is not valid JSON: {exc}") from exc


def cmd_check(args) -> int:
    cfg = RunConfig(seed=args.seed, n=args.n, count=args.count, tol=args.tol, out_path=args.out,
                    workers=args.workers, sections=tuple(args.sections.split(",")),
                    quad_nodes=args.nodes)
    instances = None
    if args.instance:
        doc = _read_json(args.instance)
        docs = doc if isinstance(doc, list) else [doc]
        instances = [SendovInstance.from_json(d) for d in docs]
    t0 = time.perf_counter()
    report = run_check_suite(cfg, instances)
    report.elapsed = time.perf_counter() - t0
    emit_report(report, args.out, {"workers": cfg.workers, "out_path": cfg.out_path})
    for agg in report.aggregates:
        log.info("%-28s runs=%d pass=%d fail=%d vacuous=%d", agg.check_id, agg.runs,
                 agg.passes, agg.failures, agg.vacuous)
    if report.findings:
        log.error("%d conjecture-critical findings", len(report.findings))
    print(f"check: {report.failures} failures, {len(report.findings)} conjecture-critical; report {args.out}")
    return report.exit_code


def cmd_certify(args) -> int:
    ids = [c.strip() for c in args.claims.split(",") if c.strip()]
    unknown = [c for c in ids if c not in certify.CLAIMS]
    if unknown:
        raise UsageError(f"unknown claims {unknown}; known: {','.join(certify.CLAIMS)}")
    if args.max_depth < 1:
        raise UsageError("--max-depth must be >= 1")
    if args.workers > 1:
        with ProcessPoolExecutor(max_workers=args.workers) as pool:
            certs = list(pool.map(certify.run_claim, ids, [args.max_depth] * len(ids)))
    else:
        certs = [certify.run_claim(c, args.max_depth) for c in ids]
    _write_json(certify.certificates_document(certs), args.out)
    for c in certs:
        print(f"{c.claim_id}: {c.status} ({c.boxes} boxes, depth {c.max_depth}, {c.elapsed:.2f} s)")
    return EXIT_OK if all(c.certified for c in certs) else EXIT_UNCERTIFIED


def cmd_search(args) -> int:
    cfg = SearchConfig(n=args.n, restarts=args.restarts, seed=args.seed)
    t0 = time.perf_counter()
    res = extremal_search(config=cfg, workers=args.workers)
    doc = {"config": {"n": cfg.n, "restarts": cfg.restarts, "seed": cfg.seed},
           "result": res.to_json(),
           "meta": {"elapsed_seconds": time.perf_counter() - t0}}
    _write_json(doc, args.out)
    print(f"search: best I = {res.best_I:.12f} over {res.restarts} restarts"
          + ("  CONJECTURE-CRITICAL" if res.conjecture_flag else ""))
    return EXIT_CRITICAL if res.conjecture_flag else EXIT_OK


def measure_document(doc: dict, rho: float, m: float, nodes: int,
                     check_nodes: int = mahler.QUAD_NODES) -> tuple[dict, bool]:
    """Mahler measure of a polynomial document, plus the lemma and product
    checks when the document is an instance. Returns (output, all passed).

    ``nodes`` is the grid for the measure of p itself; the lemma checks run
    on their own grid of ``check_nodes``.
    """
    if "coeffs" in doc:
        p = Polynomial.from_json(doc)
        rep = mahler.mahler_quadrature(p, nodes)
        out = {"kind": "polynomial", "closed_form": rep.closed_form_value,
               "quadrature": rep.quadrature_value, "abs_diff": rep.abs_diff, "nodes": rep.nodes}
        return out, True
    if "zeros" not in doc:
        raise UsageError("expected a polynomial ({'coeffs'}) or an instance ({'a', 'zeros'})")
    inst = SendovInstance.from_json(doc)
    rep = mahler.mahler_quadrature(inst.p, nodes)
    results = [
        mahler.lemma_4_1_check(inst, rho, nodes=check_nodes),
        mahler.lemma_4_2_check(inst.n, rho, m, nodes=check_nodes),
        mahler.szego_decomposition_check(inst, rho, m),
        mahler.theorem3_check(inst, rho, m),
    ]
    lhs, rhs, _ = mahler.theorem3_sides(inst, rho, m)
    out = {"kind": "instance", "rho": rho, "m": m, "nodes": nodes, "check_nodes": check_nodes,
           "mahler_closed_form": rep.closed_form_value, "mahler_quadrature": rep.quadrature_value,
           "lemma_4_1_formula": mahler.lemma_4_1_formula(inst, rho),
           "lemma_4_2_formula": mahler.lemma_4_2_formula(inst.n, rho, m)[0],
           "theorem_3": {"lhs": lhs, "rhs": rhs},
           "checks": [r.to_json() for r in results]}
    return out, all(r.passed for r in results)


def cmd_measure(args) -> int:
    if args.rho <= 0:
        raise UsageError("--rho must be positive")
    out, ok = measure_document(_read_json(args.poly), args.rho, args.m, args.nodes,
                               args.check_nodes)
    _write_json(out, args.out)
    return EXIT_OK if ok else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="sendov", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("check", help="run the property suite over random instances")
    p.add_argument("--n", type=int, default=9)
    p.add_argument("--count", type=int, default=1000)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--tol", type=float, default=1e-9)
    p.add_argument("--out", default="report.json")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--sections", default=",".join(SECTIONS))
    p.add_argument("--nodes", type=int, default=mahler.QUAD_NODES, help="quadrature nodes")
    p.add_argument("--instance", help="JSON instance (or list of instances) to check instead")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("certify", help="run the interval positivity certificates")
    p.add_argument("--claims", default=",".join(certify.CLAIMS))
    p.add_argument("--max-depth", type=int, default=certify.DEFAULT_DEPTH)
    p.add_argument("--out", default="certs.json")
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_certify)

    p = sub.add_parser("search", help="multistart search for large I(p)")
    p.add_argument("--n", type=int, default=9)
    p.add_argument("--restarts", type=int, default=200)
    p.add_argument("--seed", type=int, default=7)
    p.add_argument("--out", default="search.json")
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("measure", help="Mahler measures and product checks for one input")
    p.add_argument("--poly", required=True, help="polynomial or instance JSON")
    p.add_argument("--rho", type=float, default=1.0)
    p.add_argument("--m", type=float, default=0.25)
    p.add_argument("--nodes", type=int, default=4096, help="nodes for the measure of p")
    p.add_argument("--check-nodes", type=int, default=mahler.QUAD_NODES,
                   help="nodes for the lemma quadrature checks")
    p.add_argument("--out", default="-")
    p.set_defaults(func=cmd_measure)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except (UsageError, OSError, ValueError) as exc:
        print(f"sendov {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
