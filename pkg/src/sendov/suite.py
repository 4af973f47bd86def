"""Property-suite orchestration over generated instances and report emission."""

from __future__ import annotations

import csv
import json
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Optional, Sequence

import numpy as np

from . import checks, halfplane, mahler
from .generate import generate_random_instance, rng_for
from .instance import CheckResult, SendovInstance
from .poly import Polynomial

SECTIONS = ("metrics", "geometry", "mahler")


@dataclass(frozen=True)
class RunConfig:
    seed: int = 42
    n: int = 9
    count: int = 1000
    tol: float = 1e-9
    out_path: str = "report.json"
    workers: int = 1
    sections: tuple[str, ...] = SECTIONS
    quad_nodes: int = mahler.QUAD_NODES

    def __post_init__(self):
        if self.count < 1:
            raise ValueError("count must be >= 1")
        if not 2 <= self.n <= 12:
            raise ValueError(f"degree n={self.n} outside [2, 12]")
        bad = set(self.sections) - set(SECTIONS)
        if bad:
            raise ValueError(f"unknown sections {sorted(bad)}")
        if self.workers < 1:
            raise ValueError("workers must be >= 1")

    def to_json(self) -> dict:
        """Everything that determines the results; where they are written and
        how many workers ran do not, so those go to the report's meta."""
        d = asdict(self)
        d.pop("workers")
        d.pop("out_path")
        d["sections"] = list(self.sections)
        return d


@dataclass(frozen=True)
class Row:
    """One check on one instance, as written to the CSV sidecar."""

    instance: int
    check_id: str
    hypothesis_held: bool
    passed: bool
    residual: float
    critical: bool
    detail: str


@dataclass
class CheckAggregate:
    check_id: str
    runs: int = 0
    passes: int = 0
    failures: int = 0
    vacuous: int = 0
    worst_residual: Optional[float] = None

    def add(self, row: Row) -> None:
        self.runs += 1
        if not row.hypothesis_held:
            self.vacuous += 1
            return
        if row.passed:
            self.passes += 1
        else:
            self.failures += 1
        if math.isfinite(row.residual):
            if self.worst_residual is None or row.residual > self.worst_residual:
                self.worst_residual = row.residual


@dataclass
class RunReport:
    config: dict
    aggregates: list[CheckAggregate] = field(default_factory=list)
    findings: list[dict] = field(default_factory=list)
    certificates: list[dict] = field(default_factory=list)
    rows: list[Row] = field(default_factory=list, repr=False)
    elapsed: float = field(default=0.0, compare=False)

    @property
    def failures(self) -> int:
        return sum(a.failures for a in self.aggregates)

    @property
    def exit_code(self) -> int:
        """0 clean, 2 ordinary failure, 3 conjecture-critical finding."""
        if self.findings:
            return 3
        return 2 if self.failures else 0

    def to_json(self) -> dict:
        """Body of the JSON report; deterministic for a fixed config."""
        return {
            "config": self.config,
            "checks": [asdict(a) for a in self.aggregates],
            "conjecture_critical": self.findings,
            "certificates": self.certificates,
        }

    @classmethod
    def from_json(cls, doc: dict) -> "RunReport":
        return cls(
            config=doc["config"],
            aggregates=[CheckAggregate(**a) for a in doc["checks"]],
            findings=list(doc["conjecture_critical"]),
            certificates=list(doc["certificates"]),
        )


def _clean(x: float) -> Optional[float]:
    return float(x) if math.isfinite(x) else None


def random_pair(rng: np.random.Generator, max_degree: int = 10) -> tuple[Polynomial, Polynomial]:
    """Two Gaussian complex polynomials of one random degree in [1, max_degree]."""
    d = int(rng.integers(1, max_degree + 1))
    c = rng.normal(size=(2, d + 1)) + 1j * rng.normal(size=(2, d + 1))
    return Polynomial(c[0]), Polynomial(c[1])


def instance_checks(inst: SendovInstance, rng: np.random.Generator, cfg: RunConfig) -> list[CheckResult]:
    """Every applicable check on one instance; auxiliary draws come from ``rng``.

    ``cfg.tol`` is the tolerance of the algebraic checks. The quadrature
    checks and the optimiser comparison keep their own fixed tolerances.
    """
    out: list[CheckResult] = []
    tol = cfg.tol
    if "metrics" in cfg.sections:
        out.append(checks.distance_bounds_check(inst, tol=tol))
        out += checks.identity_suite(inst, tol=tol)
        if inst.n == 9:
            out.append(checks.gamma_product_check(inst, tol=tol))
            out += checks.gated_lemma_checks(inst, tol=tol)
        out.append(checks.gauss_lucas_check(inst, tol=tol))
        c = complex(inst.p(complex(*rng.uniform(-1, 1, 2))))
        u, v = checks.equal_value_pair(inst.p, c, rng)
        out.append(checks.grace_heawood_check(inst.p, u, v, tol=tol))
    if "geometry" in cfg.sections:
        lam = checks.lambda_from_instance(inst)
        out.append(halfplane.verify_theorem1(inst, lam).to_check())
        lam21 = min(lam, np.sin(np.pi / inst.n))
        out.append(halfplane.lemma_2_1_check(inst, lam21, tol=tol))
        a = float(rng.uniform(0.01, 0.99))
        r = float(rng.uniform(0.001, 0.999)) * a
        params = halfplane.GParams(a, r)
        out.append(halfplane.g_max_check(params))
        out.append(halfplane.quartic_identity_check(a, r, float(rng.uniform(0, 4)), tol=tol))
        out.append(halfplane.bisector_identity_check(a + r * np.exp(1j * rng.uniform(0, 2 * np.pi))))
    if "mahler" in cfg.sections:
        rho = float(rng.uniform(0, 2)) or 1.0
        m = float(rng.uniform(-2, 2))
        out.append(mahler.bruijn_springer_check(*random_pair(rng), tol=tol))
        out.append(mahler.theorem3_check(inst, rho, m, tol=tol))
        out.append(mahler.szego_decomposition_check(inst, rho, m, tol=tol))
        out.append(mahler.lemma_4_1_check(inst, rho, nodes=cfg.quad_nodes))
        out.append(mahler.lemma_4_2_check(inst.n, rho, m, nodes=cfg.quad_nodes))
    return out


def _rows_for(index: int, inst: SendovInstance, cfg: RunConfig) -> tuple[list[Row], list[dict]]:
    rng = rng_for(cfg.seed, index, stream=3)
    rows, findings = [], []
    for res in instance_checks(inst, rng, cfg):
        rows.append(Row(index, res.check_id, res.hypothesis_held, res.passed,
                        float(res.residual), res.critical, res.detail))
        if res.conjecture_critical:
            findings.append({"instance": index, "check_id": res.check_id,
                             "residual": _clean(res.residual), "detail": res.detail,
                             "zeros": inst.to_json()})
    return rows, findings


def _run_chunk(args) -> tuple[list[Row], list[dict]]:
    cfg, indices, given = args
    rows, findings = [], []
    for i in indices:
        inst = given[i] if given is not None else generate_random_instance(cfg.seed, i, cfg.n)
        r, f = _rows_for(i, inst, cfg)
        rows += r
        findings += f
    return rows, findings


def run_check_suite(cfg: RunConfig, instances: Optional[Sequence[SendovInstance]] = None) -> RunReport:
    """Run every check over ``cfg.count`` generated instances (or over
    ``instances`` when given) and aggregate per check id.

    Instance i depends only on (seed, i), and rows are sorted before
    aggregation, so the report is the same for any worker count.
    """
    given = list(instances) if instances is not None else None
    count = len(given) if given is not None else cfg.count
    if given is not None and count < 1:
        raise ValueError("need at least one instance")
    idx = list(range(count))
    if cfg.workers > 1 and count > 1:
        k = cfg.workers * 4
        chunks = [idx[j::k] for j in range(k) if idx[j::k]]
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            parts = list(pool.map(_run_chunk, [(cfg, c, given) for c in chunks]))
    else:
        parts = [_run_chunk((cfg, idx, given))]
    rows = sorted((r for p in parts for r in p[0]), key=lambda r: (r.instance, r.check_id))
    findings = sorted((f for p in parts for f in p[1]), key=lambda f: (f["instance"], f["check_id"]))
    aggs: dict[str, CheckAggregate] = {}
    for row in rows:
        aggs.setdefault(row.check_id, CheckAggregate(row.check_id)).add(row)
    config = cfg.to_json()
    if given is not None:
        config["count"] = count
        config["instances"] = [inst.to_json() for inst in given]
    return RunReport(config, [aggs[k] for k in sorted(aggs)], findings, [], rows)


def dumps_report(report: RunReport) -> str:
    return json.dumps(report.to_json(), sort_keys=True, indent=1, allow_nan=False)


def emit_report(report: RunReport, path: str, meta: Optional[dict] = None) -> tuple[str, str]:
    """Write the JSON report and a CSV sidecar (one row per check and instance).

    Timing goes only into the ``meta`` key, so the remaining body is
    byte-identical across runs with the same config. Returns both paths.
    """
    base, _ = os.path.splitext(path)
    csv_path = base + ".csv"
    doc = report.to_json()
    doc["meta"] = dict(meta or {}, elapsed_seconds=report.elapsed)
    try:
        with open(path, "w") as fh:
            json.dump(doc, fh, sort_keys=True, indent=1, allow_nan=False)
        with open(csv_path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["instance", "check_id", "hypothesis_held", "pass", "residual", "critical", "detail"])
            for r in report.rows:
                w.writerow([r.instance, r.check_id, r.hypothesis_held, r.passed,
                            repr(r.residual), r.critical, r.detail])
    except OSError as exc:
        raise OSError(f"cannot write report to {path!r}: {exc.strerror or exc}") from exc
    return path, csv_path


def load_report(path: str) -> RunReport:
    with open(path) as fh:
        doc = json.load(fh)
    doc.pop("meta", None)
    return RunReport.from_json(doc)
