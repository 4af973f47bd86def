"""Run every positivity certificate and print a one-line summary per claim."""

from __future__ import annotations

import argparse
import json
from dataclasses import dataclass

from sendov import certify


@dataclass(frozen=True)
class Config:
    max_depth: int = certify.DEFAULT_DEPTH
    out: str = "certs.json"


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-depth", type=int, default=Config.max_depth)
    ap.add_argument("--out", default=Config.out)
    args = ap.parse_args()
    cfg = Config(args.max_depth, args.out)
    certs = certify.run_all_claims(cfg.max_depth)
    for c in certs:
        print(f"{c.claim_id:3s} {c.status:12s} boxes={c.boxes:6d} depth={c.max_depth:2d} {c.elapsed:7.2f} s")
        for part in c.parts:
            print(f"    {part.claim_id:24s} {part.status:12s} boxes={part.boxes:6d}")
    with open(cfg.out, "w") as fh:
        json.dump(certify.certificates_document(certs), fh, sort_keys=True, indent=1)
    print("diagnostic sign change of the (6, 6) margin at a =", certify.contradiction_sign_change())


if __name__ == "__main__":
    main()
