"""Theorem B buckets for small n over a handful of finite targets.

Violations are kept with their evidence; nothing is filtered.
"""

import argparse
import json
from dataclasses import dataclass, field
from pathlib import Path

from uvbkit import census as C
from uvbkit import uvb as V


@dataclass
class Config:
    runs: list = field(default_factory=lambda: [
        (3, "s3"), (3, "z6"), (3, "s3xz2"), (3, "s4"), (4, "s4"), (4, "z4xz2"),
    ])
    workers: int = 1
    out: str = "results/theorem_b_small_n.json"


def classify(n: int, target: str, workers: int) -> dict:
    G = C.parse_target(target)
    res = C.enumerate_homs(V.presentation("UVB", n), G, workers=workers)
    classes = C.classify_theorem_B(C.dedup_conjugation(res.homs, G, workers=workers), n, G)
    summary: dict = {}
    for c in classes:
        summary[c.bucket] = summary.get(c.bucket, 0) + 1
    violations = [{"representative": c.representative.labelled(G), "evidence": c.evidence}
                  for c in classes if c.bucket == C.VIOLATION]
    return {"n": n, "target": G.name, "homs": len(res.homs), "classes": len(classes),
            "summary": dict(sorted(summary.items())), "violations": violations}


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--workers", type=int, default=1)
    cfg = Config(workers=ap.parse_args().workers)
    rows = [classify(n, t, cfg.workers) for n, t in cfg.runs]
    for r in rows:
        print(f"UVB_{r['n']} -> {r['target']:<6} classes={r['classes']:>3} {r['summary']}")
    Path(cfg.out).parent.mkdir(exist_ok=True)
    Path(cfg.out).write_text(json.dumps(rows, indent=2))


if __name__ == "__main__":
    main()
