"""Homomorphisms UVB_n -> S_n up to conjugation.

n = 5, 6 go through the staged verifier; smaller n use the direct census
and are reported as empirical tables.
"""

import argparse
import json
from dataclasses import asdict, dataclass, field
from pathlib import Path

from uvbkit import census as C
from uvbkit import uvb as V


@dataclass
class Config:
    staged: list = field(default_factory=lambda: [5, 6])
    direct: list = field(default_factory=lambda: [3, 4])
    workers: int = 1
    out_dir: str = "results"


def direct(n: int, workers: int) -> dict:
    G = C.symmetric_group_table(n)
    res = C.enumerate_homs(V.presentation("UVB", n), G, workers=workers)
    classes = C.dedup_conjugation(res.homs, G, workers=workers)
    summary: dict = {}
    for c in classes:
        c.bucket = C.classify_theorem_A(c.representative, n, G)
        summary[c.bucket] = summary.get(c.bucket, 0) + 1
    return {"n": n, "homs": len(res.homs), "node_count": res.node_count,
            "classes": [{"representative": c.representative.labelled(G), "size": c.size,
                         "bucket": c.bucket} for c in classes],
            "summary": dict(sorted(summary.items()))}


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--workers", type=int, default=Config.workers)
    ap.add_argument("--out-dir", default=Config.out_dir)
    args = ap.parse_args()
    cfg = Config(workers=args.workers, out_dir=args.out_dir)
    out = Path(cfg.out_dir)
    out.mkdir(exist_ok=True)
    for n in cfg.direct:
        rep = direct(n, cfg.workers)
        (out / f"theorem_a_direct_n{n}.json").write_text(json.dumps(rep, indent=2))
        print(f"n={n} direct  homs={rep['homs']:>5} summary={rep['summary']}")
    for n in cfg.staged:
        rep = C.verify_theorem_A_staged(n, workers=cfg.workers)
        data = rep.to_json(C.symmetric_group_table(n))
        (out / f"theorem_a_staged_n{n}.json").write_text(json.dumps(data, indent=2))
        print(f"n={n} staged  nodes={rep.node_count:>8} summary={data['summary']} flags={data['flags']}")
    (out / "theorem_a_config.json").write_text(json.dumps(asdict(cfg), indent=2))


if __name__ == "__main__":
    main()
