"""Stabilizer evidence for the sets A_i, n = 3..6."""

import json
import math
from dataclasses import dataclass
from pathlib import Path

from uvbkit import census as C


@dataclass
class Config:
    n_min: int = 3
    n_max: int = 6
    out: str = "results/tss_report.json"


def main(cfg: Config = Config()):
    rows = []
    for n in range(cfg.n_min, cfg.n_max + 1):
        for i in range(1, n + 1):
            rep = C.analyze_totally_symmetric(C.build_A_i(i, n), n)
            d = {"n": n, "i": i, **rep.to_json()}
            rows.append(d)
            print(f"n={n} A_{i}: |X|={d['size']:>2} commuting={rep.commuting} "
                  f"stab={d['stabilizer_order']:>3} induced={d['induced_order']:>3} "
                  f"|Sym(X)|={math.factorial(d['size'])}")
    Path(cfg.out).parent.mkdir(exist_ok=True)
    Path(cfg.out).write_text(json.dumps(rows, indent=2))


if __name__ == "__main__":
    main()
