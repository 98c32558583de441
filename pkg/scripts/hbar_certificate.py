"""Injectivity / non-surjectivity certificates for h and its extension h-bar."""

import json
from dataclasses import dataclass
from pathlib import Path

from uvbkit.autos import certify_hbar


@dataclass
class Config:
    ns: tuple = (2, 3, 4, 5)
    out: str = "results/hbar_certificate.json"


def main(cfg: Config = Config()):
    certs = [certify_hbar(n) for n in cfg.ns]
    for c in certs:
        print(f"n={c['n']} factors={len(c['factors'])} injective={c['injective']} "
              f"surjective={c['surjective']} hbar_endo={c['hbar_is_endomorphism']}")
    Path(cfg.out).parent.mkdir(exist_ok=True)
    Path(cfg.out).write_text(json.dumps(certs, indent=2))


if __name__ == "__main__":
    main()
