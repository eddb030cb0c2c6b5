"""Pairwise inequivalence certificates across catalogue entries of equal order."""
from __future__ import annotations

import argparse
from dataclasses import dataclass
from itertools import combinations

from hforge.chm import fourier
from hforge.cli import CATALOGUE
from hforge.equivalence import certify_inequivalent


@dataclass(frozen=True)
class Config:
    dmax: int = 3
    with_fourier: bool = True


def main(cfg: Config) -> None:
    mats = {name: build() for name, (_, build) in CATALOGUE.items()}
    if cfg.with_fourier:
        for n in sorted({h.n for h in mats.values()}):
            mats[f"F{n}"] = fourier(n)
    for a, b in combinations(mats, 2):
        if mats[a].n == mats[b].n:
            print(f"{a:5s} vs {b:5s}: {certify_inequivalent(mats[a], mats[b], cfg.dmax).text()}")


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--dmax", type=int, default=Config.dmax)
    ap.add_argument("--no-fourier", dest="with_fourier", action="store_false")
    main(Config(**vars(ap.parse_args())))
