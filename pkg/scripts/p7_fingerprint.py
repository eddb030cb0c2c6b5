"""Print the fingerprint of P7 in surd notation and time the enumeration."""
from __future__ import annotations

import argparse
import time
from dataclasses import dataclass

from hforge.chm import fixture
from hforge.invariants import fingerprint


@dataclass(frozen=True)
class Config:
    name: str = "P7"
    dmax: int = 3
    workers: int = 1


def main(cfg: Config) -> None:
    h = fixture(cfg.name)
    t0 = time.perf_counter()
    fp = fingerprint(h, cfg.dmax, workers=cfg.workers)
    print(fp.text())
    for s in fp.spectra:
        print(f"d={s.d}: {len(s.pairs)} values, multiplicities sum to {s.total}")
    print(f"elapsed {time.perf_counter() - t0:.2f}s")


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--name", default=Config.name)
    ap.add_argument("--dmax", type=int, default=Config.dmax)
    ap.add_argument("--workers", type=int, default=Config.workers)
    main(Config(**vars(ap.parse_args())))
