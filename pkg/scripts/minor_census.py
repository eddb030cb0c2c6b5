"""Sampled census of (n/2)-minors of Sylvester matrices, as multiples of 2^7.

For n = 16 and d = 8 the values k * 2^7 with k in {28, ..., 31} never appear.
"""
from __future__ import annotations

import argparse
import time
from dataclasses import dataclass

from hforge._engine import default_workers
from hforge.designs import sylvester_hadamard
from hforge.invariants import sample_minor_census


@dataclass(frozen=True)
class Config:
    t: int = 4
    d: int = 8
    count: int = 100_000
    seed: int = 1
    workers: int = default_workers()


def main(cfg: Config) -> None:
    h = sylvester_hadamard(cfg.t)
    t0 = time.perf_counter()
    c = sample_minor_census(h, cfg.d, cfg.count, cfg.seed, cfg.workers)
    unit = 2**7
    print(f"order {h.shape[0]}, d={cfg.d}, {cfg.count} samples, seed {cfg.seed}")
    for v, m in c.histogram.items():
        k = v / unit
        print(f"  |det| = {v:6d} = {k:g} * 2^7   x{m}")
    forbidden = {v // unit for v in c.histogram if v % unit == 0} & {28, 29, 30, 31}
    print(f"forbidden k observed: {sorted(forbidden) or 'none'}")
    print(f"elapsed {time.perf_counter() - t0:.2f}s")


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    for f, default in vars(Config()).items():
        ap.add_argument(f"--{f}", type=int, default=default)
    main(Config(**vars(ap.parse_args())))
