"""Scan symmetric design parameters and report which ones induce a complex Hadamard matrix.

Induction is possible exactly when v is 4n - 1 or 4n with n = k - lambda.
"""
from __future__ import annotations

import argparse
from dataclasses import dataclass

from hforge.construct import Infeasible, induced_entry


@dataclass(frozen=True)
class Config:
    vmax: int = 100
    show: bool = False


def admissible(vmax: int):
    for v in range(3, vmax + 1):
        for k in range(2, v):
            if k * (k - 1) % (v - 1) == 0:
                lam = k * (k - 1) // (v - 1)
                if 1 <= lam < k:
                    yield v, k, lam


def main(cfg: Config) -> int:
    total = feasible = mismatches = 0
    for v, k, lam in admissible(cfg.vmax):
        n = k - lam
        try:
            entry = induced_entry(v, k, lam)
            ok = True
        except Infeasible:
            ok, entry = False, None
        total += 1
        feasible += ok
        if ok != (v in (4 * n - 1, 4 * n)):
            mismatches += 1
            print(f"mismatch at 2-({v},{k},{lam})")
        if ok and cfg.show:
            print(f"2-({v},{k},{lam})  n={n}  a = {entry.value('+')}")
    print(f"{total} parameter sets, {feasible} feasible, {mismatches} mismatches with v in {{4n-1, 4n}}")
    return 1 if mismatches else 0


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--vmax", type=int, default=Config.vmax)
    ap.add_argument("--show", action="store_true")
    raise SystemExit(main(Config(**vars(ap.parse_args()))))
