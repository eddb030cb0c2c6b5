"""Batched exact |det|^2 of submatrices via split primes and CRT.

An exact matrix over Q(i*sqrt(D)) is scaled by the common denominator q of
its coordinates, giving integer entries X + Y*i*sqrt(D).  For a prime p in
which -D is a square (root s), the two ring maps i*sqrt(D) -> +s and -> -s
send a determinant and its conjugate to residues e1, e2; hence
``|det|^2 = N / q^(2d)`` with ``N = e1*e2 (mod p)``.  N is a nonnegative
integer bounded by Hadamard's inequality, so enough primes recover it exactly.
"""
from __future__ import annotations

import math
import os
import time
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations

import numpy as np
from sympy import isprime
from sympy.ntheory import sqrt_mod
from sympy.ntheory.modular import crt

# Residues stay below 2**31 so that products fit in int64.
_PRIME_CEILING = 2**31 - 1
_BATCH = 1 << 16
# Upper bound on minors per scheduled chunk, so time budgets are checked often.
_CHUNK_MINORS = 1 << 18


class BudgetExceeded(RuntimeError):
    def __init__(self, done: int, total: int, why: str):
        super().__init__(f"budget exceeded ({why}) after {done} of {total} minors")
        self.done = done
        self.total = total
        self.progress = done / total if total else 1.0


@dataclass(frozen=True)
class Budget:
    max_minors: int | None = None
    seconds: float | None = None

    def check_total(self, total: int) -> None:
        if self.max_minors is not None and total > self.max_minors:
            raise BudgetExceeded(0, total, f"{total} minors > cap {self.max_minors}")


def default_workers() -> int:
    env = os.environ.get("HFORGE_WORKERS")
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


@lru_cache(maxsize=None)
def split_primes(D: int, count: int) -> tuple[tuple[int, int], ...]:
    """``count`` primes below 2**31 with a square root ``s`` of ``-D``; D = 0 means any prime."""
    out = []
    p = _PRIME_CEILING
    while len(out) < count:
        if isprime(p) and (D == 0 or D % p):
            if D == 0:
                out.append((p, 0))
            else:
                s = sqrt_mod(-D % p, p)
                if s is not None:
                    out.append((p, int(s)))
        p -= 2
    return tuple(out)


def colex_combinations(n: int, d: int) -> list[tuple[int, ...]]:
    return sorted(combinations(range(n), d), key=lambda c: c[::-1])


def _inv_mod(a: np.ndarray, p: int) -> np.ndarray:
    result = np.ones_like(a)
    base = a % p
    e = p - 2
    while e:
        if e & 1:
            result = result * base % p
        base = base * base % p
        e >>= 1
    return result


def det_mod_p(mats: np.ndarray, p: int) -> np.ndarray:
    """Determinants mod ``p`` of a stack ``(B, d, d)`` of residues in ``[0, p)``.

    Division-free elimination with first-nonzero pivoting; the accumulated
    pivot powers are divided out with a single modular inverse at the end.
    """
    a = np.array(mats, dtype=np.int64, copy=True)
    bsz, d, _ = a.shape
    if d == 0:
        return np.ones(bsz, dtype=np.int64)
    det = np.ones(bsz, dtype=np.int64)
    scale = np.ones(bsz, dtype=np.int64)
    idx = np.arange(bsz)
    for c in range(d):
        nz = a[:, c:, c] != 0
        piv = nz.argmax(axis=1) + c
        swap = piv != c
        if swap.any():
            rows_c = a[idx, c].copy()
            a[idx, c] = a[idx, piv]
            a[idx, piv] = rows_c
            det[swap] = (p - det[swap]) % p
        pv = a[:, c, c]
        det = det * pv % p
        if c + 1 < d:
            lower = a[:, c + 1 :, c:]
            f = lower[:, :, 0]
            a[:, c + 1 :, c:] = (pv[:, None, None] * lower - f[:, :, None] * a[:, c, None, c:]) % p
            # each of the d-c-1 rows below was scaled by pv
            scale = scale * _pow_small(pv, d - c - 1, p) % p
    return det * _inv_mod(scale, p) % p


def _pow_small(a: np.ndarray, e: int, p: int) -> np.ndarray:
    r = np.ones_like(a)
    for _ in range(e):
        r = r * a % p
    return r


# -- exact spectra ----------------------------------------------------------------
@dataclass(frozen=True)
class ScaledMatrix:
    X: tuple[tuple[int, ...], ...]
    Y: tuple[tuple[int, ...], ...]
    q: int
    D: int
    max_abs2: int  # max of X^2 + D*Y^2 over entries

    @property
    def n(self) -> int:
        return len(self.X)

    @property
    def is_real(self) -> bool:
        return all(v == 0 for row in self.Y for v in row)


def scale_exact(rows) -> ScaledMatrix:
    """Integer coordinates of ``q * h`` for rows of QuadExtScalar."""
    q = 1
    D = 1
    for row in rows:
        for z in row:
            q = math.lcm(q, z.x.denominator, z.y.denominator)
            if z.y:
                D = z.d
    X = tuple(tuple(int(z.x * q) for z in row) for row in rows)
    Y = tuple(tuple(int(z.y * q) for z in row) for row in rows)
    m = max((x * x + D * y * y for rx, ry in zip(X, Y) for x, y in zip(rx, ry)), default=0)
    return ScaledMatrix(X, Y, q, D, m)


def _norm_bound(sm: ScaledMatrix, d: int) -> int:
    # Hadamard: |det|^2 <= prod of squared row norms <= (d * max|entry|^2)^d
    return (d * sm.max_abs2) ** d


def _residue_matrices(sm: ScaledMatrix, primes) -> list[tuple[int, np.ndarray, np.ndarray | None]]:
    X = np.array(sm.X, dtype=object)
    Y = np.array(sm.Y, dtype=object)
    out = []
    for p, s in primes:
        e1 = np.array((X + Y * s) % p, dtype=np.int64)
        e2 = None if sm.is_real else np.array((X - Y * s) % p, dtype=np.int64)
        out.append((p, e1, e2))
    return out


def _norm_residues_chunk(residues, row_sets: np.ndarray, col_sets: np.ndarray) -> Counter:
    """Counter of tuples (N mod p_1, ..., N mod p_r) for all row/col subset pairs."""
    d = row_sets.shape[1]
    per_batch = max(1, _BATCH // max(1, len(col_sets)))
    counts: Counter = Counter()
    for start in range(0, len(row_sets), per_batch):
        rs = row_sets[start : start + per_batch]
        ri = rs[:, None, :, None]
        ci = col_sets[None, :, None, :]
        cols = []
        for p, e1, e2 in residues:
            d1 = det_mod_p(e1[ri, ci].reshape(-1, d, d), p)
            if e2 is None:
                n_res = d1 * d1 % p
            else:
                d2 = det_mod_p(e2[ri, ci].reshape(-1, d, d), p)
                n_res = d1 * d2 % p
            cols.append(n_res)
        stacked = np.stack(cols, axis=1)
        uniq, cnt = np.unique(stacked, axis=0, return_counts=True)
        for u, c in zip(map(tuple, uniq.tolist()), cnt.tolist()):
            counts[u] += c
    return counts


def _chunk_count(n_rows: int, per_row: int, workers: int) -> int:
    return max(16, 4 * workers, -(-n_rows * per_row // _CHUNK_MINORS))


def _chunked(seq: np.ndarray, parts: int) -> list[np.ndarray]:
    parts = max(1, min(parts, len(seq)))
    bounds = np.linspace(0, len(seq), parts + 1).astype(int)
    return [seq[bounds[i] : bounds[i + 1]] for i in range(parts)]


def _run_chunks(fn, args_list, workers: int, budget: Budget | None, total: int, per_chunk: list[int]):
    start = time.monotonic()
    done = 0
    results = []
    deadline = None if budget is None or budget.seconds is None else start + budget.seconds
    if workers <= 1:
        for args, size in zip(args_list, per_chunk):
            results.append(fn(*args))
            done += size
            if deadline is not None and time.monotonic() > deadline and done < total:
                raise BudgetExceeded(done, total, f"time limit {budget.seconds}s")
        return results
    with ProcessPoolExecutor(max_workers=workers) as pool:
        futures = [pool.submit(fn, *args) for args in args_list]
        for fut, size in zip(futures, per_chunk):
            timeout = None if deadline is None else max(0.0, deadline - time.monotonic())
            try:
                results.append(fut.result(timeout=timeout))
            except TimeoutError:
                for f in futures:
                    f.cancel()
                raise BudgetExceeded(done, total, f"time limit {budget.seconds}s") from None
            done += size
    return results


def exact_norm_spectrum(rows, d: int, workers: int = 1, budget: Budget | None = None) -> dict:
    """Map ``|det|^2`` (Fraction) -> multiplicity over all d x d minors of an exact matrix."""
    from fractions import Fraction

    sm = scale_exact(rows)
    n = sm.n
    subsets = np.array(colex_combinations(n, d), dtype=np.int64).reshape(-1, d)
    total = len(subsets) ** 2
    if budget is not None:
        budget.check_total(total)
    bound = _norm_bound(sm, d)
    need, prod = 0, 1
    D = 0 if sm.is_real else sm.D
    while prod <= bound:
        need += 1
        prod = math.prod(p for p, _ in split_primes(D, need))
    primes = split_primes(D, max(need, 1))
    residues = _residue_matrices(sm, primes)
    chunks = _chunked(subsets, _chunk_count(len(subsets), len(subsets), workers))
    args = [(residues, ch, subsets) for ch in chunks]
    sizes = [len(ch) * len(subsets) for ch in chunks]
    merged: Counter = Counter()
    for part in _run_chunks(_norm_residues_chunk, args, workers, budget, total, sizes):
        merged.update(part)
    moduli = [p for p, _ in primes]
    denom = sm.q ** (2 * d)
    out: Counter = Counter()
    for key, cnt in merged.items():
        N = int(crt(moduli, list(key))[0]) if len(moduli) > 1 else key[0]
        out[Fraction(N, denom)] += cnt
    return dict(out)


# -- float spectra ------------------------------------------------------------------
def _float_abs_det_chunk(a: np.ndarray, row_sets: np.ndarray, col_sets: np.ndarray) -> np.ndarray:
    d = row_sets.shape[1]
    per_batch = max(1, _BATCH // max(1, len(col_sets)))
    out = []
    for start in range(0, len(row_sets), per_batch):
        rs = row_sets[start : start + per_batch]
        sub = a[rs[:, None, :, None], col_sets[None, :, None, :]].reshape(-1, d, d)
        out.append(np.abs(np.linalg.det(sub)))
    return np.concatenate(out) if out else np.zeros(0)


def float_abs_dets(a: np.ndarray, d: int, workers: int = 1, budget: Budget | None = None) -> np.ndarray:
    n = a.shape[0]
    subsets = np.array(colex_combinations(n, d), dtype=np.int64).reshape(-1, d)
    total = len(subsets) ** 2
    if budget is not None:
        budget.check_total(total)
    chunks = _chunked(subsets, _chunk_count(len(subsets), len(subsets), workers))
    args = [(np.asarray(a), ch, subsets) for ch in chunks]
    sizes = [len(ch) * len(subsets) for ch in chunks]
    parts = _run_chunks(_float_abs_det_chunk, args, workers, budget, total, sizes)
    return np.concatenate(parts) if parts else np.zeros(0)


def cluster_values(values: np.ndarray, rel: float = 1e-8) -> list[tuple[float, int]]:
    """Sorted-merge clustering: neighbours closer than ``rel * max(1, v)`` share a cluster.

    Clusters are represented by their smallest member; values below ``rel`` snap to 0.
    """
    v = np.sort(np.asarray(values, dtype=float))
    if v.size == 0:
        return []
    v = np.where(v < rel, 0.0, v)
    gaps = np.diff(v) >= rel * np.maximum(1.0, v[1:])
    starts = np.concatenate([[0], np.nonzero(gaps)[0] + 1])
    ends = np.concatenate([starts[1:], [v.size]])
    return [(float(v[s]), int(e - s)) for s, e in zip(starts, ends)]
