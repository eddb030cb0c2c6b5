"""Equivalence invariants: the Haagerup set and minor spectra (the fingerprint).

Exact spectra are keyed by ``|det|**2``, which is rational for entries in any
Q(i*sqrt(D)); that makes fingerprints of matrices over different fields
directly comparable.
"""
from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Iterable

import numpy as np
from sympy.ntheory.modular import crt

from . import linalg
from ._engine import (
    Budget,
    BudgetExceeded,
    _chunked,
    _run_chunks,
    cluster_values,
    det_mod_p,
    exact_norm_spectrum,
    float_abs_dets,
    split_primes,
)
from .chm import TOL, ComplexHadamardMatrix, verify_chm
from .scalar import QuadExtScalar, format_rational, surd

# Relative gap for clustering float minor values and for cross-backend comparison.
FLOAT_REL = 1e-8
DMAX_CAP = 5

__all__ = [
    "Budget",
    "BudgetExceeded",
    "Census",
    "DualityViolation",
    "Fingerprint",
    "HaagerupSet",
    "MinorSpectrum",
    "block_det_check",
    "det_lemma_eval",
    "duality_check",
    "fingerprint",
    "haagerup_set",
    "minor_spectrum",
    "sample_minor_census",
]


# -- Haagerup set ---------------------------------------------------------------
@dataclass(frozen=True)
class HaagerupSet:
    exact: bool
    values: tuple  # sorted QuadExtScalars, or complex cluster representatives sorted by angle

    def __len__(self):
        return len(self.values)

    def __iter__(self):
        return iter(self.values)

    def __contains__(self, z) -> bool:
        if self.exact and isinstance(z, QuadExtScalar):
            return z in self._lookup
        return contains_close(self.float_values(), complex(z))

    @property
    def _lookup(self) -> frozenset:
        return frozenset(self.values)

    def float_values(self) -> np.ndarray:
        return np.array([complex(z) for z in self.values], dtype=complex)

    def to_json(self) -> dict:
        if self.exact:
            return {"backend": "exact", "values": [str(z) for z in self.values]}
        return {"backend": "float", "values": [{"re": z.real, "im": z.imag} for z in self.values]}


def cluster_unimodular(z: np.ndarray, tol: float = TOL) -> list[complex]:
    """Deduplicate points near the unit circle by sorted-merge on their angle."""
    z = np.asarray(z, dtype=complex).ravel()
    if z.size == 0:
        return []
    ang = np.angle(z)
    order = np.argsort(ang, kind="stable")
    ang, z = ang[order], z[order]
    gaps = np.diff(ang) >= tol
    starts = np.concatenate([[0], np.nonzero(gaps)[0] + 1])
    reps = [complex(z[s]) for s in starts]
    # -pi and +pi are the same point
    if len(reps) > 1 and (ang[0] + 2 * np.pi) - ang[-1] < tol:
        reps.pop()
    return reps


def contains_close(values: np.ndarray, z: complex, tol: float = 1e-8) -> bool:
    return bool(values.size) and bool(np.min(np.abs(values - z)) < tol)


def haagerup_set(h: ComplexHadamardMatrix) -> HaagerupSet:
    """All products ``h_ij h_kl conj(h_il) conj(h_kj)``.

    For a column pair (j, l) put ``r_i = h_ij conj(h_il)``; the quadruple
    product is then ``r_i conj(r_k)``, so only distinct r-values per column
    pair need multiplying.  Pairs with j > l give conjugates of j < l.
    """
    n = h.n
    if h.exact:
        rows = h.entries
        one = QuadExtScalar.coerce(1)
        out = {one}
        for j in range(n):
            for l in range(j + 1, n):
                r = {row[j] * row[l].conjugate() for row in rows}
                for s in r:
                    for t in r:
                        out.add(s * t.conjugate())
        return HaagerupSet(True, tuple(sorted(out, key=QuadExtScalar.sort_key)))
    a = h.entries
    reps: list[complex] = []
    for j in range(n):
        r = a[:, j, None] * a[:, :].conj()  # r[i, l] = h_ij conj(h_il)
        prods = r[:, None, :] * r[None, :, :].conj()  # (i, k, l)
        reps.extend(cluster_unimodular(prods))
        reps = cluster_unimodular(np.array(reps))
    return HaagerupSet(False, tuple(reps))


# -- minor spectra -----------------------------------------------------------------
@dataclass(frozen=True)
class MinorSpectrum:
    """Sorted (value, multiplicity) pairs for the d x d minors.

    ``value`` is the exact ``|det|**2`` (Fraction) on the exact backend and the
    float ``|det|`` on the float backend.
    """

    d: int
    pairs: tuple[tuple[Fraction | float, int], ...]
    exact: bool

    @property
    def total(self) -> int:
        return sum(m for _, m in self.pairs)

    def abs_values(self) -> list[float]:
        return [math.sqrt(v) if self.exact else v for v, _ in self.pairs]

    def as_float(self) -> "MinorSpectrum":
        if not self.exact:
            return self
        return MinorSpectrum(self.d, tuple((math.sqrt(v), m) for v, m in self.pairs), False)

    def to_json(self) -> dict:
        if self.exact:
            return {"d": self.d, "pairs": [{"value_sq": format_rational(v), "mult": m} for v, m in self.pairs]}
        return {"d": self.d, "pairs": [{"value": v, "mult": m} for v, m in self.pairs]}

    @classmethod
    def from_json(cls, obj: dict) -> "MinorSpectrum":
        pairs = obj["pairs"]
        if pairs and "value_sq" in pairs[0]:
            return cls(obj["d"], tuple((Fraction(p["value_sq"]), int(p["mult"])) for p in pairs), True)
        return cls(obj["d"], tuple((float(p["value"]), int(p["mult"])) for p in pairs), False)

    def text(self) -> str:
        if self.exact:
            items = [f"({surd(v)}, {m})" for v, m in self.pairs]
        else:
            items = [f"({v:.10g}, {m})" for v, m in self.pairs]
        return f"d={self.d}: " + ", ".join(items)


def minor_spectrum(h: ComplexHadamardMatrix, d: int, budget: Budget | None = None, workers: int = 1) -> MinorSpectrum:
    n = h.n
    if not 1 <= d <= n:
        raise ValueError(f"need 1 <= d <= n, got d={d}, n={n}")
    if h.exact:
        counts = exact_norm_spectrum(h.entries, d, workers=workers, budget=budget)
        pairs = tuple(sorted(counts.items()))
        spec = MinorSpectrum(d, pairs, True)
    else:
        vals = float_abs_dets(np.asarray(h.entries), d, workers=workers, budget=budget)
        spec = MinorSpectrum(d, tuple(cluster_values(vals, FLOAT_REL)), False)
    if spec.total != comb(n, d) ** 2:
        raise AssertionError(f"multiplicities sum to {spec.total}, expected C({n},{d})^2")
    return spec


@dataclass(frozen=True)
class Fingerprint:
    n: int
    spectra: tuple[MinorSpectrum, ...]

    @property
    def exact(self) -> bool:
        return all(s.exact for s in self.spectra)

    def spectrum(self, d: int) -> MinorSpectrum:
        for s in self.spectra:
            if s.d == d:
                return s
        raise KeyError(d)

    def to_json(self) -> dict:
        return {"n": self.n, "spectra": [s.to_json() for s in self.spectra]}

    @classmethod
    def from_json(cls, obj: dict) -> "Fingerprint":
        return cls(obj["n"], tuple(MinorSpectrum.from_json(s) for s in obj["spectra"]))

    def text(self) -> str:
        return "\n".join(s.text() for s in self.spectra)


def default_dmax(n: int) -> int:
    return min(n // 2, DMAX_CAP)


def fingerprint(h: ComplexHadamardMatrix, dmax: int | None = None, budget: Budget | None = None, workers: int = 1) -> Fingerprint:
    """Minor spectra for d = 2..dmax (default floor(n/2), capped at 5)."""
    top = default_dmax(h.n) if dmax is None else dmax
    return Fingerprint(h.n, tuple(minor_spectrum(h, d, budget, workers) for d in range(2, top + 1)))


# -- duality between d and n-d minors ---------------------------------------------------
class DualityViolation(AssertionError):
    def __init__(self, report):
        super().__init__(f"d={report.d} and d={report.n - report.d} spectra disagree")
        self.report = report


@dataclass(frozen=True)
class DualityReport:
    n: int
    d: int
    lower: MinorSpectrum
    upper: MinorSpectrum
    scale_sq: Fraction  # n^(n-2d), applied to |det|^2
    ok: bool


def _spectra_match_scaled(lower: MinorSpectrum, upper: MinorSpectrum, scale_sq: Fraction) -> bool:
    if len(lower.pairs) != len(upper.pairs):
        return False
    if lower.exact and upper.exact:
        return all(v * scale_sq == w and m == k for (v, m), (w, k) in zip(lower.pairs, upper.pairs))
    s = math.sqrt(scale_sq)
    lo, up = lower.as_float(), upper.as_float()
    return all(
        m == k and abs(v * s - w) <= FLOAT_REL * max(1.0, w) * 10
        for (v, m), (w, k) in zip(lo.pairs, up.pairs)
    )


def duality_check(h: ComplexHadamardMatrix, d: int, budget: Budget | None = None, workers: int = 1) -> DualityReport:
    """Enumerate the d and n-d spectra independently and check ``|det_(n-d)|^2 = n^(n-2d) |det_d|^2``."""
    if not verify_chm(h):
        raise ValueError("not a complex Hadamard matrix")
    n = h.n
    if not 1 <= d <= n - 1:
        raise ValueError(f"need 1 <= d <= n-1, got {d}")
    lower = minor_spectrum(h, d, budget, workers)
    upper = minor_spectrum(h, n - d, budget, workers)
    scale = Fraction(n) ** (n - 2 * d)
    report = DualityReport(n, d, lower, upper, scale, _spectra_match_scaled(lower, upper, scale))
    if not report.ok:
        raise DualityViolation(report)
    return report


# -- complementary blocks of a unitary ------------------------------------------------
@dataclass(frozen=True)
class BlockDetCheck:
    r: int
    det_a_sq: Fraction | float
    det_d_sq: Fraction | float
    lhs: Fraction | float  # n^(n-r) |det A|^2
    rhs: Fraction | float  # n^r |det D|^2
    equal: bool


def block_det_check(h: ComplexHadamardMatrix, r: int, rows: Iterable[int] | None = None, cols: Iterable[int] | None = None) -> BlockDetCheck:
    """Compare ``|det A|`` and ``|det D|`` for complementary blocks of ``h / sqrt(n)``.

    ``A`` is ``h[rows, cols]`` (default the leading r x r block) and ``D`` the
    block on the complementary rows and columns.  Unitarity of ``h / sqrt(n)``
    makes ``|det A|^2 / n^r`` and ``|det D|^2 / n^(n-r)`` equal; both sides are
    compared after multiplying through by ``n^n``, so no square root appears.
    """
    n = h.n
    rows = list(range(r)) if rows is None else sorted(rows)
    cols = list(range(r)) if cols is None else sorted(cols)
    if len(rows) != r or len(cols) != r:
        raise ValueError("rows and cols must have r elements")
    rows_c = [i for i in range(n) if i not in rows]
    cols_c = [j for j in range(n) if j not in cols]
    if h.exact:
        da = linalg.det(linalg.submatrix(h.entries, rows, cols))
        dd = linalg.det(linalg.submatrix(h.entries, rows_c, cols_c))
        a2 = QuadExtScalar.coerce(da).norm()
        d2 = QuadExtScalar.coerce(dd).norm()
        lhs, rhs = Fraction(n) ** (n - r) * a2, Fraction(n) ** r * d2
        return BlockDetCheck(r, a2, d2, lhs, rhs, lhs == rhs)
    a = np.asarray(h.entries)
    a2 = abs(np.linalg.det(a[np.ix_(rows, cols)])) ** 2 if r else 1.0
    d2 = abs(np.linalg.det(a[np.ix_(rows_c, cols_c)])) ** 2 if r < n else 1.0
    a2, d2 = float(a2), float(d2)
    lhs, rhs = float(n) ** (n - r) * a2, float(n) ** r * d2
    return BlockDetCheck(r, a2, d2, lhs, rhs, bool(abs(lhs - rhs) <= 1e-9 * max(1.0, abs(lhs), abs(rhs))))


def det_lemma_eval(a, u, v):
    """``(det(A + U V*), det(I + V* A^-1 U) det(A))`` for the rank-update identity."""
    if isinstance(a, np.ndarray) and a.dtype.kind in "fc":
        a, u, v = (np.asarray(t) for t in (a, u, v))
        if abs(np.linalg.det(a)) == 0:
            raise linalg.Singular("A is singular")
        m = u.shape[1]
        lhs = np.linalg.det(a + u @ v.conj().T)
        rhs = np.linalg.det(np.eye(m) + v.conj().T @ np.linalg.inv(a) @ u) * np.linalg.det(a)
        return lhs, rhs
    a = [[_exact(x) for x in row] for row in a]
    u = [[_exact(x) for x in row] for row in u]
    v = [[_exact(x) for x in row] for row in v]
    det_a = linalg.det(a)
    if det_a == 0:
        raise linalg.Singular("A is singular")
    vs = linalg.conj_transpose(v)
    lhs = linalg.det(linalg.add(a, linalg.matmul(u, vs)))
    m = len(u[0])
    inner = linalg.add(linalg.identity(m, _exact(1)), linalg.matmul(linalg.matmul(vs, linalg.inverse(a)), u))
    rhs = linalg.det(inner) * det_a
    return lhs, rhs


def _exact(x):
    if isinstance(x, QuadExtScalar):
        return x
    return QuadExtScalar.coerce(Fraction(x))


# -- sampled minor census for real matrices ------------------------------------------
@dataclass(frozen=True)
class Census:
    d: int
    seed: int | None
    count: int
    histogram: dict[int, int] = field(default_factory=dict)  # |det| -> occurrences

    def to_json(self) -> dict:
        return {
            "d": self.d,
            "seed": self.seed,
            "count": self.count,
            "histogram": {str(k): v for k, v in sorted(self.histogram.items())},
        }


CENSUS_BLOCK = 4096


def _as_integer_matrix(h) -> np.ndarray:
    if isinstance(h, ComplexHadamardMatrix):
        if not h.exact or any(z.y != 0 or z.x.denominator != 1 for row in h.entries for z in row):
            raise ValueError("census needs an integer (real Hadamard) matrix")
        return np.array([[int(z.x) for z in row] for row in h.entries], dtype=np.int64)
    a = np.asarray(h)
    if a.dtype.kind not in "iu":
        if not np.all(a == np.round(a)):
            raise ValueError("census needs an integer matrix")
        a = np.round(a)
    return a.astype(np.int64)


def _census_primes(a: np.ndarray, d: int):
    max2 = int(np.max(a.astype(object) ** 2)) if a.size else 0
    bound = (d * max2) ** d  # on det^2
    k = 1
    while math.prod(p for p, _ in split_primes(0, k)) <= bound:
        k += 1
    return [p for p, _ in split_primes(0, k)]


def _census_block(a: np.ndarray, d: int, seed: int, block_ids: list[int], count: int, primes: list[int]) -> Counter:
    n = a.shape[0]
    residues = [(p, a % p) for p in primes]
    hist: Counter = Counter()
    for b in block_ids:
        size = min(CENSUS_BLOCK, count - b * CENSUS_BLOCK)
        rng = np.random.default_rng([seed, b])
        rows = np.sort(np.argsort(rng.random((size, n)), axis=1)[:, :d], axis=1)
        cols = np.sort(np.argsort(rng.random((size, n)), axis=1)[:, :d], axis=1)
        keys = []
        for p, res in residues:
            det = det_mod_p(res[rows[:, :, None], cols[:, None, :]], p)
            keys.append(det * det % p)
        uniq, cnt = np.unique(np.stack(keys, axis=1), axis=0, return_counts=True)
        for u, c in zip(map(tuple, uniq.tolist()), cnt.tolist()):
            hist[u] += c
    return hist


def sample_minor_census(h, d: int, count: int | None, seed: int = 0, workers: int = 1) -> Census:
    """Histogram of ``|det|`` over d x d minors of an integer matrix.

    ``count`` uniformly random (row subset, column subset) pairs are drawn;
    samples come in blocks of ``CENSUS_BLOCK`` and block ``b`` draws from the
    stream seeded by ``(seed, b)``, so the result does not depend on
    ``workers``.  ``count=None`` enumerates every minor instead.
    """
    a = _as_integer_matrix(h)
    n = a.shape[0]
    if not 1 <= d <= n:
        raise ValueError(f"need 1 <= d <= n, got {d}")
    if count is None:
        spec = exact_norm_spectrum([[QuadExtScalar.coerce(int(v)) for v in row] for row in a], d, workers=workers)
        hist = {math.isqrt(int(v)): m for v, m in spec.items()}
        return Census(d, None, comb(n, d) ** 2, dict(sorted(hist.items())))
    if count < 1:
        raise ValueError("count must be positive")
    primes = _census_primes(a, d)
    nblocks = -(-count // CENSUS_BLOCK)
    parts = _chunked(np.arange(nblocks), max(1, workers))
    args = [(a, d, seed, [int(b) for b in part], count, primes) for part in parts]
    sizes = [sum(min(CENSUS_BLOCK, count - int(b) * CENSUS_BLOCK) for b in part) for part in parts]
    merged: Counter = Counter()
    for part in _run_chunks(_census_block, args, workers, None, count, sizes):
        merged.update(part)
    hist: Counter = Counter()
    for key, c in merged.items():
        sq = int(crt(primes, list(key))[0]) if len(primes) > 1 else key[0]
        hist[math.isqrt(sq)] += c
    return Census(d, seed, count, dict(sorted(hist.items())))
