"""Inequivalence certificates from the Haagerup set and the fingerprint.

Matching invariants never prove equivalence, so the pipeline answers either
with a certificate or with :class:`Undecided`.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from ._engine import Budget
from .chm import ComplexHadamardMatrix
from .invariants import (
    FLOAT_REL,
    HaagerupSet,
    MinorSpectrum,
    contains_close,
    default_dmax,
    haagerup_set,
    minor_spectrum,
)
from .scalar import QuadExtScalar, format_rational, surd


@dataclass(frozen=True)
class InequivalenceCertificate:
    kind: str  # "haagerup" | "fingerprint"
    witness: object  # scalar for haagerup; (d, value) for fingerprint
    holder: int  # 1 or 2: which matrix's invariant contains the witness
    numeric: bool  # True when decided through float projection
    detail: str = ""

    def to_json(self) -> dict:
        if self.kind == "haagerup":
            w = str(self.witness) if isinstance(self.witness, QuadExtScalar) else {"re": self.witness.real, "im": self.witness.imag}
        else:
            d, v = self.witness
            w = {"d": d, "value_sq": format_rational(v)} if isinstance(v, Fraction) else {"d": d, "value": v}
        return {"result": "certificate", "kind": self.kind, "witness": w, "holder": self.holder, "numeric": self.numeric, "detail": self.detail}

    def text(self) -> str:
        if self.kind == "haagerup":
            what = f"Haagerup value {self.witness}"
        else:
            d, v = self.witness
            what = f"{d}x{d} minor |det| = {surd(v) if isinstance(v, Fraction) else format(v, '.10g')}"
        how = "numerically" if self.numeric else "exactly"
        return f"inequivalent ({how}): {what} occurs only in matrix {self.holder}. {self.detail}".strip()


@dataclass(frozen=True)
class InvariantsEqual:
    kind: str
    numeric: bool  # True: equal within tolerance only

    def __bool__(self):
        return False  # not a certificate


@dataclass(frozen=True)
class Undecided:
    checked: tuple[str, ...]
    numeric: bool

    def to_json(self) -> dict:
        return {"result": "undecided", "invariants_equal": list(self.checked), "numeric": self.numeric}

    def text(self) -> str:
        return f"undecided: {', '.join(self.checked)} agree ({'numerically' if self.numeric else 'exactly'})"


def _first_missing(vals: np.ndarray, other: np.ndarray) -> int | None:
    for i, z in enumerate(vals):
        if not contains_close(other, z, FLOAT_REL):
            return i
    return None


def compare_haagerup_sets(s1: HaagerupSet, s2: HaagerupSet):
    if s1.exact and s2.exact:
        a, b = frozenset(s1.values), frozenset(s2.values)
        for holder, diff in ((1, a - b), (2, b - a)):
            if diff:
                # prefer a witness with a nonzero surd part
                w = min(diff, key=lambda z: (z.y == 0, z.sort_key()))
                return InequivalenceCertificate("haagerup", w, holder, False)
        return InvariantsEqual("haagerup", False)
    f1, f2 = s1.float_values(), s2.float_values()
    for holder, (src, other, s) in enumerate(((f1, f2, s1), (f2, f1, s2)), start=1):
        i = _first_missing(src, other)
        if i is not None:
            return InequivalenceCertificate("haagerup", s.values[i], holder, True)
    return InvariantsEqual("haagerup", True)


def compare_haagerup(h1: ComplexHadamardMatrix, h2: ComplexHadamardMatrix):
    return compare_haagerup_sets(haagerup_set(h1), haagerup_set(h2))


def compare_spectra(s1: MinorSpectrum, s2: MinorSpectrum):
    d = s1.d
    if s1.exact and s2.exact:
        m1, m2 = dict(s1.pairs), dict(s2.pairs)
        for v in sorted(set(m1) | set(m2)):
            if m1.get(v) != m2.get(v):
                holder = 1 if m1.get(v, 0) > m2.get(v, 0) else 2
                detail = f"multiplicities {m1.get(v, 0)} vs {m2.get(v, 0)}"
                return InequivalenceCertificate("fingerprint", (d, v), holder, False, detail)
        return InvariantsEqual("fingerprint", False)
    p1, p2 = s1.as_float().pairs, s2.as_float().pairs
    for holder, (src, other) in enumerate(((p1, p2), (p2, p1)), start=1):
        for v, m in src:
            match = [k for w, k in other if abs(w - v) <= FLOAT_REL * max(1.0, v) * 10]
            if not match or match[0] != m:
                detail = f"multiplicities {m} vs {match[0] if match else 0}"
                return InequivalenceCertificate("fingerprint", (d, v), holder, True, detail)
    return InvariantsEqual("fingerprint", True)


def compare_fingerprint(h1: ComplexHadamardMatrix, h2: ComplexHadamardMatrix, dmax: int | None = None, budget: Budget | None = None, workers: int = 1):
    """Compare minor spectra for d = 2..dmax, stopping at the first difference."""
    if h1.n != h2.n:
        raise ValueError(f"orders differ: {h1.n} vs {h2.n}")
    top = default_dmax(h1.n) if dmax is None else dmax
    numeric = not (h1.exact and h2.exact)
    for d in range(2, top + 1):
        res = compare_spectra(minor_spectrum(h1, d, budget, workers), minor_spectrum(h2, d, budget, workers))
        if isinstance(res, InequivalenceCertificate):
            return res
    return InvariantsEqual("fingerprint", numeric)


def certify_inequivalent(h1: ComplexHadamardMatrix, h2: ComplexHadamardMatrix, dmax: int | None = None, budget: Budget | None = None, workers: int = 1):
    if h1.n != h2.n:
        raise ValueError(f"orders differ: {h1.n} vs {h2.n}")
    res = compare_haagerup(h1, h2)
    if isinstance(res, InequivalenceCertificate):
        return res
    numeric = res.numeric
    res = compare_fingerprint(h1, h2, dmax, budget, workers)
    if isinstance(res, InequivalenceCertificate):
        return res
    return Undecided(("haagerup", "fingerprint"), numeric or res.numeric)


def revalidate(cert: InequivalenceCertificate, h1: ComplexHadamardMatrix, h2: ComplexHadamardMatrix) -> bool:
    """Recompute both invariants and confirm the witness is present in the holder only."""
    mine, theirs = (h1, h2) if cert.holder == 1 else (h2, h1)
    if cert.kind == "haagerup":
        a, b = haagerup_set(mine), haagerup_set(theirs)
        w = cert.witness
        return w in a and w not in b
    d, v = cert.witness
    sa, sb = minor_spectrum(mine, d), minor_spectrum(theirs, d)

    def mult(s: MinorSpectrum) -> int:
        if s.exact and isinstance(v, Fraction):
            return dict(s.pairs).get(v, 0)
        target = math.sqrt(v) if isinstance(v, Fraction) else v
        return next((m for w, m in s.as_float().pairs if abs(w - target) <= FLOAT_REL * max(1.0, target) * 10), 0)

    return mult(sa) > mult(sb)
