"""Complex Hadamard matrices over an exact quadratic field or floating point."""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, reduce
from pathlib import Path
from typing import Sequence

import numpy as np

from .scalar import (
    MixedRadicand,
    QuadExtScalar,
    parse_rational,
    qext,
    root_of_unity_order,
    to_float,
)

# Absolute float tolerance; inner products are compared against TOL * n.
TOL = 1e-9


class UnknownFixture(KeyError):
    pass


class ComplexHadamardMatrix:
    """An n x n matrix of unimodular entries, exact (one field Q(i*sqrt(d))) or float.

    Exact entries are stored row-major as a tuple of tuples of
    :class:`QuadExtScalar`; float entries as a read-only complex ``ndarray``.
    """

    def __init__(self, entries, backend: str = "exact", name: str | None = None):
        if backend == "exact":
            rows = tuple(tuple(QuadExtScalar.coerce(z) for z in row) for row in entries)
            n = len(rows)
            if any(len(r) != n for r in rows):
                raise ValueError("matrix must be square")
            radicands = {z.d for r in rows for z in r if z.y != 0}
            if len(radicands) > 1:
                raise MixedRadicand(f"entries span fields {sorted(radicands)}")
            self.d = radicands.pop() if radicands else 1
            self.entries = rows
        elif backend == "float":
            arr = np.array(entries, dtype=complex)
            if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
                raise ValueError("matrix must be square")
            if not np.isfinite(arr).all():
                raise ValueError("non-finite entry")
            arr.setflags(write=False)
            self.d = None
            self.entries = arr
        else:
            raise ValueError(f"unknown backend {backend!r}")
        self.backend = backend
        self.name = name

    @classmethod
    def from_real(cls, mat, name: str | None = None) -> "ComplexHadamardMatrix":
        return cls([[int(v) for v in row] for row in np.asarray(mat)], "exact", name)

    @property
    def n(self) -> int:
        return len(self.entries)

    @property
    def exact(self) -> bool:
        return self.backend == "exact"

    def __getitem__(self, i):
        return self.entries[i]

    def __len__(self):
        return self.n

    def rows(self) -> list[list]:
        return [list(r) for r in self.entries]

    @cached_property
    def array(self) -> np.ndarray:
        """Float projection (always available)."""
        if not self.exact:
            return self.entries
        a = np.array([[to_float(z) for z in row] for row in self.entries], dtype=complex)
        a.setflags(write=False)
        return a

    def to_float(self) -> "ComplexHadamardMatrix":
        return self if not self.exact else ComplexHadamardMatrix(self.array, "float", self.name)

    def values(self) -> set:
        if self.exact:
            return {z for row in self.entries for z in row}
        return set(self.entries.ravel().tolist())

    def same_entries(self, other: "ComplexHadamardMatrix") -> bool:
        if self.exact and other.exact:
            return self.entries == other.entries
        return self.n == other.n and bool(np.allclose(self.array, other.array, atol=TOL, rtol=0))

    def __repr__(self):
        label = f" {self.name}" if self.name else ""
        field_ = f"Q(i*sqrt({self.d}))" if self.exact else "float"
        return f"<ComplexHadamardMatrix{label} n={self.n} {field_}>"

    # -- JSON -------------------------------------------------------------
    def to_json(self) -> dict:
        if self.exact:
            return {
                "n": self.n,
                "backend": "exact",
                "d": self.d,
                "entries": [
                    [{"x": f"{z.x.numerator}/{z.x.denominator}", "y": f"{z.y.numerator}/{z.y.denominator}"} for z in row]
                    for row in self.entries
                ],
            }
        return {
            "n": self.n,
            "backend": "float",
            "entries": [[{"re": float(z.real), "im": float(z.imag)} for z in row] for row in self.entries],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "ComplexHadamardMatrix":
        if "rows" in obj and "entries" not in obj:
            return cls.from_real(np.array(obj["rows"]), obj.get("name"))
        backend = obj.get("backend", "exact")
        if backend == "exact":
            d = int(obj.get("d", 1))
            rows = [[qext(parse_rational(e["x"]), parse_rational(e.get("y", "0")), int(e.get("d", d))) for e in row] for row in obj["entries"]]
            h = cls(rows, "exact", obj.get("name"))
        else:
            h = cls([[complex(e["re"], e["im"]) for e in row] for row in obj["entries"]], "float", obj.get("name"))
        if "n" in obj and obj["n"] != h.n:
            raise ValueError(f"declared n={obj['n']} but got {h.n} rows")
        return h

    def save(self, path) -> None:
        Path(path).write_text(json.dumps(self.to_json()))

    @classmethod
    def load(cls, path) -> "ComplexHadamardMatrix":
        return cls.from_json(json.loads(Path(path).read_text()))


# -- verification -------------------------------------------------------------
@dataclass(frozen=True)
class Verification:
    ok: bool
    reason: str = ""
    pair: tuple[int, int] | None = None
    residual: float = 0.0

    def __bool__(self):
        return self.ok


def verify_chm(h: ComplexHadamardMatrix) -> Verification:
    """Check unimodularity and ``H H* = n I``; never raises on a bad matrix."""
    n = h.n
    if h.exact:
        rows = h.entries
        for i, row in enumerate(rows):
            for j, z in enumerate(row):
                if z.norm() != 1:
                    return Verification(False, f"entry ({i},{j}) is not unimodular", (i, j), float(abs(z.norm() - 1)))
        conj = [[z.conjugate() for z in row] for row in rows]
        worst, worst_pair = None, None
        for i in range(n):
            for j in range(i + 1, n):
                s = sum((a * b for a, b in zip(rows[i], conj[j])), QuadExtScalar.coerce(0))
                if s != 0:
                    mag = float(s.norm()) ** 0.5
                    if worst is None or mag > worst:
                        worst, worst_pair = mag, (i, j)
        if worst is not None:
            return Verification(False, "rows not orthogonal", worst_pair, worst)
        return Verification(True)
    a = h.entries
    unimod = np.abs(np.abs(a) - 1)
    if unimod.max(initial=0) > TOL:
        i, j = np.unravel_index(int(np.argmax(unimod)), a.shape)
        return Verification(False, f"entry ({i},{j}) is not unimodular", (int(i), int(j)), float(unimod.max()))
    g = np.abs(a @ a.conj().T - n * np.eye(n))
    if g.max(initial=0) > TOL * n:
        i, j = np.unravel_index(int(np.argmax(g)), g.shape)
        return Verification(False, "rows not orthogonal", (int(min(i, j)), int(max(i, j))), float(g.max()))
    return Verification(True, residual=float(g.max(initial=0)))


def dephase(h: ComplexHadamardMatrix) -> ComplexHadamardMatrix:
    """Normalize so that the first row and column are all ones."""
    if h.exact:
        rows = h.entries
        first = rows[0]
        cols_fixed = [[z / first[j] for j, z in enumerate(row)] for row in rows]
        out = [[z / row[0] for z in row] for row in cols_fixed]
        return ComplexHadamardMatrix(out, "exact", h.name)
    a = h.entries / h.entries[0][None, :]
    a = a / a[:, 0][:, None]
    return ComplexHadamardMatrix(a, "float", h.name)


# -- equivalence moves ----------------------------------------------------------
@dataclass(frozen=True)
class EquivalenceMove:
    """``out[i][j] = row_phases[i] * h[row_perm[i]][col_perm[j]] * col_phases[j]``."""

    row_perm: tuple[int, ...]
    col_perm: tuple[int, ...]
    row_phases: tuple = ()
    col_phases: tuple = ()

    @classmethod
    def identity(cls, n: int) -> "EquivalenceMove":
        one = QuadExtScalar.coerce(1)
        return cls(tuple(range(n)), tuple(range(n)), (one,) * n, (one,) * n)


def apply_equivalence(h: ComplexHadamardMatrix, mv: EquivalenceMove) -> ComplexHadamardMatrix:
    n = h.n
    if sorted(mv.row_perm) != list(range(n)) or sorted(mv.col_perm) != list(range(n)):
        raise ValueError("row_perm and col_perm must be permutations of range(n)")
    rp = mv.row_phases or (1,) * n
    cp = mv.col_phases or (1,) * n
    if h.exact:
        rp = [QuadExtScalar.coerce(z) for z in rp]
        cp = [QuadExtScalar.coerce(z) for z in cp]
        for z in (*rp, *cp):
            if z.y != 0 and h.d != 1 and z.d != h.d:
                raise MixedRadicand(f"phase {z} not in Q(i*sqrt({h.d}))")
        src = h.entries
        out = [[rp[i] * src[mv.row_perm[i]][mv.col_perm[j]] * cp[j] for j in range(n)] for i in range(n)]
        return ComplexHadamardMatrix(out, "exact", h.name)
    a = h.entries[np.ix_(mv.row_perm, mv.col_perm)]
    rpf = np.array([to_float(z) if isinstance(z, QuadExtScalar) else complex(z) for z in rp])
    cpf = np.array([to_float(z) if isinstance(z, QuadExtScalar) else complex(z) for z in cp])
    return ComplexHadamardMatrix(rpf[:, None] * a * cpf[None, :], "float", h.name)


def random_move(h: ComplexHadamardMatrix, rng: np.random.Generator) -> EquivalenceMove:
    """Random permutations and phases.

    Exact phases are drawn from {+-1, +-z, +-conj(z)} over the entries z of ``h``,
    which keeps them inside the matrix's own field.
    """
    n = h.n
    row_perm = tuple(int(i) for i in rng.permutation(n))
    col_perm = tuple(int(i) for i in rng.permutation(n))
    if h.exact:
        base = sorted(h.values() | {QuadExtScalar.coerce(1)}, key=QuadExtScalar.sort_key)
        pool = sorted({s * z for z in base for s in (1, -1)} | {s * z.conjugate() for z in base for s in (1, -1)}, key=QuadExtScalar.sort_key)
        pick = rng.integers(len(pool), size=2 * n)
        phases = [pool[int(k)] for k in pick]
    else:
        phases = list(np.exp(2j * np.pi * rng.random(2 * n)))
    return EquivalenceMove(row_perm, col_perm, tuple(phases[:n]), tuple(phases[n:]))


# -- structural tests -------------------------------------------------------------
@dataclass(frozen=True)
class Regularity:
    regular: bool
    row_sum_abs2: tuple  # |row sum|^2 per row (Fraction for exact, float otherwise)

    def __bool__(self):
        return self.regular


def is_regular(h: ComplexHadamardMatrix) -> Regularity:
    if h.exact:
        sums = [sum(row, QuadExtScalar.coerce(0)).norm() for row in h.entries]
        return Regularity(len(set(sums)) <= 1, tuple(sums))
    s = np.abs(h.entries.sum(axis=1))
    return Regularity(bool(np.ptp(s) <= TOL) if len(s) else True, tuple(float(v) ** 2 for v in s))


def detect_butson(h: ComplexHadamardMatrix) -> int | None:
    """Least m such that every entry is an m-th root of unity, else None."""
    if h.exact:
        orders = []
        for z in h.values():
            o = root_of_unity_order(z)
            if o is None:
                return None
            orders.append(o)
        return reduce(math.lcm, orders, 1)
    orders = []
    for z in np.unique(np.round(h.entries.ravel(), 12)):
        turn = (np.angle(z) / (2 * np.pi)) % 1.0
        frac = Fraction(turn).limit_denominator(360)
        if abs(float(frac) - turn) > TOL or abs(abs(z) - 1) > TOL:
            return None
        orders.append(frac.denominator)
    return reduce(math.lcm, orders, 1)


def fourier(n: int) -> ComplexHadamardMatrix:
    if n < 1:
        raise ValueError("n must be positive")
    jk = np.outer(np.arange(n), np.arange(n)) % n
    return ComplexHadamardMatrix(np.exp(2j * np.pi * jk / n), "float", f"F{n}")


# -- printed matrices -------------------------------------------------------------
_OMEGA = qext(Fraction(-1, 2), Fraction(1, 2), 3)
_A15 = qext(Fraction(-7, 8), Fraction(1, 8), 15)
_B15 = qext(Fraction(-5, 6), Fraction(1, 6), 11)
_C9 = qext(Fraction(1, 4), Fraction(1, 4), 15)

_FIXTURE_TEXT = {
    "P7": (
        {"w": _OMEGA},
        """
        -1  1  w  1  w  1  w
         1 -1  w  1  1  w  w
         w  w -w  1  w  w  1
         1  1  1 -1  w  w  w
         w  1  w  w -w  w  1
         1  w  w  w  w -w  1
         w  w  1  w  1  1 -1
        """,
    ),
    "U15": (
        {"a": _A15},
        """
        a 1 a 1 a 1 a 1 a 1 a 1 a 1 a
        1 a a 1 1 a a 1 1 a a 1 1 a a
        a a 1 1 a a 1 1 a a 1 1 a a 1
        1 1 1 a a a a 1 1 1 1 a a a a
        a 1 a a 1 a 1 1 a 1 a a 1 a 1
        1 a a a a 1 1 1 1 a a a a 1 1
        a a 1 a 1 1 a 1 a a 1 a 1 1 a
        1 1 1 1 1 1 1 a a a a a a a a
        a 1 a 1 a 1 a a 1 a 1 a 1 a 1
        1 a a 1 1 a a a a 1 1 a a 1 1
        a a 1 1 a a 1 a 1 1 a a 1 1 a
        1 1 1 a a a a a a a a 1 1 1 1
        a 1 a a 1 a 1 a 1 a 1 1 a 1 a
        1 a a a a 1 1 a a 1 1 1 1 a a
        a a 1 a 1 1 a a 1 1 a 1 a a 1
        """,
    ),
    "V15": (
        {"b": _B15},
        """
        -1  1  b  1  b  1  b  1  b  1  b  1  b  1  b
         1 -1  b  1  1  b  b  1  1  b  b  1  1  b  b
         b  b -b  1  b  b  1  1  b  b  1  1  b  b  1
         1  1  1 -1  b  b  b  1  1  1  1  b  b  b  b
         b  1  b  b -b  b  1  1  b  1  b  b  1  b  1
         1  b  b  b  b -b  1  1  1  b  b  b  b  1  1
         b  b  1  b  1  1 -1  1  b  b  1  b  1  1  b
         1  1  1  1  1  1  1 -1  b  b  b  b  b  b  b
         b  1  b  1  b  1  b  b -b  b  1  b  1  b  1
         1  b  b  1  1  b  b  b  b -b  1  b  b  1  1
         b  b  1  1  b  b  1  b  1  1 -1  b  1  1  b
         1  1  1  b  b  b  b  b  b  b  b -b  1  1  1
         b  1  b  b  1  b  1  b  1  b  1  1 -1  1  b
         1  b  b  b  b  1  1  b  b  1  1  1  1 -1  b
         b  b  1  b  1  1  b  b  1  1  b  1  b  b -b
        """,
    ),
    "W9A": (
        {"c": _C9, "C": _C9.conjugate()},
        """
        1 c c c c C C C C
        c 1 C C c c c C C
        c C 1 c C c C c C
        c C c 1 C C c C c
        c c C C 1 C C c c
        C c c C C 1 c c C
        C c C c C c 1 C c
        C C c C c c C 1 c
        C C C c c C c c 1
        """,
    ),
}

FIXTURE_NAMES = tuple(_FIXTURE_TEXT)


def _parse_fixture(symbols: dict, text: str) -> list[list[QuadExtScalar]]:
    one = QuadExtScalar.coerce(1)
    rows = []
    for line in text.strip().splitlines():
        row = []
        for tok in line.split():
            neg = tok.startswith("-")
            body = tok[1:] if neg else tok
            z = one if body == "1" else symbols[body]
            row.append(-z if neg else z)
        rows.append(row)
    return rows


def fixture(name: str) -> ComplexHadamardMatrix:
    if name not in _FIXTURE_TEXT:
        raise UnknownFixture(name)
    symbols, text = _FIXTURE_TEXT[name]
    return ComplexHadamardMatrix(_parse_fixture(symbols, text), "exact", name)
