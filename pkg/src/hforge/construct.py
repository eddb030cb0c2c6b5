"""Complex Hadamard matrices induced by designs, conference matrices and
symmetric real Hadamard matrices, plus the two-entry classifier."""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import product

import numpy as np

from .chm import ComplexHadamardMatrix
from .designs import (
    BlockDesign,
    NotADesign,
    NotNormalized,
    NotSymmetric,
    is_conference,
    is_normalized,
    is_real_hadamard,
    verify_2design,
)
from .scalar import MixedRadicand, QuadExtScalar, qext


class Infeasible(ValueError):
    def __init__(self, re_value):
        super().__init__(f"infeasible: Re[a] = {re_value} < -1, so no unimodular entry exists")
        self.re_value = re_value


class BadParameters(ValueError):
    pass


def _sign(sign) -> int:
    if sign in ("+", 1, "plus", "pos"):
        return 1
    if sign in ("-", -1, "minus", "neg"):
        return -1
    raise ValueError(f"sign must be '+' or '-', got {sign!r}")


def unimodular_with_real_part(re: Fraction, sign=+1) -> QuadExtScalar:
    """``re + sign*i*sqrt(1 - re**2)`` as an exact scalar (requires ``|re| <= 1``)."""
    re = Fraction(re)
    if abs(re) > 1:
        raise ValueError(f"|{re}| > 1")
    p, q = re.numerator, re.denominator
    return qext(re, Fraction(_sign(sign), q), q * q - p * p) if q * q != p * p else qext(re)


@dataclass(frozen=True)
class InducedEntry:
    re: Fraction
    value_pos: QuadExtScalar
    value_neg: QuadExtScalar

    def value(self, sign) -> QuadExtScalar:
        return self.value_pos if _sign(sign) > 0 else self.value_neg


def check_design_parameters(v: int, k: int, lam: int) -> None:
    if not (0 <= lam < k < v):
        raise BadParameters(f"need lambda < k < v, got ({v}, {k}, {lam})")
    if lam * (v - 1) != k * (k - 1):
        raise BadParameters(f"lambda(v-1) != k(k-1) for ({v}, {k}, {lam})")


def induced_entry(v: int, k: int, lam: int) -> InducedEntry:
    """The entry ``a`` replacing the zeros of a 2-(v,k,lambda) design."""
    check_design_parameters(v, k, lam)
    re = 1 - Fraction(v * (v - 1), 2 * k * (v - k))
    if re < -1:
        raise Infeasible(re)
    pos = unimodular_with_real_part(re, +1)
    return InducedEntry(re, pos, pos.conjugate())


def induce_from_design(b: BlockDesign, sign="+") -> ComplexHadamardMatrix:
    a = induced_entry(b.v, b.k, b.lam).value(sign)
    one = QuadExtScalar.coerce(1)
    rows = [[one if e else a for e in row] for row in b.incidence.tolist()]
    return ComplexHadamardMatrix(rows, "exact", f"induced 2-{b.params}")


def hadamard_design_entry(m: int, sign="+") -> QuadExtScalar:
    """``-1 + 1/(2m) +- i*sqrt(4m-1)/(2m)``."""
    return qext(Fraction(1 - 2 * m, 2 * m), Fraction(_sign(sign), 2 * m), 4 * m - 1)


def sym_hadamard_entry(m: int, sign="+") -> QuadExtScalar:
    """``-1 + 1/(2m-2) +- i*sqrt(4m-5)/(2m-2)``."""
    return qext(Fraction(3 - 2 * m, 2 * m - 2), Fraction(_sign(sign), 2 * m - 2), 4 * m - 5)


def conference_entry_real_part(m: int, sign="+") -> float:
    return (-1 + _sign(sign) * math.sqrt(4 * m + 1)) / (4 * m)


def conference_entry(m: int, sign="+"):
    """Unimodular ``c`` with ``Re[c] = (-1 +- sqrt(4m+1)) / (4m)`` and ``Im[c] > 0``.

    Exact when ``4m+1`` is a perfect square; otherwise ``c`` has degree four over
    Q and a Python ``complex`` is returned.
    """
    r = math.isqrt(4 * m + 1)
    if r * r == 4 * m + 1:
        return unimodular_with_real_part(Fraction(-1 + _sign(sign) * r, 4 * m), +1)
    re = conference_entry_real_part(m, sign)
    return complex(re, math.sqrt(1 - re * re))


def conference_to_chm(c, sign="+") -> ComplexHadamardMatrix:
    c = np.asarray(c, dtype=np.int64)
    n = c.shape[0]
    if not is_conference(c):
        raise ValueError("not a conference matrix")
    if not ((c[0, 1:] == 1).all() and (c[1:, 0] == 1).all()):
        raise NotNormalized("first row and column must be +1 off the diagonal")
    if not (c == c.T).all():
        raise NotSymmetric("conference matrix must be symmetric")
    if n < 6 or (n - 2) % 4:
        raise ValueError(f"order must be 4m+2 >= 6, got {n}")
    m = (n - 2) // 4
    val = conference_entry(m, sign)
    core = c[1:, 1:]
    if isinstance(val, QuadExtScalar):
        one, cc = QuadExtScalar.coerce(1), val.conjugate()
        rows = [[one if e == 0 else (val if e == 1 else cc) for e in row] for row in core.tolist()]
        return ComplexHadamardMatrix(rows, "exact", f"W{n - 1}{'A' if _sign(sign) > 0 else 'B'}")
    arr = np.where(core == 0, 1.0 + 0j, np.where(core == 1, val, val.conjugate()))
    return ComplexHadamardMatrix(arr, "float", f"W{n - 1}{'A' if _sign(sign) > 0 else 'B'}")


def sym_hadamard_to_chm(h, sign="+") -> ComplexHadamardMatrix:
    h = np.asarray(h, dtype=np.int64)
    n = h.shape[0]
    if n < 8 or n % 4:
        raise ValueError(f"order must be 4m >= 8, got {n}")
    if not is_real_hadamard(h):
        raise ValueError("not a real Hadamard matrix")
    if not is_normalized(h):
        raise NotNormalized("first row and column must be all +1")
    if not (h == h.T).all():
        raise NotSymmetric("Hadamard matrix must be symmetric")
    b = sym_hadamard_entry(n // 4, sign)
    one = QuadExtScalar.coerce(1)
    table = {(True, 1): -b, (True, -1): -one, (False, 1): one, (False, -1): b}
    core = h[1:, 1:].tolist()
    rows = [[table[(i == j, e)] for j, e in enumerate(row)] for i, row in enumerate(core)]
    return ComplexHadamardMatrix(rows, "exact", f"V{n - 1}")


# -- the six orthogonality equations behind sym_hadamard_to_chm ------------------------
@dataclass(frozen=True)
class ThreeEntrySolution:
    """x replaces diagonal +1s, y diagonal -1s, z off-diagonal -1s."""

    x: QuadExtScalar
    y: QuadExtScalar
    z: QuadExtScalar


def three_entry_residuals(m: int, x, y, z) -> list[QuadExtScalar]:
    """Left-hand sides of the six row-orthogonality equations; all zero for a solution."""
    rz = z.real
    return [
        2 * m * rz + 2 * x.real + 2 * m - 3,
        2 * (m - 1) * rz + 2 * (x * z.conj()).real + 2 * m - 1,
        2 * m * rz + x + y.conj() - z.conj() + 2 * m - 2,
        2 * m * rz + x * z.conj() + z * y.conj() - z.conj() + 2 * m - 2,
        2 * (m - 1) * rz + 2 * y.real + 2 * m - 1,
        2 * m * rz + 2 * (y * z.conj()).real + 2 * m - 3,
    ]


def _poly_mul(p, q):
    out = [Fraction(0)] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        for j, b in enumerate(q):
            out[i + j] += a * b
    return out


def _poly_add(p, q, s=1):
    n = max(len(p), len(q))
    p = p + [Fraction(0)] * (n - len(p))
    q = q + [Fraction(0)] * (n - len(q))
    return [a + s * b for a, b in zip(p, q)]


def _poly_eval(p, t):
    return sum(c * t**i for i, c in enumerate(p))


def _divisors(n: int) -> list[int]:
    n = abs(n)
    return [d for d in range(1, n + 1) if n % d == 0]


def _rational_roots(p) -> set[Fraction]:
    while p and p[-1] == 0:
        p = p[:-1]
    if not p:
        raise ValueError("zero polynomial")
    roots = set()
    while p and p[0] == 0:
        roots.add(Fraction(0))
        p = p[1:]
    if len(p) <= 1:
        return roots
    lcm = math.lcm(*(c.denominator for c in p))
    ints = [int(c * lcm) for c in p]
    for num in _divisors(ints[0]):
        for den in _divisors(ints[-1]):
            for s in (1, -1):
                t = Fraction(s * num, den)
                if _poly_eval(p, t) == 0:
                    roots.add(t)
    return roots


def solve_theorem3_system(m: int) -> list[ThreeEntrySolution]:
    """All unimodular (x, y, z) over imaginary quadratic fields solving the six equations.

    The first and fifth equations give Re[x], Re[y] as affine functions of
    Re[z] = t.  Squaring the real parts of the second and sixth equations gives
    two polynomials in t whose common rational roots are the only candidates;
    imaginary parts are then fixed up to sign and every sign pattern is
    checked by exact substitution.
    """
    if m < 2:
        raise ValueError("m must be >= 2")
    # Re[x] = X0 + X1 t, Re[y] = Y0 + Y1 t
    X = [Fraction(3 - 2 * m, 2), Fraction(-m)]
    Y = [Fraction(1 - 2 * m, 2), Fraction(1 - m)]
    T = [Fraction(0), Fraction(1)]
    one_minus_sq = lambda p: _poly_add([Fraction(1)], _poly_mul(p, p), -1)  # noqa: E731
    # (1-X^2)(1-t^2) = (Y - X t)^2 and (1-Y^2)(1-t^2) = (X - Y t)^2
    p1 = _poly_add(_poly_mul(one_minus_sq(X), one_minus_sq(T)), _poly_mul(*(2 * [_poly_add(Y, _poly_mul(X, T), -1)])), -1)
    p2 = _poly_add(_poly_mul(one_minus_sq(Y), one_minus_sq(T)), _poly_mul(*(2 * [_poly_add(X, _poly_mul(Y, T), -1)])), -1)
    candidates = sorted(t for t in _rational_roots(p1) if _poly_eval(p2, t) == 0)
    found: list[ThreeEntrySolution] = []
    for t in candidates:
        reals = (_poly_eval(X, t), _poly_eval(Y, t), t)
        if any(abs(r) > 1 for r in reals):
            continue
        for signs in product((1, -1), repeat=3):
            try:
                x, y, z = (unimodular_with_real_part(r, s) for r, s in zip(reals, signs))
                if all(res == 0 for res in three_entry_residuals(m, x, y, z)):
                    sol = ThreeEntrySolution(x, y, z)
                    if sol not in found:
                        found.append(sol)
            except MixedRadicand:
                continue
    return found


# -- two-entry classification -------------------------------------------------------
@dataclass(frozen=True)
class TwoEntryClass:
    kind: str  # "regular" | "real_menon" | "not_two_entry"
    design: BlockDesign | None = None
    a: QuadExtScalar | complex | None = None
    reason: str = ""


def classify_two_entry(h: ComplexHadamardMatrix) -> TwoEntryClass:
    """Recognize a matrix composed of exactly the entries {1, a}.

    Scans raw entries without dephasing; dephase first for an
    equivalence-robust answer.
    """
    if h.exact:
        vals = h.values()
        one = QuadExtScalar.coerce(1)
        is_one = [[z == one for z in row] for row in h.entries]
        others = vals - {one}
    else:
        rounded = {complex(round(z.real, 9), round(z.imag, 9)) for z in h.entries.ravel()}
        vals = rounded
        one = complex(1, 0)
        is_one = (np.abs(h.entries - 1) < 1e-9).tolist()
        others = {z for z in rounded if abs(z - 1) > 1e-9}
    if len(vals) != 2 or len(others) != 1:
        return TwoEntryClass("not_two_entry", reason=f"{len(vals)} distinct entries")
    (a,) = others
    inc = np.array(is_one, dtype=np.int8)
    re_a = a.real
    if (h.exact and a == -1) or (not h.exact and abs(a + 1) < 1e-9):
        try:
            design = verify_2design(inc)
        except NotADesign:
            design = None
        return TwoEntryClass("real_menon", design, a)
    ks = inc.sum(axis=1)
    if (ks != ks[0]).any():
        return TwoEntryClass("not_two_entry", a=a, reason="row counts of 1 differ; not a Hadamard matrix")
    v, k = h.n, int(ks[0])
    lam = k + Fraction(v) / (2 * Fraction(re_a) - 2) if h.exact else k + v / (2 * re_a - 2)
    try:
        design = verify_2design(inc)
    except NotADesign as exc:
        return TwoEntryClass("not_two_entry", a=a, reason=str(exc))
    if (h.exact and design.lam != lam) or (not h.exact and abs(design.lam - lam) > 1e-6):
        return TwoEntryClass("not_two_entry", design, a, reason=f"lambda {design.lam} != {lam}")
    return TwoEntryClass("regular", design, a)


__all__ = [
    "BadParameters",
    "Infeasible",
    "InducedEntry",
    "ThreeEntrySolution",
    "TwoEntryClass",
    "classify_two_entry",
    "conference_entry",
    "conference_to_chm",
    "induce_from_design",
    "induced_entry",
    "solve_theorem3_system",
    "sym_hadamard_to_chm",
    "hadamard_design_entry",
    "sym_hadamard_entry",
    "three_entry_residuals",
]
