"""Dense linear algebra over an exact field (Fraction or QuadExtScalar entries).

Straight Gaussian elimination with first-nonzero pivoting.  These routines
are the slow reference path; bulk minor enumeration lives in ``_engine``.
"""
from __future__ import annotations

from fractions import Fraction


class Singular(ZeroDivisionError):
    pass


def _zero_like(x):
    return x - x


def _one_like(x):
    return x / x if x else (x - x) + 1


def _lift(m):
    return [[Fraction(v) if isinstance(v, int) else v for v in row] for row in m]


def det(m):
    a = _lift(m)
    n = len(a)
    if n == 0:
        return Fraction(1)
    result = _one_like(next((v for row in a for v in row if v), Fraction(1)))
    for c in range(n):
        piv = next((r for r in range(c, n) if a[r][c] != 0), None)
        if piv is None:
            return _zero_like(a[0][0])
        if piv != c:
            a[c], a[piv] = a[piv], a[c]
            result = -result
        pv = a[c][c]
        result = result * pv
        for r in range(c + 1, n):
            f = a[r][c] / pv
            if f:
                a[r] = [x - f * y for x, y in zip(a[r], a[c])]
    return result


def identity(n: int, one=Fraction(1)):
    zero = one - one
    return [[one if i == j else zero for j in range(n)] for i in range(n)]


def matmul(a, b):
    bt = list(zip(*b))
    return [[sum((x * y for x, y in zip(row, col)), _zero_like(row[0])) for col in bt] for row in a]


def add(a, b):
    return [[x + y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def conj_transpose(a):
    return [[x.conjugate() for x in col] for col in zip(*a)]


def inverse(m):
    m = _lift(m)
    n = len(m)
    one = _one_like(next((v for row in m for v in row if v), Fraction(1)))
    aug = [list(row) + r for row, r in zip(m, identity(n, one))]
    for c in range(n):
        piv = next((r for r in range(c, n) if aug[r][c] != 0), None)
        if piv is None:
            raise Singular("matrix is singular")
        aug[c], aug[piv] = aug[piv], aug[c]
        pv = aug[c][c]
        aug[c] = [x / pv for x in aug[c]]
        for r in range(n):
            if r != c and aug[r][c] != 0:
                f = aug[r][c]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[c])]
    return [row[n:] for row in aug]


def submatrix(m, rows, cols):
    return [[m[i][j] for j in cols] for i in rows]
