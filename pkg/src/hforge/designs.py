"""Symmetric 2-designs, real Hadamard matrices and symmetric conference matrices.

All incidence and sign matrices are dense ``numpy`` integer arrays; the orders
in play are small (well under 100), so nothing here is performance critical.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .finite_field import field_of_order, quadratic_character


class NotADesign(ValueError):
    def __init__(self, reason: str, witness=None):
        super().__init__(f"{reason} (witness: {witness})" if witness is not None else reason)
        self.reason = reason
        self.witness = witness


class BadResidueClass(ValueError):
    pass


class NotNormalized(ValueError):
    pass


class NotSymmetric(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class BlockDesign:
    v: int
    k: int
    lam: int
    incidence: np.ndarray

    @property
    def order(self) -> int:
        """Design order ``k - lambda``."""
        return self.k - self.lam

    @property
    def params(self) -> tuple[int, int, int]:
        return (self.v, self.k, self.lam)

    def __repr__(self):
        return f"BlockDesign(2-({self.v},{self.k},{self.lam}))"


def _as_int_matrix(mat) -> np.ndarray:
    a = np.asarray(mat)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    return a.astype(np.int64)


def verify_2design(incidence) -> BlockDesign:
    """Check that a 0/1 matrix is a symmetric 2-(v, k, lambda) design.

    Raises :class:`NotADesign` naming the first failed condition.
    """
    b = _as_int_matrix(incidence)
    v = b.shape[0]
    bad = np.argwhere((b != 0) & (b != 1))
    if len(bad):
        raise NotADesign("entries must be 0 or 1", tuple(int(t) for t in bad[0]))
    rows, cols = b.sum(axis=1), b.sum(axis=0)
    k = int(rows[0]) if v else 0
    if (rows != k).any():
        raise NotADesign("row sums differ", (0, int(np.argmax(rows != k))))
    if (cols != k).any():
        raise NotADesign("column sums differ", int(np.argmax(cols != k)))
    gram = b @ b.T
    lam = int(gram[0, 1]) if v > 1 else 0
    off = gram - np.diag(np.diag(gram))
    np.fill_diagonal(off, lam)
    if (off != lam).any():
        i, j = (int(t) for t in np.argwhere(off != lam)[0])
        raise NotADesign("row pair intersections differ", (0, 1, i, j))
    if not (lam < k < v):
        raise NotADesign(f"trivial design, need lambda < k < v (got {v}, {k}, {lam})")
    if lam * (v - 1) != k * (k - 1):
        raise NotADesign("lambda(v-1) != k(k-1)", (v, k, lam))
    return BlockDesign(v, k, lam, b.astype(np.int8))


def paley_design(q: int) -> BlockDesign:
    """Paley 2-(q, (q-1)/2, (q-3)/4) design for ``q = 3 mod 4``; circulant when ``q`` is prime."""
    if q % 4 != 3:
        raise BadResidueClass(f"q = {q} is not 3 mod 4")
    f = field_of_order(q)
    els = f.elements
    inc = np.array(
        [[1 if quadratic_character(f, f.sub(y, x)) == 1 else 0 for y in els] for x in els],
        dtype=np.int8,
    )
    return verify_2design(inc)


def sylvester_hadamard(t: int) -> np.ndarray:
    if t < 0:
        raise ValueError("t must be nonnegative")
    idx = np.arange(2**t)
    parity = np.vectorize(lambda m: bin(m).count("1") & 1)(idx[:, None] & idx[None, :])
    return (1 - 2 * parity).astype(np.int64)


def is_real_hadamard(h) -> bool:
    h = _as_int_matrix(h)
    n = h.shape[0]
    return bool(np.isin(h, (-1, 1)).all() and (h @ h.T == n * np.eye(n, dtype=np.int64)).all())


def is_normalized(h) -> bool:
    h = np.asarray(h)
    return bool((h[0] == 1).all() and (h[:, 0] == 1).all())


def hadamard_core_design(h) -> BlockDesign:
    """Delete the first row/column of a normalized real Hadamard matrix; +1 -> 1, -1 -> 0."""
    h = _as_int_matrix(h)
    if not is_normalized(h):
        raise NotNormalized("first row and column must be all +1")
    if h.shape[0] < 8 or h.shape[0] % 4:
        raise ValueError(f"order must be 4m >= 8, got {h.shape[0]}")
    return verify_2design((h[1:, 1:] == 1).astype(np.int8))


def design_to_hadamard(b: BlockDesign) -> np.ndarray:
    """Inverse of :func:`hadamard_core_design` for a 2-(4m-1, 2m-1, m-1) design."""
    core = 2 * b.incidence.astype(np.int64) - 1
    n = b.v + 1
    h = np.ones((n, n), dtype=np.int64)
    h[1:, 1:] = core
    return h


def paley_conference(q: int) -> np.ndarray:
    """Symmetric normalized conference matrix of order q+1 for ``q = 1 mod 4``."""
    if q % 4 != 1:
        raise BadResidueClass(f"q = {q} is not 1 mod 4")
    f = field_of_order(q)
    els = f.elements
    c = np.zeros((q + 1, q + 1), dtype=np.int64)
    c[0, 1:] = 1
    c[1:, 0] = 1
    for i, x in enumerate(els):
        for j, y in enumerate(els):
            c[i + 1, j + 1] = quadratic_character(f, f.sub(x, y))
    return c


def is_conference(c) -> bool:
    c = _as_int_matrix(c)
    n = c.shape[0]
    off = ~np.eye(n, dtype=bool)
    return bool(
        (np.diag(c) == 0).all()
        and np.isin(c[off], (-1, 1)).all()
        and (c @ c.T == (n - 1) * np.eye(n, dtype=np.int64)).all()
    )


def normalize_conference(c) -> np.ndarray:
    """Negate rows and columns so the nonzero entries of row 0 and column 0 are +1.

    Column signs are fixed from row 0, then row signs from column 0.  A symmetric
    input whose row-0 and column-0 sign patterns agree stays symmetric.
    """
    c = _as_int_matrix(c).copy()
    n = c.shape[0]
    col_sign = np.ones(n, dtype=np.int64)
    col_sign[1:] = c[0, 1:]
    c = c * col_sign[None, :]
    row_sign = np.ones(n, dtype=np.int64)
    row_sign[1:] = c[1:, 0]
    return c * row_sign[:, None]


def paley_hadamard(q: int) -> np.ndarray:
    """Paley-I real Hadamard matrix of order q+1 (``q = 3 mod 4``), normalized."""
    return design_to_hadamard(paley_design(q))


def paley2_hadamard(q: int) -> np.ndarray:
    """Paley-II real Hadamard matrix of order 2(q+1) (``q = 1 mod 4``)."""
    c = paley_conference(q)
    eye = np.eye(c.shape[0], dtype=np.int64)
    return np.kron(c, np.array([[1, 1], [1, -1]])) + np.kron(eye, np.array([[1, -1], [-1, -1]]))


def normalize_real_hadamard(h) -> np.ndarray:
    h = _as_int_matrix(h)
    h = h * h[0][None, :]
    return h * h[:, 0][:, None]


def biplane_16() -> BlockDesign:
    """2-(16, 6, 2) design on the 4x4 grid: block of a cell = other cells in its row or column."""
    cells = [(r, c) for r in range(4) for c in range(4)]
    inc = np.array(
        [[1 if (p != q and (p[0] == q[0] or p[1] == q[1])) else 0 for q in cells] for p in cells],
        dtype=np.int8,
    )
    return verify_2design(inc)


def real_hadamard_library() -> dict[str, np.ndarray]:
    """Real Hadamard matrices of orders 1..16 shipped with the package."""
    lib = {
        "H1": np.ones((1, 1), dtype=np.int64),
        "H2": sylvester_hadamard(1),
        "H4": sylvester_hadamard(2),
        "H4_paley": paley_hadamard(3),
        "H8": sylvester_hadamard(3),
        "H8_paley": paley_hadamard(7),
        "H12": paley_hadamard(11),
        "H12_paley2": paley2_hadamard(5),
        "H16": sylvester_hadamard(4),
    }
    return lib


def is_circulant(mat) -> bool:
    rows = [list(r) for r in mat]
    n = len(rows)
    for i in range(1, n):
        prev = rows[i - 1]
        if rows[i] != prev[-1:] + prev[:-1]:
            return False
    return True


def design_order_bound_holds(b: BlockDesign) -> bool:
    return 4 * b.order - 1 <= b.v


# -- JSON -------------------------------------------------------------------
def matrix_to_json(mat) -> dict:
    a = _as_int_matrix(mat)
    return {"order": int(a.shape[0]), "rows": a.tolist()}


def matrix_from_json(obj: dict) -> np.ndarray:
    a = np.array(obj["rows"], dtype=np.int64)
    if a.shape != (obj["order"], obj["order"]):
        raise ValueError(f"declared order {obj['order']} does not match rows {a.shape}")
    return a


def save_matrix(mat, path) -> None:
    Path(path).write_text(json.dumps(matrix_to_json(mat)))


def load_matrix(path) -> np.ndarray:
    return matrix_from_json(json.loads(Path(path).read_text()))
