"""GF(2) linear algebra on bit-packed rows.

Rows are uint64 arrays where column ``c`` is bit ``c % 64`` of word ``c // 64``.
"""

from __future__ import annotations

import numpy as np

from . import _kernels
from .pauli import pack_bits, unpack_bits


def as_packed(rows, ncols: int | None = None) -> tuple[np.ndarray, int]:
    """Accept a dense 0/1 matrix or an already packed uint64 matrix."""
    rows = np.asarray(rows)
    if rows.dtype == np.uint64:
        if ncols is None:
            raise ValueError("packed input needs ncols")
        return np.array(rows, dtype=np.uint64, order="C", ndmin=2), ncols
    rows = np.atleast_2d(rows.astype(np.uint8) & 1)
    return np.ascontiguousarray(pack_bits(rows)), rows.shape[1]


def rref(rows, ncols: int | None = None) -> tuple[np.ndarray, np.ndarray, int]:
    """Reduced row-echelon form.  Returns ``(R, pivots, ncols)`` with R packed, trimmed to rank."""
    M, ncols = as_packed(rows, ncols)
    M = M.copy()
    piv = _kernels.rref_inplace(M, ncols)
    return M[: len(piv)].copy(), np.asarray(piv, dtype=np.int64), ncols


def rank(rows, ncols: int | None = None) -> int:
    return len(rref(rows, ncols)[1])


def nullspace(matrix) -> np.ndarray:
    """Basis (dense uint8 rows) of {v : matrix @ v = 0 mod 2}."""
    A = np.atleast_2d(np.asarray(matrix, dtype=np.uint8) & 1)
    n = A.shape[1]
    R, piv, _ = rref(A)
    dense = unpack_bits(R, n) if len(piv) else np.zeros((0, n), np.uint8)
    pivset = set(piv.tolist())
    free = [c for c in range(n) if c not in pivset]
    basis = np.zeros((len(free), n), dtype=np.uint8)
    for j, f in enumerate(free):
        basis[j, f] = 1
        for i, c in enumerate(piv):
            basis[j, c] = dense[i, f]
    return basis


def solve(A, b) -> np.ndarray | None:
    """One solution x of A x = b over GF(2), or None when inconsistent."""
    A = np.atleast_2d(np.asarray(A, dtype=np.uint8) & 1)
    b = np.asarray(b, dtype=np.uint8).reshape(-1, 1) & 1
    n = A.shape[1]
    R, piv, _ = rref(np.concatenate([A, b], axis=1))
    if len(piv) and piv[-1] == n:
        return None
    dense = unpack_bits(R, n + 1) if len(piv) else np.zeros((0, n + 1), np.uint8)
    x = np.zeros(n, dtype=np.uint8)
    for i, c in enumerate(piv):
        x[c] = dense[i, n]
    return x


class RowSpace:
    """Row space of a GF(2) matrix with canonical reduction of vectors.

    ``reduce(v)`` returns the unique representative of ``v + rowspace`` that
    has zeros on every pivot column.
    """

    def __init__(self, rows, ncols: int | None = None):
        self.R, self.pivots, self.ncols = rref(rows, ncols)

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def reduce(self, v: np.ndarray) -> np.ndarray:
        v = np.array(v, dtype=np.uint64, order="C")
        return _kernels.reduce_vector(v, self.R, self.pivots)

    def contains(self, v: np.ndarray) -> bool:
        return not self.reduce(v).any()

    def extended(self, rows) -> "RowSpace":
        rows, _ = as_packed(rows, self.ncols)
        return RowSpace(np.concatenate([self.R, rows]), self.ncols)


def in_rowspan(vec, rows, ncols: int | None = None) -> bool:
    space = RowSpace(rows, ncols)
    v, _ = as_packed(vec, space.ncols)
    return space.contains(v[0])
