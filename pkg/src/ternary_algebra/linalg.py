"""Exact dense linear algebra over Q(q) on numpy object arrays."""

from __future__ import annotations

import numpy as np

from .errors import NotInvertibleError
from .scalars import ONE, ZERO, Cyclotomic3, as_cyc


def cyc_array(rows) -> np.ndarray:
    """Object array of Cyclotomic3 from nested lists of numbers/strings."""
    arr = np.array(rows, dtype=object)
    out = np.empty(arr.shape, dtype=object)
    for idx, v in np.ndenumerate(arr):
        out[idx] = as_cyc(v)
    return out


def zeros(rows: int, cols: int) -> np.ndarray:
    out = np.empty((rows, cols), dtype=object)
    out.fill(ZERO)
    return out


def identity(k: int) -> np.ndarray:
    out = zeros(k, k)
    for i in range(k):
        out[i, i] = ONE
    return out


def is_zero(m: np.ndarray) -> bool:
    return not any(bool(v) for v in m.flat)


def matmul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    if a.shape[1] == 0:
        return zeros(a.shape[0], b.shape[1])
    return a.dot(b)


def inverse(m: np.ndarray) -> np.ndarray:
    """Gauss-Jordan inverse; raises NotInvertibleError on a singular matrix."""
    k = m.shape[0]
    if m.shape != (k, k):
        raise ValueError("inverse of a non-square matrix")
    work = [[as_cyc(m[i, j]) for j in range(k)] + [ONE if i == j else ZERO for j in range(k)] for i in range(k)]
    for col in range(k):
        pivot = next((r for r in range(col, k) if work[r][col]), None)
        if pivot is None:
            raise NotInvertibleError("singular constant part")
        work[col], work[pivot] = work[pivot], work[col]
        inv_p = work[col][col].inverse()
        work[col] = [v * inv_p for v in work[col]]
        for r in range(k):
            if r != col and work[r][col]:
                factor = work[r][col]
                work[r] = [x - factor * y for x, y in zip(work[r], work[col])]
    out = np.empty((k, k), dtype=object)
    for i in range(k):
        for j in range(k):
            out[i, j] = work[i][k + j]
    return out


def solve_combination(target: list[Cyclotomic3], basis: list[list[Cyclotomic3]]) -> list[Cyclotomic3] | None:
    """Coefficients c with sum c_i basis[i] == target, or None if no solution.

    The basis vectors are assumed linearly independent.
    """
    n = len(basis)
    dim = len(target)
    # columns are basis vectors; augmented with target
    rows = [[basis[j][i] for j in range(n)] + [target[i]] for i in range(dim)]
    pivots = []
    r = 0
    for col in range(n):
        piv = next((i for i in range(r, dim) if rows[i][col]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv_p = rows[r][col].inverse()
        rows[r] = [v * inv_p for v in rows[r]]
        for i in range(dim):
            if i != r and rows[i][col]:
                factor = rows[i][col]
                rows[i] = [x - factor * y for x, y in zip(rows[i], rows[r])]
        pivots.append(col)
        r += 1
    if any(rows[i][n] for i in range(r, dim)):
        return None
    coeffs = [ZERO] * n
    for i, col in enumerate(pivots):
        coeffs[col] = rows[i][n]
    return coeffs
