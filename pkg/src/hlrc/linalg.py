"""Vectorized linear algebra over GF(q) on integer-index matrices.

Matrices are numpy int32 arrays of element indices; all elementwise work goes
through the dense operation tables of the field, so the hot paths (rank
verification, erasure solving, brute-force codeword enumeration) stay in
numpy.
"""

from __future__ import annotations

import numpy as np

from .gf import FieldSpec


def as_matrix(rows) -> np.ndarray:
    return np.array(rows, dtype=np.int32)


def rref(field: FieldSpec, mat: np.ndarray) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form; returns (matrix, pivot column list)."""
    t = field.tables()
    m = np.array(mat, dtype=np.int32, copy=True)
    if m.ndim != 2:
        raise ValueError("rref expects a 2-d matrix")
    rows, cols = m.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(m[r:, c])[0]
        if nz.size == 0:
            continue
        pr = r + int(nz[0])
        if pr != r:
            m[[r, pr]] = m[[pr, r]]
        m[r] = t.mul[int(t.inv[m[r, c]]), m[r]]
        others = np.nonzero(m[:, c])[0]
        others = others[others != r]
        if others.size:
            scaled = t.mul[m[others, c][:, None], m[r][None, :]]
            m[others] = t.add[m[others], t.neg[scaled]]
        pivots.append(c)
        r += 1
    return m, pivots


def rank(field: FieldSpec, mat: np.ndarray) -> int:
    return len(rref(field, mat)[1])


def row_space_equal(field: FieldSpec, a: np.ndarray, b: np.ndarray) -> bool:
    ra, pa = rref(field, a)
    rb, pb = rref(field, b)
    if pa != pb:
        return False
    return bool(np.array_equal(ra[: len(pa)], rb[: len(pb)]))


def encode(field: FieldSpec, message, generator: np.ndarray) -> np.ndarray:
    """message @ generator over GF(q); message is a length-k index vector."""
    t = field.tables()
    out = np.zeros(generator.shape[1], dtype=np.int32)
    for coeff, row in zip(message, generator):
        if coeff:
            out = t.add[out, t.mul[int(coeff), row]]
    return out


def encode_block(field: FieldSpec, messages: np.ndarray, generator: np.ndarray) -> np.ndarray:
    """Encode a (B, k) block of messages to a (B, n) block of codewords."""
    t = field.tables()
    out = np.zeros((messages.shape[0], generator.shape[1]), dtype=np.int32)
    for i in range(generator.shape[0]):
        out = t.add[out, t.mul[messages[:, i : i + 1], generator[i][None, :]]]
    return out


def solve_linear(field: FieldSpec, a: np.ndarray, b: np.ndarray) -> np.ndarray | None:
    """One solution x of a @ x = b, or None when none exists.

    Free variables, if any, are set to zero; callers that need uniqueness
    should compare rank(a) to the number of columns themselves.
    """
    rows, cols = a.shape
    aug = np.concatenate([a, b.reshape(rows, 1)], axis=1).astype(np.int32)
    red, pivots = rref(field, aug)
    if cols in pivots:
        return None
    x = np.zeros(cols, dtype=np.int32)
    for r, c in enumerate(pivots):
        x[c] = red[r, cols]
    return x
