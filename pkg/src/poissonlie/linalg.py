"""Exact rational linear algebra for small integer matrices.

Weyl-group representatives and Bruhat tests are carried out over the
rationals so that structural statements (cell membership, torus parts,
s^h = id) are decided exactly rather than up to a tolerance.
"""

from fractions import Fraction

import numpy as np


def as_fraction_matrix(m):
    """Copy an integer/rational matrix into an object array of Fractions."""
    a = np.asarray(m)
    out = np.empty(a.shape, dtype=object)
    for idx in np.ndindex(a.shape):
        out[idx] = Fraction(a[idx])
    return out


def exact_det(m):
    """Determinant by fraction Gaussian elimination, exact for rational input."""
    a = as_fraction_matrix(m)
    n = a.shape[0]
    det = Fraction(1)
    for k in range(n):
        pivot_row = next((r for r in range(k, n) if a[r, k] != 0), None)
        if pivot_row is None:
            return Fraction(0)
        if pivot_row != k:
            a[[k, pivot_row]] = a[[pivot_row, k]]
            det = -det
        det *= a[k, k]
        for r in range(k + 1, n):
            factor = a[r, k] / a[k, k]
            if factor != 0:
                a[r, k:] = a[r, k:] - factor * a[k, k:]
    return det


def exact_inv(m):
    """Exact inverse of a rational matrix (Gauss-Jordan over Fractions)."""
    a = as_fraction_matrix(m)
    n = a.shape[0]
    inv = as_fraction_matrix(np.eye(n, dtype=int))
    for k in range(n):
        pivot_row = next((r for r in range(k, n) if a[r, k] != 0), None)
        if pivot_row is None:
            raise ZeroDivisionError("matrix is singular")
        if pivot_row != k:
            a[[k, pivot_row]] = a[[pivot_row, k]]
            inv[[k, pivot_row]] = inv[[pivot_row, k]]
        piv = a[k, k]
        a[k, :] = a[k, :] / piv
        inv[k, :] = inv[k, :] / piv
        for r in range(n):
            if r != k and a[r, k] != 0:
                factor = a[r, k]
                a[r, :] = a[r, :] - factor * a[k, :]
                inv[r, :] = inv[r, :] - factor * inv[k, :]
    return inv


def exact_rank(m):
    a = as_fraction_matrix(m)
    rows, cols = a.shape
    rank = 0
    row = 0
    for col in range(cols):
        pivot_row = next((r for r in range(row, rows) if a[r, col] != 0), None)
        if pivot_row is None:
            continue
        if pivot_row != row:
            a[[row, pivot_row]] = a[[pivot_row, row]]
        for r in range(row + 1, rows):
            factor = a[r, col] / a[row, col]
            if factor != 0:
                a[r, col:] = a[r, col:] - factor * a[row, col:]
        rank += 1
        row += 1
        if row == rows:
            break
    return rank


def is_exact_identity(m):
    a = as_fraction_matrix(m)
    n = a.shape[0]
    for i in range(n):
        for j in range(n):
            if a[i, j] != (1 if i == j else 0):
                return False
    return True
