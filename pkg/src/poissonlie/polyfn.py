"""Polynomial functions of matrix entries with exact differentiation.

A PolyFn is a sparse complex polynomial over integer variable ids; each
monomial is a sorted tuple of ids (with repetition).  Matrix entries are
mapped to ids by MatrixVars, which also supports several matrix slots so
the same machinery covers functions on G and on G x G.

Evaluation, partial derivatives and substitution are exact: the only
rounding is ordinary binary64 arithmetic, never finite differencing.
"""

from dataclasses import dataclass

import numpy as np


class PolyFn:
    __slots__ = ("terms",)

    def __init__(self, terms=None):
        self.terms = {} if terms is None else terms

    @staticmethod
    def constant(c):
        c = complex(c)
        return PolyFn({(): c} if c != 0 else {})

    @staticmethod
    def variable(var_id):
        return PolyFn({(var_id,): 1.0 + 0.0j})

    def copy(self):
        return PolyFn(dict(self.terms))

    def __add__(self, other):
        if not isinstance(other, PolyFn):
            other = PolyFn.constant(other)
        out = dict(self.terms)
        for mono, c in other.terms.items():
            acc = out.get(mono, 0.0) + c
            if acc == 0:
                out.pop(mono, None)
            else:
                out[mono] = acc
        return PolyFn(out)

    __radd__ = __add__

    def __neg__(self):
        return PolyFn({m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        if not isinstance(other, PolyFn):
            other = PolyFn.constant(other)
        return self + (-other)

    def __rsub__(self, other):
        return PolyFn.constant(other) + (-self)

    def __mul__(self, other):
        if not isinstance(other, PolyFn):
            c = complex(other)
            if c == 0:
                return PolyFn()
            return PolyFn({m: c * v for m, v in self.terms.items()})
        out = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                mono = tuple(sorted(m1 + m2))
                acc = out.get(mono, 0.0) + c1 * c2
                if acc == 0:
                    out.pop(mono, None)
                else:
                    out[mono] = acc
        return PolyFn(out)

    __rmul__ = __mul__

    def is_zero(self):
        return not self.terms

    def degree(self):
        return max((len(m) for m in self.terms), default=0)

    def evaluate(self, values):
        """values: 1-d complex array indexed by variable id."""
        total = 0.0 + 0.0j
        for mono, c in self.terms.items():
            prod = c
            for vid in mono:
                prod *= values[vid]
            total += prod
        return total

    def partial(self, var_id):
        out = {}
        for mono, c in self.terms.items():
            k = mono.count(var_id)
            if k == 0:
                continue
            idx = mono.index(var_id)
            reduced = mono[:idx] + mono[idx + 1:]
            acc = out.get(reduced, 0.0) + k * c
            if acc == 0:
                out.pop(reduced, None)
            else:
                out[reduced] = acc
        return PolyFn(out)

    def substitute(self, table):
        """Replace every variable id by the PolyFn table[id]."""
        result = PolyFn()
        for mono, c in self.terms.items():
            term = PolyFn.constant(c)
            for vid in mono:
                term = term * table[vid]
            result = result + term
        return result

    def __repr__(self):
        return f"PolyFn({len(self.terms)} terms, degree {self.degree()})"


@dataclass(frozen=True)
class MatrixVars:
    """Variable ids for the entries of one or more n x n matrix slots."""

    n: int
    slots: int = 1

    @property
    def total(self):
        return self.slots * self.n * self.n

    def var(self, i, j, slot=0):
        return slot * self.n * self.n + i * self.n + j

    def entry(self, i, j, slot=0):
        return PolyFn.variable(self.var(i, j, slot))

    def entry_matrix(self, slot=0):
        out = np.empty((self.n, self.n), dtype=object)
        for i in range(self.n):
            for j in range(self.n):
                out[i, j] = self.entry(i, j, slot)
        return out

    def pack(self, *matrices):
        """Flatten matrix slots into the evaluation vector."""
        assert len(matrices) == self.slots
        values = np.empty(self.total, dtype=complex)
        for s, m in enumerate(matrices):
            values[s * self.n * self.n:(s + 1) * self.n * self.n] = np.asarray(m, dtype=complex).ravel()
        return values


def poly_matrix_from_numeric(m):
    out = np.empty(m.shape, dtype=object)
    for i in range(m.shape[0]):
        for j in range(m.shape[1]):
            out[i, j] = PolyFn.constant(m[i, j])
    return out


def poly_matmul(a, b):
    n, k = a.shape
    k2, m = b.shape
    assert k == k2
    out = np.empty((n, m), dtype=object)
    for i in range(n):
        for j in range(m):
            acc = PolyFn()
            for t in range(k):
                acc = acc + a[i, t] * b[t, j]
            out[i, j] = acc
    return out


def poly_trace(a):
    acc = PolyFn()
    for i in range(a.shape[0]):
        acc = acc + a[i, i]
    return acc


def poly_pairing(a, b):
    """Trace-form pairing sum_ij a[i,j] b[j,i] of two PolyFn matrices."""
    acc = PolyFn()
    n = a.shape[0]
    for i in range(n):
        for j in range(n):
            acc = acc + a[i, j] * b[j, i]
    return acc


def poly_scale(a, c):
    out = np.empty(a.shape, dtype=object)
    for idx in np.ndindex(a.shape):
        out[idx] = a[idx] * c
    return out


def poly_add(a, b):
    out = np.empty(a.shape, dtype=object)
    for idx in np.ndindex(a.shape):
        out[idx] = a[idx] + b[idx]
    return out


def poly_evaluate_matrix(a, values):
    out = np.empty(a.shape, dtype=complex)
    for idx in np.ndindex(a.shape):
        out[idx] = a[idx].evaluate(values)
    return out


def poly_minor_det(entries, rows, cols):
    """Leibniz determinant of the submatrix entries[rows][:, cols]."""
    from itertools import permutations

    k = len(rows)
    acc = PolyFn()
    for perm in permutations(range(k)):
        sign = 1
        seen = list(perm)
        # parity by counting inversions
        inv = sum(1 for i in range(k) for j in range(i + 1, k) if seen[i] > seen[j])
        sign = -1 if inv % 2 else 1
        term = PolyFn.constant(sign)
        for r in range(k):
            term = term * entries[rows[r], cols[perm[r]]]
        acc = acc + term
    return acc


def poly_det(entries):
    n = entries.shape[0]
    return poly_minor_det(entries, list(range(n)), list(range(n)))


def poly_adjugate(entries):
    """Adjugate matrix of a PolyFn matrix: M @ adj(M) = det(M) * I."""
    n = entries.shape[0]
    out = np.empty((n, n), dtype=object)
    for i in range(n):
        for j in range(n):
            rows = [r for r in range(n) if r != j]
            cols = [c for c in range(n) if c != i]
            minor = poly_minor_det(entries, rows, cols) if n > 1 else PolyFn.constant(1.0)
            out[i, j] = minor * ((-1) ** (i + j))
    return out


def char_poly_coefficients(entries):
    """Coefficients c_1..c_n with det(t - M) = t^n + c_1 t^{n-1} + ... + c_n.

    Faddeev-LeVerrier over PolyFn entries; exact in the matrix entries.
    """
    n = entries.shape[0]
    ident = poly_matrix_from_numeric(np.eye(n, dtype=complex))
    m = ident
    coeffs = []
    c = PolyFn.constant(1.0)
    for k in range(1, n + 1):
        m = poly_matmul(entries, m)
        c = poly_trace(m) * (-1.0 / k)
        coeffs.append(c)
        m = poly_add(m, poly_scale(ident, c))
    return coeffs
