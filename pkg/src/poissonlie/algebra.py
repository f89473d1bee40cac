"""Ambient matrix algebra sl(l+1): basis, trace form, triangular projections.

All numerical elements are complex (l+1)x(l+1) arrays.  The invariant
bilinear form is <X, Y> = tr(XY); it restricts on the coroot basis
H_i = E_ii - E_{i+1,i+1} to the Cartan-matrix form of type A_l.

Cartan elements are freely converted between their diagonal matrix
realization and coordinates in the coroot basis (`h_to_coords` /
`coords_to_h`); End(h) operators such as the Cartan r-matrix component
act on those coordinates.
"""

import numpy as np

TRACE_TOL = 1e-12


def trace_form(x, y):
    """Invariant bilinear form <X, Y> = tr(XY)."""
    return np.trace(x @ y)


def traceless(x):
    n = x.shape[0]
    return x - (np.trace(x) / n) * np.eye(n)


def check_traceless(x, tol=TRACE_TOL):
    if abs(np.trace(x)) > tol * max(1.0, np.linalg.norm(x)):
        raise ValueError(f"matrix is not traceless: tr = {np.trace(x)}")
    return x


def proj_strict_upper(x):
    return np.triu(x, 1)


def proj_strict_lower(x):
    return np.tril(x, -1)


def proj_diag(x):
    return np.diag(np.diag(x)).astype(complex)


def coroot(l, i):
    """H_i = E_ii - E_{i+1,i+1} as an (l+1)x(l+1) matrix, 0-based index i."""
    h = np.zeros((l + 1, l + 1), dtype=complex)
    h[i, i] = 1.0
    h[i + 1, i + 1] = -1.0
    return h


def h_to_coords(h):
    """Coordinates of a traceless diagonal matrix in the coroot basis.

    If h = sum_i v_i H_i then the j-th diagonal entry is v_j - v_{j-1},
    so v_i is the i-th partial sum of the diagonal.
    """
    d = np.diag(h)
    return np.cumsum(d)[:-1].astype(complex)


def coords_to_h(v):
    v = np.asarray(v, dtype=complex)
    l = v.shape[0]
    padded = np.concatenate(([0.0], v, [0.0]))
    diag = padded[1:] - padded[:-1]
    return np.diag(diag)


def exp_h(h):
    """Exponential of a diagonal Cartan element (entrywise)."""
    return np.diag(np.exp(np.diag(h)))


def sl_basis(l):
    """Basis of sl(l+1): off-diagonal units E_ij then the coroots H_i."""
    n = l + 1
    basis = []
    for i in range(n):
        for j in range(n):
            if i != j:
                e = np.zeros((n, n), dtype=complex)
                e[i, j] = 1.0
                basis.append(e)
    for i in range(l):
        basis.append(coroot(l, i))
    return basis


def gl_basis(l):
    n = l + 1
    basis = []
    for i in range(n):
        for j in range(n):
            e = np.zeros((n, n), dtype=complex)
            e[i, j] = 1.0
            basis.append(e)
    return basis


def bracket(x, y):
    return x @ y - y @ x


def sl_dual_basis(l):
    """Basis of sl dual to sl_basis(l) under the trace form."""
    basis = sl_basis(l)
    dim = len(basis)
    gram = np.array([[trace_form(a, b) for b in basis] for a in basis])
    inv = np.linalg.inv(gram)
    dual = []
    for i in range(dim):
        dual.append(sum(inv[i, j] * basis[j] for j in range(dim)))
    return dual


def functional_to_element(l, functional, basis=None, dual=None):
    """Recover Z in sl with <X, Z> = functional(X) for all X in sl."""
    if basis is None:
        basis = sl_basis(l)
    if dual is None:
        dual = sl_dual_basis(l)
    out = np.zeros((l + 1, l + 1), dtype=complex)
    for b, bd in zip(basis, dual):
        out += functional(b) * bd
    return out


def endh_adjoint(a, form):
    """Adjoint of an End(h) operator w.r.t. the symmetric bilinear form."""
    form = np.asarray(form, dtype=complex)
    return np.linalg.solve(form, a.T @ form)


def endh_is_unitary(a, form, tol=1e-12):
    return np.linalg.norm(endh_adjoint(a, form) @ a - np.eye(a.shape[0])) <= tol


def matrix_adjoint(x):
    """Adjugate matrix; equals the inverse for determinant-one matrices."""
    n = x.shape[0]
    adj = np.zeros_like(x, dtype=complex)
    for i in range(n):
        for j in range(n):
            minor = np.delete(np.delete(x, j, axis=0), i, axis=1)
            adj[i, j] = (-1) ** (i + j) * np.linalg.det(minor) if n > 1 else 1.0
    return adj


def unipotent_log(u):
    """Logarithm of a unipotent matrix via the terminating nilpotent series."""
    n = u.shape[0]
    m = u - np.eye(n)
    out = np.zeros_like(m)
    power = np.eye(n, dtype=complex)
    for k in range(1, n):
        power = power @ m
        out += ((-1) ** (k + 1) / k) * power
    return out
