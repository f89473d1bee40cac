"""Gauss decomposition on SL(l+1) and the twisted factorization
L = sigma(L_+) L_-^{-1} with Cartan splitting h_pm = exp(r0_pm X).

Gauss elimination is performed without row exchanges: a vanishing leading
principal minor means the matrix is outside the big cell, which is a
semantic error rather than a numerical fallback.
"""

from dataclasses import dataclass

import numpy as np

from . import algebra
from .rmatrix import PoissonContext, r0_minus, r0_plus


class BigCellError(ValueError):
    """Matrix lies outside the big (Gauss) cell."""


class LogBranchError(ValueError):
    """The principal logarithm of the diagonal factor is not usable."""


@dataclass(frozen=True)
class GaussDecomposition:
    lower: np.ndarray        # lower unipotent factor
    diag: np.ndarray         # diagonal factor
    upper_inv: np.ndarray    # upper unipotent factor (the inverse of the N part)
    minors: np.ndarray       # leading principal minors

    def reassemble(self):
        return self.lower @ self.diag @ self.upper_inv


@dataclass(frozen=True)
class TwistedFactorization:
    x_cartan: np.ndarray     # X in h with h_+ h_-^{-1} = e^X
    h_plus: np.ndarray
    h_minus: np.ndarray
    n_plus: np.ndarray       # lower unipotent component of L_+
    n_minus: np.ndarray      # upper unipotent component of L_-

    @property
    def l_plus(self):
        return self.h_plus @ self.n_plus

    @property
    def l_minus(self):
        return self.h_minus @ self.n_minus


def gauss_decompose(l_matrix, tol=1e-13):
    """L = lower * diag * upper by pure elimination; pivots are the minors."""
    a = np.array(l_matrix, dtype=complex)
    n = a.shape[0]
    scale = max(np.linalg.norm(a), 1.0)
    lower = np.eye(n, dtype=complex)
    minors = np.empty(n, dtype=complex)
    running = 1.0
    for k in range(n):
        pivot = a[k, k]
        running = running * pivot
        minors[k] = running
        if abs(pivot) <= tol * scale:
            raise BigCellError(f"outside the big cell: leading minor {k + 1} vanishes")
        for i in range(k + 1, n):
            factor = a[i, k] / pivot
            lower[i, k] = factor
            a[i, k:] -= factor * a[k, k:]
    diag = np.diag(np.diag(a))
    upper_inv = np.linalg.solve(diag, a)
    return GaussDecomposition(lower=lower, diag=diag, upper_inv=upper_inv, minors=minors)


def twisted_factorize(ctx: PoissonContext, l_matrix, tol=1e-10):
    """Solve L = sigma(h_+ n_+) (h_- n_-)^{-1} on the big cell.

    X is the principal logarithm of the Gauss diagonal (entries must stay
    off the closed negative real axis and the logs must sum to zero, else
    a branch error is raised); h_pm = exp(r0_pm X); the unipotent parts are
    torus conjugates of the Gauss factors:

        n_+ = h_+^{-1} sigma^{-1}(lower) h_+,   n_- = h_-^{-1} upper^{-1} h_-.
    """
    gauss = gauss_decompose(l_matrix)
    d = np.diag(gauss.diag)
    if np.any((np.abs(np.imag(np.log(d.astype(complex)))) > np.pi - 1e-9)):
        raise LogBranchError("diagonal entry on the negative real axis")
    logs = np.log(d.astype(complex))
    total = np.sum(logs)
    if abs(total) > 1e-6:
        raise LogBranchError(
            f"principal logs do not sum to zero (sum = {total:.3e}); wrong branch"
        )
    x = np.diag(logs - total / len(d))

    r = ctx.r
    coords = algebra.h_to_coords(x)
    h_plus = algebra.exp_h(algebra.coords_to_h(r0_plus(r) @ coords))
    h_minus = algebra.exp_h(algebra.coords_to_h(r0_minus(r) @ coords))

    h_plus_inv = np.diag(1.0 / np.diag(h_plus))
    h_minus_inv = np.diag(1.0 / np.diag(h_minus))
    n_plus = h_plus_inv @ ctx.sigma_inv(gauss.lower) @ h_plus
    upper = np.linalg.inv(gauss.upper_inv)
    n_minus = h_minus_inv @ upper @ h_minus

    fact = TwistedFactorization(
        x_cartan=x, h_plus=h_plus, h_minus=h_minus, n_plus=n_plus, n_minus=n_minus
    )
    residual = np.linalg.norm(reassemble(ctx, fact) - l_matrix)
    if residual > tol * max(1.0, np.linalg.norm(l_matrix)):
        raise ValueError(f"twisted factorization failed to reassemble ({residual:.3e})")
    return fact


def reassemble(ctx: PoissonContext, fact: TwistedFactorization):
    return ctx.sigma(fact.l_plus) @ np.linalg.inv(fact.l_minus)
