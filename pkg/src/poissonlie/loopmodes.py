"""Fourier-mode sector of the loop Cartan algebra.

Loop Cartan elements are finitely supported families of h-vectors indexed
by integer modes; the invariant pairing is the residue form

    <X, Y> = sum_n (X_n, Y_{-n})

with (.,.) the Cartan form.  Mode kernels are families of End(h) values
with geometric tails: the dilation-twisted Cayley kernel

    c_n = (1 + p^n theta0)(1 - p^n theta0)^{-1}

tends to +-identity as n -> +-infinity and degenerates, as the dilation
parameter goes to zero, to the step kernel sign(n) of the Drinfeld
realization.

`solve_k_modes` produces the conjugation operator K of the reduction in
the Drinfeld realization: a mode family commuting with the Coxeter
operator and the dilation, satisfying per mode pair

    (1 - D_p) K K* + D_p K - K* = rhs,
    rhs = -(D_p s /(1-s)) P_+ - (1/(1-s)) P_- + (1/2)((1+s)/(1-s)) P_0,

where D_p acts as p^n on mode n and (K*)_n = (K_{-n})* couples modes +-n.
Mode zero is the linear equation K_0 - K_0* = (1/2)(1+s)/(1-s), solved by
the skew operator (1/4)(1+s)/(1-s) plus an optional symmetric part; for
n != 0 the equation is reduced, on each eigenline of s and under the
symmetric coupling K* = K, to the scalar quadratic u^2 - u = rho/(1-p^n)
whose small root is continuous in p at p -> 0.
"""

from dataclasses import dataclass, field

import numpy as np

from . import algebra
from .rootdata import RootSystemData


@dataclass(frozen=True)
class DilationParam:
    p: complex

    def __post_init__(self):
        if not abs(self.p) < 1:
            raise ValueError(f"dilation parameter must satisfy |p| < 1, got {self.p}")


@dataclass(frozen=True)
class LoopHElement:
    """Finitely supported map mode -> h-vector (coroot coordinates)."""

    modes: dict
    rank: int

    def mode(self, n):
        return self.modes.get(n, np.zeros(self.rank, dtype=complex))

    def dilate(self, p):
        return LoopHElement(
            modes={n: (p ** n) * v for n, v in self.modes.items()}, rank=self.rank
        )


@dataclass(frozen=True)
class ModeKernel:
    coefficients: dict           # mode -> End(h) matrix
    tail_plus: np.ndarray
    tail_minus: np.ndarray
    truncation: int

    def coefficient(self, n):
        if n in self.coefficients:
            return self.coefficients[n]
        return self.tail_plus if n > 0 else self.tail_minus

    def apply(self, elem: LoopHElement):
        return LoopHElement(
            modes={n: self.coefficient(n) @ v for n, v in elem.modes.items()},
            rank=elem.rank,
        )


def loop_scalar_product(data: RootSystemData, x: LoopHElement, y: LoopHElement):
    """Residue pairing sum_n (x_n, y_{-n}) with the Cartan form."""
    if x.rank != y.rank:
        raise ValueError("rank mismatch")
    form = data.form_h.astype(complex)
    total = 0.0 + 0.0j
    for n, v in x.modes.items():
        w = y.mode(-n)
        total += v @ form @ w
    return total


def kernel_theta(data, theta0, p: DilationParam, truncation):
    """Mode kernel (1 + p^n theta0)(1 - p^n theta0)^{-1}, |n| <= truncation."""
    l = data.rank
    theta0 = np.asarray(theta0, dtype=complex)
    coeffs = {}
    eye = np.eye(l)
    for n in range(-truncation, truncation + 1):
        scaled = (p.p ** n) * theta0
        denom = eye - scaled
        if abs(np.linalg.det(denom)) < 1e-14:
            raise ValueError(f"singular kernel denominator at mode {n}")
        coeffs[n] = np.linalg.solve(denom, eye + scaled)
    return ModeKernel(
        coefficients=coeffs, tail_plus=eye.astype(complex),
        tail_minus=-eye.astype(complex), truncation=truncation,
    )


def kernel_drinfeld(l, truncation):
    """Step kernel: sign(n) times the identity, zero on the constant mode."""
    eye = np.eye(l, dtype=complex)
    coeffs = {}
    for n in range(-truncation, truncation + 1):
        coeffs[n] = np.sign(n) * eye
    return ModeKernel(coefficients=coeffs, tail_plus=eye, tail_minus=-eye,
                      truncation=truncation)


def kernel_dilation(l, u, truncation):
    """Kernel of the pure dilation twist: (1 + u^n)/(1 - u^n) per mode.

    The twist acts as u^n on mode n, so its constant mode is the identity
    and the Cayley transform is singular there; the constant coefficient is
    fixed to zero, the unique skew completion, which also matches the
    u -> 0 degeneration onto the step kernel.
    """
    if not 0 < abs(u) < 1:
        raise ValueError("need 0 < |u| < 1")
    eye = np.eye(l, dtype=complex)
    coeffs = {0: np.zeros((l, l), dtype=complex)}
    for n in range(1, truncation + 1):
        coeffs[n] = ((1 + u ** n) / (1 - u ** n)) * eye
        coeffs[-n] = ((1 + u ** -n) / (1 - u ** -n)) * eye
    return ModeKernel(coefficients=coeffs, tail_plus=eye, tail_minus=-eye,
                      truncation=truncation)


def kernel_limit_check(u, truncation):
    """max_{0 < |n| <= N} |(1 + u^n)/(1 - u^n) - sign(n)|: the degeneration
    of the dilation kernel towards the step kernel as u -> 0."""
    if not 0 < abs(u) < 1:
        raise ValueError("need 0 < |u| < 1")
    worst = 0.0
    for n in range(-truncation, truncation + 1):
        if n == 0:
            continue
        val = (1 + u ** n) / (1 - u ** n)
        worst = max(worst, abs(val - np.sign(n)))
    return worst


def kernel_tail_report(kernel: ModeKernel, p):
    """Measured constant C with |coeff(n) -+ 1| <= C |p|^{|n|} on the tails."""
    worst = 0.0
    n = kernel.truncation
    for sign, tail in ((1, kernel.tail_plus), (-1, kernel.tail_minus)):
        dev = np.linalg.norm(kernel.coefficient(sign * n) - tail)
        worst = max(worst, dev / abs(p) ** n)
    return worst


def kernel_skewness_residual(data, kernel: ModeKernel):
    """Residual of coeff(-n) = -coeff(n)* w.r.t. the Cartan form."""
    form = data.form_h.astype(complex)
    worst = 0.0
    for n in range(kernel.truncation + 1):
        a = kernel.coefficient(n)
        b = kernel.coefficient(-n)
        worst = max(worst, np.linalg.norm(b + algebra.endh_adjoint(a, form)))
    return worst


# --- the K equation in modes ------------------------------------------------


def _eigen_pairing(eigvals, tol=1e-9):
    """Pair each eigenline with the one carrying the inverse eigenvalue."""
    pairs = []
    for j, w in enumerate(eigvals):
        partner = None
        for k, w2 in enumerate(eigvals):
            if abs(w * w2 - 1.0) < tol:
                partner = k
                break
        if partner is None:
            raise ValueError("eigenvalues do not pair into inverse couples")
        pairs.append(partner)
    return pairs


@dataclass(frozen=True)
class ModeSolveResult:
    kernel: ModeKernel
    residual: float
    failures: tuple = ()


def solve_k_modes(data, s_op, p: DilationParam, truncation, alternative_root=False):
    """Mode family K solving the conjugation-operator equation.

    s_op: Coxeter operator matrix on h.  Returns the kernel together with
    the worst per-mode residual of the equation after back-substitution.
    """
    l = data.rank
    s = np.asarray(s_op, dtype=complex)
    eigvals, vecs = np.linalg.eig(s)
    vinv = np.linalg.inv(vecs)
    pairing = _eigen_pairing(eigvals)

    pval = p.p
    coeffs = {}
    failures = []

    # mode zero: K0 = (1/4)(1+s)(1-s)^{-1} (skew), symmetric part zero
    k0 = 0.25 * np.linalg.solve(np.eye(l) - s, np.eye(l) + s)
    coeffs[0] = k0

    for n in range(1, truncation + 1):
        u_plus = np.zeros(l, dtype=complex)
        u_minus = np.zeros(l, dtype=complex)
        for j, w in enumerate(eigvals):
            rho = -(pval ** n) * w / (1.0 - w)
            q = rho / (1.0 - pval ** n)
            root = np.sqrt(1.0 + 4.0 * q)
            # rationalized small root avoids cancellation for small q
            u = 0.5 * (1.0 + root) if alternative_root else -2.0 * q / (1.0 + root)
            if not np.isfinite(u):
                failures.append((n, j))
                u = 0.0
            u_plus[j] = u
            u_minus[pairing[j]] = u
        coeffs[n] = vecs @ np.diag(u_plus) @ vinv
        coeffs[-n] = vecs @ np.diag(u_minus) @ vinv

    eye = np.eye(l, dtype=complex)
    kernel = ModeKernel(coefficients=coeffs, tail_plus=eye, tail_minus=eye,
                        truncation=truncation)
    residual = k_equation_residual(data, s, p, kernel)
    return ModeSolveResult(kernel=kernel, residual=residual, failures=tuple(failures))


def k_equation_rhs(data, s, pval, n):
    """Right-hand side of the K equation at mode n."""
    l = data.rank
    inv = np.linalg.inv(np.eye(l) - s)
    if n > 0:
        return -(pval ** n) * (s @ inv)
    if n < 0:
        return -inv
    return 0.5 * ((np.eye(l) + s) @ inv)


def k_equation_residual(data, s, p: DilationParam, kernel: ModeKernel):
    """Back-substitution residual of the K equation over retained modes."""
    form = data.form_h.astype(complex)
    pval = p.p
    worst = 0.0
    for n in range(-kernel.truncation, kernel.truncation + 1):
        kn = kernel.coefficient(n)
        kstar_n = algebra.endh_adjoint(kernel.coefficient(-n), form)
        lhs = (1.0 - pval ** n) * (kn @ kstar_n) + (pval ** n) * kn - kstar_n
        worst = max(worst, np.linalg.norm(lhs - k_equation_rhs(data, s, pval, n)))
    return worst


def k_commutation_residual(s_op, kernel: ModeKernel):
    s = np.asarray(s_op, dtype=complex)
    worst = 0.0
    for n in range(-kernel.truncation, kernel.truncation + 1):
        kn = kernel.coefficient(n)
        worst = max(worst, np.linalg.norm(kn @ s - s @ kn))
    return worst


def kernel_to_csv_rows(kernel: ModeKernel):
    """Rows (n, re/im of each entry) for CSV export."""
    rows = []
    l = kernel.coefficient(0).shape[0]
    header = ["n"]
    for i in range(l):
        for j in range(l):
            header += [f"re_{i}{j}", f"im_{i}{j}"]
    for n in range(-kernel.truncation, kernel.truncation + 1):
        c = kernel.coefficient(n)
        row = [n]
        for i in range(l):
            for j in range(l):
                row += [c[i, j].real, c[i, j].imag]
        rows.append(row)
    return header, rows
