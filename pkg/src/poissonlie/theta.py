"""Theta-function numerics for the elliptic form of the Cartan kernel.

theta_t(u) = c prod_{n>=1} (1 - t^{2n-1} e^{2pi i u})(1 - t^{2n-1} e^{-2pi i u}),
c = prod (1 - t^{2n}), t = e^{i pi xi}, Im xi > 0.  Zeros lie on the
lattice m + (n + 1/2) xi.  The logarithmic derivative has the Fourier
expansion (2pi/i) sum_{n != 0} t^n/(1 - t^{2n}) e^{2pi i n u} in the
stripe |Im u| <= Im(xi)/2 (the n = 0 term of the series is excluded:
theta is even, so theta'/theta is odd and carries no constant term).

The mode kernel of the dilation-twisted Cayley family resums, per
eigenvalue omega of the Coxeter operator, to the elliptic function

  F_omega(u) = (i/2pi) ( 2 sum_{m=1}^{h-1} omega^m g(u + xi (m/h - 1/2))
                         + g(u - xi/2) + g(u + xi/2) )  +  (1+omega)/(1-omega),

g = theta'/theta, with the dilation parameter p and the nome related by
p^{h/2} = t.  The theta part reproduces every nonzero Fourier mode
(1 + p^n omega)/(1 - p^n omega) exactly but carries no constant mode (the
log-derivative series has none); the constant mode of the kernel, left
ambiguous by the divergent resummation, is fixed by the finite operator
value (1 + omega)/(1 - omega).  With that completion the one-step
quasi-periodicity F(z) = omega F(pz) holds exactly off the singular
support; without it the identity fails by the constant 1 + omega.

The divergent step part sum sign(n) z^n resums to the boundary value
(1+z)/(1-z); `kernel_match_residual` verifies the coefficient identity by
trapezoid quadrature after subtracting that closed form (the integrand is
then analytic and periodic, so the rule is spectrally accurate).
"""

from dataclasses import dataclass

import numpy as np

from .rootdata import RootSystemData, coxeter_operator


@dataclass(frozen=True)
class ThetaParams:
    xi: complex
    product_truncation: int = 64

    def __post_init__(self):
        if self.xi.imag <= 0:
            raise ValueError("need Im xi > 0")

    @property
    def t(self):
        return np.exp(1j * np.pi * self.xi)

    @property
    def truncation_error_bound(self):
        return abs(self.t) ** (2 * self.product_truncation - 1)


def theta_params_from_nome(t, product_truncation=64):
    t = complex(t)
    if not 0 < abs(t) < 1:
        raise ValueError("nome must satisfy 0 < |t| < 1")
    xi = np.log(t) / (1j * np.pi)
    if xi.imag <= 0:
        xi = -xi
    return ThetaParams(xi=complex(xi), product_truncation=product_truncation)


def theta_eval(params: ThetaParams, u):
    """Product-formula evaluation of theta_t(u); u may be an ndarray."""
    t = params.t
    u = np.asarray(u, dtype=complex)
    zp = np.exp(2j * np.pi * u)
    zm = np.exp(-2j * np.pi * u)
    c = 1.0 + 0.0j
    prod = np.ones_like(zp)
    for n in range(1, params.product_truncation + 1):
        todd = t ** (2 * n - 1)
        c *= 1.0 - t ** (2 * n)
        prod = prod * (1.0 - todd * zp) * (1.0 - todd * zm)
    out = c * prod
    return out if out.shape else complex(out)


def theta_sum_oracle(params: ThetaParams, u, terms=64):
    """Independent lattice-sum evaluation: sum (-1)^n t^(n^2) e^{2pi i n u}."""
    t = params.t
    total = 1.0 + 0.0j
    for n in range(1, terms + 1):
        total += (-1) ** n * t ** (n * n) * (
            np.exp(2j * np.pi * n * u) + np.exp(-2j * np.pi * n * u)
        )
    return total


def theta_log_derivative(params: ThetaParams, u, zero_tol=1e-6):
    """theta'/theta by the term-wise differentiated product; ndarray-aware.

    Reports proximity to a zero of theta via ValueError when the reduced
    argument is within zero_tol of the zero lattice.
    """
    xi = params.xi
    u = np.asarray(u, dtype=complex)
    # distance to the zero lattice m + (n + 1/2) xi in the (1, xi) frame
    n_near = np.round(u.imag / xi.imag - 0.5)
    shifted = u - (n_near + 0.5) * xi
    dist = np.abs(shifted - np.round(shifted.real))
    if np.any(dist < zero_tol):
        raise ValueError(f"argument within {zero_tol} of a theta zero")

    t = params.t
    zp = np.exp(2j * np.pi * u)
    zm = np.exp(-2j * np.pi * u)
    total = np.zeros_like(zp)
    for n in range(1, params.product_truncation + 1):
        todd = t ** (2 * n - 1)
        total = total + (-2j * np.pi * todd * zp) / (1.0 - todd * zp)
        total = total + (2j * np.pi * todd * zm) / (1.0 - todd * zm)
    return total if total.shape else complex(total)


def theta_log_derivative_fourier(params: ThetaParams, u, modes=64):
    """Fourier partial sum (2pi/i) sum_{0<|n|<=modes} t^n/(1-t^{2n}) e^{2pi i n u}."""
    t = params.t
    total = 0.0 + 0.0j
    for n in range(1, modes + 1):
        coeff = t ** n / (1.0 - t ** (2 * n))
        total += coeff * (np.exp(2j * np.pi * n * u) - np.exp(-2j * np.pi * n * u))
    return (2.0 * np.pi / 1j) * total


@dataclass(frozen=True)
class EllipticKernelSpec:
    data: RootSystemData
    s_op: np.ndarray
    p: complex
    params: ThetaParams

    @property
    def coxeter_number(self):
        return self.data.coxeter_number


def elliptic_kernel_spec(data, p, product_truncation=64):
    """Spec with the nome fixed by p^{h/2} = t."""
    if not 0 < abs(p) < 1:
        raise ValueError("need 0 < |p| < 1")
    h = data.coxeter_number
    t = complex(p) ** (h / 2.0)
    params = theta_params_from_nome(t, product_truncation)
    if abs(params.t - t) > 1e-12:
        raise ValueError("nome relation p^{h/2} = t violated")
    s = coxeter_operator(data).matrix.astype(complex)
    return EllipticKernelSpec(data=data, s_op=s, p=complex(p), params=params)


def elliptic_scalar(spec: EllipticKernelSpec, omega, u):
    """Scalar elliptic kernel on one Coxeter eigenline (constant mode fixed)."""
    h = spec.coxeter_number
    xi = spec.params.xi
    g = lambda v: theta_log_derivative(spec.params, v)
    total = g(u - xi / 2.0) + g(u + xi / 2.0)
    for m in range(1, h):
        total += 2.0 * omega ** m * g(u + xi * (m / h - 0.5))
    return (1j / (2.0 * np.pi)) * total + (1.0 + omega) / (1.0 - omega)


def elliptic_r0_eval(spec: EllipticKernelSpec, u, integer_tol=1e-9):
    """End(h)-valued elliptic kernel assembled from powers of the Coxeter op.

    u may be complex but must stay off the singular support (u in Z for the
    real slice).
    """
    if abs(u - np.round(np.real(u))) < integer_tol and abs(np.imag(u)) < integer_tol:
        raise ValueError("u too close to the singular support Z")
    h = spec.coxeter_number
    xi = spec.params.xi
    l = spec.data.rank
    g = lambda v: theta_log_derivative(spec.params, v)
    out = (g(u - xi / 2.0) + g(u + xi / 2.0)) * np.eye(l, dtype=complex)
    s_power = np.eye(l, dtype=complex)
    for m in range(1, h):
        s_power = s_power @ spec.s_op
        out = out + 2.0 * g(u + xi * (m / h - 0.5)) * s_power
    constant_mode = np.linalg.solve(np.eye(l) - spec.s_op, np.eye(l) + spec.s_op)
    return (1j / (2.0 * np.pi)) * out + constant_mode


def resummed_step(z):
    """Boundary value of sum_n sign(n) z^n."""
    return (1.0 + z) / (1.0 - z)


def exact_mode_coefficient(p, omega, n):
    return (1.0 + p ** n * omega) / (1.0 - p ** n * omega)


def kernel_match_residual(spec: EllipticKernelSpec, mode_budget, samples=2048):
    """Fourier coefficients of the elliptic kernel vs the closed-form modes.

    For each Coxeter eigenvalue omega, integrates
    (F_omega(u) - (1+z)/(1-z)) e^{-2pi i n u} over the unit period by the
    trapezoid rule and compares with (1+p^n omega)/(1-p^n omega) - sign(n).
    """
    eigvals = np.linalg.eigvals(spec.s_op)
    p = spec.p
    us = (np.arange(samples) + 0.5) / samples
    zs = np.exp(2j * np.pi * us)
    worst = 0.0
    for omega in eigvals:
        values = elliptic_scalar(spec, omega, us) - resummed_step(zs)
        for n in range(-mode_budget, mode_budget + 1):
            coeff = np.mean(values * np.exp(-2j * np.pi * n * us))
            target = exact_mode_coefficient(p, omega, n) - np.sign(n)
            worst = max(worst, abs(coeff - target))
    return worst


def functional_equation_residual(spec: EllipticKernelSpec, u):
    """|F_omega(z) - omega F_omega(pz)| per eigenline, off singularities.

    z = e^{2pi i u}; the dilated argument is u + log(p)/(2pi i), which for
    real p in (0,1) sits inside the analyticity stripe for h >= 2.
    """
    eigvals = np.linalg.eigvals(spec.s_op)
    shift = np.log(complex(spec.p)) / (2j * np.pi)
    worst = 0.0
    for omega in eigvals:
        lhs = elliptic_scalar(spec, omega, u)
        rhs = omega * elliptic_scalar(spec, omega, u + shift)
        worst = max(worst, abs(lhs - rhs))
    return worst


def functional_equation_iterated_residual(spec: EllipticKernelSpec, u):
    """|F(z) - F(p^h z)|: the one-step identity composed h times."""
    eigvals = np.linalg.eigvals(spec.s_op)
    h = spec.coxeter_number
    shift = h * np.log(complex(spec.p)) / (2j * np.pi)
    worst = 0.0
    for omega in eigvals:
        lhs = elliptic_scalar(spec, omega, u)
        rhs = elliptic_scalar(spec, omega, u + shift)
        worst = max(worst, abs(lhs - rhs))
    return worst
