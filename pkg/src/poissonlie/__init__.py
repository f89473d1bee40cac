"""Poisson-Lie structures on SL(l+1): factorizable r-matrices, twisted
Heisenberg doubles, twisted factorizations, moment maps, first-class
constraint systems, and the theta-function form of the Cartan kernel.

Quick tour
----------
>>> from poissonlie import build_type_a, coxeter_rmatrix, make_context
>>> from poissonlie.rmatrix import mcybe_residual
>>> ctx = make_context(coxeter_rmatrix(build_type_a(2)))
>>> mcybe_residual(ctx.r) < 1e-11
True

The command-line entry point `poissonlie verify` runs the full
verification battery and emits a machine-readable report.
"""

from .factorize import gauss_decompose, twisted_factorize
from .loopmodes import DilationParam, kernel_drinfeld, kernel_theta, solve_k_modes
from .reduction import solve_a, solve_k_finite
from .report import SuiteConfig, run_suite
from .rmatrix import coxeter_rmatrix, drinfeld_rmatrix, make_context, rmatrix_from_theta
from .rootdata import build_f_element, build_type_a, coxeter_operator
from .theta import elliptic_kernel_spec, elliptic_r0_eval, theta_eval

__all__ = [
    "DilationParam",
    "SuiteConfig",
    "build_f_element",
    "build_type_a",
    "coxeter_operator",
    "coxeter_rmatrix",
    "drinfeld_rmatrix",
    "elliptic_kernel_spec",
    "elliptic_r0_eval",
    "gauss_decompose",
    "kernel_drinfeld",
    "kernel_theta",
    "make_context",
    "rmatrix_from_theta",
    "run_suite",
    "solve_a",
    "solve_k_finite",
    "solve_k_modes",
    "theta_eval",
    "twisted_factorize",
]

__version__ = "0.1.0"
