import numpy as np
import pytest

from poissonlie import algebra
from poissonlie.rootdata import build_type_a
from poissonlie.theta import (
    EllipticKernelSpec,
    ThetaParams,
    elliptic_kernel_spec,
    elliptic_r0_eval,
    elliptic_scalar,
    exact_mode_coefficient,
    functional_equation_iterated_residual,
    functional_equation_residual,
    kernel_match_residual,
    theta_eval,
    theta_log_derivative,
    theta_log_derivative_fourier,
    theta_params_from_nome,
    theta_sum_oracle,
)


def params(t=0.1):
    return theta_params_from_nome(t)


def test_nome_validation():
    with pytest.raises(ValueError):
        theta_params_from_nome(1.2)
    with pytest.raises(ValueError):
        ThetaParams(xi=0.3 - 0.1j)


def test_product_matches_lattice_sum():
    pr = params(0.15)
    for u in (0.13, 0.4 + 0.05j, -0.27 + 0.1j):
        assert abs(theta_eval(pr, u) - theta_sum_oracle(pr, u)) < 1e-12


def test_theta_periodicity():
    pr = params()
    for u in (0.2, 0.71 + 0.03j):
        assert abs(theta_eval(pr, u + 1.0) - theta_eval(pr, u)) < 1e-12


def test_theta_zero_at_half_xi():
    pr = params()
    assert abs(theta_eval(pr, pr.xi / 2.0)) < pr.truncation_error_bound + 1e-14


def test_theta_quasi_periodicity():
    pr = params()
    t = pr.t
    for u in (0.21, 0.33 + 0.01j):
        lhs = theta_eval(pr, u + pr.xi)
        rhs = -(t ** -1) * np.exp(-2j * np.pi * u) * theta_eval(pr, u)
        assert abs(lhs - rhs) < 1e-10


def test_log_derivative_vs_fourier():
    pr = params(0.1)
    val = theta_log_derivative(pr, 0.3)
    four = theta_log_derivative_fourier(pr, 0.3)
    assert abs(val - four) <= 1e-10


def test_log_derivative_periodic_and_odd():
    pr = params(0.1)
    for u in (0.17, 0.42):
        assert abs(theta_log_derivative(pr, u + 1.0) - theta_log_derivative(pr, u)) < 1e-12
        assert abs(theta_log_derivative(pr, -u) + theta_log_derivative(pr, u)) < 1e-12


def test_log_derivative_zero_proximity_reported():
    pr = params()
    with pytest.raises(ValueError):
        theta_log_derivative(pr, pr.xi / 2.0 + 1e-9)


def test_elliptic_spec_nome_relation():
    for l in (1, 2, 3):
        data = build_type_a(l)
        spec = elliptic_kernel_spec(data, 0.1)
        assert abs(spec.params.t - 0.1 ** (data.coxeter_number / 2.0)) < 1e-12


def test_elliptic_r0_sl2_purely_imaginary_on_reals():
    data = build_type_a(1)
    spec = elliptic_kernel_spec(data, 0.2)
    val = elliptic_r0_eval(spec, 0.3)[0, 0]
    assert abs(val.real) < 1e-10
    assert abs(val.imag) > 1e-4


def test_elliptic_r0_loop_skewness():
    # loop-sector skewness: value(u)* = -value(-u) w.r.t. the Cartan form
    for l in (1, 2):
        data = build_type_a(l)
        spec = elliptic_kernel_spec(data, 0.15)
        form = data.form_h.astype(complex)
        for u in (0.22, 0.37):
            a = elliptic_r0_eval(spec, u)
            b = elliptic_r0_eval(spec, -u)
            assert np.linalg.norm(algebra.endh_adjoint(a, form) + b) <= 1e-10


def test_elliptic_r0_symmetry_and_periodicity():
    data = build_type_a(2)
    spec = elliptic_kernel_spec(data, 0.1)
    form = data.form_h.astype(complex)
    for u in (0.19, 0.44):
        a = elliptic_r0_eval(spec, u)
        assert np.linalg.norm(elliptic_r0_eval(spec, u + 1.0) - a) <= 1e-12
        mirrored = elliptic_r0_eval(spec, 1.0 - u)
        assert np.linalg.norm(mirrored + algebra.endh_adjoint(a, form)) <= 1e-10


def test_elliptic_r0_rejects_singular_support():
    data = build_type_a(2)
    spec = elliptic_kernel_spec(data, 0.1)
    with pytest.raises(ValueError):
        elliptic_r0_eval(spec, 1.0)


def test_mode_zero_coefficient():
    data = build_type_a(2)
    spec = elliptic_kernel_spec(data, 0.1)
    omega = np.exp(2j * np.pi / 3)
    us = (np.arange(512) + 0.5) / 512
    zs = np.exp(2j * np.pi * us)
    vals = np.array([elliptic_scalar(spec, omega, u) for u in us]) - (1 + zs) / (1 - zs)
    c0 = np.mean(vals)
    assert abs(c0 - (1 + omega) / (1 - omega)) < 1e-10
    # sl2 eigenvalue omega = -1 gives zero constant coefficient
    assert exact_mode_coefficient(0.1, -1.0, 0) == 0.0


def test_kernel_match_small():
    data = build_type_a(2)
    spec = elliptic_kernel_spec(data, 0.1)
    assert kernel_match_residual(spec, mode_budget=10, samples=512) <= 1e-8


def test_functional_equation():
    data = build_type_a(2)
    spec = elliptic_kernel_spec(data, 0.1)
    assert functional_equation_residual(spec, 0.3) <= 1e-8
    assert functional_equation_iterated_residual(spec, 0.3) <= 1e-8


def test_finite_on_unit_circle_away_from_one():
    data = build_type_a(1)
    spec = elliptic_kernel_spec(data, 0.2)
    for u in (0.1, 0.25, 0.49):
        val = elliptic_scalar(spec, -1.0, u)
        assert np.isfinite(val)


def test_truncation_error_scaling():
    t = 0.3
    lo = theta_params_from_nome(t, product_truncation=8)
    hi = theta_params_from_nome(t, product_truncation=16)
    u = 0.23
    rel = abs(theta_eval(lo, u) - theta_eval(hi, u)) / abs(theta_eval(hi, u))
    assert rel <= abs(t) ** (2 * 8)
