import numpy as np
import pytest

from poissonlie.loopmodes import (
    DilationParam,
    LoopHElement,
    kernel_drinfeld,
    kernel_limit_check,
    kernel_skewness_residual,
    kernel_tail_report,
    kernel_theta,
    k_commutation_residual,
    k_equation_residual,
    loop_scalar_product,
    solve_k_modes,
)
from poissonlie.rootdata import build_type_a, coxeter_operator


def test_dilation_param_validation():
    with pytest.raises(ValueError):
        DilationParam(1.5)
    DilationParam(0.3)


def test_loop_pairing_example():
    data = build_type_a(1)
    x = LoopHElement(modes={1: np.array([1.0 + 0j])}, rank=1)
    y = LoopHElement(modes={-1: np.array([1.0 + 0j])}, rank=1)
    assert loop_scalar_product(data, x, y) == pytest.approx(2.0)
    assert loop_scalar_product(data, x, x) == pytest.approx(0.0)


def test_loop_pairing_dilation_invariance():
    data = build_type_a(2)
    rng = np.random.default_rng(0)
    x = LoopHElement(modes={n: rng.standard_normal(2) + 0j for n in (-2, 1, 3)}, rank=2)
    y = LoopHElement(modes={n: rng.standard_normal(2) + 0j for n in (-3, -1, 2)}, rank=2)
    p = 0.37 + 0.1j
    lhs = loop_scalar_product(data, x.dilate(p), y.dilate(p))
    assert lhs == pytest.approx(loop_scalar_product(data, x, y))


def test_kernel_theta_sl2_values():
    data = build_type_a(1)
    s = coxeter_operator(data).matrix.astype(complex)
    kernel = kernel_theta(data, s, DilationParam(0.5), truncation=8)
    assert kernel.coefficient(0)[0, 0] == pytest.approx(0.0)
    assert kernel.coefficient(1)[0, 0] == pytest.approx((1 - 0.5) / (1 + 0.5))
    # skewness forces coefficient(-1) = -coefficient(1)
    assert kernel.coefficient(-1)[0, 0] == pytest.approx(-1.0 / 3.0)


def test_kernel_theta_skewness_and_tails():
    for l in (1, 2, 3):
        data = build_type_a(l)
        s = coxeter_operator(data).matrix.astype(complex)
        kernel = kernel_theta(data, s, DilationParam(0.2), truncation=24)
        assert kernel_skewness_residual(data, kernel) <= 1e-12
        assert kernel_tail_report(kernel, 0.2) < 10.0


def test_kernel_drinfeld_signs():
    k = kernel_drinfeld(2, truncation=6)
    assert np.allclose(k.coefficient(3), np.eye(2))
    assert np.allclose(k.coefficient(0), 0.0)
    assert np.allclose(k.coefficient(-2), -np.eye(2))


def test_kernel_limit_values():
    assert kernel_limit_check(1e-4, 2) <= 3e-4
    val_n2 = abs((1 + 1e-8) / (1 - 1e-8) - 1)
    assert val_n2 <= 3e-8
    # monotone decrease in u at fixed truncation
    assert kernel_limit_check(1e-5, 4) < kernel_limit_check(1e-3, 4)


def test_solve_k_modes_sl2_mode0():
    data = build_type_a(1)
    s = coxeter_operator(data).matrix.astype(complex)
    result = solve_k_modes(data, s, DilationParam(0.1), truncation=8)
    assert np.allclose(result.kernel.coefficient(0), 0.0)
    assert result.residual <= 1e-10
    assert not result.failures


def test_solve_k_modes_sl3():
    data = build_type_a(2)
    s = coxeter_operator(data).matrix.astype(complex)
    result = solve_k_modes(data, s, DilationParam(0.1), truncation=32)
    k0 = result.kernel.coefficient(0)
    expected = 0.25 * np.linalg.solve(np.eye(2) - s, np.eye(2) + s)
    assert np.allclose(k0, expected)
    assert result.residual <= 1e-10
    assert k_commutation_residual(s, result.kernel) <= 1e-12


def test_solve_k_modes_small_root_branch():
    # the selected root vanishes with p, the alternative one does not
    data = build_type_a(2)
    s = coxeter_operator(data).matrix.astype(complex)
    small = solve_k_modes(data, s, DilationParam(1e-6), truncation=3)
    other = solve_k_modes(data, s, DilationParam(1e-6), truncation=3, alternative_root=True)
    assert np.linalg.norm(small.kernel.coefficient(2)) < 1e-5
    assert np.linalg.norm(other.kernel.coefficient(2)) > 0.5
    # at moderate p the alternative branch also back-substitutes cleanly
    other_mid = solve_k_modes(data, s, DilationParam(0.3), truncation=6, alternative_root=True)
    assert other_mid.residual <= 1e-9


def test_solve_k_modes_sl4():
    data = build_type_a(3)
    s = coxeter_operator(data).matrix.astype(complex)
    result = solve_k_modes(data, s, DilationParam(0.1), truncation=16)
    assert result.residual <= 1e-10
    assert k_commutation_residual(s, result.kernel) <= 1e-12


def test_kernel_dilation_family():
    from poissonlie.loopmodes import kernel_dilation

    k = kernel_dilation(2, 0.3, truncation=6)
    assert np.allclose(k.coefficient(0), 0.0)
    assert np.allclose(k.coefficient(1), (1.3 / 0.7) * np.eye(2))
    assert np.allclose(k.coefficient(-1), ((1 + 1 / 0.3) / (1 - 1 / 0.3)) * np.eye(2))
    data = build_type_a(2)
    from poissonlie.loopmodes import kernel_skewness_residual

    assert kernel_skewness_residual(data, k) <= 1e-12
    with pytest.raises(ValueError):
        kernel_dilation(2, 1.2, truncation=4)
