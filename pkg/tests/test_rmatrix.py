import numpy as np
import pytest

from poissonlie import algebra
from poissonlie.rootdata import build_type_a, coxeter_operator
from poissonlie.rmatrix import (
    DoubleElement,
    apply_double_r,
    apply_r,
    bd_structure_checks,
    canonical_borel_pairing,
    coxeter_rmatrix,
    double_basis,
    double_mcybe_residual,
    double_pairing,
    dual_bracket,
    dual_image_membership_residual,
    embed_diagonal,
    embed_dual,
    make_context,
    mcybe_residual,
    mcybe_residual_operator,
    rmatrix_from_theta,
    r_minus,
    r_plus,
    skewness_residual,
)


def sl2():
    data = build_type_a(1)
    return data, coxeter_rmatrix(data)


def sl3():
    data = build_type_a(2)
    return data, coxeter_rmatrix(data)


E = np.array([[0, 1], [0, 0]], dtype=complex)
F = np.array([[0, 0], [1, 0]], dtype=complex)
H = np.array([[1, 0], [0, -1]], dtype=complex)


def test_r0_vanishes_for_sl2():
    _, r = sl2()
    assert np.allclose(r.cartan_part, 0.0)
    assert np.allclose(apply_r(r, H), 0.0)


def test_r_on_nilpotent_parts():
    _, r = sl2()
    assert np.allclose(apply_r(r, E), -E)
    assert np.allclose(apply_r(r, F), F)


def test_r0_eigenvalues_sl3():
    _, r = sl3()
    eig = np.linalg.eigvals(r.cartan_part)
    expected = {1j / np.sqrt(3), -1j / np.sqrt(3)}
    for ev in eig:
        assert min(abs(ev - e) for e in expected) < 1e-12


def test_theta_validation():
    data = build_type_a(2)
    with pytest.raises(ValueError):
        rmatrix_from_theta(data, np.eye(2))          # det(theta - 1) = 0
    with pytest.raises(ValueError):
        rmatrix_from_theta(data, 2.0 * coxeter_operator(data).matrix)  # not unitary


def test_mcybe_residual_coxeter():
    for l in (1, 2, 3):
        data = build_type_a(l)
        r = coxeter_rmatrix(data)
        assert mcybe_residual(r) <= 1e-11


def test_mcybe_zero_operator_fails():
    basis = algebra.sl_basis(1)
    residual = mcybe_residual_operator(lambda x: np.zeros_like(x), basis)
    assert residual > 1.0


def test_skewness():
    for l in (1, 2, 3):
        r = coxeter_rmatrix(build_type_a(l))
        assert skewness_residual(r) <= 1e-12


def test_dual_bracket_examples():
    _, r = sl2()
    assert np.allclose(dual_bracket(r, E, F), 0.0)
    assert np.allclose(dual_bracket(r, H, E), -E)
    assert np.allclose(dual_bracket(r, H, H), 0.0)


def test_dual_bracket_jacobi():
    for l in (1, 2):
        r = coxeter_rmatrix(build_type_a(l))
        basis = algebra.sl_basis(l)
        worst = 0.0
        for x in basis:
            for y in basis:
                for z in basis:
                    acc = dual_bracket(r, x, dual_bracket(r, y, z))
                    acc = acc + dual_bracket(r, y, dual_bracket(r, z, x))
                    acc = acc + dual_bracket(r, z, dual_bracket(r, x, y))
                    worst = max(worst, np.linalg.norm(acc))
        assert worst <= 1e-11


def test_bd_structure_checks_pass():
    for l in (1, 2):
        report = bd_structure_checks(coxeter_rmatrix(build_type_a(l)))
        assert report["pass"], {k: v for k, v in report.items() if k != "theta_r"}


def test_theta_r_recovers_coxeter():
    data = build_type_a(2)
    report = bd_structure_checks(coxeter_rmatrix(data))
    s = coxeter_operator(data).matrix.astype(complex)
    assert np.linalg.norm(report["theta_r"] - s) <= 1e-12


def test_bd_checks_flag_non_skew_cartan_part():
    data, r = sl3()
    from poissonlie.rmatrix import RMatrix

    bad = RMatrix(data=data, cartan_part=r.cartan_part + 0.5 * np.eye(2))
    report = bd_structure_checks(bad)
    assert report["skew"] > 1e-3
    assert not report["pass"]


def test_double_diagonal_isotropic():
    rng = np.random.default_rng(3)
    for _ in range(5):
        x = algebra.traceless(rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3)))
        y = algebra.traceless(rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3)))
        assert abs(double_pairing(embed_diagonal(x), embed_diagonal(y))) < 1e-12


def test_dual_image_isotropic():
    _, r = sl3()
    basis = algebra.sl_basis(2)
    for x in basis:
        for y in basis:
            val = double_pairing(embed_dual(r, x), embed_dual(r, y))
            assert abs(val) < 1e-12


def test_embed_dual_sl2_example():
    _, r = sl2()
    img = embed_dual(r, E)
    assert np.allclose(img.x, 0.0)
    assert np.allclose(img.xp, -E)


def test_double_mcybe():
    for l in (1, 2):
        r = coxeter_rmatrix(build_type_a(l))
        assert double_mcybe_residual(r) <= 1e-11


def test_dual_membership_criterion():
    for l in (1, 2):
        r = coxeter_rmatrix(build_type_a(l))
        for x in algebra.sl_basis(l):
            assert dual_image_membership_residual(r, x) <= 1e-12


def test_pmdual_pairings():
    _, r = sl3()
    rng = np.random.default_rng(11)
    basis = algebra.sl_basis(2)
    for _ in range(5):
        y = sum(c * b for c, b in zip(rng.standard_normal(len(basis)), basis))
        yp, ym = r_plus(r, y), r_minus(r, y)
        # X_- in the upper Borel b_- = b, X_+ in the lower one
        xm = np.triu(rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3)))
        xm = algebra.traceless(xm)
        xp = np.tril(rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3)))
        xp = algebra.traceless(xp)
        lhs = double_pairing(embed_diagonal(xm), DoubleElement(yp, ym))
        assert abs(lhs - algebra.trace_form(xm, y)) < 1e-10
        assert abs(lhs - canonical_borel_pairing(r, xm, yp, +1)) < 1e-8
        lhs2 = double_pairing(embed_diagonal(xp), DoubleElement(yp, ym))
        assert abs(lhs2 - algebra.trace_form(xp, y)) < 1e-10
        assert abs(lhs2 - canonical_borel_pairing(r, xp, ym, -1)) < 1e-8


def test_context_compatibility():
    data, r = sl3()
    from poissonlie.sampling import random_torus_element, rng_from_seed

    w = random_torus_element(rng_from_seed(5), 2)
    ctx = make_context(r, w)
    x = np.array([[0, 1, 0], [0, 0, 0], [0, 0, 0]], dtype=complex)
    assert np.allclose(ctx.sigma(apply_r(r, x)), apply_r(r, ctx.sigma(x)))
    assert np.allclose(ctx.sigma_h_matrix(), np.eye(2))


def test_context_rejects_incompatible_twist():
    data, r = sl3()
    from poissonlie.rootdata import representative

    w = representative(data, (0,)).matrix.astype(complex)   # Weyl reflection: moves n
    with pytest.raises(ValueError):
        make_context(r, w)


def test_double_pairing_nondegenerate():
    basis = double_basis(2)
    gram = np.array([[double_pairing(a, b) for b in basis] for a in basis])
    assert np.linalg.matrix_rank(gram, tol=1e-9) == len(basis)
