import numpy as np
import pytest

from poissonlie.factorize import BigCellError
from poissonlie.heisenberg import (
    DoublePoint,
    double_group_bracket,
    factorize_double,
    heisenberg_bracket,
    heisenberg_bracket_poly,
    heisenberg_jacobi_residual,
    left_action,
    moment_maps,
    pair_vars,
    projection,
    pullback_polyfn,
    reassemble_double,
    reassemble_double_right,
    reduction_consistency,
)
from poissonlie.polyfn import MatrixVars
from poissonlie.rmatrix import coxeter_rmatrix, make_context
from poissonlie.rootdata import build_type_a
from poissonlie.sampling import (
    random_group_element,
    random_quadratic_polyfn,
    random_torus_element,
    rng_from_seed,
)


def ctx_for(l, twist=False, seed=77):
    r = coxeter_rmatrix(build_type_a(l))
    if twist:
        return make_context(r, random_torus_element(rng_from_seed(seed), l))
    return make_context(r)


def random_point(rng, n, scale=0.5):
    return DoublePoint(random_group_element(rng, n, scale), random_group_element(rng, n, scale))


def test_double_group_bracket_vanishes_at_unit():
    ctx = ctx_for(2)
    rng = rng_from_seed(0)
    v = pair_vars(2)
    e = DoublePoint(np.eye(3, dtype=complex), np.eye(3, dtype=complex))
    for _ in range(5):
        phi = random_quadratic_polyfn(rng, v)
        psi = random_quadratic_polyfn(rng, v)
        assert abs(double_group_bracket(ctx, phi, psi, e, v)) < 1e-12


def test_heisenberg_antisymmetry():
    rng = rng_from_seed(1)
    for twist in (False, True):
        ctx = ctx_for(2, twist=twist)
        v = pair_vars(2)
        for _ in range(20):
            phi = random_quadratic_polyfn(rng, v)
            psi = random_quadratic_polyfn(rng, v)
            d = random_point(rng, 3)
            lhs = heisenberg_bracket(ctx, phi, psi, d, v)
            rhs = heisenberg_bracket(ctx, psi, phi, d, v)
            assert abs(lhs + rhs) <= 1e-11 * max(1.0, abs(lhs))


def test_heisenberg_poly_matches_numeric():
    rng = rng_from_seed(2)
    ctx = ctx_for(1, twist=True)
    v = pair_vars(1)
    for _ in range(5):
        phi = random_quadratic_polyfn(rng, v)
        psi = random_quadratic_polyfn(rng, v)
        poly = heisenberg_bracket_poly(ctx, phi, psi, v)
        d = random_point(rng, 2)
        direct = heisenberg_bracket(ctx, phi, psi, d, v)
        assert abs(poly.evaluate(v.pack(d.x, d.y)) - direct) <= 1e-10


def test_heisenberg_jacobi():
    rng = rng_from_seed(3)
    for l in (1, 2):
        ctx = ctx_for(l)
        v = pair_vars(l)
        for _ in range(4):
            phi = random_quadratic_polyfn(rng, v)
            psi = random_quadratic_polyfn(rng, v)
            chi = random_quadratic_polyfn(rng, v)
            d = random_point(rng, l + 1)
            assert heisenberg_jacobi_residual(ctx, phi, psi, chi, d, v) <= 1e-9


def test_pullback_invariance_under_left_action():
    rng = rng_from_seed(4)
    ctx = ctx_for(2, twist=True)
    vars_g = MatrixVars(3)
    vars_pair = pair_vars(2)
    phi = random_quadratic_polyfn(rng, vars_g)
    pphi = pullback_polyfn(ctx, phi, vars_g, vars_pair)
    for _ in range(20):
        d = random_point(rng, 3)
        g = random_group_element(rng, 3)
        acted = left_action(d, g, ctx)
        before = pphi.evaluate(vars_pair.pack(d.x, d.y))
        after = pphi.evaluate(vars_pair.pack(acted.x, acted.y))
        assert abs(before - after) <= 1e-10 * max(1.0, abs(before))
        assert np.allclose(projection(ctx, acted), projection(ctx, d))


def test_reduction_consistency_untwisted_and_twisted():
    rng = rng_from_seed(5)
    vars_g = MatrixVars(3)
    for twist in (False, True):
        ctx = ctx_for(2, twist=twist)
        for _ in range(25):
            phi = random_quadratic_polyfn(rng, vars_g)
            psi = random_quadratic_polyfn(rng, vars_g)
            d = random_point(rng, 3)
            assert reduction_consistency(ctx, phi, psi, d, vars_g) <= 1e-9


def test_factorize_double_unit():
    ctx = ctx_for(2)
    e = DoublePoint(np.eye(3, dtype=complex), np.eye(3, dtype=complex))
    fact = factorize_double(ctx, e)
    assert np.allclose(fact.g, np.eye(3))
    assert np.allclose(fact.h, np.eye(3))
    for comp in (*fact.gstar, *fact.hstar):
        assert np.allclose(comp, np.eye(3))


def test_factorize_double_reassembles():
    rng = rng_from_seed(6)
    for twist in (False, True):
        ctx = ctx_for(2, twist=twist)
        for _ in range(15):
            d = random_point(rng, 3)
            fact = factorize_double(ctx, d)
            left = reassemble_double(ctx, fact)
            right = reassemble_double_right(ctx, fact)
            for re_d in (left, right):
                assert np.linalg.norm(re_d.x - d.x) <= 1e-10
                assert np.linalg.norm(re_d.y - d.y) <= 1e-10


def test_factorize_double_triangular_example():
    # d = (x, e) with x upper triangular: L' = sigma(x) and the h-problem is
    # the plain twisted factorization of x
    ctx = ctx_for(1)
    x = np.array([[2.0, 1.0], [0.0, 0.5]], dtype=complex)
    d = DoublePoint(x, np.eye(2, dtype=complex))
    fact = factorize_double(ctx, d)
    re_d = reassemble_double(ctx, fact)
    assert np.linalg.norm(re_d.x - d.x) <= 1e-12
    assert np.linalg.norm(re_d.y - d.y) <= 1e-12
    h_plus, h_minus = fact.hstar
    assert np.linalg.norm(fact.h - np.linalg.inv(h_minus)) <= 1e-12


def test_factorize_double_outside_leaf():
    ctx = ctx_for(1)
    x = np.array([[0.0, 1.0], [-1.0, 0.0]], dtype=complex)
    with pytest.raises(BigCellError):
        factorize_double(ctx, DoublePoint(x, np.eye(2, dtype=complex)))


def test_moment_maps_unit_and_consistency():
    ctx = ctx_for(2)
    e = DoublePoint(np.eye(3, dtype=complex), np.eye(3, dtype=complex))
    maps = moment_maps(ctx, e)
    assert np.allclose(maps["Gstar_left"], np.eye(3))
    assert np.allclose(maps["Gstar_right"], np.eye(3))

    rng = rng_from_seed(7)
    d = random_point(rng, 3)
    maps = moment_maps(ctx, d)
    h_plus, h_minus = maps["G_right"]
    h = maps["Gstar_left"]
    # mu_G^R and mu_{G*}^L reassemble d = h* h^T
    assert np.linalg.norm(h_plus @ ctx.sigma_inv(h) - d.x) <= 1e-10
    assert np.linalg.norm(h_minus @ h - d.y) <= 1e-10
    # Borel moment maps: h_+ lower triangular, h_- upper triangular
    assert np.linalg.norm(h_plus - np.tril(h_plus)) <= 1e-12
    assert np.linalg.norm(h_minus - np.triu(h_minus)) <= 1e-12


def test_uniqueness_near_unit():
    rng = rng_from_seed(8)
    ctx = ctx_for(2)
    for _ in range(10):
        d = random_point(rng, 3, scale=0.3)
        fact = factorize_double(ctx, d)
        fact2 = factorize_double(ctx, reassemble_double(ctx, fact))
        assert np.linalg.norm(fact.g - fact2.g) <= 1e-9
        assert np.linalg.norm(fact.h - fact2.h) <= 1e-9
        for a, b in zip(fact.gstar + fact.hstar, fact2.gstar + fact2.hstar):
            assert np.linalg.norm(a - b) <= 1e-9


def test_reduction_consistency_constant_function():
    from poissonlie.polyfn import PolyFn

    ctx = ctx_for(2)
    vars_g = MatrixVars(3)
    rng = rng_from_seed(9)
    const = PolyFn.constant(2.5)
    psi = random_quadratic_polyfn(rng, vars_g)
    d = random_point(rng, 3)
    assert reduction_consistency(ctx, const, psi, d, vars_g) < 1e-12


def test_double_factorization_dual_class_link():
    # Cartan parts of each dual pair are linked by the Coxeter operator:
    # coords(log h_-) = s @ coords(log h_+)
    from poissonlie import algebra
    from poissonlie.rootdata import build_type_a, coxeter_operator

    data = build_type_a(2)
    s = coxeter_operator(data).matrix.astype(complex)
    ctx = ctx_for(2)
    rng = rng_from_seed(10)
    for _ in range(5):
        d = random_point(rng, 3)
        fact = factorize_double(ctx, d)
        for plus, minus in (fact.gstar, fact.hstar):
            log_plus = algebra.h_to_coords(np.diag(np.log(np.diag(plus))))
            log_minus = algebra.h_to_coords(np.diag(np.log(np.diag(minus))))
            assert np.linalg.norm(log_minus - s @ log_plus) <= 1e-10
