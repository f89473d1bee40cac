"""The twisted Heisenberg double (G x G, { , }_sigma) and its factorizations.

Functions on the double are PolyFns in the entries of both slots.  Their
gradient, as an element of the double Lie algebra identified with its dual
through the signature pairing <<(X,X'),(Y,Y')>> = <X,Y> - <X',Y'>, is the
pair (grad_x, -grad_y) of per-slot trace-form gradients; the sign on the
second slot is forced by the pairing.

Two brackets are provided.  `double_group_bracket` is the multiplicative
Poisson-Lie structure of the double group,

    {phi, psi} = -1/2 <<r_d grad phi, grad psi>> + 1/2 <<r_d grad' phi, grad' psi>>,

which vanishes at the unit.  `heisenberg_bracket` is the sigma-twisted
Heisenberg structure

    {phi, psi}_sigma = <<r_d grad phi, grad psi>> + <<twisted r_d grad' phi, grad' psi>>,

normalized so that the projection p(x, y) = sigma(x) y^{-1} is exactly
Poisson onto the reduced bracket on the group: pullbacks satisfy
{p*phi, p*psi}_sigma = {phi, psi} o p identically (with half weights the
reduction would acquire a global factor 1/2; `reduction_consistency`
reports the residual of the exact identity).

`factorize_double` solves the two twisted factorization problems

    d = g (g*)^T = h* h^T,       T(x, y) = (sigma^{-1}(x), y),

reading h* from L' = sigma(x) y^{-1} = sigma(h*_+) h*_-^{-1} and g* from
the companion problem sigma(x^{-1} y) = g_+^{-1} sigma(g_-); the four
moment maps of the left/right translation actions are the read-offs
(g*, h, h*, g).
"""

from dataclasses import dataclass

import numpy as np

from . import algebra
from .brackets import left_gradient, right_gradient, reduced_bracket
from .factorize import BigCellError, TwistedFactorization, gauss_decompose, twisted_factorize
from .polyfn import (
    MatrixVars,
    poly_adjugate,
    poly_matmul,
    poly_matrix_from_numeric,
)
from .rmatrix import (
    DoubleElement,
    PoissonContext,
    apply_double_r,
    apply_double_r_twisted,
    double_pairing,
)


@dataclass(frozen=True)
class DoublePoint:
    x: np.ndarray
    y: np.ndarray


@dataclass(frozen=True)
class DoubleFactorization:
    g: np.ndarray
    h: np.ndarray
    gstar: tuple      # (g_+, g_-)
    hstar: tuple      # (h_+, h_-)


def pair_vars(l):
    return MatrixVars(l + 1, slots=2)


def double_gradients(phi, vars_: MatrixVars, point: DoublePoint):
    """Left and right gradients of a pair function, valued in the double."""
    values = vars_.pack(point.x, point.y)
    ax = left_gradient(phi, vars_, point.x, slot=0, values=values)
    ay = left_gradient(phi, vars_, point.y, slot=1, values=values)
    bx = right_gradient(phi, vars_, point.x, slot=0, values=values)
    by = right_gradient(phi, vars_, point.y, slot=1, values=values)
    return DoubleElement(ax, -ay), DoubleElement(bx, -by)


def double_group_bracket(ctx: PoissonContext, phi, psi, point: DoublePoint, vars_=None):
    """Multiplicative double-group bracket (untwisted r_d on both slots)."""
    if vars_ is None:
        vars_ = pair_vars(ctx.rank)
    nphi, npphi = double_gradients(phi, vars_, point)
    npsi, nppsi = double_gradients(psi, vars_, point)
    r = ctx.r
    val = -0.5 * double_pairing(apply_double_r(r, nphi), npsi)
    val += 0.5 * double_pairing(apply_double_r(r, npphi), nppsi)
    return val


def heisenberg_bracket(ctx: PoissonContext, phi, psi, point: DoublePoint, vars_=None):
    """Twisted Heisenberg bracket, normalized to reduce exactly onto the group."""
    if vars_ is None:
        vars_ = pair_vars(ctx.rank)
    nphi, npphi = double_gradients(phi, vars_, point)
    npsi, nppsi = double_gradients(psi, vars_, point)
    r = ctx.r
    val = double_pairing(apply_double_r(r, nphi), npsi)
    val += double_pairing(apply_double_r_twisted(ctx, npphi), nppsi)
    return val


def heisenberg_jacobi_residual(ctx, phi, psi, chi, point, vars_=None):
    """Nested Jacobi sum for the Heisenberg bracket, inner brackets symbolic."""
    if vars_ is None:
        vars_ = pair_vars(ctx.rank)
    total = 0.0 + 0.0j
    for f, g, h in ((phi, psi, chi), (psi, chi, phi), (chi, phi, psi)):
        inner = heisenberg_bracket_poly(ctx, g, h, vars_)
        total += heisenberg_bracket(ctx, f, inner, point, vars_)
    return abs(total)


def heisenberg_bracket_poly(ctx: PoissonContext, phi, psi, vars_=None):
    """Heisenberg bracket as a PolyFn on both slots (closure under nesting)."""
    from .brackets import (
        NESTED_DEGREE_CAP,
        apply_r_poly,
        sigma_inv_poly,
        sigma_poly,
        sym_left_gradient,
        sym_right_gradient,
        _poly_traceless,
        _r_minus_poly,
        _r_plus_poly,
    )
    from .polyfn import PolyFn, poly_pairing

    if vars_ is None:
        vars_ = pair_vars(ctx.rank)
    if phi.degree() + psi.degree() > NESTED_DEGREE_CAP:
        raise ValueError("bracket degree exceeds the nesting cap")
    r = ctx.r

    def pair_grads(fn):
        ax = sym_left_gradient(fn, vars_, slot=0)
        ay = sym_left_gradient(fn, vars_, slot=1)
        bx = sym_right_gradient(fn, vars_, slot=0)
        by = sym_right_gradient(fn, vars_, slot=1)
        neg = lambda m: np.array(
            [[-m[i, j] for j in range(m.shape[1])] for i in range(m.shape[0])],
            dtype=object,
        )
        return (ax, neg(ay)), (bx, neg(by))

    def r_d(u, v):
        ru = apply_r_poly(r, u)
        rv = apply_r_poly(r, v)
        rpv = _r_plus_poly(r, v)
        rmu = _r_minus_poly(r, u)
        first = np.array(
            [[ru[i, j] - rpv[i, j] * 2.0 for j in range(ru.shape[1])] for i in range(ru.shape[0])],
            dtype=object,
        )
        second = np.array(
            [[rmu[i, j] * 2.0 - rv[i, j] for j in range(rv.shape[1])] for i in range(rv.shape[0])],
            dtype=object,
        )
        return first, second

    def r_d_twisted(u, v):
        ru = apply_r_poly(r, u)
        rv = apply_r_poly(r, v)
        rpv = sigma_inv_poly(ctx, _r_plus_poly(r, v))
        rmu = _r_minus_poly(r, sigma_poly(ctx, u))
        first = np.array(
            [[ru[i, j] - rpv[i, j] * 2.0 for j in range(ru.shape[1])] for i in range(ru.shape[0])],
            dtype=object,
        )
        second = np.array(
            [[rmu[i, j] * 2.0 - rv[i, j] for j in range(rv.shape[1])] for i in range(rv.shape[0])],
            dtype=object,
        )
        return first, second

    def pairing(pair_a, pair_b):
        return poly_pairing(pair_a[0], pair_b[0]) - poly_pairing(pair_a[1], pair_b[1])

    (aphi, apphi) = pair_grads(phi)
    (apsi, appsi) = pair_grads(psi)
    val = pairing(r_d(*aphi), apsi)
    val = val + pairing(r_d_twisted(*apphi), appsi)
    return val


# --- projection and reduction ------------------------------------------------


def projection(ctx: PoissonContext, point: DoublePoint):
    """p(x, y) = sigma(x) y^{-1}, invariant under the left dressing action."""
    return ctx.sigma(point.x) @ np.linalg.inv(point.y)


def pullback_polyfn(ctx: PoissonContext, phi, vars_g: MatrixVars, vars_pair: MatrixVars):
    """p*phi as a PolyFn on the double (y^{-1} realized by the adjugate)."""
    n = vars_g.n
    x = vars_pair.entry_matrix(0)
    y = vars_pair.entry_matrix(1)
    y_inv = poly_adjugate(y)
    if ctx.twist_rep is not None:
        w = poly_matrix_from_numeric(ctx.twist_rep)
        winv = poly_matrix_from_numeric(ctx.twist_rep_inv)
        x = poly_matmul(w, poly_matmul(x, winv))
    composed = poly_matmul(x, y_inv)
    table = {vars_g.var(i, j): composed[i, j] for i in range(n) for j in range(n)}
    return phi.substitute(table)


def left_action(point: DoublePoint, g, ctx: PoissonContext):
    """d' o d = d (d'^T)^{-1} for d' = (g, g) in the diagonal subgroup."""
    gx = ctx.sigma_inv(g)
    return DoublePoint(point.x @ np.linalg.inv(gx), point.y @ np.linalg.inv(g))


def reduction_consistency(ctx: PoissonContext, phi, psi, point: DoublePoint, vars_g=None):
    """|{p*phi, p*psi}_sigma(d) - {phi, psi}(p(d))|."""
    l = ctx.rank
    if vars_g is None:
        vars_g = MatrixVars(l + 1)
    vars_pair = pair_vars(l)
    pphi = pullback_polyfn(ctx, phi, vars_g, vars_pair)
    ppsi = pullback_polyfn(ctx, psi, vars_g, vars_pair)
    lhs = heisenberg_bracket(ctx, pphi, ppsi, point, vars_pair)
    rhs = reduced_bracket(ctx, phi, psi, projection(ctx, point), vars_g)
    return abs(lhs - rhs)


# --- twisted factorizations of the double ------------------------------------


def factorize_double(ctx: PoissonContext, point: DoublePoint):
    """Solve d = g (g*)^T = h* h^T on the principal leaf."""
    x, y = point.x, point.y
    try:
        h_fact = twisted_factorize(ctx, ctx.sigma(x) @ np.linalg.inv(y))
    except BigCellError as exc:
        raise BigCellError(f"outside the principal leaf: {exc}") from exc
    h_plus, h_minus = h_fact.l_plus, h_fact.l_minus
    h = np.linalg.inv(h_minus) @ y

    try:
        g_plus, g_minus = _companion_factorize(ctx, ctx.sigma(np.linalg.inv(x) @ y))
    except BigCellError as exc:
        raise BigCellError(f"outside the principal leaf: {exc}") from exc
    g = y @ np.linalg.inv(g_minus)

    return DoubleFactorization(g=g, h=h, gstar=(g_plus, g_minus), hstar=(h_plus, h_minus))


def _companion_factorize(ctx: PoissonContext, m):
    """Solve m = g_+^{-1} sigma(g_-) with (g_+, g_-) in the dual group."""
    from .rmatrix import r0_minus, r0_plus

    gauss = gauss_decompose(m)
    d = np.diag(gauss.diag)
    logs = np.log(d.astype(complex))
    if np.any(np.abs(np.imag(logs)) > np.pi - 1e-9) or abs(np.sum(logs)) > 1e-6:
        raise BigCellError("companion problem outside the principal-log domain")
    # diagonal factor is h_+^{-1} sigma(h_-) = e^{-X}
    x_cartan = -np.diag(logs - np.sum(logs) / len(d))
    coords = algebra.h_to_coords(x_cartan)
    hp = algebra.exp_h(algebra.coords_to_h(r0_plus(ctx.r) @ coords))
    hm = algebra.exp_h(algebra.coords_to_h(r0_minus(ctx.r) @ coords))
    n_plus = np.linalg.inv(gauss.lower)
    n_minus = ctx.sigma_inv(gauss.upper_inv)
    return hp @ n_plus, hm @ n_minus


def reassemble_double(ctx: PoissonContext, fact: DoubleFactorization):
    """d = g (g*)^T with the twist on the first dual slot."""
    g_plus, g_minus = fact.gstar
    return DoublePoint(
        x=fact.g @ ctx.sigma_inv(g_plus),
        y=fact.g @ g_minus,
    )


def reassemble_double_right(ctx: PoissonContext, fact: DoubleFactorization):
    """d = h* h^T."""
    h_plus, h_minus = fact.hstar
    return DoublePoint(
        x=h_plus @ ctx.sigma_inv(fact.h),
        y=h_minus @ fact.h,
    )


def moment_maps(ctx: PoissonContext, point: DoublePoint):
    """Moment maps of the four translation actions on the principal leaf.

    Returns a dict: left G-action -> g*, left dual action -> h,
    right G-action -> h*, right dual action -> g.
    """
    fact = factorize_double(ctx, point)
    return {
        "G_left": fact.gstar,
        "Gstar_left": fact.h,
        "G_right": fact.hstar,
        "Gstar_right": fact.g,
    }
