"""Poisson brackets on the group and on the dual coordinates.

Functions on SL(l+1) are PolyFn polynomials in matrix entries; their left
and right gradients

    <xi, grad phi(x)>  = d/ds phi(e^{s xi} x)|_0
    <xi, grad' phi(x)> = d/ds phi(x e^{s xi})|_0

are computed exactly from the partial-derivative matrix D (D[a,b] =
d phi / d x_ab) as the traceless parts of x D^T and D^T x.  Finite
differences appear only in tests, as an independent oracle.

`reduced_bracket` evaluates the gauge-covariant bracket on the group,

    {phi, psi} = <r a, c> + <r b, d> - 2 <sigma r_+ b, c> - 2 <r_- sigma^{-1} a, d>,

a = grad phi, b = grad' phi (likewise c, d for psi), both numerically and
as a PolyFn (`reduced_bracket_poly`), the latter witnessing that
matrix-coefficient polynomials close under the bracket.  Nested symbolic
brackets power the Jacobi residual; their degree is capped.

On the factorizable locus, observables are evaluated through the dual
coordinates (L_+, L_-): `factorized_bracket` implements

    {phi, psi}(L_+, L_-) = <Ad L_+ sigma^{-1} Z_phi - Ad L_- Z_phi, grad psi> - (phi <-> psi),
    (r_+ - sigma^{-1} r_-) Z_phi = grad' phi,

with the dual-coordinate gradients of each observable computed from their
defining directional derivatives.  For observables depending only on the
lower-unipotent component n_+, `unipotent_coefficient_bracket` evaluates
the closed form with Cartan kernel (r0_- + sigma_h r0_+)/(r0_- - sigma_h r0_+)
and Borel projections of Ad(n_+^{-1}) gradients; the two routes agree and
are cross-checked in tests.
"""

import numpy as np

from . import algebra
from .algebra import trace_form, traceless
from .factorize import TwistedFactorization
from .polyfn import (
    MatrixVars,
    PolyFn,
    poly_matmul,
    poly_matrix_from_numeric,
    poly_pairing,
    poly_trace,
)
from .rmatrix import PoissonContext, apply_r, r0_minus, r0_plus, r_minus, r_plus

NESTED_DEGREE_CAP = 8


# --- gradients of polynomial observables ------------------------------------


def partial_matrix(phi, vars_: MatrixVars, values, slot=0):
    n = vars_.n
    d = np.zeros((n, n), dtype=complex)
    for a in range(n):
        for b in range(n):
            d[a, b] = phi.partial(vars_.var(a, b, slot)).evaluate(values)
    return d


def left_gradient(phi, vars_: MatrixVars, x, slot=0, values=None):
    if values is None:
        values = vars_.pack(x)
    d = partial_matrix(phi, vars_, values, slot)
    return traceless(np.asarray(x, dtype=complex) @ d.T)


def right_gradient(phi, vars_: MatrixVars, x, slot=0, values=None):
    if values is None:
        values = vars_.pack(x)
    d = partial_matrix(phi, vars_, values, slot)
    return traceless(d.T @ np.asarray(x, dtype=complex))


def sym_partial_matrix(phi, vars_: MatrixVars, slot=0):
    n = vars_.n
    out = np.empty((n, n), dtype=object)
    for a in range(n):
        for b in range(n):
            out[a, b] = phi.partial(vars_.var(a, b, slot))
    return out


def _poly_traceless(m):
    n = m.shape[0]
    tr = poly_trace(m)
    out = m.copy()
    for i in range(n):
        out[i, i] = out[i, i] - tr * (1.0 / n)
    return out


def sym_left_gradient(phi, vars_: MatrixVars, slot=0):
    d = sym_partial_matrix(phi, vars_, slot)
    x = vars_.entry_matrix(slot)
    return _poly_traceless(poly_matmul(x, d.T))


def sym_right_gradient(phi, vars_: MatrixVars, slot=0):
    d = sym_partial_matrix(phi, vars_, slot)
    x = vars_.entry_matrix(slot)
    return _poly_traceless(poly_matmul(d.T, x))


# --- r and sigma acting on PolyFn matrices ----------------------------------


def apply_r_poly(r, m):
    """r on a PolyFn matrix: lower - upper + r0 on the diagonal part."""
    n = m.shape[0]
    out = np.empty((n, n), dtype=object)
    for i in range(n):
        for j in range(n):
            if i > j:
                out[i, j] = m[i, j]
            elif i < j:
                out[i, j] = -m[i, j]
            else:
                out[i, j] = PolyFn()
    # coroot coordinates of the diagonal: partial sums
    coords = []
    acc = PolyFn()
    for i in range(n - 1):
        acc = acc + m[i, i]
        coords.append(acc)
    r0 = r.cartan_part
    new_coords = []
    for i in range(n - 1):
        acc = PolyFn()
        for j in range(n - 1):
            acc = acc + coords[j] * r0[i, j]
        new_coords.append(acc)
    prev = PolyFn()
    for i in range(n):
        cur = new_coords[i] if i < n - 1 else PolyFn()
        out[i, i] = out[i, i] + (cur - prev)
        prev = cur
    if r.defect:
        out[0, 1] = out[0, 1] + coords[0] * r.defect
    return out


def sigma_poly(ctx: PoissonContext, m):
    if ctx.twist_rep is None:
        return m
    w = poly_matrix_from_numeric(ctx.twist_rep)
    winv = poly_matrix_from_numeric(ctx.twist_rep_inv)
    return poly_matmul(w, poly_matmul(m, winv))


def sigma_inv_poly(ctx: PoissonContext, m):
    if ctx.twist_rep is None:
        return m
    w = poly_matrix_from_numeric(ctx.twist_rep_inv)
    winv = poly_matrix_from_numeric(ctx.twist_rep)
    return poly_matmul(w, poly_matmul(m, winv))


# --- the reduced bracket on the group ---------------------------------------


def reduced_bracket_from_gradients(ctx: PoissonContext, a, b, c, d):
    """The bracket evaluated on precomputed left/right gradient pairs."""
    r = ctx.r
    val = trace_form(apply_r(r, a), c) + trace_form(apply_r(r, b), d)
    val -= 2.0 * trace_form(ctx.sigma(r_plus(r, b)), c)
    val -= 2.0 * trace_form(r_minus(r, ctx.sigma_inv(a)), d)
    return val


def reduced_bracket(ctx: PoissonContext, phi, psi, l_matrix, vars_=None):
    """Gauge-covariant bracket of two PolyFn observables at a group point."""
    if vars_ is None:
        vars_ = MatrixVars(ctx.rank + 1)
    values = vars_.pack(l_matrix)
    a = left_gradient(phi, vars_, l_matrix, values=values)
    b = right_gradient(phi, vars_, l_matrix, values=values)
    c = left_gradient(psi, vars_, l_matrix, values=values)
    d = right_gradient(psi, vars_, l_matrix, values=values)
    return reduced_bracket_from_gradients(ctx, a, b, c, d)


def reduced_bracket_poly(ctx: PoissonContext, phi, psi, vars_=None):
    """The same bracket as a PolyFn: matrix-coefficient polynomials close."""
    if vars_ is None:
        vars_ = MatrixVars(ctx.rank + 1)
    if phi.degree() + psi.degree() > NESTED_DEGREE_CAP:
        raise ValueError(
            f"bracket degree {phi.degree() + psi.degree()} exceeds the cap "
            f"{NESTED_DEGREE_CAP}"
        )
    a = sym_left_gradient(phi, vars_)
    b = sym_right_gradient(phi, vars_)
    c = sym_left_gradient(psi, vars_)
    d = sym_right_gradient(psi, vars_)
    r = ctx.r
    val = poly_pairing(apply_r_poly(r, a), c)
    val = val + poly_pairing(apply_r_poly(r, b), d)
    val = val - poly_pairing(sigma_poly(ctx, _r_plus_poly(r, b)), c) * 2.0
    val = val - poly_pairing(_r_minus_poly(r, sigma_inv_poly(ctx, a)), d) * 2.0
    return val


def _r_plus_poly(r, m):
    rm = apply_r_poly(r, m)
    out = np.empty(m.shape, dtype=object)
    for idx in np.ndindex(m.shape):
        out[idx] = (rm[idx] + m[idx]) * 0.5
    return out


def _r_minus_poly(r, m):
    rm = apply_r_poly(r, m)
    out = np.empty(m.shape, dtype=object)
    for idx in np.ndindex(m.shape):
        out[idx] = (rm[idx] - m[idx]) * 0.5
    return out


def jacobi_residual(ctx: PoissonContext, phi, psi, chi, l_matrix, vars_=None):
    """|{phi,{psi,chi}} + {psi,{chi,phi}} + {chi,{phi,psi}}| at a point.

    Inner brackets are built symbolically (closure), outer ones evaluated
    numerically at the point.
    """
    if vars_ is None:
        vars_ = MatrixVars(ctx.rank + 1)
    total = 0.0 + 0.0j
    for f, g, h in ((phi, psi, chi), (psi, chi, phi), (chi, phi, psi)):
        inner = reduced_bracket_poly(ctx, g, h, vars_)
        total += reduced_bracket(ctx, f, inner, l_matrix, vars_)
    return abs(total)


def gauge_action(ctx: PoissonContext, g, l_matrix):
    """g o L = sigma(g)^{-1} L g; conjugation when the twist is trivial."""
    return np.linalg.inv(ctx.sigma(g)) @ l_matrix @ g


# --- observables in dual coordinates ----------------------------------------


class GroupObservable:
    """A PolyFn on the group, read through L = sigma(L_+) L_-^{-1}."""

    def __init__(self, phi, vars_: MatrixVars):
        self.phi = phi
        self.vars = vars_

    def value(self, ctx, fact: TwistedFactorization):
        from .factorize import reassemble

        return self.phi.evaluate(self.vars.pack(reassemble(ctx, fact)))

    def dual_gradients(self, ctx, fact: TwistedFactorization, basis, dual):
        from .factorize import reassemble

        l_matrix = reassemble(ctx, fact)
        values = self.vars.pack(l_matrix)
        a = left_gradient(self.phi, self.vars, l_matrix, values=values)
        l_inv = np.linalg.inv(l_matrix)
        lp, lm = fact.l_plus, fact.l_minus
        lm_inv = np.linalg.inv(lm)

        def left_functional(x):
            xp, xm = r_plus(ctx.r, x), r_minus(ctx.r, x)
            tangent = ctx.sigma(xp) @ l_matrix - l_matrix @ xm
            return np.trace(tangent @ l_inv @ a)

        def right_functional(x):
            xp, xm = r_plus(ctx.r, x), r_minus(ctx.r, x)
            tangent = ctx.sigma(lp) @ (ctx.sigma(xp) - xm) @ lm_inv
            return np.trace(tangent @ l_inv @ a)

        nabla = algebra.functional_to_element(ctx.rank, left_functional, basis, dual)
        nabla_p = algebra.functional_to_element(ctx.rank, right_functional, basis, dual)
        return nabla, nabla_p


class UnipotentCoefficient:
    """The (i, j) matrix coefficient (i > j) of the component n_+."""

    def __init__(self, i, j):
        if i <= j:
            raise ValueError("n_+ coefficients live strictly below the diagonal")
        self.i = i
        self.j = j

    def value(self, ctx, fact: TwistedFactorization):
        return fact.n_plus[self.i, self.j]

    def nplus_gradient(self, fact: TwistedFactorization):
        """Left gradient on the unipotent group, valued in the upper nilpotent."""
        n = fact.n_plus.shape[0]
        e = np.zeros((n, n), dtype=complex)
        e[self.j, self.i] = 1.0
        return algebra.proj_strict_upper(fact.n_plus @ e)

    def _split_rate(self, fact, cdot):
        """d/ds of the N-bar part of a curve through L_+ with velocity cdot."""
        h_inv = np.diag(1.0 / np.diag(fact.h_plus))
        hdot = np.diag(np.diag(cdot))
        return h_inv @ cdot - h_inv @ hdot @ h_inv @ fact.l_plus

    def dual_gradients(self, ctx, fact: TwistedFactorization, basis, dual):
        def left_functional(x):
            xp = r_plus(ctx.r, x)
            ndot = self._split_rate(fact, xp @ fact.l_plus)
            return ndot[self.i, self.j]

        def right_functional(x):
            xp = r_plus(ctx.r, x)
            ndot = self._split_rate(fact, fact.l_plus @ xp)
            return ndot[self.i, self.j]

        nabla = algebra.functional_to_element(ctx.rank, left_functional, basis, dual)
        nabla_p = algebra.functional_to_element(ctx.rank, right_functional, basis, dual)
        return nabla, nabla_p


def _z_operator_matrix(ctx: PoissonContext, basis, dual):
    """Matrix of r_+ - sigma^{-1} r_- on sl coordinates (sl basis)."""
    dim = len(basis)
    cols = np.zeros((dim, dim), dtype=complex)
    for k, b in enumerate(basis):
        img = r_plus(ctx.r, b) - ctx.sigma_inv(r_minus(ctx.r, b))
        for m, dm in enumerate(dual):
            cols[m, k] = trace_form(dm, img)
    return cols


def factorized_bracket(ctx: PoissonContext, obs_phi, obs_psi, fact, basis=None, dual=None):
    """Bracket in dual coordinates at a twisted-factorized point."""
    l = ctx.rank
    if basis is None:
        basis = algebra.sl_basis(l)
    if dual is None:
        dual = algebra.sl_dual_basis(l)
    zmat = _z_operator_matrix(ctx, basis, dual)
    if np.linalg.cond(zmat) > 1e12:
        raise ValueError("the operator r_+ - sigma^{-1} r_- is not invertible")

    def coords(m):
        return np.array([trace_form(d, m) for d in dual])

    def unflatten(c):
        return sum(ci * bi for ci, bi in zip(c, basis))

    lp, lm = fact.l_plus, fact.l_minus
    lp_inv, lm_inv = np.linalg.inv(lp), np.linalg.inv(lm)

    grads = []
    for obs in (obs_phi, obs_psi):
        nabla, nabla_p = obs.dual_gradients(ctx, fact, basis, dual)
        z = unflatten(np.linalg.solve(zmat, coords(nabla_p)))
        w = lp @ ctx.sigma_inv(z) @ lp_inv - lm @ z @ lm_inv
        grads.append((nabla, w))

    (nabla_phi, w_phi), (nabla_psi, w_psi) = grads
    return trace_form(w_phi, nabla_psi) - trace_form(nabla_phi, w_psi)


def unipotent_coefficient_bracket(ctx: PoissonContext, obs_phi, obs_psi, fact):
    """Closed-form bracket for observables depending only on n_+."""
    l = ctx.rank
    sigma_h = ctx.sigma_h_matrix()
    denom = r0_minus(ctx.r) - sigma_h @ r0_plus(ctx.r)
    if abs(np.linalg.det(denom)) < 1e-12:
        raise ValueError("singular Cartan kernel r0_- - sigma_h r0_+")
    kernel = np.linalg.solve(denom, r0_minus(ctx.r) + sigma_h @ r0_plus(ctx.r))

    n_inv = np.linalg.inv(fact.n_plus)
    vs = []
    for obs in (obs_phi, obs_psi):
        g = obs.nplus_gradient(fact)
        vs.append(n_inv @ g @ fact.n_plus)
    v_phi, v_psi = vs

    def p_h(m):
        return algebra.proj_diag(m)

    def p_b(m):
        return algebra.proj_diag(m) + algebra.proj_strict_upper(m)

    kern_term = trace_form(
        algebra.coords_to_h(kernel @ algebra.h_to_coords(p_h(v_phi))), p_h(v_psi)
    )
    val = kern_term
    val += trace_form(p_b(v_phi), v_psi)
    val -= trace_form(v_phi, p_b(v_psi))
    return val


# --- convenient observables --------------------------------------------------


def trace_power_polyfn(vars_: MatrixVars, k, slot=0):
    """tr(L^k) as a PolyFn."""
    x = vars_.entry_matrix(slot)
    m = x
    for _ in range(k - 1):
        m = poly_matmul(m, x)
    return poly_trace(m)
