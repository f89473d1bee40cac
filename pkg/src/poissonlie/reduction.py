"""Constraint systems, the K and A operators, the Poisson isomorphism
between bialgebra structures, and the slice with trivial reduced bracket.

The constraint functions are the strictly-lower matrix coefficients of

    mu_N(L) = n_+  (the lower-unipotent component of the twisted
                    factorization L = sigma(L_+) L_-^{-1}),

which generate the coordinate ring of the lower unipotent group for type
A.  On the level set mu_N^{-1}(f), with f the distinguished unipotent
element built from the Weyl machinery, the constraints are first class:
their pairwise brackets vanish there (at generic points they do not).
Level-set points are synthesized directly from the parametrization
L = h_+ f n_-^{-1} s(h_+)^{-1}, which factorizes back to n_+ = f exactly.

The finite conjugation operator solves K - K* = (1/2)(1+s)/(1-s); the
unique skew solution is K = (1/4)(1+s)(1-s)^{-1}, with a free symmetric
part defaulted to zero.  The deformation operator between two commuting
Cartan twists theta, theta' solves, in the constant case,
A - A* = r0'_+ - r0_+ (skew solution A = (1/4)(r0' - r0)); in the affine
case the same symmetric mode coupling as for K reduces it to per-eigenline
quadratics.  The induced map L -> e^{AX} L e^{-AX} transports the bracket
of the theta-structure onto the theta'-structure; its derivative is
computed exactly through the Gauss-factor flow, never by finite
differences.
"""

from dataclasses import dataclass

import numpy as np

from . import algebra
from .algebra import trace_form, traceless, unipotent_log
from .brackets import (
    GroupObservable,
    UnipotentCoefficient,
    factorized_bracket,
    left_gradient,
    reduced_bracket,
    reduced_bracket_from_gradients,
    right_gradient,
    unipotent_coefficient_bracket,
)
from .factorize import gauss_decompose, reassemble, twisted_factorize
from .loopmodes import DilationParam, ModeKernel, _eigen_pairing
from .polyfn import MatrixVars, char_poly_coefficients
from .rmatrix import PoissonContext, r0_minus, r0_plus
from .rootdata import (
    build_f_element,
    coxeter_negative_root_count,
    coxeter_operator,
    coxeter_word_inverse,
    representative,
)


# --- the K operator ----------------------------------------------------------


@dataclass(frozen=True)
class KOperator:
    matrix: np.ndarray
    equation_residual: float
    commutation_residual: float


def solve_k_finite(data, symmetric_part=None):
    """Skew solution of K - K* = (1/2)(1+s)(1-s)^{-1} on h.

    symmetric_part, when given, must be symmetric w.r.t. the Cartan form
    and commute with the Coxeter operator; it is added to the canonical
    skew solution K = (1/4)(1+s)(1-s)^{-1}.
    """
    l = data.rank
    s = coxeter_operator(data).matrix.astype(complex)
    k = 0.25 * np.linalg.solve(np.eye(l) - s, np.eye(l) + s)
    if symmetric_part is not None:
        sym = np.asarray(symmetric_part, dtype=complex)
        form = data.form_h.astype(complex)
        if np.linalg.norm(algebra.endh_adjoint(sym, form) - sym) > 1e-10:
            raise ValueError("symmetric part is not symmetric w.r.t. the form")
        if np.linalg.norm(sym @ s - s @ sym) > 1e-10:
            raise ValueError("symmetric part does not commute with the Coxeter element")
        k = k + sym
    form = data.form_h.astype(complex)
    rhs = 0.5 * np.linalg.solve(np.eye(l) - s, np.eye(l) + s)
    residual = np.linalg.norm(k - algebra.endh_adjoint(k, form) - rhs)
    commut = np.linalg.norm(k @ s - s @ k)
    return KOperator(matrix=k, equation_residual=residual, commutation_residual=commut)


# --- the A operator and the Poisson isomorphism -------------------------------


@dataclass(frozen=True)
class AOperator:
    matrix: np.ndarray            # constant case
    mode_kernel: ModeKernel       # affine case, or None
    equation_residual: float


def _cayley(theta):
    l = theta.shape[0]
    return np.linalg.solve(np.eye(l) - theta, np.eye(l) + theta)


def solve_a(data, theta, theta_prime, p: DilationParam = None,
            truncation=16, alternative_root=False):
    """Deformation operator between the theta and theta' structures.

    Constant case (p None): the skew solution of A - A* = r0'_+ - r0_+.
    Affine case: theta and theta' twist the loop Cartan through the common
    dilation; per-eigenline quadratics under the symmetric mode coupling.
    """
    theta = np.asarray(theta, dtype=complex)
    theta_prime = np.asarray(theta_prime, dtype=complex)
    if np.linalg.norm(theta @ theta_prime - theta_prime @ theta) > 1e-10:
        raise ValueError("theta and theta' must commute")
    form = data.form_h.astype(complex)
    l = data.rank

    if p is None:
        a = 0.25 * (_cayley(theta_prime) - _cayley(theta))
        rhs = 0.5 * (_cayley(theta_prime) - _cayley(theta))
        residual = np.linalg.norm(a - algebra.endh_adjoint(a, form) - rhs)
        return AOperator(matrix=a, mode_kernel=None, equation_residual=residual)

    eigvals, vecs = np.linalg.eig(theta)
    vinv = np.linalg.inv(vecs)
    eigvals_prime = np.diag(vinv @ theta_prime @ vecs)
    if np.linalg.norm(vinv @ theta_prime @ vecs - np.diag(eigvals_prime)) > 1e-9:
        raise ValueError("theta' is not diagonal in the common eigenbasis")
    pairing = _eigen_pairing(eigvals)
    pval = p.p

    def rp(w, n):
        return 1.0 / (1.0 - (pval ** n) * w)

    coeffs = {0: 0.25 * (_cayley(theta_prime) - _cayley(theta))}
    for n in range(1, truncation + 1):
        a_plus = np.zeros(l, dtype=complex)
        a_minus = np.zeros(l, dtype=complex)
        for j, (w, wp) in enumerate(zip(eigvals, eigvals_prime)):
            r_val = rp(wp, n) - rp(w, n)
            rm = (pval ** n) * w * rp(w, n)
            q_val = (pval ** n - 1.0) / (rm - (pval ** n) * rp(w, n))
            root = np.sqrt(r_val / q_val)
            a = -root if alternative_root else root
            a_plus[j] = a
            a_minus[pairing[j]] = a
        coeffs[n] = vecs @ np.diag(a_plus) @ vinv
        coeffs[-n] = vecs @ np.diag(a_minus) @ vinv

    eye = np.eye(l, dtype=complex)
    kernel = ModeKernel(coefficients=coeffs, tail_plus=eye, tail_minus=eye,
                        truncation=truncation)
    residual = a_equation_residual(data, theta, theta_prime, p, kernel)
    return AOperator(matrix=coeffs[0], mode_kernel=kernel, equation_residual=residual)


def a_equation_residual(data, theta, theta_prime, p, kernel: ModeKernel):
    """Back-substitution of the affine A equation over retained modes."""
    form = data.form_h.astype(complex)
    l = data.rank
    pval = p.p
    worst = 0.0
    eye = np.eye(l)
    for n in range(-kernel.truncation, kernel.truncation + 1):
        th_n = (pval ** n) * theta
        thp_n = (pval ** n) * theta_prime
        r0p_n = 0.5 * (_cayley_at(th_n) + eye)
        r0m_n = 0.5 * (_cayley_at(th_n) - eye)
        r0p_prime_n = 0.5 * (_cayley_at(thp_n) + eye)
        a_n = kernel.coefficient(n)
        astar_n = algebra.endh_adjoint(kernel.coefficient(-n), form)
        denom = r0m_n - (pval ** n) * r0p_n
        lhs = a_n @ astar_n @ np.linalg.solve(denom, (pval ** n - 1.0) * eye)
        lhs = lhs + a_n - astar_n
        rhs = r0p_prime_n - r0p_n
        worst = max(worst, np.linalg.norm(lhs - rhs))
    return worst


def _cayley_at(theta_scaled):
    l = theta_scaled.shape[0]
    return np.linalg.solve(np.eye(l) - theta_scaled, np.eye(l) + theta_scaled)


def induced_k_constant(data, theta, theta_prime, a_op: AOperator):
    """K = A + r0_+ - r0'_+ of the component transformation; constant case."""
    r0p = 0.5 * (_cayley(theta) + np.eye(data.rank))
    r0p_prime = 0.5 * (_cayley(theta_prime) + np.eye(data.rank))
    return a_op.matrix + r0p - r0p_prime


def iso_map(ctx_src: PoissonContext, a_op: AOperator, l_matrix):
    """L -> t L t^{-1} with t = e^{A X}, X from the source factorization."""
    fact = twisted_factorize(ctx_src, l_matrix)
    coords = algebra.h_to_coords(fact.x_cartan)
    t = algebra.exp_h(algebra.coords_to_h(a_op.matrix @ coords))
    return t @ l_matrix @ np.linalg.inv(t)


def iso_component_residuals(ctx_src, ctx_dst, data, theta, theta_prime, a_op, l_matrix):
    """Component form of the isomorphism: X' = X, h'_pm = e^{r0'_pm X},
    n'_pm = e^{KX} n_pm e^{-KX} with the induced K (constant case)."""
    fact = twisted_factorize(ctx_src, l_matrix)
    l_prime = iso_map(ctx_src, a_op, l_matrix)
    fact_prime = twisted_factorize(ctx_dst, l_prime)
    coords = algebra.h_to_coords(fact.x_cartan)
    k = induced_k_constant(data, theta, theta_prime, a_op)
    conj = algebra.exp_h(algebra.coords_to_h(k @ coords))
    conj_inv = np.linalg.inv(conj)
    res = {
        "x": np.linalg.norm(fact_prime.x_cartan - fact.x_cartan),
        "n_plus": np.linalg.norm(fact_prime.n_plus - conj @ fact.n_plus @ conj_inv),
        "n_minus": np.linalg.norm(fact_prime.n_minus - conj @ fact.n_minus @ conj_inv),
    }
    return res


def _map_gradients(ctx_src, a_op, phi, vars_, l_matrix):
    """Exact left/right gradients of phi o m at L, m the conjugation flow."""
    n = l_matrix.shape[0]
    gauss = gauss_decompose(l_matrix)
    lower_inv = np.linalg.inv(gauss.lower)
    upper = np.linalg.inv(gauss.upper_inv)
    diag_inv = np.diag(1.0 / np.diag(gauss.diag))

    coords = algebra.h_to_coords(_principal_log_diag(gauss.diag))
    t = algebra.exp_h(algebra.coords_to_h(a_op.matrix @ coords))
    t_inv = np.linalg.inv(t)
    l_prime = t @ l_matrix @ t_inv
    lp_inv = np.linalg.inv(l_prime)
    vals = vars_.pack(l_prime)
    grad_at_prime = left_gradient(phi, vars_, l_prime, values=vals)

    def directional(dl):
        # d(diag) = diagonal part of a^{-1} dL b^{-1} for L = a diag b,
        # with b the upper Gauss factor
        ddiag = np.diag(np.diag(lower_inv @ dl @ upper))
        dx = diag_inv @ ddiag
        adx = algebra.coords_to_h(a_op.matrix @ algebra.h_to_coords(traceless(dx)))
        dm = t @ (dl + adx @ l_matrix - l_matrix @ adx) @ t_inv
        return np.trace(dm @ lp_inv @ grad_at_prime)

    basis = algebra.sl_basis(n - 1)
    dual = algebra.sl_dual_basis(n - 1)
    nabla = algebra.functional_to_element(
        n - 1, lambda xi: directional(xi @ l_matrix), basis, dual
    )
    nabla_p = algebra.functional_to_element(
        n - 1, lambda xi: directional(l_matrix @ xi), basis, dual
    )
    return nabla, nabla_p


def _principal_log_diag(diag):
    logs = np.log(np.diag(diag).astype(complex))
    return np.diag(logs - np.sum(logs) / len(logs))


def iso_poissonness_residual(ctx_src, ctx_dst, a_op, phi, psi, l_matrix, vars_=None):
    """|{phi o m, psi o m}_src(L) - {phi, psi}_dst(m(L))|."""
    if vars_ is None:
        vars_ = MatrixVars(ctx_src.rank + 1)
    a, b = _map_gradients(ctx_src, a_op, phi, vars_, l_matrix)
    c, d = _map_gradients(ctx_src, a_op, psi, vars_, l_matrix)
    lhs = reduced_bracket_from_gradients(ctx_src, a, b, c, d)
    rhs = reduced_bracket(ctx_dst, phi, psi, iso_map(ctx_src, a_op, l_matrix), vars_)
    return abs(lhs - rhs)


# --- moment maps into the unipotent group ------------------------------------


def mu_n(ctx: PoissonContext, l_matrix):
    """The lower-unipotent component n_+ of the twisted factorization."""
    return twisted_factorize(ctx, l_matrix).n_plus


def mu_n_dk(ctx: PoissonContext, k_op: KOperator, l_matrix):
    """Conjugated moment map e^{KX} n_+ e^{-KX}."""
    fact = twisted_factorize(ctx, l_matrix)
    coords = algebra.h_to_coords(fact.x_cartan)
    conj = algebra.exp_h(algebra.coords_to_h(k_op.matrix @ coords))
    return conj @ fact.n_plus @ np.linalg.inv(conj)


# --- constraint systems --------------------------------------------------------


@dataclass(frozen=True)
class ConstraintSystem:
    ctx: PoissonContext
    f_matrix: np.ndarray
    constraints: tuple            # UnipotentCoefficient observables

    @property
    def rank(self):
        return self.ctx.rank


def constraint_system(ctx: PoissonContext):
    """Strictly-lower matrix coefficients of mu_N with character value f."""
    l = ctx.rank
    f, _ = build_f_element(ctx.data)
    coeffs = tuple(
        UnipotentCoefficient(i, j) for i in range(l + 1) for j in range(l + 1) if i > j
    )
    return ConstraintSystem(ctx=ctx, f_matrix=f.matrix.astype(complex), constraints=coeffs)


def coxeter_conjugate(data, h_diag):
    """s(h) = s h s^{-1} through the fixed Coxeter representative."""
    s_rep = representative(data, tuple(range(data.rank))).matrix.astype(complex)
    return s_rep @ h_diag @ np.linalg.inv(s_rep)


def synthesize_level_point(cs: ConstraintSystem, rng, scale=0.4):
    """A point of mu_N^{-1}(f): L = h_+ f n_-^{-1} s(h_+)^{-1}."""
    from .sampling import random_cartan_coords, random_upper_unipotent

    data = cs.ctx.data
    l = data.rank
    h_plus = algebra.exp_h(algebra.coords_to_h(random_cartan_coords(rng, l, scale)))
    n_minus = random_upper_unipotent(rng, l + 1, scale)
    return h_plus @ cs.f_matrix @ np.linalg.inv(n_minus) @ np.linalg.inv(
        coxeter_conjugate(data, h_plus)
    )


def level_set_residual(cs: ConstraintSystem, l_matrix):
    return np.linalg.norm(mu_n(cs.ctx, l_matrix) - cs.f_matrix)


def first_class_residual(cs: ConstraintSystem, l_matrix, validate=True, tol=1e-8):
    """max over constraint pairs of |{F_i, F_j}| at the point."""
    if validate:
        lvl = level_set_residual(cs, l_matrix)
        if lvl > tol:
            raise ValueError(f"point is not on the level set (|mu_N - f| = {lvl:.3e})")
    fact = twisted_factorize(cs.ctx, l_matrix)
    worst = 0.0
    for i, fa in enumerate(cs.constraints):
        for fb in cs.constraints[i + 1:]:
            worst = max(worst, abs(unipotent_coefficient_bracket(cs.ctx, fa, fb, fact)))
    return worst


def character_consistency_residual(cs: ConstraintSystem, l_matrix):
    """Constraint values at a level-set point reproduce the entries of f."""
    n_plus = mu_n(cs.ctx, l_matrix)
    worst = 0.0
    for c in cs.constraints:
        worst = max(worst, abs(n_plus[c.i, c.j] - cs.f_matrix[c.i, c.j]))
    return worst


def non_casimir_witness(cs: ConstraintSystem, l_matrix, vars_=None):
    """max |{F, entry function}| at a generic point: constraints are not
    Casimirs even when too few for a pairwise control (rank one)."""
    if vars_ is None:
        vars_ = MatrixVars(cs.rank + 1)
    fact = twisted_factorize(cs.ctx, l_matrix)
    worst = 0.0
    n = cs.rank + 1
    for c in cs.constraints:
        for i in range(n):
            for j in range(n):
                obs = GroupObservable(vars_.entry(i, j), vars_)
                worst = max(worst, abs(factorized_bracket(cs.ctx, c, obs, fact)))
    return worst


def dual_pair_residual(cs: ConstraintSystem, phi, l_matrix, vars_=None):
    """max over constraints of |{phi, F_j}| for a gauge-invariant phi."""
    if vars_ is None:
        vars_ = MatrixVars(cs.rank + 1)
    fact = twisted_factorize(cs.ctx, l_matrix)
    obs_phi = GroupObservable(phi, vars_)
    worst = 0.0
    for c in cs.constraints:
        worst = max(worst, abs(factorized_bracket(cs.ctx, obs_phi, c, fact)))
    return worst


def constraint_closure_fit(cs: ConstraintSystem, points):
    """Regress {F_i, F_j} at sample points on degree <= 2 monomials in the
    constraint values; returns the worst relative fit residual."""
    values = []
    brackets = []
    for l_matrix in points:
        fact = twisted_factorize(cs.ctx, l_matrix)
        vals = [c.value(cs.ctx, fact) for c in cs.constraints]
        values.append(vals)
        row = []
        for i, fa in enumerate(cs.constraints):
            for fb in cs.constraints[i + 1:]:
                row.append(unipotent_coefficient_bracket(cs.ctx, fa, fb, fact))
        brackets.append(row)
    values = np.array(values)
    brackets = np.array(brackets)
    if brackets.shape[1] == 0:
        return 0.0
    npts, ncon = values.shape
    feats = [np.ones(npts)]
    for k in range(ncon):
        feats.append(values[:, k])
    for k in range(ncon):
        for m in range(k, ncon):
            feats.append(values[:, k] * values[:, m])
    design = np.array(feats).T
    worst = 0.0
    for col in range(brackets.shape[1]):
        target = brackets[:, col]
        sol, *_ = np.linalg.lstsq(design, target, rcond=None)
        resid = np.linalg.norm(design @ sol - target)
        worst = max(worst, resid / max(1.0, np.linalg.norm(target)))
    return worst


# --- the slice and the trivial reduced bracket --------------------------------


@dataclass(frozen=True)
class SliceReport:
    converged: bool
    iterations: int
    newton_residual: float
    conjugator: np.ndarray
    slice_point: np.ndarray
    slice_coordinates: np.ndarray
    nprime_dimension: int
    max_reduced_bracket: float
    coordinate_jacobian_ok: bool


def _nprime_pattern(l):
    """Index pairs of the abelian subgroup N' (last-column root lines)."""
    return [(i, l) for i in range(l)]


def slice_and_miura_check(ctx: PoissonContext, l_matrix, max_iter=100, target=1e-12):
    """Conjugate L in M^s into the cross-section N' s^{-1} by Newton iteration
    and evaluate the reduced brackets of the slice invariants.

    The slice functions are generated by the characteristic-polynomial
    coefficients (conjugation invariants); the reduced Poisson structure on
    the cross-section must annihilate them.
    """
    data = ctx.data
    l = data.rank
    n = l + 1
    # the slice is N' * (representative of s^{-1}); membership is tested by
    # right-multiplying with the matrix inverse of that representative
    s_inv_rep = representative(data, coxeter_word_inverse(data)).matrix.astype(complex)
    s_unrep = np.linalg.inv(s_inv_rep)
    upper_positions = [(i, j) for i in range(n) for j in range(i + 1, n)]
    allowed = set(_nprime_pattern(l))

    def unpack(params):
        v = np.eye(n, dtype=complex)
        for (i, j), c in zip(upper_positions, params):
            v[i, j] = c
        return v

    def residual_vector(m):
        target_matrix = m @ s_unrep
        res = []
        for i in range(n):
            for j in range(n):
                want = 1.0 if i == j else 0.0
                if (i, j) in allowed:
                    continue
                res.append(target_matrix[i, j] - want)
        return np.array(res)

    params = np.zeros(len(upper_positions), dtype=complex)
    res = residual_vector(l_matrix)
    it = 0
    current = np.linalg.norm(res)
    while current > target and it < max_iter:
        v = unpack(params)
        v_inv = np.linalg.inv(v)
        m = v_inv @ l_matrix @ v
        res = residual_vector(m)
        current = np.linalg.norm(res)
        if current <= target:
            break
        jac = np.zeros((len(res), len(params)), dtype=complex)
        for k, (i, j) in enumerate(upper_positions):
            e = np.zeros((n, n), dtype=complex)
            e[i, j] = 1.0
            dm = v_inv @ (l_matrix @ e - e @ m)   # d(v^-1 L v) along e
            jac[:, k] = residual_vector_linear(dm, allowed, s_unrep, n)
        step, *_ = np.linalg.lstsq(jac, -res, rcond=None)
        damping = 1.0
        while damping > 1e-4:
            trial = params + damping * step
            trial_res = residual_vector(
                np.linalg.inv(unpack(trial)) @ l_matrix @ unpack(trial)
            )
            if np.linalg.norm(trial_res) < current:
                params = trial
                break
            damping *= 0.5
        else:
            params = params + step
        it += 1

    v = unpack(params)
    m = np.linalg.inv(v) @ l_matrix @ v
    res = residual_vector(m)
    newton_residual = float(np.linalg.norm(res))
    converged = newton_residual <= max(target, 1e-9)
    slice_coords = np.array([(m @ s_unrep)[i, l] for i in range(l)])

    count, _ = coxeter_negative_root_count(data)

    vars_ = MatrixVars(n)
    chars = char_poly_coefficients(vars_.entry_matrix())[:l]
    worst = 0.0
    for i, ca in enumerate(chars):
        for cb in chars[i + 1:]:
            worst = max(worst, abs(reduced_bracket(ctx, ca, cb, m, vars_)))

    jac_ok = _slice_coordinate_jacobian_ok(data, s_inv_rep, slice_coords, chars, vars_)

    return SliceReport(
        converged=converged,
        iterations=it,
        newton_residual=newton_residual,
        conjugator=v,
        slice_point=m,
        slice_coordinates=slice_coords,
        nprime_dimension=count,
        max_reduced_bracket=worst,
        coordinate_jacobian_ok=jac_ok,
    )


def residual_vector_linear(dm, allowed, s_unrep, n):
    target = dm @ s_unrep
    res = []
    for i in range(n):
        for j in range(n):
            if (i, j) in allowed:
                continue
            res.append(target[i, j])
    return np.array(res)


def _slice_coordinate_jacobian_ok(data, s_inv_rep, coords, chars, vars_, tol=1e-8):
    """The invariants generate the slice functions: d(chars)/d(coords) is
    nonsingular at the slice point."""
    l = data.rank
    n = l + 1

    def point(c):
        nprime = np.eye(n, dtype=complex)
        for i in range(l):
            nprime[i, l] = c[i]
        return nprime @ s_inv_rep

    base = point(coords)
    jac = np.zeros((l, l), dtype=complex)
    for k in range(l):
        e = np.zeros(l, dtype=complex)
        e[k] = 1.0
        dpoint = point(coords + e) - base   # affine in the coordinates
        vals = vars_.pack(base)
        for a, ch in enumerate(chars):
            total = 0.0
            for i in range(n):
                for j in range(n):
                    total += ch.partial(vars_.var(i, j)).evaluate(vals) * dpoint[i, j]
            jac[a, k] = total
    return bool(abs(np.linalg.det(jac)) > tol)


def sample_slice_domain_point(data, rng, scale=0.5):
    """Random element of the cell M^s = N s^{-1} N."""
    from .sampling import random_upper_unipotent

    l = data.rank
    s_inv_rep = representative(data, coxeter_word_inverse(data)).matrix.astype(complex)
    n1 = random_upper_unipotent(rng, l + 1, scale)
    n2 = random_upper_unipotent(rng, l + 1, scale)
    return n1 @ s_inv_rep @ n2


# --- the exponential pullback identity -----------------------------------------


def simple_root_coefficients(l_matrix_unipotent):
    """Coefficients of the simple-root generators in log of a lower unipotent."""
    logm = unipotent_log(l_matrix_unipotent)
    n = logm.shape[0]
    return np.array([logm[i + 1, i] for i in range(n - 1)])


def anz_pullback_residual(ctx: PoissonContext, k_op: KOperator, l_matrix):
    """Exponential-rescaling identity for the conjugated moment map.

    The simple-root coefficient phi_i of mu_N^{D,K} equals
    e^{-alpha_i(KX)} phi_i(n_+): conjugation by the torus element e^{KX}
    scales the root line of -alpha_i by the inverse character value.
    """
    fact = twisted_factorize(ctx, l_matrix)
    coords = algebra.h_to_coords(fact.x_cartan)
    kx = algebra.coords_to_h(k_op.matrix @ coords)
    conjugated = mu_n_dk(ctx, k_op, l_matrix)

    phi_plain = simple_root_coefficients(fact.n_plus)
    phi_conj = simple_root_coefficients(conjugated)
    diag = np.diag(kx)
    worst = 0.0
    for i in range(ctx.rank):
        alpha_val = diag[i] - diag[i + 1]
        worst = max(worst, abs(phi_conj[i] - np.exp(-alpha_val) * phi_plain[i]))
    return worst
