"""Type A_l root data, Weyl group action on the Cartan subalgebra, and
unimodular group representatives with exact Bruhat-cell tests.

Conventions
-----------
* Simple coroots are realized as H_i = E_ii - E_{i+1,i+1} in sl(l+1).
* The reflection s_i acts on the coroot basis by H_j -> H_j - a_ij H_i.
* The group representative of s_i is the determinant-one block
  [[0, 1], [-1, 0]] in rows/columns (i, i+1); a Weyl word is represented
  by the product of its letters' representatives, so the representative
  of an element depends on the chosen word (all words used here are fixed:
  Coxeter word (1..l), its reversal for the inverse, and the staircase
  word for the longest element).
* All Weyl matrices are integer valued; Bruhat membership g in N w N is
  decided exactly over the rationals: the cell permutation must match and
  the torus part of the normal form g = n1 * w * h * n2 must be trivial.
"""

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .linalg import as_fraction_matrix, exact_det, exact_inv, exact_rank, is_exact_identity


@dataclass(frozen=True)
class RootSystemData:
    rank: int
    cartan_matrix: np.ndarray        # l x l integers
    symmetrizers: np.ndarray         # d_i, all 1 for type A
    form_h: np.ndarray               # (H_i, H_j) = d_j^-1 a_ij
    form_hstar: np.ndarray           # (alpha_i, alpha_j) = b_ij
    coxeter_number: int


@dataclass(frozen=True)
class WeylOperator:
    matrix: np.ndarray               # l x l integer matrix on coroot coordinates
    word: tuple


@dataclass(frozen=True)
class GroupRepresentative:
    matrix: np.ndarray               # (l+1) x (l+1) integer matrix, det 1
    label: str


class BruhatCellError(ValueError):
    """Raised when a matrix does not lie in the requested Bruhat cell."""


def build_type_a(l):
    """Root data of type A_l; rejects l < 1."""
    if l < 1:
        raise ValueError(f"rank must be >= 1, got {l}")
    a = 2 * np.eye(l, dtype=np.int64)
    for i in range(l - 1):
        a[i, i + 1] = -1
        a[i + 1, i] = -1
    d = np.ones(l, dtype=np.int64)
    # d_i = 1 in type A, so both induced forms coincide with the Cartan matrix
    return RootSystemData(
        rank=l,
        cartan_matrix=a,
        symmetrizers=d,
        form_h=a.copy(),
        form_hstar=a.copy(),
        coxeter_number=l + 1,
    )


def simple_reflection(data, i):
    """Matrix of s_i on the coroot basis (0-based simple root index)."""
    l = data.rank
    m = np.eye(l, dtype=np.int64)
    for j in range(l):
        m[i, j] -= data.cartan_matrix[i, j]
    return WeylOperator(matrix=m, word=(i,))


def weyl_word(data, word):
    """Product s_{word[0]} s_{word[1]} ... as an operator on h."""
    l = data.rank
    m = np.eye(l, dtype=np.int64)
    for i in word:
        m = m @ simple_reflection(data, i).matrix
    return WeylOperator(matrix=m, word=tuple(word))


def coxeter_operator(data):
    """The Coxeter element s = s_1 s_2 ... s_l acting on h."""
    return weyl_word(data, tuple(range(data.rank)))


def coxeter_word_inverse(data):
    return tuple(reversed(range(data.rank)))


def longest_word(data):
    """Staircase reduced word for the longest element of A_l."""
    word = []
    for k in range(data.rank):
        word.extend(range(k, -1, -1))
    return tuple(word)


def weyl_unitarity_residual(data, op):
    """|w* w - 1| with the adjoint taken w.r.t. form_h; exact integer check."""
    b = as_fraction_matrix(data.form_h)
    m = as_fraction_matrix(op.matrix)
    gram = m.T @ b @ m
    diff = gram - b
    return max(abs(x) for x in diff.flat)


def simple_representative(l, i):
    m = np.eye(l + 1, dtype=np.int64)
    m[i, i] = 0
    m[i + 1, i + 1] = 0
    m[i, i + 1] = 1
    m[i + 1, i] = -1
    return m


def representative(data, word, label=None):
    """Unimodular representative of a Weyl word in SL(l+1)."""
    l = data.rank
    m = np.eye(l + 1, dtype=np.int64)
    for i in word:
        m = m @ simple_representative(l, i)
    return GroupRepresentative(matrix=m, label=label or "".join(str(i + 1) for i in word))


def representative_permutation(rep):
    """Underlying permutation: perm[j] = row of the nonzero entry in column j."""
    m = rep.matrix if isinstance(rep, GroupRepresentative) else rep
    n = m.shape[0]
    perm = []
    for j in range(n):
        rows = [i for i in range(n) if m[i, j] != 0]
        if len(rows) != 1:
            raise ValueError("matrix is not monomial")
        perm.append(rows[0])
    return perm


def conjugate_diag_action(data, rep):
    """Action of Ad(rep) on coroot coordinates; must equal the Weyl operator."""
    l = data.rank
    rinv = np.array(exact_inv(rep.matrix), dtype=object)
    cols = []
    for i in range(l):
        h = np.zeros((l + 1, l + 1), dtype=object)
        h[i, i] = Fraction(1)
        h[i + 1, i + 1] = Fraction(-1)
        conj = rep.matrix @ h @ rinv
        diag = [conj[k, k] for k in range(l + 1)]
        coords = [sum(diag[: k + 1], Fraction(0)) for k in range(l)]
        cols.append(coords)
    return np.array(cols, dtype=object).T


def bruhat_permutation(g):
    """Bruhat cell of g relative to the upper Borel, as a permutation.

    perm[j] = i iff the normal form n1 w h n2 has its (i, j) pivot there;
    computed from exact ranks of the lower-left submatrices.
    """
    a = as_fraction_matrix(g)
    n = a.shape[0]

    def r(i, j):
        # rank of rows i..n-1, columns 0..j of g
        if i >= n or j < 0:
            return 0
        return exact_rank(a[i:, : j + 1])

    perm = [None] * n
    for j in range(n):
        for i in range(n):
            if r(i, j) - r(i + 1, j) - r(i, j - 1) + r(i + 1, j - 1) == 1:
                perm[j] = i
                break
    if any(p is None for p in perm):
        raise BruhatCellError("could not determine the Bruhat permutation")
    return perm


def bruhat_torus_part(g, rep):
    """Torus part h of the normal form g = n1 * rep * h * n2, exact.

    Raises BruhatCellError when g is not in the cell of rep's permutation.
    Row operations add lower rows to upper rows (left factor n1 in N) and
    column operations add earlier columns to later ones (right factor n2).
    """
    u = as_fraction_matrix(g)
    n = u.shape[0]
    perm = representative_permutation(rep)
    for j in range(n):
        r = perm[j]
        if u[r, j] == 0:
            raise BruhatCellError(f"zero pivot at ({r}, {j}); not in the cell")
        for i in range(r):
            if u[i, j] != 0:
                factor = u[i, j] / u[r, j]
                u[i, :] = u[i, :] - factor * u[r, :]
        for k in range(j + 1, n):
            if u[r, k] != 0:
                factor = u[r, k] / u[r, j]
                u[:, k] = u[:, k] - factor * u[:, j]
    # u must now be exactly rep * h
    winv = np.array(exact_inv(rep.matrix), dtype=object)
    wh = winv @ u
    for i in range(n):
        for j in range(n):
            if i != j and wh[i, j] != 0:
                raise BruhatCellError("residual off-diagonal entries; not in the cell")
    return np.array([wh[i, i] for i in range(n)], dtype=object)


def in_cell_NwN(g, rep):
    """Exact membership test g in N * rep * N."""
    try:
        if bruhat_permutation(g) != representative_permutation(rep):
            return False
        h = bruhat_torus_part(g, rep)
    except BruhatCellError:
        return False
    return all(x == 1 for x in h)


def tau_index(data, i):
    """tau(alpha_i) = -w0(alpha_i) = alpha_{l+1-i} for type A (0-based)."""
    return data.rank - 1 - i


def build_f_element(data):
    """Element f = w0 x w0^{-1} in (N s^{-1} N) intersect lower unipotents.

    x = u_l u_{l-1} ... u_1 with u_i = exp(c_i e_{tau(alpha_i)}); each sign
    c_i in {+1, -1} is fixed by the cell condition w0 u_i w0^{-1} in N s_i N,
    and the assembled f is verified to lie in N s^{-1} N exactly.
    """
    l = data.rank
    w0 = representative(data, longest_word(data), label="w0")
    w0_inv = np.array(as_fraction_matrix(np.array(exact_inv(w0.matrix), dtype=object)), dtype=object)

    signs = []
    factors = []
    for i in range(l):
        j = tau_index(data, i)
        s_i = representative(data, (i,), label=f"s{i + 1}")
        chosen = None
        for c in (1, -1):
            u = np.eye(l + 1, dtype=object)
            u = as_fraction_matrix(u)
            u[j, j + 1] = Fraction(c)
            conj = w0.matrix @ u @ w0_inv
            if in_cell_NwN(conj, s_i):
                chosen = (c, conj)
                break
        if chosen is None:
            raise BruhatCellError(
                f"no sign for u_{i + 1} satisfies the N s_i N condition"
            )
        signs.append(chosen[0])
        factors.append(chosen[1])

    # f = w0 (u_l ... u_1) w0^{-1} = prod_i w0 u_i w0^{-1}, i descending
    f = as_fraction_matrix(np.eye(l + 1, dtype=np.int64))
    for conj in reversed(factors):
        f = f @ conj

    f_int = np.array([[int(x) for x in row] for row in f], dtype=np.int64)
    if np.any(np.triu(f_int, 1) != 0) or np.any(np.diag(f_int) != 1):
        raise BruhatCellError("constructed f is not lower unipotent")
    s_inv = representative(data, coxeter_word_inverse(data), label="s^-1")
    if not in_cell_NwN(f_int, s_inv):
        raise BruhatCellError("constructed f is not in N s^{-1} N")
    return GroupRepresentative(matrix=f_int, label="f"), tuple(signs)


def coxeter_negative_root_count(data):
    """Number of positive roots sent to negative ones by the Coxeter element.

    This is dim N' for N' = {v in N : s v s^{-1} in lower unipotents}.
    """
    l = data.rank
    s_rep = representative(data, tuple(range(l)), label="s")
    s_inv = np.array(exact_inv(s_rep.matrix), dtype=object)
    count = 0
    positions = []
    for i in range(l + 1):
        for j in range(i + 1, l + 1):
            e = as_fraction_matrix(np.zeros((l + 1, l + 1), dtype=np.int64))
            e[i, j] = Fraction(1)
            conj = s_rep.matrix @ e @ s_inv
            nz = [(a, b) for a in range(l + 1) for b in range(l + 1) if conj[a, b] != 0]
            if len(nz) != 1:
                raise ValueError("root vector conjugate is not a single unit")
            a, b = nz[0]
            if a > b:
                count += 1
                positions.append((i, j))
    return count, positions
