"""Seeded random samples used by the verification suites.

Group elements are exponentials of random traceless matrices with entries
uniform in a centered complex unit square, then determinant-normalized;
moderate scales keep samples inside the big cell and the principal-log
domain with high probability.
"""

import numpy as np
from scipy.linalg import expm

from . import algebra


def rng_from_seed(seed):
    return np.random.default_rng(seed)


def random_complex(rng, shape, scale=1.0):
    return scale * (
        (rng.uniform(-0.5, 0.5, size=shape)) + 1j * (rng.uniform(-0.5, 0.5, size=shape))
    )


def random_traceless(rng, n, scale=1.0):
    x = random_complex(rng, (n, n), scale)
    return algebra.traceless(x)


def random_group_element(rng, n, scale=0.5):
    g = expm(random_traceless(rng, n, scale))
    det = np.linalg.det(g)
    return g / det ** (1.0 / n)


def random_upper_unipotent(rng, n, scale=0.5):
    u = np.eye(n, dtype=complex)
    u += np.triu(random_complex(rng, (n, n), scale), 1)
    return u


def random_lower_unipotent(rng, n, scale=0.5):
    u = np.eye(n, dtype=complex)
    u += np.tril(random_complex(rng, (n, n), scale), -1)
    return u


def random_torus_element(rng, l, scale=0.5):
    coords = random_complex(rng, (l,), scale)
    return algebra.exp_h(algebra.coords_to_h(coords))


def random_cartan_coords(rng, l, scale=0.5):
    return random_complex(rng, (l,), scale)


def random_quadratic_polyfn(rng, vars_, slots=None, terms=2):
    """Random quadratic matrix-coefficient function: sums of entry products."""
    from .polyfn import PolyFn

    n = vars_.n
    slot_list = range(vars_.slots) if slots is None else slots
    slot_list = list(slot_list)
    fn = PolyFn()
    for _ in range(terms):
        s1, s2 = rng.choice(slot_list), rng.choice(slot_list)
        i1, j1 = rng.integers(0, n, 2)
        i2, j2 = rng.integers(0, n, 2)
        coeff = random_complex(rng, ())
        fn = fn + vars_.entry(i1, j1, s1) * vars_.entry(i2, j2, s2) * coeff
    return fn


def random_linear_polyfn(rng, vars_, slots=None, terms=2):
    from .polyfn import PolyFn

    n = vars_.n
    slot_list = range(vars_.slots) if slots is None else slots
    slot_list = list(slot_list)
    fn = PolyFn()
    for _ in range(terms):
        s = rng.choice(slot_list)
        i, j = rng.integers(0, n, 2)
        fn = fn + vars_.entry(i, j, s) * random_complex(rng, ())
    return fn
