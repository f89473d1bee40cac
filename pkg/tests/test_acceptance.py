"""Acceptance gate: every criterion at its pinned tolerance.

The whole battery is produced by a single deterministic suite run; each
criterion asserts its checks and prints one pass/fail line.
"""

import pytest

from poissonlie.report import SuiteConfig, run_suite

CRITERIA = {
    1: ("mCYBE incl. corrupted control", ["mcybe_coxeter", "mcybe_corrupted_control"]),
    2: (
        "half-operator structure suite",
        ["bd_homomorphisms", "bd_theta_r_unitary", "bd_borel_membership"],
    ),
    3: (
        "Jacobi identities (group and double brackets)",
        ["jacobi_reduced_bracket", "jacobi_heisenberg_bracket"],
    ),
    4: (
        "reduction consistency",
        ["reduction_consistency_plain", "reduction_consistency_twisted"],
    ),
    5: (
        "twisted factorization",
        [
            "factorization_reassembly",
            "factorization_cartan_exponent",
            "factorization_uniqueness",
        ],
    ),
    6: (
        "first-class constraints",
        ["first_class_level_set", "first_class_generic_control"],
    ),
    7: ("dual pair", ["dual_pair_invariants"]),
    8: ("K equation, finite and mode forms", ["k_finite_equation", "k_mode_equation"]),
    9: ("A equation / Poisson isomorphism", ["a_equation", "iso_bracket_transport"]),
    10: (
        "theta kernel match and functional equation",
        ["theta_fourier_match", "theta_functional_equation"],
    ),
    11: ("slice dimension and trivial brackets", ["slice_dimension", "slice_reduced_brackets"]),
    12: ("exponential pullback identity", ["anz_pullback"]),
}


@pytest.fixture(scope="module")
def suite_report():
    return run_suite(SuiteConfig(rank=2, p=0.1, modes=32, seed=42))


@pytest.fixture(scope="module")
def checks_by_name(suite_report):
    return {c.name: c for c in suite_report.checks}


@pytest.mark.parametrize("number", sorted(CRITERIA))
def test_criterion(number, checks_by_name):
    label, names = CRITERIA[number]
    results = [checks_by_name[name] for name in names]
    ok = all(c.passed for c in results)
    detail = "; ".join(
        f"{c.name} residual={c.residual:.3e} "
        f"{'<=' if c.direction == 'below' else '>'} {c.tolerance:.0e}"
        for c in results
    )
    print(f"{'PASS' if ok else 'FAIL'} criterion {number:2d} [{label}]: {detail}")
    for c in results:
        assert c.passed, f"criterion {number} [{label}]: {c.name} at {c.residual:.3e}"


def test_all_checks_covered(suite_report):
    covered = {name for _, names in CRITERIA.values() for name in names}
    missing = [c.name for c in suite_report.checks if c.name not in covered]
    assert not missing, f"suite checks not owned by a criterion: {missing}"
