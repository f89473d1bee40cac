"""Command-line driver.

Subcommands:
  verify    run the full verification suite, emit a JSON report
  factor    twisted-factorize a matrix given as JSON rows
  kernel    export mode-kernel or elliptic-kernel samples as CSV
  reduce    reduction diagnostics (level set, first class, dual pair, slice)
  solve-k   print the conjugation operator K as a JSON matrix
  solve-a   print the deformation operator A as a JSON matrix

A flat key = value config file mirrors SuiteConfig; command-line flags
win over the file.  The POISSONLIE_TOL_PROFILE environment variable
(default / strict / relaxed) scales every tolerance.
"""

import argparse
import csv
import json
import sys

import numpy as np

from .factorize import BigCellError, LogBranchError, reassemble, twisted_factorize
from .loopmodes import (
    DilationParam,
    kernel_dilation,
    kernel_drinfeld,
    kernel_theta,
    kernel_to_csv_rows,
    solve_k_modes,
)
from .polyfn import MatrixVars
from .reduction import (
    anz_pullback_residual,
    constraint_system,
    dual_pair_residual,
    first_class_residual,
    sample_slice_domain_point,
    slice_and_miura_check,
    solve_a,
    solve_k_finite,
    synthesize_level_point,
)
from .report import SuiteConfig, dilation_parameter, rmatrix_for, run_suite, theta_operator
from .rmatrix import drinfeld_rmatrix, make_context
from .rootdata import build_type_a, coxeter_operator
from .sampling import random_group_element, rng_from_seed
from .brackets import trace_power_polyfn
from .theta import elliptic_kernel_spec, elliptic_r0_eval


def complex_matrix_json(m):
    return [[[float(z.real), float(z.imag)] for z in row] for row in np.asarray(m, dtype=complex)]


def parse_config_file(path):
    values = {}
    with open(path) as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise SystemExit(f"{path}:{lineno}: expected key = value, got {raw!r}")
            key, val = (part.strip() for part in line.split("=", 1))
            values[key] = val
    return values


def build_config(args):
    base = {}
    overrides = {}
    if getattr(args, "config", None):
        for key, val in parse_config_file(args.config).items():
            if key.startswith("override."):
                overrides[key[len("override."):]] = float(val)
            else:
                base[key] = val
    kwargs = {}
    kwargs["rank"] = int(args.rank if args.rank is not None else base.get("rank", 2))
    kwargs["theta"] = args.theta if getattr(args, "theta", None) else base.get("theta", "coxeter")
    kwargs["p"] = float(args.p if args.p is not None else base.get("p", 0.1))
    kwargs["modes"] = int(args.modes if args.modes is not None else base.get("modes", 32))
    kwargs["seed"] = int(args.seed if args.seed is not None else base.get("seed", 42))
    kwargs["tolerance_scale"] = float(base.get("tolerance_scale", 1.0))
    kwargs["out"] = args.out if getattr(args, "out", None) else base.get("out")
    kwargs["overrides"] = overrides
    try:
        return SuiteConfig(**kwargs).validate()
    except ValueError as exc:
        raise SystemExit(f"config error: {exc}")


def emit(text, out_path):
    if out_path:
        with open(out_path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text + ("" if text.endswith("\n") else "\n"))


def cmd_verify(args):
    config = build_config(args)
    report = run_suite(config)
    emit(report.to_json(), config.out)
    return 0 if report.passed else 1


def cmd_factor(args):
    config = build_config(args)
    if args.matrix:
        with open(args.matrix) as fh:
            rows = json.load(fh)
    else:
        rows = json.load(sys.stdin)
    m = np.array(
        [[complex(x[0], x[1]) if isinstance(x, list) else complex(x) for x in row] for row in rows]
    )
    data = build_type_a(m.shape[0] - 1)
    try:
        ctx = make_context(rmatrix_for(config, data))
    except ValueError as exc:
        raise SystemExit(f"config error: {exc}")
    try:
        fact = twisted_factorize(ctx, m)
    except (BigCellError, LogBranchError) as exc:
        emit(json.dumps({"error": str(exc)}, sort_keys=True), config.out)
        return 1
    payload = {
        "x_cartan": complex_matrix_json(fact.x_cartan),
        "h_plus": complex_matrix_json(fact.h_plus),
        "h_minus": complex_matrix_json(fact.h_minus),
        "n_plus": complex_matrix_json(fact.n_plus),
        "n_minus": complex_matrix_json(fact.n_minus),
        "reassembly_residual": float(np.linalg.norm(reassemble(ctx, fact) - m)),
    }
    emit(json.dumps(payload, sort_keys=True, indent=2), config.out)
    return 0


def cmd_kernel(args):
    config = build_config(args)
    data = build_type_a(config.rank)
    if args.elliptic:
        spec = elliptic_kernel_spec(data, config.p)
        rows = []
        header = ["u"]
        for i in range(config.rank):
            for j in range(config.rank):
                header += [f"re_{i}{j}", f"im_{i}{j}"]
        for k in range(args.samples):
            u = (k + 0.5) / args.samples
            val = elliptic_r0_eval(spec, u)
            row = [u]
            for i in range(config.rank):
                for j in range(config.rank):
                    row += [val[i, j].real, val[i, j].imag]
            rows.append(row)
    else:
        if config.theta == "drinfeld":
            kernel = kernel_drinfeld(config.rank, config.modes)
        elif config.theta.startswith("dilation:"):
            kernel = kernel_dilation(config.rank, dilation_parameter(config), config.modes)
        else:
            theta0 = theta_operator(config, data)
            kernel = kernel_theta(data, theta0, DilationParam(config.p), config.modes)
        header, rows = kernel_to_csv_rows(kernel)
    target = config.out or args.out
    if target:
        with open(target, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(header)
            writer.writerows(rows)
    else:
        writer = csv.writer(sys.stdout)
        writer.writerow(header)
        writer.writerows(rows)
    return 0


def cmd_reduce(args):
    config = build_config(args)
    data = build_type_a(config.rank)
    ctx = make_context(rmatrix_for(config, data)) if config.theta == "coxeter" else None
    if ctx is None:
        raise SystemExit("reduce requires the coxeter twist (theta = coxeter)")
    rng = rng_from_seed(config.seed)
    cs = constraint_system(ctx)
    level_points = [synthesize_level_point(cs, rng) for _ in range(10)]
    first_class = max(first_class_residual(cs, p) for p in level_points)
    v = MatrixVars(config.rank + 1)
    invariants = [trace_power_polyfn(v, k) for k in range(2, config.rank + 2)]
    dual_pair = 0.0
    for _ in range(10):
        x = random_group_element(rng, config.rank + 1)
        for phi in invariants:
            dual_pair = max(dual_pair, dual_pair_residual(cs, phi, x, v))
    slice_rep = slice_and_miura_check(ctx, sample_slice_domain_point(data, rng))
    k_op = solve_k_finite(data)
    ctx_d = make_context(drinfeld_rmatrix(data))
    anz = max(
        anz_pullback_residual(ctx_d, k_op, random_group_element(rng, config.rank + 1))
        for _ in range(5)
    )
    payload = {
        "rank": config.rank,
        "seed": config.seed,
        "first_class_residual": first_class,
        "dual_pair_residual": dual_pair,
        "slice": {
            "converged": slice_rep.converged,
            "newton_residual": slice_rep.newton_residual,
            "nprime_dimension": slice_rep.nprime_dimension,
            "max_reduced_bracket": slice_rep.max_reduced_bracket,
        },
        "anz_pullback_residual": anz,
    }
    emit(json.dumps(payload, sort_keys=True, indent=2), config.out)
    return 0


def cmd_solve_k(args):
    config = build_config(args)
    data = build_type_a(config.rank)
    k = solve_k_finite(data)
    payload = {
        "matrix": complex_matrix_json(k.matrix),
        "equation_residual": k.equation_residual,
        "commutation_residual": k.commutation_residual,
    }
    if args.affine:
        s = coxeter_operator(data).matrix.astype(complex)
        result = solve_k_modes(data, s, DilationParam(config.p), config.modes)
        payload["mode_residual"] = result.residual
        payload["modes"] = {
            str(n): complex_matrix_json(result.kernel.coefficient(n))
            for n in range(-4, 5)
        }
    emit(json.dumps(payload, sort_keys=True, indent=2), config.out)
    return 0


def cmd_solve_a(args):
    config = build_config(args)
    data = build_type_a(config.rank)
    s = coxeter_operator(data).matrix.astype(complex)
    if args.theta_prime == "square":
        theta_prime = s @ s
    elif args.theta_prime == "negative":
        theta_prime = -np.eye(config.rank, dtype=complex)
    else:
        raise SystemExit(f"unknown theta-prime selector {args.theta_prime!r}")
    p = DilationParam(config.p) if args.affine else None
    a = solve_a(data, s, theta_prime, p=p, truncation=min(config.modes, 16))
    payload = {
        "matrix": complex_matrix_json(a.matrix),
        "equation_residual": a.equation_residual,
    }
    emit(json.dumps(payload, sort_keys=True, indent=2), config.out)
    return 0


def make_parser():
    parser = argparse.ArgumentParser(
        prog="poissonlie",
        description="verification suites for factorizable r-matrix structures on SL(l+1)",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--rank", type=int, default=None)
        p.add_argument("--p", type=float, default=None)
        p.add_argument("--modes", type=int, default=None)
        p.add_argument("--seed", type=int, default=None)
        p.add_argument("--theta", default=None, help="coxeter | dilation:<u> | drinfeld")
        p.add_argument("--config", default=None, help="flat key = value file")
        p.add_argument("--out", default=None)

    p_verify = sub.add_parser("verify", help="run the full verification suite")
    common(p_verify)
    p_verify.set_defaults(func=cmd_verify)

    p_factor = sub.add_parser("factor", help="twisted-factorize a JSON matrix")
    common(p_factor)
    p_factor.add_argument("--matrix", default=None, help="JSON rows file (default: stdin)")
    p_factor.set_defaults(func=cmd_factor)

    p_kernel = sub.add_parser("kernel", help="export kernel samples as CSV")
    common(p_kernel)
    p_kernel.add_argument("--elliptic", action="store_true", help="sample the elliptic kernel")
    p_kernel.add_argument("--samples", type=int, default=64)
    p_kernel.set_defaults(func=cmd_kernel)

    p_reduce = sub.add_parser("reduce", help="reduction diagnostics")
    common(p_reduce)
    p_reduce.set_defaults(func=cmd_reduce)

    p_k = sub.add_parser("solve-k", help="print the conjugation operator")
    common(p_k)
    p_k.add_argument("--affine", action="store_true")
    p_k.set_defaults(func=cmd_solve_k)

    p_a = sub.add_parser("solve-a", help="print the deformation operator")
    common(p_a)
    p_a.add_argument("--affine", action="store_true")
    p_a.add_argument("--theta-prime", default="square", choices=("square", "negative"))
    p_a.set_defaults(func=cmd_solve_a)

    return parser


def main(argv=None):
    args = make_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
