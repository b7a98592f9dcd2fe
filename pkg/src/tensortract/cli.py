"""Command-line front end and all file emission.

Subcommands: eigs, oracle-eigs, complexity, classify, density, verify-reduction,
reproduce.  Numbers are serialized with 17 significant digits so emitted
tables round-trip exactly; identical configurations produce byte-identical
output files.  Exit codes: 0 success, 2 invalid arguments, 3 resource guard,
4 acceptance/verification failure.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

import numpy as np
import scipy.integrate

from .complexity import (ComplexityQuery, check_goodcase_sobolev_min, classify,
                         count_info_complexity_all)
from .eigensolve import (family_eigenpair, family_eigenvalues, family_spectrum,
                         sobolev_min_eigenpair)
from .errors import (DomainError, NumericError, ParameterError,
                     ResourceLimitError, TruncationError)
from .nystrom import midpoint_grid, nystrom_spectrum, richardson_refine
from .reduction import (load_problem, random_problem, top_eigenpair,
                        verify_domination, verify_e0_characterization)
from .spectra import KernelSpec
from .svgplot import line_plot_svg

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_RESOURCE = 3
EXIT_FAILURE = 4

_DENSITY_QUAD_NODES = 1025


def _fmt(v) -> str:
    if isinstance(v, bool):
        return str(v).lower()
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, float):
        return format(v, ".17g")
    return str(v)


def _write_csv(path, header, rows) -> None:
    with open(path, "w", newline="\n") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(_fmt(v) for v in row) + "\n")


def _write_json(path, obj) -> None:
    with open(path, "w", newline="\n") as fh:
        fh.write(json.dumps(obj, indent=2, sort_keys=True) + "\n")


def _emit(args, header, rows, payload) -> None:
    """Write rows as CSV or the payload as JSON, to --out or stdout."""
    fmt = args.format or "csv"
    if fmt == "svg":
        raise ParameterError("svg output is only produced by the density command")
    if args.out:
        if fmt == "json":
            _write_json(args.out, payload)
        else:
            _write_csv(args.out, header, rows)
    else:
        if fmt == "json":
            print(json.dumps(payload, indent=2, sort_keys=True))
        else:
            print(",".join(header))
            for row in rows:
                print(",".join(_fmt(v) for v in row))


def _family_spec(args) -> KernelSpec:
    return KernelSpec(
        family=args.family,
        alpha=getattr(args, "alpha", None),
        beta=getattr(args, "beta", None),
        a=getattr(args, "anchor", None),
    )


# ---------------------------------------------------------------------------
# density helpers (shared with the acceptance suite)
# ---------------------------------------------------------------------------

def density_profile(samples: int):
    """Grid values of g_1 = lambda_1^(-1/2) eta_1 for the min-kernel Sobolev
    family, plus the composite-Simpson check of int g_1^2 over [0, 1]."""
    if samples < 2:
        raise ParameterError("need at least two sample points")
    pair = sobolev_min_eigenpair(1)
    scale = 1.0 / math.sqrt(pair.value)
    xs = np.linspace(0.0, 1.0, samples)
    ys = scale * pair.func(xs)
    qx = np.linspace(0.0, 1.0, _DENSITY_QUAD_NODES)
    integral = float(scipy.integrate.simpson((scale * pair.func(qx)) ** 2, x=qx))
    return xs, ys, integral


def density_svg(xs, ys) -> str:
    return line_plot_svg(xs, ys, title="unit-norm density matching the initial error",
                         xlabel="x", ylabel="g1")


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def cmd_eigs(args) -> int:
    spec = _family_spec(args)
    seq = family_eigenvalues(spec, args.count)
    pairs = [family_eigenpair(spec, j) for j in range(1, args.count + 1)]
    keys = sorted(pairs[0].params)
    header = ["j", "lambda"] + keys
    rows = [[p.index, p.value] + [p.params[k] for k in keys] for p in pairs]
    payload = {
        "family": spec.label(),
        "exact_decay": seq.exact_decay,
        "eigenpairs": [dict(zip(header, row)) for row in rows],
    }
    _emit(args, header, rows, payload)
    return EXIT_OK


def cmd_oracle_eigs(args) -> int:
    spec = _family_spec(args)
    if args.refine:
        sizes = [int(s) for s in args.refine.split(",")]
        refined = richardson_refine(spec, args.count, sizes)
        values = refined.eigensequence.values
        errs = refined.error_estimates
        header = ["j", "lambda", "error_estimate"]
        rows = [[j + 1, float(v), float(e)] for j, (v, e) in enumerate(zip(values, errs))]
    else:
        seq = nystrom_spectrum(spec, midpoint_grid(args.grid_size), args.count)
        header = ["j", "lambda"]
        rows = [[j + 1, float(v)] for j, v in enumerate(seq.values)]
    payload = {"family": spec.label(), "grid_size": args.grid_size,
               "refine": args.refine or None,
               "eigenvalues": [dict(zip(header, row)) for row in rows]}
    _emit(args, header, rows, payload)
    return EXIT_OK


def _eigenvalues_for_budget(spec: KernelSpec, eps: float) -> "EigenSequence":
    """Grow the analytic eigenvalue list until the counting budget is covered."""
    budget = 2.0 * math.log(1.0 / eps)
    count = 64
    while True:
        seq = family_eigenvalues(spec, count)
        w_last = math.log(seq.values[0]) - math.log(seq.values[-1]) if seq.values[-1] > 0 else math.inf
        if w_last >= budget or seq.is_exhaustive:
            return seq
        if count > 2 ** 21:
            raise ResourceLimitError("eps requires more than 2^21 univariate eigenvalues")
        count *= 2


def cmd_complexity(args) -> int:
    spec = _family_spec(args)
    eigs = _eigenvalues_for_budget(spec, args.eps)
    query = ComplexityQuery(eps=args.eps, d=args.d, info_class=args.info_class)
    result = count_info_complexity_all(eigs, query)
    header = ["family", "d", "eps", "info_class", "count", "saturated",
              "lower_bound_only", "truncation_index", "tie_tolerance", "method"]
    row = [spec.label(), args.d, args.eps, args.info_class, result.count,
           result.saturated, result.lower_bound_only, result.truncation_index,
           result.tie_tolerance, result.method]
    payload = dict(zip(header, row))
    _emit(args, header, [row], payload)
    return EXIT_OK


def cmd_classify(args) -> int:
    spec = _family_spec(args)
    spectrum = family_spectrum(spec, 8, pairs=1)
    lam = spectrum.eigensequence.values
    decay = spectrum.eigensequence.exact_decay
    goodcase = None
    if spec.family == "sobolev-min":
        goodcase = check_goodcase_sobolev_min(spectrum.eigenpairs[0])
    report = classify(float(lam[0]), float(lam[1]), decay, goodcase)
    payload = {
        "family": spec.label(),
        "lambda1": report.lambda1,
        "lambda2": report.lambda2,
        "decay": report.decay,
        "qpt_exponent": report.qpt_exponent,
        "classification_all": report.classification_all,
        "classification_std": report.classification_std,
        "goodcase_holds": report.goodcase_holds,
        "notes": "classifications state proven rules only; finite-d counts are "
                 "evidence, never proof, and conjectured cases report 'unknown'",
    }
    header = list(payload)
    _emit(args, header, [[payload[k] for k in header]], payload)
    return EXIT_OK


def cmd_density(args) -> int:
    if args.family != "sobolev-min":
        raise ParameterError("the density command supports the sobolev-min family only")
    xs, ys, integral = density_profile(args.samples)
    stem = Path(args.out) if args.out else Path("density")
    if stem.suffix in (".csv", ".svg", ".json"):
        stem = stem.with_suffix("")
    csv_path = stem.with_suffix(".csv")
    svg_path = stem.with_suffix(".svg")
    _write_csv(csv_path, ["x", "g1"], [[float(x), float(y)] for x, y in zip(xs, ys)])
    with open(svg_path, "w", newline="\n") as fh:
        fh.write(density_svg(xs, ys))
    summary = {"csv": str(csv_path), "svg": str(svg_path),
               "unit_mass_check": integral, "unit_mass_defect": abs(integral - 1.0),
               "samples": int(args.samples)}
    print(json.dumps(summary, indent=2, sort_keys=True))
    return EXIT_OK


def cmd_verify_reduction(args) -> int:
    rng = np.random.default_rng(args.seed)
    reports = []
    failures = 0
    if args.problem:
        problems = [(0, load_problem(args.problem))]
    else:
        problems = []
        for i in range(args.problems):
            m = int(rng.integers(2, args.m_max + 1))
            k = int(rng.integers(1, args.k_max + 1))
            problems.append((i, random_problem(seed=args.seed + 17 * i + 1, m=m, k=k)))
    for i, problem in problems:
        lam1, eta1, _ = top_eigenpair(problem)
        g = (problem.operator_S @ eta1) / math.sqrt(lam1)
        n = int(rng.integers(0, args.max_n + 1))
        dom = verify_domination(problem, g, n=n, trials=args.trials,
                                seed=args.seed + 31 * i)
        char = verify_e0_characterization(problem, samples=args.samples,
                                          seed=args.seed + 53 * i)
        failures += (not dom.passed) + (not char.passed)
        reports.append({
            "instance": i, "m": problem.m, "k": problem.k, "n": n,
            "domination_passed": dom.passed,
            "e_n_functional": dom.e_n_functional,
            "e_n_operator": dom.e_n_operator,
            "max_pointwise_excess": dom.max_pointwise_excess,
            "characterization_passed": char.passed,
            "multiplicity": char.multiplicity,
            "max_achiever_distance": char.max_achiever_distance,
        })
    payload = {"instances": len(reports), "failures": failures, "reports": reports}
    if args.out:
        _write_json(args.out, payload)
    else:
        print(json.dumps(payload, indent=2, sort_keys=True))
    return EXIT_OK if failures == 0 else EXIT_FAILURE


def cmd_reproduce(args) -> int:
    from . import acceptance

    only = set(args.only.split(",")) if args.only else None
    if only is not None:
        unknown = only - set(acceptance.CRITERIA)
        if unknown:
            raise ParameterError(f"unknown criterion ids: {sorted(unknown)}")
    rows = acceptance.run_all(only=only, fail=args.fail)
    header = ["criterion_id", "description", "expected", "computed", "tolerance", "pass"]
    table = [[r.criterion_id, r.description, r.expected, r.computed, r.tolerance, r.passed]
             for r in rows]
    payload = [{"criterion_id": r.criterion_id, "description": r.description,
                "expected": r.expected, "computed": r.computed,
                "tolerance": r.tolerance, "pass": r.passed} for r in rows]
    if args.out:
        if (args.format or "json") == "json":
            _write_json(args.out, payload)
        else:
            _write_csv(args.out, header, table)
    status_width = max(len(r.description) for r in rows)
    for r in rows:
        mark = "PASS" if r.passed else "FAIL"
        print(f"[{mark}] {r.criterion_id:>4}  {r.description:<{status_width}}  "
              f"computed={_fmt(r.computed)} expected={_fmt(r.expected)} tol={_fmt(r.tolerance)}")
    failed = [r for r in rows if not r.passed]
    print(f"{len(rows) - len(failed)}/{len(rows)} checks passed")
    return EXIT_OK if not failed else EXIT_FAILURE


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tensortract",
        description="eigenvalues, information complexity, and tractability "
                    "classification for tensor-product problems on "
                    "reproducing-kernel Hilbert spaces")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, family=True):
        p.add_argument("--out", default=None, help="output path")
        p.add_argument("--format", choices=["csv", "json", "svg"], default=None)
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--config", default=None,
                       help="flat key=value file supplying defaults (flags win)")
        if family:
            p.add_argument("--family", default="sobolev-min",
                           choices=["sobolev-min", "sobolev-cosh", "korobov",
                                    "sobolev-distance", "brownian-min"])
            p.add_argument("--alpha", type=float, default=None)
            p.add_argument("--beta", type=float, default=None)
            p.add_argument("--anchor", type=float, default=None,
                           help="anchor a for the sobolev-distance family")

    p = sub.add_parser("eigs", help="analytic eigenpairs of a family")
    common(p)
    p.add_argument("--count", type=int, default=10)
    p.set_defaults(func=cmd_eigs)

    p = sub.add_parser("oracle-eigs", help="quadrature (Nystrom) spectrum")
    common(p)
    p.add_argument("--count", type=int, default=5)
    p.add_argument("--grid-size", type=int, default=2000)
    p.add_argument("--refine", default=None,
                   help="comma-separated grid sizes for Richardson extrapolation")
    p.set_defaults(func=cmd_oracle_eigs)

    p = sub.add_parser("complexity", help="exact n(eps, S_d) for linear information")
    common(p)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--eps", type=float, required=True)
    p.add_argument("--info-class", choices=["all", "std"], default="all")
    p.set_defaults(func=cmd_complexity)

    p = sub.add_parser("classify", help="tractability classification of a family")
    common(p)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("density", help="unit-norm density matching the initial error")
    common(p)
    p.add_argument("--samples", type=int, default=513)
    p.set_defaults(func=cmd_density)

    p = sub.add_parser("verify-reduction", help="finite-dimensional reduction checks")
    common(p, family=False)
    p.add_argument("--problems", type=int, default=100)
    p.add_argument("--trials", type=int, default=3)
    p.add_argument("--samples", type=int, default=20)
    p.add_argument("--max-n", type=int, default=2)
    p.add_argument("--m-max", type=int, default=6)
    p.add_argument("--k-max", type=int, default=4)
    p.add_argument("--problem", default=None, help="path to a problem file")
    p.set_defaults(func=cmd_verify_reduction)

    p = sub.add_parser("reproduce", help="run the full acceptance suite")
    common(p, family=False)
    p.add_argument("--only", default=None, help="comma-separated criterion ids")
    p.add_argument("--fail", default=None, help=argparse.SUPPRESS)  # test hook
    p.set_defaults(func=cmd_reproduce)
    return parser


def _read_config(path: str) -> list[str]:
    """Flat key=value lines become '--key value' argument pairs."""
    extra: list[str] = []
    with open(path) as fh:
        for raw in fh:
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ParameterError(f"malformed config line: {line!r}")
            key, value = (part.strip() for part in line.split("=", 1))
            extra.extend([f"--{key}", value])
    return extra


def _merge_config(argv: list[str]) -> list[str]:
    if "--config" not in argv:
        return argv
    path = argv[argv.index("--config") + 1]
    extra = _read_config(path)
    # insert config pairs right after the subcommand so explicit flags,
    # which come later, win on conflict
    for i, tok in enumerate(argv):
        if not tok.startswith("-"):
            return argv[:i + 1] + extra + argv[i + 1:]
    return argv + extra


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(_merge_config(argv))
        return args.func(args)
    except (ParameterError, DomainError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ResourceLimitError, TruncationError) as exc:
        print(f"resource limit: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except NumericError as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
