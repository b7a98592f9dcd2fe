"""Reproduction suite: one pass/fail row per headline number or property.

Each criterion recomputes its quantities from scratch through the public
modules and compares against either a fixed reference constant, an
independently derived value, or an exact combinatorial oracle.  The
``fail`` hook perturbs the computed values of one criterion so the harness
itself can be shown to detect failures.
"""

from __future__ import annotations

import math
import tempfile
from dataclasses import dataclass
from pathlib import Path

import numpy as np
import scipy.integrate

from .cli import density_profile, main as cli_main
from .complexity import (ComplexityQuery, brute_force_count,
                         check_goodcase_sobolev_min, classify,
                         count_info_complexity_all, estimate_decay,
                         initial_error_ratio_integration, qpt_exponent)
from .eigensolve import (family_eigenvalues, korobov_eigenvalues,
                         sobolev_cosh_eigenvalues, sobolev_min_eigenpair,
                         sobolev_min_eigenvalues, solve_cot_root)
from .nystrom import midpoint_grid, nystrom_spectrum, richardson_refine
from .reduction import (piecewise_constant_instance, cube_mean_functional,
                        minimal_error_std, random_problem,
                        random_problem_with_multiplicity, verify_domination,
                        verify_e0_characterization)
from .spectra import Eigenpair, KernelSpec, kernel_eval

# Published reference digits (truncated decimals, hence the loose tolerances).
LAMBDA1_MIN_KERNEL = 1.35103388
LAMBDA2_MIN_KERNEL = 0.08521617
LAMBDA2_COSH = 0.091999668
RATIO_BASE = 1.01327541   # lambda_1 / (4/3), from the digits above


@dataclass
class CriterionRow:
    criterion_id: str
    description: str
    expected: object
    computed: object
    tolerance: object
    passed: bool


def _close(cid, desc, expected, computed, tol, perturb) -> CriterionRow:
    computed = float(computed)
    if perturb:
        computed += 137.0 * max(float(tol), 1e-9)
    return CriterionRow(cid, desc, float(expected), computed, float(tol),
                        abs(computed - float(expected)) <= float(tol))


def _equal(cid, desc, expected, computed, perturb) -> CriterionRow:
    if perturb:
        computed = computed + 1 if isinstance(computed, int) else f"{computed}-perturbed"
    return CriterionRow(cid, desc, expected, computed, "exact", computed == expected)


def _at_least(cid, desc, bound, computed, perturb) -> CriterionRow:
    if perturb:
        computed = bound - 1
    return CriterionRow(cid, desc, bound, computed, ">=", computed >= bound)


def _flag(cid, desc, ok, perturb) -> CriterionRow:
    if perturb:
        ok = not ok
    return CriterionRow(cid, desc, True, bool(ok), "exact", bool(ok))


# ---------------------------------------------------------------------------
# criteria
# ---------------------------------------------------------------------------

def c01_min_kernel_eigenvalues(perturb=False):
    return [
        _close("1", "sobolev-min lambda_1 = alpha_1^-2", LAMBDA1_MIN_KERNEL,
               solve_cot_root(1) ** -2, 1e-7, perturb),
        _close("1", "sobolev-min lambda_2 = alpha_2^-2", LAMBDA2_MIN_KERNEL,
               solve_cot_root(2) ** -2, 1e-7, perturb),
    ]


def c02_oracle_agreement(perturb=False):
    rows = []
    specs = [KernelSpec("sobolev-min"), KernelSpec("sobolev-cosh"),
             KernelSpec("korobov", alpha=1.0, beta=0.5)]
    grid = midpoint_grid(2000)
    for spec in specs:
        analytic = family_eigenvalues(spec, 5).values
        numeric = nystrom_spectrum(spec, grid, 5).values
        rel = float(np.max(np.abs(numeric - analytic) / analytic))
        rows.append(_close("2", f"oracle vs analytic, first 5 ({spec.label()})",
                           0.0, rel, 1e-3, perturb))
    refined = richardson_refine(KernelSpec("sobolev-min"), 2, [500, 1000, 2000])
    lam = sobolev_min_eigenvalues(2).values
    rows.append(_close("2", "richardson-refined sobolev-min lambda_1",
                       lam[0], refined.eigensequence.values[0], 1e-5, perturb))
    rows.append(_close("2", "richardson-refined sobolev-min lambda_2",
                       lam[1], refined.eigensequence.values[1], 1e-5, perturb))
    gate = richardson_refine(KernelSpec("sobolev-cosh"), 3, [500, 1000, 2000])
    rows.append(_close("2", "cosh rule gate: refined lambda_3 vs 1/(1+4 pi^2)",
                       1.0 / (1.0 + 4.0 * math.pi ** 2),
                       gate.eigensequence.values[2], 1e-5, perturb))
    return rows


def c03_cosh_lambda2(perturb=False):
    return [_close("3", "cosh-kernel lambda_2 = 1/(1+pi^2)", LAMBDA2_COSH,
                   sobolev_cosh_eigenvalues(2).values[1], 1e-9, perturb)]


def c04_qpt_exponent(perturb=False):
    lam = sobolev_min_eigenvalues(2).values
    rows = [_close("4", "sobolev-min QPT exponent t* = 1", 1.0,
                   qpt_exponent(lam[0], lam[1], 2.0), 0.0, perturb)]
    for alpha, beta in [(1.0, math.exp(-1.0)), (2.0, 0.5), (0.75, 0.9),
                        (1.5, 0.1), (1.0, 0.25)]:
        expected = max(1.0 / alpha, 2.0 / math.log(1.0 / beta))
        computed = qpt_exponent(1.0, beta, 2.0 * alpha)
        rows.append(_close("4", f"korobov t* (alpha={alpha:g}, beta={beta:g})",
                           expected, computed, 1e-12, perturb))
    return rows


def _counting_cases(n_cases=102, seed=20260808):
    rng = np.random.default_rng(seed)
    sob = sobolev_min_eigenvalues(60)
    cosh = sobolev_cosh_eigenvalues(60)
    eps_grid = np.round(np.arange(1, 10) * 0.1, 1)
    for i in range(n_cases):
        which = i % 3
        if which == 0:
            eigs = sob
        elif which == 1:
            eigs = cosh
        else:
            alpha = float(rng.uniform(0.8, 2.5))
            beta = 1.0 if rng.random() < 0.2 else float(rng.uniform(0.05, 1.0))
            eigs = korobov_eigenvalues(alpha, beta, 140)
        d = int(rng.integers(1, 5))
        eps = float(rng.choice(eps_grid))
        yield eigs, ComplexityQuery(eps=eps, d=d)


def c05_counting_equivalence(perturb=False):
    mismatches = 0
    cases = 0
    for eigs, query in _counting_cases():
        cases += 1
        fast = count_info_complexity_all(eigs, query)
        slow = brute_force_count(eigs, query)
        if fast.count != slow.count:
            mismatches += 1
    return [
        _at_least("5", "randomized counting cases run", 100, cases, perturb),
        _equal("5", "dfs-multiset vs direct-enum mismatches", 0, mismatches, perturb),
    ]


def c06_curse_lower_bound(perturb=False):
    eigs = korobov_eigenvalues(1.0, 1.0, 64)
    worst_ratio = math.inf
    for d in range(1, 13):
        for eps in (0.1, 0.5, 0.9):
            res = count_info_complexity_all(eigs, ComplexityQuery(eps=eps, d=d))
            worst_ratio = min(worst_ratio, res.count / 2 ** d)
    return [CriterionRow("6", "korobov beta=1: count / 2^d over d<=12, eps in {.1,.5,.9}",
                         1.0, worst_ratio - (2.0 if perturb else 0.0), ">=",
                         worst_ratio - (2.0 if perturb else 0.0) >= 1.0)]


def c07_piecewise_model_closed_form(perturb=False):
    worst_func = 0.0
    worst_op = 0.0
    for d in range(1, 5):
        problem = piecewise_constant_instance(d)
        functional = cube_mean_functional(problem)
        m = 2 ** d
        for n in range(m + 1):
            err, subset = minimal_error_std(problem, functional, n)
            target = math.sqrt(1.0 - n / m)
            worst_func = max(worst_func, abs(err - target))
            if len(set(subset)) != n:
                worst_func = math.inf
        for n in range(m):
            err, _ = minimal_error_std(problem, "operator", n)
            worst_op = max(worst_op, abs(err - 1.0))
        err, _ = minimal_error_std(problem, "operator", m)
        worst_op = max(worst_op, abs(err))
    return [
        _close("7", "mean functional: max |e_n - sqrt(1 - n 2^-d)|, d<=4",
               0.0, worst_func, 1e-12, perturb),
        _close("7", "operator: max |e_n - 1| for n < 2^d (and e_{2^d} = 0), d<=4",
               0.0, worst_op, 1e-12, perturb),
    ]


def c08_domination(perturb=False):
    rng = np.random.default_rng(731)
    violations = 0
    worst_excess = -math.inf
    for i in range(100):
        m = int(rng.integers(2, 7))
        k = int(rng.integers(1, 5))
        n = int(rng.integers(0, 3))
        problem = random_problem(seed=1000 + i, m=m, k=k)
        g = rng.standard_normal(k)
        g /= math.sqrt(float(g @ problem.gram_G @ g))
        report = verify_domination(problem, g, n=n, trials=3, seed=2000 + i)
        worst_excess = max(worst_excess, report.max_pointwise_excess,
                           report.e_n_functional - report.e_n_operator)
        if not report.passed:
            violations += 1
    rows = [_equal("8", "domination counterexamples over 100 random problems",
                   0, violations, perturb)]
    rows.append(_close("8", "largest signed excess of e_n(I_g) over e_n(S)",
                       0.0, max(worst_excess, 0.0), 1e-12, perturb))
    return rows


def c09_e0_characterization(perturb=False):
    failures = 0
    worst_distance = 0.0
    plan = [1] * 7 + [2] * 7 + [4] * 6
    rng = np.random.default_rng(947)
    for i, mult in enumerate(plan):
        m = int(rng.integers(max(mult, 4), 9))
        problem = random_problem_with_multiplicity(seed=3000 + i, m=m, multiplicity=mult)
        report = verify_e0_characterization(problem, samples=30, seed=4000 + i)
        if not report.passed or report.multiplicity != mult:
            failures += 1
        worst_distance = max(worst_distance, report.max_achiever_distance)
    return [
        _equal("9", "characterization failures over 20 instances (mult 1, 2, 4)",
               0, failures, perturb),
        _close("9", "largest G-distance of a maximizer from the predicted set",
               0.0, worst_distance, 1e-6, perturb),
    ]


def c10_initial_error_ratio(perturb=False):
    spec = KernelSpec("sobolev-min")

    def inner(x):
        # split the inner integral at the diagonal kink of the kernel
        val, _ = scipy.integrate.quad(lambda y: kernel_eval(spec, x, y),
                                      0.0, 1.0, points=[x], limit=200,
                                      epsabs=1e-12, epsrel=1e-12)
        return val

    quad, _ = scipy.integrate.quad(inner, 0.0, 1.0, limit=200,
                                   epsabs=1e-12, epsrel=1e-12)
    base = initial_error_ratio_integration(2).ratio
    return [
        _close("10", "e0(INT_1)^2 = integral of the kernel = 4/3",
               4.0 / 3.0, quad, 1e-8, perturb),
        _close("10", "initial-error ratio base lambda_1/(4/3)",
               RATIO_BASE, base, 1e-6, perturb),
    ]


def c11_density_figure(perturb=False):
    xs, ys, integral = density_profile(513)
    direction = 1.0 if ys[-1] > ys[0] else -1.0  # brute-force sign oracle
    monotone = bool(np.all(direction * np.diff(ys) > 0.0))
    with tempfile.TemporaryDirectory() as tmp:
        out = Path(tmp) / "density"
        code1 = cli_main(["density", "--samples", "513", "--out", str(out)])
        first = out.with_suffix(".svg").read_bytes()
        code2 = cli_main(["density", "--samples", "513", "--out", str(out)])
        second = out.with_suffix(".svg").read_bytes()
        identical = code1 == 0 and code2 == 0 and first == second
    return [
        _close("11", "density unit mass: int g_1^2 over [0,1]", 1.0, integral,
               1e-6, perturb),
        _flag("11", "density strictly monotone (direction from sign oracle)",
              monotone, perturb),
        _flag("11", "density SVG byte-identical across runs", identical, perturb),
    ]


def c12_decay_estimation(perturb=False):
    rows = [_close("12", "decay estimate, sobolev-min (window 20..200)", 2.0,
                   estimate_decay(sobolev_min_eigenvalues(200), (20, 200)),
                   0.05, perturb)]
    for alpha in (0.75, 1.0, 1.5):
        eigs = korobov_eigenvalues(alpha, 0.5, 220)
        rows.append(_close("12", f"decay estimate, korobov alpha={alpha:g}",
                           2.0 * alpha, estimate_decay(eigs, (20, 200)), 0.05,
                           perturb))
    return rows


def c13_goodcase_and_classification(perturb=False):
    eta1 = sobolev_min_eigenpair(1)
    rows = [_flag("13", "goodcase holds for the cosine eigenfunction",
                  check_goodcase_sobolev_min(eta1), perturb)]
    for t in (0.0, 0.25, 0.5, 1.0):
        section = Eigenpair(index=1, value=1.0,
                            func=lambda x, t=t: 0.7 * (1.0 + np.minimum(np.asarray(x, dtype=float), t)))
        rows.append(_flag(
            "13", f"goodcase rejected for the kernel section at t={t:g}",
            not check_goodcase_sobolev_min(section), perturb))
    lam = sobolev_min_eigenvalues(2).values
    report = classify(float(lam[0]), float(lam[1]), 2.0, goodcase=True)
    rows.append(_equal("13", "linear-class classification", "qpt-not-pt",
                       report.classification_all, perturb))
    rows.append(_close("13", "classification QPT exponent", 1.0,
                       report.qpt_exponent, 0.0, perturb))
    rows.append(_equal("13", "standard-class classification", "curse",
                       report.classification_std, perturb))
    return rows


CRITERIA = {
    "1": c01_min_kernel_eigenvalues,
    "2": c02_oracle_agreement,
    "3": c03_cosh_lambda2,
    "4": c04_qpt_exponent,
    "5": c05_counting_equivalence,
    "6": c06_curse_lower_bound,
    "7": c07_piecewise_model_closed_form,
    "8": c08_domination,
    "9": c09_e0_characterization,
    "10": c10_initial_error_ratio,
    "11": c11_density_figure,
    "12": c12_decay_estimation,
    "13": c13_goodcase_and_classification,
}


def run_all(only=None, fail=None) -> list[CriterionRow]:
    rows: list[CriterionRow] = []
    for cid, fn in CRITERIA.items():
        if only is not None and cid not in only:
            continue
        rows.extend(fn(perturb=(fail == cid)))
    return rows
