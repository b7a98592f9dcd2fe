import math

import numpy as np
import pytest

from tensortract import (ComplexityQuery, Eigenpair, EigenSequence,
                         ParameterError, ResourceLimitError, TruncationError,
                         brute_force_count, check_goodcase_sobolev_min,
                         classify, count_info_complexity_all, en_all,
                         estimate_decay, initial_error_ratio_integration,
                         korobov_eigenvalues, qpt_exponent,
                         sobolev_cosh_eigenvalues, sobolev_min_eigenpair,
                         sobolev_min_eigenvalues)

KOR = korobov_eigenvalues(1.0, 0.5, 40)
KOR_TIE = korobov_eigenvalues(1.0, 1.0, 40)
SOB = sobolev_min_eigenvalues(40)


def count(eigs, eps, d):
    return count_info_complexity_all(eigs, ComplexityQuery(eps=eps, d=d)).count


def test_univariate_korobov_example():
    # eigenvalues 1, .5, .5, .125, ...; eps^2 = 0.36 keeps the first three
    assert count(KOR, 0.6, 1) == 3


def test_rank_one_problem_needs_single_functional():
    eigs = EigenSequence(np.array([1.0, 0.0, 0.0]), is_exhaustive=True)
    for d in (1, 2, 5):
        for eps in (0.01, 0.5, 0.9):
            assert count(eigs, eps, d) == 1


def test_top_tie_gives_exponential_count():
    for d in range(1, 10):
        for eps in (0.1, 0.5, 0.9):
            assert count(KOR_TIE, eps, d) >= 2 ** d


def test_dfs_matches_brute_force_on_selected_cases():
    cases = [(SOB, 0.25, 2), (SOB, 0.1, 3), (KOR, 0.35, 3), (KOR_TIE, 0.45, 4),
             (sobolev_cosh_eigenvalues(40), 0.2, 2)]
    for eigs, eps, d in cases:
        q = ComplexityQuery(eps=eps, d=d)
        fast = count_info_complexity_all(eigs, q)
        slow = brute_force_count(eigs, q)
        assert fast.count == slow.count
        assert fast.method == "dfs-multiset"
        assert slow.method == "direct-enum"


def test_sobolev_min_d2_quarter_eps():
    q = ComplexityQuery(eps=0.25, d=2)
    assert count_info_complexity_all(SOB, q).count == brute_force_count(SOB, q).count == 3


def test_randomized_equivalence_quick():
    rng = np.random.default_rng(5)
    for _ in range(15):
        alpha = float(rng.uniform(0.8, 2.2))
        beta = float(rng.uniform(0.1, 1.0))
        eigs = korobov_eigenvalues(alpha, beta, 120)
        q = ComplexityQuery(eps=float(rng.choice([0.1, 0.3, 0.5, 0.7, 0.9])),
                            d=int(rng.integers(1, 5)))
        assert count_info_complexity_all(eigs, q).count == brute_force_count(eigs, q).count


def test_monotone_in_eps_and_d():
    for eigs in (SOB, KOR, sobolev_cosh_eigenvalues(40)):
        counts = [count(eigs, eps, 2) for eps in (0.1, 0.3, 0.5, 0.7, 0.9)]
        assert all(a >= b for a, b in zip(counts, counts[1:]))
        by_d = [count(eigs, 0.3, d) for d in (1, 2, 3, 4)]
        assert all(a <= b for a, b in zip(by_d, by_d[1:]))


def test_tie_policy_counts_full_multiplicity():
    # at d = 2 the product level 0.5 carries multiplicity 4: (1,2),(1,3),(2,1),(3,1)
    lo = count(KOR, math.sqrt(0.5 - 1e-6), 2)
    hi = count(KOR, math.sqrt(0.5 + 1e-6), 2)
    assert lo - hi == 4
    assert hi == 1


def test_exact_tie_excluded():
    # eps^2 lambda_1 lands exactly on an eigenvalue: the <= in the definition
    # (tie tolerance) excludes it
    eigs = korobov_eigenvalues(1.0, 0.25, 20)
    assert count(eigs, 0.5, 1) == 1


def test_saturation_flag():
    eigs = EigenSequence(np.array([1.0, 1.0]), is_exhaustive=True)
    res = count_info_complexity_all(eigs, ComplexityQuery(eps=0.5, d=70))
    assert res.saturated
    assert res.count == 2 ** 63 - 1


def test_std_class_flagged_as_lower_bound():
    res = count_info_complexity_all(KOR, ComplexityQuery(eps=0.5, d=2, info_class="std"))
    assert res.lower_bound_only
    assert res.count == count(KOR, 0.5, 2)


def test_truncation_error_on_short_list():
    short = sobolev_min_eigenvalues(3)
    with pytest.raises(TruncationError):
        count_info_complexity_all(short, ComplexityQuery(eps=0.01, d=2))


def test_brute_force_guards():
    with pytest.raises(ResourceLimitError):
        brute_force_count(SOB, ComplexityQuery(eps=0.5, d=5))
    wide = EigenSequence(np.ones(200), is_exhaustive=True)
    with pytest.raises(ResourceLimitError):
        brute_force_count(wide, ComplexityQuery(eps=0.5, d=4))


def test_query_validation():
    with pytest.raises(ParameterError):
        ComplexityQuery(eps=0.0, d=1)
    with pytest.raises(ParameterError):
        ComplexityQuery(eps=1.0, d=1)
    with pytest.raises(ParameterError):
        ComplexityQuery(eps=0.5, d=0)
    with pytest.raises(ParameterError):
        ComplexityQuery(eps=0.5, d=1, info_class="weird")


# ---------------------------------------------------------------------------
# decay, exponent, classification
# ---------------------------------------------------------------------------

def test_decay_exact_power_law():
    eigs = EigenSequence(np.arange(1, 201, dtype=float) ** -2.0)
    assert estimate_decay(eigs, (10, 100)) == pytest.approx(2.0, abs=1e-9)


def test_decay_analytic_families():
    assert estimate_decay(sobolev_min_eigenvalues(200), (20, 200)) == pytest.approx(2.0, abs=0.05)
    assert estimate_decay(korobov_eigenvalues(1.5, 0.5, 220), (10, 200)) == pytest.approx(3.0, abs=0.05)


def test_decay_window_validation():
    eigs = EigenSequence(np.arange(1, 51, dtype=float) ** -1.0)
    with pytest.raises(ParameterError):
        estimate_decay(eigs, (40, 45))      # too short
    with pytest.raises(ParameterError):
        estimate_decay(eigs, (10, 60))      # beyond the sequence
    withzero = EigenSequence(np.concatenate([np.arange(1, 30.0) ** -1, [0.0] * 21]),
                             is_exhaustive=True)
    with pytest.raises(ParameterError):
        estimate_decay(withzero, (20, 40))  # zero eigenvalue inside


def test_qpt_exponent_values():
    lam = sobolev_min_eigenvalues(2).values
    assert qpt_exponent(lam[0], lam[1], 2.0) == 1.0
    assert 2.0 / math.log(lam[0] / lam[1]) == pytest.approx(0.7237, abs=1e-3)
    assert qpt_exponent(1.0, 0.0, 2.0) == 0.0
    assert qpt_exponent(1.0, math.exp(-1.0), 2.0) == pytest.approx(2.0, abs=1e-12)


def test_qpt_exponent_validation():
    with pytest.raises(ParameterError):
        qpt_exponent(1.0, 1.0, 2.0)
    with pytest.raises(ParameterError):
        qpt_exponent(1.0, 0.5, 0.0)
    with pytest.raises(ParameterError):
        qpt_exponent(0.0, 0.0, 2.0)


def test_goodcase_checker():
    assert check_goodcase_sobolev_min(sobolev_min_eigenpair(1)) is True

    def section(t, a=0.7):
        return Eigenpair(index=1, value=1.0,
                         func=lambda x: a * (1.0 + np.minimum(np.asarray(x, float), t)))

    for t in (0.0, 0.25, 0.5, 1.0):
        assert check_goodcase_sobolev_min(section(t)) is False
    norm = 1.0 / math.sqrt(1.0 + 0.5 + 0.5 ** 3 / 3.0)
    normalized = Eigenpair(index=1, value=1.0,
                           func=lambda x: norm * (1.0 + np.minimum(np.asarray(x, float), 0.5)))
    assert check_goodcase_sobolev_min(normalized) is False
    constant = Eigenpair(index=1, value=1.0,
                         func=lambda x: np.ones_like(np.asarray(x, float)))
    assert check_goodcase_sobolev_min(constant) is False


def test_classify_min_kernel():
    lam = sobolev_min_eigenvalues(2).values
    rep = classify(lam[0], lam[1], 2.0, goodcase=True)
    assert rep.classification_all == "qpt-not-pt"
    assert rep.qpt_exponent == 1.0
    assert rep.classification_std == "curse"


def test_classify_tie_is_curse():
    rep = classify(1.0, 1.0, 2.0)
    assert rep.classification_all == "curse"
    assert rep.classification_std == "curse"
    # ties within REL_TIE count
    rep = classify(1.0, 1.0 - 1e-13, 2.0)
    assert rep.classification_all == "curse"


def test_classify_trivial_functional():
    rep = classify(2.0, 0.0, 5.0)
    assert rep.classification_all == "qpt-trivial-functional"
    assert rep.qpt_exponent == 0.0
    assert rep.classification_std == "unknown"
    assert classify(2.0, 0.0, 5.0, goodcase=False).classification_std == "trivial"
    assert classify(2.0, 0.0, 5.0, goodcase=True).classification_std == "curse"


def test_classify_no_decay():
    rep = classify(1.0, 0.5, 0.0)
    assert rep.classification_all == "not-qpt"
    assert rep.qpt_exponent is None


def test_classify_scale_invariance():
    lam = sobolev_min_eigenvalues(2).values
    base = classify(lam[0], lam[1], 2.0, goodcase=True)
    for c in (1e-3, 7.0, 1e4):
        scaled = classify(c * lam[0], c * lam[1], 2.0, goodcase=True)
        assert scaled.classification_all == base.classification_all
        assert scaled.classification_std == base.classification_std
        assert scaled.qpt_exponent == pytest.approx(base.qpt_exponent, rel=1e-12)


def test_classify_validation():
    with pytest.raises(ParameterError):
        classify(1.0, 2.0, 1.0)
    with pytest.raises(ParameterError):
        classify(0.0, 0.0, 1.0)


# ---------------------------------------------------------------------------
# en_all and initial errors
# ---------------------------------------------------------------------------

def test_en_all_initial_error():
    for d in (1, 2, 4):
        assert en_all(SOB, d, 0) == SOB.values[0] ** (0.5 * d)
        assert en_all(KOR, d, 0) == 1.0
    assert en_all(SOB, 4, 0) == pytest.approx(1.3510338868783787 ** 2, abs=1e-12)


def test_en_all_tied_top_products():
    # nine degree-2 products equal one when beta = 1, so e_n = 1 up to n = 8
    for n in (1, 3, 8):
        assert en_all(KOR_TIE, 2, n) == pytest.approx(1.0, abs=1e-12)
    assert en_all(KOR_TIE, 2, 9) < 1.0


def test_en_all_nonincreasing_and_matches_counting():
    vals = [en_all(KOR, 2, n) for n in range(12)]
    assert all(a >= b - 1e-15 for a, b in zip(vals, vals[1:]))
    # consistency: counting at eps slightly above e_n/e_0 must need <= n terms
    e0 = en_all(KOR, 2, 0)
    for n in (1, 4, 9):
        eps = vals[n] / e0 * (1.0 + 1e-9)
        assert count(KOR, eps, 2) <= n


def test_en_all_exhaustive_zero_tail():
    eigs = EigenSequence(np.array([1.0, 0.5, 0.0]), is_exhaustive=True)
    assert en_all(eigs, 1, 2) == 0.0
    assert en_all(eigs, 1, 7) == 0.0
    assert en_all(eigs, 2, 3) == pytest.approx(0.5, abs=1e-15)


def test_en_all_truncation_guard():
    short = sobolev_min_eigenvalues(3)
    with pytest.raises(TruncationError):
        en_all(short, 2, 40)


def test_initial_error_ratio():
    cmp1 = initial_error_ratio_integration(1)
    assert cmp1.e0_integration == pytest.approx(math.sqrt(4.0 / 3.0), abs=1e-15)
    assert cmp1.e0_approximation == pytest.approx(math.sqrt(1.3510338868783787), abs=1e-12)
    cmp2 = initial_error_ratio_integration(2)
    assert cmp2.ratio == pytest.approx(1.013275415158784, abs=1e-12)
    # ratio grows exponentially with d
    assert initial_error_ratio_integration(200).ratio > 3.0
