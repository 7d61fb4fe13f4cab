import numpy as np
import pytest
from scipy import stats as sps

from ntpsim.stats import (DegenerateSampleError, IndicatorCell, indicators, rank_sum_test,
                          sample_skewness, weighted_gamma_mean, welch_one_tailed,
                          wilcoxon_rank_sum)

from oracles import fixture_pairs, rank_sum_brute, skewness_two_pass, welch_textbook

FIXTURES = fixture_pairs()


@pytest.mark.parametrize("x,y,d", FIXTURES)
def test_welch_matches_textbook(x, y, d):
    assert welch_one_tailed(x, y, d) == pytest.approx(welch_textbook(x, y, d), abs=1e-9)


@pytest.mark.parametrize("x,y,d", FIXTURES)
def test_welch_matches_scipy(x, y, d):
    ref = sps.ttest_ind(np.asarray(x) - d, y, equal_var=False, alternative="greater").pvalue
    assert welch_one_tailed(x, y, d) == pytest.approx(ref, abs=1e-12)


def test_welch_reference_case():
    rng = np.random.default_rng(5)
    x, y = rng.normal(10, 1, 1000), rng.normal(9, 1, 1000)
    assert welch_one_tailed(x, y, 0.09) == pytest.approx(welch_textbook(list(x), list(y), 0.09), abs=1e-9)


def test_welch_identical_samples():
    assert welch_one_tailed([1, 2, 3, 4, 5], [1, 2, 3, 4, 5]) == pytest.approx(0.5)


def test_welch_shift_boundary():
    y = np.array([3.0, 1.0, 4.0, 1.0, 5.0, 9.0])
    assert welch_one_tailed(y + 2.0, y, 2.0) == pytest.approx(0.5)


def test_welch_constant_samples():
    assert welch_one_tailed([2, 2], [1, 1]) == 0.0
    assert welch_one_tailed([1, 1], [1, 1]) == 0.5


def test_welch_too_small():
    with pytest.raises(DegenerateSampleError):
        welch_one_tailed([1.0], [1.0, 2.0])


def test_welch_monotone_in_shift():
    x, y, _ = FIXTURES[4]
    ps = [welch_one_tailed(x, y, d) for d in np.linspace(-1, 1, 21)]
    assert all(b >= a for a, b in zip(ps, ps[1:]))


@pytest.mark.parametrize("x,y,d", FIXTURES)
def test_rank_sum_matches_brute_force(x, y, d):
    res = rank_sum_test(x, y, d)
    u, p = rank_sum_brute(x, y, d)
    assert res.u == pytest.approx(u, abs=1e-9)
    assert res.p == pytest.approx(p, abs=1e-9)


@pytest.mark.parametrize("x,y,d", FIXTURES)
def test_rank_sum_matches_scipy(x, y, d):
    ref = sps.mannwhitneyu(x, np.asarray(y) + d, alternative="greater",
                           use_continuity=True, method="asymptotic").pvalue
    assert wilcoxon_rank_sum(x, y, d) == pytest.approx(ref, abs=1e-12)


def test_rank_sum_symmetric_null():
    x = np.arange(20.0)
    assert wilcoxon_rank_sum(x, x) == pytest.approx(0.5, abs=0.05)


def test_rank_sum_separation():
    assert wilcoxon_rank_sum(np.arange(100, 150.0), np.arange(50.0), 1.0) < 1e-6


def test_rank_sum_all_tied():
    assert wilcoxon_rank_sum(np.ones(10), np.ones(10)) == 0.5


def test_rank_sum_too_small():
    with pytest.raises(DegenerateSampleError):
        wilcoxon_rank_sum(np.arange(5.0), np.arange(10.0))


def test_scale_invariance():
    x, y, d = FIXTURES[7]
    x, y = np.asarray(x), np.asarray(y)
    for f in (welch_one_tailed, wilcoxon_rank_sum):
        assert f(3 * x, 3 * y, 3 * d) == pytest.approx(f(x, y, d), rel=1e-9)


def test_skewness_symmetric_exact():
    assert sample_skewness([-2, -1, 0, 1, 2]) == 0.0


def test_skewness_right_tail():
    assert sample_skewness([0, 0, 0, 1]) > 0


@pytest.mark.parametrize("x,_y,_d", FIXTURES)
def test_skewness_matches_moments(x, _y, _d):
    assert sample_skewness(x) == pytest.approx(skewness_two_pass(x), abs=1e-12)
    assert sample_skewness(x) == pytest.approx(sps.skew(x, bias=False), abs=1e-12)


def test_skewness_constant():
    assert sample_skewness([3.0] * 10) == 0.0


def test_indicators_against_self():
    x = np.random.default_rng(1).normal(180, 3, 50)
    ic = indicators(x, 200.0, 176.0, x)
    assert ic.bpi == 0.0 and not ic.significant
    assert ic.significance_class == "white"


def test_indicators_values():
    base = np.linspace(170, 186, 40)     # mean 178
    cell = base + 200 - 178               # mean 200
    ic = indicators(cell, 200.0, 176.0, base)
    assert ic.fbi == pytest.approx(1.0)
    assert ic.sbi == pytest.approx(24 / 176)
    assert ic.bpi == pytest.approx(22 / 178)
    assert ic.d_h == pytest.approx(1.78)
    assert ic.significance_class == "green"


def test_scenario_one_second_best_indicator():
    cell = np.full(10, 177.9) + np.linspace(-1, 1, 10)
    ic = indicators(cell, 200.0, 176.0, cell)
    assert ic.sbi == pytest.approx(0.0108, abs=5e-5)


def test_indicators_reject_nonpositive_benchmarks():
    with pytest.raises(ValueError):
        indicators([1, 2, 3], 0.0, 1.0, [1, 2, 3])


def _cell(g, bpi, sig=True):
    p = 0.01 if sig else 0.5
    return IndicatorCell(g, 1 - g, 0.9, 0.0, 0.0, 0.0, bpi, 0.0, p, p)


def test_weighted_gamma_single():
    assert weighted_gamma_mean([_cell(0.4, 0.02)]) == pytest.approx(0.4)


def test_weighted_gamma_two():
    assert weighted_gamma_mean([_cell(0.3, 0.01), _cell(0.5, 0.03)]) == pytest.approx(0.45)


def test_weighted_gamma_ignores_insignificant_and_negative():
    cells = [_cell(0.3, 0.01), _cell(0.5, 0.5, sig=False), _cell(0.55, -0.2)]
    assert weighted_gamma_mean(cells) == pytest.approx(0.3)
    assert weighted_gamma_mean(cells, "gamma_2") == pytest.approx(0.7)


def test_weighted_gamma_empty_is_none():
    assert weighted_gamma_mean([_cell(0.3, 0.01, sig=False)]) is None


@pytest.mark.parametrize("pw,pr,colour", [(0.01, 0.01, "green"), (0.5, 0.01, "yellow"),
                                          (0.01, 0.5, "blue"), (0.5, 0.5, "white")])
def test_significance_classes(pw, pr, colour):
    c = IndicatorCell(0.4, 0.4, 0.0, 0.0, 0.0, 0.0, 0.1, 0.0, pw, pr)
    assert c.significance_class == colour
