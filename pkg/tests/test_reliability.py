import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from kappa_ceiling import (
    AnovaSummary,
    DegenerateVariance,
    InsufficientData,
    RaterMatrix,
    ScaleViolation,
    ScoreScale,
    ceiling_report,
    icc_average,
    icc_single,
    oneway_anova,
    reliability_estimates,
    theoretical_ceiling,
    human_like_ceiling,
)


def matrix(x1, x2, min_score=0, max_score=10) -> RaterMatrix:
    return RaterMatrix(np.array(x1), np.array(x2), ScoreScale(min_score, max_score))


# --- matrix validation ----------------------------------------------------

def test_rater_matrix_requires_three_rows():
    with pytest.raises(InsufficientData):
        matrix([1, 2], [1, 3])


def test_rater_matrix_rejects_out_of_scale():
    with pytest.raises(ScaleViolation):
        matrix([1, 2, 11], [1, 2, 3])


def test_rater_matrix_rejects_non_integer():
    with pytest.raises(ScaleViolation):
        RaterMatrix(np.array([1.0, 2.5, 3.0]), np.array([1, 2, 3]), ScoreScale(0, 10))


# --- one-way ANOVA ---------------------------------------------------------

def test_anova_hand_fixture(fixture_matrix):
    a = oneway_anova(fixture_matrix)
    assert a.msb == pytest.approx(13.125, abs=1e-12)
    assert a.msw == pytest.approx(0.375, abs=1e-12)
    assert (a.n, a.k) == (4, 2)


def test_anova_identical_columns_has_zero_msw():
    a = oneway_anova(matrix([1, 4, 7], [1, 4, 7]))
    assert a.msw == 0.0
    assert a.msb > 0.0


def test_anova_identical_rows_has_zero_msb():
    a = oneway_anova(matrix([3, 3, 3], [5, 5, 5]))
    assert a.msb == 0.0
    assert a.msw > 0.0


def test_anova_brute_force_equivalence():
    """Vectorized mean squares match an index-by-index summation."""
    rng = np.random.default_rng(1234)
    for _ in range(50):
        n = rng.integers(3, 40)
        x1 = rng.integers(0, 11, n)
        x2 = rng.integers(0, 11, n)
        a = oneway_anova(matrix(x1.tolist(), x2.tolist()))
        rows = list(zip(x1.tolist(), x2.tolist()))
        grand = sum(v for row in rows for v in row) / (2 * n)
        ssb = sum(2 * ((r1 + r2) / 2 - grand) ** 2 for r1, r2 in rows)
        ssw = sum(
            (v - (r1 + r2) / 2) ** 2 for r1, r2 in rows for v in (r1, r2)
        )
        assert a.msb == pytest.approx(ssb / (n - 1), abs=1e-9)
        assert a.msw == pytest.approx(ssw / n, abs=1e-9)


# --- intraclass correlations -------------------------------------------------

def test_icc_single_hand_fixture():
    assert icc_single(AnovaSummary(13.125, 0.375, 4, 2)) == pytest.approx(
        12.75 / 13.5, abs=1e-12
    )


def test_icc_single_error_free_raters():
    assert icc_single(AnovaSummary(msb=8.0, msw=0.0, n=10, k=2)) == 1.0


def test_icc_single_no_signal():
    assert icc_single(AnovaSummary(msb=2.0, msw=2.0, n=10, k=2)) == 0.0


def test_icc_average_hand_fixture():
    assert icc_average(AnovaSummary(13.125, 0.375, 4, 2)) == pytest.approx(
        12.75 / 13.125, abs=1e-12
    )


def test_icc_average_error_free():
    assert icc_average(AnovaSummary(msb=8.0, msw=0.0, n=10, k=2)) == 1.0


def test_icc_degenerate_denominators():
    with pytest.raises(DegenerateVariance):
        icc_single(AnovaSummary(msb=0.0, msw=0.0, n=5, k=2))
    with pytest.raises(DegenerateVariance):
        icc_average(AnovaSummary(msb=0.0, msw=1.0, n=5, k=2))


@given(
    st.floats(1e-3, 1e3),
    st.floats(0.0, 1e3),
    st.integers(2, 6),
)
def test_spearman_brown_identity(msb, msw, k):
    """ICC(1,k) equals the k-fold step-up of ICC(1,1), always.

    The reference step-up expression itself loses ~eps*(msw/msb) relative
    precision as the single-measure ICC approaches -1, so the strategy keeps
    the mean squares within a factor of 1e6 of each other; the 1e-10
    absolute bound over realistic mean squares is asserted in the acceptance
    suite.
    """
    summary = AnovaSummary(msb=msb, msw=msw, n=30, k=k)
    rho_1 = icc_single(summary)
    stepped_up = k * rho_1 / (1 + (k - 1) * rho_1)
    assert icc_average(summary) == pytest.approx(stepped_up, abs=1e-10, rel=1e-9)


# --- ceilings ---------------------------------------------------------------

def _estimates(rho_1: float, rho_Y: float):
    from kappa_ceiling import ReliabilityEstimates

    return ReliabilityEstimates(
        rho_1=rho_1,
        rho_Y=rho_Y,
        anova=AnovaSummary(1.0, 1.0, 10, 2),
        clamped=rho_1 < 0 or rho_Y < 0,
    )


def test_theoretical_ceiling_is_square_root():
    assert theoretical_ceiling(_estimates(0.7, 0.81)) == pytest.approx(0.9, abs=1e-12)


def test_theoretical_ceiling_clamps_negative():
    assert theoretical_ceiling(_estimates(0.1, -0.05)) == 0.0


def test_human_like_ceiling_formula():
    assert human_like_ceiling(_estimates(0.8, 0.9)) == pytest.approx(
        math.sqrt(0.72), abs=1e-12
    )


def test_human_like_ceiling_equals_theoretical_at_perfect_single_rater():
    estimates = _estimates(1.0, 0.9)
    assert human_like_ceiling(estimates) == pytest.approx(
        theoretical_ceiling(estimates), abs=1e-12
    )


def test_ceiling_report_identical_columns():
    report = ceiling_report(matrix([1, 4, 7, 9], [1, 4, 7, 9]))
    assert report.kappa_max == 1.0
    assert report.kappa_hl == 1.0
    assert report.kappa_h == 1.0
    assert report.warnings == ()


def test_ceiling_report_fixture_chain(fixture_matrix):
    report = ceiling_report(fixture_matrix)
    assert report.reliability.rho_1 == pytest.approx(17 / 18, abs=1e-12)
    assert report.reliability.rho_Y == pytest.approx(34 / 35, abs=1e-12)
    assert report.kappa_max == pytest.approx(math.sqrt(34 / 35), abs=1e-12)
    assert report.kappa_hl == pytest.approx(math.sqrt((17 / 18) * (34 / 35)), abs=1e-12)
    assert report.kappa_h == pytest.approx(19 / 20.5, abs=1e-12)
    assert not report.reliability.clamped


def test_ceiling_report_negative_icc_warns_and_clamps():
    # anti-correlated raters: msw dominates msb
    report = ceiling_report(matrix([0, 10, 0, 10], [10, 0, 10, 1]))
    assert report.reliability.rho_1 < 0
    assert report.reliability.clamped
    assert report.kappa_max == 0.0
    assert report.kappa_hl == 0.0
    assert any("negative" in w for w in report.warnings)


def test_ceiling_report_row_permutation_invariance(fixture_matrix):
    base = ceiling_report(fixture_matrix)
    permuted = ceiling_report(
        matrix([7, 1, 5, 3], [8, 2, 4, 3])
    )
    assert permuted.kappa_max == pytest.approx(base.kappa_max, abs=1e-12)
    assert permuted.kappa_hl == pytest.approx(base.kappa_hl, abs=1e-12)
    assert permuted.kappa_h == pytest.approx(base.kappa_h, abs=1e-12)
    assert permuted.reliability.anova.msb == pytest.approx(
        base.reliability.anova.msb, abs=1e-12
    )


def test_ceiling_report_column_swap_invariance(fixture_matrix):
    base = ceiling_report(fixture_matrix)
    swapped = ceiling_report(matrix([2, 3, 4, 8], [1, 3, 5, 7]))
    assert swapped.reliability.anova == base.reliability.anova
    assert swapped.kappa_max == base.kappa_max
    assert swapped.kappa_hl == base.kappa_hl
    assert swapped.kappa_h == pytest.approx(base.kappa_h, abs=1e-12)
    assert swapped.r_h == pytest.approx(base.r_h, abs=1e-12)
    assert swapped.f_h == pytest.approx(base.f_h, abs=1e-12)


@given(st.lists(st.tuples(st.integers(0, 10), st.integers(0, 10)), min_size=3, max_size=40))
def test_ordering_chain_when_signal_dominates(rows):
    x1 = [r[0] for r in rows]
    x2 = [r[1] for r in rows]
    try:
        estimates = reliability_estimates(matrix(x1, x2))
    except DegenerateVariance:
        return
    a = estimates.anova
    if a.msb >= a.msw:
        assert 0 <= estimates.rho_1 <= estimates.rho_Y <= 1
        assert human_like_ceiling(estimates) <= theoretical_ceiling(estimates) + 1e-12
