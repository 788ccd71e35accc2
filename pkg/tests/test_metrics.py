"""Accuracy, SPD, and EOD, including the maximal-unfairness identity."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fairpoison.errors import UndefinedMetricError
from fairpoison.metrics import (MetricsReport, accuracy, eod, eod_components,
                                spd)


class TestAccuracy:
    def test_perfect(self):
        assert accuracy([1, 0, 1], [1, 0, 1]) == 1.0

    def test_inverted(self):
        y = np.array([1, 0, 1, 0])
        assert accuracy(1 - y, y) == 0.0

    def test_hand_count(self):
        assert accuracy([1, 0, 1, 1], [1, 1, 1, 0]) == 0.5

    def test_length_mismatch(self):
        with pytest.raises(ValueError):
            accuracy([1, 0], [1])


class TestSpd:
    def test_predictions_equal_group_give_one(self):
        s = np.array([1, 0, 1, 0, 1])
        assert spd(s, s) == 1.0

    def test_constant_predictions_give_zero(self):
        assert spd([1, 1, 1, 1], [1, 0, 1, 0]) == 0.0

    def test_hand_frequencies(self):
        assert spd([1, 1, 0, 0], [1, 0, 1, 0]) == 0.0

    def test_single_group_undefined(self):
        with pytest.raises(UndefinedMetricError):
            spd([1, 0], [1, 1])


class TestEod:
    def test_predictions_equal_group_give_one(self):
        # both labels present in both groups
        s = np.array([1, 1, 0, 0, 1, 0])
        y = np.array([1, 0, 1, 0, 1, 0])
        assert eod(s, y, s) == 1.0

    def test_perfect_predictor_gives_zero(self):
        y = np.array([1, 0, 1, 0])
        s = np.array([1, 1, 0, 0])
        assert eod(y, y, s) == 0.0

    def test_hand_rates(self):
        # cells: (S=1,Y=1): [1]          TPR_1 = 1
        #        (S=0,Y=1): [1,1,1,0]    TPR_0 = 0.75  -> gap 0.25
        #        (S=1,Y=0): [1,0]        FPR_1 = 0.5
        #        (S=0,Y=0): [0]          FPR_0 = 0     -> gap 0.5
        y_hat = [1, 1, 1, 1, 0, 1, 0, 0]
        y = [1, 1, 1, 1, 1, 0, 0, 0]
        s = [1, 0, 0, 0, 0, 1, 1, 0]
        assert eod(y_hat, y, s) == 0.5

    def test_empty_cell_skipped(self):
        # no (S=1, Y=0) rows: only the y=1 term contributes
        y_hat = [1, 0, 0]
        y = [1, 1, 0]
        s = [1, 0, 0]
        gaps, degenerate = eod_components(y_hat, y, s)
        assert set(gaps) == {1} and not degenerate
        assert eod(y_hat, y, s) == 1.0

    def test_both_cells_empty_reports_zero_with_flag(self):
        # group 1 has only Y=1 rows, group 0 only Y=0 rows: no usable term
        y_hat = [1, 0]
        y = [1, 0]
        s = [1, 0]
        gaps, degenerate = eod_components(y_hat, y, s)
        assert degenerate and eod(y_hat, y, s) == 0.0


@st.composite
def prediction_case(draw, require_full_cells=False):
    n = draw(st.integers(min_value=4, max_value=50))
    s = np.array(draw(st.lists(st.integers(0, 1), min_size=n, max_size=n)))
    y = np.array(draw(st.lists(st.integers(0, 1), min_size=n, max_size=n)))
    y_hat = np.array(draw(st.lists(st.integers(0, 1), min_size=n, max_size=n)))
    if require_full_cells:
        # force one row into every (s, y) cell
        s[:4] = [1, 1, 0, 0]
        y[:4] = [1, 0, 1, 0]
    elif not (s.any() and (1 - s).any()):
        s[0], s[1] = 1, 0
    return y_hat, y, s


class TestProperties:
    @given(prediction_case(require_full_cells=True))
    @settings(max_examples=200, deadline=None)
    def test_maximally_unfair_when_predictions_equal_group(self, case):
        _, y, s = case
        assert spd(s, s) == 1.0
        assert eod(s, y, s) == 1.0

    @given(prediction_case(), st.integers(min_value=0, max_value=2**32 - 1))
    @settings(max_examples=100, deadline=None)
    def test_row_permutation_invariance(self, case, seed):
        y_hat, y, s = case
        perm = np.random.default_rng(seed).permutation(len(y))
        assert spd(y_hat, s) == spd(y_hat[perm], s[perm])
        assert eod(y_hat, y, s) == eod(y_hat[perm], y[perm], s[perm])
        assert accuracy(y_hat, y) == accuracy(y_hat[perm], y[perm])

    @given(prediction_case())
    @settings(max_examples=100, deadline=None)
    def test_group_swap_symmetry(self, case):
        y_hat, y, s = case
        assert spd(y_hat, s) == pytest.approx(spd(y_hat, 1 - s))
        assert eod(y_hat, y, s) == pytest.approx(eod(y_hat, y, 1 - s))

    @given(prediction_case())
    @settings(max_examples=100, deadline=None)
    def test_bounds(self, case):
        y_hat, y, s = case
        assert 0.0 <= spd(y_hat, s) <= 1.0
        assert 0.0 <= eod(y_hat, y, s) <= 1.0


class TestMetricsReport:
    def test_deltas_are_exact_differences(self):
        clean = MetricsReport(accuracy=0.8, spd=0.1, eod=0.2)
        poisoned = MetricsReport(accuracy=0.5, spd=0.6, eod=0.9).with_baseline(clean)
        assert poisoned.delta_accuracy == pytest.approx(-0.3)
        assert poisoned.delta_spd == pytest.approx(0.5)
        assert poisoned.delta_eod == pytest.approx(0.7)

    def test_from_predictions(self):
        y_hat = np.array([1, 0, 1, 0])
        y = np.array([1, 1, 0, 0])
        s = np.array([1, 0, 1, 0])
        report = MetricsReport.from_predictions(y_hat, y, s)
        assert report.accuracy == 0.5
        assert report.spd == 1.0
        assert not report.eod_degenerate
