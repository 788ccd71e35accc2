"""Anchoring baselines: proportions, anchors, and feasible-set projection."""

import numpy as np
import pytest

from fairpoison.attacks import (nraa, poison_budget, project_feasible, raa,
                                score_candidates)
from fairpoison.attacks.anchoring import _duplication_counts, neighborhood_radius
from fairpoison.errors import DegenerateDataError, SchemaError
from fairpoison.selection import CleanBaseline

from _helpers import make_cat_dataset, make_cont_dataset


def _train(n=20, seed=0, positive_fraction=0.3):
    rng = np.random.default_rng(seed)
    n_pos = int(round(n * positive_fraction))
    y = np.array([1] * n_pos + [0] * (n - n_pos))
    s = rng.integers(0, 2, size=n)
    # make sure both anchor pools exist
    s[0], y[0] = 0, 1   # disadvantaged positive
    s[-1], y[-1] = 1, 0  # advantaged negative
    rows = [(float(rng.uniform(0, 1)),) for _ in range(n)]
    return make_cont_dataset(rows, s, y)


class TestDuplicationProportions:
    def test_spec_example(self):
        assert _duplication_counts(10, 0.3) == (3, 7)

    def test_preserved_within_one_sample(self):
        for budget in (1, 7, 33, 100):
            for frac in (0.1, 0.3, 0.55, 0.9):
                n_pos, n_neg = _duplication_counts(budget, frac)
                assert n_pos + n_neg == budget
                assert abs(n_pos - budget * frac) <= 0.5


class TestRaa:
    def test_budget_and_label_flip(self):
        train = _train(n=20)
        cand = raa(train, epsilon=0.5, rng=np.random.default_rng(0))
        assert len(cand) == poison_budget(0.5, 20)
        assert (cand.S == cand.Y).all()

    def test_label_proportions_mirror_clean_data(self):
        train = _train(n=40, positive_fraction=0.3)
        cand = raa(train, epsilon=1.0, rng=np.random.default_rng(1))
        assert int(cand.Y.sum()) == _duplication_counts(40, float(train.Y.mean()))[0]

    def test_zero_budget_gives_empty_candidate(self):
        train = _train()
        cand = raa(train, epsilon=0.0, rng=np.random.default_rng(2))
        assert len(cand) == 0

    def test_anchors_come_from_correct_pools(self):
        train = _train(n=30, seed=3)
        cand = raa(train, epsilon=0.5, rng=np.random.default_rng(3))
        pos_anchor = next(a for a in cand.anchors if a.s == 0)
        neg_anchor = next(a for a in cand.anchors if a.s == 1)
        assert train.S[pos_anchor.row_index] == 0 and train.Y[pos_anchor.row_index] == 1
        assert train.S[neg_anchor.row_index] == 1 and train.Y[neg_anchor.row_index] == 0

    def test_missing_pool_is_an_error(self):
        rows = [(0.1,), (0.9,)]
        train = make_cont_dataset(rows, [1, 0], [1, 0])  # no S=0,Y=1 row
        with pytest.raises(DegenerateDataError):
            raa(train, 0.5, np.random.default_rng(0))

    def test_seeded_determinism(self):
        train = _train(n=25, seed=4)
        a = raa(train, 0.8, np.random.default_rng(7))
        b = raa(train, 0.8, np.random.default_rng(7))
        assert a.key() == b.key()


class TestNraa:
    def test_dense_cluster_wins(self):
        # five identical disadvantaged-positive rows, the rest scattered
        rows = [(0.5, 0.5)] * 5 + [(0.0, 9.0), (9.0, 0.0), (5.0, 9.0), (9.0, 5.0)]
        s = [0, 0, 0, 0, 0, 0, 0, 1, 1]
        y = [1, 1, 1, 1, 1, 1, 1, 0, 0]
        train = make_cont_dataset(rows, s, y, bounds=(0.0, 9.0))
        cand = nraa(train, 1.0)
        pos_anchor = next(a for a in cand.anchors if a.s == 0)
        assert pos_anchor.row_index == 0  # first of the tied cluster rows
        assert pos_anchor.neighbor_count >= 5

    def test_tie_break_lowest_row_index(self):
        rows = [(0.0,), (0.0,), (1.0,), (1.0,), (0.5,), (0.5,)]
        s = [0, 0, 0, 0, 1, 1]
        y = [1, 1, 1, 1, 0, 0]
        train = make_cont_dataset(rows, s, y)
        cand = nraa(train, 1.0)
        pos_anchor = next(a for a in cand.anchors if a.s == 0)
        assert pos_anchor.row_index == 0

    def test_candidates_identical_across_rngs(self):
        train = _train(n=30, seed=5)
        a = nraa(train, 0.7, np.random.default_rng(1))
        b = nraa(train, 0.7, np.random.default_rng(999))
        assert a.key() == b.key()

    def test_radius_is_scalar_mean_distance(self):
        train = _train(n=50, seed=6)
        r = neighborhood_radius(train)
        assert r > 0.0


class TestProjectFeasible:
    def test_identity_on_feasible_points(self):
        ds = make_cont_dataset([(0.3,), (0.9,)], [0, 1], [0, 1])
        assert project_feasible([0.3], ds.schema) == [0.3]

    def test_clamps_continuous_values(self):
        ds = make_cont_dataset([(0.3,), (0.9,)], [0, 1], [0, 1])
        assert project_feasible([1.3], ds.schema) == [1.0]
        assert project_feasible([-0.2], ds.schema) == [0.0]

    def test_snaps_categorical_to_nearest(self):
        ds = make_cat_dataset([(0,), (1,)], [0, 1], [0, 1], value_sets=[(0, 1)])
        assert project_feasible([0.7], ds.schema) == [1.0]
        assert project_feasible([0.2], ds.schema) == [0.0]
        # equidistant snaps to the smaller value
        assert project_feasible([0.5], ds.schema) == [0.0]

    def test_non_numeric_value_set_rejected_for_unknown(self):
        ds = make_cat_dataset([("a",), ("b",)], [0, 1], [0, 1])
        assert project_feasible(["a"], ds.schema) == ["a"]
        with pytest.raises(SchemaError):
            project_feasible(["c"], ds.schema)


class TestScoringDeduplication:
    def test_identical_candidates_scored_once(self):
        train = _train(n=30, seed=8)
        candidates = [nraa(train, 0.5) for _ in range(5)]
        baseline = CleanBaseline(perf_bar=0.8, fair_bar=0.2, degenerate=False)
        scored = score_candidates(candidates, "gnb", train, train, baseline,
                                  alpha=0.5, beta=0.5)
        assert len(scored.scores) == 5
        assert len({id(s) for s in scored.scores}) == 1
