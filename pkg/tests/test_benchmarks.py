"""Stand-in benchmark datasets: shape, statistics, and determinism."""

import numpy as np
import pytest

from fairpoison.benchmarks import (BENCHMARK_NAMES, benchmark_roles,
                                   load_benchmark, write_benchmark_csv)
from fairpoison.data import load_csv, split, stats

# published summary statistics the stand-ins are built to reproduce:
# (encoded feature count, train-split size, %Y=1 overall / S=1 / S=0)
TARGETS = {
    "german": (58, 800, 0.2987, 0.3647, 0.2679),
    "drug": (13, 1500, 0.5507, 0.6388, 0.4619),
    "compas": (8, 5771, 0.5505, 0.6548, 0.5261),
}


@pytest.mark.parametrize("name", BENCHMARK_NAMES)
class TestStandIns:
    def test_encoded_feature_count(self, name):
        ds = load_benchmark(name, seed=0)
        assert stats(ds).n_features == TARGETS[name][0]

    def test_train_split_size(self, name):
        ds = load_benchmark(name, seed=0)
        train, _ = split(ds, 0.8, seed=0)
        assert len(train) == TARGETS[name][1]

    def test_full_file_label_rates_match_published(self, name):
        st = stats(load_benchmark(name, seed=0))
        _, _, overall, s1, s0 = TARGETS[name]
        assert st.pct_y1_overall == pytest.approx(overall, abs=0.002)
        assert st.pct_y1_s1 == pytest.approx(s1, abs=0.002)
        assert st.pct_y1_s0 == pytest.approx(s0, abs=0.002)

    def test_train_split_rates_close_to_published(self, name):
        ds = load_benchmark(name, seed=0)
        train, _ = split(ds, 0.8, seed=0)
        st = stats(train)
        _, _, overall, s1, s0 = TARGETS[name]
        assert st.pct_y1_overall == pytest.approx(overall, abs=0.04)
        assert st.pct_y1_s1 == pytest.approx(s1, abs=0.05)
        assert st.pct_y1_s0 == pytest.approx(s0, abs=0.05)

    def test_group_one_is_advantaged(self, name):
        st = stats(load_benchmark(name, seed=0))
        assert st.pct_y1_s1 >= st.pct_y1_s0

    def test_deterministic_generation(self, name):
        a = load_benchmark(name, seed=3)
        b = load_benchmark(name, seed=3)
        assert np.array_equal(a.S, b.S) and np.array_equal(a.Y, b.Y)
        for j in range(a.n_features):
            assert list(a.X[:, j]) == list(b.X[:, j])

    def test_subset_count_consistent_with_stats(self, name):
        # recount a group-label cell against the reported proportions
        ds = load_benchmark(name, seed=0)
        train, _ = split(ds, 0.8, seed=0)
        st = stats(train)
        from fairpoison.data import subset

        cell = subset(train, s=0, y=1)
        assert len(cell) == round(st.pct_y1_s0 * st.n_s0)


class TestCsvEquivalence:
    def test_write_then_load_matches_direct_generation(self, tmp_path):
        path = tmp_path / "german.csv"
        write_benchmark_csv("german", path, seed=1)
        from_file = load_csv(path, benchmark_roles("german"))
        direct = load_benchmark("german", seed=1)
        assert np.array_equal(from_file.S, direct.S)
        assert np.array_equal(from_file.Y, direct.Y)
        for j in range(direct.n_features):
            assert list(from_file.X[:, j]) == list(direct.X[:, j])

    def test_unknown_name_rejected(self):
        with pytest.raises(ValueError):
            load_benchmark("adult")
