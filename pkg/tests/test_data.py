"""Dataset loading, splitting, subsetting, and encoding."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fairpoison.data import (ColumnRoles, discretize_continuous,
                             encode_dataset, encode_features, load_csv, split,
                             stats, subset, take, uniform_rows, write_csv)
from fairpoison.errors import (IngestionError, SchemaError, ValidationError)

from _helpers import make_cat_dataset, make_cont_dataset


def _write(tmp_path, text, name="data.csv"):
    path = tmp_path / name
    path.write_text(text, encoding="utf-8")
    return path


TOY_CSV = "color,size,amount,sex,label\nred,big,10,1,1\nblue,small,30,0,0\nred,small,20,0,1\nblue,big,40,1,0\n"
TOY_ROLES = ColumnRoles(sensitive="sex", label="label",
                        categorical=("color", "size"), continuous=("amount",))


class TestLoadCsv:
    def test_minimal_two_row_file(self, tmp_path):
        path = _write(tmp_path, "f,s,y\na,0,0\nb,1,1\n")
        ds = load_csv(path, ColumnRoles(sensitive="s", label="y", categorical=("f",)))
        assert len(ds) == 2
        assert ds.schema.features[0].values == ("a", "b")

    def test_continuous_normalized_to_unit_interval(self, tmp_path):
        ds = load_csv(_write(tmp_path, TOY_CSV), TOY_ROLES)
        amounts = ds.X[:, 2].astype(float)
        assert amounts.min() == 0.0 and amounts.max() == 1.0
        # raw 10,30,20,40 -> 0, 2/3, 1/3, 1
        assert amounts == pytest.approx([0.0, 2 / 3, 1 / 3, 1.0])

    def test_categorical_value_sets_observed(self, tmp_path):
        ds = load_csv(_write(tmp_path, TOY_CSV), TOY_ROLES)
        assert ds.schema.features[0].values == ("blue", "red")
        assert ds.schema.features[1].values == ("big", "small")

    def test_missing_column_is_schema_error(self, tmp_path):
        path = _write(tmp_path, TOY_CSV)
        roles = ColumnRoles(sensitive="sex", label="label", categorical=("nope",))
        with pytest.raises(SchemaError):
            load_csv(path, roles)

    def test_non_binary_sensitive_is_validation_error(self, tmp_path):
        path = _write(tmp_path, "f,s,y\n1,2,0\n2,1,1\n")
        with pytest.raises(ValidationError):
            load_csv(path, ColumnRoles(sensitive="s", label="y", continuous=("f",)))

    def test_empty_file_is_ingestion_error(self, tmp_path):
        with pytest.raises(IngestionError):
            load_csv(_write(tmp_path, ""), TOY_ROLES)
        with pytest.raises(IngestionError):
            load_csv(_write(tmp_path, "f,s,y\n"), ColumnRoles(sensitive="s", label="y", continuous=("f",)))

    def test_missing_value_rejected(self, tmp_path):
        path = _write(tmp_path, "f,s,y\n1,0,0\n,1,1\n")
        with pytest.raises(ValidationError):
            load_csv(path, ColumnRoles(sensitive="s", label="y", continuous=("f",)))

    def test_extra_columns_ignored(self, tmp_path):
        path = _write(tmp_path, "id,f,s,y\nr1,a,0,0\nr2,b,1,1\n")
        ds = load_csv(path, ColumnRoles(sensitive="s", label="y", categorical=("f",)))
        assert ds.n_features == 1

    def test_duplicate_header_rejected(self, tmp_path):
        path = _write(tmp_path, "f,f,s,y\na,zz,0,0\nb,ww,1,1\n")
        with pytest.raises(IngestionError):
            load_csv(path, ColumnRoles(sensitive="s", label="y", categorical=("f",)))

    def test_numeric_categorical_values_become_floats(self, tmp_path):
        path = _write(tmp_path, "f,s,y\n1,0,0\n2,1,1\n")
        ds = load_csv(path, ColumnRoles(sensitive="s", label="y", categorical=("f",)))
        assert ds.schema.features[0].values == (1.0, 2.0)

    def test_group_orientation_flips_sensitive(self, tmp_path):
        # raw data: P[Y=1|S=1] = 0 < P[Y=1|S=0] = 1, so S must flip
        path = _write(tmp_path, "f,s,y\na,1,0\na,1,0\nb,0,1\nb,0,1\n")
        ds = load_csv(path, ColumnRoles(sensitive="s", label="y", categorical=("f",)))
        assert ds.orientation_flipped
        assert stats(ds).pct_y1_s1 >= stats(ds).pct_y1_s0

    def test_advantaged_group_invariant_after_load(self, tmp_path):
        ds = load_csv(_write(tmp_path, TOY_CSV), TOY_ROLES)
        st_ = stats(ds)
        assert st_.pct_y1_s1 >= st_.pct_y1_s0


class TestRoundTrip:
    def test_stats_survive_write_and_reload(self, tmp_path):
        ds = load_csv(_write(tmp_path, TOY_CSV), TOY_ROLES)
        out = tmp_path / "out.csv"
        write_csv(ds, out)
        roles = ColumnRoles(sensitive="sex", label="label",
                            categorical=("color", "size"), continuous=("amount",))
        again = load_csv(out, roles)
        assert stats(again) == stats(ds)

    def test_exact_row_round_trip_with_schema(self, tmp_path):
        ds = load_csv(_write(tmp_path, TOY_CSV), TOY_ROLES)
        out = tmp_path / "out.csv"
        write_csv(ds, out)
        again = load_csv(out, TOY_ROLES, schema=ds.schema)
        assert np.array_equal(again.S, ds.S) and np.array_equal(again.Y, ds.Y)
        for j in range(ds.n_features):
            assert list(again.X[:, j]) == list(ds.X[:, j])


class TestSplit:
    def test_eighty_twenty_partition(self):
        ds = make_cat_dataset([(i % 2,) for i in range(1000)],
                              [i % 2 for i in range(1000)],
                              [(i // 2) % 2 for i in range(1000)])
        train, test = split(ds, 0.8, seed=7)
        assert len(train) == 800 and len(test) == 200

    def test_deterministic(self):
        ds = make_cat_dataset([(i % 3,) for i in range(50)],
                              [i % 2 for i in range(50)],
                              [(i // 3) % 2 for i in range(50)])
        a = split(ds, 0.8, seed=3)
        b = split(ds, 0.8, seed=3)
        assert np.array_equal(a[0].Y, b[0].Y) and np.array_equal(a[1].Y, b[1].Y)
        for j in range(ds.n_features):
            assert list(a[0].X[:, j]) == list(b[0].X[:, j])

    def test_degenerate_fraction_rejected(self):
        ds = make_cat_dataset([(0,), (1,)], [0, 1], [0, 1])
        with pytest.raises(ValueError):
            split(ds, 0.4, seed=0)  # train side would be empty
        with pytest.raises(ValueError):
            split(ds, 1.5, seed=0)

    @given(n=st.integers(min_value=5, max_value=200),
           frac=st.floats(min_value=0.1, max_value=0.9),
           seed=st.integers(min_value=0, max_value=2**32 - 1))
    @settings(max_examples=50, deadline=None)
    def test_partition_property(self, n, frac, seed):
        rows = [(i,) for i in range(n)]
        ds = make_cat_dataset(rows, [i % 2 for i in range(n)],
                              [(i // 2) % 2 for i in range(n)],
                              value_sets=[tuple(range(n))])
        if int(n * frac) in (0, n):
            return
        train, test = split(ds, frac, seed)
        got = sorted([r[0] for r in train.X] + [r[0] for r in test.X])
        assert got == list(range(n))


class TestStats:
    def test_all_positive_labels(self):
        ds = make_cat_dataset([(0,)] * 4, [0, 1, 0, 1], [1, 1, 1, 1])
        assert stats(ds).pct_y1_overall == 1.0

    def test_hand_counts(self):
        ds = make_cat_dataset([(0,), (1,), (0,), (1,)], [1, 1, 0, 0], [1, 0, 0, 1])
        st_ = stats(ds)
        assert (st_.n_overall, st_.n_s1, st_.n_s0) == (4, 2, 2)
        assert st_.pct_y1_s1 == 0.5 and st_.pct_y1_s0 == 0.5
        assert st_.n_s1 + st_.n_s0 == st_.n_overall

    def test_feature_count_is_encoded_width(self):
        ds = make_cat_dataset([(0, "a"), (1, "b")], [0, 1], [0, 1],
                              value_sets=[(0, 1), ("a", "b", "c")])
        assert stats(ds).n_features == 5


class TestSubset:
    def test_prediction_filter(self):
        ds = make_cat_dataset([(0,), (1,), (0,)], [1, 1, 0], [0, 1, 1])
        got = subset(ds, s=1, predictions=[0, 1, 1], predicted=0)
        assert len(got) == 1 and got.S[0] == 1

    def test_empty_match_is_not_an_error(self):
        ds = make_cat_dataset([(0,), (1,)], [1, 1], [1, 1])
        assert len(subset(ds, s=0)) == 0

    def test_misaligned_predictions_rejected(self):
        ds = make_cat_dataset([(0,), (1,)], [0, 1], [0, 1])
        with pytest.raises(ValidationError):
            subset(ds, predictions=[1], predicted=1)

    def test_complement_reconstitutes_rows(self):
        rng = np.random.default_rng(5)
        rows = [tuple(r) for r in rng.integers(0, 3, size=(30, 2))]
        ds = make_cat_dataset(rows, rng.integers(0, 2, 30), rng.integers(0, 2, 30),
                              value_sets=[(0, 1, 2)] * 2)
        part1 = subset(ds, s=1, y=0)
        rest = [subset(ds, s=1, y=1), subset(ds, s=0, y=0), subset(ds, s=0, y=1)]
        rebuilt = sorted(
            [tuple(r) + (s, y) for piece in [part1] + rest if len(piece)
             for r, s, y in zip(piece.X, piece.S, piece.Y)])
        original = sorted(tuple(r) + (s, y) for r, s, y in zip(ds.X, ds.S, ds.Y))
        assert rebuilt == original


class TestEncoding:
    def test_one_hot_layout(self):
        ds = make_cat_dataset([("a", 0.5), ("b", 1.0)], [1, 0], [1, 0],
                              value_sets=None)
        # second feature observed values {0.5, 1.0} treated as categorical here
        M = encode_features(ds.schema, ds.X)
        assert M.shape == (2, 4)
        assert M[0].tolist() == [1.0, 0.0, 1.0, 0.0]
        assert M[1].tolist() == [0.0, 1.0, 0.0, 1.0]

    def test_sensitive_appended_last(self):
        ds = make_cont_dataset([(0.2,), (0.8,)], [1, 0], [0, 1])
        M, y = encode_dataset(ds)
        assert M.shape == (2, 2)
        assert M[:, -1].tolist() == [1.0, 0.0]
        assert y.tolist() == [0, 1]

    def test_unknown_value_rejected(self):
        ds = make_cat_dataset([("a",), ("b",)], [0, 1], [0, 1])
        with pytest.raises(SchemaError):
            encode_features(ds.schema, np.array([["c"]], dtype=object))

    def test_uniform_rows_feasible(self):
        ds = make_cat_dataset([("a", 0), ("b", 1)], [0, 1], [0, 1])
        rng = np.random.default_rng(0)
        rows = uniform_rows(ds.schema, 200, rng)
        assert all(r[0] in ("a", "b") and r[1] in (0, 1) for r in rows)

    def test_discretize_continuous_bins(self):
        ds = make_cont_dataset([(0.0,), (0.05,), (0.55,), (1.0,)], [0, 1, 0, 1], [0, 1, 1, 0])
        binned = discretize_continuous(ds, bins=10)
        assert binned.schema.features[0].values == tuple(range(10))
        assert [r[0] for r in binned.X] == [0, 0, 5, 9]


class TestImmutability:
    def test_arrays_are_read_only(self):
        ds = make_cat_dataset([(0,), (1,)], [0, 1], [0, 1])
        with pytest.raises(ValueError):
            ds.S[0] = 1
        with pytest.raises(ValueError):
            ds.X[0, 0] = 5

    def test_take_copies(self):
        ds = make_cat_dataset([(0,), (1,), (0,)], [0, 1, 0], [0, 1, 1])
        sub = take(ds, [0, 2])
        assert len(sub) == 2 and sub.schema is ds.schema
