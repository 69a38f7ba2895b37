"""Tests for time series validation, statistics and CSV files."""
import os
import shutil
import tempfile
from unittest import TestCase

import numpy as np
import pytest

from scientist import series
from scientist.exceptions import SeriesError
from scientist.test.tools import COIN_STATES, puck_series, coin_walk


class TestDeriveStates(TestCase):

    def test_rising_values_are_state_zero(self):
        derived = series.derive_states([0, 7, 20])
        self.assertEqual(derived.states(), (0, 0))
        self.assertEqual(derived.values(), (0.0, 7.0, 20.0))

    def test_equal_values_are_state_zero(self):
        self.assertEqual(series.derive_states([1, 1, 0]).states(), (0, 1))

    def test_needs_two_values(self):
        with self.assertRaises(SeriesError):
            series.derive_states([3])

    def test_rejects_non_finite(self):
        with self.assertRaises(SeriesError) as caught:
            series.derive_states([0, float("nan"), 2])
        self.assertEqual(caught.exception.index, 1)

    def test_states_match_the_sign_of_each_step(self):
        rng = np.random.default_rng(5)
        for _ in range(50):
            values = np.cumsum(rng.normal(size=30)).tolist()
            derived = series.derive_states(values)
            expected = tuple(0 if after >= before else 1 for before, after in zip(values, values[1:]))
            self.assertEqual(derived.states(), expected)
            self.assertEqual(series.TimeSeries(derived.x0, derived.samples), derived)


class TestTimeSeries(TestCase):

    def test_inconsistent_state_names_the_sample(self):
        samples = (series.Sample(0, 1.0), series.Sample(0, 0.0))
        with self.assertRaises(SeriesError) as caught:
            series.TimeSeries(0.0, samples)
        self.assertEqual(caught.exception.index, 2)

    def test_trajectory_skips_the_state_rule(self):
        samples = (series.Sample(1, 1.0),)
        self.assertEqual(len(series.Trajectory(0.0, samples)), 1)

    def test_bad_state(self):
        with self.assertRaises(SeriesError):
            series.Sample(2, 0.0)

    def test_empty(self):
        with self.assertRaises(SeriesError):
            series.TimeSeries(0.0, ())


def test_puck_distances():
    distances = series.distances(puck_series())
    assert len(distances) == 19
    assert distances == tuple(float(6 * t + 1) for t in range(1, 20))


def test_coin_walk_distances_are_all_one():
    assert series.distances(coin_walk()) == (1.0,) * 20


def test_coin_walk_stats():
    stats = series.stats(coin_walk())
    assert stats.h == 3.0
    assert stats.l == -1.0
    assert stats.d_avg == 1.0
    assert stats.freq0 == 0.5
    assert stats.freq1 == 0.5
    assert stats.av == pytest.approx(12.0 / 21.0)
    assert coin_walk().stats.value("h") == 3.0


def test_stats_value_rejects_frequencies():
    with pytest.raises(KeyError):
        series.stats(coin_walk()).value("freq0")


class TestCsv(TestCase):

    def setUp(self):
        self.tempdir = tempfile.mkdtemp()

    def tearDown(self):
        shutil.rmtree(self.tempdir)

    def test_write_then_read(self):
        path = os.path.join(self.tempdir, "coin_walk.csv")
        series.write_csv(coin_walk(), path)
        self.assertEqual(series.read_csv(path), coin_walk())

    def test_write_then_read_fractional_values(self):
        path = os.path.join(self.tempdir, "walk.csv")
        walk = series.derive_states([0.1, 0.35, -2.718281828459045, 1e-07, 1.0 / 3, 123456.789])
        series.write_csv(walk, path)
        self.assertEqual(series.read_csv(path), walk)

    def test_text_layout(self):
        text = series.to_csv_text(puck_series())
        lines = text.splitlines()
        self.assertEqual(lines[0], "# x0=0")
        self.assertEqual(lines[1], "q,x")
        self.assertEqual(lines[2], "0,7")
        self.assertEqual(lines[-1], "0,1159")

    def test_missing_header(self):
        with self.assertRaises(SeriesError):
            series.parse_csv_text("0,1\n")

    def test_bad_state_names_line(self):
        with self.assertRaises(SeriesError) as caught:
            series.parse_csv_text("q,x\n0,1\n2,3\n")
        self.assertEqual(caught.exception.line, 3)

    def test_bad_value_names_line(self):
        with self.assertRaises(SeriesError) as caught:
            series.parse_csv_text("# x0=0\nq,x\n0,one\n")
        self.assertEqual(caught.exception.line, 3)

    def test_non_finite_values_are_rejected(self):
        for text in ("nan", "inf", "-inf"):
            with self.assertRaises(SeriesError) as caught:
                series.parse_csv_text("q,x\n0,{}\n".format(text))
            self.assertEqual(caught.exception.line, 2)

    def test_state_two_is_rejected(self):
        with self.assertRaises(SeriesError) as caught:
            series.parse_csv_text("q,x\n2,1\n")
        self.assertEqual(caught.exception.line, 2)

    def test_inconsistent_row(self):
        with self.assertRaises(SeriesError):
            series.parse_csv_text("q,x\n1,5\n")

    def test_x0_defaults_to_zero(self):
        parsed = series.parse_csv_text("q,x\n" + "".join(
            "{},{}\n".format(q, x) for q, x in zip(COIN_STATES, coin_walk().values()[1:])))
        self.assertEqual(parsed.x0, 0.0)
        self.assertEqual(parsed, coin_walk())
