"""Tests for reconstruction, forecasting and theory bundles."""
import os
import shutil
import tempfile
from unittest import TestCase

import numpy as np

from scientist import qmat, series, theory, xft
from scientist.exceptions import BundleError, SeriesError, UnresolvedTerminalError, UsageError
from scientist.test.tools import puck_series, coin_walk

PUCK_BINDINGS = xft.TerminalBindings.of(
    t=xft.IndexK(), v=xft.NamedConstant(4.0), a=xft.NamedConstant(6.0),
    o=xft.NamedConstant(1.0), h=xft.NamedConstant(0.5),
)


def newton_theory():
    return theory.Theory(
        xft.parse_text("(+ (* v t) (* (* h a) (* t t)))"),
        qmat.parse_gate_tree("(+ Y I)"),
        PUCK_BINDINGS,
        (("preset", "newton"), ("seed", "1")),
    )


def coin_theory():
    bindings = xft.TerminalBindings.of(t=xft.IndexK(), d=xft.SeriesStat("d_avg"))
    return theory.Theory(xft.parse_text("(* d t)"), qmat.parse_gate_tree("H"), bindings)


class TestReconstruct(TestCase):

    def test_teacher_forced_newton_is_exact(self):
        rebuilt = theory.reconstruct(newton_theory(), puck_series())
        self.assertEqual(theory.accuracy(rebuilt, puck_series()), 1.0)
        self.assertEqual(rebuilt.values(), puck_series().values())

    def test_teacher_forced_coin_is_exact(self):
        rebuilt = theory.reconstruct(coin_theory(), coin_walk())
        self.assertEqual(theory.accuracy(rebuilt, coin_walk()), 1.0)

    def test_free_run_needs_rng(self):
        with self.assertRaises(UsageError):
            theory.reconstruct(newton_theory(), puck_series(), mode=theory.FREE_RUN)

    def test_free_run_with_certain_bets_is_exact(self):
        rebuilt = theory.reconstruct(newton_theory(), puck_series(), theory.FREE_RUN,
                                     np.random.default_rng(0))
        self.assertEqual(theory.accuracy(rebuilt, puck_series()), 1.0)

    def test_wrong_model_loses_accuracy(self):
        wrong = theory.Theory(xft.parse_text("(* v t)"), qmat.parse_gate_tree("I"), PUCK_BINDINGS)
        rebuilt = theory.reconstruct(wrong, puck_series())
        self.assertLess(theory.accuracy(rebuilt, puck_series()), 0.1)

    def test_accuracy_needs_equal_lengths(self):
        with self.assertRaises(SeriesError):
            theory.accuracy(puck_series(), coin_walk())

    def test_unbound_terminal(self):
        with self.assertRaises(UnresolvedTerminalError):
            theory.Theory(xft.parse_text("(+ t q)"), qmat.parse_gate_tree("I"), PUCK_BINDINGS)


class TestPredict(TestCase):

    def test_newton_one_step(self):
        forecast = theory.predict(newton_theory(), puck_series(), 1, np.random.default_rng(0))
        step = forecast.steps[0]
        self.assertEqual((step.k, step.q_pred, step.x_pred, step.p1), (20, 0, 1280.0, 1.0))
        self.assertTrue(forecast.to_csv_text().splitlines()[1].startswith("20,0,1280,1.0,"))

    def test_newton_continues_the_law(self):
        forecast = theory.predict(newton_theory(), puck_series(), 5, np.random.default_rng(0))
        self.assertEqual([step.x_pred for step in forecast.steps],
                         [float(4 * t + 3 * t * t) for t in range(20, 25)])

    def test_horizon_must_be_positive(self):
        with self.assertRaises(UsageError):
            theory.predict(newton_theory(), puck_series(), 0, np.random.default_rng(0))

    def test_fifty_fifty_forecasts(self):
        frequency = theory.forecast_state_frequency(coin_theory(), coin_walk(), 10000,
                                                    np.random.default_rng(8))
        self.assertAlmostEqual(frequency, 0.5, delta=0.02)

    def test_coin_steps_are_unit(self):
        forecast = theory.predict(coin_theory(), coin_walk(), 10, np.random.default_rng(1))
        values = [coin_walk().samples[-1].x] + [step.x_pred for step in forecast.steps]
        self.assertTrue(all(abs(b - a) == 1.0 for a, b in zip(values, values[1:])))
        self.assertTrue(all(abs(step.p1 - 0.5) < 1e-9 for step in forecast.steps))


class TestBundles(TestCase):

    def setUp(self):
        self.tempdir = tempfile.mkdtemp()
        self.bundle = os.path.join(self.tempdir, "theory")

    def tearDown(self):
        shutil.rmtree(self.tempdir)

    def test_save_and_load(self):
        theory.save(newton_theory(), self.bundle)
        self.assertEqual(sorted(os.listdir(self.bundle)), sorted(
            [theory.XFT_FILE, theory.QDT_FILE, theory.BINDINGS_FILE, theory.PROVENANCE_FILE]))
        self.assertEqual(theory.load(self.bundle), newton_theory())

    def test_stat_bindings_survive(self):
        theory.save(coin_theory(), self.bundle)
        loaded = theory.load(self.bundle)
        self.assertEqual(loaded.bindings, coin_theory().bindings)

    def test_missing_directory(self):
        with self.assertRaises(BundleError):
            theory.load(os.path.join(self.tempdir, "nowhere"))

    def test_missing_file(self):
        theory.save(newton_theory(), self.bundle)
        os.remove(os.path.join(self.bundle, theory.QDT_FILE))
        with self.assertRaises(BundleError) as caught:
            theory.load(self.bundle)
        self.assertEqual(caught.exception.filename, theory.QDT_FILE)

    def test_corrupt_tree(self):
        theory.save(newton_theory(), self.bundle)
        with open(os.path.join(self.bundle, theory.XFT_FILE), "w") as handle:
            handle.write("(+ v\n")
        with self.assertRaises(BundleError) as caught:
            theory.load(self.bundle)
        self.assertEqual(caught.exception.filename, theory.XFT_FILE)

    def test_unbound_terminal_in_bundle(self):
        theory.save(newton_theory(), self.bundle)
        with open(os.path.join(self.bundle, theory.BINDINGS_FILE), "w") as handle:
            handle.write("terminal.t = index_k\n")
        with self.assertRaises(BundleError):
            theory.load(self.bundle)


def test_flipped_states_score_zero():
    observed = puck_series()
    flipped = series.Trajectory(observed.x0, tuple(
        series.Sample(1 - sample.q, sample.x) for sample in observed.samples))
    assert theory.accuracy(flipped, observed) == 0.0
    assert theory.accuracy(observed, observed) == 1.0
