"""Tests for the command-line front end."""
import io
import os
import shutil
import tempfile
from unittest import TestCase

import mock

try:
    import simplejson as json
except ImportError:
    import json

from scientist import cli, experiment, qmat, series, theory, xft
from scientist.test.tools import puck_series, coin_walk

SMALL_CONFIG = """\
population_size = 20
generations = 2
terminal.t = index_k
terminal.d = stat:d_avg
"""


class CliTestCase(TestCase):

    def setUp(self):
        self.tempdir = tempfile.mkdtemp()
        patcher = mock.patch("scientist.cli.configure_logging")
        patcher.start()
        self.addCleanup(patcher.stop)

    def tearDown(self):
        shutil.rmtree(self.tempdir)

    def path(self, *parts):
        return os.path.join(self.tempdir, *parts)

    def main(self, *argv):
        """Run the CLI and return (exit code, stdout, stderr)."""
        with mock.patch("sys.stdout", new_callable=io.StringIO) as out, \
                mock.patch("sys.stderr", new_callable=io.StringIO) as err:
            code = cli.main(list(argv))
        return code, out.getvalue(), err.getvalue()

    def write_series(self, observed, name):
        path = self.path(name)
        series.write_csv(observed, path)
        return path

    def save_newton(self):
        bindings = xft.TerminalBindings.of(t=xft.IndexK(), v=xft.NamedConstant(4.0),
                                           h=xft.NamedConstant(0.5), a=xft.NamedConstant(6.0))
        model = theory.Theory(xft.parse_text("(+ (* v t) (* (* h a) (* t t)))"),
                              qmat.parse_gate_tree("(+ Y I)"), bindings)
        theory.save(model, self.path("newton"))
        return self.path("newton")


class TestDatagen(CliTestCase):

    def test_puck_table(self):
        code, out, _ = self.main("datagen", "puck", "--v", "4", "--a", "6", "--steps", "20",
                                 "--out", self.path("puck.csv"))
        self.assertEqual(code, 0)
        self.assertIn("19 rows", out)
        self.assertEqual(series.read_csv(self.path("puck.csv")), puck_series())

    def test_puck_to_stdout(self):
        code, out, _ = self.main("datagen", "puck", "--steps", "20")
        self.assertEqual(code, 0)
        self.assertEqual(out, series.to_csv_text(puck_series()))

    def test_coin_is_reproducible(self):
        for name in ("first.csv", "second.csv"):
            self.main("datagen", "coin", "--steps", "20", "--seed", "7", "--out", self.path(name))
        with open(self.path("first.csv")) as first, open(self.path("second.csv")) as second:
            self.assertEqual(first.read(), second.read())

    def test_puck_needs_two_steps(self):
        code, _, err = self.main("datagen", "puck", "--steps", "1")
        self.assertEqual(code, 1)
        self.assertIn("steps", err)

    def test_unknown_command(self):
        self.assertEqual(self.main("teleport")[0], 1)


class TestEvolve(CliTestCase):

    def setUp(self):
        super(TestEvolve, self).setUp()
        self.data = self.write_series(coin_walk(), "coin.csv")
        with open(self.path("small.cfg"), "w") as handle:
            handle.write(SMALL_CONFIG)

    def test_missing_data_is_usage_error(self):
        self.assertEqual(self.main("evolve", "xft")[0], 1)

    def test_unreadable_data(self):
        code, _, err = self.main("evolve", "xft", "--data", self.path("nowhere.csv"),
                                 "--config", self.path("small.cfg"))
        self.assertEqual(code, 2)
        self.assertIn("error", err)

    def test_xft_outputs(self):
        out_dir = self.path("xft")
        code, out, _ = self.main("evolve", "xft", "--data", self.data, "--config",
                                 self.path("small.cfg"), "--seed", "3", "--out", out_dir)
        self.assertEqual(code, 0)
        self.assertIn("best fitness", out)
        for name in ("best.sexp", "summary.json", "history.csv", "config.cfg"):
            self.assertTrue(os.path.exists(os.path.join(out_dir, name)), name)
        with open(os.path.join(out_dir, "summary.json")) as handle:
            summary = json.load(handle)
        self.assertLessEqual(summary["best_fitness"], 0.0)
        self.assertEqual(summary["generations"], 2)
        with open(os.path.join(out_dir, "best.sexp")) as handle:
            xft.parse_text(handle.read().strip())

    def test_same_seed_same_history(self):
        for name in ("one", "two"):
            self.main("evolve", "xft", "--data", self.data, "--config", self.path("small.cfg"),
                      "--seed", "3", "--out", self.path(name))
        with open(self.path("one", "history.csv")) as one, \
                open(self.path("two", "history.csv")) as two:
            self.assertEqual(one.read(), two.read())

    def test_qdt_prints_strategies(self):
        code, out, _ = self.main("evolve", "qdt", "--data", self.data, "--config",
                                 self.path("small.cfg"), "--seed", "1")
        self.assertEqual(code, 0)
        self.assertIn("best qdt", out)
        self.assertTrue("p1" in out or "too many strategies" in out)

    def test_bad_config(self):
        with open(self.path("bad.cfg"), "w") as handle:
            handle.write("population_size = lots\n")
        code, _, err = self.main("evolve", "xft", "--data", self.data, "--config",
                                 self.path("bad.cfg"))
        self.assertEqual(code, 2)
        self.assertIn("line 1", err)


class TestPredictAndReport(CliTestCase):

    def setUp(self):
        super(TestPredictAndReport, self).setUp()
        self.bundle = self.save_newton()
        self.data = self.write_series(puck_series(), "puck.csv")

    def test_predict_one_step(self):
        code, out, _ = self.main("predict", "--theory", self.bundle, "--data", self.data,
                                 "--horizon", "1", "--seed", "4")
        self.assertEqual(code, 0)
        self.assertTrue(out.splitlines()[1].startswith("20,0,1280,1.0,"))

    def test_horizon_zero(self):
        code, _, _ = self.main("predict", "--theory", self.bundle, "--data", self.data,
                               "--horizon", "0")
        self.assertEqual(code, 1)

    def test_missing_bundle(self):
        code, _, _ = self.main("predict", "--theory", self.path("nowhere"), "--data", self.data)
        self.assertEqual(code, 2)

    def test_report(self):
        code, out, _ = self.main("report", "--theory", self.bundle, "--data", self.data,
                                 "--out", self.path("report"))
        self.assertEqual(code, 0)
        self.assertIn("accuracy: 1.0", out)
        self.assertTrue(os.path.exists(self.path("report", "reconstruction.svg")))
        self.assertTrue(os.path.exists(self.path("report", "reconstruction.csv")))


class TestRunPreset(CliTestCase):

    def result(self, failures=()):
        model = theory.Theory(xft.parse_text("t"), qmat.parse_gate_tree("H"),
                              xft.TerminalBindings.of(t=xft.IndexK()))
        return experiment.PresetResult("cat", 1, model, 0.0, 0.0, 1.0, 1.0, 0.5, 0.5, failures)

    def run_cli(self, *argv):
        return self.main("run", *(argv + ("--out", self.path("runs"))))

    def test_unknown_preset(self):
        code, _, err = self.main("run", "pendulum")
        self.assertEqual(code, 1)
        self.assertIn("newton", err)

    def test_any_passing_seed_passes(self):
        results = [self.result(("accuracy 0.5 is below 1.0",)), self.result()]
        with mock.patch("scientist.experiment.run_preset", side_effect=results) as run_preset:
            code, out, _ = self.run_cli("cat", "--seed", "1..2")
        self.assertEqual(code, 0)
        self.assertEqual(run_preset.call_count, 2)
        self.assertIn("1 of 2 seeds passed", out)

    def test_all_failing_seeds_fail(self):
        with mock.patch("scientist.experiment.run_preset",
                        return_value=self.result(("xFT squared error 4 is not below 1e-06",))):
            code, out, _ = self.run_cli("cat", "--seed", "3")
        self.assertEqual(code, 3)
        self.assertIn("FAIL", out)

    def test_overrides_reach_the_preset(self):
        with mock.patch("scientist.experiment.run_preset", return_value=self.result()) as run_preset:
            self.run_cli("cat", "--generations", "4", "--population-size", "12")
        preset = run_preset.call_args[0][0]
        gp = preset.run_config.gp_config("xft")
        self.assertEqual((gp.generations, gp.population_size), (4, 12))

    def test_outputs_go_to_runs_by_default(self):
        self.assertEqual(cli.build_parser().parse_args(["run", "cat"]).out, "runs")

    def test_summary_is_written(self):
        with mock.patch("scientist.experiment.run_preset", return_value=self.result()) as run_preset:
            self.run_cli("cat", "--seed", "2")
        self.assertEqual(run_preset.call_args[0][2], self.path("runs"))
        with open(self.path("runs", "cat-summary.json")) as handle:
            summary = json.load(handle)
        self.assertEqual([entry["passed"] for entry in summary], [True])

    def test_bad_seed_range(self):
        self.assertEqual(self.main("run", "cat", "--seed", "5..2")[0], 1)
