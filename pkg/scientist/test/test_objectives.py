"""Tests for the xFT and qDT fitness functions."""
import math
from unittest import TestCase

import numpy as np

from scientist import datagen, objectives, qmat, series, xft
from scientist.exceptions import ConfigError, EnumerationCapError
from scientist.test.tools import puck_series, coin_walk


def gate_tree(text):
    return qmat.parse_gate_tree(text)


def game_stderr(tree, walk, draws):
    """Standard error of the mean of `draws` sampled games, from the model.

    Between-strategy spread of the expected winnings plus the mean spread
    of a single game under one strategy.
    """
    p1 = qmat.strategy_probabilities(tree)[:, np.newaxis]
    d = walk.distance_array
    win = np.where(walk.state_array == 0, p1, 1.0 - p1)
    means = np.sum(d * (2.0 * win - 1.0), axis=1)
    within = np.mean(np.sum(d * d * 4.0 * win * (1.0 - win), axis=1))
    return math.sqrt((within + np.var(means)) / draws)


class TestExactFitness(TestCase):

    def test_y_plus_identity_on_puck(self):
        fitness = objectives.qdt_fitness(gate_tree("(+ Y I)"), puck_series())
        self.assertAlmostEqual(fitness, 1159.0, delta=1e-9)
        self.assertEqual(fitness, objectives.max_qdt_fitness(puck_series()))

    def test_y_plus_identity_on_coin_walk(self):
        self.assertAlmostEqual(objectives.qdt_fitness(gate_tree("(+ Y I)"), coin_walk()), 0.0,
                               delta=1e-9)

    def test_state_margin(self):
        self.assertEqual(objectives.state_margin(puck_series()), 1159.0)
        self.assertEqual(objectives.state_margin(coin_walk()), 0.0)

    def test_opposite_bet_loses_everything(self):
        # diag(0, 2i) always bets on state 1
        tree = gate_tree("(+ S (* (* X D) (* T T)))")
        self.assertAlmostEqual(objectives.qdt_fitness(tree, puck_series()), -1159.0, delta=1e-9)

    def test_mean_over_strategies(self):
        tree = gate_tree("(+ S (* (* (// I X) (* (// D Z) T)) T))")
        # strategies bet (1,0), (0,1) and twice (0.5,0.5): mean of 1, -1, 0, 0
        self.assertAlmostEqual(objectives.qdt_fitness(tree, puck_series()), 0.0, delta=1e-9)

    def test_bet_outcomes(self):
        outcomes = objectives.bet_outcomes(0.75, 0.25, coin_walk())
        self.assertEqual(len(outcomes), 20)
        self.assertEqual(outcomes[0].state, 1)
        self.assertAlmostEqual(outcomes[0].ev, -0.5)
        self.assertAlmostEqual(outcomes[1].ev, 0.5)

    def test_cap(self):
        tree = gate_tree("(// (// X Y) (// Z I))")
        with self.assertRaises(EnumerationCapError):
            objectives.qdt_fitness(tree, puck_series(), cap=1)

    def test_unknown_mode(self):
        with self.assertRaises(ConfigError):
            objectives.qdt_fitness(gate_tree("X"), puck_series(), mode="guess")


class TestMonteCarlo(TestCase):

    def test_needs_rng(self):
        with self.assertRaises(ConfigError):
            objectives.qdt_fitness(gate_tree("X"), puck_series(), mode=objectives.MONTE_CARLO)

    def test_deterministic_bets_have_no_spread(self):
        estimate = objectives.qdt_fitness_monte_carlo(gate_tree("(+ Y I)"), puck_series(),
                                                      np.random.default_rng(1), draws=64)
        self.assertAlmostEqual(estimate.mean, 1159.0, delta=1e-9)
        self.assertEqual(estimate.stderr, 0.0)

    def test_agrees_with_exact(self):
        grammar = qmat.GateGrammar(init_depth=(1, 4), max_depth=4)
        rng = np.random.default_rng(77)
        draws = 4096
        offsets, variances = [], []
        for instance in range(50):
            tree = qmat.random_gate_tree(grammar, rng)
            walk = datagen.gen_coin(datagen.CoinParams(steps=12, seed=instance))
            exact = objectives.qdt_fitness(tree, walk)
            estimate = objectives.qdt_fitness_monte_carlo(tree, walk, rng, draws=draws)
            stderr = game_stderr(tree, walk, draws)
            self.assertLessEqual(abs(estimate.mean - exact), 4 * stderr + 1e-9,
                                 msg=qmat.gate_tree_text(tree))
            offsets.append(estimate.mean - exact)
            variances.append(stderr ** 2)
        # the instances are independent, so their summed offsets have a known spread
        self.assertLessEqual(abs(sum(offsets)), 3 * math.sqrt(sum(variances)) + 1e-9)


def test_xft_objective_delegates():
    bindings = xft.TerminalBindings.of(t=xft.IndexK())
    assert objectives.xft_objective(xft.parse_text("t"), coin_walk(), bindings) == 0.0


def test_expected_value_step():
    assert objectives.expected_value_step(1.0, 0.0, 0, 7.0) == 7.0
    assert objectives.expected_value_step(1.0, 0.0, 1, 1.0) == -1.0
    for state in (0, 1):
        assert objectives.expected_value_step(0.5, 0.5, state, 3.0) == 0.0


def test_flat_single_sample():
    flat = series.derive_states([2.0, 2.0])
    assert objectives.qdt_fitness(qmat.parse_gate_tree("(+ Y I)"), flat) == 0.0
