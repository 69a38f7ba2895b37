"""Wiring between genomes, fitness functions and the GP engine for one
training series, and end-to-end preset runs."""
import logging
import os
from dataclasses import dataclass, replace
from functools import partial

import numpy as np

from . import objectives, qmat, report, theory, xft
from .config import QDT, XFT
from .evolve import GenomeOps, run
from .exceptions import EnumerationCapError
from .util import format_number

log = logging.getLogger(__name__)

# stream purpose for preset forecasts, distinct from the engine's
FORECAST_STREAM = 7
# runs stop once within this much (relative) of the best possible fitness
TARGET_TOLERANCE = 1e-9


def xft_genome_ops(grammar):
    return GenomeOps(
        random=partial(xft.random_tree, grammar),
        crossover=partial(_xft_crossover, max_depth=grammar.max_depth),
        mutate=lambda tree, rng: xft.mutate(tree, grammar, rng),
        to_text=xft.to_text,
    )


def qdt_genome_ops(grammar):
    return GenomeOps(
        random=partial(qmat.random_gate_tree, grammar),
        crossover=partial(_qdt_crossover, max_depth=grammar.max_depth),
        mutate=lambda tree, rng: qmat.mutate(tree, grammar, rng),
        to_text=qmat.gate_tree_text,
    )


def _xft_crossover(first, second, rng, max_depth):
    return xft.crossover(first, second, rng, max_depth=max_depth)


def _qdt_crossover(first, second, rng, max_depth):
    return qmat.crossover(first, second, rng, max_depth=max_depth)


def xft_fitness_fn(series, bindings):
    """fitness(genome, rng) scoring an xFT on `series`."""
    if bindings.needs_stats():
        bindings = bindings.bind(series)
    return lambda tree, rng: objectives.xft_objective(tree, series, bindings)


def qdt_fitness_fn(series, gp, mode=objectives.EXACT, normalization="squared"):
    """fitness(genome, rng) scoring a qDT on `series`.

    Exact scores are cached by tree text. Trees with more choice nodes than
    the enumeration cap are scored by Monte-Carlo.
    """
    cache = {}

    def monte_carlo(tree, rng):
        return objectives.qdt_fitness(tree, series, objectives.MONTE_CARLO, rng,
                                      draws=gp.mc_draws, normalization=normalization)

    def fitness(tree, rng):
        if mode == objectives.MONTE_CARLO:
            return monte_carlo(tree, rng)
        key = qmat.gate_tree_text(tree)
        if key not in cache:
            try:
                cache[key] = objectives.qdt_fitness(
                    tree, series, objectives.EXACT, cap=gp.enumeration_cap,
                    normalization=normalization)
            except EnumerationCapError:
                return monte_carlo(tree, rng)
        return cache[key]

    return fitness


def evolve_xft(series, run_config, seed, initial=None, target_fitness=None):
    """Evolve an xFT for `series`; returns (best Individual, RunHistory).

    With `target_fitness` the run stops early once the best fitness reaches it.
    """
    gp = replace(run_config.gp_config(XFT, seed), target_fitness=target_fitness)
    grammar = run_config.xft_grammar(gp)
    return run(gp, xft_genome_ops(grammar), xft_fitness_fn(series, run_config.bindings), initial)


def evolve_qdt(series, run_config, seed, initial=None, target_fitness=None):
    """Evolve a qDT for `series`; returns (best Individual, RunHistory)."""
    gp = replace(run_config.gp_config(QDT, seed), target_fitness=target_fitness)
    grammar = run_config.qdt_grammar(gp)
    fitness = qdt_fitness_fn(series, gp, run_config.qdt_mode, run_config.normalization)
    return run(gp, qdt_genome_ops(grammar), fitness, initial)


# ---- Presets -----

@dataclass(frozen=True)
class PresetResult(object):
    """The outcome of one preset run on one seed."""
    preset: str
    seed: int
    theory: object
    xft_fitness: float
    qdt_fitness: float
    qdt_fraction: float
    accuracy: float
    forecast_p1: float
    state0_frequency: float
    failures: tuple = ()

    @property
    def passed(self):
        return not self.failures

    def summary(self):
        return dict(
            preset=self.preset,
            seed=self.seed,
            passed=self.passed,
            xft=xft.to_infix(self.theory.xft),
            qdt=qmat.to_infix(self.theory.qdt),
            xft_fitness=self.xft_fitness,
            qdt_fitness=self.qdt_fitness,
            qdt_fraction=self.qdt_fraction,
            accuracy=self.accuracy,
            forecast_p1=self.forecast_p1,
            state0_frequency=self.state0_frequency,
            failures=list(self.failures),
        )


def check_thresholds(thresholds, sse, fraction, score):
    """Messages for every threshold the run missed."""
    failures = []
    if thresholds.xft_sse is not None and not sse < thresholds.xft_sse:
        failures.append("xFT squared error {} is not below {}".format(sse, thresholds.xft_sse))
    if thresholds.accuracy is not None and score < thresholds.accuracy:
        failures.append("accuracy {} is below {}".format(score, thresholds.accuracy))
    if thresholds.qdt_fraction is not None and fraction < thresholds.qdt_fraction - 1e-9:
        failures.append("qDT fitness reaches {} of the optimum, need {}".format(
            fraction, thresholds.qdt_fraction))
    return tuple(failures)


def qdt_target(series, mode=objectives.EXACT):
    """The best qDT fitness a run can reach on `series`.

    Exact scores are bounded by the state margin, sampled ones by the sum of
    distances. The bound is lowered by TARGET_TOLERANCE so rounding in the
    fitness does not keep a finished run going.
    """
    if mode == objectives.EXACT:
        bound = abs(objectives.state_margin(series))
    else:
        bound = objectives.max_qdt_fitness(series)
    return bound - TARGET_TOLERANCE * max(1.0, bound)


def run_preset(preset, seed, out_dir=None):
    """Evolve both trees for `preset` with `seed` and check the thresholds.

    With `out_dir` the theory bundle, run histories and reconstruction report
    are written to `out_dir/<preset>-seed<seed>/`.
    """
    observed = preset.load_series()
    run_config = preset.run_config
    best_xft, xft_history = evolve_xft(observed, run_config, seed,
                                       target_fitness=-TARGET_TOLERANCE)
    best_qdt, qdt_history = evolve_qdt(observed, run_config, seed,
                                       target_fitness=qdt_target(observed, run_config.qdt_mode))

    optimum = objectives.max_qdt_fitness(observed)
    fraction = best_qdt.fitness / optimum if optimum > 0 else 1.0
    provenance = (
        ("preset", preset.name),
        ("seed", str(seed)),
        ("normalization", run_config.normalization),
        ("xft_fitness", format_number(best_xft.fitness)),
        ("qdt_fitness", format_number(best_qdt.fitness)),
    )
    model = theory.Theory(best_xft.genome, best_qdt.genome, run_config.bindings, provenance)
    rebuilt = theory.reconstruct(model, observed)
    score = theory.accuracy(rebuilt, observed)

    rng = np.random.default_rng([seed, FORECAST_STREAM])
    forecast = theory.predict(model, observed, 1, rng)
    frequency = theory.forecast_state_frequency(model, observed, preset.forecast_draws, rng)

    result = PresetResult(
        preset.name, seed, model, best_xft.fitness, best_qdt.fitness, fraction, score,
        forecast.steps[0].p1, frequency,
        check_thresholds(preset.thresholds, -best_xft.fitness, fraction, score),
    )
    if out_dir is not None:
        _write_preset_outputs(result, observed, rebuilt, xft_history, qdt_history,
                              os.path.join(out_dir, "{}-seed{}".format(preset.name, seed)))
    log.info("%s seed %d: %s", preset.name, seed, "PASS" if result.passed else "FAIL")
    return result


def _write_preset_outputs(result, observed, rebuilt, xft_history, qdt_history, directory):
    theory.save(result.theory, os.path.join(directory, "theory"))
    xft_history.write_csv(os.path.join(directory, "xft_history.csv"))
    qdt_history.write_csv(os.path.join(directory, "qdt_history.csv"))
    report.write_reconstruction_csv(observed, rebuilt, os.path.join(directory, "reconstruction.csv"))
    report.write_svg(observed, rebuilt, os.path.join(directory, "reconstruction.svg"),
                     title="{} (seed {})".format(result.preset, result.seed))
