"""A generic genetic-programming engine.

The engine knows nothing about the genomes it breeds: a `GenomeOps` bundle
supplies initialization, crossover, mutation and text rendering, and a
fitness callable scores a genome (higher is better).

Every random decision draws from a stream derived from
(seed, generation, slot, purpose), so results do not depend on how fitness
evaluation is scheduled across worker threads.
"""
import bisect
import csv
import io
import logging
import math
import sys
from collections import namedtuple
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from . import settings
from .exceptions import ConfigError
from .util import format_number

log = logging.getLogger(__name__)

GenomeOps = namedtuple("GenomeOps", "random crossover mutate to_text")  # pylint: disable=C0103

# stream purposes
INIT, VARY, FITNESS = 0, 1, 2

CROSSOVER, MUTATION, COPY = "crossover", "mutation", "copy"

WORST_FITNESS = -sys.float_info.max


@dataclass(frozen=True)
class GPConfig(object):
    population_size: int = 500
    generations: int = 100
    crossover_prob: float = 0.70
    mutation_prob: float = 0.05
    max_depth: int = 10
    init_depth_range: tuple = (2, 6)
    elitism: int = 1
    seed: int = 0
    enumeration_cap: int = 12
    mc_draws: int = 256
    workers: int = 1
    # stop once the best fitness reaches this value; None runs every generation
    target_fitness: float = None

    def __post_init__(self):
        for name in ("crossover_prob", "mutation_prob"):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise ConfigError("{} must be in [0, 1], got {}".format(name, value))
        if self.crossover_prob + self.mutation_prob > 1.0 + 1e-12:
            raise ConfigError("crossover_prob + mutation_prob must not exceed 1")
        if self.population_size < 2:
            raise ConfigError("population_size must be at least 2")
        if self.generations < 0:
            raise ConfigError("generations must not be negative")
        if not 0 <= self.elitism <= self.population_size:
            raise ConfigError("elitism must be between 0 and population_size")
        low, high = self.init_depth_range
        if not 1 <= low <= high <= self.max_depth:
            raise ConfigError("need 1 <= init depth range <= max_depth")
        if not 0 <= self.seed < 2 ** 64:
            raise ConfigError("seed must fit in 64 bits")
        if self.enumeration_cap < 0 or self.mc_draws < 1 or self.workers < 1:
            raise ConfigError("enumeration_cap, mc_draws and workers must be positive")

    @classmethod
    def from_settings(cls, max_depth, **overrides):
        """A config from `settings.SCIENTIST` defaults, then `overrides`."""
        defaults = settings.SCIENTIST
        values = dict(
            population_size=defaults['population_size'],
            generations=defaults['generations'],
            crossover_prob=defaults['crossover_prob'],
            mutation_prob=defaults['mutation_prob'],
            max_depth=max_depth,
            init_depth_range=(defaults['init_depth_min'],
                              min(defaults['init_depth_max'], max_depth)),
            elitism=defaults['elitism'],
            enumeration_cap=defaults['enumeration_cap'],
            mc_draws=defaults['mc_draws'],
            workers=defaults['workers'],
        )
        values.update(overrides)
        return cls(**values)

    def with_seed(self, seed):
        return replace(self, seed=seed)


@dataclass(frozen=True)
class Individual(object):
    genome: object
    fitness: float = None


@dataclass(frozen=True)
class GenerationRecord(object):
    generation: int
    best_fitness: float
    mean_fitness: float
    best_genome: str
    operators: tuple = ()


@dataclass
class RunHistory(object):
    records: list = field(default_factory=list)

    def best_fitnesses(self):
        return [record.best_fitness for record in self.records]

    def operator_counts(self):
        """Totals of each variation operator over the run."""
        totals = {CROSSOVER: 0, MUTATION: 0, COPY: 0}
        for record in self.records:
            for name, count in record.operators:
                totals[name] += count
        return totals

    def to_csv_text(self):
        out = io.StringIO()
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(("generation", "best_fitness", "mean_fitness", "best_genome"))
        for record in self.records:
            writer.writerow((record.generation, format_number(record.best_fitness),
                             format_number(record.mean_fitness), record.best_genome))
        return out.getvalue()

    def write_csv(self, path):
        with open(path, "w") as handle:
            handle.write(self.to_csv_text())


def stream(seed, generation, slot, purpose):
    """An independent generator for one (generation, slot, purpose)."""
    return np.random.default_rng(np.random.SeedSequence([seed, generation, slot, purpose]))


class RankWheel(object):
    """Roulette over linear fitness ranks: worst = 1 ... best = n.

    Tied fitnesses share their average rank, so an all-equal population is
    sampled uniformly. Works for any sign of fitness.
    """
    def __init__(self, population):
        self.population = list(population)
        order = sorted(range(len(self.population)),
                       key=lambda index: self.population[index].fitness)
        ranks = [0.0] * len(order)
        start = 0
        while start < len(order):
            end = start
            fitness = self.population[order[start]].fitness
            while end + 1 < len(order) and self.population[order[end + 1]].fitness == fitness:
                end += 1
            shared = (start + end) / 2.0 + 1.0
            for position in range(start, end + 1):
                ranks[order[position]] = shared
            start = end + 1
        self.cumulative = list(np.cumsum(ranks))

    def select(self, rng):
        spin = rng.random() * self.cumulative[-1]
        index = bisect.bisect_right(self.cumulative, spin)
        return self.population[min(index, len(self.population) - 1)]


def select_parent(population, rng):
    """Rank-based roulette selection of one parent."""
    return RankWheel(population).select(rng)


def ranked(population):
    """Population sorted best first; ties keep their original order."""
    return sorted(population, key=lambda individual: -individual.fitness)


def _finite(value):
    value = float(value)
    if math.isnan(value) or math.isinf(value):
        return WORST_FITNESS
    return value


def evaluate(population, config, fitness_fn, generation):
    """Fill in missing fitness values; order and cached values are kept."""
    pending = [slot for slot, individual in enumerate(population) if individual.fitness is None]

    def score(slot):
        rng = stream(config.seed, generation, slot, FITNESS)
        return _finite(fitness_fn(population[slot].genome, rng))

    if config.workers > 1 and len(pending) > 1:
        with ThreadPoolExecutor(max_workers=config.workers) as pool:
            scores = list(pool.map(score, pending))
    else:
        scores = [score(slot) for slot in pending]
    evaluated = list(population)
    for slot, fitness in zip(pending, scores):
        evaluated[slot] = Individual(population[slot].genome, fitness)
    return evaluated


def breed(population, config, genome_ops, generation):
    """Elites plus offspring, without fitness for the new genomes.

    Returns (population, operator counts).
    """
    ordered = ranked(population)
    offspring = ordered[:config.elitism]
    counts = {CROSSOVER: 0, MUTATION: 0, COPY: 0}
    wheel = RankWheel(population)
    for slot in range(config.elitism, config.population_size):
        rng = stream(config.seed, generation, slot, VARY)
        draw = rng.random()
        if draw < config.crossover_prob:
            first = wheel.select(rng)
            second = wheel.select(rng)
            child, _ = genome_ops.crossover(first.genome, second.genome, rng)
            offspring.append(Individual(child))
            counts[CROSSOVER] += 1
        elif draw < config.crossover_prob + config.mutation_prob:
            parent = wheel.select(rng)
            offspring.append(Individual(genome_ops.mutate(parent.genome, rng)))
            counts[MUTATION] += 1
        else:
            offspring.append(wheel.select(rng))
            counts[COPY] += 1
    return offspring, counts


def step_generation(population, config, genome_ops, fitness_fn, generation):
    """One generation: elitism, then crossover / mutation / reproduction.

    Each offspring slot picks crossover with `crossover_prob`, mutation with
    `mutation_prob` and plain reproduction otherwise.
    """
    offspring, counts = breed(population, config, genome_ops, generation)
    return evaluate(offspring, config, fitness_fn, generation), counts


def _record(population, generation, genome_ops, counts):
    best = ranked(population)[0]
    mean = math.fsum(individual.fitness for individual in population) / len(population)
    return GenerationRecord(
        generation, best.fitness, mean, genome_ops.to_text(best.genome),
        tuple(sorted(counts.items())),
    )


def run(config, genome_ops, fitness_fn, initial=None):
    """Evolve a population and return (best individual, RunHistory).

    `initial` optionally seeds generation 0 with given genomes (padded with
    random ones up to the population size).
    """
    log.info("Starting GP run: population %d, %d generations, seed %d",
             config.population_size, config.generations, config.seed)
    genomes = list(initial or [])[:config.population_size]
    for slot in range(len(genomes), config.population_size):
        genomes.append(genome_ops.random(stream(config.seed, 0, slot, INIT)))
    population = evaluate([Individual(genome) for genome in genomes], config, fitness_fn, 0)

    history = RunHistory()
    history.records.append(_record(population, 0, genome_ops, {}))
    best = ranked(population)[0]
    for generation in range(1, config.generations + 1):
        if config.target_fitness is not None and best.fitness >= config.target_fitness:
            log.info("Reached target fitness %s after generation %d", config.target_fitness, generation - 1)
            break
        population, counts = step_generation(population, config, genome_ops, fitness_fn, generation)
        record = _record(population, generation, genome_ops, counts)
        history.records.append(record)
        log.debug("generation %d: best %s mean %s %s", generation,
                  record.best_fitness, record.mean_fitness, record.best_genome)
        leader = ranked(population)[0]
        if leader.fitness > best.fitness:
            best = leader
    log.info("Finished GP run (seed %d): best fitness %s, %s",
             config.seed, best.fitness, genome_ops.to_text(best.genome))
    return best, history
