"""Command-line front end.

    scientist datagen puck --v 4 --a 6 --steps 20 [--out puck.csv]
    scientist datagen coin --steps 20 --seed 7 [--out coin.csv]
    scientist evolve xft|qdt --data <csv> [--config <cfg> | --preset <name>] --seed <n> [--out <dir>]
    scientist run newton|cat [--seed 1..10] [--out <dir>, default runs]
    scientist predict --theory <dir> --data <csv> --horizon <n> --seed <n> [--out <csv>]
    scientist report --theory <dir> --data <csv> --out <dir>

Exit codes: 0 success, 1 bad usage, 2 unreadable or invalid input, 3 a
preset missed its acceptance thresholds.
"""
import argparse
import logging
import logging.config
import os
import sys
from dataclasses import replace

import numpy as np

try:
    import simplejson as json
except ImportError:
    import json

from . import __version__, config, datagen, experiment, presets, qmat, report, series, settings, theory, xft
from .exceptions import ScientistError, UsageError
from .util import format_number, parse_seeds

log = logging.getLogger(__name__)

EXIT_OK, EXIT_USAGE, EXIT_INPUT, EXIT_FAIL = 0, 1, 2, 3

DEFAULT_RUNS_DIR = "runs"


class ArgumentParser(argparse.ArgumentParser):
    """An ArgumentParser that raises UsageError instead of exiting."""

    def error(self, message):
        raise UsageError(message)


def _seed(text):
    seeds = parse_seeds(text)
    if len(seeds) != 1:
        raise argparse.ArgumentTypeError("expected a single seed, got {!r}".format(text))
    return seeds[0]


def build_parser():
    parser = ArgumentParser(prog="scientist", description="Evolve theories of observed time series.")
    parser.add_argument("--version", action="version", version=__version__)
    commands = parser.add_subparsers(dest="command", metavar="command")
    commands.required = True

    gen = commands.add_parser("datagen", help="generate a reference series")
    kinds = gen.add_subparsers(dest="kind", metavar="kind")
    kinds.required = True
    puck = kinds.add_parser("puck", help="puck under constant acceleration")
    puck.add_argument("--v", type=float, default=4.0, help="initial velocity")
    puck.add_argument("--a", type=float, default=6.0, help="acceleration")
    puck.add_argument("--steps", type=int, default=20, help="number of samples including x0")
    puck.add_argument("--out", help="CSV path (default: standard output)")
    coin = kinds.add_parser("coin", help="walk driven by a fair coin")
    coin.add_argument("--steps", type=int, default=20, help="number of coin throws")
    coin.add_argument("--seed", type=_seed, required=True)
    coin.add_argument("--out", help="CSV path (default: standard output)")
    gen.set_defaults(handler=cmd_datagen)

    evolve = commands.add_parser("evolve", help="evolve an xFT or a qDT for a series")
    evolve.add_argument("kind", choices=(config.XFT, config.QDT))
    evolve.add_argument("--data", required=True, help="series CSV")
    source = evolve.add_mutually_exclusive_group()
    source.add_argument("--config", help="key = value config file")
    source.add_argument("--preset", help="use the run config of a named preset")
    evolve.add_argument("--seed", type=_seed, default=0)
    evolve.add_argument("--out", help="directory for best.sexp, summary.json and history.csv")
    evolve.set_defaults(handler=cmd_evolve)

    run = commands.add_parser("run", help="run a named preset end to end")
    run.add_argument("name", help="preset name")
    run.add_argument("--seed", type=parse_seeds, default=[1], help="N or A..B (inclusive)")
    run.add_argument("--out", default=DEFAULT_RUNS_DIR,
                     help="directory for bundles and reports (default: %(default)s)")
    run.add_argument("--generations", type=int, help="override the preset's generation count")
    run.add_argument("--population-size", type=int, help="override the preset's population size")
    run.set_defaults(handler=cmd_run_preset)

    predict = commands.add_parser("predict", help="forecast past the end of a series")
    predict.add_argument("--theory", required=True, help="theory bundle directory")
    predict.add_argument("--data", required=True, help="series CSV")
    predict.add_argument("--horizon", type=int, default=1)
    predict.add_argument("--seed", type=_seed, default=0)
    predict.add_argument("--out", help="forecast CSV path (default: standard output)")
    predict.set_defaults(handler=cmd_predict)

    rep = commands.add_parser("report", help="reconstruction CSV and SVG plot")
    rep.add_argument("--theory", required=True, help="theory bundle directory")
    rep.add_argument("--data", required=True, help="series CSV")
    rep.add_argument("--out", required=True, help="output directory")
    rep.add_argument("--mode", choices=(theory.TEACHER_FORCED, theory.FREE_RUN),
                     default=theory.TEACHER_FORCED)
    rep.add_argument("--seed", type=_seed, default=0, help="used by free_run only")
    rep.set_defaults(handler=cmd_report)
    return parser


def _emit(text, path):
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w") as handle:
            handle.write(text)


def cmd_datagen(args):
    if args.kind == "puck":
        generated = datagen.gen_puck(datagen.PuckParams(args.v, args.a, args.steps))
    else:
        generated = datagen.gen_coin(datagen.CoinParams(args.steps, args.seed))
    _emit(series.to_csv_text(generated), args.out)
    if args.out is not None:
        print("wrote {} rows to {}".format(len(generated), args.out))
    return EXIT_OK


def _run_config(args):
    if args.config:
        return config.load_config(args.config)
    if args.preset:
        return presets.get_preset(args.preset).run_config
    return config.RunConfig()


def cmd_evolve(args):
    observed = series.read_csv(args.data)
    run_config = _run_config(args)
    if args.kind == config.XFT:
        best, history = experiment.evolve_xft(observed, run_config, args.seed)
        text, infix = xft.to_text(best.genome), xft.to_infix(best.genome)
    else:
        best, history = experiment.evolve_qdt(observed, run_config, args.seed)
        text, infix = qmat.gate_tree_text(best.genome), qmat.to_infix(best.genome)

    print("best fitness: {}".format(format_number(best.fitness)))
    print("best {}: {}".format(args.kind, infix))
    if args.kind == config.QDT:
        _print_strategies(best.genome, run_config)

    if args.out:
        if not os.path.isdir(args.out):
            os.makedirs(args.out)
        _emit(text + "\n", os.path.join(args.out, "best.sexp"))
        _emit(config.dump_config(run_config), os.path.join(args.out, "config.cfg"))
        history.write_csv(os.path.join(args.out, "history.csv"))
        summary = dict(kind=args.kind, seed=args.seed, data=args.data,
                       best_fitness=best.fitness, best_genome=text, infix=infix,
                       generations=len(history.records) - 1)
        _emit(json.dumps(summary, indent=2, sort_keys=True) + "\n",
              os.path.join(args.out, "summary.json"))
    return EXIT_OK


def _print_strategies(tree, run_config):
    gp = run_config.gp_config(config.QDT)
    choices = qmat.count_choices(tree)
    if choices > gp.enumeration_cap:
        print("{} choice nodes; too many strategies to list".format(choices))
        return
    print("strategy  choices  p1  p2")
    for number, (bits, branches, p1, p2) in enumerate(
            qmat.strategy_table(tree, gp.enumeration_cap, run_config.normalization), start=1):
        print("S{}  {}  {}  {!r}  {!r}".format(
            number, "".join(str(bit) for bit in bits) or "-", ", ".join(branches), p1, p2))


def cmd_run_preset(args):
    preset = presets.get_preset(args.name)
    overrides = {}
    if args.generations is not None:
        overrides["generations"] = args.generations
    if args.population_size is not None:
        overrides["population_size"] = args.population_size
    if overrides:
        preset = replace(preset, run_config=preset.run_config.with_values(**overrides))

    if not os.path.isdir(args.out):
        os.makedirs(args.out)
    results = []
    for seed in args.seed:
        result = experiment.run_preset(preset, seed, args.out)
        results.append(result)
        print("{} seed {}: {}  xFT {} (fitness {})  accuracy {}  p1 {!r}  state-0 frequency {}".format(
            preset.name, seed, "PASS" if result.passed else "FAIL",
            xft.to_infix(result.theory.xft), format_number(result.xft_fitness),
            result.accuracy, result.forecast_p1, result.state0_frequency))
        for failure in result.failures:
            print("    " + failure)
    _emit(json.dumps([result.summary() for result in results], indent=2) + "\n",
          os.path.join(args.out, "{}-summary.json".format(preset.name)))
    passed = sum(1 for result in results if result.passed)
    print("{}: {} of {} seeds passed".format(preset.name, passed, len(results)))
    return EXIT_OK if passed else EXIT_FAIL


def cmd_predict(args):
    if args.horizon < 1:
        raise UsageError("--horizon must be at least 1")
    model = theory.load(args.theory)
    observed = series.read_csv(args.data)
    forecast = theory.predict(model, observed, args.horizon, np.random.default_rng(args.seed))
    _emit(forecast.to_csv_text(), args.out)
    return EXIT_OK


def cmd_report(args):
    model = theory.load(args.theory)
    observed = series.read_csv(args.data)
    rebuilt = theory.reconstruct(model, observed, args.mode, np.random.default_rng(args.seed))
    if not os.path.isdir(args.out):
        os.makedirs(args.out)
    report.write_reconstruction_csv(observed, rebuilt, os.path.join(args.out, "reconstruction.csv"))
    report.write_svg(observed, rebuilt, os.path.join(args.out, "reconstruction.svg"),
                     title=xft.to_infix(model.xft))
    print("accuracy: {}".format(theory.accuracy(rebuilt, observed)))
    return EXIT_OK


def configure_logging():
    logging.config.dictConfig(settings.LOGGING)


def main(argv=None):
    """Parse `argv`, run the command and return its exit code."""
    configure_logging()
    try:
        args = build_parser().parse_args(argv)
        return args.handler(args)
    except UsageError as error:
        sys.stderr.write("usage error: {}\n".format(error))
        return EXIT_USAGE
    except (ScientistError, OSError) as error:
        log.debug("Command failed", exc_info=True)
        sys.stderr.write("error: {}\n".format(error))
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
