"""Settings for the machine scientist."""
import os

try:
    import simplejson as json
except ImportError:
    import json

BASE_DIR = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))

# Defaults for every GP run. Experiment config files and command-line flags
# override these per run.
SCIENTIST = {
    'population_size': 500,
    'generations': 100,
    'crossover_prob': 0.70,
    'mutation_prob': 0.05,
    'elitism': 1,
    'init_depth_min': 2,
    'init_depth_max': 6,
    'xft_max_depth': 10,
    'qdt_max_depth': 8,
    'enumeration_cap': 12,
    'mc_draws': 256,
    'normalization': 'squared',
    'workers': int(os.environ.get('SCIENTIST_WORKERS', '1')),
}

if 'SCIENTIST_DEFAULTS' in os.environ:
    SCIENTIST.update(json.loads(os.environ['SCIENTIST_DEFAULTS']))

# Modules providing `experiment_presets()`; loaded by scientist.presets.
PRESETS = (
    'experiments.newton',
    'experiments.cat',
)

LOG_FILE = os.environ.get('SCIENTIST_LOG_FILE', 'scientist.log')
LOG_LEVEL = os.environ.get('SCIENTIST_LOG_LEVEL', 'INFO').upper()

LOGGING = {
    'version': 1,
    'disable_existing_loggers': False,
    'formatters': {
        'standard': {
            'format': '%(asctime)s %(levelname)s %(name)s: %(message)s',
        },
        'brief': {
            'format': '%(levelname)s: %(message)s',
        },
    },
    'handlers': {
        'console': {
            'level': LOG_LEVEL,
            'class': 'logging.StreamHandler',
            'formatter': 'brief',
        },
        'logfile': {
            'level': 'DEBUG',
            'class': 'logging.handlers.RotatingFileHandler',
            'filename': LOG_FILE,
            'maxBytes': 50000,
            'backupCount': 2,
            'formatter': 'standard',
            'delay': True,
        },
    },
    'loggers': {
        'scientist': {
            'handlers': ['console', 'logfile'],
            'level': 'DEBUG',
            'propagate': False,
        },
        'experiments': {
            'handlers': ['console', 'logfile'],
            'level': 'DEBUG',
            'propagate': False,
        },
    },
}
