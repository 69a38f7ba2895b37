"""Named experiment presets that reproduce the reference experiments.

Preset modules listed in `settings.PRESETS` each provide an
`experiment_presets()` function returning ExperimentPreset objects.
"""
import importlib
import logging
from dataclasses import dataclass

from . import settings
from .config import RunConfig
from .exceptions import UsageError

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class Thresholds(object):
    """Acceptance limits for one seed. None disables a check."""
    xft_sse: float = 1e-6
    accuracy: float = 1.0
    qdt_fraction: float = None


@dataclass(frozen=True)
class ExperimentPreset(object):
    name: str
    description: str
    load_series: object
    run_config: RunConfig
    thresholds: Thresholds = Thresholds()
    forecast_draws: int = 10000


PRESETS = {}


def add_preset(preset):
    """
    Add a preset to the global collection.
    """
    assert preset.name not in PRESETS, "Already have a %r preset" % preset.name
    PRESETS[preset.name] = preset


def remove_preset(name):
    """
    Remove a named preset from the global collection.
    """
    del PRESETS[name]


def add_module_presets(module_name, fail_silently=True):
    """
    Add the presets declared by the module `module_name`.
    """
    try:
        module = importlib.import_module(module_name)
        for preset in module.experiment_presets():
            add_preset(preset)
    except Exception:
        # one broken preset module must not hide the others
        if fail_silently:
            log.warning(u"Cannot load presets from %s", module_name, exc_info=True)
        else:
            raise


def init_presets(fail_silently=True):
    """
    Create all the presets declared in `settings.PRESETS`.
    """
    # Clear any existing presets, since this is used repeatedly during testing.
    PRESETS.clear()
    for module_name in settings.PRESETS:
        add_module_presets(module_name, fail_silently)


def get_preset(name):
    if not PRESETS:
        init_presets()
    try:
        return PRESETS[name]
    except KeyError:
        raise UsageError("unknown preset {!r}; choose from {}".format(
            name, ", ".join(sorted(PRESETS)) or "nothing"))
