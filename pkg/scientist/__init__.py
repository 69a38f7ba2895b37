"""Machine scientist: evolves observation-function and state-decision trees
that reconstruct and forecast state/value time series."""

__version__ = '0.1a0'
