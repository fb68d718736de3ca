"""Exception types shared across the bench."""


class ConfigError(ValueError):
    """Invalid or inconsistent configuration (bad geometry, unstable step, ...)."""


class SignalError(ValueError):
    """Waveform synthesis cannot proceed (negative beat frequency, empty record)."""


class AnalysisError(RuntimeError):
    """A record cannot be analyzed (no event, too few crossings, short series)."""


class FitError(RuntimeError):
    """Regression failure (empty sample set, rank-deficient design)."""
