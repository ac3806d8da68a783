"""Exception types shared across the package."""


class ThermoshiftError(Exception):
    """Base class for all package errors."""


class ConfigError(ThermoshiftError):
    """Invalid controller configuration (bad smoothing coefficient, threshold, ...)."""


class SampleError(ThermoshiftError):
    """A temperature sample was rejected (non-finite or physically impossible)."""


class ProfileError(ThermoshiftError):
    """Invalid device profile parameters."""


class CalibrationError(ThermoshiftError):
    """Calibration targets are infeasible or the search failed to converge."""


class ScenarioError(ThermoshiftError):
    """A scenario is inconsistent and cannot be run."""


class AnalysisError(ThermoshiftError):
    """A trace cannot be analyzed (empty, too few shift cycles, ...)."""


class TraceFormatError(ThermoshiftError):
    """A trace CSV file does not match the expected format."""


class SensorReadError(ThermoshiftError):
    """A temperature source failed to produce a reading."""


class SourceExhausted(ThermoshiftError):
    """A replay source ran out of recorded samples."""


class LiveRunError(ThermoshiftError):
    """The live polling loop aborted (too many consecutive read errors)."""


class ConfigFileError(ThermoshiftError):
    """A scenario config file failed validation.

    ``problems`` lists every offending key so the user can fix the file in
    one pass.
    """

    def __init__(self, problems):
        self.problems = list(problems)
        super().__init__("invalid config: " + "; ".join(self.problems))
