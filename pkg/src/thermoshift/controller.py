"""Shift controller: decides when to swap between the large and small model.

Raw CPU temperature is smoothed with an exponential moving average, the
slope of the smoothed signal is estimated per sample and smoothed with a
second EMA, and a two-state machine drives the shifts:

* in LARGE mode, a raw reading above ``temp_threshold`` shifts to SMALL;
* in SMALL mode, a smoothed slope above ``grad_threshold`` (the cooling
  rate has flattened out; thresholds are negative) shifts back to LARGE.

Both filters are cleared on every shift so each phase starts fresh.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from .errors import ConfigError, SampleError

ABSOLUTE_ZERO_C = -273.15

# Samples required after a filter reset before a shift back to LARGE may
# fire. The slope EMA restarts at zero, and zero already exceeds any
# negative grad_threshold, so an unguarded check would bounce straight
# back on the first sample of every SMALL phase.
WARMUP_MIN_SAMPLES = 2


class Mode(enum.Enum):
    LARGE = "LARGE"
    SMALL = "SMALL"


class Decision(enum.Enum):
    STAY = "stay"
    SHIFT_TO_SMALL = "shift_to_small"
    SHIFT_TO_LARGE = "shift_to_large"


@dataclass(frozen=True)
class TemperatureSample:
    """One timestamped CPU temperature reading."""

    time_s: float
    celsius: float


def ema_update(prev: float, value: float, coeff: float) -> float:
    """One exponential-moving-average step: coeff*prev + (1 - coeff)*value."""
    return coeff * prev + (1.0 - coeff) * value


@dataclass(frozen=True)
class ControllerConfig:
    temp_smoothing: float = 0.995  # EMA coefficient for temperature, in (0, 1)
    grad_smoothing: float = 0.99   # EMA coefficient for the slope, in (0, 1)
    temp_threshold: float = 73.0   # deg C; LARGE -> SMALL on a raw reading above this
    grad_threshold: float = -0.07  # deg C per sample; SMALL -> LARGE on smoothed slope above this
    per_second: bool = False       # scale the raw slope by sample spacing (deg C per second)
    literal_init: bool = False     # zero-seed the filters and drop the warm-up guard

    def __post_init__(self):
        problems = []
        for name in ("temp_smoothing", "grad_smoothing"):
            coeff = getattr(self, name)
            if not (isinstance(coeff, (int, float)) and 0.0 < coeff < 1.0):
                problems.append(f"{name} must be in (0, 1), got {coeff!r}")
        for name in ("temp_threshold", "grad_threshold"):
            value = getattr(self, name)
            if not (isinstance(value, (int, float)) and math.isfinite(value)):
                problems.append(f"{name} must be finite, got {value!r}")
        if problems:
            raise ConfigError("; ".join(problems))


class ShiftController:
    """Two-state shift controller fed one temperature sample per inference.

    The instance owns its filter state; it is cheap, deterministic, and
    must not be shared between concurrent observers.
    """

    def __init__(self, config: ControllerConfig):
        self.config = config
        self.mode = Mode.LARGE
        self.grad = 0.0
        self.samples_since_reset = 0
        # Telemetry: the most recent post-update filter values. These
        # survive the reset that follows a shift so the triggering values
        # can be logged.
        self.last_avg_temp: float | None = None
        self.last_grad: float | None = None
        self._saw_cooling = False
        self._last_time: float | None = None
        if config.literal_init:
            self.avg_temp: float | None = 0.0
            self.prev_avg_temp: float | None = 0.0
        else:
            self.avg_temp = None
            self.prev_avg_temp = None

    def reset_filters(self) -> None:
        """Clear the smoothing state; the current mode is preserved."""
        self.grad = 0.0
        self.samples_since_reset = 0
        self._saw_cooling = False
        self._last_time = None
        if self.config.literal_init:
            self.avg_temp = 0.0
            self.prev_avg_temp = 0.0
        else:
            self.avg_temp = None
            self.prev_avg_temp = None

    def estimate_derivative(self, new_avg: float, dt: float | None = None) -> float:
        """Fold one smoothed temperature into the slope estimate.

        The raw slope is the change of the smoothed temperature since the
        previous sample (defined as 0 when no previous sample exists since
        the last reset). Returns the EMA-smoothed slope and advances the
        remembered previous value.
        """
        if self.prev_avg_temp is None:
            raw = 0.0
        else:
            raw = new_avg - self.prev_avg_temp
            if self.config.per_second and dt is not None and dt > 0.0:
                raw /= dt
        self.prev_avg_temp = new_avg
        if raw < 0.0:
            self._saw_cooling = True
        self.grad = ema_update(self.grad, raw, self.config.grad_smoothing)
        return self.grad

    def observe(self, sample: TemperatureSample) -> Decision:
        """Consume one temperature sample and return the shift decision.

        Update order: smooth the temperature, update the slope, then
        evaluate the mode transitions (the LARGE -> SMALL trigger compares
        the raw reading, not the smoothed one). Non-finite or
        below-absolute-zero readings raise SampleError with no state
        change.
        """
        t = sample.celsius
        if not (isinstance(t, (int, float)) and math.isfinite(t)):
            raise SampleError(f"non-finite temperature reading: {t!r}")
        if t < ABSOLUTE_ZERO_C:
            raise SampleError(f"temperature below absolute zero: {t} C")

        cfg = self.config
        dt = None if self._last_time is None else sample.time_s - self._last_time
        if self.avg_temp is None:
            new_avg = float(t)  # first sample after a reset seeds the filter
        else:
            new_avg = ema_update(self.avg_temp, t, cfg.temp_smoothing)
        self.avg_temp = new_avg
        self.estimate_derivative(new_avg, dt)
        self.samples_since_reset += 1
        self._last_time = sample.time_s
        self.last_avg_temp = new_avg
        self.last_grad = self.grad

        if self.mode is Mode.LARGE and t > cfg.temp_threshold:
            self.mode = Mode.SMALL
            self.reset_filters()
            return Decision.SHIFT_TO_SMALL
        if self.mode is Mode.SMALL and self.grad > cfg.grad_threshold and self._warmed_up():
            self.mode = Mode.LARGE
            self.reset_filters()
            return Decision.SHIFT_TO_LARGE
        return Decision.STAY

    def _warmed_up(self) -> bool:
        if self.config.literal_init:
            return True
        return self.samples_since_reset >= WARMUP_MIN_SAMPLES and self._saw_cooling
