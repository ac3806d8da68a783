"""Inference-loop model: variants, latency scaling, pacing, and overheads.

Latency follows a fixed-cycle-count model (latency scales with 1/f), and
dynamic power scales linearly with frequency at constant voltage. Idle
time is injected after each inference to pad the iteration out to a
target period, which keeps the comparison between variants at equal
throughput.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

from .errors import ScenarioError


class Platform(enum.Enum):
    PHONE = "phone"
    PI = "pi"


# Mean/std seconds spent writing one log row, measured per platform.
LOGGING_OVERHEAD = {
    Platform.PHONE: (0.023, 0.004),
    Platform.PI: (0.080, 0.014),
}


@dataclass(frozen=True)
class ModelVariant:
    """One member of a weight-shared model pair."""

    name: str
    base_latency: float      # s per inference at f_nominal
    power_nominal: float     # W while computing at f_nominal
    accuracy: float          # published top-1 / task accuracy, in [0, 1]
    shift_mean: float = 0.0  # s, mean stall to load this variant in
    shift_std: float = 0.0   # s, spread of that stall

    def __post_init__(self):
        problems = []
        if self.base_latency <= 0:
            problems.append(f"base_latency must be > 0, got {self.base_latency}")
        if not (0.0 <= self.accuracy <= 1.0):
            problems.append(f"accuracy must be in [0, 1], got {self.accuracy}")
        if self.shift_mean < 0 or self.shift_std < 0:
            problems.append("shift overhead mean/std must be >= 0")
        if self.power_nominal <= 0:
            problems.append(f"power_nominal must be > 0, got {self.power_nominal}")
        if problems:
            raise ScenarioError(f"variant {self.name!r}: " + "; ".join(problems))


@dataclass(frozen=True)
class PacingPolicy:
    """Iteration pacing: pad to a fixed period, optionally slow the model."""

    target_period: float | None = None  # s; None disables idle injection
    latency_multiplier: float = 1.0     # uniform slowdown applied to compute time

    def __post_init__(self):
        if self.latency_multiplier < 1.0:
            raise ScenarioError(
                f"latency_multiplier must be >= 1, got {self.latency_multiplier}"
            )
        if self.target_period is not None and self.target_period <= 0:
            raise ScenarioError(f"target_period must be > 0, got {self.target_period}")


def inference_latency(variant, freq, profile, multiplier=1.0):
    """Compute seconds for one inference at the given clock frequency."""
    if freq <= 0:
        raise ValueError(f"freq must be > 0, got {freq}")
    return variant.base_latency * (profile.f_nominal / freq) * multiplier


def iteration_time(variant, freq, profile, pacing: PacingPolicy):
    """(compute, idle) seconds for one paced iteration."""
    compute = inference_latency(variant, freq, profile, pacing.latency_multiplier)
    if pacing.target_period is None:
        return compute, 0.0
    return compute, max(0.0, pacing.target_period - compute)


def power_draw(variant, freq, profile):
    """Watts drawn while the variant computes at the given frequency."""
    if freq <= 0:
        raise ValueError(f"freq must be > 0, got {freq}")
    return variant.power_nominal * freq / profile.f_nominal


def shift_overhead(variant, rng, weight_shared=False):
    """Seconds stalled loading ``variant`` in during a shift.

    Draws from a normal with the variant's measured mean/std, clamped at
    zero. With true weight sharing there is nothing to load, so the stall
    is zero and no random draw is consumed.
    """
    if weight_shared:
        return 0.0
    return max(0.0, rng.gauss(variant.shift_mean, variant.shift_std))


def logging_overhead(platform: Platform, rng, enabled=True):
    """Seconds spent writing the per-inference log row."""
    if not enabled:
        return 0.0
    mean, std = LOGGING_OVERHEAD[platform]
    return max(0.0, rng.gauss(mean, std))
