"""Lumped thermal model of a device SoC plus its throttling governor.

Temperature follows newtonian heating/cooling,

    C * dT/dt = P - k * (T - T_ambient)

integrated with explicit Euler sub-steps capped at 0.1 s. Stability needs
dt < 2*C/k; calibrated profiles keep the cap at least an order of
magnitude below that.

Two governor styles are modeled:

* ``phone-drop``: a hard two-level frequency drop at the trip temperature
  with a hysteresis release well below it;
* ``pi-pin``: proportional shedding that holds the temperature pinned
  just above the trip point while frequency sags a few percent.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from .errors import CalibrationError, ProfileError

MAX_SUBSTEP_S = 0.1

EVENT_THROTTLE_ON = "throttle_on"
EVENT_THROTTLE_OFF = "throttle_off"


class GovernorKind(enum.Enum):
    PHONE_DROP = "phone-drop"
    PI_PIN = "pi-pin"


@dataclass(frozen=True)
class DeviceProfile:
    heat_capacity: float        # J per deg C
    dissipation: float          # W per deg C
    ambient_temp: float         # deg C
    f_nominal: float            # GHz
    f_throttled: float          # GHz, throttled level / pi-pin floor
    t_throttle: float           # deg C, governor trip point
    t_resume: float             # deg C, phone-drop release (below t_throttle)
    governor: GovernorKind = GovernorKind.PHONE_DROP
    pin_gain: float = 0.0       # GHz shed per deg C above trip (pi-pin only)
    idle_power: float = 1.0     # W drawn during injected idle time

    def __post_init__(self):
        problems = []
        if self.heat_capacity <= 0:
            problems.append(f"heat_capacity must be > 0, got {self.heat_capacity}")
        if self.dissipation <= 0:
            problems.append(f"dissipation must be > 0, got {self.dissipation}")
        if not (0 < self.f_throttled < self.f_nominal):
            problems.append(
                f"need 0 < f_throttled < f_nominal, got {self.f_throttled} / {self.f_nominal}"
            )
        if not self.t_resume < self.t_throttle:
            problems.append(
                f"t_resume must sit below t_throttle, got {self.t_resume} / {self.t_throttle}"
            )
        if self.governor is GovernorKind.PI_PIN and self.pin_gain <= 0:
            problems.append("pi-pin governor needs pin_gain > 0")
        if self.idle_power < 0:
            problems.append(f"idle_power must be >= 0, got {self.idle_power}")
        if problems:
            raise ProfileError("; ".join(problems))


@dataclass
class DeviceState:
    temp: float
    freq: float
    throttled: bool = False
    sim_time: float = 0.0


def thermal_step(state: DeviceState, profile: DeviceProfile, power: float, dt: float) -> DeviceState:
    """Advance the temperature by dt seconds at constant input power."""
    if dt <= 0:
        raise ValueError(f"dt must be > 0, got {dt}")
    if power < 0:
        raise ValueError(f"power must be >= 0, got {power}")
    n = max(1, math.ceil(dt / MAX_SUBSTEP_S))
    h = dt / n
    c = profile.heat_capacity
    k = profile.dissipation
    amb = profile.ambient_temp
    for _ in range(n):
        state.temp += (power - k * (state.temp - amb)) * h / c
    state.sim_time += dt
    return state


def governor_step(state: DeviceState, profile: DeviceProfile) -> str | None:
    """Apply the frequency governor once; returns a throttle event or None."""
    if profile.governor is GovernorKind.PHONE_DROP:
        if not state.throttled and state.temp >= profile.t_throttle:
            state.freq = profile.f_throttled
            state.throttled = True
            return EVENT_THROTTLE_ON
        if state.throttled and state.temp <= profile.t_resume:
            state.freq = profile.f_nominal
            state.throttled = False
            return EVENT_THROTTLE_OFF
        return None

    excess = max(0.0, state.temp - profile.t_throttle)
    freq = profile.f_nominal - profile.pin_gain * excess
    freq = min(profile.f_nominal, max(profile.f_throttled, freq))
    was_throttled = state.throttled
    state.freq = freq
    state.throttled = freq < profile.f_nominal - 1e-12
    if state.throttled and not was_throttled:
        return EVENT_THROTTLE_ON
    if was_throttled and not state.throttled:
        return EVENT_THROTTLE_OFF
    return None


def advance(state, profile, power_of_freq, dt) -> list[str]:
    """Advance dt seconds, re-running the governor after every sub-step.

    ``power_of_freq`` maps the current frequency to input power, so a
    mid-interval frequency drop also lowers the heat flowing in. Returns
    the throttle events raised along the way, in order.
    """
    if dt <= 0:
        raise ValueError(f"dt must be > 0, got {dt}")
    events = []
    n = max(1, math.ceil(dt / MAX_SUBSTEP_S))
    h = dt / n
    c = profile.heat_capacity
    k = profile.dissipation
    amb = profile.ambient_temp
    for _ in range(n):
        power = power_of_freq(state.freq)
        state.temp += (power - k * (state.temp - amb)) * h / c
        event = governor_step(state, profile)
        if event:
            events.append(event)
    state.sim_time += dt
    return events


def equilibrium_temp(profile: DeviceProfile, power: float) -> float:
    """Steady-state temperature under constant power with no throttling."""
    return profile.ambient_temp + power / profile.dissipation


@dataclass(frozen=True)
class CalibrationTargets:
    """Desk-scale behavior the calibrated device must reproduce."""

    ambient: float = 22.0
    trip_temp: float = 77.0
    temp_threshold: float = 73.0      # shift trip the small model must sit well below
    time_to_throttle: float = 600.0   # s, large model alone from an ambient start
    time_window: tuple[float, float] = (300.0, 900.0)
    small_equilibrium: float = 66.0   # deg C, small model running flat out
    governor: GovernorKind = GovernorKind.PHONE_DROP
    f_nominal: float = 2.86
    f_throttled: float = 2.05
    resume_temp: float | None = None  # phone-drop release; default trip - 5
    dissipation: float = 0.12         # W per deg C held fixed; capacity is solved
    latency_rise: float = 0.045       # pi-pin: fractional latency rise at the pin
    sticky_margin: float = 3.0        # phone-drop: throttled equilibrium this far above resume
    large_power: float | None = None  # W; overrides the derived large-model draw
    small_power: float | None = None  # W; overrides the draw implied by small_equilibrium


@dataclass(frozen=True)
class CalibrationResult:
    profile: DeviceProfile
    large_power: float
    small_power: float
    time_to_throttle: float
    small_equilibrium: float
    pinned_temp: float | None = None
    latency_rise: float | None = None


def _simulate_crossing(capacity, targets, power, limit_s):
    """Seconds for constant power to push the temperature up to the trip point."""
    profile = DeviceProfile(
        heat_capacity=capacity,
        dissipation=targets.dissipation,
        ambient_temp=targets.ambient,
        f_nominal=targets.f_nominal,
        f_throttled=targets.f_throttled,
        t_throttle=targets.trip_temp,
        t_resume=targets.trip_temp - 5.0,
        governor=GovernorKind.PHONE_DROP,
    )
    state = DeviceState(temp=targets.ambient, freq=targets.f_nominal)
    step = 0.5
    while state.sim_time < limit_s:
        thermal_step(state, profile, power, step)
        if state.temp >= targets.trip_temp:
            return state.sim_time
    return None


def _simulate_pin(targets, capacity, pin_gain, large_power):
    """Run the pi-pin governor to equilibrium; returns (temp, freq) there."""
    profile = DeviceProfile(
        heat_capacity=capacity,
        dissipation=targets.dissipation,
        ambient_temp=targets.ambient,
        f_nominal=targets.f_nominal,
        f_throttled=targets.f_throttled,
        t_throttle=targets.trip_temp,
        t_resume=targets.trip_temp - 5.0,
        governor=GovernorKind.PI_PIN,
        pin_gain=pin_gain,
    )
    state = DeviceState(temp=targets.ambient, freq=targets.f_nominal)
    tau = capacity / targets.dissipation
    horizon = 10.0 * tau
    power_of_freq = lambda f: large_power * f / targets.f_nominal
    while state.sim_time < horizon:
        advance(state, profile, power_of_freq, 1.0)
    return state.temp, state.freq


def calibrate_profile(targets: CalibrationTargets) -> CalibrationResult:
    """Solve device constants so the simulated device matches the targets.

    The heat capacity is found by bisection on the simulated
    time-to-throttle of the large model; the pi-pin gain, when relevant,
    by bisection on the simulated equilibrium latency rise. Raises
    CalibrationError for infeasible targets (small model unable to cool
    the device, small power above large power, unreachable window).
    """
    k = targets.dissipation
    amb = targets.ambient

    resume = targets.resume_temp if targets.resume_temp is not None else targets.trip_temp - 5.0
    if targets.large_power is not None:
        large_power = targets.large_power
        eq_large = amb + large_power / k
    elif targets.governor is GovernorKind.PHONE_DROP:
        # Size the large model's steady state so the post-throttle
        # equilibrium (power scales with frequency) stays inside the
        # hysteresis band: once tripped, the device stays hot and slow.
        ratio = targets.f_throttled / targets.f_nominal
        eq_large = amb + (resume + targets.sticky_margin - amb) / ratio
        large_power = k * (eq_large - amb)
    else:
        # Headroom chosen so the requested latency rise leaves the pinned
        # temperature within 1 C of the trip point.
        eq_large = amb + (targets.trip_temp + 0.5 - amb) * (1.0 + targets.latency_rise)
        large_power = k * (eq_large - amb)

    if targets.small_power is not None:
        small_power = targets.small_power
        small_eq = amb + small_power / k
    else:
        small_eq = targets.small_equilibrium
        small_power = k * (small_eq - amb)

    if small_power >= large_power:
        raise CalibrationError(
            f"small-model power {small_power:.2f} W is not below large-model power "
            f"{large_power:.2f} W"
        )
    if small_eq >= targets.trip_temp:
        raise CalibrationError(
            f"small-model equilibrium {small_eq} C is not below "
            f"the trip point {targets.trip_temp} C"
        )
    if small_eq > targets.temp_threshold - 2.0:
        raise CalibrationError(
            f"small-model equilibrium {small_eq} C must sit at least "
            f"2 C below the shift threshold {targets.temp_threshold} C"
        )
    lo_t, hi_t = targets.time_window
    if not (lo_t <= targets.time_to_throttle <= hi_t):
        raise CalibrationError(
            f"time_to_throttle {targets.time_to_throttle} s outside window {targets.time_window}"
        )
    if eq_large <= targets.trip_temp + 0.5:
        raise CalibrationError(
            f"large-model equilibrium {eq_large:.1f} C cannot cross trip {targets.trip_temp} C"
        )

    # Bisect heat capacity: crossing time grows monotonically with it.
    lo, hi = 0.5, 2.0e5
    limit = 20.0 * hi_t
    if _simulate_crossing(lo, targets, large_power, limit) is None:
        raise CalibrationError("trip point unreachable even with minimal heat capacity")
    for _ in range(80):
        mid = 0.5 * (lo + hi)
        crossed = _simulate_crossing(mid, targets, large_power, limit)
        if crossed is None or crossed > targets.time_to_throttle:
            hi = mid
        else:
            lo = mid
        if hi - lo < 1e-3:
            break
    capacity = 0.5 * (lo + hi)
    achieved = _simulate_crossing(capacity, targets, large_power, limit)
    if achieved is None or not (lo_t <= achieved <= hi_t):
        raise CalibrationError(
            f"calibrated crossing time {achieved} s outside window {targets.time_window}"
        )

    pin_gain = 0.0
    pinned_temp = None
    rise = None
    if targets.governor is GovernorKind.PI_PIN:
        # More gain sheds more frequency per degree, so the equilibrium
        # latency rise grows monotonically with it.
        glo, ghi = 1e-4, 50.0
        for _ in range(60):
            gmid = 0.5 * (glo + ghi)
            _, freq = _simulate_pin(targets, capacity, gmid, large_power)
            if targets.f_nominal / freq - 1.0 > targets.latency_rise:
                ghi = gmid
            else:
                glo = gmid
        pin_gain = 0.5 * (glo + ghi)
        pinned_temp, freq = _simulate_pin(targets, capacity, pin_gain, large_power)
        rise = targets.f_nominal / freq - 1.0
        if abs(pinned_temp - targets.trip_temp) > 1.0:
            raise CalibrationError(
                f"pinned equilibrium {pinned_temp:.2f} C is more than 1 C from trip "
                f"{targets.trip_temp} C; reduce the latency-rise target"
            )

    profile = DeviceProfile(
        heat_capacity=capacity,
        dissipation=k,
        ambient_temp=amb,
        f_nominal=targets.f_nominal,
        f_throttled=targets.f_throttled,
        t_throttle=targets.trip_temp,
        t_resume=resume,
        governor=targets.governor,
        pin_gain=pin_gain,
        idle_power=1.0,
    )
    return CalibrationResult(
        profile=profile,
        large_power=large_power,
        small_power=small_power,
        time_to_throttle=achieved,
        small_equilibrium=small_eq,
        pinned_temp=pinned_temp,
        latency_rise=rise,
    )
