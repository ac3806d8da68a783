"""Closed-loop scenario runner and the trace CSV format.

One iteration of the loop simulates: compute at the active model's power,
injected idle time, the logging stall, a temperature reading, the shift
decision, and (on a shift) the model-load stall. The governor runs inside
every thermal sub-step, so throttling can land mid-iteration.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .controller import ControllerConfig, Decision, Mode, ShiftController, TemperatureSample
from .errors import ScenarioError, TraceFormatError
from .thermal import (
    EVENT_THROTTLE_OFF,
    EVENT_THROTTLE_ON,
    DeviceProfile,
    DeviceState,
    advance,
)
from .workload import (
    ModelVariant,
    PacingPolicy,
    Platform,
    iteration_time,
    logging_overhead,
    power_draw,
    shift_overhead,
)

EVENT_NONE = "none"
EVENT_SHIFT_SMALL = "shift_to_small"
EVENT_SHIFT_LARGE = "shift_to_large"

CSV_HEADER = "sim_time,cpu_temp,avg_temp,grad,freq,mode,inference_latency,idle,event,overhead"

_EVENTS = {EVENT_NONE, EVENT_SHIFT_SMALL, EVENT_SHIFT_LARGE, EVENT_THROTTLE_ON, EVENT_THROTTLE_OFF}


@dataclass
class TraceRecord:
    """One per-inference log row. Optional fields are blank in the CSV."""

    sim_time: float
    cpu_temp: float
    avg_temp: float | None = None
    grad: float | None = None
    freq: float | None = None
    mode: Mode = Mode.LARGE
    inference_latency: float | None = None
    idle: float | None = None
    event: str = EVENT_NONE
    overhead: float = 0.0
    log_time: float = 0.0  # carried in memory only; not a CSV column


class Trace:
    """An ordered list of TraceRecords."""

    def __init__(self, records=None):
        self.records = list(records) if records else []

    def append(self, record: TraceRecord):
        self.records.append(record)

    def __len__(self):
        return len(self.records)

    def __iter__(self):
        return iter(self.records)

    def __getitem__(self, idx):
        return self.records[idx]

    def events(self, kind: str):
        return [r for r in self.records if r.event == kind]


def _fmt(value) -> str:
    if value is None:
        return ""
    return "%.6g" % value


def emit_trace(trace: Trace, path) -> None:
    """Write the trace as CSV: fixed header, floats at 6 significant digits."""
    lines = [CSV_HEADER]
    for r in trace:
        lines.append(",".join([
            _fmt(r.sim_time),
            _fmt(r.cpu_temp),
            _fmt(r.avg_temp),
            _fmt(r.grad),
            _fmt(r.freq),
            r.mode.name,
            _fmt(r.inference_latency),
            _fmt(r.idle),
            r.event,
            _fmt(r.overhead),
        ]))
    try:
        with open(path, "w", newline="") as fh:
            fh.write("\n".join(lines) + "\n")
    except OSError as exc:
        raise TraceFormatError(f"cannot write trace to {path}: {exc}") from exc


def _parse_opt(text: str) -> float | None:
    return None if text == "" else float(text)


def parse_trace(path) -> Trace:
    """Read a trace CSV produced by emit_trace (or a live run)."""
    try:
        with open(path) as fh:
            lines = [ln.rstrip("\n") for ln in fh]
    except OSError as exc:
        raise TraceFormatError(f"cannot read trace from {path}: {exc}") from exc
    if not lines or lines[0] != CSV_HEADER:
        raise TraceFormatError(f"{path}: missing or wrong header (want {CSV_HEADER!r})")
    trace = Trace()
    for n, line in enumerate(lines[1:], start=2):
        if not line:
            continue
        parts = line.split(",")
        if len(parts) != 10:
            raise TraceFormatError(f"{path}:{n}: expected 10 columns, got {len(parts)}")
        try:
            record = TraceRecord(
                sim_time=float(parts[0]),
                cpu_temp=float(parts[1]),
                avg_temp=_parse_opt(parts[2]),
                grad=_parse_opt(parts[3]),
                freq=_parse_opt(parts[4]),
                mode=Mode[parts[5]],
                inference_latency=_parse_opt(parts[6]),
                idle=_parse_opt(parts[7]),
                event=parts[8],
                overhead=float(parts[9]) if parts[9] else 0.0,
            )
        except (ValueError, KeyError) as exc:
            raise TraceFormatError(f"{path}:{n}: {exc}") from exc
        if record.event not in _EVENTS:
            raise TraceFormatError(f"{path}:{n}: unknown event {record.event!r}")
        trace.append(record)
    return trace


@dataclass(frozen=True)
class Scenario:
    """Everything needed for one deterministic closed-loop run."""

    profile: DeviceProfile
    large: ModelVariant
    small: ModelVariant
    controller: ControllerConfig | None  # None -> baseline, large model only
    pacing: PacingPolicy = PacingPolicy()
    duration: float = 3600.0
    seed: int = 0
    platform: Platform = Platform.PHONE
    weight_shared: bool = False   # true weight sharing: shifts cost nothing
    logging_enabled: bool = True

    def validate(self):
        problems = []
        if self.duration <= 0:
            problems.append(f"duration must be > 0, got {self.duration}")
        if self.large.base_latency < self.small.base_latency:
            problems.append(
                f"large variant ({self.large.base_latency}s) must not be faster than "
                f"small ({self.small.base_latency}s)"
            )
        if self.pacing.target_period is not None:
            slowest = self.large.base_latency * self.pacing.latency_multiplier
            if self.pacing.target_period < slowest - 1e-12:
                problems.append(
                    f"pacing target_period {self.pacing.target_period}s is shorter than the "
                    f"large model's nominal latency {slowest:.6g}s"
                )
        if problems:
            raise ScenarioError("; ".join(problems))


def _pick_event(decision: Decision, governor_events) -> str:
    if decision is Decision.SHIFT_TO_SMALL:
        return EVENT_SHIFT_SMALL
    if decision is Decision.SHIFT_TO_LARGE:
        return EVENT_SHIFT_LARGE
    if EVENT_THROTTLE_ON in governor_events:
        return EVENT_THROTTLE_ON
    if EVENT_THROTTLE_OFF in governor_events:
        return EVENT_THROTTLE_OFF
    return EVENT_NONE


def run_scenario(scenario: Scenario) -> Trace:
    """Run the closed loop until sim_time reaches the scenario duration.

    Deterministic: the only randomness (logging and model-load stalls)
    comes from a generator seeded with scenario.seed.
    """
    scenario.validate()
    profile = scenario.profile
    rng = random.Random(scenario.seed)
    device = DeviceState(temp=profile.ambient_temp, freq=profile.f_nominal)
    controller = ShiftController(scenario.controller) if scenario.controller else None
    variant = scenario.large
    trace = Trace()
    carried_events: list[str] = []  # governor events raised after the previous row was sampled

    while device.sim_time < scenario.duration:
        active = variant
        compute, idle = iteration_time(active, device.freq, profile, scenario.pacing)
        events = carried_events
        carried_events = []

        events += advance(device, profile, lambda f: power_draw(active, f, profile), compute)
        if idle > 0.0:
            events += advance(device, profile, lambda f: profile.idle_power, idle)
        log_dt = logging_overhead(scenario.platform, rng, scenario.logging_enabled)
        if log_dt > 0.0:
            events += advance(device, profile, lambda f: power_draw(active, f, profile), log_dt)

        cpu_temp = device.temp
        freq_now = device.freq
        avg = grad = None
        decision = Decision.STAY
        if controller is not None:
            decision = controller.observe(TemperatureSample(device.sim_time, cpu_temp))
            avg = controller.last_avg_temp
            grad = controller.last_grad

        overhead = 0.0
        if decision is not Decision.STAY:
            variant = scenario.small if decision is Decision.SHIFT_TO_SMALL else scenario.large
            overhead = shift_overhead(variant, rng, scenario.weight_shared)
            if overhead > 0.0:
                # Loading the incoming model is compute; events raised here
                # belong to the next row (this one is already sampled).
                target = variant
                carried_events += advance(
                    device, profile, lambda f: power_draw(target, f, profile), overhead
                )

        trace.append(TraceRecord(
            sim_time=device.sim_time,
            cpu_temp=cpu_temp,
            avg_temp=avg,
            grad=grad,
            freq=freq_now,
            mode=controller.mode if controller else Mode.LARGE,
            inference_latency=compute,
            idle=idle,
            event=_pick_event(decision, events),
            overhead=overhead,
            log_time=log_dt,
        ))
    return trace
