"""Trace analysis: run summaries, stable-cycle accuracy, threshold grids.

Estimated accuracy weights each variant's published accuracy by its share
of inference counts. With idle injection equalizing iteration periods,
count weighting and time weighting coincide, and count weighting stays
well defined without pacing.
"""

from __future__ import annotations

import zlib
from dataclasses import dataclass, replace

from .controller import Mode
from .errors import AnalysisError
from .harness import (
    EVENT_SHIFT_LARGE,
    EVENT_SHIFT_SMALL,
    Scenario,
    Trace,
    run_scenario,
)
from .thermal import EVENT_THROTTLE_ON
from .workload import ModelVariant

DEFAULT_CELL_DURATION = 1800.0  # 30 simulated minutes per grid cell


@dataclass(frozen=True)
class Summary:
    avg_latency: float | None
    est_accuracy: float
    n_large: int
    n_small: int
    n_shifts: int
    n_throttle_events: int
    max_temp: float

    def to_dict(self):
        return {
            "avg_latency": self.avg_latency,
            "est_accuracy": self.est_accuracy,
            "n_large": self.n_large,
            "n_small": self.n_small,
            "n_shifts": self.n_shifts,
            "n_throttle_events": self.n_throttle_events,
            "max_temp": self.max_temp,
        }


def summarize(trace: Trace, large: ModelVariant, small: ModelVariant) -> Summary:
    """Headline statistics for one run.

    avg_latency averages the inference-latency column only; injected idle
    and shift/logging stalls are excluded.
    """
    if len(trace) == 0:
        raise AnalysisError("cannot summarize an empty trace")
    n_large = sum(1 for r in trace if r.mode is Mode.LARGE)
    n_small = len(trace) - n_large
    latencies = [r.inference_latency for r in trace if r.inference_latency is not None]
    avg_latency = sum(latencies) / len(latencies) if latencies else None
    est_accuracy = (n_large * large.accuracy + n_small * small.accuracy) / len(trace)
    n_shifts = sum(1 for r in trace if r.event in (EVENT_SHIFT_SMALL, EVENT_SHIFT_LARGE))
    n_throttle = sum(1 for r in trace if r.event == EVENT_THROTTLE_ON)
    return Summary(
        avg_latency=avg_latency,
        est_accuracy=est_accuracy,
        n_large=n_large,
        n_small=n_small,
        n_shifts=n_shifts,
        n_throttle_events=n_throttle,
        max_temp=max(r.cpu_temp for r in trace),
    )


def stable_iteration_accuracy(trace, large, small, n_cycles: int = 2) -> float:
    """Count-weighted accuracy over the first ``n_cycles`` complete cycles.

    A cycle starts at a shift-to-small event and runs up to (excluding)
    the next one, so it covers one small phase and the following large
    phase. A cycle counts as complete only when the next shift-to-small
    exists to close it.
    """
    if n_cycles < 1:
        raise AnalysisError(f"n_cycles must be >= 1, got {n_cycles}")
    starts = [i for i, r in enumerate(trace) if r.event == EVENT_SHIFT_SMALL]
    complete = max(0, len(starts) - 1)
    if complete < n_cycles:
        raise AnalysisError(
            f"need {n_cycles} complete shift cycles, found {complete}"
        )
    rows = trace.records[starts[0]:starts[n_cycles]]
    n_large = sum(1 for r in rows if r.mode is Mode.LARGE)
    n_small = len(rows) - n_large
    return (n_large * large.accuracy + n_small * small.accuracy) / len(rows)


def cell_seed(base_seed: int, temp_threshold: float, grad_threshold: float) -> int:
    """Deterministic per-cell seed, independent of execution order."""
    tag = f"{temp_threshold:.6g}|{grad_threshold:.6g}".encode()
    return (base_seed & 0xFFFFFFFF) ^ zlib.crc32(tag)


@dataclass
class AblationGrid:
    """Results of a threshold sweep: one stable-cycle accuracy per cell."""

    temp_thresholds: list
    grad_thresholds: list
    values: list          # values[gi][ti] -> float or None
    notes: list           # notes[gi][ti] -> "" or failure reason

    def cell(self, grad_threshold, temp_threshold):
        gi = self.grad_thresholds.index(grad_threshold)
        ti = self.temp_thresholds.index(temp_threshold)
        return self.values[gi][ti]

    def to_csv(self, path):
        lines = ["grad_threshold/temp_threshold," + ",".join("%.6g" % t for t in self.temp_thresholds)]
        for gi, g in enumerate(self.grad_thresholds):
            cells = []
            for ti in range(len(self.temp_thresholds)):
                v = self.values[gi][ti]
                cells.append("%.6g" % v if v is not None else "insufficient-cycles")
            lines.append("%.6g," % g + ",".join(cells))
        with open(path, "w", newline="") as fh:
            fh.write("\n".join(lines) + "\n")

    def format_table(self) -> str:
        width = 14
        header = "grad \\ temp".ljust(width) + "".join(("%.6g" % t).rjust(width) for t in self.temp_thresholds)
        lines = [header, "-" * len(header)]
        for gi, g in enumerate(self.grad_thresholds):
            row = ("%.6g" % g).ljust(width)
            for ti in range(len(self.temp_thresholds)):
                v = self.values[gi][ti]
                row += ("%.4f" % v if v is not None else "n/a").rjust(width)
            lines.append(row)
        return "\n".join(lines)


def ablation_grid(base_scenario: Scenario, temp_thresholds, grad_thresholds,
                  duration: float = DEFAULT_CELL_DURATION) -> AblationGrid:
    """Sweep the two thresholds; each cell runs an independent scenario.

    Cells that never complete two shift cycles record a note instead of a
    value; one bad cell does not abort the sweep. Per-cell seeds depend
    only on the base seed and the cell's thresholds, so execution order
    cannot change any value.
    """
    if not temp_thresholds or not grad_thresholds:
        raise AnalysisError("threshold lists must be non-empty")
    template = base_scenario.controller
    if template is None:
        raise AnalysisError("ablation needs a scenario with a controller config")
    values = []
    notes = []
    for g in grad_thresholds:
        row = []
        row_notes = []
        for t in temp_thresholds:
            cfg = replace(template, temp_threshold=t, grad_threshold=g)
            cell = replace(
                base_scenario,
                controller=cfg,
                duration=duration,
                seed=cell_seed(base_scenario.seed, t, g),
            )
            trace = run_scenario(cell)
            try:
                row.append(stable_iteration_accuracy(trace, cell.large, cell.small, 2))
                row_notes.append("")
            except AnalysisError as exc:
                row.append(None)
                row_notes.append(str(exc))
        values.append(row)
        notes.append(row_notes)
    return AblationGrid(
        temp_thresholds=list(temp_thresholds),
        grad_thresholds=list(grad_thresholds),
        values=values,
        notes=notes,
    )
