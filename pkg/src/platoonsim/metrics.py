"""Per-run aggregation: crash impact velocity, spacing-error aggregates and
the empirical string-stability check."""

from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING, Optional

import numpy as np

if TYPE_CHECKING:
    from .engine import RunTrace, VehicleState


@dataclass(slots=True)
class CollisionRecord:
    rear_index: int
    time: float
    delta_v: float


@dataclass(slots=True)
class RunResult:
    crashed: bool
    max_spacing_error: float
    avg_max_spacing_error: float
    avg_max_abs_accel: float
    crash_time: Optional[float] = None
    crash_rear_index: Optional[int] = None
    delta_v: Optional[float] = None


def spacing_error(gap: float, desired: float) -> float:
    """Spacing-error magnitude used for aggregation; traces keep the sign."""
    if desired <= 0:
        raise ValueError("desired gap must be positive")
    return abs(gap - desired)


def delta_v_at_collision(front_speed: float, rear_speed: float) -> float:
    """Impact velocity: rear speed minus front speed at contact."""
    return rear_speed - front_speed


def aggregate_run(trace: "RunTrace", collision: CollisionRecord | None = None) -> RunResult:
    """Aggregate a trace into a RunResult. The leader has no predecessor and
    is excluded from spacing aggregates; crashed runs aggregate over the
    pre-crash samples only."""
    if trace.times.size == 0:
        raise ValueError("empty trace")
    err = np.abs(trace.spacing_error[:, 1:])
    acc = np.abs(trace.accel[:, 1:])
    if collision is not None:
        pre = trace.times < collision.time
        if not pre.any():
            raise ValueError("no pre-crash samples in trace")
        err = err[pre]
        acc = acc[pre]
    per_vehicle_max_err = err.max(axis=0)
    per_vehicle_max_acc = acc.max(axis=0)
    result = RunResult(
        crashed=collision is not None,
        max_spacing_error=float(per_vehicle_max_err.max()),
        avg_max_spacing_error=float(per_vehicle_max_err.mean()),
        avg_max_abs_accel=float(per_vehicle_max_acc.mean()),
    )
    if collision is not None:
        assert collision.delta_v > 0, "contact requires closing speed"
        result.crash_time = collision.time
        result.crash_rear_index = collision.rear_index
        result.delta_v = collision.delta_v
    return result


def string_stability_ratio(trace: "RunTrace", min_peak: float = 1e-3) -> float:
    """Worst downstream amplification of spacing-error peaks over adjacent
    follower pairs. Pairs whose upstream peak is below `min_peak` are
    excluded; returns 0 when every pair is excluded. Values <= 1 indicate
    empirical string stability."""
    peaks = np.abs(trace.spacing_error[:, 1:]).max(axis=0)
    ratio = 0.0
    for i in range(peaks.size - 1):
        if peaks[i] >= min_peak:
            ratio = max(ratio, float(peaks[i + 1] / peaks[i]))
    return ratio
