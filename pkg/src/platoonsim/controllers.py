"""Upper (desired-acceleration) controllers: ACC, constant-spacing CACC,
Ploeg's constant-time-headway law with graceful degradation, and a consensus
law over the whole platoon, plus the ACC fallback gate."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .config import ControllerParams


@dataclass(slots=True)
class RadarReading:
    gap: float          # front bumper to predecessor rear bumper, m
    rel_speed: float    # predecessor speed minus own speed, m/s
    valid: bool = True


@dataclass(slots=True)
class NeighborRecord:
    receipt_time: float
    position: float
    speed: float
    accel: float
    cmd_accel: float


class NeighborTable:
    """Last received beacon per platoon member; newest wins."""

    __slots__ = ("records",)

    def __init__(self):
        self.records: dict[int, NeighborRecord] = {}

    def update(self, sender: int, rec: NeighborRecord) -> None:
        self.records[sender] = rec

    def get(self, sender: int) -> NeighborRecord | None:
        return self.records.get(sender)

    def age(self, sender: int, now: float) -> float:
        rec = self.records.get(sender)
        return math.inf if rec is None else now - rec.receipt_time


@dataclass(slots=True)
class OwnState:
    index: int
    position: float
    speed: float
    accel: float


@dataclass(slots=True)
class ControllerInput:
    own: OwnState
    radar: RadarReading
    neighbors: NeighborTable
    now: float
    params: ControllerParams
    platoon_order: list[int] = field(default_factory=list)


def desired_gap(kind: str, own_speed: float, params: ControllerParams) -> float:
    if kind == "CACC":
        return params.cacc_gap
    if kind == "PLOEG":
        return params.ploeg_r0 + params.ploeg_h * own_speed
    if kind == "ACC":
        return params.ploeg_r0 + params.acc_headway * own_speed
    if kind == "CONSENSUS":
        return params.cons_r0 + params.cons_h * own_speed
    raise ValueError(f"unknown controller kind {kind!r}")


# ---------------------------------------------------------------------------
# scalar kernels (shared by the public law functions and the run loop)

def acc_command(gap: float, rel_speed: float, own_speed: float,
                params: ControllerParams) -> float:
    e = gap - (params.ploeg_r0 + params.acc_headway * own_speed)
    return (rel_speed + params.acc_lambda * e) / params.acc_headway


def cacc_command(gap: float, v_own: float, v_pred: float, v_lead: float,
                 a_pred: float, a_lead: float, params: ControllerParams) -> float:
    c1 = params.cacc_c1
    xi = params.cacc_xi
    wn = params.cacc_omega_n
    root = xi + math.sqrt(xi * xi - 1.0)
    e = gap - params.cacc_gap
    return ((1.0 - c1) * a_pred + c1 * a_lead
            - (2.0 * xi - c1 * root) * wn * (v_own - v_pred)
            - c1 * root * wn * (v_own - v_lead)
            + wn * wn * e)


def ploeg_command(gap: float, rel_speed: float, v_own: float, a_own: float,
                  u_ff: float, u_prev: float, dt: float,
                  params: ControllerParams) -> float:
    e = gap - (params.ploeg_r0 + params.ploeg_h * v_own)
    e_dot = rel_speed - params.ploeg_h * a_own
    u_dot = (-u_prev + u_ff + params.ploeg_kp * e + params.ploeg_kd * e_dot) / params.ploeg_h
    return u_prev + u_dot * dt


def consensus_command(i: int, p_own: float, v_own: float,
                      members: list[tuple[int, float, float, float]],
                      params: ControllerParams,
                      vehicle_length: float = 4.0) -> float:
    """Average of per-member acceleration feedforward plus speed and position
    disagreement terms. `members` holds (index, position, speed, accel) of the
    non-stale neighbors; communicated accelerations are clamped to the
    actuator range and speed disagreements to +-cons_dv_cap before weighting,
    so that physically impossible claims cannot saturate the law."""
    kp = params.cons_kp
    kd = params.cons_kd
    ka = params.cons_ka
    cap = params.cons_dv_cap
    accel_limit = params.cons_accel_max
    decel_limit = params.cons_accel_min
    slot = vehicle_length + params.cons_r0 + params.cons_h * v_own
    total = 0.0
    for j, p_j, v_j, a_j in members:
        if a_j > accel_limit:
            a_j = accel_limit
        elif a_j < decel_limit:
            a_j = decel_limit
        dv = v_j - v_own
        if dv > cap:
            dv = cap
        elif dv < -cap:
            dv = -cap
        delta = (i - j) * slot  # desired signed offset, positive when j is ahead
        total += ka * a_j + kd * dv + kp * (p_j - p_own - delta)
    return total / len(members)


# ---------------------------------------------------------------------------
# public law functions over ControllerInput

def acc_law(inp: ControllerInput) -> float:
    if not inp.radar.valid:
        return 0.0
    return acc_command(inp.radar.gap, inp.radar.rel_speed, inp.own.speed, inp.params)


def cacc_law(inp: ControllerInput) -> float:
    """Constant-spacing CACC; reads gap from radar and predecessor/leader
    speed and acceleration from the newest beacons. Beacon position fields
    are never read."""
    own = inp.own
    pred = inp.neighbors.get(own.index - 1)
    lead = inp.neighbors.get(0)
    if pred is None or lead is None:
        raise ValueError("cacc_law requires leader and predecessor beacons")
    return cacc_command(inp.radar.gap, own.speed, pred.speed, lead.speed,
                        pred.accel, lead.accel, inp.params)


def cacc_degraded(inp: ControllerInput) -> bool:
    """True when the leader or predecessor beacon is missing or stale."""
    own = inp.own
    timeout = inp.params.beacon_timeout
    return (inp.neighbors.age(0, inp.now) > timeout
            or inp.neighbors.age(own.index - 1, inp.now) > timeout)


@dataclass(slots=True)
class PloegState:
    u_prev: float = 0.0


def ploeg_law(inp: ControllerInput, ctrl_state: PloegState, dt: float) -> tuple[float, PloegState]:
    """One Euler step of the Ploeg law; the predecessor's commanded
    acceleration feeds forward, replaced by an estimate when stale."""
    own = inp.own
    pred = inp.neighbors.get(own.index - 1)
    if pred is not None and inp.now - pred.receipt_time <= inp.params.beacon_timeout:
        u_ff = pred.cmd_accel
    else:
        u_ff = 0.0  # callers with radar history substitute the estimator output
    u = ploeg_command(inp.radar.gap, inp.radar.rel_speed, own.speed, own.accel,
                      u_ff, ctrl_state.u_prev, dt, inp.params)
    return u, PloegState(u_prev=u)


def consensus_law(inp: ControllerInput) -> float:
    """Consensus over all non-stale platoon members; positions come from
    beacons, own position from ground truth. Raises when no member is fresh
    (degraded; the fallback gate decides)."""
    own = inp.own
    timeout = inp.params.beacon_timeout
    members = []
    for j in inp.platoon_order:
        if j == own.index:
            continue
        rec = inp.neighbors.get(j)
        if rec is not None and inp.now - rec.receipt_time <= timeout:
            # dead-reckon the advertised position to the current time
            age = inp.now - rec.receipt_time
            members.append((j, rec.position + rec.speed * age, rec.speed, rec.accel))
    if not members:
        raise ValueError("consensus_law requires at least one non-stale neighbor")
    return consensus_command(own.index, own.position, own.speed, members,
                             inp.params)


class PredecessorAccelEstimator:
    """Estimates the predecessor's acceleration from radar relative-speed
    deltas via exponential smoothing (graceful-degradation feedforward)."""

    __slots__ = ("alpha", "lowpass", "prev_rel_speed", "samples")

    def __init__(self, alpha: float = 0.05):
        self.alpha = alpha
        self.lowpass = 0.0
        self.prev_rel_speed: float | None = None
        self.samples = 0

    def update(self, rel_speed: float, dt: float) -> None:
        if self.prev_rel_speed is not None:
            raw = (rel_speed - self.prev_rel_speed) / dt
            self.lowpass += self.alpha * (raw - self.lowpass)
        self.prev_rel_speed = rel_speed
        self.samples += 1

    def estimate(self, a_own: float) -> float:
        if self.samples < 2:
            return a_own
        return a_own + self.lowpass


def estimate_predecessor_accel(radar_history: list[RadarReading], a_own: float,
                               dt: float, alpha: float = 0.05) -> float:
    """Replay a radar history through the smoothing estimator."""
    est = PredecessorAccelEstimator(alpha=alpha)
    for r in radar_history:
        est.update(r.rel_speed, dt)
    return est.estimate(a_own)


@dataclass(slots=True)
class DegradationStatus:
    degraded: bool = False


def fallback_gate(status: DegradationStatus, radar: RadarReading, kind: str,
                  params: ControllerParams, candidate_u: float,
                  inp: ControllerInput) -> float:
    """Route to ACC when the cooperative law is degraded or the measured gap
    overshoots the desired gap by more than fallback_factor."""
    if status.degraded:
        return acc_law(inp)
    if radar.valid and radar.gap > params.fallback_factor * desired_gap(kind, inp.own.speed, params):
        return acc_law(inp)
    return candidate_u
