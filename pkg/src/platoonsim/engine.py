"""Fixed-timestep longitudinal platoon simulation: vehicle dynamics with
first-order actuator lag, sinusoidal leader profile, beaconing, attacks,
controller evaluation and first-collision detection."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import metrics
from .config import LeaderProfile, PlatoonRunConfig, validate_config
from .controllers import desired_gap
from .metrics import CollisionRecord, RunResult
from .network import _unit_interval

_KIND_CODE = {"ACC": 0, "CACC": 1, "PLOEG": 2, "CONSENSUS": 3}


@dataclass(slots=True)
class VehicleState:
    index: int
    position: float   # front-bumper along-track coordinate, m
    speed: float      # m/s, never negative
    accel: float      # m/s^2, actual
    cmd_accel: float  # m/s^2, controller output before actuator lag
    length: float = 4.0


def leader_setpoint(t: float, profile: LeaderProfile) -> tuple[float, float]:
    """Desired (speed, acceleration) of the leader at time t. Before the
    oscillation start the profile holds the target speed; afterwards
    v(t) = V - A*cos(2*pi*(t - t0)/T)."""
    if t < profile.oscillation_start:
        return profile.target_speed, 0.0
    omega = 2.0 * math.pi / profile.period
    phase = omega * (t - profile.oscillation_start)
    v = profile.target_speed - profile.amplitude * math.cos(phase)
    a = profile.amplitude * omega * math.sin(phase)
    return v, a


def leader_setpoint_jerk(t: float, profile: LeaderProfile) -> float:
    """Analytic derivative of the desired acceleration (used by the leader's
    lag-inverting feedforward)."""
    if t < profile.oscillation_start:
        return 0.0
    omega = 2.0 * math.pi / profile.period
    phase = omega * (t - profile.oscillation_start)
    return profile.amplitude * omega * omega * math.cos(phase)


def integrate_step(state: VehicleState, u: float, dt: float, lag: float,
                   accel_limit: float = 4.0, decel_limit: float = -8.0) -> VehicleState:
    """Semi-implicit Euler step with first-order actuator lag. The command is
    clamped to the actuator range; speed is clamped at standstill."""
    u_cl = min(accel_limit, max(decel_limit, u))
    accel = state.accel + (u_cl - state.accel) * (dt / lag)
    speed = state.speed + accel * dt
    if speed < 0.0:
        speed = 0.0
    position = state.position + speed * dt
    return VehicleState(index=state.index, position=position, speed=speed,
                        accel=accel, cmd_accel=u_cl, length=state.length)


def detect_first_collision(states: list[VehicleState]) -> tuple[int, float] | None:
    """Smallest rear index whose gap to the predecessor reached zero, with the
    impact velocity at this step; None when there is no contact."""
    for i in range(1, len(states)):
        front, rear = states[i - 1], states[i]
        if front.position - rear.position - front.length <= 0.0:
            return i, rear.speed - front.speed
    return None


@dataclass(slots=True)
class RunTrace:
    """Per-step, per-vehicle samples. Arrays have shape (samples, vehicles);
    sample 0 is the initial state."""
    times: np.ndarray
    position: np.ndarray
    speed: np.ndarray
    accel: np.ndarray
    cmd_accel: np.ndarray
    spacing_error: np.ndarray  # signed, leader column is zero
    timestep: float
    duration: float


def write_trace_tsv(trace: RunTrace, path) -> None:
    """Tab-separated trace export, one row per (step, vehicle)."""
    n_vehicles = trace.position.shape[1]
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("time\tindex\tposition\tspeed\taccel\tcmd_accel\tspacing_error\n")
        for k in range(trace.times.size):
            t = trace.times[k]
            for i in range(n_vehicles):
                fh.write(f"{t:.3f}\t{i}\t{trace.position[k, i]:.6f}\t"
                         f"{trace.speed[k, i]:.6f}\t{trace.accel[k, i]:.6f}\t"
                         f"{trace.cmd_accel[k, i]:.6f}\t{trace.spacing_error[k, i]:.6f}\n")


def run_scenario(cfg: PlatoonRunConfig) -> tuple[RunTrace, RunResult]:
    """Run one platoon scenario to its duration or first collision."""
    validate_config(cfg)

    params = cfg.params
    kind = cfg.controller
    code = _KIND_CODE[kind]
    n = cfg.platoon_size
    dt = cfg.dt
    lag = cfg.actuator_lag
    a_max = cfg.accel_limit
    a_min = cfg.decel_limit
    length = cfg.vehicle_length
    profile = cfg.resolved_profile()
    v0 = profile.target_speed
    kv = cfg.leader_kv

    attack = cfg.attack
    atk_kind = attack.kind
    atk_start = attack.start
    atk_value = attack.value
    attacker = cfg.attacker
    loss_p = cfg.loss_probability
    seed = cfg.seed

    # controller shorthands
    timeout = params.beacon_timeout
    factor = params.fallback_factor
    acc_h = params.acc_headway
    acc_lam = params.acc_lambda
    acc_r0 = params.ploeg_r0
    cacc_gap_p = params.cacc_gap
    c1 = params.cacc_c1
    wn = params.cacc_omega_n
    root = params.cacc_xi + math.sqrt(params.cacc_xi ** 2 - 1.0)
    k_pl = (2.0 * params.cacc_xi - c1 * root) * wn   # predecessor speed gain
    k_ld = c1 * root * wn                            # leader speed gain
    wn2 = wn * wn
    pl_h = params.ploeg_h
    pl_kp = params.ploeg_kp
    pl_kd = params.ploeg_kd
    pl_r0 = params.ploeg_r0
    pl_degrade = params.ploeg_degrade_timeout
    cn_kp = params.cons_kp
    cn_kd = params.cons_kd
    cn_ka = params.cons_ka
    cn_cap = params.cons_dv_cap
    cn_h = params.cons_h
    cn_r0 = params.cons_r0
    cn_amin = params.cons_accel_min
    cn_amax = params.cons_accel_max

    # initial formation: exact desired gaps at the target speed
    gap0 = desired_gap(kind, v0, params)
    pos = [0.0] * n
    for i in range(1, n):
        pos[i] = pos[i - 1] - length - gap0
    spd = [v0] * n
    acc = [0.0] * n
    cmd = [0.0] * n

    # neighbor tables: receipt time and beacon fields per (receiver, sender)
    neg_inf = -math.inf
    nb_t = [[neg_inf] * n for _ in range(n)]
    nb_pos = [[0.0] * n for _ in range(n)]
    nb_spd = [[0.0] * n for _ in range(n)]
    nb_acc = [[0.0] * n for _ in range(n)]
    nb_cmd = [[0.0] * n for _ in range(n)]
    seqs = [0] * n

    # Ploeg carried state and radar-based predecessor-acceleration estimator
    u_prev = [0.0] * n
    est_lp = [0.0] * n
    est_prev_rel = [None] * n
    est_alpha = 0.05

    steps = int(math.floor(cfg.duration / dt + 1e-9))
    beacon_every = max(1, round(cfg.beacon_period / dt))

    col_t = [0.0]
    col_pos = list(pos)
    col_spd = list(spd)
    col_acc = list(acc)
    col_cmd = list(cmd)
    col_err = [0.0] * n  # initial formation has zero spacing error

    collision: CollisionRecord | None = None
    u = [0.0] * n

    for k in range(steps):
        t = k * dt

        # --- beaconing at the configured rate, phase aligned across vehicles
        if k % beacon_every == 0:
            jam_active = atk_kind == "jam" and t >= atk_start
            if not jam_active:
                inject = atk_kind in ("pos_shift", "const_speed", "const_accel") \
                    and t >= atk_start
                for s in range(n):
                    b_pos = pos[s]
                    b_spd = spd[s]
                    b_acc = acc[s]
                    b_cmd = cmd[s]
                    if inject and s == attacker:
                        if atk_kind == "pos_shift":
                            b_pos += atk_value * (t - atk_start)
                        elif atk_kind == "const_speed":
                            b_spd = atk_value
                        else:  # const_accel
                            b_acc = atk_value
                            b_cmd = atk_value
                    seq = seqs[s]
                    seqs[s] = seq + 1
                    for r in range(n):
                        if r == s:
                            continue
                        if loss_p > 0.0 and _unit_interval(seed, s, seq, r) < loss_p:
                            continue
                        nb_t[r][s] = t
                        nb_pos[r][s] = b_pos
                        nb_spd[r][s] = b_spd
                        nb_acc[r][s] = b_acc
                        nb_cmd[r][s] = b_cmd
            else:
                for s in range(n):
                    seqs[s] += 1  # emissions continue; nothing is received

        # --- leader: lag-inverting feedforward plus proportional speed tracking
        v_des, a_des = leader_setpoint(t, profile)
        u[0] = a_des + lag * leader_setpoint_jerk(t, profile) + kv * (v_des - spd[0])

        # --- follower controllers
        for i in range(1, n):
            v_i = spd[i]
            gap = pos[i - 1] - pos[i] - length
            rel = spd[i - 1] - v_i

            # radar-based predecessor-acceleration estimator (Ploeg degraded mode)
            if code == 2:
                prev = est_prev_rel[i]
                if prev is not None:
                    est_lp[i] += est_alpha * ((rel - prev) / dt - est_lp[i])
                est_prev_rel[i] = rel

            if code == 0:  # ACC
                e = gap - (acc_r0 + acc_h * v_i)
                u[i] = (rel + acc_lam * e) / acc_h
                continue

            degraded = False
            candidate = 0.0
            if code == 1:  # constant-spacing CACC, last-known beacon data
                row_t = nb_t[i]
                if row_t[0] == neg_inf or row_t[i - 1] == neg_inf:
                    degraded = True
                else:
                    candidate = ((1.0 - c1) * nb_acc[i][i - 1] + c1 * nb_acc[i][0]
                                 - k_pl * (v_i - nb_spd[i][i - 1])
                                 - k_ld * (v_i - nb_spd[i][0])
                                 + wn2 * (gap - cacc_gap_p))
                dgap = cacc_gap_p
            elif code == 2:  # Ploeg
                age = t - nb_t[i][i - 1]
                if age <= timeout:
                    u_ff = nb_cmd[i][i - 1]
                elif age <= pl_degrade:
                    # graceful degradation: estimated predecessor acceleration
                    u_ff = acc[i] + est_lp[i] if est_prev_rel[i] is not None else acc[i]
                else:
                    degraded = True
                    u_ff = 0.0
                if not degraded:
                    e = gap - (pl_r0 + pl_h * v_i)
                    e_dot = rel - pl_h * acc[i]
                    candidate = u_prev[i] + dt * (
                        (-u_prev[i] + u_ff + pl_kp * e + pl_kd * e_dot) / pl_h)
                dgap = pl_r0 + pl_h * v_i
            else:  # consensus
                slot = length + cn_r0 + cn_h * v_i
                total = 0.0
                count = 0
                row_t = nb_t[i]
                row_pos = nb_pos[i]
                row_spd = nb_spd[i]
                row_acc = nb_acc[i]
                p_i = pos[i]
                for j in range(n):
                    if j == i:
                        continue
                    age = t - row_t[j]
                    if age > timeout:
                        continue
                    a_j = row_acc[j]
                    if a_j > cn_amax:
                        a_j = cn_amax
                    elif a_j < cn_amin:
                        a_j = cn_amin
                    dv = row_spd[j] - v_i
                    if dv > cn_cap:
                        dv = cn_cap
                    elif dv < -cn_cap:
                        dv = -cn_cap
                    # dead-reckon the advertised position to the current time
                    p_j = row_pos[j] + row_spd[j] * age
                    total += cn_ka * a_j + cn_kd * dv + cn_kp * (p_j - p_i - (i - j) * slot)
                    count += 1
                if count == 0:
                    degraded = True
                else:
                    candidate = total / count
                dgap = cn_r0 + cn_h * v_i

            # ACC fallback gate: degradation or gap overshoot
            if degraded or gap > factor * dgap:
                e = gap - (acc_r0 + acc_h * v_i)
                u[i] = (rel + acc_lam * e) / acc_h
            else:
                u[i] = candidate
            if code == 2:
                u_prev[i] = u[i]

        # --- integrate all vehicles (semi-implicit Euler with actuator lag)
        for i in range(n):
            u_cl = u[i]
            if u_cl > a_max:
                u_cl = a_max
            elif u_cl < a_min:
                u_cl = a_min
            a_i = acc[i] + (u_cl - acc[i]) * (dt / lag)
            v_i = spd[i] + a_i * dt
            if v_i < 0.0:
                v_i = 0.0
            acc[i] = a_i
            spd[i] = v_i
            pos[i] += v_i * dt
            cmd[i] = u_cl

        # --- record the post-step sample
        t1 = (k + 1) * dt
        col_t.append(t1)
        col_pos.extend(pos)
        col_spd.extend(spd)
        col_acc.extend(acc)
        col_cmd.extend(cmd)
        col_err.append(0.0)
        for i in range(1, n):
            gap = pos[i - 1] - pos[i] - length
            col_err.append(gap - desired_gap(kind, spd[i], params))

        # --- first-collision rule: smallest rear index, then stop
        for i in range(1, n):
            if pos[i - 1] - pos[i] - length <= 0.0:
                collision = CollisionRecord(rear_index=i, time=t1,
                                            delta_v=spd[i] - spd[i - 1])
                break
        if collision is not None:
            break

    samples = len(col_t)
    trace = RunTrace(
        times=np.asarray(col_t),
        position=np.asarray(col_pos).reshape(samples, n),
        speed=np.asarray(col_spd).reshape(samples, n),
        accel=np.asarray(col_acc).reshape(samples, n),
        cmd_accel=np.asarray(col_cmd).reshape(samples, n),
        spacing_error=np.asarray(col_err).reshape(samples, n),
        timestep=dt,
        duration=cfg.duration,
    )
    result = metrics.aggregate_run(trace, collision)
    return trace, result
