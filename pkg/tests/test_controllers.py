import math
from dataclasses import replace

import pytest

from platoonsim import (ControllerInput, ControllerParams, NeighborTable,
                        PloegState, RadarReading, acc_law, cacc_law,
                        consensus_law, desired_gap, estimate_predecessor_accel,
                        fallback_gate, ploeg_law)
from platoonsim.controllers import (DegradationStatus, NeighborRecord,
                                    OwnState, PredecessorAccelEstimator,
                                    cacc_degraded)

V = 27.78  # 100 km/h


def params_for(kind):
    return ControllerParams(kind=kind)


def formation_input(kind, n=8, index=1, speed=V, now=20.0, params=None):
    """Perfect steady formation: exact desired gaps, equal speeds, zero
    accelerations, fresh truthful beacons."""
    params = params_for(kind) if params is None else params
    gap = desired_gap(kind, speed, params)
    length = 4.0
    # offsets expressed relative to the subject so the consensus position
    # disagreement is exactly zero in floating point
    positions = [(index - j) * (length + gap) for j in range(n)]
    table = NeighborTable()
    for j in range(n):
        if j == index:
            continue
        table.update(j, NeighborRecord(receipt_time=now, position=positions[j],
                                       speed=speed, accel=0.0, cmd_accel=0.0))
    radar = RadarReading(gap=gap, rel_speed=0.0)
    own = OwnState(index=index, position=positions[index], speed=speed, accel=0.0)
    return ControllerInput(own=own, radar=radar, neighbors=table, now=now,
                           params=params, platoon_order=list(range(n)))


# --- desired gap policies ---------------------------------------------------

def test_desired_gap_cacc_constant():
    p = params_for("CACC")
    assert desired_gap("CACC", 0.0, p) == 5.0
    assert desired_gap("CACC", 40.0, p) == 5.0


def test_desired_gap_ploeg_headway():
    assert desired_gap("PLOEG", V, params_for("PLOEG")) == pytest.approx(2.0 + 0.5 * V)


def test_desired_gap_consensus_standstill():
    assert desired_gap("CONSENSUS", 0.0, params_for("CONSENSUS")) == 3.0


# --- ACC --------------------------------------------------------------------

def test_acc_equilibrium_exact_zero():
    assert acc_law(formation_input("ACC")) == 0.0


def test_acc_gap_surplus():
    inp = formation_input("ACC")
    inp.radar = RadarReading(gap=inp.radar.gap + 2.0, rel_speed=0.0)
    assert acc_law(inp) == pytest.approx(0.1 * 2.0 / 1.2, rel=1e-12)


def test_acc_closing_brakes():
    inp = formation_input("ACC")
    inp.radar = RadarReading(gap=inp.radar.gap, rel_speed=-1.0)
    assert acc_law(inp) == pytest.approx(-1.0 / 1.2, rel=1e-12)


def test_acc_invalid_radar_returns_zero():
    inp = formation_input("ACC")
    inp.radar = RadarReading(gap=0.0, rel_speed=0.0, valid=False)
    assert acc_law(inp) == 0.0


# --- constant-spacing CACC --------------------------------------------------

def test_cacc_equilibrium_exact_zero():
    assert cacc_law(formation_input("CACC")) == 0.0


def test_cacc_speed_difference_coefficients():
    # v_own exceeds predecessor and leader by 1: u = -(2*xi - C1)*wn - C1*wn
    inp = formation_input("CACC")
    inp.own.speed = V + 1.0
    inp.radar = RadarReading(gap=5.0, rel_speed=-1.0)
    assert cacc_law(inp) == pytest.approx(-0.3 - 0.1, rel=1e-12)


def test_cacc_spacing_term():
    inp = formation_input("CACC")
    inp.radar = RadarReading(gap=4.0, rel_speed=0.0)  # 1 m too close
    assert cacc_law(inp) == pytest.approx(-0.04, rel=1e-12)


def test_cacc_ignores_beacon_position():
    inp = formation_input("CACC")
    u_ref = cacc_law(inp)
    for rec in inp.neighbors.records.values():
        rec.position += 1e6
    assert cacc_law(inp) == u_ref


def test_cacc_degraded_on_stale_beacons():
    inp = formation_input("CACC")
    assert not cacc_degraded(inp)
    inp.now += 0.31
    assert cacc_degraded(inp)


# --- Ploeg ------------------------------------------------------------------

def test_ploeg_equilibrium_stays_zero():
    u, state = ploeg_law(formation_input("PLOEG"), PloegState(), 0.01)
    assert u == 0.0
    assert state.u_prev == 0.0


def test_ploeg_feedforward_euler_step():
    inp = formation_input("PLOEG")
    for rec in inp.neighbors.records.values():
        rec.cmd_accel = 1.0
    u, _ = ploeg_law(inp, PloegState(u_prev=0.0), 0.01)
    assert u == pytest.approx(0.02, rel=1e-12)


def test_ploeg_ignores_beacon_position():
    inp = formation_input("PLOEG")
    inp.radar = RadarReading(gap=17.0, rel_speed=-0.4)
    u_ref, _ = ploeg_law(inp, PloegState(u_prev=0.1), 0.01)
    for rec in inp.neighbors.records.values():
        rec.position -= 1e6
    u_mut, _ = ploeg_law(inp, PloegState(u_prev=0.1), 0.01)
    assert u_mut == u_ref


def test_ploeg_continuity_bound():
    import random
    rng = random.Random(3)
    p = params_for("PLOEG")
    dt = 0.01
    for _ in range(500):
        inp = formation_input("PLOEG")
        inp.own.speed = V + rng.uniform(-5, 5)
        inp.own.accel = rng.uniform(-3, 3)
        inp.radar = RadarReading(gap=rng.uniform(5, 30), rel_speed=rng.uniform(-5, 5))
        u_ff = rng.uniform(-4, 4)
        for rec in inp.neighbors.records.values():
            rec.cmd_accel = u_ff
        u_prev = rng.uniform(-4, 4)
        u, _ = ploeg_law(inp, PloegState(u_prev=u_prev), dt)
        e = inp.radar.gap - (p.ploeg_r0 + p.ploeg_h * inp.own.speed)
        e_dot = inp.radar.rel_speed - p.ploeg_h * inp.own.accel
        bound = (abs(u_ff) + p.ploeg_kp * abs(e) + p.ploeg_kd * abs(e_dot)
                 + abs(u_prev)) * dt / p.ploeg_h
        assert abs(u - u_prev) <= bound + 1e-12


# --- predecessor acceleration estimator -------------------------------------

def test_estimator_constant_relative_speed():
    readings = [RadarReading(gap=10.0, rel_speed=1.5) for _ in range(100)]
    assert estimate_predecessor_accel(readings, 0.0, 0.01) == 0.0


def test_estimator_single_sample_fallback():
    readings = [RadarReading(gap=10.0, rel_speed=1.0)]
    assert estimate_predecessor_accel(readings, 0.7, 0.01) == 0.7


def test_estimator_converges_to_constant_deceleration():
    # predecessor decelerating at -2 m/s^2 with own accel 0: rel_speed falls
    # by 2*dt per step; the smoother converges geometrically
    dt = 0.01
    est = PredecessorAccelEstimator(alpha=0.05)
    rel = 0.0
    for _ in range(3 * 20):  # 3 / alpha steps
        est.update(rel, dt)
        rel -= 2.0 * dt
    assert abs(est.estimate(0.0) + 2.0) < 0.1


# --- consensus --------------------------------------------------------------

def test_consensus_equilibrium_exact_zero():
    assert consensus_law(formation_input("CONSENSUS")) == 0.0


def test_consensus_single_neighbor_position_surplus():
    inp = formation_input("CONSENSUS", n=2, index=1)
    rec = inp.neighbors.get(0)
    rec.position += 1.0
    assert consensus_law(inp) == pytest.approx(0.05, rel=1e-12)


def test_consensus_position_linearity():
    inp = formation_input("CONSENSUS", index=4)
    u_ref = consensus_law(inp)
    inp.neighbors.get(3).position += 50.0
    u_att = consensus_law(inp)
    assert u_att - u_ref == pytest.approx(0.05 * 50.0 / 7.0, rel=1e-9)


def test_consensus_ignores_radar():
    inp = formation_input("CONSENSUS")
    u_ref = consensus_law(inp)
    inp.radar = RadarReading(gap=1.0, rel_speed=-9.0)
    assert consensus_law(inp) == u_ref


def test_consensus_requires_fresh_member():
    inp = formation_input("CONSENSUS")
    inp.now += 10.0
    with pytest.raises(ValueError):
        consensus_law(inp)


def test_consensus_clamps_implausible_claims():
    # a claimed 1000 m/s^2 deceleration contributes like the actuator limit
    inp = formation_input("CONSENSUS")
    inp.neighbors.get(3).accel = -1000.0
    u_big = consensus_law(inp)
    inp.neighbors.get(3).accel = -8.0
    assert u_big == consensus_law(inp)


# --- sign sanity ------------------------------------------------------------

@pytest.mark.parametrize("kind", ["ACC", "CACC", "PLOEG", "CONSENSUS"])
def test_sign_sanity_own_speed_increase(kind):
    for index in range(1, 8):
        inp = formation_input(kind, index=index)
        inp.own.speed += 0.5
        inp.radar = replace(inp.radar, rel_speed=-0.5)
        if kind == "ACC":
            u = acc_law(inp)
        elif kind == "CACC":
            u = cacc_law(inp)
        elif kind == "PLOEG":
            u, _ = ploeg_law(inp, PloegState(), 0.01)
        else:
            u = consensus_law(inp)
        assert u < 0.0, f"{kind} index {index}"


# --- fallback gate ----------------------------------------------------------

def test_fallback_gate_passthrough():
    inp = formation_input("CACC")
    u = fallback_gate(DegradationStatus(False), inp.radar, "CACC", inp.params,
                      0.42, inp)
    assert u == 0.42


def test_fallback_gate_gap_overshoot():
    params = replace(params_for("CACC"), fallback_factor=2.0)
    inp = formation_input("CACC", params=params)
    inp.radar = RadarReading(gap=10.1, rel_speed=0.0)  # threshold 2 * 5 = 10
    u = fallback_gate(DegradationStatus(False), inp.radar, "CACC", params,
                      0.42, inp)
    assert u == acc_law(inp)
    assert u != 0.42


def test_fallback_gate_degraded():
    inp = formation_input("CACC")
    u = fallback_gate(DegradationStatus(True), inp.radar, "CACC", inp.params,
                      0.42, inp)
    assert u == acc_law(inp)
