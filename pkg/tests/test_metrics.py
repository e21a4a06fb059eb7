import numpy as np
import pytest

from platoonsim import (CollisionRecord, RunTrace, aggregate_run,
                        delta_v_at_collision, make_config, run_scenario,
                        spacing_error, string_stability_ratio, with_attack)


def trace_from_errors(err_columns, dt=0.01):
    """Build a minimal RunTrace whose spacing-error columns are given; the
    kinematic columns are irrelevant for the spacing aggregates."""
    err = np.asarray(err_columns, dtype=float)
    samples, n = err.shape
    times = np.arange(samples) * dt
    zeros = np.zeros_like(err)
    return RunTrace(times=times, position=zeros, speed=zeros,
                    accel=zeros, cmd_accel=zeros, spacing_error=err,
                    timestep=dt, duration=times[-1] if samples else 0.0)


def test_spacing_error_values():
    assert spacing_error(5.0, 5.0) == 0.0
    assert spacing_error(5.2, 5.0) == pytest.approx(0.2)
    assert spacing_error(3.0, 5.0) == 2.0


def test_spacing_error_rejects_nonpositive_desired():
    with pytest.raises(ValueError):
        spacing_error(5.0, 0.0)


def test_delta_v_at_collision():
    assert delta_v_at_collision(20.0, 25.0) == 5.0


def test_aggregate_perfect_formation():
    res = aggregate_run(trace_from_errors(np.zeros((10, 3))))
    assert res.max_spacing_error == 0.0
    assert res.avg_max_spacing_error == 0.0
    assert not res.crashed


def test_aggregate_two_vehicle_max():
    res = aggregate_run(trace_from_errors([[0, 0.1], [0, 0.3], [0, 0.2]]))
    assert res.max_spacing_error == pytest.approx(0.3)


def test_aggregate_avg_and_max():
    # leader column plus per-follower maxima {0.3, 0.5}
    err = [[0, 0.3, 0.1], [0, 0.2, 0.5], [0, 0.1, 0.2]]
    res = aggregate_run(trace_from_errors(err))
    assert res.max_spacing_error == pytest.approx(0.5)
    assert res.avg_max_spacing_error == pytest.approx(0.4)


def test_aggregate_uses_error_magnitude():
    res = aggregate_run(trace_from_errors([[0, -0.4], [0, 0.1]]))
    assert res.max_spacing_error == pytest.approx(0.4)


def test_aggregate_pre_crash_truncation():
    err = [[0, 0.1], [0, 0.2], [0, 9.9]]
    col = CollisionRecord(rear_index=1, time=0.02, delta_v=3.0)
    res = aggregate_run(trace_from_errors(err), col)
    assert res.crashed
    assert res.max_spacing_error == pytest.approx(0.2)  # crash sample excluded
    assert res.crash_time == 0.02
    assert res.crash_rear_index == 1
    assert res.delta_v == 3.0


def test_aggregate_empty_trace_rejected():
    with pytest.raises(ValueError):
        aggregate_run(trace_from_errors(np.zeros((0, 2))))


def test_aggregate_result_ordering_invariant():
    err = np.zeros((50, 4))
    err[:, 1] = np.linspace(0, 0.5, 50)
    err[:, 2] = 0.2
    err[:, 3] = -0.1
    res = aggregate_run(trace_from_errors(err))
    assert res.max_spacing_error >= res.avg_max_spacing_error >= 0.0


def test_zero_error_vehicle_weakly_decreases_average():
    err = [[0, 0.3, 0.1], [0, 0.2, 0.5]]
    res = aggregate_run(trace_from_errors(err))
    err_plus = [row + [0.0] for row in err]
    res_plus = aggregate_run(trace_from_errors(err_plus))
    assert res_plus.max_spacing_error == res.max_spacing_error
    assert res_plus.avg_max_spacing_error < res.avg_max_spacing_error


def test_string_stability_decaying():
    err = np.zeros((10, 4))
    err[0, 1:] = [0.4, 0.2, 0.1]
    assert string_stability_ratio(trace_from_errors(err)) == pytest.approx(0.5)


def test_string_stability_amplifying():
    err = np.zeros((10, 3))
    err[0, 1:] = [0.1, 0.2]
    assert string_stability_ratio(trace_from_errors(err)) == pytest.approx(2.0)


def test_string_stability_degenerate_zero():
    err = np.zeros((10, 4))
    err[0, 1:] = [1e-6, 1e-5, 1e-7]  # all peaks below 1 mm
    assert string_stability_ratio(trace_from_errors(err)) == 0.0


def test_attacked_error_dominates_baseline():
    """Operational definition of "affects": an effective attack cannot lower
    the worst spacing error below the seed-matched baseline."""
    base = run_scenario(make_config("CONSENSUS"))[1]
    attacked = run_scenario(
        with_attack(make_config("CONSENSUS"), "const_accel", value=30.0))[1]
    assert attacked.max_spacing_error >= base.max_spacing_error


def test_delta_v_matches_trace_at_crash_step():
    cfg = with_attack(make_config("CACC"), "jam", start=30.0)
    trace, res = run_scenario(cfg)
    assert res.crashed
    k = int(np.argmin(np.abs(trace.times - res.crash_time)))
    i = res.crash_rear_index
    assert res.delta_v == pytest.approx(
        trace.speed[k, i] - trace.speed[k, i - 1], abs=1e-12)
