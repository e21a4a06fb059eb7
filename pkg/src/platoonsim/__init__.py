"""Deterministic CACC platooning simulator and attack-evaluation harness."""

from .config import (AttackSpec, ConfigError, ControllerParams, LeaderProfile,
                     PlatoonRunConfig, make_config, validate_config, with_attack)
from .controllers import (ControllerInput, NeighborTable, PloegState,
                          RadarReading, acc_law, cacc_law, consensus_law,
                          desired_gap, estimate_predecessor_accel,
                          fallback_gate, ploeg_law)
from .engine import (RunTrace, VehicleState, detect_first_collision,
                     integrate_step, leader_setpoint, run_scenario,
                     write_trace_tsv)
from .metrics import (CollisionRecord, RunResult, aggregate_run,
                      delta_v_at_collision, spacing_error,
                      string_stability_ratio)
from .harness import (AttackSweep, CsvRecord, SweepConfig, execute_sweep,
                      expand_sweep, records_to_csv, run_id_of, run_single,
                      table1_jamming_sweep, write_csv)
from .network import Beacon, ChannelState, deliver, emit_beacon, mutate_beacon

__all__ = [
    "AttackSweep", "CsvRecord", "SweepConfig", "execute_sweep", "expand_sweep",
    "records_to_csv", "run_id_of", "run_single", "table1_jamming_sweep",
    "write_csv",
    "AttackSpec", "Beacon", "ChannelState", "CollisionRecord", "ConfigError",
    "ControllerInput", "ControllerParams", "LeaderProfile", "NeighborTable",
    "PlatoonRunConfig", "PloegState", "RadarReading", "RunResult", "RunTrace",
    "VehicleState", "acc_law", "aggregate_run", "cacc_law", "consensus_law",
    "deliver", "delta_v_at_collision", "desired_gap", "detect_first_collision",
    "emit_beacon", "estimate_predecessor_accel", "fallback_gate",
    "integrate_step", "leader_setpoint", "make_config", "mutate_beacon",
    "ploeg_law", "run_scenario", "spacing_error", "string_stability_ratio",
    "validate_config", "with_attack", "write_trace_tsv",
]

__version__ = "0.1.0"
