"""Data-injection attacks: falsified beacon fields from vehicle 3.

The attacker drives normally but advertises false position, speed, or
acceleration. Which controllers care depends on which beacon fields each law
actually reads:

  * position shift  -> only the consensus controller reads positions: crashes
  * constant speed  -> only the constant-spacing CACC trusts speeds blindly
  * constant accel  -> the shared feedforward path affects every controller

The script also writes a sweep CSV that the plots tool in frontend/ can
render as a scatter grid.
"""

from platoonsim import (PlatoonRunConfig, execute_sweep, expand_sweep,
                        make_config, run_scenario, with_attack, write_csv)
from platoonsim.harness import AttackSweep, SweepConfig

ATTACKS = (
    ("pos_shift", (3.0, 7.0, 11.0), "m/s drift"),
    ("const_speed", (-50.0, 50.0, 150.0), "m/s claimed"),
    ("const_accel", (-30.0, 10.0, 30.0), "m/s^2 claimed"),
)

for kind, values, unit in ATTACKS:
    print(f"\n=== {kind} ({unit}) ===")
    for controller in ("CACC", "PLOEG", "CONSENSUS"):
        _, base = run_scenario(make_config(controller))
        outcomes = []
        for value in values:
            cfg = with_attack(make_config(controller), kind, value=value, start=30.0)
            _, res = run_scenario(cfg)
            outcomes.append(f"{value:g}: " + (
                f"CRASH dv={res.delta_v:.1f}" if res.crashed
                else f"err {res.max_spacing_error:.1f}m"))
        print(f"  {controller:10s} (baseline err {base.max_spacing_error:.1f}m)  "
              + "  ".join(outcomes))

sweep = SweepConfig(
    controllers=["CACC", "PLOEG", "CONSENSUS"], cacc_spacings=[5.0],
    target_speeds_kmh=[50.0, 100.0, 150.0],
    attacks=[AttackSweep(kind="pos_shift", values=[3, 5, 7, 9, 11], starts=[30.0])],
    repeats=1, base_seed=42, base=PlatoonRunConfig())
records = execute_sweep(expand_sweep(sweep))
write_csv(records, "pos_shift_sweep.csv")
print("\nwrote pos_shift_sweep.csv "
      "(render with: plots scatter --csv pos_shift_sweep.csv --out scatter.svg)")
