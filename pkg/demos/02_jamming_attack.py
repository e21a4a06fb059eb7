"""Jamming the V2X channel.

From the attack start, no vehicle receives any beacon. The constant-spacing
CACC keeps trusting its last-known leader/predecessor data, so when the
leader accelerates away from the frozen values a rear-end collision follows —
independent of the platoon's target speed. Headway-based controllers
(Ploeg, consensus) scale their gaps with speed and merely degrade.
"""

from platoonsim import make_config, run_scenario, with_attack

print("CACC, 5 m spacing, jam at t = 30 s, across target speeds:")
for speed in (50, 80, 100, 120, 150):
    cfg = with_attack(make_config("CACC", target_speed_kmh=float(speed)),
                      "jam", start=30.0)
    _, res = run_scenario(cfg)
    print(f"  {speed:3d} km/h -> crash at t={res.crash_time:.2f} s, "
          f"vehicle {res.crash_rear_index}, impact {res.delta_v:.2f} m/s")

print("\nLarger CACC spacings absorb the frozen-data error (100 km/h):")
for gap in (5, 7, 9, 11, 13, 20):
    cfg = with_attack(make_config("CACC", cacc_gap=float(gap)), "jam", start=30.0)
    _, res = run_scenario(cfg)
    outcome = (f"crash, impact {res.delta_v:.2f} m/s" if res.crashed
               else f"no crash, max error {res.max_spacing_error:.2f} m")
    print(f"  {gap:2d} m spacing -> {outcome}")

print("\nHeadway controllers under the same jam (speed-dependent outcome):")
for controller in ("PLOEG", "CONSENSUS"):
    for speed in (50, 100, 150):
        cfg = with_attack(make_config(controller, target_speed_kmh=float(speed)),
                          "jam", start=30.0)
        _, res = run_scenario(cfg)
        print(f"  {controller:10s} {speed:3d} km/h -> crashed={res.crashed}, "
              f"max error {res.max_spacing_error:.2f} m")
