"""Run configuration types shared by the engine, controllers and harness."""

from dataclasses import dataclass, field, replace

KMH_TO_MS = 1.0 / 3.6
MS_TO_KMH = 3.6

CONTROLLER_KINDS = ("ACC", "CACC", "PLOEG", "CONSENSUS")
ATTACK_KINDS = ("none", "jam", "pos_shift", "const_speed", "const_accel")


class ConfigError(ValueError):
    """Invalid configuration; `field` names the offending key."""

    def __init__(self, field_name: str, message: str):
        self.field = field_name
        super().__init__(f"{field_name}: {message}")


@dataclass(slots=True)
class LeaderProfile:
    """Sinusoidal leader speed profile.

    The leader holds `target_speed` until `oscillation_start`, then follows
    v(t) = V - A*cos(2*pi*(t - t0)/T), so the desired acceleration is strictly
    positive on windows [t0 + k*T, t0 + T/2 + k*T).
    """

    target_speed: float          # m/s, mid-oscillation speed
    amplitude: float = 2.778     # m/s (10 km/h)
    period: float = 5.0          # s
    oscillation_start: float = 10.0  # s


@dataclass(slots=True)
class AttackSpec:
    """Active attack description. `value` is the shift rate (m/s) for
    pos_shift, the constant speed (m/s) for const_speed and the constant
    acceleration (m/s^2) for const_accel; unused for none/jam."""

    kind: str = "none"
    value: float = 0.0
    start: float = 30.0
    attacker: int = 3


@dataclass(slots=True)
class ControllerParams:
    kind: str = "CACC"
    # constant-spacing CACC
    cacc_gap: float = 5.0
    cacc_c1: float = 0.5
    cacc_xi: float = 1.0
    cacc_omega_n: float = 0.2
    # Ploeg constant-time-headway law
    ploeg_h: float = 0.5
    ploeg_kp: float = 0.2
    ploeg_kd: float = 0.7
    ploeg_r0: float = 2.0
    # ACC fallback
    acc_headway: float = 1.2
    acc_lambda: float = 0.1
    # consensus
    cons_kp: float = 0.05
    cons_kd: float = 0.3
    cons_h: float = 0.8
    cons_r0: float = 3.0
    cons_ka: float = 0.2          # gain on communicated acceleration
    cons_dv_cap: float = 2.0      # clamp on per-neighbor speed disagreement (m/s)
    cons_accel_min: float = -8.0  # plausibility clamp on communicated accel
    cons_accel_max: float = 4.0
    # degradation
    fallback_factor: float = 8.0
    beacon_timeout: float = 0.3
    ploeg_degrade_timeout: float = 1.5


@dataclass(slots=True)
class PlatoonRunConfig:
    controller: str = "CACC"
    params: ControllerParams = field(default_factory=ControllerParams)
    platoon_size: int = 8
    attacker: int = 3
    target_speed_kmh: float = 100.0
    profile: LeaderProfile | None = None   # derived from target speed if None
    attack: AttackSpec = field(default_factory=AttackSpec)
    seed: int = 0
    duration: float = 60.0
    dt: float = 0.01
    # drivetrain / geometry
    actuator_lag: float = 0.5
    accel_limit: float = 4.0
    decel_limit: float = -8.0
    vehicle_length: float = 4.0
    # channel
    beacon_period: float = 0.1
    loss_probability: float = 0.0
    leader_kv: float = 1.0

    def resolved_profile(self) -> LeaderProfile:
        if self.profile is not None:
            return self.profile
        return LeaderProfile(target_speed=self.target_speed_kmh * KMH_TO_MS)


def validate_config(cfg: PlatoonRunConfig) -> None:
    """Raise ConfigError naming the offending field for invalid configs."""
    if cfg.controller not in CONTROLLER_KINDS:
        raise ConfigError("controller", f"unknown controller {cfg.controller!r}")
    if cfg.platoon_size < 2:
        raise ConfigError("platoon_size", "need at least 2 vehicles")
    if not (1 <= cfg.attacker < cfg.platoon_size):
        raise ConfigError("attacker", "attacker index must be a follower (1 <= attacker < platoon_size)")
    if cfg.dt <= 0:
        raise ConfigError("dt", "timestep must be positive")
    if cfg.duration <= 0:
        raise ConfigError("duration", "duration must be positive")
    if cfg.actuator_lag <= 0:
        raise ConfigError("actuator_lag", "actuator lag must be positive")
    if cfg.accel_limit <= 0 or cfg.decel_limit >= 0:
        raise ConfigError("accel_limit", "need decel_limit < 0 < accel_limit")
    if not (0.0 <= cfg.loss_probability <= 1.0):
        raise ConfigError("loss_probability", "must lie in [0, 1]")
    if cfg.beacon_period <= 0:
        raise ConfigError("beacon_period", "beacon period must be positive")
    a = cfg.attack
    if a.kind not in ATTACK_KINDS:
        raise ConfigError("attack.kind", f"unknown attack kind {a.kind!r}")
    if a.kind != "none":
        if a.start < 0:
            raise ConfigError("attack.start", "attack start must be >= 0")
        if cfg.duration <= a.start:
            raise ConfigError("duration", "duration must exceed attack start")
        if a.attacker != cfg.attacker:
            raise ConfigError("attack.attacker", "attack attacker must match config attacker")
    p = cfg.params
    if p.kind != cfg.controller:
        raise ConfigError("params.kind", "params.kind must match controller")
    for name in ("cacc_gap", "cacc_omega_n", "ploeg_h", "ploeg_kp", "ploeg_kd",
                 "ploeg_r0", "acc_headway", "acc_lambda", "cons_kp", "cons_kd",
                 "cons_h", "cons_r0", "beacon_timeout"):
        if getattr(p, name) <= 0:
            raise ConfigError(f"params.{name}", "must be strictly positive")
    if p.cacc_xi < 1.0:
        raise ConfigError("params.cacc_xi", "underdamped CACC (xi < 1) not supported")
    if p.fallback_factor <= 1.0:
        raise ConfigError("params.fallback_factor", "fallback factor must exceed 1")
    prof = cfg.resolved_profile()
    if prof.period <= 0:
        raise ConfigError("profile.period", "period must be positive")
    if prof.amplitude < 0:
        raise ConfigError("profile.amplitude", "amplitude must be >= 0")
    if prof.target_speed <= prof.amplitude:
        raise ConfigError("profile.target_speed", "target speed must exceed amplitude")


def make_config(controller: str, **overrides) -> PlatoonRunConfig:
    """Convenience constructor keeping params.kind in sync with controller."""
    param_fields = {f for f in ControllerParams.__dataclass_fields__}
    pkw = {k: overrides.pop(k) for k in list(overrides) if k in param_fields}
    cfg = PlatoonRunConfig(controller=controller,
                           params=ControllerParams(kind=controller, **pkw),
                           **overrides)
    return cfg


def with_attack(cfg: PlatoonRunConfig, kind: str, value: float = 0.0,
                start: float = 30.0) -> PlatoonRunConfig:
    return replace(cfg, attack=AttackSpec(kind=kind, value=value, start=start,
                                          attacker=cfg.attacker))
