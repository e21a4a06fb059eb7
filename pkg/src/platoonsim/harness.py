"""Experiment harness: sweep expansion, (parallel) execution with
deterministic output ordering, and CSV emission."""

from __future__ import annotations

import concurrent.futures
import json
from dataclasses import asdict, dataclass, field, replace
from typing import Any, Iterable

from .config import (ATTACK_KINDS, CONTROLLER_KINDS, AttackSpec, ConfigError,
                     ControllerParams, PlatoonRunConfig, make_config,
                     validate_config)
from .engine import run_scenario

CSV_HEADER = ("run_id,seed,controller,spacing_param,target_speed_kmh,"
              "attack_kind,attack_value,attack_start_s,crashed,crash_time_s,"
              "crash_rear_index,delta_v_ms,max_spacing_err_m,"
              "avg_max_spacing_err_m,avg_max_abs_accel_ms2,error")

_VALUE_ATTACKS = ("pos_shift", "const_speed", "const_accel")


@dataclass(slots=True)
class AttackSweep:
    """One attack dimension: a kind, its value set (empty for none/jam) and
    its start times."""
    kind: str = "none"
    values: list[float] = field(default_factory=list)
    starts: list[float] = field(default_factory=lambda: [30.0])

    def variants(self) -> list[tuple[float | None, float | None]]:
        if self.kind == "none":
            return [(None, None)]
        values: list[float | None] = list(self.values) if self.kind in _VALUE_ATTACKS else [None]
        if not values:
            raise ConfigError("attacks.values", f"{self.kind} requires a value list")
        if not self.starts:
            raise ConfigError("attacks.starts", f"{self.kind} requires start times")
        return [(v, s) for v in values for s in self.starts]


@dataclass(slots=True)
class SweepConfig:
    controllers: list[str] = field(default_factory=lambda: ["CACC", "PLOEG", "CONSENSUS"])
    cacc_spacings: list[float] = field(default_factory=lambda: [5.0, 7.0, 9.0, 11.0, 13.0, 20.0])
    target_speeds_kmh: list[float] = field(default_factory=lambda: [50.0, 80.0, 100.0, 120.0, 150.0])
    attacks: list[AttackSweep] = field(default_factory=lambda: [AttackSweep()])
    repeats: int = 5
    base_seed: int = 42
    base: PlatoonRunConfig = field(default_factory=PlatoonRunConfig)


@dataclass(slots=True)
class CsvRecord:
    run_id: str
    seed: int
    controller: str
    spacing_param: float
    target_speed_kmh: float
    attack_kind: str
    attack_value: float | None
    attack_start_s: float | None
    crashed: bool | None = None
    crash_time_s: float | None = None
    crash_rear_index: int | None = None
    delta_v_ms: float | None = None
    max_spacing_err_m: float | None = None
    avg_max_spacing_err_m: float | None = None
    avg_max_abs_accel_ms2: float | None = None
    error: str = ""


def spacing_param_of(cfg: PlatoonRunConfig) -> float:
    p = cfg.params
    return {"CACC": p.cacc_gap, "PLOEG": p.ploeg_h,
            "CONSENSUS": p.cons_h, "ACC": p.acc_headway}[cfg.controller]


def run_id_of(cfg: PlatoonRunConfig) -> str:
    """Deterministic identifier of one run; a pure function of the config."""
    ctrl = cfg.controller
    if ctrl == "CACC":
        ctrl = f"CACC{cfg.params.cacc_gap:g}"
    a = cfg.attack
    if a.kind == "none":
        atk = "none"
    elif a.kind == "jam":
        atk = f"jam-t{a.start:g}"
    else:
        atk = f"{a.kind}{a.value:g}-t{a.start:g}"
    return f"{ctrl}-v{cfg.target_speed_kmh:g}-{atk}-s{cfg.seed}"


def expand_sweep(sweep: SweepConfig) -> list[PlatoonRunConfig]:
    """Cartesian expansion in dimension order: controller variant, target
    speed, attack kind/value/start, repeat. Repeat seeds are
    base_seed + repeat index."""
    if not sweep.controllers:
        raise ConfigError("controllers", "empty dimension")
    if not sweep.target_speeds_kmh:
        raise ConfigError("target_speeds_kmh", "empty dimension")
    if not sweep.attacks:
        raise ConfigError("attacks", "empty dimension")
    if sweep.repeats < 1:
        raise ConfigError("repeats", "need at least one repeat")

    variants: list[tuple[str, float | None]] = []
    for ctrl in sweep.controllers:
        if ctrl not in CONTROLLER_KINDS:
            raise ConfigError("controllers", f"unknown controller {ctrl!r}")
        if ctrl == "CACC":
            if not sweep.cacc_spacings:
                raise ConfigError("cacc_spacings", "empty dimension")
            variants.extend(("CACC", g) for g in sweep.cacc_spacings)
        else:
            variants.append((ctrl, None))

    base = sweep.base
    configs = []
    for ctrl, gap in variants:
        params = replace(base.params, kind=ctrl)
        if gap is not None:
            params = replace(params, cacc_gap=gap)
        for speed in sweep.target_speeds_kmh:
            for attack in sweep.attacks:
                for value, start in attack.variants():
                    spec = AttackSpec(kind=attack.kind,
                                      value=0.0 if value is None else value,
                                      start=30.0 if start is None else start,
                                      attacker=base.attacker)
                    for rep in range(sweep.repeats):
                        configs.append(replace(
                            base, controller=ctrl, params=params,
                            target_speed_kmh=speed, attack=spec,
                            seed=sweep.base_seed + rep))
    return configs


def run_single(cfg: PlatoonRunConfig) -> CsvRecord:
    """Execute one run and summarize it as a CSV record."""
    rec = CsvRecord(
        run_id=run_id_of(cfg), seed=cfg.seed, controller=cfg.controller,
        spacing_param=spacing_param_of(cfg),
        target_speed_kmh=cfg.target_speed_kmh,
        attack_kind=cfg.attack.kind,
        attack_value=cfg.attack.value if cfg.attack.kind in _VALUE_ATTACKS else None,
        attack_start_s=cfg.attack.start if cfg.attack.kind != "none" else None,
    )
    try:
        _, res = run_scenario(cfg)
    except Exception as exc:  # error rows must never abort a sweep
        rec.error = f"{type(exc).__name__}: {exc}"
        return rec
    rec.crashed = res.crashed
    rec.crash_time_s = res.crash_time
    rec.crash_rear_index = res.crash_rear_index
    rec.delta_v_ms = res.delta_v
    rec.max_spacing_err_m = res.max_spacing_error
    rec.avg_max_spacing_err_m = res.avg_max_spacing_error
    rec.avg_max_abs_accel_ms2 = res.avg_max_abs_accel
    return rec


def _dedup_key(cfg: PlatoonRunConfig) -> str:
    """Runs are bit-identical when everything but the seed matches and the
    channel is lossless (the seed only feeds the loss process)."""
    rid = run_id_of(cfg)
    if cfg.loss_probability == 0.0:
        return rid.rsplit("-s", 1)[0]
    return rid


def execute_sweep(configs: list[PlatoonRunConfig], workers: int = 1) -> list[CsvRecord]:
    """Run all configs (possibly concurrently) and return records ordered by
    run_id, independent of completion order and worker count."""
    unique: dict[str, PlatoonRunConfig] = {}
    for cfg in configs:
        unique.setdefault(_dedup_key(cfg), cfg)

    results: dict[str, CsvRecord] = {}
    keys = list(unique)
    if workers > 1 and len(keys) > 1:
        with concurrent.futures.ProcessPoolExecutor(max_workers=workers) as pool:
            for key, rec in zip(keys, pool.map(run_single, [unique[k] for k in keys],
                                               chunksize=8)):
                results[key] = rec
    else:
        for key in keys:
            results[key] = run_single(unique[key])

    records = []
    for cfg in configs:
        base_rec = results[_dedup_key(cfg)]
        records.append(replace(base_rec, run_id=run_id_of(cfg), seed=cfg.seed))
    records.sort(key=lambda r: r.run_id)
    return records


def _fmt(x: Any) -> str:
    if x is None:
        return ""
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, float):
        return format(x, ".9g")
    return str(x)


def records_to_csv(records: Iterable[CsvRecord]) -> str:
    lines = [CSV_HEADER]
    for r in records:
        lines.append(",".join(_fmt(v) for v in (
            r.run_id, r.seed, r.controller, r.spacing_param,
            r.target_speed_kmh, r.attack_kind, r.attack_value,
            r.attack_start_s, r.crashed, r.crash_time_s, r.crash_rear_index,
            r.delta_v_ms, r.max_spacing_err_m, r.avg_max_spacing_err_m,
            r.avg_max_abs_accel_ms2, r.error)))
    return "\n".join(lines) + "\n"


def write_csv(records: Iterable[CsvRecord], path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(records_to_csv(records))


def table1_jamming_sweep(repeats: int = 5, base_seed: int = 42) -> SweepConfig:
    """The default jamming sweep: all CACC spacings plus Ploeg and consensus,
    the five target speeds, and jam starts bracketing the leader's positive
    acceleration window."""
    return SweepConfig(
        attacks=[AttackSweep(kind="jam",
                             starts=[29.5, 30.0, 30.5, 31.0, 31.5, 32.0, 32.5, 33.0])],
        repeats=repeats, base_seed=base_seed)


# ---------------------------------------------------------------------------
# structured-text (JSON) config files

_RUN_KEYS = {
    "controller", "target_speed_kmh", "platoon_size", "attacker", "seed",
    "duration", "dt", "actuator_lag", "accel_limit", "decel_limit",
    "vehicle_length", "beacon_period", "loss_probability", "leader_kv",
    "attack_kind", "attack_value", "attack_start",
    "amplitude", "period", "oscillation_start",
}
_PARAM_KEYS = set(ControllerParams.__dataclass_fields__) - {"kind"}


def config_from_dict(d: dict) -> PlatoonRunConfig:
    if not isinstance(d, dict):
        raise ConfigError("config", "expected a JSON object")
    d = dict(d)
    controller = d.pop("controller", None)
    if controller is None:
        raise ConfigError("controller", "missing required key")
    attack_kind = d.pop("attack_kind", "none")
    attack_value = d.pop("attack_value", 0.0)
    attack_start = d.pop("attack_start", 30.0)
    profile_over = {k: d.pop(k) for k in ("amplitude", "period", "oscillation_start")
                    if k in d}
    kwargs = {}
    for key, val in d.items():
        if key in _RUN_KEYS or key in _PARAM_KEYS:
            kwargs[key] = val
        else:
            raise ConfigError(key, "unknown configuration key")
    if attack_kind not in ATTACK_KINDS:
        raise ConfigError("attack_kind", f"unknown attack kind {attack_kind!r}")
    cfg = make_config(controller, **kwargs)
    cfg.attack = AttackSpec(kind=attack_kind, value=float(attack_value),
                            start=float(attack_start), attacker=cfg.attacker)
    if profile_over:
        prof = cfg.resolved_profile()
        for k, v in profile_over.items():
            setattr(prof, k, float(v))
        cfg.profile = prof
    validate_config(cfg)
    return cfg


def sweep_from_dict(d: dict) -> SweepConfig:
    if not isinstance(d, dict):
        raise ConfigError("config", "expected a JSON object")
    d = dict(d)
    sweep = SweepConfig()
    if "controllers" in d:
        sweep.controllers = list(d.pop("controllers"))
    if "cacc_spacings" in d:
        sweep.cacc_spacings = [float(x) for x in d.pop("cacc_spacings")]
    if "target_speeds_kmh" in d:
        sweep.target_speeds_kmh = [float(x) for x in d.pop("target_speeds_kmh")]
    if "attacks" in d:
        entries = d.pop("attacks")
        sweep.attacks = []
        for e in entries:
            if not isinstance(e, dict) or "kind" not in e:
                raise ConfigError("attacks", "each attack needs a 'kind'")
            if e["kind"] not in ATTACK_KINDS:
                raise ConfigError("attacks.kind", f"unknown attack kind {e['kind']!r}")
            sweep.attacks.append(AttackSweep(
                kind=e["kind"],
                values=[float(v) for v in e.get("values", [])],
                starts=[float(s) for s in e.get("starts", [30.0])]))
    if "repeats" in d:
        sweep.repeats = int(d.pop("repeats"))
    if "base_seed" in d:
        sweep.base_seed = int(d.pop("base_seed"))
    base_over = d.pop("base", {})
    if d:
        raise ConfigError(sorted(d)[0], "unknown configuration key")
    if base_over:
        base_over = dict(base_over)
        base_over.setdefault("controller", sweep.controllers[0])
        sweep.base = config_from_dict(base_over)
    # per-dimension validation happens in expand_sweep
    expand_probe = expand_sweep(sweep)
    del expand_probe
    return sweep


def load_json(path) -> dict:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            return json.load(fh)
        except json.JSONDecodeError as exc:
            raise ConfigError("config", f"invalid JSON: {exc}") from exc
