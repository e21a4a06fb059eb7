"""Beacon emission, the attack layer (jamming and field falsification), and
delivery with optional seeded random loss."""

from __future__ import annotations

from dataclasses import dataclass, replace

from .config import AttackSpec


@dataclass(slots=True)
class Beacon:
    sender: int
    seq: int
    timestamp: float
    position: float
    speed: float
    accel: float       # actual acceleration
    cmd_accel: float   # commanded acceleration (controller output)


@dataclass(slots=True)
class ChannelState:
    loss_probability: float = 0.0
    seed: int = 0
    jam_active: bool = False


def emit_beacon(index: int, position: float, speed: float, accel: float,
                cmd_accel: float, t: float, seq: int) -> Beacon:
    """Beacon reflecting ground-truth state at emission time."""
    return Beacon(sender=index, seq=seq, timestamp=t, position=position,
                  speed=speed, accel=accel, cmd_accel=cmd_accel)


def mutate_beacon(b: Beacon, attack: AttackSpec, t: float) -> Beacon:
    """Apply the attacker's message falsification. The attacker's physical
    driving is untouched; only the advertised fields change."""
    if b.sender != attack.attacker or t < attack.start:
        return b
    kind = attack.kind
    if kind == "pos_shift":
        return replace(b, position=b.position + attack.value * (t - attack.start))
    if kind == "const_speed":
        return replace(b, speed=attack.value)
    if kind == "const_accel":
        return replace(b, accel=attack.value, cmd_accel=attack.value)
    return b  # none / jam


_MIX1 = 0x9E3779B97F4A7C15
_MIX2 = 0xBF58476D1CE4E5B9
_MIX3 = 0x94D049BB133111EB
_MIX4 = 0x2545F4914F6CDD1D
_MASK = (1 << 64) - 1


def _unit_interval(seed: int, sender: int, seq: int, receiver: int) -> float:
    """Deterministic uniform draw in [0, 1); a pure function of its inputs."""
    x = (seed * _MIX1 + sender * _MIX2 + seq * _MIX3 + receiver * _MIX4) & _MASK
    x = ((x ^ (x >> 30)) * _MIX2) & _MASK
    x = ((x ^ (x >> 27)) * _MIX3) & _MASK
    x ^= x >> 31
    return x / float(1 << 64)


def reception_ok(channel: ChannelState, sender: int, seq: int, receiver: int) -> bool:
    if channel.jam_active:
        return False
    p = channel.loss_probability
    if p <= 0.0:
        return True
    if p >= 1.0:
        return False
    return _unit_interval(channel.seed, sender, seq, receiver) >= p


def deliver(b: Beacon, receivers: list[int], channel: ChannelState,
            t: float) -> dict[int, bool]:
    """Per-receiver reception flags. Jamming suppresses all receptions;
    otherwise each reception independently succeeds with probability
    1 - loss_probability under the seeded generator."""
    return {r: reception_ok(channel, b.sender, b.seq, r) for r in receivers}
