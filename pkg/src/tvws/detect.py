"""Sweep post-processing: derive a power threshold from the collection and
classify every channel as occupied or free.

The threshold is the midpoint of the minimum and maximum sample powers,
taken in the dB domain. A channel is occupied as soon as any one of its
samples exceeds the threshold, which is what catches narrowband users that
light up only a bin or two of an otherwise quiet channel; it is free only
if every sample is at or below the threshold.
"""

from dataclasses import dataclass

from .bandplan import BandPlan
from .sweep import SweepRecord

OCCUPIED = "occupied"
FREE = "free"


@dataclass(frozen=True)
class Threshold:
    gamma_db: float
    min_db: float
    max_db: float


@dataclass(frozen=True)
class ChannelDecision:
    channel: int
    f_start_hz: int
    f_end_hz: int
    verdict: str
    p_max_db: float
    n_exceeding: int


def compute_threshold(record: SweepRecord) -> Threshold:
    """Midpoint of the sweep's min and max powers, in dB."""
    if not record.samples:
        raise ValueError("cannot derive a threshold from an empty sweep record")
    powers = [s.power_db for s in record.samples]
    lo = min(powers)
    hi = max(powers)
    return Threshold(gamma_db=(lo + hi) / 2.0, min_db=lo, max_db=hi)


def classify(record: SweepRecord, plan: BandPlan, threshold: Threshold) -> list[ChannelDecision]:
    """One verdict per channel: occupied iff any sample is strictly above the
    threshold, free iff all samples are at or below it."""
    cfg = record.config
    if (cfg.f_min_hz, cfg.f_max_hz) != (plan.f_min_hz, plan.f_max_hz):
        raise ValueError(
            f"sweep range [{cfg.f_min_hz}, {cfg.f_max_hz}) Hz does not match the "
            f"band plan range [{plan.f_min_hz}, {plan.f_max_hz}) Hz"
        )
    plan.samples_per_channel(cfg.step_hz)
    per_channel: list[list[float]] = [[] for _ in range(plan.channel_count)]
    for s in record.samples:
        per_channel[plan.channel_of(s.f_center_hz)].append(s.power_db)
    decisions = []
    for k, powers in enumerate(per_channel):
        n_exceeding = sum(1 for p in powers if p > threshold.gamma_db)
        decisions.append(
            ChannelDecision(
                channel=k,
                f_start_hz=plan.channel_start_hz(k),
                f_end_hz=plan.channel_end_hz(k),
                verdict=OCCUPIED if n_exceeding else FREE,
                p_max_db=max(powers),
                n_exceeding=n_exceeding,
            )
        )
    return decisions


def white_spaces(decisions: list[ChannelDecision]) -> list[int]:
    """Indices of free channels, ascending."""
    return sorted(d.channel for d in decisions if d.verdict == FREE)


def decisions_to_csv(decisions: list[ChannelDecision]) -> str:
    lines = ["channel,f_start_hz,f_end_hz,verdict,p_max_db,n_exceeding"]
    lines.extend(
        f"{d.channel},{d.f_start_hz},{d.f_end_hz},{d.verdict},{d.p_max_db:.3f},{d.n_exceeding}"
        for d in decisions
    )
    return "\n".join(lines) + "\n"
