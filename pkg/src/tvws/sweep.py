"""Stepped frequency sweep: walk a front-end from f_min to f_max collecting
one power sample per step. No averaging or smoothing is applied across
dwells; each sample is a single raw measurement.
"""

from dataclasses import dataclass
from datetime import datetime, timezone

from .errors import ConfigError
from .frontend import PowerSample, SimulatedFrontEnd

UHF_TV_F_MIN_HZ = 471_250_000
UHF_TV_F_MAX_HZ = 863_250_000
DEFAULT_STEP_HZ = 250_000
DEFAULT_DWELL_S = 0.001


@dataclass(frozen=True)
class SweepConfig:
    f_min_hz: int
    f_max_hz: int
    step_hz: int = DEFAULT_STEP_HZ
    dwell_s: float = DEFAULT_DWELL_S

    def __post_init__(self):
        if self.f_max_hz <= self.f_min_hz:
            raise ConfigError(
                f"f_max ({self.f_max_hz} Hz) must be above f_min ({self.f_min_hz} Hz)"
            )
        if self.step_hz <= 0:
            raise ConfigError(f"step must be positive, got {self.step_hz} Hz")
        if self.dwell_s <= 0:
            raise ConfigError(f"dwell must be positive, got {self.dwell_s} s")
        span = self.f_max_hz - self.f_min_hz
        remainder = span % self.step_hz
        if remainder:
            raise ConfigError(
                f"sweep span {span} Hz is not divisible by step {self.step_hz} Hz "
                f"(remainder {remainder} Hz)"
            )

    @property
    def num_samples(self) -> int:
        return (self.f_max_hz - self.f_min_hz) // self.step_hz

    def frequencies(self) -> range:
        """Sample grid: f_min inclusive up to f_max exclusive."""
        return range(self.f_min_hz, self.f_max_hz, self.step_hz)


@dataclass(frozen=True)
class SweepRecord:
    config: SweepConfig
    samples: tuple[PowerSample, ...]
    started_at: datetime
    sensor_id: str


def run_sweep(frontend: SimulatedFrontEnd, config: SweepConfig, sensor_id: str = "local") -> SweepRecord:
    """Measure every grid frequency in ascending order.

    The front-end's measurement bandwidth must equal the sweep step so every
    bin covers exactly one step of spectrum. A tune failure aborts the sweep
    and surfaces the offending frequency.
    """
    if frontend.measurement_bandwidth_hz != config.step_hz:
        raise ConfigError(
            f"front-end measurement bandwidth ({frontend.measurement_bandwidth_hz} Hz) "
            f"does not match the sweep step ({config.step_hz} Hz)"
        )
    started_at = datetime.now(timezone.utc)
    samples = tuple(frontend.measure(f, config.dwell_s) for f in config.frequencies())
    return SweepRecord(config=config, samples=samples, started_at=started_at, sensor_id=sensor_id)


def sweep_to_csv(record: SweepRecord) -> str:
    """CSV export: header f_hz,p_db; integer frequencies, powers to 3 decimals."""
    lines = ["f_hz,p_db"]
    lines.extend(f"{s.f_center_hz},{s.power_db:.3f}" for s in record.samples)
    return "\n".join(lines) + "\n"
