"""Simulated tune/dwell/measure radio front-end over a Scene.

Two measurement paths estimate the same quantity, power inside one
measurement bandwidth around the tuned frequency:

  * analytic — the scene's closed-form band power, plus optional Gaussian
    measurement jitter;
  * iq — synthesize a baseband capture of round(dwell * sample_rate)
    samples, band-limit it to the measurement bandwidth in the frequency
    domain, and report the mean-square power.

One instance models one physical radio: at most one measurement may be in
flight at a time, enforced by a guard that raises on violation.
"""

import threading
from dataclasses import dataclass

import numpy as np

from .errors import ConcurrentAccessError, ConfigError, TuneError
from .scene import Scene, linear_to_db

ANALYTIC = "analytic"
IQ = "iq"

DEFAULT_TUNE_LO_HZ = 50_000_000
DEFAULT_TUNE_HI_HZ = 2_200_000_000


@dataclass(frozen=True)
class FrontEndConfig:
    mode: str = ANALYTIC
    measurement_bandwidth_hz: int = 250_000
    sample_rate_hz: int = 4_000_000
    seed: int = 0
    jitter_sigma_db: float = 0.0

    def __post_init__(self):
        if self.mode not in (ANALYTIC, IQ):
            raise ConfigError(f"mode must be {ANALYTIC!r} or {IQ!r}, got {self.mode!r}")
        if self.measurement_bandwidth_hz <= 0:
            raise ConfigError(
                f"measurement bandwidth must be positive, got {self.measurement_bandwidth_hz} Hz"
            )
        if self.mode == IQ and self.sample_rate_hz < self.measurement_bandwidth_hz:
            raise ConfigError(
                f"sample rate ({self.sample_rate_hz} Hz) must be at least the "
                f"measurement bandwidth ({self.measurement_bandwidth_hz} Hz)"
            )
        if self.jitter_sigma_db < 0:
            raise ConfigError(f"jitter sigma must be >= 0, got {self.jitter_sigma_db}")


@dataclass(frozen=True)
class PowerSample:
    f_center_hz: int
    power_db: float


class SimulatedFrontEnd:
    """Tunable receiver backed by a Scene."""

    def __init__(
        self,
        scene: Scene,
        config: FrontEndConfig | None = None,
        tune_lo_hz: int = DEFAULT_TUNE_LO_HZ,
        tune_hi_hz: int = DEFAULT_TUNE_HI_HZ,
    ):
        self.scene = scene
        self.config = config or FrontEndConfig()
        self._bandwidth_hz = self.config.measurement_bandwidth_hz
        self._range = (tune_lo_hz, tune_hi_hz)
        self._rng = np.random.default_rng(self.config.seed)
        self._claim = threading.BoundedSemaphore(1)
        self.measure_count = 0

    @property
    def measurement_bandwidth_hz(self) -> int:
        return self._bandwidth_hz

    def set_measurement_bandwidth(self, hz: int) -> None:
        """Change the resolution bandwidth, like setting RBW on an analyzer."""
        if hz <= 0:
            raise ConfigError(f"measurement bandwidth must be positive, got {hz} Hz")
        if self.config.mode == IQ and self.config.sample_rate_hz < hz:
            raise ConfigError(
                f"measurement bandwidth {hz} Hz exceeds sample rate "
                f"{self.config.sample_rate_hz} Hz"
            )
        self._bandwidth_hz = hz

    def reseed(self, seed: int) -> None:
        """Reset the measurement noise generator to a reproducible state."""
        self._rng = np.random.default_rng(seed)

    def tunable_range(self) -> tuple[int, int]:
        return self._range

    def measure(self, f_center_hz: int, dwell_s: float) -> PowerSample:
        """Tune to f_center_hz, dwell, and report in-band power in dB."""
        if dwell_s <= 0:
            raise ValueError(f"dwell must be positive, got {dwell_s} s")
        lo, hi = self._range
        if not lo <= f_center_hz <= hi:
            raise TuneError(f_center_hz, lo, hi)
        if not self._claim.acquire(blocking=False):
            raise ConcurrentAccessError(
                f"measure({f_center_hz} Hz) entered while another measurement is in flight"
            )
        try:
            self.measure_count += 1
            half = self._bandwidth_hz / 2.0
            if self.config.mode == ANALYTIC:
                p = self.scene.band_power_db(f_center_hz - half, f_center_hz + half)
                if self.config.jitter_sigma_db > 0.0:
                    p += self._rng.normal(0.0, self.config.jitter_sigma_db)
            else:
                p = self._measure_iq(f_center_hz, dwell_s, half)
            return PowerSample(f_center_hz=f_center_hz, power_db=float(p))
        finally:
            self._claim.release()

    def _measure_iq(self, f_center_hz: int, dwell_s: float, half_bw_hz: float) -> float:
        sr = self.config.sample_rate_hz
        n = round(dwell_s * sr)
        if n <= 0:
            raise ConfigError(f"dwell {dwell_s} s yields no samples at {sr} S/s")
        capture_seed = int(self._rng.integers(0, 2**63, dtype=np.uint64))
        x = self.scene.generate_iq(f_center_hz, sr, n, capture_seed)
        spectrum = np.fft.fft(x)
        bin_freqs = np.fft.fftfreq(n, d=1.0 / sr)
        mask = (bin_freqs >= -half_bw_hz) & (bin_freqs < half_bw_hz)
        if not mask.any():
            raise ConfigError(
                f"no FFT bins inside the {self._bandwidth_hz} Hz measurement band: "
                f"increase dwell or lower the sample rate"
            )
        # Parseval: mean-square of the band-limited block, without the inverse transform
        p = float(np.sum(np.abs(spectrum[mask]) ** 2)) / n**2
        return linear_to_db(p)
