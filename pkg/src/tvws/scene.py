"""Synthetic RF environment: a flat noise floor plus rectangular-PSD emitters.

Stands in for the over-the-air band so the rest of the pipeline can run on a
desk. Powers are dB relative to an arbitrary reference that is consistent
scene-wide; only relative levels matter downstream.

Scene JSON document (UTF-8):

    {"label": "...",
     "noise_psd_db_per_hz": -170.0,
     "emitters": [{"f_center_hz": 475250000,
                   "bandwidth_hz": 7600000,
                   "power_db": -60.0,
                   "kind": "wideband_tv"}]}

`kind` is "wideband_tv" or "narrowband_incumbent". Unknown keys are rejected.
"""

import json
import math
import os
from dataclasses import dataclass

import numpy as np

from .errors import SceneError

WIDEBAND_TV = "wideband_tv"
NARROWBAND_INCUMBENT = "narrowband_incumbent"
EMITTER_KINDS = (WIDEBAND_TV, NARROWBAND_INCUMBENT)


def db_to_linear(db: float) -> float:
    return 10.0 ** (db / 10.0)


def linear_to_db(p: float) -> float:
    return 10.0 * math.log10(p)


@dataclass(frozen=True)
class Emitter:
    """A transmitter with flat PSD over [f_center - bw/2, f_center + bw/2]."""

    f_center_hz: int
    bandwidth_hz: int
    power_db: float
    kind: str

    @property
    def psd_db_per_hz(self) -> float:
        return self.power_db - 10.0 * math.log10(self.bandwidth_hz)

    @property
    def f_lo_hz(self) -> float:
        return self.f_center_hz - self.bandwidth_hz / 2.0

    @property
    def f_hi_hz(self) -> float:
        return self.f_center_hz + self.bandwidth_hz / 2.0


@dataclass(frozen=True)
class Scene:
    noise_psd_db_per_hz: float
    emitters: tuple[Emitter, ...]
    label: str = ""

    def band_power_db(self, f_lo_hz: float, f_hi_hz: float) -> float:
        """Closed-form total power in [f_lo_hz, f_hi_hz): noise plus every
        emitter's PSD integrated over its overlap with the band."""
        if f_hi_hz <= f_lo_hz:
            raise ValueError(f"empty band: [{f_lo_hz}, {f_hi_hz}) Hz")
        total = db_to_linear(self.noise_psd_db_per_hz) * (f_hi_hz - f_lo_hz)
        for e in self.emitters:
            overlap = min(f_hi_hz, e.f_hi_hz) - max(f_lo_hz, e.f_lo_hz)
            if overlap > 0:
                total += db_to_linear(e.psd_db_per_hz) * overlap
        return linear_to_db(total)

    def generate_iq(self, f_center_hz: int, sample_rate_hz: int, n: int, seed: int) -> np.ndarray:
        """Synthesize n complex baseband samples centered on f_center_hz.

        Circularly-symmetric Gaussian noise spanning the full sample_rate
        band, plus one band-limited Gaussian process per overlapping emitter
        built by drawing only the FFT bins inside the emitter's band. Scaling
        is chosen so the expected mean-square power of the block equals the
        linear band power over [f_center - sr/2, f_center + sr/2). Output is
        bit-identical for identical arguments.
        """
        if n <= 0:
            raise ValueError(f"sample count must be positive, got {n}")
        if sample_rate_hz <= 0:
            raise ValueError(f"sample rate must be positive, got {sample_rate_hz}")
        rng = np.random.default_rng(seed)
        noise_p = db_to_linear(self.noise_psd_db_per_hz) * sample_rate_hz
        x = math.sqrt(noise_p / 2.0) * (rng.standard_normal(n) + 1j * rng.standard_normal(n))
        band_lo = f_center_hz - sample_rate_hz / 2.0
        band_hi = f_center_hz + sample_rate_hz / 2.0
        bin_freqs = np.fft.fftfreq(n, d=1.0 / sample_rate_hz)
        for e in self.emitters:
            lo = max(e.f_lo_hz, band_lo) - f_center_hz
            hi = min(e.f_hi_hz, band_hi) - f_center_hz
            if hi <= lo:
                continue
            mask = (bin_freqs >= lo) & (bin_freqs < hi)
            k = int(mask.sum())
            if k == 0:
                continue  # narrower than one FFT bin at this block length
            p = db_to_linear(e.psd_db_per_hz) * (hi - lo)
            # E|ifft(S)|^2 = K * E|S_k|^2 / n^2, so amp makes the block power exactly p
            amp = n * math.sqrt(p / (2.0 * k))
            spectrum = np.zeros(n, dtype=complex)
            spectrum[mask] = amp * (rng.standard_normal(k) + 1j * rng.standard_normal(k))
            x = x + np.fft.ifft(spectrum)
        return x


def load_scene(source: bytes | str) -> Scene:
    """Parse and validate a scene JSON document."""
    if isinstance(source, bytes):
        try:
            source = source.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise SceneError(f"scene document is not valid UTF-8: {exc}") from exc
    try:
        doc = json.loads(source)
    except json.JSONDecodeError as exc:
        raise SceneError(f"scene document is not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise SceneError("scene document must be a JSON object")
    _check_keys(doc, "scene", ("label", "noise_psd_db_per_hz", "emitters"))
    label = doc["label"]
    if not isinstance(label, str):
        raise SceneError("label: must be a string")
    noise = _finite_number(doc, "noise_psd_db_per_hz", "noise_psd_db_per_hz")
    raw_emitters = doc["emitters"]
    if not isinstance(raw_emitters, list):
        raise SceneError("emitters: must be an array")
    emitters = tuple(_parse_emitter(e, f"emitters[{i}]") for i, e in enumerate(raw_emitters))
    return Scene(noise_psd_db_per_hz=noise, emitters=emitters, label=label)


def load_scene_file(path: str | os.PathLike) -> Scene:
    with open(path, "rb") as fh:
        return load_scene(fh.read())


def _parse_emitter(obj, path: str) -> Emitter:
    if not isinstance(obj, dict):
        raise SceneError(f"{path}: must be a JSON object")
    _check_keys(obj, path, ("f_center_hz", "bandwidth_hz", "power_db", "kind"))
    f_center = _integer(obj, "f_center_hz", f"{path}.f_center_hz")
    bandwidth = _integer(obj, "bandwidth_hz", f"{path}.bandwidth_hz")
    if bandwidth <= 0:
        raise SceneError(f"{path}.bandwidth_hz: must be positive, got {bandwidth}")
    power = _finite_number(obj, "power_db", f"{path}.power_db")
    kind = obj["kind"]
    if kind not in EMITTER_KINDS:
        raise SceneError(f"{path}.kind: must be one of {list(EMITTER_KINDS)}, got {kind!r}")
    return Emitter(f_center_hz=f_center, bandwidth_hz=bandwidth, power_db=power, kind=kind)


def _check_keys(obj: dict, path: str, allowed: tuple[str, ...]) -> None:
    unknown = sorted(set(obj) - set(allowed))
    if unknown:
        raise SceneError(f"{path}: unknown key(s) {unknown}")
    missing = sorted(set(allowed) - set(obj))
    if missing:
        raise SceneError(f"{path}: missing key(s) {missing}")


def _integer(obj: dict, key: str, path: str) -> int:
    value = obj[key]
    # bool is an int subclass; reject it explicitly
    if isinstance(value, bool) or not isinstance(value, int):
        raise SceneError(f"{path}: must be an integer, got {value!r}")
    return value


def _finite_number(obj: dict, key: str, path: str) -> float:
    value = obj[key]
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise SceneError(f"{path}: must be a number, got {value!r}")
    if not math.isfinite(value):
        raise SceneError(f"{path}: must be finite, got {value!r}")
    return float(value)
