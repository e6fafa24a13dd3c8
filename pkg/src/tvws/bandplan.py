"""TV channel geometry: a uniform channel grid over a frequency range.

All frequencies are exact integer Hz so boundary membership never depends on
floating-point rounding.
"""

from dataclasses import dataclass, field

from .errors import ConfigError

DEFAULT_CHANNEL_WIDTH_HZ = 8_000_000


@dataclass(frozen=True)
class BandPlan:
    """Channels of equal width tiling [f_min_hz, f_max_hz), indexed from 0.

    Channel k spans [f_min_hz + k*channel_width_hz, f_min_hz + (k+1)*channel_width_hz);
    a frequency sitting exactly on a boundary belongs to the upper channel.
    The range must be a whole number of channels wide.
    """

    f_min_hz: int
    f_max_hz: int
    channel_width_hz: int
    channel_count: int = field(init=False)

    def __post_init__(self):
        if self.f_max_hz <= self.f_min_hz:
            raise ConfigError(
                f"f_max ({self.f_max_hz} Hz) must be above f_min ({self.f_min_hz} Hz)"
            )
        if self.channel_width_hz <= 0:
            raise ConfigError(f"channel width must be positive, got {self.channel_width_hz} Hz")
        span = self.f_max_hz - self.f_min_hz
        remainder = span % self.channel_width_hz
        if remainder:
            raise ConfigError(
                f"band span {span} Hz is not a whole number of {self.channel_width_hz} Hz "
                f"channels (remainder {remainder} Hz)"
            )
        object.__setattr__(self, "channel_count", span // self.channel_width_hz)

    def channel_of(self, f_hz: int) -> int:
        """Index of the channel containing f_hz (half-open intervals)."""
        if not self.f_min_hz <= f_hz < self.f_max_hz:
            raise ValueError(
                f"{f_hz} Hz is outside the band [{self.f_min_hz}, {self.f_max_hz}) Hz"
            )
        return int((f_hz - self.f_min_hz) // self.channel_width_hz)

    def channel_start_hz(self, channel: int) -> int:
        return self.f_min_hz + channel * self.channel_width_hz

    def channel_end_hz(self, channel: int) -> int:
        return self.f_min_hz + (channel + 1) * self.channel_width_hz

    def samples_per_channel(self, step_hz: int) -> int:
        """How many step_hz-spaced samples land in each channel."""
        if step_hz <= 0:
            raise ConfigError(f"step must be positive, got {step_hz} Hz")
        remainder = self.channel_width_hz % step_hz
        if remainder:
            raise ConfigError(
                f"channel width {self.channel_width_hz} Hz is not divisible by step "
                f"{step_hz} Hz (remainder {remainder} Hz)"
            )
        return self.channel_width_hz // step_hz
