"""Exception types shared across the sensing pipeline."""


class ConfigError(ValueError):
    """Invalid band-plan, sweep, or front-end parameters."""


class SceneError(ValueError):
    """Malformed or invalid scene document; the message carries the field path."""


class TuneError(RuntimeError):
    """Requested center frequency is outside the front-end's tunable range."""

    def __init__(self, f_hz: int, lo_hz: int, hi_hz: int):
        super().__init__(
            f"cannot tune to {f_hz} Hz: tunable range is [{lo_hz}, {hi_hz}] Hz"
        )
        self.f_hz = f_hz
        self.lo_hz = lo_hz
        self.hi_hz = hi_hz


class ConcurrentAccessError(RuntimeError):
    """measure() entered while another measurement holds the front-end."""
