"""TV white space detection over a simulated UHF front-end.

A synthetic scene (noise floor plus emitters) stands in for the air
interface; a simulated front-end sweeps it in fixed frequency steps; the
detector thresholds the sweep at the midpoint of its min and max powers and
marks each TV channel occupied or free. A TCP daemon exposes one sensor per
radio, and the aggregator merges many sensors into a radio environment map.
"""

from .aggregator import (
    ComparisonReport,
    RemEntry,
    RemSnapshot,
    SensorFailure,
    compare,
    load_free_channels,
    poll_all,
    query_sensor,
    rem_from_csv,
    rem_to_csv,
    save_free_channels,
)
from .bandplan import DEFAULT_CHANNEL_WIDTH_HZ, BandPlan
from .detect import (
    FREE,
    OCCUPIED,
    ChannelDecision,
    Threshold,
    classify,
    compute_threshold,
    decisions_to_csv,
    white_spaces,
)
from .errors import ConcurrentAccessError, ConfigError, SceneError, TuneError
from .frontend import ANALYTIC, IQ, FrontEndConfig, PowerSample, SimulatedFrontEnd
from .scene import (
    EMITTER_KINDS,
    NARROWBAND_INCUMBENT,
    WIDEBAND_TV,
    Emitter,
    Scene,
    load_scene,
    load_scene_file,
)
from .service import SensorConfig, SensorServer, SensorState, load_sensor_config, serve
from .sweep import (
    DEFAULT_DWELL_S,
    DEFAULT_STEP_HZ,
    UHF_TV_F_MAX_HZ,
    UHF_TV_F_MIN_HZ,
    SweepConfig,
    SweepRecord,
    run_sweep,
    sweep_to_csv,
)

__version__ = "0.1.0"

__all__ = [
    "ANALYTIC",
    "BandPlan",
    "ChannelDecision",
    "ComparisonReport",
    "ConcurrentAccessError",
    "ConfigError",
    "DEFAULT_CHANNEL_WIDTH_HZ",
    "DEFAULT_DWELL_S",
    "DEFAULT_STEP_HZ",
    "EMITTER_KINDS",
    "Emitter",
    "FREE",
    "FrontEndConfig",
    "IQ",
    "NARROWBAND_INCUMBENT",
    "OCCUPIED",
    "PowerSample",
    "RemEntry",
    "RemSnapshot",
    "Scene",
    "SceneError",
    "SensorConfig",
    "SensorFailure",
    "SensorServer",
    "SensorState",
    "SimulatedFrontEnd",
    "SweepConfig",
    "SweepRecord",
    "Threshold",
    "TuneError",
    "UHF_TV_F_MAX_HZ",
    "UHF_TV_F_MIN_HZ",
    "WIDEBAND_TV",
    "classify",
    "compare",
    "compute_threshold",
    "decisions_to_csv",
    "load_free_channels",
    "load_scene",
    "load_scene_file",
    "load_sensor_config",
    "poll_all",
    "query_sensor",
    "rem_from_csv",
    "rem_to_csv",
    "run_sweep",
    "save_free_channels",
    "serve",
    "sweep_to_csv",
    "white_spaces",
]
