"""Standalone sensor daemon: one radio, consultable over TCP.

Wire protocol: each message is a single UTF-8 JSON object terminated by one
LF (0x0A); no length prefix. A connection may carry any number of requests.

  -> {"cmd":"ping"}
  <- {"ok":true,"role":"sensor","sensor_id":"...","version":1}
  -> {"cmd":"info"}
  <- {"ok":true,...sensor description...}
  -> {"cmd":"sweep","f_min_hz":I,"f_max_hz":I,"step_hz":I,"dwell_s":F}
  <- {"ok":true,"sensor_id":"...","samples":[[f_hz,p_db],...]}
  -> {"cmd":"channels","f_min_hz":I,"f_max_hz":I,"step_hz":I,"dwell_s":F,"channel_width_hz":I}
  <- {"ok":true,"sensor_id":"...","gamma_db":F,"decisions":[[channel,"occupied"|"free",p_max_db],...]}

Errors come back in-protocol as {"ok":false,"error":code,"detail":string?}
with codes "busy", "unknown_cmd", "bad_request", or "internal"; they never
take the daemon down. Sweep-bearing commands hold an exclusive claim on the
radio; a contender is rejected with "busy" immediately instead of queuing,
so a central poller sees sensor availability explicitly. Omitted sweep
parameters fall back to the daemon's configured defaults.
"""

import json
import os
import socketserver
import sys
import threading
from dataclasses import dataclass, field

from .bandplan import DEFAULT_CHANNEL_WIDTH_HZ, BandPlan
from .detect import classify, compute_threshold
from .errors import ConfigError, TuneError
from .frontend import FrontEndConfig, SimulatedFrontEnd
from .scene import Scene, load_scene_file
from .sweep import (
    DEFAULT_DWELL_S,
    DEFAULT_STEP_HZ,
    UHF_TV_F_MAX_HZ,
    UHF_TV_F_MIN_HZ,
    SweepConfig,
    run_sweep,
)

PROTOCOL_VERSION = 1
MAX_LINE_BYTES = 1 << 20


@dataclass(frozen=True)
class SensorConfig:
    sensor_id: str = "sensor"
    listen: str = "127.0.0.1:7373"
    scene_path: str = ""
    frontend: FrontEndConfig = field(default_factory=FrontEndConfig)
    sweep: SweepConfig = field(
        default_factory=lambda: SweepConfig(
            UHF_TV_F_MIN_HZ, UHF_TV_F_MAX_HZ, DEFAULT_STEP_HZ, DEFAULT_DWELL_S
        )
    )
    channel_width_hz: int = DEFAULT_CHANNEL_WIDTH_HZ

    def __post_init__(self):
        if not self.sensor_id:
            raise ConfigError("sensor_id must be non-empty")
        split_listen_address(self.listen)


def split_listen_address(address: str) -> tuple[str, int]:
    host, sep, port = address.rpartition(":")
    if not sep or not host:
        raise ConfigError(f"listen address must be host:port, got {address!r}")
    try:
        port_num = int(port)
    except ValueError:
        raise ConfigError(f"invalid port in listen address {address!r}") from None
    if not 0 <= port_num <= 65535:
        raise ConfigError(f"port out of range in listen address {address!r}")
    return host, port_num


def load_sensor_config(path: str | os.PathLike) -> SensorConfig:
    """Read a sensor config JSON file; the scene path is resolved relative to
    the config file's directory."""
    with open(path, "rb") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{path}: not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise ConfigError(f"{path}: config must be a JSON object")
    allowed = {"sensor_id", "listen", "scene", "frontend", "sweep", "channel_width_hz"}
    unknown = sorted(set(doc) - allowed)
    if unknown:
        raise ConfigError(f"{path}: unknown key(s) {unknown}")
    if "scene" not in doc:
        raise ConfigError(f"{path}: missing key 'scene'")
    scene_path = os.path.join(os.path.dirname(os.path.abspath(path)), doc["scene"])

    fe_doc = doc.get("frontend", {})
    fe_allowed = {"mode", "measurement_bandwidth_hz", "sample_rate_hz", "seed", "jitter_sigma_db"}
    fe_unknown = sorted(set(fe_doc) - fe_allowed)
    if fe_unknown:
        raise ConfigError(f"{path}: unknown frontend key(s) {fe_unknown}")
    frontend = FrontEndConfig(**{k: fe_doc[k] for k in fe_allowed if k in fe_doc})

    sw_doc = doc.get("sweep", {})
    sw_allowed = {"f_min_hz", "f_max_hz", "step_hz", "dwell_s"}
    sw_unknown = sorted(set(sw_doc) - sw_allowed)
    if sw_unknown:
        raise ConfigError(f"{path}: unknown sweep key(s) {sw_unknown}")
    defaults = SweepConfig(UHF_TV_F_MIN_HZ, UHF_TV_F_MAX_HZ, DEFAULT_STEP_HZ, DEFAULT_DWELL_S)
    sweep = SweepConfig(
        f_min_hz=sw_doc.get("f_min_hz", defaults.f_min_hz),
        f_max_hz=sw_doc.get("f_max_hz", defaults.f_max_hz),
        step_hz=sw_doc.get("step_hz", defaults.step_hz),
        dwell_s=sw_doc.get("dwell_s", defaults.dwell_s),
    )
    return SensorConfig(
        sensor_id=doc.get("sensor_id", "sensor"),
        listen=doc.get("listen", "127.0.0.1:7373"),
        scene_path=scene_path,
        frontend=frontend,
        sweep=sweep,
        channel_width_hz=doc.get("channel_width_hz", DEFAULT_CHANNEL_WIDTH_HZ),
    )


class _Busy(Exception):
    """Internal: the radio claim is already held."""


class SensorState:
    """Protocol logic, transport-independent. Owns the daemon's one radio."""

    def __init__(self, config: SensorConfig, scene: Scene):
        self.config = config
        self.scene = scene
        self.frontend = SimulatedFrontEnd(scene, config.frontend)
        self._radio_claim = threading.Lock()

    def handle_line(self, raw: bytes) -> dict:
        """Decode one request line and dispatch it; never raises."""
        try:
            text = raw.decode("utf-8")
        except UnicodeDecodeError:
            return _bad_request("request is not valid UTF-8")
        try:
            req = json.loads(text)
        except json.JSONDecodeError as exc:
            return _bad_request(f"invalid JSON: {exc.msg}")
        if not isinstance(req, dict):
            return _bad_request("request must be a JSON object")
        return self.handle_request(req)

    def handle_request(self, req: dict) -> dict:
        try:
            cmd = req.get("cmd")
            if cmd == "ping":
                return {
                    "ok": True,
                    "role": "sensor",
                    "sensor_id": self.config.sensor_id,
                    "version": PROTOCOL_VERSION,
                }
            if cmd == "info":
                return self._info()
            if cmd == "sweep":
                return self._sweep(req)
            if cmd == "channels":
                return self._channels(req)
            if cmd is None:
                return _bad_request("missing cmd")
            return {"ok": False, "error": "unknown_cmd"}
        except _Busy:
            return {"ok": False, "error": "busy"}
        except (ConfigError, TuneError, ValueError) as exc:
            return _bad_request(str(exc))
        except Exception as exc:  # keep the daemon alive no matter what
            return {"ok": False, "error": "internal", "detail": f"{type(exc).__name__}: {exc}"}

    def _info(self) -> dict:
        lo, hi = self.frontend.tunable_range()
        d = self.config.sweep
        return {
            "ok": True,
            "role": "sensor",
            "sensor_id": self.config.sensor_id,
            "version": PROTOCOL_VERSION,
            "scene_label": self.scene.label,
            "mode": self.config.frontend.mode,
            "tunable_range_hz": [lo, hi],
            "defaults": {
                "f_min_hz": d.f_min_hz,
                "f_max_hz": d.f_max_hz,
                "step_hz": d.step_hz,
                "dwell_s": d.dwell_s,
                "channel_width_hz": self.config.channel_width_hz,
            },
        }

    def _sweep(self, req: dict) -> dict:
        cfg = self._sweep_params(req)
        record = self._run_claimed_sweep(cfg)
        return {
            "ok": True,
            "sensor_id": self.config.sensor_id,
            "samples": [[s.f_center_hz, s.power_db] for s in record.samples],
        }

    def _channels(self, req: dict) -> dict:
        cfg = self._sweep_params(req)
        width = _int_param(req, "channel_width_hz", self.config.channel_width_hz)
        plan = BandPlan(cfg.f_min_hz, cfg.f_max_hz, width)
        record = self._run_claimed_sweep(cfg)
        threshold = compute_threshold(record)
        decisions = classify(record, plan, threshold)
        return {
            "ok": True,
            "sensor_id": self.config.sensor_id,
            "gamma_db": threshold.gamma_db,
            "decisions": [[d.channel, d.verdict, d.p_max_db] for d in decisions],
        }

    def _sweep_params(self, req: dict) -> SweepConfig:
        d = self.config.sweep
        return SweepConfig(
            f_min_hz=_int_param(req, "f_min_hz", d.f_min_hz),
            f_max_hz=_int_param(req, "f_max_hz", d.f_max_hz),
            step_hz=_int_param(req, "step_hz", d.step_hz),
            dwell_s=_float_param(req, "dwell_s", d.dwell_s),
        )

    def _run_claimed_sweep(self, cfg: SweepConfig):
        if not self._radio_claim.acquire(blocking=False):
            raise _Busy
        try:
            self.frontend.set_measurement_bandwidth(cfg.step_hz)
            # reset per request so identical requests give identical answers
            self.frontend.reseed(self.config.frontend.seed)
            return run_sweep(self.frontend, cfg, sensor_id=self.config.sensor_id)
        finally:
            self._radio_claim.release()


def _bad_request(detail: str) -> dict:
    return {"ok": False, "error": "bad_request", "detail": detail}


def _int_param(req: dict, name: str, default: int) -> int:
    value = req.get(name, default)
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigError(f"{name} must be an integer, got {value!r}")
    return value


def _float_param(req: dict, name: str, default: float) -> float:
    value = req.get(name, default)
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{name} must be a number, got {value!r}")
    return float(value)


class _Handler(socketserver.StreamRequestHandler):
    def handle(self):
        state: SensorState = self.server.state  # type: ignore[attr-defined]
        try:
            while True:
                line = self.rfile.readline(MAX_LINE_BYTES + 1)
                if not line:
                    return
                if len(line) > MAX_LINE_BYTES:
                    self._send(_bad_request("request line too long"))
                    return
                line = line.rstrip(b"\r\n")
                if not line:
                    continue
                self._send(state.handle_line(line))
        except (ConnectionError, BrokenPipeError, OSError):
            return

    def _send(self, obj: dict) -> None:
        self.wfile.write(json.dumps(obj, separators=(",", ":")).encode("utf-8") + b"\n")


class _Server(socketserver.ThreadingTCPServer):
    allow_reuse_address = True
    daemon_threads = True


class SensorServer:
    """TCP wrapper around SensorState; one handler thread per connection."""

    def __init__(self, config: SensorConfig):
        if not config.scene_path:
            raise ConfigError("sensor config has no scene path")
        scene = load_scene_file(config.scene_path)
        self.state = SensorState(config, scene)
        host, port = split_listen_address(config.listen)
        self._tcp = _Server((host, port), _Handler)
        self._tcp.state = self.state  # type: ignore[attr-defined]
        self._thread: threading.Thread | None = None

    @property
    def address(self) -> tuple[str, int]:
        """Actual bound address (resolves port 0 to the assigned port)."""
        host, port = self._tcp.server_address[:2]
        return host, port

    def serve_forever(self) -> None:
        self._tcp.serve_forever()

    def start(self) -> None:
        self._thread = threading.Thread(target=self.serve_forever, daemon=True)
        self._thread.start()

    def shutdown(self) -> None:
        self._tcp.shutdown()
        self._tcp.server_close()
        if self._thread is not None:
            self._thread.join(timeout=5)

    def __enter__(self) -> "SensorServer":
        self.start()
        return self

    def __exit__(self, *exc) -> None:
        self.shutdown()


def serve(config: SensorConfig) -> None:
    """Run a sensor daemon until interrupted."""
    server = SensorServer(config)
    host, port = server.address
    print(f"listening on {host}:{port}", file=sys.stderr, flush=True)
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        server.shutdown()
