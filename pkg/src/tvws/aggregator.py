"""Central REM builder: poll sensor daemons, merge their channel verdicts
into one snapshot, and compare free-channel sets against a reference.

Polling tolerates partial failure: unreachable or busy sensors are recorded
in the snapshot instead of aborting it. No cross-sensor fusion is performed;
the snapshot keeps one row per (sensor, channel).
"""

import csv
import io
import json
import os
import socket
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from datetime import datetime, timezone

from .sweep import SweepConfig

DEFAULT_POLL_TIMEOUT_S = 30.0

REM_CSV_HEADER = ["sensor_id", "channel", "f_start_hz", "verdict", "p_max_db", "gamma_db", "taken_at"]


@dataclass(frozen=True)
class RemEntry:
    sensor_id: str
    channel: int
    f_start_hz: int
    verdict: str
    p_max_db: float
    gamma_db: float


@dataclass(frozen=True)
class SensorFailure:
    sensor_id: str
    error: str


@dataclass(frozen=True)
class RemSnapshot:
    taken_at: datetime
    entries: tuple[RemEntry, ...]
    sensors_ok: tuple[str, ...]
    sensors_failed: tuple[SensorFailure, ...]


@dataclass(frozen=True)
class ComparisonReport:
    detected_free: frozenset[int]
    reference_free: frozenset[int]
    agreeing: frozenset[int]
    match_ratio: float
    only_detected: frozenset[int]
    only_reference: frozenset[int]


def query_sensor(address: str, request: dict, timeout_s: float = DEFAULT_POLL_TIMEOUT_S) -> dict:
    """Send one protocol request to host:port and return the parsed response."""
    host, _, port = address.rpartition(":")
    with socket.create_connection((host, int(port)), timeout=timeout_s) as sock:
        sock.settimeout(timeout_s)
        fh = sock.makefile("rwb")
        fh.write(json.dumps(request, separators=(",", ":")).encode("utf-8") + b"\n")
        fh.flush()
        line = fh.readline()
    if not line:
        raise ConnectionError("connection closed before a response arrived")
    return json.loads(line)


def poll_all(
    addresses: list[str],
    sweep: SweepConfig,
    channel_width_hz: int,
    timeout_s: float = DEFAULT_POLL_TIMEOUT_S,
) -> RemSnapshot:
    """Issue a `channels` request to every sensor concurrently and merge the
    responses. Failed sensors (unreachable, busy, malformed reply) end up in
    sensors_failed keyed by their address; responders never lose entries to
    another sensor's failure."""
    if not addresses:
        raise ValueError("at least one sensor address is required")
    request = {
        "cmd": "channels",
        "f_min_hz": sweep.f_min_hz,
        "f_max_hz": sweep.f_max_hz,
        "step_hz": sweep.step_hz,
        "dwell_s": sweep.dwell_s,
        "channel_width_hz": channel_width_hz,
    }
    with ThreadPoolExecutor(max_workers=len(addresses)) as pool:
        futures = [pool.submit(query_sensor, addr, request, timeout_s) for addr in addresses]
        results = []
        for future in futures:
            try:
                results.append(future.result())
            except Exception as exc:
                results.append(exc)

    entries: list[RemEntry] = []
    sensors_ok: list[str] = []
    sensors_failed: list[SensorFailure] = []
    for address, result in zip(addresses, results):
        if isinstance(result, Exception):
            sensors_failed.append(SensorFailure(address, f"{type(result).__name__}: {result}"))
            continue
        if not result.get("ok"):
            error = result.get("error", "error")
            detail = result.get("detail")
            sensors_failed.append(SensorFailure(address, f"{error}: {detail}" if detail else error))
            continue
        try:
            sensor_id = result["sensor_id"]
            gamma_db = result["gamma_db"]
            for channel, verdict, p_max_db in result["decisions"]:
                entries.append(
                    RemEntry(
                        sensor_id=sensor_id,
                        channel=channel,
                        f_start_hz=sweep.f_min_hz + channel * channel_width_hz,
                        verdict=verdict,
                        p_max_db=p_max_db,
                        gamma_db=gamma_db,
                    )
                )
        except (KeyError, TypeError, ValueError) as exc:
            sensors_failed.append(SensorFailure(address, f"malformed response: {exc}"))
            continue
        sensors_ok.append(sensor_id)
    return RemSnapshot(
        taken_at=datetime.now(timezone.utc),
        entries=tuple(entries),
        sensors_ok=tuple(sensors_ok),
        sensors_failed=tuple(sensors_failed),
    )


def compare(detected: set[int], reference: set[int], total_channels: int) -> ComparisonReport:
    """Compare a detected free-channel set against a reference free-channel
    set; the match ratio is |agreeing| / |reference|."""
    detected = frozenset(detected)
    reference = frozenset(reference)
    for name, channels in (("detected", detected), ("reference", reference)):
        out_of_range = sorted(c for c in channels if not 0 <= c < total_channels)
        if out_of_range:
            raise ValueError(f"{name} set has channels outside [0, {total_channels}): {out_of_range}")
    if not reference:
        raise ValueError("reference set is empty: match ratio is undefined")
    agreeing = detected & reference
    return ComparisonReport(
        detected_free=detected,
        reference_free=reference,
        agreeing=agreeing,
        match_ratio=len(agreeing) / len(reference),
        only_detected=detected - reference,
        only_reference=reference - detected,
    )


def rem_to_csv(snapshot: RemSnapshot) -> str:
    """CSV export, rows sorted by (sensor_id, channel), timestamps RFC 3339 UTC.

    Powers are written at full precision so parsing the file back reproduces
    the entry list exactly."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(REM_CSV_HEADER)
    taken_at = snapshot.taken_at.isoformat()
    for e in sorted(snapshot.entries, key=lambda e: (e.sensor_id, e.channel)):
        writer.writerow(
            [e.sensor_id, e.channel, e.f_start_hz, e.verdict, repr(e.p_max_db), repr(e.gamma_db), taken_at]
        )
    return buf.getvalue()


def rem_from_csv(text: str) -> list[RemEntry]:
    """Parse a REM CSV back into entries; `# config:` comment lines are skipped."""
    lines = [ln for ln in text.splitlines() if ln and not ln.startswith("#")]
    reader = csv.reader(lines)
    header = next(reader, None)
    if header != REM_CSV_HEADER:
        raise ValueError(f"unexpected REM CSV header: {header}")
    entries = []
    for row in reader:
        sensor_id, channel, f_start_hz, verdict, p_max_db, gamma_db, _taken_at = row
        entries.append(
            RemEntry(
                sensor_id=sensor_id,
                channel=int(channel),
                f_start_hz=int(f_start_hz),
                verdict=verdict,
                p_max_db=float(p_max_db),
                gamma_db=float(gamma_db),
            )
        )
    return entries


def load_free_channels(path: str | os.PathLike) -> frozenset[int]:
    """Read a free-channel list file: {"free_channels":[ints]}."""
    with open(path, "rb") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ValueError(f"{path}: not valid JSON: {exc}") from exc
    if not isinstance(doc, dict) or set(doc) != {"free_channels"}:
        raise ValueError(f"{path}: expected exactly one key 'free_channels'")
    channels = doc["free_channels"]
    if not isinstance(channels, list) or any(
        isinstance(c, bool) or not isinstance(c, int) for c in channels
    ):
        raise ValueError(f"{path}: free_channels must be a list of integers")
    return frozenset(channels)


def save_free_channels(path: str | os.PathLike, channels: set[int]) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump({"free_channels": sorted(channels)}, fh)
        fh.write("\n")
