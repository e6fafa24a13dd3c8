"""Shared test helpers: synthetic sweep records and raw protocol clients."""

import json
import socket
from datetime import datetime, timezone

from tvws import PowerSample, SweepConfig, SweepRecord


def make_record(powers, f_min_hz=100_000_000, step_hz=250_000, sensor_id="test"):
    """Build a SweepRecord directly from a list of powers, no front-end."""
    f_max_hz = f_min_hz + step_hz * len(powers)
    config = SweepConfig(f_min_hz, f_max_hz, step_hz, 0.001)
    samples = tuple(
        PowerSample(f_center_hz=f, power_db=float(p))
        for f, p in zip(config.frequencies(), powers)
    )
    return SweepRecord(
        config=config,
        samples=samples,
        started_at=datetime.now(timezone.utc),
        sensor_id=sensor_id,
    )


def open_client(address, timeout=30.0):
    """Connect to (host, port) and return (socket, buffered file)."""
    sock = socket.create_connection(address, timeout=timeout)
    sock.settimeout(timeout)
    return sock, sock.makefile("rwb")


def request(address, obj, timeout=30.0):
    """One request/response round trip on a fresh connection."""
    sock, fh = open_client(address, timeout)
    try:
        fh.write(json.dumps(obj).encode() + b"\n")
        fh.flush()
        return json.loads(fh.readline())
    finally:
        sock.close()


def send_raw(fh, payload: bytes):
    """Write one raw line and read one response line."""
    fh.write(payload + b"\n")
    fh.flush()
    return fh.readline()
