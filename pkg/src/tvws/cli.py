"""Command line entry point: sweep, channels, serve, poll, compare.

Defaults scan the European UHF TV band (471.25 to 863.25 MHz, 250 kHz steps,
1 ms dwell, 8 MHz channels). CSV outputs start with a `# config: {...}`
comment line echoing the effective configuration, so a plot or a rerun can
be reproduced from the file alone.
"""

import argparse
import dataclasses
import json
import os
import sys

from .aggregator import compare, load_free_channels, poll_all, rem_to_csv, save_free_channels
from .bandplan import DEFAULT_CHANNEL_WIDTH_HZ, BandPlan
from .detect import classify, compute_threshold, decisions_to_csv, white_spaces
from .frontend import ANALYTIC, IQ, FrontEndConfig, SimulatedFrontEnd
from .scene import load_scene_file
from .service import load_sensor_config, serve
from .sweep import (
    DEFAULT_DWELL_S,
    DEFAULT_STEP_HZ,
    UHF_TV_F_MAX_HZ,
    UHF_TV_F_MIN_HZ,
    SweepConfig,
    run_sweep,
    sweep_to_csv,
)


def _hz(text: str) -> int:
    """Accept 471250000 or 471.25e6."""
    return int(round(float(text)))


def _resolve_seed(seed: int | None) -> int:
    if seed is not None:
        return seed
    env = os.environ.get("WS_SEED")
    return int(env) if env else 0


def _add_sweep_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--f-min", type=_hz, default=UHF_TV_F_MIN_HZ, metavar="HZ",
                        help="sweep start frequency (default %(default)s)")
    parser.add_argument("--f-max", type=_hz, default=UHF_TV_F_MAX_HZ, metavar="HZ",
                        help="sweep end frequency, exclusive (default %(default)s)")
    parser.add_argument("--step", type=_hz, default=DEFAULT_STEP_HZ, metavar="HZ",
                        help="frequency step / measurement bandwidth (default %(default)s)")
    parser.add_argument("--dwell", type=float, default=DEFAULT_DWELL_S, metavar="S",
                        help="dwell time per step (default %(default)s)")


def _add_frontend_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--scene", required=True, metavar="PATH", help="scene JSON file")
    parser.add_argument("--mode", choices=(ANALYTIC, IQ), default=ANALYTIC,
                        help="measurement path (default %(default)s)")
    parser.add_argument("--sample-rate", type=_hz, default=4_000_000, metavar="HZ",
                        help="iq-mode sample rate (default %(default)s)")
    parser.add_argument("--jitter", type=float, default=0.0, metavar="DB",
                        help="analytic-mode measurement jitter sigma (default %(default)s)")
    parser.add_argument("--seed", type=int, default=None,
                        help="measurement seed (default: WS_SEED env var, else 0)")
    parser.add_argument("--sensor-id", default="cli", help="sensor id stamped on records")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="tvws", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p_sweep = sub.add_parser("sweep", help="run one stepped sweep and emit f_hz,p_db CSV")
    _add_frontend_flags(p_sweep)
    _add_sweep_flags(p_sweep)
    p_sweep.add_argument("--out", metavar="PATH", help="output CSV (default: stdout)")
    p_sweep.set_defaults(func=cmd_sweep)

    p_channels = sub.add_parser("channels", help="sweep, threshold, and classify channels")
    _add_frontend_flags(p_channels)
    _add_sweep_flags(p_channels)
    p_channels.add_argument("--channel-width", type=_hz, default=DEFAULT_CHANNEL_WIDTH_HZ,
                            metavar="HZ", help="TV channel width (default %(default)s)")
    p_channels.add_argument("--out", metavar="PATH", help="decisions CSV (default: stdout)")
    p_channels.add_argument("--free-out", metavar="PATH",
                            help="also write the free channels as {\"free_channels\":[...]}")
    p_channels.set_defaults(func=cmd_channels)

    p_serve = sub.add_parser("serve", help="run a sensor daemon")
    p_serve.add_argument("--config", required=True, metavar="PATH", help="sensor config JSON")
    p_serve.add_argument("--listen", metavar="HOST:PORT", help="override the listen address")
    p_serve.add_argument("--seed", type=int, default=None, help="override the front-end seed")
    p_serve.set_defaults(func=cmd_serve)

    p_poll = sub.add_parser("poll", help="poll sensors and write a REM snapshot CSV")
    p_poll.add_argument("--sensors", required=True, metavar="HOST:PORT,...",
                        help="comma-separated sensor addresses")
    _add_sweep_flags(p_poll)
    p_poll.add_argument("--channel-width", type=_hz, default=DEFAULT_CHANNEL_WIDTH_HZ, metavar="HZ")
    p_poll.add_argument("--timeout", type=float, default=30.0, metavar="S",
                        help="per-sensor timeout (default %(default)s)")
    p_poll.add_argument("--out", metavar="PATH", help="output CSV (default: stdout)")
    p_poll.set_defaults(func=cmd_poll)

    p_compare = sub.add_parser("compare", help="compare two free-channel sets")
    p_compare.add_argument("--detected", required=True, metavar="PATH")
    p_compare.add_argument("--reference", required=True, metavar="PATH")
    p_compare.add_argument("--channels", type=int, default=49,
                           help="total channel count (default %(default)s)")
    p_compare.set_defaults(func=cmd_compare)

    return parser


def _build_frontend(args, seed: int) -> tuple[SimulatedFrontEnd, SweepConfig]:
    scene = load_scene_file(args.scene)
    fe_config = FrontEndConfig(
        mode=args.mode,
        measurement_bandwidth_hz=args.step,
        sample_rate_hz=args.sample_rate,
        seed=seed,
        jitter_sigma_db=args.jitter,
    )
    sweep_config = SweepConfig(args.f_min, args.f_max, args.step, args.dwell)
    return SimulatedFrontEnd(scene, fe_config), sweep_config


def _config_echo(args, seed: int, extra: dict | None = None) -> str:
    echo = {
        "subcommand": args.subcommand,
        "f_min_hz": args.f_min,
        "f_max_hz": args.f_max,
        "step_hz": args.step,
        "dwell_s": args.dwell,
    }
    if extra:
        echo.update(extra)
    if hasattr(args, "scene"):
        echo.update(
            {
                "scene": args.scene,
                "mode": args.mode,
                "sample_rate_hz": args.sample_rate,
                "jitter_sigma_db": args.jitter,
                "seed": seed,
                "sensor_id": args.sensor_id,
            }
        )
    return "# config: " + json.dumps(echo) + "\n"


def _write_output(text: str, out_path: str | None) -> None:
    if out_path:
        with open(out_path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_sweep(args) -> int:
    seed = _resolve_seed(args.seed)
    frontend, sweep_config = _build_frontend(args, seed)
    record = run_sweep(frontend, sweep_config, sensor_id=args.sensor_id)
    _write_output(_config_echo(args, seed) + sweep_to_csv(record), args.out)
    return 0


def cmd_channels(args) -> int:
    seed = _resolve_seed(args.seed)
    frontend, sweep_config = _build_frontend(args, seed)
    plan = BandPlan(args.f_min, args.f_max, args.channel_width)
    record = run_sweep(frontend, sweep_config, sensor_id=args.sensor_id)
    threshold = compute_threshold(record)
    decisions = classify(record, plan, threshold)
    free = white_spaces(decisions)
    echo = _config_echo(args, seed, {"channel_width_hz": args.channel_width})
    _write_output(echo + decisions_to_csv(decisions), args.out)
    if args.free_out:
        save_free_channels(args.free_out, set(free))
    print(f"white_spaces={len(free)} gamma_db={threshold.gamma_db:.3f}")
    return 0


def cmd_serve(args) -> int:
    config = load_sensor_config(args.config)
    if args.listen:
        config = dataclasses.replace(config, listen=args.listen)
    if args.seed is not None:
        frontend = dataclasses.replace(config.frontend, seed=args.seed)
        config = dataclasses.replace(config, frontend=frontend)
    serve(config)
    return 0


def cmd_poll(args) -> int:
    addresses = [a for a in args.sensors.split(",") if a]
    sweep_config = SweepConfig(args.f_min, args.f_max, args.step, args.dwell)
    snapshot = poll_all(addresses, sweep_config, args.channel_width, timeout_s=args.timeout)
    echo = _config_echo(args, seed=0, extra={"channel_width_hz": args.channel_width,
                                             "sensors": addresses})
    _write_output(echo + rem_to_csv(snapshot), args.out)
    print(
        f"sensors_ok={len(snapshot.sensors_ok)} "
        f"sensors_failed={len(snapshot.sensors_failed)} "
        f"entries={len(snapshot.entries)}"
    )
    for failure in snapshot.sensors_failed:
        print(f"failed {failure.sensor_id}: {failure.error}", file=sys.stderr)
    return 0


def cmd_compare(args) -> int:
    detected = load_free_channels(args.detected)
    reference = load_free_channels(args.reference)
    report = compare(detected, reference, args.channels)
    print(f"match_ratio={report.match_ratio:.4f}")
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except KeyboardInterrupt:
        return 1
    except Exception as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
