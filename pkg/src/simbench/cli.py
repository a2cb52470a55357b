"""Command-line entry point: `simbench run` and `simbench serve`."""

from __future__ import annotations

import argparse
import asyncio
import os
import sys
from dataclasses import replace
from pathlib import Path
from typing import Optional, Sequence

from .config import MODE_REALTIME, SimConfig, load_config
from .errors import SimError
from .protocol import format_status
from .scope import FAST_SIGNALS, SIGNALS, TraceConfig, export_csv
from .server import serve
from .simcore import load_scenario, run_scenario

ENV_CONFIG = "SIMBENCH_CONFIG"


def _load_cfg(path: Optional[str]) -> SimConfig:
    if path is None:
        path = os.environ.get(ENV_CONFIG)
    if path is None:
        return SimConfig()
    return load_config(path)


def _trace_config(cfg: SimConfig, names: Sequence[str], duration: float) -> TraceConfig:
    fast = any(name in FAST_SIGNALS for name in names)
    rate = cfg.scope_logic_hz if fast else cfg.scope_slow_hz
    return TraceConfig(signals=tuple(names), duration=duration, sample_hz=rate)


def _cmd_run(args: argparse.Namespace) -> int:
    cfg = _load_cfg(args.config)
    scenario = load_scenario(args.scenario)
    names = [part.strip() for part in args.trace.split(",") if part.strip()]
    traces = _trace_config(cfg, names, scenario.duration)
    result = run_scenario(cfg, scenario, traces)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    export_csv(result.trace, out / "trace.csv")
    (out / "telemetry.log").write_bytes(b"".join(result.telemetry))
    sys.stdout.write(format_status(result.status).decode("ascii"))
    return 0


def _cmd_serve(args: argparse.Namespace) -> int:
    cfg = _load_cfg(args.config)
    overrides = {"mode": MODE_REALTIME}
    if args.port is not None:
        overrides["port"] = args.port
    if args.http is not None:
        overrides["http_port"] = args.http
    cfg = replace(cfg, **overrides)
    try:
        asyncio.run(serve(cfg, host=args.host, out_dir=Path(".")))
    except KeyboardInterrupt:
        pass
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="simbench",
        description="Deterministic digital twin of a network-controlled DC-motor bench.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="run a scenario to completion at full speed")
    run_p.add_argument("--scenario", required=True, help="scenario file")
    run_p.add_argument("--config", help=f"config file (fallback: ${ENV_CONFIG})")
    run_p.add_argument("--out", default=".", help="output directory (default: .)")
    run_p.add_argument(
        "--trace",
        default=",".join(SIGNALS),
        help="comma-separated scope signals (default: all)",
    )
    run_p.set_defaults(func=_cmd_run)

    serve_p = sub.add_parser("serve", help="serve the bench in realtime")
    serve_p.add_argument("--config", help=f"config file (fallback: ${ENV_CONFIG})")
    serve_p.add_argument("--port", type=int, help="control port (default 7777)")
    serve_p.add_argument("--http", type=int, help="UI gateway port (default 8080)")
    serve_p.add_argument("--host", default="127.0.0.1", help="bind address")
    serve_p.set_defaults(func=_cmd_serve)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except SimError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
