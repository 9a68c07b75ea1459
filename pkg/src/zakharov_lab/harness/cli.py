"""Command line entry point.

Experiments run in-process by default; ``--server URL`` sends the same
configuration to a running service instead.  ``serve`` starts that service.
"""
from __future__ import annotations

import argparse
import json
import sys
import urllib.error
import urllib.request
from pathlib import Path

from ..errors import BlowUpDetected, ConfigError, ZakharovError
from .config import EXPERIMENTS, RunConfig, load_config
from .runner import execute

EXIT_OK, EXIT_FAILED, EXIT_CONFIG, EXIT_BLOWUP = 0, 1, 2, 3


def _u64(text: str) -> int:
    try:
        v = int(text, 0)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if not 0 <= v < 2**64:
        raise argparse.ArgumentTypeError(f"seed must fit in an unsigned 64-bit integer: {v}")
    return v


def _positive(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError("threads must be at least 1")
    return v


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="zakharov-lab", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)
    for name in EXPERIMENTS:
        p = sub.add_parser(name, help=f"run the {name} experiment")
        p.add_argument("--config", metavar="PATH", help="JSON run configuration")
        p.add_argument("--out", metavar="DIR", default=None, help="artifact directory (default: runs/<experiment>)")
        p.add_argument("--seed", metavar="U64", type=_u64, default=None, help="override the config seed")
        p.add_argument("--threads", metavar="K", type=_positive, default=None, help="worker threads")
        p.add_argument("--server", metavar="URL", default=None, help="run on a service instead of locally")
    s = sub.add_parser("serve", help="start the HTTP service")
    s.add_argument("--host", default="127.0.0.1")
    s.add_argument("--port", type=int, default=8000)
    return ap


def _report(experiment: str, summary: dict, checks: dict, blowup, out) -> None:
    print(f"experiment: {experiment}")
    if experiment == "growth" and "predicted_exponent" in summary:
        print(f"predicted exponent 2(1-s)/(6s-5) = {summary['predicted_exponent']:.6g} at s = {summary['s']}")
    for k in sorted(summary):
        print(f"  {k}: {summary[k]}")
    for k, ok in checks.items():
        print(f"  [{'PASS' if ok else 'FAIL'}] {k}")
    if blowup:
        print(f"  blow-up after t = {blowup['last_valid_time']}: {blowup['message']}")
    if out is not None:
        print(f"artifacts: {out}")


def _remote(url: str, cfg: RunConfig, out) -> int:
    body = json.dumps({"config": cfg.model_dump(mode="json"), "out": str(Path(out).resolve())}).encode()
    req = urllib.request.Request(
        url.rstrip("/") + "/runs", data=body, headers={"Content-Type": "application/json"}
    )
    try:
        with urllib.request.urlopen(req) as resp:
            payload = json.loads(resp.read())
    except urllib.error.HTTPError as err:
        detail = json.loads(err.read() or b"{}")
        print(f"error: {detail.get('detail', err)}", file=sys.stderr)
        return int(detail.get("exit_code", EXIT_FAILED))
    except urllib.error.URLError as err:
        print(f"error: cannot reach {url}: {err.reason}", file=sys.stderr)
        return EXIT_FAILED
    _report(payload["experiment"], payload["summary"], payload["checks"], payload.get("blowup"), out)
    return int(payload["exit_code"])


def _serve(host: str, port: int) -> int:
    import uvicorn

    uvicorn.run("zakharov_lab.service.app:app", host=host, port=port)
    return EXIT_OK


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "serve":
        return _serve(args.host, args.port)
    try:
        cfg = load_config(args.config) if args.config else RunConfig()
        cfg = cfg.with_overrides(experiment=args.command, seed=args.seed, threads=args.threads)
    except ConfigError as err:
        print(f"config error: {err}", file=sys.stderr)
        return EXIT_CONFIG
    out = args.out if args.out is not None else str(Path("runs") / args.command)
    if args.server:
        return _remote(args.server, cfg, out)
    try:
        res = execute(cfg, out)
    except BlowUpDetected as err:
        print(f"blow-up: {err}", file=sys.stderr)
        return EXIT_BLOWUP
    except ZakharovError as err:
        print(f"config error: {err}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_FAILED
    _report(res.experiment, res.summary, res.checks, res.blowup, out)
    return res.exit_code


if __name__ == "__main__":
    sys.exit(main())
