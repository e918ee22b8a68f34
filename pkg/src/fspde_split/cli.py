"""Command line interface.

Every subcommand can run in-process or, with --server, against a
running service; results and exit codes are identical either way.

Exit codes: 0 success, 2 a requested tolerance was not met (lemma
check failed or fitted slope left the configured band), 1 usage or
runtime error.  argparse's own usage failures are remapped onto 1 so
that 2 stays reserved for tolerance verdicts.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path
from typing import Optional

import httpx
from pydantic import ValidationError

from . import __version__
from .lemmas import verify_lemmas
from .noise import sample_noise_lattice
from .study import convergence_study, emit_report, worker_count
from .service.models import NoiseRequest, StudyRequest

__all__ = ["main"]

_POLL_SECONDS = 0.5


class _Parser(argparse.ArgumentParser):
    # argparse exits 2 on usage errors; 2 is taken (tolerance failure)
    def error(self, message):
        self.print_usage(sys.stderr)
        raise SystemExit(f"error: {message}")


def _build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="fspde-split", description=__doc__)
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    study = sub.add_parser("study",
                           help="run a convergence study from a JSON config")
    study.add_argument("--config", required=True, type=Path, help="JSON study config")
    study.add_argument("--seed", type=int, default=None, help="override the config seed")
    study.add_argument("--workers", type=int, default=None,
                       help="worker processes (default: FSPDE_THREADS or 1)")
    study.add_argument("--out", type=Path, default=None,
                       help="report directory (overrides the config's output)")
    study.add_argument("--server", default=None, help="base URL of a running service")

    lemmas = sub.add_parser("verify-lemmas",
                            help="run the oracle scaling checks for one Hurst index")
    lemmas.add_argument("--hurst", required=True, type=float)
    lemmas.add_argument("--fast", action="store_true", help="smaller sweep grids")
    lemmas.add_argument("--out", type=Path, default=None,
                        help="write the JSON report here instead of stdout")
    lemmas.add_argument("--server", default=None, help="base URL of a running service")

    noise = sub.add_parser("sample-noise",
                           help="sample a fractional increment lattice to CSV")
    noise.add_argument("--hurst", required=True, type=float)
    noise.add_argument("--steps", required=True, type=int)
    noise.add_argument("--modes", type=int, default=1)
    noise.add_argument("--t-end", type=float, default=1.0)
    noise.add_argument("--seed", type=int, default=0)
    noise.add_argument("--out", required=True, type=Path, help="output CSV path")
    noise.add_argument("--server", default=None, help="base URL of a running service")

    serve = sub.add_parser("serve", help="run the HTTP service")
    serve.add_argument("--host", default="127.0.0.1")
    serve.add_argument("--port", type=int, default=8000)

    return parser


def _client(server: str) -> httpx.Client:
    return httpx.Client(base_url=server.rstrip("/"), timeout=60.0)


def _print_report_lines(report: dict) -> None:
    print(f"hurst {report['hurst']}  theory slope {report['theory_slope']:.4f}  "
          f"M {report['n_realizations']}  seed {report['seed']}")
    print("dt,rms_error,std_error")
    rows = sorted(zip(report["dts"], report["rms_error"], report["std_error"]), reverse=True)
    for dt, rms, se in rows:
        print(f"{dt!r},{rms!r},{se!r}")
    print(f"fitted slope {report['slope']:.4f}  "
          f"large-dt slope {report['slope_large_dt']:.4f} (over {report['n_large_dt']} points)  "
          f"elapsed {report['elapsed_seconds']:.1f}s")


def _band_verdict(report: dict, band) -> int:
    if band is None:
        return 0
    low, high = band
    if low <= report["slope"] <= high:
        print(f"slope {report['slope']:.4f} within band [{low}, {high}]")
        return 0
    print(f"slope {report['slope']:.4f} outside band [{low}, {high}]", file=sys.stderr)
    return 2


def _cmd_study(args) -> int:
    payload = json.loads(args.config.read_text())
    request = StudyRequest.model_validate(payload)
    if args.seed is not None:
        request = request.model_copy(update={"seed": args.seed})
    if args.out is not None:
        request = request.model_copy(update={"output": str(args.out)})
    if args.workers is not None:
        request = request.model_copy(update={"workers": args.workers})

    if args.server:
        with _client(args.server) as client:
            resp = client.post("/studies", json=request.model_dump(mode="json"))
            resp.raise_for_status()
            job_id = resp.json()["job_id"]
            print(f"submitted job {job_id}")
            while True:
                status = client.get(f"/studies/{job_id}").json()
                if status["status"] in ("done", "failed"):
                    break
                time.sleep(_POLL_SECONDS)
        if status["status"] == "failed":
            print(f"study failed: {status['error']}", file=sys.stderr)
            return 1
        report = status["report"]
        _print_report_lines(report)
        if status.get("files"):
            for name, path in status["files"].items():
                print(f"{name}: {path}")
        return _band_verdict(report, request.slope_band)

    study = request.to_study_config()
    report = convergence_study(study, n_workers=worker_count(request.workers))
    report_dict = json.loads(json.dumps(_as_report_dict(report)))
    _print_report_lines(report_dict)
    if study.output_path:
        files = emit_report(report, study.output_path)
        for name, path in files.items():
            print(f"{name}: {path}")
    return _band_verdict(report_dict, request.slope_band)


def _as_report_dict(report) -> dict:
    import dataclasses

    return dataclasses.asdict(report)


def _cmd_verify_lemmas(args) -> int:
    if args.server:
        with _client(args.server) as client:
            resp = client.post("/lemmas/verify", json={"hurst": args.hurst, "fast": args.fast})
            resp.raise_for_status()
            payload = resp.json()
    else:
        payload = verify_lemmas(args.hurst, fast=args.fast).to_dict()

    text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    if args.out is not None:
        args.out.write_text(text)
        print(f"report: {args.out}")
    else:
        sys.stdout.write(text)
    for check in payload["checks"]:
        mark = "ok" if check["passed"] else "FAIL"
        print(f"{mark:>4}  {check['lemma']}  fitted {check['fitted_exponent']:+.4f}  "
              f"expected {check['expected_exponent']:+.4f}", file=sys.stderr)
    return 0 if payload["passed"] else 2


def _cmd_sample_noise(args) -> int:
    request = NoiseRequest(modes=args.modes, steps=args.steps, hurst=args.hurst,
                           t_end=args.t_end, seed=args.seed)
    if args.server:
        with _client(args.server) as client:
            resp = client.post("/noise/sample", json=request.model_dump(mode="json"))
            resp.raise_for_status()
            body = resp.json()
        lines = ["mode,step,value\n"]
        for k, row in enumerate(body["increments"]):
            for n, value in enumerate(row):
                lines.append(f"{k + 1},{n},{float(value)!r}\n")
        args.out.write_text("".join(lines))
    else:
        lattice = sample_noise_lattice(
            n_modes=request.modes,
            n_steps=request.steps,
            hurst=request.hurst,
            dt_fine=request.t_end / request.steps,
            seed=request.seed,
        )
        lattice.to_csv(args.out)
    print(f"wrote {args.out} ({request.modes} modes x {request.steps} steps, H={request.hurst})")
    return 0


def _cmd_serve(args) -> int:
    import uvicorn

    from .service.app import app

    uvicorn.run(app, host=args.host, port=args.port)
    return 0


def main(argv: Optional[list] = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "study":
            return _cmd_study(args)
        if args.command == "verify-lemmas":
            return _cmd_verify_lemmas(args)
        if args.command == "sample-noise":
            return _cmd_sample_noise(args)
        if args.command == "serve":
            return _cmd_serve(args)
        raise AssertionError(f"unhandled command {args.command}")
    except ValidationError as exc:
        print(f"invalid config: {exc}", file=sys.stderr)
        return 1
    except httpx.HTTPError as exc:
        print(f"server error: {exc}", file=sys.stderr)
        return 1
    except (ValueError, OSError, RuntimeError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
