"""Command-line client for the sweep service.

The CLI is a thin HTTP client: every subcommand sends a request to the
service layer and writes the returned text files.  By default requests run
against an in-process instance of the app (no server needed); pass
--server to target a running one.

Exit codes: 0 success, 1 configuration error, 2 numeric failure,
3 convergence-guard failure in any sweep row.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import warnings

import httpx

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_NUMERIC = 2
EXIT_UNCONVERGED = 3


def _client(server: str | None) -> httpx.Client:
    """HTTP client for the service: remote if a URL is given, else in-process."""
    if server:
        return httpx.Client(base_url=server, timeout=None)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        from fastapi.testclient import TestClient

    from .service import app

    return TestClient(app)


def _load_config_payload(path: str | None) -> dict:
    """Validate the config file locally so errors surface before any request."""
    from .config import load_config, RunConfig

    if path is None:
        return RunConfig().model_dump()
    return load_config(path).model_dump()


def _print_config_errors(errors) -> int:
    for message in errors:
        print(f"config error: {message}", file=sys.stderr)
    return EXIT_CONFIG


def _write(path: str, text: str) -> None:
    directory = os.path.dirname(path)
    if directory:
        os.makedirs(directory, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="") as handle:
        handle.write(text)


def cmd_sweep(args: argparse.Namespace) -> int:
    from .exceptions import ConfigurationError

    try:
        payload = _load_config_payload(args.config)
    except ConfigurationError as exc:
        return _print_config_errors(exc.errors)
    except OSError as exc:
        return _print_config_errors([str(exc)])
    if args.jobs is not None:
        payload["jobs"] = args.jobs
    if args.out is not None:
        payload["output"] = args.out

    with _client(args.server) as client:
        response = client.post("/sweep", json=payload)
    if response.status_code == 422:
        return _print_config_errors(_detail_messages(response))
    if response.status_code != 200:
        print(f"numeric failure: {response.text}", file=sys.stderr)
        return EXIT_NUMERIC
    body = response.json()

    out_path = payload.get("output") or f"{payload['potential']}_sweep.csv"
    _write(out_path, body["csv"])
    print(f"wrote {out_path} ({len(body['rows'])} rows)")
    base_dir = os.path.dirname(out_path)
    for name, text in sorted(body["artifacts"].items()):
        artifact_path = os.path.join(base_dir, name) if base_dir else name
        _write(artifact_path, text)
        print(f"wrote {artifact_path}")
    if body["any_error"]:
        failing = [row["alpha"] for row in body["rows"] if row["error"]]
        print(f"numeric failure in rows: alpha={failing}", file=sys.stderr)
        return EXIT_NUMERIC
    if not body["all_converged"]:
        failing = [row["alpha"] for row in body["rows"] if not row["converged"]]
        print(f"convergence guard failed for alpha={failing}", file=sys.stderr)
        return EXIT_UNCONVERGED
    return EXIT_OK


def cmd_wavefunctions(args: argparse.Namespace) -> int:
    from .exceptions import ConfigurationError

    try:
        payload = _load_config_payload(args.config)
    except ConfigurationError as exc:
        return _print_config_errors(exc.errors)
    except OSError as exc:
        return _print_config_errors([str(exc)])

    with _client(args.server) as client:
        response = client.post(
            "/wavefunctions", json={"config": payload, "alpha": args.alpha}
        )
    if response.status_code == 422:
        return _print_config_errors(_detail_messages(response))
    if response.status_code != 200:
        print(f"numeric failure: {response.text}", file=sys.stderr)
        return EXIT_NUMERIC
    body = response.json()
    tag = format(args.alpha, "g").replace(".", "p")
    out_path = args.out or f"{payload['potential']}_alpha{tag}_wavefunctions.csv"
    _write(out_path, body["csv"])
    print(f"wrote {out_path} (offset b = {body['b_offset']:.10g})")
    return EXIT_OK


def cmd_check(args: argparse.Namespace) -> int:
    with _client(args.server) as client:
        response = client.get("/check", params={"full": not args.quick})
    if response.status_code != 200:
        print(f"numeric failure: {response.text}", file=sys.stderr)
        return EXIT_NUMERIC
    body = response.json()
    for item in body["items"]:
        status = "PASS" if item["passed"] else "FAIL"
        print(f"[{status}] {item['name']}: {item['detail']}")
    return EXIT_OK if body["passed"] else EXIT_NUMERIC


def cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from .service import app

    uvicorn.run(app, host=args.host, port=args.port)
    return EXIT_OK


def _detail_messages(response: httpx.Response) -> list[str]:
    try:
        detail = response.json()["detail"]
    except (KeyError, ValueError, json.JSONDecodeError):
        return [response.text]
    if isinstance(detail, str):
        return [detail]
    messages = []
    for err in detail:
        loc = ".".join(str(p) for p in err.get("loc", []) if p != "body")
        messages.append(f"{loc or 'config'}: {err.get('msg', 'invalid')}")
    return messages


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="frackappa",
        description=(
            "Static response of one-dimensional space-fractional quantum systems"
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sweep = sub.add_parser("sweep", help="run an alpha sweep and write the CSV")
    sweep.add_argument("--config", help="JSON run configuration file")
    sweep.add_argument("--jobs", type=int, help="parallel row workers")
    sweep.add_argument("--out", help="output CSV path")
    sweep.add_argument("--server", help="base URL of a running service")
    sweep.set_defaults(func=cmd_sweep)

    waves = sub.add_parser(
        "wavefunctions", help="write x, V, psi0..psi4 at one alpha"
    )
    waves.add_argument("--config", help="JSON run configuration file")
    waves.add_argument("--alpha", type=float, required=True)
    waves.add_argument("--out", help="output CSV path")
    waves.add_argument("--server", help="base URL of a running service")
    waves.set_defaults(func=cmd_wavefunctions)

    check = sub.add_parser("check", help="run the invariant suite")
    check.add_argument("--quick", action="store_true", help="operator checks only")
    check.add_argument("--server", help="base URL of a running service")
    check.set_defaults(func=cmd_check)

    serve = sub.add_parser("serve", help="run the HTTP service")
    serve.add_argument("--host", default="127.0.0.1")
    serve.add_argument("--port", type=int, default=8000)
    serve.set_defaults(func=cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
