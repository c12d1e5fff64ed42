"""Thin command-line client for the coexistence service.

Every subcommand speaks the service's HTTP/JSON interface. By default the
app runs in-process (no server needed); ``--server URL`` targets a running
instance instead.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from dataclasses import fields as dc_fields
from pathlib import Path

from .params import ConfigError, WifiParams, load_config
from .sweep import CSV_COLUMNS, CSV_EXTRA_COLUMNS

EXIT_OK = 0
EXIT_VALIDATION_FAILED = 1
EXIT_CONFIG_ERROR = 2

RUN_CSV_COLUMNS = ("regime", "period_ms", "duty", "q", "payload_bits", "n",
                   "mean_r", "se_r", "mean_d", "se_d", "drop_rate",
                   "mean_r_recip", "se_r_recip", "seed", "packets")
EXACT_CSV_COLUMNS = ("t0", "p_drop", "mean_d_slots", "mean_r_bits_per_slot", "pi")


class CliError(Exception):
    pass


class ServiceClient:
    """HTTP client; in-process ASGI transport unless a server URL is given."""

    def __init__(self, server: str | None):
        if server:
            import httpx
            self._client = httpx.Client(base_url=server, timeout=None)
        else:
            import warnings
            with warnings.catch_warnings():
                warnings.simplefilter("ignore")
                from fastapi.testclient import TestClient

            from .service import create_app
            self._client = TestClient(create_app())

    def post(self, path: str, payload: dict) -> dict:
        resp = self._client.post(path, json=payload)
        if resp.status_code != 200:
            try:
                detail = resp.json().get("detail", resp.text)
            except Exception:
                detail = resp.text
            raise CliError(f"{path} failed ({resp.status_code}): {detail}")
        return resp.json()


def _wifi_payload(args) -> dict:
    """WifiParams wire dict from --config plus per-field flag overrides."""
    base = load_config(args.config) if args.config else WifiParams()
    payload = {f.name: getattr(base, f.name) for f in dc_fields(WifiParams)}
    payload["lambda"] = payload.pop("lambda_")
    if getattr(args, "stations", None) is not None:
        payload["n"] = args.stations
    if getattr(args, "payload_bytes", None) is not None:
        payload["payload_bits"] = args.payload_bytes * 8
    return payload


def _emit(args, text: str) -> None:
    out = getattr(args, "out", None)
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _csv_text(columns, rows) -> str:
    import io
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_fmt(row.get(col)) for col in columns])
    return buf.getvalue()


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _parse_values(text: str) -> list[float]:
    """Explicit comma list or start:step:end (end inclusive)."""
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise CliError(f"range must be start:step:end, got {text!r}")
        start, step, end = (float(p) for p in parts)
        if step <= 0:
            raise CliError("range step must be > 0")
        values = []
        v = start
        while v <= end + 1e-12:
            values.append(round(v, 12))
            v += step
        return values
    return [float(p) for p in text.split(",") if p.strip()]


def cmd_solve(client: ServiceClient, args) -> int:
    data = client.post("/solve", {"params": _wifi_payload(args)})
    if args.format == "json":
        _emit(args, json.dumps(data, indent=2) + "\n")
    else:
        _emit(args, "".join(f"{k} = {v!r}\n" for k, v in data.items()))
    return EXIT_OK


def _run_common(client, args, path: str, extra: dict) -> int:
    payload = {"params": _wifi_payload(args), "packets": args.packets,
               "warmup_packets": args.warmup, "seed": args.seed}
    payload.update(extra)
    data = client.post(path, payload)
    row = dict(regime=extra.get("mode", "reference"),
               period_ms=extra.get("period_ms", ""), duty=extra.get("duty", 0.0),
               q=extra.get("q", 0.0),
               payload_bits=payload["params"]["payload_bits"],
               n=payload["params"]["n"], seed=args.seed, packets=args.packets,
               **{k: data[k] for k in ("mean_r", "se_r", "mean_d", "se_d",
                                       "drop_rate", "mean_r_recip", "se_r_recip")})
    if args.format == "json":
        _emit(args, json.dumps(row, indent=2) + "\n")
    else:
        _emit(args, _csv_text(RUN_CSV_COLUMNS, [row]))
    return EXIT_OK


def cmd_run(client: ServiceClient, args) -> int:
    return _run_common(client, args, "/run",
                       {"period_ms": args.period_ms, "duty": args.duty,
                        "q": args.q, "mode": args.mode,
                        "sampled_td": args.sampled_td})


def cmd_reference(client: ServiceClient, args) -> int:
    return _run_common(client, args, "/reference", {})


def cmd_sweep(client: ServiceClient, args) -> int:
    payload = {"variable": args.variable, "values": _parse_values(args.values),
               "regimes": args.regimes.split(","), "period_ms": args.period_ms,
               "alpha": args.duty, "q": args.q,
               "payload_bytes": args.payload_bytes, "stations": args.stations,
               "params": _wifi_payload_base(args), "packets": args.packets,
               "warmup_packets": args.warmup, "seed": args.seed,
               "seed_policy": args.seed_policy, "threads": args.threads}
    data = client.post("/sweep", payload)
    rows = data["rows"]
    if args.format == "json":
        _emit(args, json.dumps(rows, indent=2) + "\n")
    else:
        _emit(args, _csv_text(CSV_COLUMNS + CSV_EXTRA_COLUMNS, rows))
    return EXIT_OK


def _wifi_payload_base(args) -> dict:
    """Sweep-level WifiParams: config file only, n/payload supplied separately."""
    base = load_config(args.config) if args.config else WifiParams()
    payload = {f.name: getattr(base, f.name) for f in dc_fields(WifiParams)}
    payload["lambda"] = payload.pop("lambda_")
    return payload


def cmd_exact(client: ServiceClient, args) -> int:
    payload = {"params": _wifi_payload(args), "period_slots": args.period_slots,
               "alpha": args.duty, "q": args.q, "mode": args.mode,
               "max_paths": args.max_paths}
    data = client.post("/exact", payload)
    if args.format == "json":
        _emit(args, json.dumps(data, indent=2) + "\n")
    else:
        _emit(args, _csv_text(EXACT_CSV_COLUMNS, data["rows"]))
    return EXIT_OK


def cmd_validate(client: ServiceClient, args) -> int:
    payload = {"params": _wifi_payload(args), "horizon_slots": args.horizon_slots,
               "seed": args.seed}
    data = client.post("/validate", payload)
    if args.format == "json":
        _emit(args, json.dumps(data, indent=2) + "\n")
    else:
        lines = [
            f"p_c       solved={data['solved_p_c']:.4f} empirical={data['empirical_p_c']:.4f} "
            f"[{'ok' if data['p_c_ok'] else 'FAIL'}]",
            f"tau       solved={data['solved_tau']:.5f} empirical={data['empirical_tau']:.5f}",
            f"mean_td   solved={data['solved_mean_td']:.2f} empirical={data['empirical_mean_td']:.2f} slots",
            f"td_pmf    solved={data['solved_td_pmf']} empirical="
            f"{ {k: round(v, 4) for k, v in data['empirical_td_pmf'].items()} } "
            f"[{'ok' if data['td_pmf_ok'] else 'FAIL'}]",
            f"verdict   {'PASS' if data['passed'] else 'FAIL'}",
        ]
        _emit(args, "\n".join(lines) + "\n")
    return EXIT_OK if data["passed"] else EXIT_VALIDATION_FAILED


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--server", default=None,
                   help="service URL; default runs the app in-process")
    p.add_argument("--config", default=None, help="WifiParams key=value file")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--out", default=None, help="write output to this path")


def _add_scenario(p: argparse.ArgumentParser) -> None:
    p.add_argument("--period-ms", type=float, default=500.0)
    p.add_argument("--duty", type=float, default=0.3, help="duty cycle alpha")
    p.add_argument("--q", type=float, default=1.0)
    p.add_argument("--payload-bytes", type=int, default=None)
    p.add_argument("--stations", type=int, default=None)
    p.add_argument("--mode", choices=("weak", "strong"), default="weak")


def _add_mc(p: argparse.ArgumentParser) -> None:
    p.add_argument("--packets", type=int, default=200_000)
    p.add_argument("--warmup", type=int, default=1_000)
    p.add_argument("--seed", type=int, default=0)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lteu-coex",
        description="Wi-Fi DCF performance and fairness under duty-cycled "
                    "LTE-U; thin client over the lteu-coex service")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="solve the background-traffic fixed point")
    _add_common(p)
    p.add_argument("--stations", type=int, default=None)
    p.add_argument("--payload-bytes", type=int, default=None)
    p.set_defaults(fn=cmd_solve)

    p = sub.add_parser("run", help="Monte Carlo estimate for one scenario")
    _add_common(p)
    _add_scenario(p)
    _add_mc(p)
    p.add_argument("--sampled-td", action="store_true",
                   help="sample each unit decrement from the T_d pmf")
    p.set_defaults(fn=cmd_run)

    p = sub.add_parser("reference", help="no-interferer baseline run")
    _add_common(p)
    p.add_argument("--payload-bytes", type=int, default=None)
    p.add_argument("--stations", type=int, default=None)
    _add_mc(p)
    p.set_defaults(fn=cmd_reference)

    p = sub.add_parser("sweep", help="sweep one variable, emit fairness rows")
    _add_common(p)
    p.add_argument("--variable", required=True,
                   choices=("period_ms", "alpha", "q", "payload_bytes"))
    p.add_argument("--values", required=True,
                   help="comma list or start:step:end")
    p.add_argument("--regimes", default="weak,strong")
    p.add_argument("--period-ms", type=float, default=500.0)
    p.add_argument("--duty", type=float, default=0.3)
    p.add_argument("--q", type=float, default=1.0)
    p.add_argument("--payload-bytes", type=int, default=1024)
    p.add_argument("--stations", type=int, default=17)
    _add_mc(p)
    p.add_argument("--seed-policy", choices=("paired", "per_point"),
                   default="paired")
    p.add_argument("--threads", type=int, default=1)
    p.set_defaults(fn=cmd_sweep)

    p = sub.add_parser("exact", help="exact enumeration at reduced scale")
    _add_common(p)
    p.add_argument("--period-slots", type=int, default=200)
    p.add_argument("--duty", type=float, default=0.3)
    p.add_argument("--q", type=float, default=1.0)
    p.add_argument("--mode", choices=("weak", "strong"), default="weak")
    p.add_argument("--stations", type=int, default=None)
    p.add_argument("--payload-bytes", type=int, default=None)
    p.add_argument("--max-paths", type=int, default=10 ** 6)
    p.set_defaults(fn=cmd_exact)

    p = sub.add_parser("validate", help="oracle-simulate and compare to the solve")
    _add_common(p)
    p.add_argument("--stations", type=int, default=None)
    p.add_argument("--payload-bytes", type=int, default=None)
    p.add_argument("--horizon-slots", type=int, default=10_000_000)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(fn=cmd_validate)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        client = ServiceClient(args.server)
        return args.fn(client, args)
    except (CliError, ConfigError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG_ERROR


if __name__ == "__main__":
    sys.exit(main())
