"""Command-line front end: memory and injection campaigns, scaling
fits, and resource reports, all reproducible from (config, seed).

Output conventions: csv output starts with a `#` header line recording
the package version, the command, and the full config; json output
carries the same record in a `meta` object.  Exit codes: 0 on success,
2 on configuration errors, 3 when detector-graph construction rejects
the schedule.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import asdict

from . import __version__
from .decoder import (
    LogicalErrorEstimate,
    ScheduleInvalidError,
    estimate_logical_error_rate,
)
from .estimator import (
    DeviceSpec,
    LayoutScheme,
    REFERENCE_FIT,
    FitResult,
    application_sizing,
    build_resource_report,
    comparison_table_csv,
    fit_scaling,
    ftqc_comparison,
)
from .injection import (
    InjectionResult,
    VariantKind,
    oracle_leading_coefficients,
    run_injection_experiment,
)

_SCHEME_NAMES = {
    "compact": LayoutScheme.COMPACT,
    "intermediate": LayoutScheme.INTERMEDIATE,
    "2n": LayoutScheme.SCHEME_I_2N,
    "3n": LayoutScheme.SCHEME_I_3N,
    "4n": LayoutScheme.SCHEME_I_4N,
    "scheme1-2n": LayoutScheme.SCHEME_I_2N,
    "scheme1-3n": LayoutScheme.SCHEME_I_3N,
    "scheme1-4n": LayoutScheme.SCHEME_I_4N,
}


class ConfigError(Exception):
    pass


def _int_list(text: str):
    try:
        return [int(part) for part in text.split(",") if part]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"not an integer list: {text!r}") from exc


def _float_list(text: str):
    try:
        return [float(part) for part in text.split(",") if part]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"not a number list: {text!r}") from exc


def _count(text: str) -> int:
    try:
        return int(float(text))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"not a count: {text!r}") from exc


def _default_threads() -> int:
    return int(os.environ.get("PATCHSIM_THREADS", "1"))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="patchsim",
        description="surface-code patch simulation and resource estimation",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, grid: bool):
        p.add_argument("--seed", type=int, default=0)
        p.add_argument(
            "--threads",
            type=int,
            default=None,
            help="worker count; PATCHSIM_THREADS overrides the default of 1",
        )
        p.add_argument("--out", default=None, help="write output here instead of stdout")
        p.add_argument("--format", choices=("csv", "json"), default=None)
        if grid:
            p.add_argument("--shots", type=_count, default=100_000)

    mem = sub.add_parser("memory", help="logical error rate over a (d, p) grid")
    mem.add_argument("--d", type=_int_list, default=[3])
    mem.add_argument("--p", type=_float_list, default=[1e-3])
    add_common(mem, grid=True)

    inj = sub.add_parser("inject", help="injection acceptance and error rates")
    inj.add_argument("--d", type=_int_list, default=[3])
    inj.add_argument("--p", type=_float_list, default=[1e-4])
    inj.add_argument(
        "--variant",
        choices=[v.value for v in VariantKind],
        default=VariantKind.DIRECT.value,
    )
    inj.add_argument(
        "--oracle",
        action="store_true",
        help="print the exact first-order coefficients instead of sampling",
    )
    add_common(inj, grid=True)

    fit = sub.add_parser("fit", help="fit the scaling law to a memory csv")
    fit.add_argument("--input", required=True, help="csv from the memory command")
    add_common(fit, grid=False)

    est = sub.add_parser("estimate", help="full resource report")
    est.add_argument("--d", type=int, default=7)
    est.add_argument("--p", type=float, default=1e-4)
    est.add_argument("--n-phys", type=_count, default=10_000)
    est.add_argument("--scheme", choices=sorted(_SCHEME_NAMES), default="compact")
    add_common(est, grid=False)

    cmp_ = sub.add_parser("compare", help="architecture comparison table")
    cmp_.add_argument("--d", type=int, default=7)
    cmp_.add_argument("--p", type=float, default=1e-4)
    cmp_.add_argument("--n-phys", type=_count, default=10_000)
    cmp_.add_argument("--scheme", choices=sorted(_SCHEME_NAMES), default="compact")
    add_common(cmp_, grid=False)

    apps = sub.add_parser("apps", help="application sizing")
    apps.add_argument("--d", type=int, default=7)
    apps.add_argument("--p", type=float, default=1e-4)
    apps.add_argument("--n-phys", type=_count, default=10_000)
    apps.add_argument("--scheme", choices=sorted(_SCHEME_NAMES), default="compact")
    add_common(apps, grid=False)

    return parser


def _config_record(args) -> dict:
    skip = {"command", "out", "format"}
    rec = {"version": __version__, "command": args.command}
    for key, val in sorted(vars(args).items()):
        if key in skip or val is None:
            continue
        rec[key] = val
    return rec


def _header_line(args) -> str:
    rec = _config_record(args)
    parts = [f"patchsim {rec.pop('version')}", rec.pop("command")]
    for key, val in rec.items():
        if isinstance(val, list):
            val = ",".join(str(v) for v in val)
        parts.append(f"{key}={val}")
    return "# " + " ".join(parts)


def _validate_distances(ds):
    for d in ds:
        if d < 3 or d % 2 == 0:
            raise ConfigError(f"code distance must be odd and >= 3: {d}")


def _validate_probs(ps):
    for p in ps:
        if not 0.0 <= p < 1.0:
            raise ConfigError(f"error rate out of range: {p}")


def _resolve_threads(args) -> int:
    threads = args.threads if args.threads is not None else _default_threads()
    if threads < 1:
        raise ConfigError(f"thread count must be positive: {threads}")
    return threads


def _emit(args, text: str) -> None:
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def _grid_output(args, header: str, rows, row_dicts) -> str:
    fmt = args.format or "csv"
    if fmt == "csv":
        return "\n".join([_header_line(args), header, *rows])
    return json.dumps({"meta": _config_record(args), "rows": row_dicts}, indent=2)


def cmd_memory(args) -> str:
    _validate_distances(args.d)
    _validate_probs(args.p)
    if args.shots < 1:
        raise ConfigError("shots must be positive")
    threads = _resolve_threads(args)
    estimates = [
        estimate_logical_error_rate(d, p, args.shots, args.seed, threads=threads)
        for d in args.d
        for p in args.p
    ]
    return _grid_output(
        args,
        LogicalErrorEstimate.CSV_HEADER,
        [e.csv_row() for e in estimates],
        [asdict(e) for e in estimates],
    )


def cmd_inject(args) -> str:
    _validate_distances(args.d)
    variant = VariantKind(args.variant)
    if args.oracle:
        coeffs = {d: oracle_leading_coefficients(variant, d) for d in args.d}
        fmt = args.format or "csv"
        if fmt == "json":
            return json.dumps(
                {
                    "meta": _config_record(args),
                    "coefficients": {
                        str(d): {"c_Z": str(cz), "c_X": str(cx)}
                        for d, (cz, cx) in coeffs.items()
                    },
                },
                indent=2,
            )
        lines = [_header_line(args)]
        for d, (c_z, c_x) in coeffs.items():
            prefix = f"d={d} " if len(coeffs) > 1 else ""
            lines.append(f"{prefix}c_Z = {c_z}")
            lines.append(f"{prefix}c_X = {c_x}")
        return "\n".join(lines)
    _validate_probs(args.p)
    if args.shots < 1:
        raise ConfigError("shots must be positive")
    threads = _resolve_threads(args)
    results = [
        run_injection_experiment(
            d, p, args.shots, variant, args.seed, threads=threads
        )
        for d in args.d
        for p in args.p
    ]
    return _grid_output(
        args,
        InjectionResult.CSV_HEADER,
        [r.csv_row() for r in results],
        [asdict(r) for r in results],
    )


def _read_memory_csv(path):
    rows = []
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#") or line.startswith("d,"):
                continue
            parts = line.split(",")
            if len(parts) != 9:
                raise ConfigError(f"expected 9 columns, got {len(parts)}: {line!r}")
            d, p = int(parts[0]), float(parts[1])
            p_lz, sigma_z = float(parts[5]), float(parts[6])
            p_lx, sigma_x = float(parts[7]), float(parts[8])
            rows.append((d, p, p_lz, sigma_z, p_lx, sigma_x))
    return rows


def cmd_fit(args) -> str:
    try:
        rows = _read_memory_csv(args.input)
    except OSError as exc:
        raise ConfigError(str(exc)) from exc
    usable = [r for r in rows if r[2] > 0 and r[4] > 0]
    dropped = len(rows) - len(usable)
    if dropped:
        print(f"dropped {dropped} rows with zero failures", file=sys.stderr)
    try:
        fit = fit_scaling(usable)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    return json.dumps({"meta": _config_record(args), "fit": asdict(fit)}, indent=2)


def _device(args):
    try:
        return DeviceSpec(getattr(args, "n_phys"), args.p), _SCHEME_NAMES[args.scheme]
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def cmd_estimate(args) -> str:
    if args.d < 3 or args.d % 2 == 0:
        raise ConfigError(f"code distance must be odd and >= 3: {args.d}")
    spec, scheme = _device(args)
    report = build_resource_report(spec, args.d, scheme)
    fmt = args.format or "json"
    if fmt == "csv":
        lines = [_header_line(args)]
        body = asdict(report)
        body.pop("ftqc_table")
        for key, val in body.items():
            if isinstance(val, dict):
                for sub, v in val.items():
                    lines.append(f"{key}.{sub},{v}")
            else:
                lines.append(f"{key},{val}")
        return "\n".join(lines)
    payload = json.loads(report.to_json())
    return json.dumps({"meta": _config_record(args), "report": payload}, indent=2)


def cmd_compare(args) -> str:
    if args.d < 3 or args.d % 2 == 0:
        raise ConfigError(f"code distance must be odd and >= 3: {args.d}")
    spec, scheme = _device(args)
    rows = ftqc_comparison(spec, args.d, scheme=scheme)
    fmt = args.format or "csv"
    if fmt == "csv":
        return "\n".join([_header_line(args), comparison_table_csv(rows)])
    return json.dumps(
        {"meta": _config_record(args), "rows": [asdict(r) for r in rows]}, indent=2
    )


def cmd_apps(args) -> str:
    if args.d < 3 or args.d % 2 == 0:
        raise ConfigError(f"code distance must be odd and >= 3: {args.d}")
    spec, scheme = _device(args)
    sized = application_sizing(spec, args.d, scheme)
    fmt = args.format or "json"
    if fmt == "csv":
        hub, qa = sized["hubbard"], sized["qaoa"]
        return "\n".join(
            [
                _header_line(args),
                "application,qubits,rotations_per_unit,units",
                f"hubbard,{hub.sites},{hub.rotations_per_step},{hub.trotter_steps}",
                f"qaoa,{qa.nodes},,{qa.depth}",
            ]
        )
    return json.dumps(
        {
            "meta": _config_record(args),
            "hubbard": asdict(sized["hubbard"]),
            "qaoa": asdict(sized["qaoa"]),
        },
        indent=2,
    )


_COMMANDS = {
    "memory": cmd_memory,
    "inject": cmd_inject,
    "fit": cmd_fit,
    "estimate": cmd_estimate,
    "compare": cmd_compare,
    "apps": cmd_apps,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        text = _COMMANDS[args.command](args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ScheduleInvalidError as exc:
        print(f"schedule rejected: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    _emit(args, text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
