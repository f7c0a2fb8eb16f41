"""Command-line entry point: ``halving-lab <subcommand> [options]``.

Configs are flat ``key=value`` text files with ``#`` comments. Every run
writes its outputs plus a ``manifest.json``; passing that manifest back as
``--config`` reproduces the run.

Exit codes: 0 success, 2 validation error, 3 resource limit, 4 I/O error.
"""
import argparse
import csv
import dataclasses
import io
import json
import math
import os
import sys
import time
import types
import typing

import numpy as np

from . import __version__
from .errors import HalvingLabError, InvalidArgumentError, PreconditionViolation, ResourceLimitError
from .experiments import (
    ExperimentConfig,
    run_complexity_experiment,
    run_general_k_experiment,
    run_halving_experiment,
)
from .geom_core import build_delta_net
from .kdistance import KDistSpec, eval_kdistance
from .moments import moment_row

SCHEMA_VERSION = 1
EXIT_OK, EXIT_VALIDATION, EXIT_RESOURCE, EXIT_IO = 0, 2, 3, 4


class ConfigError(InvalidArgumentError):
    pass


# -- parsing ----------------------------------------------------------------


def parse_config_text(text):
    """Parse ``key=value`` lines into a dict of raw strings."""
    out = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"config line {lineno}: expected key=value, got {raw.strip()!r}")
        key, value = (s.strip() for s in line.split("=", 1))
        if not key:
            raise ConfigError(f"config line {lineno}: empty key")
        if key in out:
            raise ConfigError(f"config key {key!r} given twice")
        out[key] = value
    return out


def _convert(key, raw, hint):
    if not isinstance(raw, str):
        return list(raw) if isinstance(raw, (list, tuple)) else raw
    origin = typing.get_origin(hint)
    args = typing.get_args(hint)
    try:
        if hint is bool:
            low = raw.lower()
            if low not in ("true", "false", "1", "0", "yes", "no"):
                raise ValueError(raw)
            return low in ("true", "1", "yes")
        if hint is int:
            return int(raw)
        if hint is float:
            return float(raw)
        if hint is tuple:
            return tuple(float(s) for s in raw.replace(",", " ").split()) if raw.strip() else ()
        if origin in (typing.Union, types.UnionType):
            if raw.lower() in ("", "none", "auto") and type(None) in args:
                return None
            if str in args:
                return raw if raw == "auto" else float(raw)
            return _convert(key, raw, next(a for a in args if a is not type(None)))
        return raw
    except ValueError:
        raise ConfigError(f"config key {key!r}: cannot parse {raw!r}")


def build_experiment_config(raw, seed_override=None):
    hints = typing.get_type_hints(ExperimentConfig)
    known = {f.name for f in dataclasses.fields(ExperimentConfig)}
    values = {}
    for key, value in raw.items():
        if key not in known:
            raise ConfigError(f"unknown config key {key!r}")
        values[key] = _convert(key, value, hints[key])
    if seed_override is not None:
        values["seed"] = seed_override
    for key in ("d", "N", "eta"):
        if key not in values:
            raise ConfigError(f"missing required config key {key!r}")
    return ExperimentConfig(**values)


def load_config(path, subcommand):
    """Read a key=value config, or the ``config`` block of a run manifest."""
    if path is None:
        return {}
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as exc:
        raise OSError(f"cannot read config {path}: {exc.strerror}") from exc
    if text.lstrip().startswith("{"):
        try:
            manifest = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{path}: invalid manifest JSON ({exc.msg})")
        if manifest.get("subcommand") != subcommand:
            raise ConfigError(f"{path}: manifest is for {manifest.get('subcommand')!r}, not {subcommand!r}")
        return {k: v for k, v in manifest["config"].items() if v is not None}
    return parse_config_text(text)


def read_points(path, dim=None, allow_empty=False):
    """Read a point file: ``dim=<d>`` header then one whitespace-separated point per line."""
    try:
        with open(path) as fh:
            lines = fh.read().splitlines()
    except OSError as exc:
        raise OSError(f"cannot read point file {path}: {exc.strerror}") from exc
    rows = [(i, ln.split("#", 1)[0].strip()) for i, ln in enumerate(lines, 1)]
    rows = [(i, ln) for i, ln in rows if ln]
    if not rows:
        if allow_empty and dim is not None:
            return np.empty((0, dim))
        raise ConfigError(f"{path}: missing 'dim=<d>' header")
    lineno, header = rows[0]
    if not header.startswith("dim="):
        raise ConfigError(f"{path}:{lineno}: expected 'dim=<d>' header, got {header!r}")
    try:
        file_dim = int(header[4:])
    except ValueError:
        raise ConfigError(f"{path}:{lineno}: bad dimension {header[4:]!r}")
    if file_dim < 1:
        raise ConfigError(f"{path}:{lineno}: dimension must be positive")
    if dim is not None and file_dim != dim:
        raise ConfigError(f"{path}:{lineno}: dimension {file_dim} does not match {dim}")
    pts = []
    for lineno, ln in rows[1:]:
        parts = ln.split()
        try:
            vals = [float(s) for s in parts]
        except ValueError:
            raise ConfigError(f"{path}:{lineno}: malformed row {ln!r}")
        if len(vals) != file_dim or not all(math.isfinite(v) for v in vals):
            raise ConfigError(f"{path}:{lineno}: expected {file_dim} finite numbers, got {ln!r}")
        pts.append(vals)
    return np.array(pts, dtype=float).reshape(-1, file_dim)


# -- output -----------------------------------------------------------------


def fmt(x):
    if x is None:
        return ""
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        return format(float(x), ".17g")
    if isinstance(x, (list, tuple)):
        return ":".join(fmt(v) for v in x)
    return str(x)


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        f = float(obj)
        return f if math.isfinite(f) else None
    return obj


def dumps_json(obj):
    return json.dumps(_jsonable(obj), indent=2, sort_keys=True) + "\n"


def csv_text(header, rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([fmt(v) for v in row])
    return buf.getvalue()


class Outputs:
    """Collects files for one run and writes them, with the manifest, at the end."""

    def __init__(self, out_dir):
        self.out_dir = out_dir
        self.files = {}

    def add(self, name, text):
        self.files[name] = text

    def write(self, subcommand, config, seed, wall_clock):
        try:
            os.makedirs(self.out_dir, exist_ok=True)
            for name, text in self.files.items():
                with open(os.path.join(self.out_dir, name), "w") as fh:
                    fh.write(text)
            manifest = {
                "schema_version": SCHEMA_VERSION,
                "subcommand": subcommand,
                "config": config,
                "seed": seed,
                "artifact_version": __version__,
                "outputs": sorted(self.files) + ["manifest.json"],
                "wall_clock_seconds": wall_clock,
            }
            with open(os.path.join(self.out_dir, "manifest.json"), "w") as fh:
                fh.write(dumps_json(manifest))
        except OSError as exc:
            raise OSError(f"cannot write to {exc.filename or self.out_dir}: {exc.strerror}") from exc


# -- subcommands ------------------------------------------------------------


def _d_list(raw):
    try:
        ds = [int(s) for s in str(raw).replace(",", " ").split()]
    except ValueError:
        raise ConfigError(f"config key 'd_list': cannot parse {raw!r}")
    if not ds or any(d < 2 for d in ds):
        raise ConfigError("config key 'd_list': every d must be >= 2")
    return ds


def cmd_moments(args):
    raw = load_config(args.config, "moments")
    extra = set(raw) - {"d_list"}
    if extra:
        raise ConfigError(f"unknown config key {sorted(extra)[0]!r}")
    d_spec = args.d_list if args.d_list is not None else raw.get("d_list")
    if d_spec is None:
        raise ConfigError("missing required config key 'd_list'")
    if isinstance(d_spec, list):
        d_spec = ",".join(str(v) for v in d_spec)
    ds = _d_list(d_spec)
    rows = []
    for d in ds:
        r = moment_row(d)
        rows.append([r.d, r.m_d, r.var_d, r.scaled_mean, r.scaled_var])
    out = Outputs(args.out)
    out.add("moments.csv", csv_text(["d", "m_d", "var_d", "m_d_sqrt_d", "d_var_d"], rows))
    return out, {"d_list": ",".join(map(str, ds))}, None


_RUNNERS = {
    "halving-exp": run_halving_experiment,
    "general-k": run_general_k_experiment,
    "complexity": run_complexity_experiment,
}


def cmd_experiment(args):
    raw = load_config(args.config, args.command)
    config = build_experiment_config(raw, args.seed)
    report = _RUNNERS[args.command](config, threads=args.threads)
    data = report.to_dict()
    data["schema_version"] = SCHEMA_VERSION
    out = Outputs(args.out)
    out.add("report.json", dumps_json(data))
    rows = [t.to_dict() for t in report.trials]
    header = list(rows[0])
    out.add("trials.csv", csv_text(header, [[r.get(h) for h in header] for r in rows]))
    return out, config.to_dict(), config.seed


def cmd_kdist_eval(args):
    raw = load_config(args.config, "kdist-eval")
    extra = set(raw) - {"points", "queries", "k"}
    if extra:
        raise ConfigError(f"unknown config key {sorted(extra)[0]!r}")
    points = args.points or raw.get("points")
    queries = args.queries or raw.get("queries")
    k = args.k if args.k is not None else raw.get("k")
    for key, val in (("points", points), ("queries", queries), ("k", k)):
        if val is None:
            raise ConfigError(f"missing required config key {key!r}")
    try:
        k = int(k)
    except ValueError:
        raise ConfigError(f"config key 'k': cannot parse {k!r}")
    P = read_points(points)
    spec = KDistSpec(P, k)
    Q = read_points(queries, dim=spec.dim, allow_empty=True)
    values = eval_kdistance(spec, Q) if len(Q) else np.empty(0)
    header = [f"x{i}" for i in range(spec.dim)] + ["value"]
    out = Outputs(args.out)
    out.add("kdist.csv", csv_text(header, [list(q) + [v] for q, v in zip(Q, values)]))
    return out, {"points": points, "queries": queries, "k": k}, None


def cmd_net_build(args):
    raw = load_config(args.config, "net-build")
    extra = set(raw) - {"d", "delta", "seed"}
    if extra:
        raise ConfigError(f"unknown config key {sorted(extra)[0]!r}")
    vals = {}
    for key, conv in (("d", int), ("delta", float), ("seed", int)):
        v = getattr(args, key, None)
        if v is None:
            v = raw.get(key, 0 if key == "seed" else None)
        if v is None:
            raise ConfigError(f"missing required config key {key!r}")
        try:
            vals[key] = conv(v)
        except ValueError:
            raise ConfigError(f"config key {key!r}: cannot parse {v!r}")
    net = build_delta_net(vals["d"], vals["delta"], vals["seed"])
    out = Outputs(args.out)
    out.add("net.csv", csv_text([f"u{i}" for i in range(net.dim)], net.directions.tolist()))
    out.add("net.json", dumps_json({
        "schema_version": SCHEMA_VERSION, "dim": net.dim, "delta": net.delta,
        "size": len(net), "verified": net.verified.value,
    }))
    return out, vals, vals["seed"]


COMMANDS = {
    "moments": cmd_moments,
    "halving-exp": cmd_experiment,
    "general-k": cmd_experiment,
    "complexity": cmd_experiment,
    "kdist-eval": cmd_kdist_eval,
    "net-build": cmd_net_build,
}


def make_parser():
    parser = argparse.ArgumentParser(prog="halving-lab", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--config", metavar="PATH", help="key=value config file or a run manifest")
        p.add_argument("--out", metavar="DIR", default=".", help="output directory (default: .)")
        p.add_argument("--seed", type=int, help="override the config seed")
        p.add_argument("--threads", type=int, default=1, help="worker threads, 0 = auto (default: 1)")
        if name == "moments":
            p.add_argument("--d-list", dest="d_list", help="comma-separated dimensions")
        elif name == "kdist-eval":
            p.add_argument("--points", metavar="PATH")
            p.add_argument("--queries", metavar="PATH")
            p.add_argument("--k", type=int)
        elif name == "net-build":
            p.add_argument("--d", type=int)
            p.add_argument("--delta", type=float)
    return parser


def main(argv=None):
    args = make_parser().parse_args(argv)
    if args.threads < 0:
        print("error: --threads must be >= 0", file=sys.stderr)
        return EXIT_VALIDATION
    t0 = time.perf_counter()
    try:
        out, config, seed = COMMANDS[args.command](args)
        out.write(args.command, config, seed, time.perf_counter() - t0)
    except ResourceLimitError as exc:
        print(f"resource limit: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except (InvalidArgumentError, PreconditionViolation) as exc:
        print(f"validation error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except HalvingLabError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
