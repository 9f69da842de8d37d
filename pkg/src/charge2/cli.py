"""``charge2`` command line: exact tables, sweeps and verification reports.

Exit status: 0 success (all checks pass), 1 a verification check failed,
2 configuration error.
"""

import argparse
import csv
import io
import json
import math
import os
import sys
import tempfile
from importlib import resources
from dataclasses import dataclass, field
from datetime import datetime, timezone

import numpy as np

from . import __version__
from . import limit_theory as lt
from .exact_dist import exact_cumulants, exact_pmf, sample
from .kernels import BACKEND
from .verify import ModelSpec, run_checks

SCHEMA_VERSION = 1
U64_MAX = 2**64 - 1
EXACT_INT = 2**53

DEFAULT_SWEEPS = {
    "circle": [250, 500, 1000, 2000],
    "line-scaled": [100, 200, 400, 1000],
    "line-unit": [100, 400, 1000],
}

CUMULANT_COLUMNS = [
    "n", "kappa1", "kappa1_rate", "kappa2", "kappa2_rate", "kappa3", "kappa3_rate",
    "mean_rate_limit", "var_rate_limit", "kappa_rate_limit",
]
PMF_COLUMNS = ["n", "value", "probability"]
SAMPLE_COLUMNS = ["n", "value"]
RATE_COLUMNS = ["x", "rate", "minimizer", "speed", "convex"]
CHECK_COLUMNS = ["check", "anchor", "n", "value", "predicted", "abs_error", "rel_error", "tolerance", "verdict", "note"]


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    command: str
    model: ModelSpec
    ns: list = field(default_factory=list)
    seed: int = 0
    fmt: str = "json"
    out: str | None = None
    tol_scale: float = 1.0
    count: int = 10


def _parse_ns(text):
    try:
        ns = [int(tok) for tok in text.split(",") if tok.strip()]
    except ValueError:
        raise ConfigError(f"--n expects comma-separated integers, got {text!r}") from None
    if not ns or min(ns) < 1:
        raise ConfigError("--n values must be positive integers")
    return ns


def build_config(args):
    if args.model == "line-scaled":
        if not args.gamma > 0:
            raise ConfigError("line-scaled needs --gamma > 0")
        spec = ModelSpec("line-scaled", gamma=args.gamma)
    elif args.model == "circle":
        if not args.rho > 0:
            raise ConfigError("circle needs --rho > 0")
        spec = ModelSpec("circle", rho=args.rho)
    else:
        spec = ModelSpec("line-unit")
    if args.n is not None:
        ns = _parse_ns(args.n)
    elif args.command in ("verify", "rate"):
        ns = list(DEFAULT_SWEEPS[args.model]) if args.command == "verify" else []
    else:
        raise ConfigError(f"{args.command} needs --n")
    if not 0 <= args.seed <= U64_MAX:
        raise ConfigError("--seed must be an unsigned 64-bit integer")
    if not args.tol_scale >= 0:
        raise ConfigError("--tol-scale must be non-negative")
    if args.count < 1:
        raise ConfigError("--count must be positive")
    return RunConfig(args.command, spec, ns, args.seed, args.format, args.out, args.tol_scale, args.count)


# ---------------------------------------------------------------------------
# serialization


def _num(x):
    """JSON-safe number: large ints and non-finite floats become strings."""
    if isinstance(x, (bool, str)) or x is None:
        return x
    if isinstance(x, (int, np.integer)):
        x = int(x)
        return x if abs(x) <= EXACT_INT else str(x)
    x = float(x)
    return x if math.isfinite(x) else repr(x)


def _jsonable(obj):
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    return _num(obj)


def _csv_cell(x):
    if isinstance(x, (float, np.floating)):
        return "%.17g" % x
    if x is None:
        return ""
    return str(x)


def render_csv(columns, rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for row in rows:
        w.writerow([_csv_cell(v) for v in row])
    return buf.getvalue()


def render_json(payload):
    return json.dumps(_jsonable(payload), indent=2, sort_keys=False) + "\n"


def write_output(text, path):
    """Write atomically via a temp file in the target directory, or to stdout."""
    if path is None or path == "-":
        sys.stdout.write(text)
        return
    d = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".charge2-")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def canonicalize(report):
    """Copy of a report dict without its timestamp, for determinism comparisons."""
    out = json.loads(json.dumps(report))
    out.get("environment", {}).pop("timestamp", None)
    return out


def report_schema():
    """The JSON Schema that every ``verify`` report validates against."""
    return json.loads(resources.files(__package__).joinpath("report_schema.json").read_text())


def _header(cfg):
    return {"schema": SCHEMA_VERSION, "command": cfg.command, "model": cfg.model.as_dict()}


# ---------------------------------------------------------------------------
# commands


def cmd_pmf(cfg):
    tables = []
    rows = []
    for n in cfg.ns:
        pmf = exact_pmf(cfg.model.profile().model_factory(n))
        vals = pmf.values.tolist()
        probs = pmf.mass.tolist()
        tables.append({"n": n, "rows": [[v, p] for v, p in zip(vals, probs)]})
        rows.extend((n, v, p) for v, p in zip(vals, probs))
    if cfg.fmt == "csv":
        return render_csv(PMF_COLUMNS, rows), 0
    return render_json({**_header(cfg), "columns": PMF_COLUMNS[1:], "tables": tables}), 0


def cmd_cumulants(cfg):
    prof = cfg.model.profile()
    rows = []
    for n in cfg.ns:
        c = exact_cumulants(prof.model_factory(n))
        d = prof.normalizer(n)
        rows.append([n, c.kappa1, c.kappa1 / d, c.kappa2, c.kappa2 / d, c.kappa3, c.kappa3 / d,
                     prof.mean_rate, prof.var_rate, prof.kappa_rate])
    if cfg.fmt == "csv":
        return render_csv(CUMULANT_COLUMNS, rows), 0
    return render_json({**_header(cfg), "columns": CUMULANT_COLUMNS, "rows": rows}), 0


def cmd_sample(cfg):
    prof = cfg.model.profile()
    rows = []
    samples = {}
    for n in cfg.ns:
        draws = sample(prof.model_factory(n), cfg.count, cfg.seed)
        samples[str(n)] = draws.tolist()
        rows.extend((n, int(v)) for v in draws)
    if cfg.fmt == "csv":
        return render_csv(SAMPLE_COLUMNS, rows), 0
    return render_json({**_header(cfg), "seed": cfg.seed, "count": cfg.count, "samples": samples}), 0


def _rate_grid(kind):
    if kind == "circle":
        return np.arange(1, 100) / 50.0
    if kind == "line-scaled":
        return np.arange(1, 100) / 100.0
    return np.arange(1, 51) / 10.0


def cmd_rate(cfg):
    rate = cfg.model.rate()
    xs = _rate_grid(cfg.model.kind)
    vals = [rate(float(x)) for x in xs]
    convex = lt.rate_convexity_ok(rate, xs)
    speed = rate.speed_rule
    rows = [[float(x), v, rate.minimizer, speed, convex] for x, v in zip(xs, vals)]
    diag = {"minimizer": rate.minimizer, "rate_at_minimizer": rate(rate.minimizer), "speed": speed, "convex": convex,
            "domain": list(rate.domain)}
    if cfg.ns:
        diag["speed_values"] = {str(n): rate.speed(n) for n in cfg.ns}
    if cfg.model.kind == "circle":
        b = lt.circle_rate_boundary(cfg.model.rho)
        diag["boundary"] = {"x0_limit_computed": b.computed, "x0_limit_closed_form": b.closed_form,
                            "x0_limit_printed": b.printed, "sign_discrepancy": b.sign_discrepancy,
                            "upper_limit": "inf"}
    if cfg.fmt == "csv":
        return render_csv(RATE_COLUMNS, rows), 0
    return render_json({**_header(cfg), "columns": RATE_COLUMNS, "rows": rows, "diagnostics": diag}), 0


def build_report(cfg, timestamp=None):
    recs = run_checks(cfg.model, cfg.ns, seed=cfg.seed, tol_scale=cfg.tol_scale)
    failed = sum(r.verdict != "pass" for r in recs)
    ts = timestamp or datetime.now(timezone.utc).replace(microsecond=0).isoformat().replace("+00:00", "Z")
    return {
        **_header(cfg),
        "n": list(cfg.ns),
        "tol_scale": cfg.tol_scale,
        "environment": {"seed": cfg.seed, "version": __version__, "backend": BACKEND, "timestamp": ts},
        "checks": [r.as_dict() for r in recs],
        "summary": {"total": len(recs), "passed": len(recs) - failed, "failed": failed,
                    "verdict": "pass" if failed == 0 else "fail"},
    }


def cmd_verify(cfg):
    report = build_report(cfg)
    code = 0 if report["summary"]["verdict"] == "pass" else 1
    if cfg.fmt == "csv":
        rows = [[c[k] for k in CHECK_COLUMNS] for c in report["checks"]]
        return render_csv(CHECK_COLUMNS, rows), code
    return render_json(report), code


COMMANDS = {"pmf": cmd_pmf, "cumulants": cmd_cumulants, "verify": cmd_verify, "sample": cmd_sample, "rate": cmd_rate}


def make_parser():
    p = argparse.ArgumentParser(prog="charge2", description=__doc__.splitlines()[0])
    p.add_argument("command", choices=sorted(COMMANDS))
    p.add_argument("--model", required=True, choices=["line-scaled", "line-unit", "circle"])
    p.add_argument("--gamma", type=float, default=0.5, help="line-scaled: X^2 = 2 n gamma (default 0.5)")
    p.add_argument("--rho", type=float, default=1.0, help="circle: X = n rho (default 1.0)")
    p.add_argument("--n", help="size or comma-separated sweep, e.g. 100,200,400")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--format", choices=["json", "csv"], default="json")
    p.add_argument("--out", help="output path (default: stdout)")
    p.add_argument("--tol-scale", type=float, default=1.0, help="multiplier on every verification tolerance")
    p.add_argument("--count", type=int, default=10, help="number of draws for 'sample'")
    return p


def main(argv=None):
    args = make_parser().parse_args(argv)
    try:
        cfg = build_config(args)
        text, code = COMMANDS[cfg.command](cfg)
    except (ConfigError, ValueError) as exc:
        print(f"charge2: error: {exc}", file=sys.stderr)
        return 2
    write_output(text, cfg.out)
    return code


if __name__ == "__main__":
    sys.exit(main())
