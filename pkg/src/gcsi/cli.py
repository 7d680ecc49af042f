"""Command-line front end.

Exit codes: 0 on success, 2 when a verifier finds a counterexample to a
theorem, 1 on usage or domain errors. Reports are deterministic JSON (sorted
keys, non-finite floats written as strings) and written atomically.
"""
from __future__ import annotations

import argparse
import datetime
import json
import math
import os
import sys
import tempfile

import numpy as np

from . import __version__
from .classify import classify
from .engine import gcsi_index
from .harness import EXAMPLES, KINDS, VERIFIERS, EnsembleSpec, repro, verify
from .linalg import DomainError, Tolerances, matrix_from_json
from .search import SearchConfig

COMMANDS = ("classify", "gcsi-index", "verify", "repro", "fuzz")
EXIT_OK, EXIT_ERROR, EXIT_CONTRADICTED = 0, 1, 2

# keys accepted in a --config file, mirroring the long flags
CONFIG_KEYS = {
    "command", "input", "n", "k", "seed", "restarts", "samples", "tolerance",
    "theorem", "example", "ensemble", "count", "output", "format", "log",
}
DEFAULTS = {
    "n": 4, "k": 1, "seed": 0, "restarts": None, "samples": None, "tolerance": None,
    "ensemble": "generic", "count": 20, "format": "json",
}


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on usage errors; 2 is reserved for contradictions
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_ERROR, f"{self.prog}: error: {message}\n")


def build_parser():
    p = _Parser(prog="gcsi", description="GCSI operator classification and theorem checks.")
    p.add_argument("command", nargs="?", choices=COMMANDS)
    p.add_argument("--config", help="JSON file mirroring the long flags; flags win")
    p.add_argument("--input", help="operator file in ComplexMatrix JSON")
    p.add_argument("--n", type=int)
    p.add_argument("--k", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--restarts", type=int)
    p.add_argument("--samples", type=int, help="samples per restart")
    p.add_argument("--tolerance", type=float, help="inequality tolerance")
    p.add_argument("--theorem", help=f"one of {', '.join(sorted(VERIFIERS))}")
    p.add_argument("--example", help=f"one of {', '.join(sorted(EXAMPLES))}")
    p.add_argument("--ensemble", choices=KINDS)
    p.add_argument("--count", type=int)
    p.add_argument("--output", help="report path (stdout when omitted)")
    p.add_argument("--format", choices=("json", "text"))
    p.add_argument("--log", help="append a timestamped JSONL summary line to this file")
    return p


def resolve(args):
    """Merge defaults, the config file and explicit flags (in that order)."""
    opts = dict(DEFAULTS)
    if args.config:
        with open(args.config) as fh:
            data = json.load(fh)
        if not isinstance(data, dict):
            raise DomainError("config file must hold a JSON object")
        unknown = set(data) - CONFIG_KEYS
        if unknown:
            raise DomainError(f"unknown config keys: {sorted(unknown)}")
        opts.update(data)
    for key in CONFIG_KEYS:
        value = getattr(args, key, None)
        if value is not None:
            opts[key] = value
    if opts.get("command") not in COMMANDS:
        raise DomainError(f"command must be one of {COMMANDS}")
    if opts["format"] not in ("json", "text"):
        raise DomainError("format must be json or text")
    if opts["command"] == "verify" and not opts.get("theorem"):
        raise DomainError("verify needs --theorem")
    if opts["command"] == "repro" and not opts.get("example"):
        raise DomainError("repro needs --example")
    if opts["command"] == "classify" and not opts.get("input"):
        raise DomainError("classify needs --input")
    return opts


def search_config(opts):
    cfg = {"seed": int(opts["seed"])}
    if opts.get("restarts") is not None:
        cfg["restarts"] = int(opts["restarts"])
    if opts.get("samples") is not None:
        cfg["samples_per_restart"] = int(opts["samples"])
    return SearchConfig(**cfg)


def tolerances(opts):
    if opts.get("tolerance") is None:
        return Tolerances()
    return Tolerances(ineq_tol=float(opts["tolerance"]))


def load_matrix(path):
    try:
        with open(path) as fh:
            data = json.load(fh)
    except OSError as exc:
        raise DomainError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise DomainError(f"{path} is not valid JSON: {exc}") from exc
    return matrix_from_json(data)


def _finite(obj):
    if isinstance(obj, float) and not math.isfinite(obj):
        return "nan" if math.isnan(obj) else ("inf" if obj > 0 else "-inf")
    if isinstance(obj, dict):
        return {str(k): _finite(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_finite(v) for v in obj]
    if isinstance(obj, np.generic):
        return _finite(obj.item())
    return obj


def dumps(report):
    return json.dumps(_finite(report), sort_keys=True, indent=2, allow_nan=False) + "\n"


def write_atomic(path, text):
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".gcsi-", suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def execute(opts):
    """Run the resolved command. Returns ``(exit_code, report)``."""
    config = search_config(opts)
    tol = tolerances(opts)
    cmd = opts["command"]
    k = int(opts["k"])
    status = EXIT_OK
    if cmd == "classify":
        body = classify(load_matrix(opts["input"]), config, k=k, tol=tol).to_json()
    elif cmd == "gcsi-index":
        a = load_matrix(opts["input"]) if opts.get("input") else np.eye(int(opts["n"]), dtype=complex)
        body = gcsi_index(a, config, k=k, tol=tol).to_json()
    elif cmd in ("verify", "fuzz"):
        kind = "custom_json" if opts.get("input") else opts["ensemble"]
        spec = EnsembleSpec(kind=kind, n=int(opts["n"]), k=k, count=int(opts["count"]),
                            seed=int(opts["seed"]), path=opts.get("input"))
        ids = [opts["theorem"]] if cmd == "verify" else sorted(VERIFIERS)
        results = [verify(t, spec, config, tol).to_json() for t in ids]
        if any(r["status"] == "fail" for r in results):
            status = EXIT_CONTRADICTED
        body = results[0] if cmd == "verify" else {"results": results}
    else:
        body = repro(opts["example"], config, tol).to_json()
        if body["status"] == "fail":
            status = EXIT_CONTRADICTED
    echo = {k_: opts.get(k_) for k_ in sorted(CONFIG_KEYS - {"output", "log", "format"})}
    report = {
        "command": cmd,
        "version": __version__,
        "options": echo,
        "search_config": config.to_dict(),
        "tolerances": tol.to_dict(),
        "result": body,
    }
    return status, report


def render_text(report):
    body = report["result"]
    lines = [f"gcsi {report['command']} (seed {report['search_config']['seed']})"]
    if report["command"] == "classify":
        for name in ("normal", "cohyponormal", "semi_hyponormal", "paranormal"):
            v = body[name]
            lines.append(f"  {name:16s} {'yes' if v['holds'] else 'no':4s} defect {v['defect']}")
        lines.append(f"  gcsi             {body['gcsi']['membership']} lambda* {body['gcsi']['lambda_star']}")
        lines.append(f"  rank {body['rank']}  rank(A^2) {body['rank_square']}  kernel_eq {body['kernel_eq']}")
    elif report["command"] == "gcsi-index":
        lines.append(f"  lambda* {body['lambda_star']}  {body['membership']}")
    else:
        results = body["results"] if "results" in body else [body]
        for r in results:
            lines.append(f"  {r['theorem_id']:22s} {r['status']:11s} tested {r['instances_tested']}"
                         f"/{r['instances_total']}  violations {len(r['violations'])}")
    return "\n".join(lines) + "\n"


def _append_log(path, report, status):
    entry = {
        "timestamp": datetime.datetime.now(datetime.timezone.utc).isoformat(),
        "version": __version__,
        "command": report["command"],
        "options": report["options"],
        "exit": status,
    }
    with open(path, "a") as fh:
        fh.write(json.dumps(_finite(entry), sort_keys=True) + "\n")


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        opts = resolve(args)
        status, report = execute(opts)
    except (DomainError, OSError, json.JSONDecodeError) as exc:
        print(f"gcsi: error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    text = dumps(report) if opts["format"] == "json" else render_text(report)
    if opts.get("output"):
        write_atomic(opts["output"], text)
    else:
        sys.stdout.write(text)
    if opts.get("log"):
        _append_log(opts["log"], report, status)
    return status


if __name__ == "__main__":
    sys.exit(main())
