"""Command line entry point.

Verbs::

    test      CSV in  -> per-step statistics and p-values (CSV or JSON)
    knots     CSV in  -> knot sequence JSON
    cluster   CSV in  -> single-linkage dendrogram (JSON or Newick)
    nulltable n, p    -> CSV of null-distribution functions on a grid
    simulate  flags   -> per-replication CSV, QQ and histogram CSVs, JSON summary

Exit codes: 0 success, 1 input or usage error, 2 internal error.
"""

from __future__ import annotations

import argparse
import csv
import io
import sys
from pathlib import Path

from . import testing as knot_tests
from .correlation import correlation_matrix, ordered_edges
from .errors import InputError
from .ingest import load_csv
from .knotpath import knot_sequence
from .montecarlo import KINDS, Scenario, run
from .nulltheory import null_table
from .slink import dendrogram_from_knots


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: error: {message}\n{self.format_usage()}")


def _emit(text: str, output) -> None:
    if output in (None, "-"):
        sys.stdout.write(text)
        if not text.endswith("\n"):
            sys.stdout.write("\n")
    else:
        Path(output).write_text(text if text.endswith("\n") else text + "\n")


def _load(args):
    data = load_csv(args.input, has_header=args.header)
    return data, knot_sequence(ordered_edges(correlation_matrix(data)))


def _cmd_test(args) -> int:
    _, ks = _load(args)
    report = knot_tests.p_values(knot_tests.test_statistics(ks), args.known_m)
    stop = knot_tests.sequential_stop(report, args.alpha)
    if args.output and str(args.output).endswith(".json"):
        _emit(report.to_json(alpha=args.alpha, stop_step=stop), args.output)
    else:
        flag = ["1" if s.k == stop else "0" for s in report.steps]
        _emit(report.to_csv(extra={"first_above_alpha": flag}), args.output)
    if stop is None:
        print(f"all {len(report.steps)} steps have p <= {args.alpha}", file=sys.stderr)
    else:
        print(f"first step with p > {args.alpha}: k = {stop}", file=sys.stderr)
    return 0


def _cmd_knots(args) -> int:
    data, ks = _load(args)
    _emit(ks.to_json(names=data.column_names), args.output)
    return 0


def _cmd_cluster(args) -> int:
    data, ks = _load(args)
    tree = dendrogram_from_knots(ks)
    fmt = args.format
    if fmt is None:
        fmt = "newick" if args.output and str(args.output).endswith((".nwk", ".newick")) else "json"
    _emit(tree.to_newick(data.column_names) if fmt == "newick" else tree.to_json(), args.output)
    return 0


def _cmd_nulltable(args) -> int:
    rows = null_table(args.n, args.p, args.grid_points)
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow({k: "" if v is None else repr(float(v)) for k, v in r.items()})
    _emit(buf.getvalue(), args.output)
    return 0


def read_config(path) -> dict:
    """``key = value`` lines; ``#`` starts a comment. Keys use flag names."""
    out = {}
    for lineno, line in enumerate(Path(path).read_text().splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise InputError(f"{path}:{lineno}: expected key = value")
        key, value = (part.strip() for part in line.split("=", 1))
        out[key.replace("-", "_")] = value
    return out


_SIM_TYPES = {"kind": str, "n": int, "p": int, "reps": int, "seed": int,
              "signal_size": int, "signal_strength": float, "null_steps": int}


def _cmd_simulate(args) -> int:
    settings = {}
    if args.config:
        for key, value in read_config(args.config).items():
            if key not in _SIM_TYPES:
                raise InputError(f"unknown config key {key!r}")
            settings[key] = _SIM_TYPES[key](value)
    for key in _SIM_TYPES:
        value = getattr(args, key)
        if value is not None:
            settings[key] = value
    for key in ("kind", "n", "p"):
        if key not in settings:
            raise InputError(f"simulate needs --{key} (flag or config)")
    if settings["kind"] == "augmented_real":
        raise InputError("augmented_real runs need a data file; use scripts/augmented_real.py")
    if "signal_size" not in settings and settings["kind"] != "global_null":
        settings["signal_size"] = 6
    result = run(Scenario(**settings), workers=args.workers)
    summary = result.to_json()
    if args.output:
        stem = Path(args.output)
        stem.with_suffix(".csv").write_text(result.to_csv())
        stem.with_suffix(".qq.csv").write_text(result.qq_csv())
        stem.with_suffix(".hist.csv").write_text(result.hist_csv())
        stem.with_suffix(".json").write_text(summary + "\n")
    else:
        _emit(summary, None)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="glassoknots", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="verb", required=True, parser_class=_Parser)

    def data_verb(name, help_):
        p = sub.add_parser(name, help=help_)
        p.add_argument("--input", required=True, help="CSV file, rows are observations")
        p.add_argument("--header", action="store_true", help="first row holds column names")
        p.add_argument("--output", help="output file (default: stdout)")
        return p

    t = data_verb("test", "statistics and p-values along the knot sequence")
    t.add_argument("--alpha", type=float, default=0.05)
    t.add_argument("--known-m", type=int, default=None, help="last signal step, for exact p-values")
    data_verb("knots", "connected-component knot sequence")
    c = data_verb("cluster", "single-linkage dendrogram")
    c.add_argument("--format", choices=("json", "newick"))

    nt = sub.add_parser("nulltable", help="null density, tail, bounds on a grid")
    nt.add_argument("--n", type=int, required=True)
    nt.add_argument("--p", type=int, required=True)
    nt.add_argument("--grid-points", type=int, default=100)
    nt.add_argument("--output")

    sm = sub.add_parser("simulate", help="Monte Carlo replication of a scenario")
    sm.add_argument("--config", help="key = value file; flags override it")
    sm.add_argument("--kind", choices=KINDS)
    sm.add_argument("--n", type=int)
    sm.add_argument("--p", type=int)
    sm.add_argument("--reps", type=int)
    sm.add_argument("--seed", type=int)
    sm.add_argument("--signal-size", type=int)
    sm.add_argument("--signal-strength", type=float)
    sm.add_argument("--null-steps", type=int)
    sm.add_argument("--workers", type=int, default=1)
    sm.add_argument("--output", help="path stem for .csv, .qq.csv, .hist.csv and .json outputs")
    return parser


_COMMANDS = {"test": _cmd_test, "knots": _cmd_knots, "cluster": _cmd_cluster,
             "nulltable": _cmd_nulltable, "simulate": _cmd_simulate}


def run_cli(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return 1
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    try:
        return _COMMANDS[args.verb](args)
    except (InputError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except Exception as exc:
        print(f"internal error: {exc!r}", file=sys.stderr)
        return 2


def main():
    sys.exit(run_cli())


if __name__ == "__main__":
    main()
