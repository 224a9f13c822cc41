"""Command-line front end.

Two subcommands:

* ``dualrec estimate`` — load a two-stratum dataset, run one or more
  estimators (optionally with bootstrap standard errors), and print a
  per-method report.  ``--dump`` echoes the parsed dataset in canonical
  CSV form.
* ``dualrec simulate`` — run replicate studies for built-in design presets
  or a JSON config of designs, emitting one CSV/JSON row per
  (design, estimator).

Exit codes: 0 success; 1 I/O, parse, or usage errors; 2 estimation
infeasibility (an infeasible method in a multi-method run is reported
inline without aborting the others).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from pathlib import Path

from .boot import bootstrap
from .core import DomainError, DualrecError
from .datasets import load_stratum_pair, pair_to_csv
from .mle import FitConfig
from .sim import PRESETS, DesignPoint, apply_method, design_from_preset, run_study

METHOD_TOKENS = {
    "lp": "LP",
    "nour": "NOUR",
    "mme1": "MME-I",
    "mle1": "MLE-I",
    "mme2": "MME-II",
    "mle2": "MLE-II",
    "wolter1": "WOLTER-1",
    "wolter2": "WOLTER-2",
}

_RATIO_REQUIRED = ("WOLTER-1", "WOLTER-2")


class _CliError(Exception):
    """Usage or input error that should exit with code 1."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # noqa: D102 - argparse hook
        raise _CliError(message)


def _parse_methods(tokens: str) -> list[str]:
    methods = []
    for token in tokens.split(","):
        token = token.strip().lower()
        if not token:
            continue
        if token not in METHOD_TOKENS:
            raise _CliError(
                f"unknown method {token!r}; valid: {', '.join(sorted(METHOD_TOKENS))}"
            )
        methods.append(METHOD_TOKENS[token])
    if not methods:
        raise _CliError("no methods given")
    return methods


def _fmt_n(x: float) -> str:
    return str(int(x)) if float(x).is_integer() else f"{x:.2f}"


def _fmt_p(x: float) -> str:
    return f"{x:.4f}"


def _estimate_rows(args, pair) -> tuple[list[dict], bool]:
    """Run every requested method; rows carry results or inline errors."""
    rows = []
    any_infeasible = False
    for method in _parse_methods(args.method):
        if method in _RATIO_REQUIRED and args.ratio is None:
            raise _CliError(f"{method} requires --ratio")
        try:
            if args.bootstrap > 0:
                result = bootstrap(
                    pair,
                    method,
                    scheme=args.scheme,
                    b=args.bootstrap,
                    seed=args.seed,
                    ratio=args.ratio,
                )
            else:
                result = apply_method(method, pair, ratio=args.ratio)
            rows.append(
                {
                    "method": method,
                    "estimates": result.estimates,
                    "se": result.se,
                    "ci": result.ci,
                    "error": None,
                }
            )
        except DualrecError as e:
            any_infeasible = True
            rows.append(
                {
                    "method": method,
                    "estimates": None,
                    "se": None,
                    "ci": None,
                    "error": f"{type(e).__name__}: {e}",
                }
            )
    return rows, any_infeasible


def _print_estimate_report(pair, rows) -> None:
    print(f"strata: A = {pair.label_a}, B = {pair.label_b}")
    for row in rows:
        if row["error"] is not None:
            print(f"{row['method']}: infeasible - {row['error']}")
            continue
        est = row["estimates"]
        parts = []
        for key in ("n_a", "n_b", "n"):
            if key in est:
                cell = f"{key} = {_fmt_n(est[key])}"
                if row["se"] and key in row["se"]:
                    cell += f" [{row['se'][key]:.2f}]"
                parts.append(cell)
        if "alpha" in est:
            parts.append(f"alpha = {_fmt_p(est['alpha'])}")
        print(f"{row['method']}: " + ", ".join(parts))
        if row["ci"]:
            spans = ", ".join(
                f"{k} ({lo:.1f}, {hi:.1f})" for k, (lo, hi) in row["ci"].items()
            )
            print(f"  95% interval: {spans}")


_ESTIMATE_CSV_COLUMNS = (
    "method",
    "n_a",
    "se_n_a",
    "ci_lo_n_a",
    "ci_hi_n_a",
    "n_b",
    "se_n_b",
    "ci_lo_n_b",
    "ci_hi_n_b",
    "alpha",
    "error",
)


def _estimate_csv(rows) -> str:
    out = io.StringIO()
    writer = csv.DictWriter(out, fieldnames=_ESTIMATE_CSV_COLUMNS, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        rec = {"method": row["method"], "error": row["error"] or ""}
        est, se, ci = row["estimates"] or {}, row["se"] or {}, row["ci"] or {}
        for key in ("n_a", "n_b"):
            if key in est:
                rec[key] = est[key]
            if key in se:
                rec[f"se_{key}"] = round(se[key], 6)
            if key in ci:
                rec[f"ci_lo_{key}"], rec[f"ci_hi_{key}"] = (
                    round(ci[key][0], 6),
                    round(ci[key][1], 6),
                )
        if "alpha" in est:
            rec["alpha"] = round(est["alpha"], 6)
        writer.writerow(rec)
    return out.getvalue()


def _write_out(path: str, rows, to_csv) -> None:
    suffix = Path(path).suffix.lower()
    if suffix == ".json":
        text = json.dumps(rows, indent=2, sort_keys=True) + "\n"
    elif suffix == ".csv":
        text = to_csv(rows)
    else:
        raise _CliError(f"--out must end in .json or .csv, got {path!r}")
    Path(path).write_text(text, encoding="utf-8")


def cmd_estimate(args) -> int:
    try:
        pair = load_stratum_pair(args.data, dependent=args.dependent)
    except OSError as e:
        print(f"error: cannot read {args.data}: {e}", file=sys.stderr)
        return 1
    except DomainError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    if args.dump:
        sys.stdout.write(pair_to_csv(pair))
        if args.method is None:
            return 0
    if args.method is None:
        raise _CliError("--method is required unless --dump is given")
    rows, any_infeasible = _estimate_rows(args, pair)
    _print_estimate_report(pair, rows)
    if args.out:
        _write_out(args.out, rows, _estimate_csv)
    return 2 if any_infeasible else 0


_STUDY_CSV_COLUMNS = (
    "design",
    "estimator",
    "mean_na",
    "rrmse_na",
    "ci_lo",
    "ci_hi",
    "mean_alpha",
    "failures",
)


def _study_csv(rows) -> str:
    out = io.StringIO()
    writer = csv.DictWriter(out, fieldnames=_STUDY_CSV_COLUMNS, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow({k: row.get(k, "") for k in _STUDY_CSV_COLUMNS})
    return out.getvalue()


def _design_fields(doc: dict, where: str) -> DesignPoint:
    required = (
        "p1dot_a",
        "pdot1_a",
        "p1dot_b",
        "pdot1_b",
        "alpha",
        "n_a",
        "n_b",
        "seed",
    )
    missing = [f for f in required if f not in doc]
    if missing:
        raise _CliError(f"{where}: missing field(s) {', '.join(missing)}")
    try:
        return DesignPoint(
            p1dot_a=float(doc["p1dot_a"]),
            pdot1_a=float(doc["pdot1_a"]),
            p1dot_b=float(doc["p1dot_b"]),
            pdot1_b=float(doc["pdot1_b"]),
            alpha=float(doc["alpha"]),
            n_a=int(doc["n_a"]),
            n_b=int(doc["n_b"]),
            model=str(doc.get("model", "I")),
            replicates=int(doc.get("replicates", 5000)),
            seed=int(doc["seed"]),
        )
    except (TypeError, ValueError, DualrecError) as e:
        raise _CliError(f"{where}: {e}")


def _load_config(path: str, default_estimators: list[str]):
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as e:
        raise _CliError(f"cannot read {path}: {e}")
    except json.JSONDecodeError as e:
        raise _CliError(f"{path}: invalid JSON at line {e.lineno}: {e.msg}")
    designs = doc.get("designs") if isinstance(doc, dict) else doc
    if not isinstance(designs, list) or not designs:
        raise _CliError(f"{path}: expected a nonempty list of designs")
    out = []
    for i, entry in enumerate(designs):
        where = f"{path}: design {i + 1}"
        if not isinstance(entry, dict):
            raise _CliError(f"{where}: expected an object")
        name = str(entry.get("name", f"design{i + 1}"))
        estimators = entry.get("estimators")
        if estimators is not None:
            if not isinstance(estimators, list):
                raise _CliError(f"{where}: estimators must be a list of method tokens")
            methods = _parse_methods(",".join(str(t) for t in estimators))
        else:
            methods = default_estimators
        out.append((name, _design_fields(entry, where), methods))
    return out


def cmd_simulate(args) -> int:
    default_methods = _parse_methods(args.estimators)
    if (args.preset is None) == (args.config is None):
        raise _CliError("exactly one of --preset or --config is required")
    if args.preset is not None:
        if args.preset not in PRESETS:
            raise _CliError(
                f"unknown preset {args.preset!r}; valid presets: "
                f"{', '.join(sorted(PRESETS))}"
            )
        if args.na is None or args.nb is None or args.alpha is None:
            raise _CliError("--preset requires --na, --nb and --alpha")
        try:
            design = design_from_preset(
                args.preset,
                model=args.model,
                n_a=args.na,
                n_b=args.nb,
                alpha=args.alpha,
                replicates=args.replicates,
                seed=args.seed,
            )
        except DualrecError as e:
            raise _CliError(str(e))
        jobs = [(args.preset, design, default_methods)]
    else:
        jobs = _load_config(args.config, default_methods)

    fit_config = FitConfig(multistart=args.multistart, seed=args.seed)
    rows = []
    any_failed = False
    for name, design, methods in jobs:
        for method in methods:
            try:
                summary = run_study(
                    design, [method], fit_config=fit_config, threads=args.threads
                )
            except DualrecError as e:
                any_failed = True
                rows.append(
                    {
                        "design": name,
                        "estimator": method,
                        "failures": design.replicates,
                        "error": f"{type(e).__name__}: {e}",
                    }
                )
                continue
            study = summary.estimators[method]
            rows.append(
                {
                    "design": name,
                    "estimator": method,
                    "mean_na": round(study.mean_n_a, 4),
                    "rrmse_na": round(study.rrmse_n_a, 4),
                    "ci_lo": round(study.ci_n_a[0], 4),
                    "ci_hi": round(study.ci_n_a[1], 4),
                    "mean_alpha": ""
                    if study.mean_alpha is None
                    else round(study.mean_alpha, 4),
                    "failures": study.failures,
                }
            )
    sys.stdout.write(_study_csv(rows))
    for row in rows:
        if "error" in row:
            print(f"# {row['design']}/{row['estimator']}: {row['error']}")
    if args.out:
        _write_out(args.out, rows, _study_csv)
    return 2 if any_failed else 0


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="dualrec", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    est = sub.add_parser("estimate", help="estimate population sizes from a dataset")
    est.add_argument("--data", required=True, help="CSV or JSON dataset path")
    est.add_argument(
        "--method",
        default=None,
        help=f"comma-separated method tokens ({', '.join(sorted(METHOD_TOKENS))})",
    )
    est.add_argument("--dependent", default=None, help="stratum label to treat as A")
    est.add_argument("--ratio", type=float, default=None, help="known size ratio n_a/n_b")
    est.add_argument(
        "--bootstrap", type=int, default=0, metavar="B", help="bootstrap resample count"
    )
    est.add_argument(
        "--scheme",
        choices=("parametric", "nonparametric"),
        default="parametric",
        help="bootstrap resampling scheme",
    )
    est.add_argument("--seed", type=int, default=0, help="bootstrap seed")
    est.add_argument("--out", default=None, help="write report to .json or .csv")
    est.add_argument(
        "--dump", action="store_true", help="echo the parsed dataset as canonical CSV"
    )
    est.set_defaults(func=cmd_estimate)

    simp = sub.add_parser("simulate", help="run replicate studies over designs")
    simp.add_argument("--preset", default=None, help="design preset (P1..P6)")
    simp.add_argument("--config", default=None, help="JSON file of design points")
    simp.add_argument("--model", choices=("I", "II"), default="I")
    simp.add_argument("--na", type=int, default=None, help="true size of stratum A")
    simp.add_argument("--nb", type=int, default=None, help="true size of stratum B")
    simp.add_argument("--alpha", type=float, default=None, help="dependence level")
    simp.add_argument("--replicates", type=int, default=5000)
    simp.add_argument("--seed", type=int, default=0)
    simp.add_argument(
        "--estimators",
        default="mme1",
        help="comma-separated method tokens applied to each design",
    )
    simp.add_argument(
        "--multistart", type=int, default=3, help="likelihood fit multistart count"
    )
    simp.add_argument("--threads", type=int, default=1, help="worker process cap")
    simp.add_argument("--out", default=None, help="write rows to .json or .csv")
    simp.set_defaults(func=cmd_simulate)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except _CliError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
