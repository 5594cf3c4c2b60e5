"""Command-line interface.

Exit codes: 0 success, 2 unreadable input (CSV or model JSON), 3 invalid
flags, 4 degenerate data. Diagnostics go to standard error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
import warnings
from pathlib import Path
from typing import List, Optional

import numpy as np

from .core import ClusterModel, MaxLinearModel, ObservationMatrix, ValidationError
from .maxlinear import CONSTELLATIONS, random_model, simulate, spectral_measure
from .rng import derive_rng
from .simstudy import StudyConfig, run_study
from .skmeans import KMeansConfig, KTooLarge, elbow_scan, renormalize_center, spherical_kmeans
from .transform import NORMS, EmptySelection, fit_pipeline

EXIT_PARSE = 2
EXIT_FLAGS = 3
EXIT_DEGENERATE = 4


class CliError(Exception):
    def __init__(self, code: int, message: str):
        self.code = code
        super().__init__(message)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_FLAGS, f"{self.prog}: error: {message}\n")


def read_csv(path: str, label_col: Optional[str] = None) -> ObservationMatrix:
    """Read a headed, comma-separated file of numbers, with one optional label column."""
    try:
        with open(path, newline="", encoding="utf-8") as fh:
            rows = list(csv.reader(fh))
    except (OSError, UnicodeDecodeError) as exc:
        raise CliError(EXIT_PARSE, f"cannot read {path}: {exc}") from None
    if not rows:
        raise CliError(EXIT_PARSE, f"{path}: empty file, a header row is required")
    header = [h.strip() for h in rows[0]]
    label_idx = None
    if label_col is not None:
        if label_col not in header:
            raise CliError(EXIT_PARSE, f"{path}: MissingLabelColumn: no column named {label_col!r}")
        label_idx = header.index(label_col)
    value_idx = [i for i in range(len(header)) if i != label_idx]
    data, labels = [], []
    for r, row in enumerate(rows[1:], start=2):
        if not row or all(not cell.strip() for cell in row):
            continue
        if len(row) != len(header):
            raise CliError(EXIT_PARSE, f"{path}: row {r} has {len(row)} fields, header has {len(header)}")
        values = []
        for i in value_idx:
            cell = row[i].strip()
            try:
                v = float(cell)
            except ValueError:
                raise CliError(EXIT_PARSE, f"{path}: row {r}, column {i + 1} ({header[i]!r}): "
                                           f"not a number: {cell!r}") from None
            if not math.isfinite(v):
                raise CliError(EXIT_PARSE, f"{path}: row {r}, column {i + 1} ({header[i]!r}): "
                                           f"non-finite value {cell!r}")
            values.append(v)
        data.append(values)
        if label_idx is not None:
            labels.append(row[label_idx])
    columns = [header[i] for i in value_idx]
    if len(columns) < 2:
        raise CliError(EXIT_DEGENERATE, f"{path}: need at least 2 numeric columns, got {len(columns)}")
    if len(data) < 2:
        raise CliError(EXIT_DEGENERATE, f"{path}: need at least 2 data rows, got {len(data)}")
    return ObservationMatrix(np.array(data), labels=labels if label_idx is not None else None,
                             columns=columns)


def _open_out(path: Optional[str]):
    if path is None or path == "-":
        return sys.stdout
    return open(path, "w", newline="", encoding="utf-8")


def _write_text(path: Optional[str], text: str) -> None:
    fh = _open_out(path)
    try:
        fh.write(text)
    finally:
        if fh is not sys.stdout:
            fh.close()


def _dump_json(path: Optional[str], obj) -> None:
    _write_text(path, json.dumps(obj, indent=2) + "\n")


def _selection(args, default=(0.1, None)):
    if args.fraction is not None and args.extremes is not None:
        raise CliError(EXIT_FLAGS, "--fraction and --extremes are mutually exclusive")
    if args.fraction is None and args.extremes is None:
        return default
    if args.fraction is not None and not 0 < args.fraction <= 1:
        raise CliError(EXIT_FLAGS, f"--fraction must lie in (0, 1], got {args.fraction}")
    if args.extremes is not None and args.extremes < 1:
        raise CliError(EXIT_FLAGS, f"--extremes must be positive, got {args.extremes}")
    return args.fraction, args.extremes


def _kmeans_config(args, k: int) -> KMeansConfig:
    try:
        return KMeansConfig(k, restarts=args.restarts, max_iters=args.max_iters, seed=args.seed)
    except ValidationError as exc:
        raise CliError(EXIT_FLAGS, str(exc)) from None


def _angular_sample(args):
    obs = read_csv(args.input, getattr(args, "label_col", None))
    fraction, count = _selection(args)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        try:
            sample = fit_pipeline(obs, fraction=fraction, count=count, norm=args.norm, negate=args.negate)
        except EmptySelection as exc:
            raise CliError(EXIT_DEGENERATE, str(exc)) from None
    for w in caught:
        print(f"warning: {w.message}", file=sys.stderr)
    if len(caught) == obs.d:
        raise CliError(EXIT_DEGENERATE, "every column is constant")
    return obs, sample


def _fit(sample, cfg):
    try:
        return spherical_kmeans(sample, cfg)
    except KTooLarge as exc:
        raise CliError(EXIT_FLAGS, str(exc)) from None


def fit_report(obs: ObservationMatrix, sample, fit: ClusterModel) -> dict:
    return {
        "k": fit.k,
        "centers": fit.centers.tolist(),
        "renormalized_centers": [renormalize_center(c).tolist() for c in fit.centers],
        "weights": fit.weights.tolist(),
        "objective": fit.objective,
        "threshold": sample.threshold,
        "n": obs.n,
        "m": sample.m,
        "columns": list(obs.columns),
        "labels": fit.labels.tolist(),
        "source_rows": sample.source_rows.tolist(),
    }


def cluster_model_from_report(report: dict) -> ClusterModel:
    """Rebuild the ClusterModel stored in a ``fit`` JSON report."""
    return ClusterModel(
        np.array(report["centers"]), np.array(report["weights"]),
        np.array(report["labels"]), report["objective"],
    )


def cmd_fit(args) -> None:
    obs, sample = _angular_sample(args)
    fit = _fit(sample, _kmeans_config(args, args.k))
    _dump_json(args.out, fit_report(obs, sample, fit))


def cmd_elbow(args) -> None:
    if args.kmin < 1 or args.kmax < args.kmin:
        raise CliError(EXIT_FLAGS, f"need 1 <= --kmin <= --kmax, got {args.kmin}, {args.kmax}")
    obs, sample = _angular_sample(args)
    if args.kmax > sample.m:
        raise CliError(EXIT_FLAGS, f"--kmax {args.kmax} exceeds the {sample.m} selected extremes")
    scan = elbow_scan(sample, args.kmin, args.kmax, _kmeans_config(args, args.kmin))
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["k", "objective"])
    for k, obj in scan:
        w.writerow([k, repr(obj)])
    _write_text(args.out, buf.getvalue())


def cmd_classify(args) -> None:
    obs, sample = _angular_sample(args)
    fit = _fit(sample, _kmeans_config(args, args.k))
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["label", "cluster", "norm"])
    for row, cluster, norm in zip(sample.source_rows, fit.labels, sample.norms):
        label = obs.labels[row] if obs.labels is not None else int(row)
        w.writerow([label, int(cluster), repr(float(norm))])
    _write_text(args.out, buf.getvalue())


def _sidecar(out: str, suffix: str) -> Path:
    p = Path(out)
    return p.with_name(p.stem + suffix)


def cmd_simulate(args) -> None:
    if (args.constellation is None) == (args.model is None):
        raise CliError(EXIT_FLAGS, "give exactly one of --constellation and --model")
    if args.n < 1:
        raise CliError(EXIT_FLAGS, f"--n must be positive, got {args.n}")
    if args.model is not None:
        try:
            with open(args.model, encoding="utf-8") as fh:
                model = MaxLinearModel.from_json(json.load(fh))
        except (OSError, ValueError, KeyError, TypeError) as exc:
            raise CliError(EXIT_PARSE, f"invalid model file {args.model}: {exc}") from None
    else:
        model = random_model(args.constellation, derive_rng(args.seed, "model", 0))
    obs = simulate(model, args.n, derive_rng(args.seed, "simulate", 0))
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(obs.columns)
    for row in obs.data:
        w.writerow([repr(float(v)) for v in row])
    _write_text(args.out, buf.getvalue())
    if args.constellation is not None and args.out not in (None, "-"):
        _dump_json(str(_sidecar(args.out, ".model.json")), model.to_json())
        _dump_json(str(_sidecar(args.out, ".spectral.json")), spectral_measure(model).to_json())


def cmd_evaluate(args) -> None:
    fraction, count = _selection(args, default=(None, 100))
    if args.models < 1 or args.n < 2:
        raise CliError(EXIT_FLAGS, "--models must be >= 1 and --n >= 2")
    if args.k is not None and args.k < 1:
        raise CliError(EXIT_FLAGS, f"--k must be positive, got {args.k}")
    if count is not None and count > args.n:
        raise CliError(EXIT_FLAGS, f"--extremes {count} exceeds --n {args.n}")
    cfg = StudyConfig(
        constellation=args.constellation, models=args.models, n=args.n, extremes=count,
        fraction=fraction, k=args.k, restarts=args.restarts, seed=args.seed, norm=args.norm,
    )
    try:
        report = run_study(cfg, jobs=args.jobs)
    except KTooLarge as exc:
        raise CliError(EXIT_FLAGS, str(exc)) from None
    _dump_json(args.out, report)


def _add_selection(p, with_negate=True):
    p.add_argument("--fraction", type=float, help="share of rows with the largest norms to keep (default 0.1)")
    p.add_argument("--extremes", type=int, help="number of rows with the largest norms to keep")
    p.add_argument("--norm", choices=sorted(NORMS), default="l2")
    if with_negate:
        p.add_argument("--negate", action="store_true", help="multiply all values by -1 first (losses)")


def _add_kmeans(p):
    p.add_argument("--restarts", type=int, default=100)
    p.add_argument("--max-iters", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="extremal-kmeans", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("fit", help="cluster the extremes of a CSV sample")
    p.add_argument("input")
    _add_selection(p)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--label-col")
    _add_kmeans(p)
    p.add_argument("--out")
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("elbow", help="minimized objective for a range of k")
    p.add_argument("input")
    _add_selection(p)
    p.add_argument("--kmin", type=int, default=1)
    p.add_argument("--kmax", type=int, required=True)
    p.add_argument("--label-col")
    _add_kmeans(p)
    p.add_argument("--out")
    p.set_defaults(func=cmd_elbow)

    p = sub.add_parser("classify", help="cluster membership of every selected extreme")
    p.add_argument("input")
    _add_selection(p)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--label-col")
    _add_kmeans(p)
    p.add_argument("--out")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("simulate", help="sample from a max-linear model")
    p.add_argument("--constellation", choices=CONSTELLATIONS)
    p.add_argument("--model", help="JSON file {\"factors\": [[...], ...]} (d rows, k columns)")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("evaluate", help="simulation study against the true spectral measure")
    p.add_argument("--constellation", choices=CONSTELLATIONS, required=True)
    p.add_argument("--models", type=int, default=100)
    p.add_argument("--n", type=int, default=1000)
    _add_selection(p, with_negate=False)  # default: --extremes 100
    p.add_argument("--k", type=int, help="clusters to fit (default: true number of factors)")
    p.add_argument("--restarts", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--out")
    p.set_defaults(func=cmd_evaluate)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "seed", 0) < 0:
        print("error: --seed must be nonnegative", file=sys.stderr)
        return EXIT_FLAGS
    try:
        args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    return 0


if __name__ == "__main__":
    sys.exit(main())
