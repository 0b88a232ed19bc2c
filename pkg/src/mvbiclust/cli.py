"""Batch command-line interface.

Subcommands: `run` fits views and writes an output bundle; `synth` writes a
planted dataset with ground truth; `score` re-scores saved biclusters against
views (and optionally truth); `sweep` tabulates pipeline results over a grid
of coupling weights or stability thresholds.

Exit codes: 0 success, 1 usage error, 2 data error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import platform
import sys
import time
from dataclasses import asdict
from pathlib import Path

import numpy as np
import scipy

from . import __version__
from .bisilhouette import bisilhouette_detail
from .errors import DataError, LengthMismatchError, MvbError, NumericalError
from .fileio import (
    biclusters_to_json,
    file_digest,
    load_biclusters,
    load_view,
    plot_data_to_csv,
    preprocess,
    save_view,
    scores_to_csv,
    selection_to_csv,
    write_bundle,
)
from .metrics import multiview_scores
from .pipeline import run as run_pipeline
from .pipeline import sweep_restriction, sweep_threshold
from .seeds import rng_for
from .synthetic import generate
from .types import (
    Bicluster,
    PipelineConfig,
    RestrictionWeights,
    SyntheticConfig,
)


def _versions() -> dict:
    return {
        "python": platform.python_version(),
        "numpy": np.__version__,
        "scipy": scipy.__version__,
        "mvbiclust": __version__,
    }


def _pair_list_matrix(path: str, n: int, name: str) -> np.ndarray:
    """Weight matrix from a pair-list file: lines of `view_a,view_b,weight`
    with 1-based view numbers, a < b."""
    mat = np.zeros((n, n))
    try:
        text = Path(path).read_text()
    except OSError as e:
        raise DataError(f"--{name}: cannot read {path}: {e}") from None
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        parts = [p.strip() for p in line.split(",")]
        if len(parts) != 3:
            raise DataError(
                f"--{name} file {path}, line {lineno}: expected `a,b,weight`, got {line!r}"
            )
        try:
            a, b, w = int(parts[0]), int(parts[1]), float(parts[2])
        except ValueError:
            raise DataError(
                f"--{name} file {path}, line {lineno}: cannot parse {line!r}"
            ) from None
        if not (1 <= a < b <= n):
            raise DataError(
                f"--{name} file {path}, line {lineno}: pair ({a}, {b}) is not a "
                f"valid 1-based pair for {n} views (need a < b)"
            )
        mat[a - 1, b - 1] = w
    return mat


def _weight_matrix(arg: str | None, n: int, name: str) -> np.ndarray:
    if arg is None:
        return np.zeros((n, n))
    try:
        value = float(arg)
    except ValueError:
        return _pair_list_matrix(arg, n, name)
    return value * np.triu(np.ones((n, n)), k=1)


def _load_views(paths, allow_shift: bool, transpose: bool):
    views = []
    digests = {}
    for p in paths:
        x, _ = load_view(p, allow_negative_shift=allow_shift)
        views.append(x.T if transpose else x)
        digests[str(p)] = file_digest(p)
    return views, digests


def _to_original(biclusters, col_maps):
    out = []
    for v, bv in enumerate(biclusters):
        mapped = []
        for b in bv:
            if b.is_empty:
                mapped.append(b)
            else:
                mapped.append(
                    Bicluster(b.rows, frozenset(int(col_maps[v][c]) for c in b.cols))
                )
        out.append(tuple(mapped))
    return tuple(out)


def _add_run_options(p: argparse.ArgumentParser) -> None:
    p.add_argument("--k-min", type=int, default=3, help="smallest bicluster count tried")
    p.add_argument("--k-max", type=int, default=8, help="largest count in the initial range")
    p.add_argument("--omega", type=float, default=0.4,
                   help="stability threshold (default suits synthetic data; tune or sweep for real data)")
    p.add_argument("--alpha", type=float, default=0.9, help="subsample fraction for stability refits")
    p.add_argument("--n-s", type=int, default=5, help="number of stability subsamples")
    p.add_argument("--n-r", type=int, default=10, help="number of shuffled refits for the spurious filter")
    p.add_argument("--distance", choices=["euclidean", "cosine", "manhattan"], default="euclidean")
    p.add_argument("--max-iters", type=int, default=1000)
    p.add_argument("--tol", type=float, default=1e-6)
    p.add_argument("--seed", type=int, default=0)


def _add_io_options(p: argparse.ArgumentParser) -> None:
    p.add_argument("--views", nargs="+", required=True, metavar="FILE",
                   help="one CSV file per view")
    p.add_argument("--transpose", action="store_true",
                   help="cluster the transposed views (swaps the roles of --phi and --psi)")
    p.add_argument("--allow-negative-shift", action="store_true",
                   help="shift views with negative entries up by their minimum instead of rejecting them")
    p.add_argument("--variance-floor", type=float, default=None,
                   help="also drop columns with variance below this floor")


def _add_weight_options(p: argparse.ArgumentParser) -> None:
    for name, doc in (("phi", "row-factor"), ("xi", "mixing-matrix"), ("psi", "column-factor")):
        p.add_argument(f"--{name}", default=None, metavar="W|FILE",
                       help=f"{doc} coupling weight: scalar applied to all view pairs, "
                            "or a pair-list file of `a,b,weight` lines")


def _config_from_args(args) -> PipelineConfig:
    return PipelineConfig(
        k_min=args.k_min,
        k_max=args.k_max,
        tol=args.tol,
        max_iters=args.max_iters,
        n_shuffles=args.n_r,
        n_subsamples=args.n_s,
        subsample_rate=args.alpha,
        stability_threshold=args.omega,
        distance=args.distance,
        seed=args.seed,
    )


def _weights_from_args(args, n: int) -> RestrictionWeights:
    phi_arg, psi_arg = args.phi, args.psi
    if args.transpose:
        # rows and columns trade places, so the user's row coupling must now
        # act on column factors and vice versa
        phi_arg, psi_arg = psi_arg, phi_arg
    return RestrictionWeights(
        phi=_weight_matrix(phi_arg, n, "phi"),
        xi=_weight_matrix(args.xi, n, "xi"),
        psi=_weight_matrix(psi_arg, n, "psi"),
    )


def _cmd_run(args) -> int:
    t_start = time.perf_counter()
    raw_views, digests = _load_views(args.views, args.allow_negative_shift, args.transpose)
    views, col_maps = preprocess(raw_views, args.variance_floor)
    weights = _weights_from_args(args, len(views))
    cfg = _config_from_args(args)

    t_fit = time.perf_counter()
    result = run_pipeline(views, weights, cfg)
    fit_seconds = time.perf_counter() - t_fit

    files = {
        "biclusters.json": biclusters_to_json(result.biclusters, col_maps),
        "selection.csv": selection_to_csv(result.selection, len(views)),
    }
    for v, x in enumerate(views):
        _, _, detail = bisilhouette_detail(
            x,
            result.biclusters[v],
            metric=cfg.distance,
            rng=rng_for(cfg.seed, 2, result.selection.selected_k, v),
        )
        files[f"bisilhouette_plot_view{v + 1}.csv"] = plot_data_to_csv(
            result.score.per_view[v], detail
        )

    eval_report = None
    if args.truth:
        truth = load_biclusters(args.truth)
        if len(truth) != len(views):
            raise LengthMismatchError(
                f"truth file has {len(truth)} views, data has {len(views)}"
            )
        found = _to_original(result.biclusters, col_maps)
        eval_report = multiview_scores(found, truth, rows_only=args.rows_only)
        files["scores.csv"] = scores_to_csv(eval_report)

    manifest = {
        "command": "run",
        "config": asdict(cfg),
        "weights": {
            "phi": weights.phi.tolist(),
            "xi": weights.xi.tolist(),
            "psi": weights.psi.tolist(),
        },
        "transpose": bool(args.transpose),
        "variance_floor": args.variance_floor,
        "rows_only": bool(args.rows_only),
        "inputs": digests,
        "seed": args.seed,
        "versions": _versions(),
        "selected_k": result.selection.selected_k,
        "capped": result.selection.capped,
        "timings": {
            "fit_seconds": fit_seconds,
            "total_seconds": time.perf_counter() - t_start,
        },
    }
    written = write_bundle(args.out, files, manifest)

    counts = [sum(1 for b in bv if not b.is_empty) for bv in result.biclusters]
    print(f"selected k: {result.selection.selected_k} "
          f"(bisilhouette {result.score.overall:.6f}"
          f"{', range cap reached' if result.selection.capped else ''})")
    for v, c in enumerate(counts):
        print(f"view {v + 1}: {c} non-empty biclusters")
    if eval_report is not None:
        print(f"relevance {eval_report.relevance:.6f}  recovery {eval_report.recovery:.6f}  "
              f"f-score {eval_report.f_score:.6f}  csr {eval_report.csr:.6f}")
    print(f"wrote {', '.join(written)} to {args.out}")
    return 0


def _cmd_synth(args) -> int:
    t_start = time.perf_counter()
    cols = [int(c) for c in args.cols.split(",") if c.strip() != ""]
    if len(cols) == 1 and args.views > 1:
        cols = cols * args.views
    if len(cols) != args.views:
        raise DataError(
            f"--cols lists {len(cols)} column counts but --views asks for {args.views}"
        )
    cfg = SyntheticConfig(
        n_rows=args.rows,
        n_cols=tuple(cols),
        k=args.k,
        block_mean=args.mu,
        block_std=args.sigma_b,
        noise_std=args.sigma,
        overlap_rate=args.overlap,
        unassigned_rate=args.nonexhaustive,
        paper_sizing=args.paper_sizing,
        seed=args.seed,
    )
    data = generate(cfg)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    view_names = []
    for v, x in enumerate(data.views):
        name = f"view{v + 1}.csv"
        save_view(out / name, x)
        view_names.append(name)
    files = {"truth.json": biclusters_to_json(data.truth)}
    manifest = {
        "command": "synth",
        "config": asdict(cfg),
        "versions": _versions(),
        "views_written": view_names,
        "timings": {"total_seconds": time.perf_counter() - t_start},
    }
    written = write_bundle(args.out, files, manifest)
    print(f"wrote {', '.join(view_names + written)} to {args.out}")
    return 0


def _cmd_score(args) -> int:
    t_start = time.perf_counter()
    views, digests = _load_views(args.views, args.allow_negative_shift, args.transpose)
    bics = load_biclusters(args.biclusters)
    if len(bics) != len(views):
        raise LengthMismatchError(
            f"biclusters file has {len(bics)} views, data has {len(views)}"
        )
    for v, (x, bv) in enumerate(zip(views, bics)):
        for b in bv:
            if b.rows and max(b.rows) >= x.shape[0]:
                raise DataError(f"view {v + 1}: bicluster row index out of range")
            if b.cols and max(b.cols) >= x.shape[1]:
                raise DataError(f"view {v + 1}: bicluster column index out of range")

    per_view = []
    details = []
    for v, x in enumerate(views):
        overall, _, detail = bisilhouette_detail(
            x, bics[v], metric=args.distance, rng=rng_for(args.seed, v)
        )
        per_view.append(overall)
        details.append(detail)
    mean_score = float(np.mean(per_view))
    for v, s in enumerate(per_view):
        print(f"view {v + 1} bisilhouette: {s:.6f}")
    print(f"mean bisilhouette: {mean_score:.6f}")

    eval_report = None
    if args.truth:
        truth = load_biclusters(args.truth)
        if len(truth) != len(views):
            raise LengthMismatchError(
                f"truth file has {len(truth)} views, data has {len(views)}"
            )
        eval_report = multiview_scores(bics, truth, rows_only=args.rows_only)
        print(f"relevance {eval_report.relevance:.6f}  recovery {eval_report.recovery:.6f}  "
              f"f-score {eval_report.f_score:.6f}  csr {eval_report.csr:.6f}")

    if args.out:
        files = {}
        header = ["view", "bisilhouette"]
        lines = [",".join(header)]
        for v, s in enumerate(per_view):
            lines.append(f"{v + 1},{repr(float(s))}")
        lines.append(f"mean,{repr(mean_score)}")
        files["bisilhouette.csv"] = "\n".join(lines) + "\n"
        for v in range(len(views)):
            files[f"bisilhouette_plot_view{v + 1}.csv"] = plot_data_to_csv(
                per_view[v], details[v]
            )
        if eval_report is not None:
            files["scores.csv"] = scores_to_csv(eval_report)
        manifest = {
            "command": "score",
            "distance": args.distance,
            "rows_only": bool(args.rows_only),
            "transpose": bool(args.transpose),
            "inputs": {**digests, str(args.biclusters): file_digest(args.biclusters)},
            "seed": args.seed,
            "versions": _versions(),
            "timings": {"total_seconds": time.perf_counter() - t_start},
        }
        written = write_bundle(args.out, files, manifest)
        print(f"wrote {', '.join(written)} to {args.out}")
    return 0


def _cmd_sweep(args) -> int:
    t_start = time.perf_counter()
    raw_views, digests = _load_views(args.views, args.allow_negative_shift, args.transpose)
    views, _ = preprocess(raw_views, args.variance_floor)
    weights = _weights_from_args(args, len(views))
    cfg = _config_from_args(args)
    try:
        values = [float(s) for s in args.values.split(",") if s.strip() != ""]
    except ValueError:
        raise DataError(f"--values: cannot parse {args.values!r} as a comma list of numbers") from None
    if not values:
        raise DataError("--values lists no values")

    param = args.param
    if args.transpose and param in ("phi", "psi"):
        # same role swap as the base weights
        param = "psi" if param == "phi" else "phi"
    if param == "omega":
        rows = sweep_threshold(views, values, weights, cfg)
    else:
        rows = sweep_restriction(views, values, cfg, which=param, base=weights)

    n_views = len(views)
    header = (["value", "bisilhouette", "selected_k"]
              + [f"count_view{v + 1}" for v in range(n_views)]
              + ["aligned"])
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(
            [repr(row.value), repr(row.score), str(row.selected_k)]
            + [str(c) for c in row.counts]
            + ["true" if row.aligned else "false"]
        ))
    best = max(rows, key=lambda r: r.score)
    files = {"sweep.csv": "\n".join(lines) + "\n"}
    manifest = {
        "command": "sweep",
        "param": args.param,
        "values": values,
        "config": asdict(cfg),
        "transpose": bool(args.transpose),
        "inputs": digests,
        "seed": args.seed,
        "versions": _versions(),
        "best_value": best.value,
        "timings": {"total_seconds": time.perf_counter() - t_start},
    }
    written = write_bundle(args.out, files, manifest)
    print(f"best {args.param}: {best.value} (bisilhouette {best.score:.6f})")
    print(f"wrote {', '.join(written)} to {args.out}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mvbiclust",
        description="Multi-view biclustering via coupled matrix tri-factorisation.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="fit views and write an output bundle")
    _add_io_options(p_run)
    _add_weight_options(p_run)
    _add_run_options(p_run)
    p_run.add_argument("--truth", default=None, metavar="FILE",
                       help="ground-truth biclusters.json for extrinsic scoring")
    p_run.add_argument("--rows-only", action="store_true",
                       help="score against truth on row memberships alone")
    p_run.add_argument("--out", required=True, metavar="DIR")
    p_run.set_defaults(func=_cmd_run)

    p_synth = sub.add_parser("synth", help="write a planted dataset with ground truth")
    p_synth.add_argument("--rows", type=int, required=True)
    p_synth.add_argument("--views", type=int, required=True, help="number of views")
    p_synth.add_argument("--cols", required=True,
                         help="comma list of column counts, one per view (a single value broadcasts)")
    p_synth.add_argument("--k", type=int, required=True)
    p_synth.add_argument("--mu", type=float, default=5.0, help="block mean")
    p_synth.add_argument("--sigma-b", type=float, default=1.0, help="within-block std")
    p_synth.add_argument("--sigma", type=float, default=5.0, help="noise std")
    p_synth.add_argument("--overlap", type=float, default=0.0)
    p_synth.add_argument("--nonexhaustive", type=float, default=0.0)
    p_synth.add_argument("--paper-sizing", action="store_true",
                         help="alternate block sizing that reserves one member per block")
    p_synth.add_argument("--seed", type=int, default=0)
    p_synth.add_argument("--out", required=True, metavar="DIR")
    p_synth.set_defaults(func=_cmd_synth)

    p_score = sub.add_parser("score", help="re-score saved biclusters against views")
    p_score.add_argument("--views", nargs="+", required=True, metavar="FILE")
    p_score.add_argument("--biclusters", required=True, metavar="FILE")
    p_score.add_argument("--truth", default=None, metavar="FILE")
    p_score.add_argument("--distance", choices=["euclidean", "cosine", "manhattan"],
                         default="euclidean")
    p_score.add_argument("--rows-only", action="store_true")
    p_score.add_argument("--transpose", action="store_true")
    p_score.add_argument("--allow-negative-shift", action="store_true")
    p_score.add_argument("--seed", type=int, default=0)
    p_score.add_argument("--out", default=None, metavar="DIR")
    p_score.set_defaults(func=_cmd_score)

    p_sweep = sub.add_parser("sweep", help="tabulate runs over a hyperparameter grid")
    _add_io_options(p_sweep)
    _add_weight_options(p_sweep)
    _add_run_options(p_sweep)
    p_sweep.add_argument("--param", choices=["phi", "psi", "omega"], required=True)
    p_sweep.add_argument("--values", required=True,
                         help="comma list of values to sweep")
    p_sweep.add_argument("--out", required=True, metavar="DIR")
    p_sweep.set_defaults(func=_cmd_sweep)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        # argparse exits 2 on usage problems and 0 for --help
        return 0 if e.code == 0 else 1
    try:
        return args.func(args)
    except NumericalError as e:
        print(f"error: {e}", file=sys.stderr)
        return 3
    except DataError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except MvbError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
