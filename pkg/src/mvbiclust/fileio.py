"""File formats and output bundles.

Views travel as comma-separated numeric text, one matrix row per line, with an
optional single header line (auto-detected: any non-numeric field). Structured
results go to JSON, tabular ones to CSV. All indices in files are 1-based;
everything in memory is 0-based. Floats are serialized with repr so identical
results produce identical bytes.

Output bundles are written file-by-file via write-to-temp-then-rename, with
the manifest landing first so a bundle is never left without one.
"""

from __future__ import annotations

import hashlib
import json
import math
import os
from pathlib import Path
from typing import Sequence

import numpy as np

from .errors import (
    DataError,
    EmptyViewError,
    NegativeEntryError,
    ParseError,
    RaggedRowsError,
)
from .types import Bicluster, EvalReport, SelectionTrace


def load_view(path, allow_negative_shift: bool = False) -> tuple[np.ndarray, list[str] | None]:
    """Parse one view file; returns (matrix, header or None).

    Negative values are rejected unless allow_negative_shift is set, in which
    case the whole matrix is shifted up by its minimum (a deviation from raw
    inputs, so it is opt-in). Error positions are reported 1-based.
    """
    lines_all = Path(path).read_text().splitlines()
    numbered = [(i + 1, ln) for i, ln in enumerate(lines_all) if ln.strip() != ""]
    if not numbered:
        raise EmptyViewError(f"{path} contains no data")

    def parse_line(lineno: int, line: str) -> list[float]:
        vals = []
        for c, tok in enumerate(line.split(","), start=1):
            try:
                val = float(tok)
            except ValueError:
                raise ParseError(lineno, c, tok.strip()) from None
            if not math.isfinite(val):
                raise ParseError(lineno, c, tok.strip())
            vals.append(val)
        return vals

    header = None
    rows: list[list[float]] = []
    expected = None
    try:
        first_vals = parse_line(*numbered[0])
        rows.append(first_vals)
        expected = len(first_vals)
    except ParseError:
        header = [t.strip() for t in numbered[0][1].split(",")]
    for lineno, line in numbered[1:]:
        vals = parse_line(lineno, line)
        if expected is None:
            expected = len(vals)
        elif len(vals) != expected:
            raise RaggedRowsError(lineno, expected, len(vals))
        rows.append(vals)
    if not rows:
        raise EmptyViewError(f"{path} has a header but no data rows")

    x = np.array(rows, dtype=np.float64)
    lo = float(x.min())
    if lo < 0:
        if allow_negative_shift:
            x = x - lo
        else:
            raise NegativeEntryError(
                f"{path} contains negative values (minimum {lo}); "
                "pass --allow-negative-shift to shift the view up by its minimum"
            )
    return x, header


def save_view(path, x: np.ndarray) -> None:
    lines = [",".join(repr(float(v)) for v in row) for row in np.asarray(x)]
    _atomic_write(Path(path), "\n".join(lines) + "\n")


def preprocess(
    views: Sequence[np.ndarray],
    variance_floor: float | None = None,
) -> tuple[list[np.ndarray], list[np.ndarray]]:
    """Drop unusable columns; returns (filtered views, kept-column index maps).

    All-zero columns are always dropped; with a variance floor, columns whose
    variance falls below it go too. The map for each view sends kept-column
    position to original column index, so downstream reports can name original
    columns.
    """
    kept_views, maps = [], []
    for v, x in enumerate(views):
        keep = ~np.all(x == 0, axis=0)
        if variance_floor is not None:
            keep &= x.var(axis=0) >= variance_floor
        idx = np.flatnonzero(keep)
        if idx.size == 0:
            raise EmptyViewError(f"view {v}: preprocessing dropped every column")
        kept_views.append(x[:, idx])
        maps.append(idx)
    return kept_views, maps


def _atomic_write(path: Path, text: str) -> None:
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_text(text)
    os.replace(tmp, path)


def file_digest(path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def _fmt(x: float) -> str:
    return repr(float(x))


def biclusters_to_json(
    biclusters: Sequence[Sequence[Bicluster]],
    col_maps: Sequence[np.ndarray] | None = None,
) -> str:
    views = []
    for v, bv in enumerate(biclusters):
        entries = []
        for b in bv:
            rows = sorted(r + 1 for r in b.rows)
            if col_maps is not None:
                cols = sorted(int(col_maps[v][c]) + 1 for c in b.cols)
            else:
                cols = sorted(c + 1 for c in b.cols)
            entries.append({"rows": rows, "cols": cols})
        views.append(entries)
    return json.dumps({"views": views}, indent=2, sort_keys=True) + "\n"


def load_biclusters(path) -> tuple[tuple[Bicluster, ...], ...]:
    """Read a biclusters.json file back into 0-based bicluster tuples."""
    try:
        payload = json.loads(Path(path).read_text())
    except json.JSONDecodeError as e:
        raise DataError(f"{path}: not valid JSON ({e})") from None
    if not isinstance(payload, dict) or "views" not in payload:
        raise DataError(f"{path}: expected an object with a 'views' key")
    out = []
    for entries in payload["views"]:
        bv = []
        for entry in entries:
            rows = [int(r) - 1 for r in entry["rows"]]
            cols = [int(c) - 1 for c in entry["cols"]]
            if any(i < 0 for i in rows) or any(j < 0 for j in cols):
                raise DataError(f"{path}: indices must be 1-based positive")
            bv.append(Bicluster.of(rows, cols))
        out.append(tuple(bv))
    return tuple(out)


def selection_to_csv(trace: SelectionTrace, n_views: int) -> str:
    header = ["k", "bisilhouette"] + [f"count_view{v + 1}" for v in range(n_views)]
    lines = [",".join(header)]
    for i, k in enumerate(trace.ks):
        row = [str(k), _fmt(trace.scores[i])] + [str(c) for c in trace.counts[i]]
        lines.append(",".join(row))
    return "\n".join(lines) + "\n"


def scores_to_csv(report: EvalReport) -> str:
    header = "relevance,recovery,f_score,csr"
    row = ",".join(_fmt(v) for v in (report.relevance, report.recovery, report.f_score, report.csr))
    return header + "\n" + row + "\n"


def plot_data_to_csv(view_score: float, detail: Sequence) -> str:
    """Per-row silhouette coefficients for one view, long format.

    One line per (bicluster, member row): bicluster id, row id (both 1-based),
    the row's coefficient, and the view-level score repeated for convenient
    mean lines in plots. Empty biclusterings yield just the header.
    """
    lines = ["bicluster,row,coefficient,view_score"]
    for k, entry in enumerate(detail):
        if entry is None:
            continue
        rows, coeffs = entry
        for r, s in zip(rows, coeffs):
            lines.append(f"{k + 1},{int(r) + 1},{_fmt(s)},{_fmt(view_score)}")
    return "\n".join(lines) + "\n"


def write_bundle(out_dir, files: dict[str, str], manifest: dict) -> list[str]:
    """Write an output bundle atomically; returns the file names written.

    Every file goes to a temp name first; the manifest is renamed into place
    before anything else so no output ever exists without one.
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    manifest = dict(manifest)
    manifest["outputs"] = sorted(files)
    staged: list[tuple[Path, Path]] = []
    manifest_path = out / "manifest.json"
    manifest_tmp = manifest_path.with_name(manifest_path.name + ".tmp")
    manifest_tmp.write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")
    staged.append((manifest_tmp, manifest_path))
    for name, text in sorted(files.items()):
        path = out / name
        tmp = path.with_name(path.name + ".tmp")
        tmp.write_text(text)
        staged.append((tmp, path))
    for tmp, path in staged:
        os.replace(tmp, path)
    return ["manifest.json"] + sorted(files)
