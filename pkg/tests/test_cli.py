"""End-to-end tests of the command line interface (in-process via main)."""

import json

import numpy as np
import pytest

from mvbiclust.cli import main
from mvbiclust.fileio import load_biclusters, load_view, save_view


def synth(tmp_path, name="data", **over):
    args = dict(rows=40, views=2, cols="24,24", k=3, sigma=1.0, seed=3)
    args.update(over)
    out = tmp_path / name
    rc = main(
        [
            "synth",
            "--rows", str(args["rows"]),
            "--views", str(args["views"]),
            "--cols", str(args["cols"]),
            "--k", str(args["k"]),
            "--sigma", str(args["sigma"]),
            "--seed", str(args["seed"]),
            "--out", str(out),
        ]
    )
    assert rc == 0
    return out


def run_args(data, out, extra=()):
    views = sorted(str(p) for p in data.glob("view*.csv"))
    return [
        "run",
        "--views", *views,
        "--k-min", "2", "--k-max", "3",
        "--phi", "200",
        "--omega", "0",
        "--seed", "0",
        "--out", str(out),
        *extra,
    ]


# ------------------------------------------------------------ exit codes


def test_usage_error_exits_one(capsys):
    assert main([]) == 1
    assert main(["run"]) == 1  # missing required arguments
    assert main(["frobnicate"]) == 1


def test_help_exits_zero(capsys):
    assert main(["--help"]) == 0
    assert main(["run", "--help"]) == 0


def test_data_error_exits_two(tmp_path, capsys):
    bad = tmp_path / "bad.csv"
    bad.write_text("1,2\n3,oops\n")
    rc = main(["run", "--views", str(bad), "--out", str(tmp_path / "o")])
    assert rc == 2
    assert "error:" in capsys.readouterr().err


def test_numerical_error_exits_three(tmp_path, capsys):
    data = synth(tmp_path)
    out = tmp_path / "o"
    views = sorted(str(p) for p in data.glob("view*.csv"))
    rc = main(
        ["run", "--views", *views, "--k-min", "2", "--k-max", "30", "--out", str(out)]
    )
    assert rc == 3  # k_max beyond the smallest view dimension
    assert "error:" in capsys.readouterr().err


def test_missing_file_exits_two(tmp_path, capsys):
    rc = main(["run", "--views", str(tmp_path / "nope.csv"), "--out", str(tmp_path / "o")])
    assert rc == 2


# ------------------------------------------------------------ synth


def test_synth_writes_views_truth_manifest(tmp_path, capsys):
    data = synth(tmp_path)
    assert (data / "view1.csv").exists()
    assert (data / "view2.csv").exists()
    x, _ = load_view(data / "view1.csv")
    assert x.shape == (40, 24)
    truth = load_biclusters(data / "truth.json")
    assert len(truth) == 2
    assert len(truth[0]) == 3
    manifest = json.loads((data / "manifest.json").read_text())
    assert manifest["command"] == "synth"
    assert manifest["config"]["seed"] == 3


def test_synth_broadcasts_single_col_count(tmp_path):
    data = synth(tmp_path, cols="20", views=3)
    for v in range(1, 4):
        x, _ = load_view(data / f"view{v}.csv")
        assert x.shape == (40, 20)


def test_synth_col_count_mismatch_exits_two(tmp_path, capsys):
    rc = main(
        ["synth", "--rows", "30", "--views", "3", "--cols", "20,20",
         "--k", "3", "--out", str(tmp_path / "d")]
    )
    assert rc == 2


# ------------------------------------------------------------ run


def test_run_bundle_and_metrics(tmp_path, capsys):
    data = synth(tmp_path)
    out = tmp_path / "fit"
    rc = main(run_args(data, out, extra=("--truth", str(data / "truth.json"))))
    assert rc == 0
    printed = capsys.readouterr().out
    assert "selected k:" in printed
    assert "relevance" in printed
    for name in (
        "manifest.json",
        "biclusters.json",
        "selection.csv",
        "scores.csv",
        "bisilhouette_plot_view1.csv",
        "bisilhouette_plot_view2.csv",
    ):
        assert (out / name).exists(), name
    manifest = json.loads((out / "manifest.json").read_text())
    assert manifest["command"] == "run"
    assert manifest["selected_k"] in (2, 3)
    assert sorted(manifest["outputs"]) == manifest["outputs"]
    assert len(manifest["inputs"]) == 2
    sel = (out / "selection.csv").read_text().splitlines()
    assert sel[0] == "k,bisilhouette,count_view1,count_view2"
    assert len(sel) >= 3  # header plus one line per candidate count


def test_run_repeat_is_byte_identical(tmp_path):
    data = synth(tmp_path)
    out1, out2 = tmp_path / "fit1", tmp_path / "fit2"
    assert main(run_args(data, out1, extra=("--truth", str(data / "truth.json")))) == 0
    assert main(run_args(data, out2, extra=("--truth", str(data / "truth.json")))) == 0
    for name in ("biclusters.json", "selection.csv", "scores.csv"):
        assert (out1 / name).read_bytes() == (out2 / name).read_bytes(), name


def test_run_transpose_swaps_axes(tmp_path):
    data = synth(tmp_path, name="tdata", views=1, cols="24")
    x, _ = load_view(data / "view1.csv")
    save_view(data / "view1t.csv", x.T)
    out_plain = tmp_path / "plain"
    out_t = tmp_path / "transposed"
    rc1 = main(
        ["run", "--views", str(data / "view1.csv"), "--k-min", "3", "--k-max", "3",
         "--omega", "0", "--seed", "0", "--out", str(out_plain)]
    )
    rc2 = main(
        ["run", "--views", str(data / "view1t.csv"), "--transpose",
         "--k-min", "3", "--k-max", "3",
         "--omega", "0", "--seed", "0", "--out", str(out_t)]
    )
    assert rc1 == 0 and rc2 == 0
    # same matrix after the transpose flag: identical biclusters
    a = load_biclusters(out_plain / "biclusters.json")
    b = load_biclusters(out_t / "biclusters.json")
    assert a == b


def test_run_pair_list_weight_file(tmp_path):
    data = synth(tmp_path)
    pairfile = tmp_path / "phi.txt"
    pairfile.write_text("# view pair weights\n1,2,200\n")
    out = tmp_path / "fit"
    rc = main(
        [
            "run",
            "--views", *sorted(str(p) for p in data.glob("view*.csv")),
            "--k-min", "2", "--k-max", "3",
            "--phi", str(pairfile),
            "--omega", "0",
            "--seed", "0",
            "--out", str(out),
        ]
    )
    assert rc == 0
    manifest = json.loads((out / "manifest.json").read_text())
    assert manifest["weights"]["phi"][0][1] == 200.0
    assert manifest["weights"]["phi"][1][0] == 0.0


def test_run_bad_pair_list_exits_two(tmp_path, capsys):
    data = synth(tmp_path)
    pairfile = tmp_path / "phi.txt"
    pairfile.write_text("1,5,200\n")  # view 5 does not exist
    rc = main(
        [
            "run",
            "--views", *sorted(str(p) for p in data.glob("view*.csv")),
            "--phi", str(pairfile),
            "--out", str(tmp_path / "o"),
        ]
    )
    assert rc == 2


def test_run_variance_floor_drops_flat_columns(tmp_path):
    rng = np.random.default_rng(0)
    x = np.abs(rng.normal(3, 1, (30, 10)))
    x[:, 4] = 2.0  # constant: zero variance
    p = tmp_path / "v.csv"
    save_view(p, x)
    out = tmp_path / "fit"
    rc = main(
        ["run", "--views", str(p), "--k-min", "2", "--k-max", "2",
         "--omega", "0", "--variance-floor", "1e-9", "--out", str(out)]
    )
    assert rc == 0
    bics = load_biclusters(out / "biclusters.json")
    for b in bics[0]:
        assert 4 not in b.cols  # dropped column cannot reappear


def test_run_allow_negative_shift(tmp_path):
    rng = np.random.default_rng(1)
    x = rng.normal(0, 1, (30, 12))  # plenty of negatives
    p = tmp_path / "v.csv"
    save_view(p, x)
    out = tmp_path / "fit"
    args = ["run", "--views", str(p), "--k-min", "2", "--k-max", "2",
            "--omega", "0", "--out", str(out)]
    assert main(args) == 2  # rejected without the flag
    assert main(args + ["--allow-negative-shift"]) == 0


def test_run_truth_view_mismatch_exits_two(tmp_path, capsys):
    data = synth(tmp_path)
    truth_one = json.loads((data / "truth.json").read_text())
    truth_one["views"] = truth_one["views"][:1]
    bad = tmp_path / "truth1.json"
    bad.write_text(json.dumps(truth_one))
    out = tmp_path / "fit"
    rc = main(run_args(data, out, extra=("--truth", str(bad))))
    assert rc == 2


# ------------------------------------------------------------ score


def test_score_reports_and_bundles(tmp_path, capsys):
    data = synth(tmp_path)
    out = tmp_path / "fit"
    assert main(run_args(data, out)) == 0
    capsys.readouterr()
    score_out = tmp_path / "rescore"
    rc = main(
        [
            "score",
            "--views", *sorted(str(p) for p in data.glob("view*.csv")),
            "--biclusters", str(out / "biclusters.json"),
            "--truth", str(data / "truth.json"),
            "--out", str(score_out),
        ]
    )
    assert rc == 0
    printed = capsys.readouterr().out
    assert "mean bisilhouette:" in printed
    assert (score_out / "bisilhouette.csv").exists()
    assert (score_out / "scores.csv").exists()
    assert (score_out / "bisilhouette_plot_view1.csv").exists()


def test_score_out_of_range_biclusters_exit_two(tmp_path, capsys):
    data = synth(tmp_path)
    bad = tmp_path / "bics.json"
    bad.write_text(json.dumps({"views": [
        [{"rows": [1, 999], "cols": [1]}],
        [{"rows": [1], "cols": [1]}],
    ]}))
    rc = main(
        [
            "score",
            "--views", *sorted(str(p) for p in data.glob("view*.csv")),
            "--biclusters", str(bad),
        ]
    )
    assert rc == 2


# ------------------------------------------------------------ sweep


def test_sweep_writes_table(tmp_path, capsys):
    data = synth(tmp_path)
    out = tmp_path / "sweep"
    rc = main(
        [
            "sweep",
            "--views", *sorted(str(p) for p in data.glob("view*.csv")),
            "--param", "phi",
            "--values", "0,200",
            "--k-min", "2", "--k-max", "3",
            "--omega", "0",
            "--out", str(out),
        ]
    )
    assert rc == 0
    table = (out / "sweep.csv").read_text().splitlines()
    assert table[0] == "value,bisilhouette,selected_k,count_view1,count_view2,aligned"
    assert len(table) == 3
    assert table[1].startswith("0.0,")
    assert table[2].startswith("200.0,")
    assert table[1].split(",")[-1] in ("true", "false")
