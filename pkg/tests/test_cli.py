"""Command-line interface, run in process through ``main``."""

import subprocess
import sys
import xml.etree.ElementTree as ET

import numpy as np
import pytest

from scaledph import (
    PersistenceDiagram,
    PointCloud,
    build_filtration,
    FiltrationSpec,
    make_rng,
    persistence_diagram,
    read_diagram,
    read_point_cloud,
    sample_two_circles,
    write_diagram,
    write_point_cloud,
)
from scaledph.cli import main


def run(args):
    return main(list(args))


def write_pair_cloud(path, dist=2.0):
    write_point_cloud(path, PointCloud(points=np.array([[0.0, 0.0], [dist, 0.0]])))


def test_sample_writes_deterministic_csv(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert run(["sample", "two-circles", "--n", "50", "--seed", "3", "--out", str(a)]) == 0
    assert run(["sample", "two-circles", "--n", "50", "--seed", "3", "--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()
    cloud = read_point_cloud(a)
    assert cloud.points.shape == (50, 2)
    assert cloud.oracle_density is not None


def test_sample_matches_library_sampler(tmp_path):
    out = tmp_path / "c.csv"
    run(["sample", "two-circles", "--n", "40", "--seed", "9", "--out", str(out)])
    direct = sample_two_circles(make_rng(9), n=40)
    back = read_point_cloud(out)
    assert back.points.tobytes() == direct.points.tobytes()
    assert back.oracle_density.tobytes() == direct.oracle_density.tobytes()


def test_sample_lorenz_delay(tmp_path):
    out = tmp_path / "l.csv"
    assert run(["sample", "lorenz-delay", "--out", str(out)]) == 0
    cloud = read_point_cloud(out)
    assert cloud.points.shape == (1000, 2)
    assert cloud.oracle_density is None
    # fixed-size dataset: a sample-size request is a usage error
    assert run(["sample", "lorenz-delay", "--n", "50", "--out", str(out)]) == 2


def test_sample_usage_errors(tmp_path, capsys):
    assert run(["sample", "klein-bottle", "--out", str(tmp_path / "x.csv")]) == 2
    assert run(["sample", "two-circles"]) == 2
    capsys.readouterr()


def test_ph_two_point_vr(tmp_path):
    src = tmp_path / "pair.csv"
    out = tmp_path / "d.json"
    write_pair_cloud(src, dist=2.0)
    assert run(["ph", str(src), "--filtration", "vr", "--out", str(out)]) == 0
    dgm, field, max_dim, meta = read_diagram(out)
    assert field == 11 and max_dim == 1
    assert {(int(q), b, v) for q, b, v in zip(dgm.dims, dgm.births, dgm.deaths)} == {
        (0, 0.0, 1.0),
        (0, 0.0, np.inf),
    }
    assert meta["family"] == "vr" and meta["n_points"] == 2


def test_ph_output_is_deterministic(tmp_path):
    src = tmp_path / "c.csv"
    run(["sample", "cassini", "--n", "40", "--seed", "1", "--out", str(src)])
    outs = []
    for name in ("1.json", "2.json"):
        out = tmp_path / name
        assert run(["ph", str(src), "--filtration", "vr", "--out", str(out)]) == 0
        outs.append(out.read_bytes())
    assert outs[0] == outs[1]


def test_ph_matches_library_pipeline(tmp_path):
    src = tmp_path / "c.csv"
    out = tmp_path / "d.json"
    run(["sample", "cassini", "--n", "40", "--seed", "1", "--out", str(src)])
    assert run(["ph", str(src), "--filtration", "vr", "--max-dim", "1", "--out", str(out)]) == 0
    dgm, _, _, _ = read_diagram(out)
    fc, _ = build_filtration(read_point_cloud(src), FiltrationSpec(family="vr", max_dim=1))
    direct = persistence_diagram(fc, p=11)
    assert dgm.births.tobytes() == direct.births.tobytes()
    assert dgm.deaths.tobytes() == direct.deaths.tobytes()


def test_ph_dvr_oracle_density(tmp_path):
    src = tmp_path / "tc.csv"
    out = tmp_path / "d.json"
    svg = tmp_path / "d.svg"
    run(["sample", "two-circles", "--n", "60", "--seed", "4", "--out", str(src)])
    code = run(
        ["ph", str(src), "--filtration", "dvr", "--n", "1", "--k", "6",
         "--out", str(out), "--svg", str(svg)]
    )
    assert code == 0
    dgm, _, _, meta = read_diagram(out)
    assert meta["density"] == "oracle"
    assert meta["k"] == 6
    assert meta["alpha"] > 1.0
    assert meta["intrinsic_dim"] == 1.0
    assert dgm.infinite_count(0) == 2  # one component per circle
    ET.fromstring(svg.read_text())


def test_ph_auto_k_records_choice(tmp_path):
    src = tmp_path / "tc.csv"
    out = tmp_path / "d.json"
    run(["sample", "two-circles", "--n", "80", "--seed", "7", "--out", str(src)])
    assert run(["ph", str(src), "--filtration", "dvr", "--n", "1", "--out", str(out)]) == 0
    _, _, _, meta = read_diagram(out)
    assert isinstance(meta["k"], int) and meta["k"] >= 1
    assert meta["ell"] == 5


def test_ph_usage_and_input_errors(tmp_path, capsys):
    src = tmp_path / "pair.csv"
    write_pair_cloud(src)
    out = str(tmp_path / "d.json")
    assert run(["ph", str(tmp_path / "absent.csv"), "--out", out]) == 3
    assert run(["ph", str(src), "--field", "4", "--out", out]) == 2
    assert run(["ph", str(src), "--cap", "-1", "--out", out]) == 2
    assert run(["ph", str(src), "--filtration", "vortex", "--out", out]) == 2
    bad = tmp_path / "bad.csv"
    bad.write_text("x0,x1\n1,zebra\n")
    assert run(["ph", str(bad), "--out", out]) == 3
    capsys.readouterr()


def test_knn_diag_counts(tmp_path, capsys):
    src = tmp_path / "tc.csv"
    run(["sample", "two-circles", "--n", "60", "--seed", "0", "--out", str(src)])
    capsys.readouterr()
    assert run(["knn-diag", str(src), "--k-max", "12"]) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert lines[0] == "k,components"
    rows = [tuple(int(v) for v in ln.split(",")) for ln in lines[1:]]
    assert [r[0] for r in rows] == list(range(1, 13))
    comps = [r[1] for r in rows]
    assert all(a >= b for a, b in zip(comps, comps[1:]))
    assert comps[-1] >= 1
    # same table lands in a file with --out
    out = tmp_path / "t.csv"
    assert run(["knn-diag", str(src), "--k-max", "12", "--out", str(out)]) == 0
    assert out.read_text().strip().splitlines() == lines


def test_knn_diag_k_max_too_large(tmp_path, capsys):
    src = tmp_path / "pair.csv"
    write_pair_cloud(src)
    assert run(["knn-diag", str(src), "--k-max", "2"]) == 3
    capsys.readouterr()


def diag_file(tmp_path, name, points):
    dgm = PersistenceDiagram(
        np.zeros(len(points), np.int64),
        np.array([p[0] for p in points], dtype=float),
        np.array([p[1] for p in points], dtype=float),
    )
    path = tmp_path / name
    write_diagram(path, dgm, field=11, max_dim=0)
    return path


def test_bottleneck_outputs(tmp_path, capsys):
    a = diag_file(tmp_path, "a.json", [(0.0, 2.0)])
    b = diag_file(tmp_path, "b.json", [(0.0, 3.0)])
    inf_side = diag_file(tmp_path, "i.json", [(0.0, np.inf)])
    assert run(["bottleneck", str(a), str(a), "--dim", "0"]) == 0
    assert capsys.readouterr().out.strip() == "0"
    assert run(["bottleneck", str(a), str(b), "--dim", "0"]) == 0
    assert capsys.readouterr().out.strip() == "1"
    assert run(["bottleneck", str(a), str(inf_side), "--dim", "0"]) == 0
    assert capsys.readouterr().out.strip() == "inf"
    # default dimension is 1: neither file has dimension-1 points
    assert run(["bottleneck", str(a), str(b)]) == 0
    assert capsys.readouterr().out.strip() == "0"


def test_bottleneck_nine_digits(tmp_path, capsys):
    a = diag_file(tmp_path, "a.json", [(0.0, 1.0 / 3.0)])
    b = diag_file(tmp_path, "b.json", [])
    assert run(["bottleneck", str(a), str(b), "--dim", "0"]) == 0
    assert capsys.readouterr().out.strip() == "0.166666667"


def test_bottleneck_missing_file(tmp_path, capsys):
    a = diag_file(tmp_path, "a.json", [(0.0, 1.0)])
    assert run(["bottleneck", str(a), str(tmp_path / "nope.json")]) == 3
    capsys.readouterr()


def test_plot_command(tmp_path):
    a = diag_file(tmp_path, "a.json", [(0.0, 1.0), (0.0, 1.0), (0.0, np.inf)])
    out = tmp_path / "a.svg"
    assert run(["plot", str(a), "--out", str(out)]) == 0
    svg = out.read_text()
    ET.fromstring(svg)
    assert ">2</text>" in svg  # repeated point annotated with multiplicity
    assert "&#8734;" in svg


def test_top_level_usage(capsys):
    assert run([]) == 2
    assert run(["defragment"]) == 2
    capsys.readouterr()


def test_console_script_entry_point(tmp_path):
    out = tmp_path / "s.csv"
    proc = subprocess.run(
        [sys.executable, "-m", "scaledph.cli", "sample", "two-squares",
         "--n", "30", "--seed", "2", "--out", str(out)],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0, proc.stderr
    in_process = tmp_path / "p.csv"
    run(["sample", "two-squares", "--n", "30", "--seed", "2", "--out", str(in_process)])
    assert out.read_bytes() == in_process.read_bytes()
