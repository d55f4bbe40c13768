import copy
import csv
import io
import json
import re
import xml.etree.ElementTree as ET
from fractions import Fraction

import numpy as np
import pytest
from click.testing import CliRunner

from helpers import QQ, fixture_config
from lorenz_lab import report
from lorenz_lab.cli import SCAN_HEADER, main, scan_horizon
from lorenz_lab.config import map_from_config, parse_config
from lorenz_lab.errors import ConfigParse, UnknownFixture
from lorenz_lab.fixtures import FIXTURE_IDS, load_fixture, parse_point
from lorenz_lab.lorenzmap import mod_one
from lorenz_lab.sided import MINUS, PLUS, SidedPoint
from lorenz_lab.svg import numberline_layout, render_numberline

SVG_NS = "{http://www.w3.org/2000/svg}"


@pytest.fixture
def runner():
    return CliRunner()


@pytest.fixture(scope="module")
def cfg_path(tmp_path_factory):
    d = tmp_path_factory.mktemp("cfg")
    paths = {}
    for fid in FIXTURE_IDS:
        p = d / f"{fid}.json"
        p.write_text(json.dumps(fixture_config(fid)["config"]))
        paths[fid] = str(p)
    return paths


# -- config ------------------------------------------------------------------------


def test_config_errors():
    good = fixture_config("ex51")["config"]
    with pytest.raises(ConfigParse):
        parse_config("{not json")
    with pytest.raises(ConfigParse):
        parse_config("[1, 2]")
    for bad in (
        dict(good, family="logistic"),
        dict(good, field={"poly": [1, 1]}),
        {k: v for k, v in good.items() if k != "alpha"},
        dict(good, beta="x/y"),
        dict(good, float_mode=8),
    ):
        with pytest.raises(ConfigParse):
            map_from_config(bad)


def test_float_mode_config():
    cfg = dict(fixture_config("ex51")["config"], float_mode=128)
    f = map_from_config(cfg)
    assert abs(float(f.sL) - 1.2207440846057596) < 1e-15


# -- report ------------------------------------------------------------------------


def test_report_normalization():
    obj = {"b": Fraction(1, 3), "a": [np.int64(3), np.float64(0.1 + 0.2), -0.0], "c": {"x": 1 / 3}}
    text = report.dumps(obj)
    assert text.endswith("\n")
    data = json.loads(text)
    assert list(data) == ["a", "b", "c"]
    assert data["b"] == "1/3"
    assert data["a"] == [3, 0.3, 0.0]
    assert data["c"]["x"] == 0.333333333333
    assert report.dumps(obj) == text


def test_envelope():
    env = report.envelope("knead", {"x": 1}, {"family": "mod_one"})
    assert env["schema"] == report.SCHEMA and env["command"] == "knead"


# -- svg -----------------------------------------------------------------------------


def _svg_elements(text):
    root = ET.fromstring(text)
    return [el.tag.replace(SVG_NS, "") for el in root.iter()][1:]


def test_svg_uses_only_basic_elements(fmap):
    f = fmap("ex51")
    pts = [("c", SidedPoint(f.c), "critical"), ("p1", SidedPoint(f.f0), "below"), ("q1", SidedPoint(f.f1), "above")]
    text = render_numberline(pts, title="t")
    assert set(_svg_elements(text)) <= {"line", "circle", "text"}
    root = ET.fromstring(text)
    assert root.get("version") == "1.1"


def test_single_point_svg():
    text = render_numberline([("x", Fraction(1, 2), "above")])
    assert _svg_elements(text).count("circle") == 1


def test_layout_order_matches_51(fmap):
    f = fmap("ex51")
    case = load_fixture("ex51")
    (order,) = [a for a in case.assertions if a["op"] == "order"]
    pts = [(lab, parse_point(f, spec), "above") for lab, spec, *_ in order["args"]["points"]]
    lay = numberline_layout(pts)
    xs = [d["x"] for d in lay]
    assert xs == sorted(xs)
    # equal values share a rank and an x coordinate
    by_label = {d["label"]: d for d in lay}
    assert by_label["p3"]["rank"] == by_label["q2"]["rank"]
    assert by_label["p3"]["x"] == by_label["q2"]["x"]


def test_layout_sided_points_share_position(fmap):
    # c_- and c_+ project to c; the diagram places them together and keeps input order
    f = fmap("ex51")
    lay = numberline_layout(
        [("b", SidedPoint(f.c, PLUS), "above"), ("a", SidedPoint(f.c, MINUS), "above"), ("z", f.ctx.zero, "below")]
    )
    assert [d["label"] for d in lay] == ["z", "b", "a"]
    assert lay[1]["rank"] == lay[2]["rank"] and lay[1]["x"] == lay[2]["x"]
    assert lay[0]["x"] == 40


def test_z0_position_in_ex5_2_diagram(runner, tmp_path):
    path = tmp_path / "ex5_2.svg"
    res = runner.invoke(main, ["verify-example", "ex5_2", "--svg", str(path)])
    assert res.exit_code == 0, res.stderr
    root = ET.fromstring(path.read_text())
    labels = {el.text: el for el in root.iter(SVG_NS + "text")}
    x = float(labels["z0"].get("x"))
    assert abs(x - (40 + 0.11227 * 720)) < 0.5


# -- commands -----------------------------------------------------------------------


@pytest.mark.parametrize(
    "args",
    [
        ["knead"],
        ["orbit", "--point", "c+"],
        ["cycles", "--nmax", "5"],
        ["renorm", "--lmax", "6", "--rmax", "6"],
        ["invariants", "--l", "5", "--r", "5", "--samples", "20"],
        ["rotation", "--n-iter", "200", "--samples", "10"],
    ],
)
def test_subcommands_on_ex5_2(runner, cfg_path, args):
    res = runner.invoke(main, [args[0], cfg_path["ex5_2"], *args[1:]])
    assert res.exit_code == 0, res.stderr
    data = json.loads(res.stdout)
    assert data["schema"] == report.SCHEMA and data["command"] == args[0]


@pytest.mark.parametrize("cmd", ["markov", "matching"])
def test_markov_and_matching_on_51(runner, cfg_path, cmd):
    res = runner.invoke(main, [cmd, cfg_path["ex51"]])
    assert res.exit_code == 0, res.stderr
    body = json.loads(res.stdout)["result"]
    if cmd == "markov":
        assert body["verdict"] == "mixing"
    else:
        assert body["eta"] == 11


def test_output_is_deterministic(runner, cfg_path):
    a = runner.invoke(main, ["renorm", cfg_path["ex3"], "--lmax", "8", "--rmax", "8"]).stdout
    b = runner.invoke(main, ["renorm", cfg_path["ex3"], "--lmax", "8", "--rmax", "8"]).stdout
    assert a == b
    pairs = [(g["l"], g["r"]) for g in json.loads(a)["result"]["renormalizations"]]
    assert pairs == [(2, 2), (2, 4), (2, 6), (8, 6)]


def test_rotation_csv(runner, cfg_path, tmp_path):
    path = tmp_path / "rot.csv"
    res = runner.invoke(main, ["rotation", cfg_path["ex5_2"], "--n-iter", "100", "--samples", "5", "--csv", str(path)])
    assert res.exit_code == 0, res.stderr
    rows = list(csv.DictReader(path.open()))
    assert len(rows) == 5 * 4
    assert json.loads(res.stdout)["result"]["verdict"] == "degenerate"


def test_markov_analysis_failure_exit_code(runner, cfg_path):
    res = runner.invoke(main, ["markov", cfg_path["exCubeRoot2"], "--horizon", "50"])
    assert res.exit_code == 1
    assert "NotEventuallyPeriodic" in res.stderr


def test_input_errors_exit_2(runner, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{")
    assert runner.invoke(main, ["knead", str(bad)]).exit_code == 2
    inadmissible = tmp_path / "inadm.json"
    cfg = fixture_config("ex51")["config"]
    inadmissible.write_text(json.dumps(dict(cfg, beta=["1"])))
    assert runner.invoke(main, ["knead", str(inadmissible)]).exit_code == 2
    assert runner.invoke(main, ["knead", str(tmp_path / "missing.json")]).exit_code == 2
    assert runner.invoke(main, ["verify-example", "no-such-fixture"]).exit_code == 2


# -- verify-example --------------------------------------------------------------------


def test_verify_example_ex3(runner):
    res = runner.invoke(main, ["verify-example", "ex3"])
    assert res.exit_code == 0
    lines = res.stderr.strip().splitlines()
    assert lines and all(l.startswith("PASS ex3:") for l in lines)
    body = json.loads(res.stdout)["result"]
    assert body["status"] == "PASS" and body["passed"] == body["total"]


def test_verify_example_corrupted_file(runner, tmp_path):
    case = fixture_config("ex51")
    bad = copy.deepcopy(case)
    (a,) = [a for a in bad["assertions"] if a["op"] == "kappa"]
    a["expect"]["kappa"] = a["expect"]["kappa"] + 1
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(bad))
    res = runner.invoke(main, ["verify-example", str(path)])
    assert res.exit_code == 1
    assert re.search(r"^FAIL ex51: ", res.stderr, re.M)


def test_unknown_fixture():
    with pytest.raises(UnknownFixture):
        load_fixture("nope")


# -- scan ----------------------------------------------------------------------------------


def _valid_oracle(beta, alpha):
    return beta > 1 and 0 <= alpha < 1 and beta + alpha <= 2


def test_scan_small_grid(runner):
    args = ["scan", "--grid", "4x4", "--beta", "1:2", "--alpha", "0:1", "--nmax", "3", "--lmax", "4", "--rmax", "4"]
    one = runner.invoke(main, args + ["--workers", "1"])
    assert one.exit_code == 0, one.stderr
    rows = list(csv.DictReader(io.StringIO(one.stdout)))
    assert tuple(rows[0]) == SCAN_HEADER
    assert len(rows) == 16
    grid = [Fraction(i, 3) for i in range(4)]
    for row, (b, a) in zip(rows, [(1 + x, y) for x in grid for y in grid]):
        assert float(row["beta"]) == pytest.approx(float(b)) and float(row["alpha"]) == pytest.approx(float(a))
        assert (row["valid"] == "true") == _valid_oracle(b, a)
        if row["valid"] == "false":
            assert all(row[k] == "" for k in SCAN_HEADER[3:])
    two = runner.invoke(main, args + ["--workers", "2"])
    assert two.stdout == one.stdout


def test_scan_doubling_cell(runner):
    res = runner.invoke(main, ["scan", "--grid", "1x1", "--beta", "2:2", "--alpha", "0:0", "--workers", "1"])
    (row,) = list(csv.DictReader(io.StringIO(res.stdout)))
    assert row["valid"] == "true" and row["kappa"] == "1"


def test_scan_bad_arguments(runner):
    assert runner.invoke(main, ["scan", "--grid", "axb"]).exit_code == 2
    assert runner.invoke(main, ["scan", "--beta", "2:1"]).exit_code == 2
    assert runner.invoke(main, ["scan", "--float-bits", "32"]).exit_code == 2


def test_scan_horizon_cap():
    assert scan_horizon(2.0, 128, 200) == 96
    assert scan_horizon(1.01, 128, 200) == 200
    assert scan_horizon(1.0, 64, 50) == 50
