import io
import json
import xml.etree.ElementTree as ET
from importlib import resources

import pytest

from viropatch.bundle import dumps
from viropatch.cli import main
from viropatch.fixtures import fixture_path


def run(*argv):
    out = io.StringIO()
    code = main(list(argv), out=out)
    return code, out.getvalue()


@pytest.fixture
def path_of():
    stack = []

    def get(name):
        cm = resources.as_file(fixture_path(name))
        stack.append(cm)
        return str(cm.__enter__())

    yield get
    for cm in stack:
        cm.__exit__(None, None, None)


def test_verify_ok(path_of):
    code, out = run("verify", path_of("family_2_2"))
    assert code == 0
    assert out.strip().endswith("family_2_2: all checks passed")


def test_verify_with_oracle(path_of):
    code, out = run("verify", path_of("nodal2"), "--t", "1/8", "--t", "1/16")
    assert code == 0
    assert out.count("oracle t=") == 2


def test_verify_flat_lift_is_not_convex(tmp_path, fixtures):
    data = json.loads(dumps(fixtures["nodal2"]))
    data["lift"] = [[p, "0"] for p, _ in data["lift"]]
    p = tmp_path / "flat.json"
    p.write_text(json.dumps(data))
    code, out = run("verify", str(p))
    assert code == 1
    assert "not convex" in out


def test_verify_truncated_file(tmp_path, path_of):
    text = open(path_of("conic"), encoding="utf-8").read()
    p = tmp_path / "cut.json"
    p.write_text(text[: len(text) // 2])
    code, _ = run("verify", str(p))
    assert code == 2


def test_bad_t_is_a_usage_error(path_of):
    with pytest.raises(SystemExit) as e:
        main(["verify", path_of("conic"), "--t", "2"])
    assert e.value.code == 2


def test_glue_summary_and_svg(tmp_path, path_of):
    svg = tmp_path / "c.svg"
    code, out = run("glue", path_of("conic"), "--svg", str(svg))
    assert code == 0
    assert out.startswith("components: 1 (0 ovals), nodes: 0")
    root = ET.fromstring(svg.read_text())
    assert root.tag.endswith("svg")


def test_glue_is_deterministic(tmp_path, path_of):
    a, b = tmp_path / "a.svg", tmp_path / "b.svg"
    run("glue", path_of("nodal2"), "--svg", str(a))
    run("glue", path_of("nodal2"), "--svg", str(b))
    assert a.read_bytes() == b.read_bytes()


def test_glue_non_rectangle(path_of):
    code, out = run("glue", path_of("line3"))
    assert code == 0 and out.startswith("components: ")


def test_glue_mismatch_reports_edge(tmp_path, fixtures):
    data = json.loads(dumps(fixtures["nodal2"]))
    data["cells"][1]["chart"] = {}
    p = tmp_path / "broken.json"
    p.write_text(json.dumps(data))
    code, _ = run("glue", str(p))
    assert code == 1


def test_surface_family(path_of):
    code, out = run("surface", path_of("family_2_2"))
    assert code == 0
    assert "b0=2, chi=-22, b1=26" in out
    assert "within the conjectured bound" in out
    assert "[ok] Y+ disks" in out


def test_surface_torus(path_of):
    code, out = run("surface", path_of("annulus2"))
    assert code == 0 and "components: S1" in out


def test_surface_needs_a_seed(tmp_path, fixtures, capsys):
    data = json.loads(dumps(fixtures["disk2"]))
    data.pop("seed")
    p = tmp_path / "noseed.json"
    p.write_text(json.dumps(data))
    code, _ = run("surface", str(p))
    assert code == 1
    assert "sign seed required" in capsys.readouterr().err
    code, out = run("surface", str(p), "--seed-sign", "-")
    assert code == 0


def test_surface_odd_bidegree(path_of, capsys):
    code, _ = run("surface", path_of("conic"))
    assert code == 1


def test_bounds():
    code, out = run("bounds", "--tridegree", "4", "4", "2")
    assert code == 0
    assert out.splitlines()[0] == "h20=9 h11=84"
    assert "b1<=92" in out and "raw 93" in out
    code, out = run("bounds", "--tridegree", "2", "2", "2")
    assert out.splitlines()[0] == "h20=1 h11=20"


def test_bounds_rejects_d3_1(capsys):
    code, _ = run("bounds", "--tridegree", "3", "3", "1")
    assert code == 1
    assert "birationaly equivalent to (ℂP¹)²" in capsys.readouterr().err


def test_ledger(path_of):
    code, out = run("ledger", "--k", "2", "--l", "3")
    assert code == 0
    assert "dim E = 80" in out and "codim A = 36" in out
    code, out = run("ledger", path_of("family_2_2"))
    assert code == 0 and "level 2:" in out and "cell 0" in out


def test_reports_are_deterministic(path_of):
    assert run("surface", path_of("disk2")) == run("surface", path_of("disk2"))
