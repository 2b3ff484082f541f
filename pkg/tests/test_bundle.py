import json

import pytest

from viropatch import bundle
from viropatch.bundle import BundleFormatError, dumps, loads
from viropatch.fixtures import fixture_names, fixture_path, load_fixture


@pytest.mark.parametrize("name", fixture_names())
def test_round_trip_is_byte_identical(name):
    text = fixture_path(name).read_text(encoding="utf-8")
    assert dumps(loads(text)) == text


def test_save_and_load(tmp_path, fixtures):
    p = tmp_path / "c.json"
    bundle.save(fixtures["conic"], p)
    assert dumps(bundle.load(p)) == dumps(fixtures["conic"])


def test_schema_ships():
    s = bundle.schema()
    assert s["type"] == "object"


def test_not_json():
    with pytest.raises(BundleFormatError, match="not JSON"):
        loads('{"name": ')


def test_schema_violation(fixtures):
    data = json.loads(dumps(fixtures["conic"]))
    del data["cells"]
    with pytest.raises(BundleFormatError):
        loads(json.dumps(data))


def test_bad_rational(fixtures):
    data = json.loads(dumps(fixtures["line3"]))
    data["lift"][0][1] = "1/0"
    with pytest.raises(BundleFormatError):
        loads(json.dumps(data))


def test_missing_file(tmp_path):
    with pytest.raises(BundleFormatError):
        bundle.load(tmp_path / "absent.json")


def test_unknown_fixture():
    with pytest.raises(FileNotFoundError):
        load_fixture("nope")
