# tests/test_parsing.py

import json

import numpy as np
import pytest

from conformext.exceptions import ConfigError
from conformext.models.phi import PhiFamily
from conformext.utils.parsing import parse_phi, parse_point, read_domain_file, read_vertices


def test_parse_alpha():
    spec = parse_phi("alpha:1.5")
    assert spec.family == PhiFamily.ALPHA_LOG
    assert spec.alpha == pytest.approx(1.5)


def test_parse_table(tmp_path):
    path = tmp_path / "phi.json"
    path.write_text(json.dumps({
        "knots": [[0.0, 0.0], [1.0, 1.0], [4.0, 8.0]],
        "tail": {"kind": "power", "exponent": 1.5},
    }))
    spec = parse_phi(f"table:{path}")
    assert spec.family == PhiFamily.TABLE
    assert spec.tail.exponent == pytest.approx(1.5)


@pytest.mark.parametrize("text", ["alpha", "alpha:x", "beta:1", "table:/no/such/file.json"])
def test_parse_phi_errors(text):
    with pytest.raises(ConfigError):
        parse_phi(text)


def test_parse_point():
    assert parse_point("0.25,-1") == complex(0.25, -1.0)
    with pytest.raises(ConfigError):
        parse_point("1,2,3")
    with pytest.raises(ConfigError):
        parse_point("a,b")


def test_read_vertices_accepts_both_layouts(tmp_path):
    square = [[0, 0], [1, 0], [1, 1], [0, 1]]
    bare = tmp_path / "bare.json"
    bare.write_text(json.dumps(square))
    wrapped = tmp_path / "wrapped.json"
    wrapped.write_text(json.dumps({"vertices": square}))
    np.testing.assert_array_equal(read_vertices(str(bare)), read_vertices(str(wrapped)))

    empty = tmp_path / "empty.json"
    empty.write_text(json.dumps({"name": "nothing"}))
    with pytest.raises(ConfigError):
        read_vertices(str(empty))



def test_domain_file_hint(tmp_path):
    path = tmp_path / "hinted.json"
    path.write_text(json.dumps({"vertices": [[0, 0], [1, 0], [1, 1], [0, 1]], "resolution_hint": 0.05}))
    vertices, hint = read_domain_file(str(path))
    assert vertices.shape == (4, 2)
    assert hint == pytest.approx(0.05)

    bare = tmp_path / "bare.json"
    bare.write_text(json.dumps([[0, 0], [1, 0], [1, 1]]))
    assert read_domain_file(str(bare))[1] is None


@pytest.mark.parametrize("hint", [0, -1.0, "fine", True])
def test_domain_file_rejects_bad_hints(tmp_path, hint):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({"vertices": [[0, 0], [1, 0], [1, 1]], "resolution_hint": hint}))
    with pytest.raises(ConfigError):
        read_domain_file(str(path))
