# tests/test_domains.py

import json

import pytest

from conformext.exceptions import ConfigError
from conformext.models.conformal_map import MapKind
from conformext.services.conformal import evaluate_map
from conformext.services.domains import load_domain
from conformext.services.geometry import build_polygon_domain


def test_keyword_domains():
    disk, cmap = load_domain("disk")
    assert disk.n_vertices == 64
    assert cmap.kind == MapKind.IDENTITY
    square, _ = load_domain("square")
    assert square.n_vertices == 4


def test_keyword_domain_rejects_basepoint():
    with pytest.raises(ConfigError):
        load_domain("square", 0.1 + 0j)


def test_saved_domain_keeps_its_grid_hint(tmp_path):
    saved = build_polygon_domain([[0.0, 0.0], [2.0, 0.0], [2.0, 1.0], [0.0, 1.0]], resolution_hint=0.0125)
    path = tmp_path / "rectangle.json"
    path.write_text(json.dumps(saved.to_record()))
    domain, cmap = load_domain(str(path), 1.0 + 0.5j)
    assert domain.resolution_hint == pytest.approx(0.0125)
    assert cmap.kind == MapKind.SCHWARZ_CHRISTOFFEL
    assert abs(evaluate_map(cmap, 0.0) - (1.0 + 0.5j)) < 1e-8


def test_unhinted_file_gets_the_default_hint(tmp_path):
    path = tmp_path / "rectangle.json"
    path.write_text(json.dumps([[0.0, 0.0], [2.0, 0.0], [2.0, 1.0], [0.0, 1.0]]))
    domain, _ = load_domain(str(path), 1.0 + 0.5j)
    assert domain.resolution_hint == pytest.approx(build_polygon_domain(json.loads(path.read_text())).resolution_hint)
