# tests/test_svg.py

from conformext.utils.svg import SvgCanvas


def test_render_flips_the_y_axis():
    canvas = SvgCanvas(size=100.0, pad=0.0)
    canvas.polyline([0j, 1 + 1j], color="#ff0000")
    text = canvas.render()
    assert text.startswith("<?xml")
    assert 'points="0.000000,0.000000 1.000000,1.000000"' in text
    assert "scale(100.000000,-100.000000)" in text
    assert "stroke:#ff0000" in text


def test_bounding_box_grows_with_elements():
    canvas = SvgCanvas(size=200.0, pad=0.0)
    canvas.circle(0j, 1.0)
    canvas.polygon([0j, 3 + 0j, 3 + 1j])
    text = canvas.render()
    assert 'width="200.000000"' in text
    assert "<circle" in text and "<polygon" in text


def test_labels_are_escaped(tmp_path):
    canvas = SvgCanvas()
    canvas.text(0.5 + 0.5j, "a < b")
    path = tmp_path / "label.svg"
    canvas.save(str(path))
    assert "a &lt; b" in path.read_text()


def test_empty_canvas_renders():
    assert SvgCanvas().render().rstrip().endswith("</svg>")
