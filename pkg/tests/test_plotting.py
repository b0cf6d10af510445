"""SVG chart rendering."""

import xml.etree.ElementTree as ET

import pytest

from ngg.errors import InvalidParamError
from ngg.plotting import render_line_chart


def parse(svg: str):
    return ET.fromstring(svg)


def elements(root, local):
    return [el for el in root.iter() if el.tag.split("}")[-1] == local]


def test_one_path_per_series_and_desc():
    svg = render_line_chart(
        [("a", [1, 2, 3], [5.0, 2.0, 4.0]), ("b", [1, 2, 3], [1.0, 1.5, 2.0])],
        title="demo", xlabel="x", ylabel="y", desc="kind=test;series=2")
    root = parse(svg)
    assert len(elements(root, "path")) == 2
    assert elements(root, "desc")[0].text == "kind=test;series=2"
    texts = [t.text for t in elements(root, "text")]
    assert "demo" in texts and "a" in texts and "b" in texts


def test_log_scale_uses_decade_ticks():
    svg = render_line_chart([("s", [0, 1, 2], [5.0, 50.0, 500.0])],
                            ylabel="v", log_y=True)
    texts = [t.text for t in elements(parse(svg), "text")]
    assert "10" in texts and "100" in texts


def test_single_point_series_renders():
    svg = render_line_chart([("s", [1.0], [3.0])])
    assert len(elements(parse(svg), "path")) == 1


@pytest.mark.parametrize("series", [
    [],
    [("s", [1, 2], [1.0])],
    [("s", [], [])],
])
def test_bad_series_rejected(series):
    with pytest.raises(InvalidParamError):
        render_line_chart(series)


def test_log_scale_rejects_nonpositive():
    with pytest.raises(InvalidParamError):
        render_line_chart([("s", [1, 2], [1.0, 0.0])], log_y=True)
