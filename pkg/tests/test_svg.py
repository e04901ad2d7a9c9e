import xml.etree.ElementTree as ET

import numpy as np
import pytest

from reachbound.beta_reach import BetaReachProfile, profile
from reachbound.svg import render_points_svg, render_profile_svg, render_series_svg

NS = "{http://www.w3.org/2000/svg}"


def test_profile_svg_is_deterministic(tmp_path):
    p = profile(np.random.default_rng(0).normal(size=(30, 2)))
    a, b = tmp_path / "a.svg", tmp_path / "b.svg"
    render_profile_svg(p, a, model=lambda beta: 0.5 + beta)
    render_profile_svg(p, b, model=lambda beta: 0.5 + beta)
    assert a.read_bytes() == b.read_bytes()
    ET.parse(a)


def test_one_breakpoint_gives_one_step(tmp_path):
    f = tmp_path / "p.svg"
    render_profile_svg(BetaReachProfile([0.0], [1.0], 1.0), f)
    lines = ET.parse(f).getroot().findall(f"{NS}polyline")
    assert len(lines) == 1
    pts = [tuple(map(float, s.split(","))) for s in lines[0].get("points").split()]
    assert len(pts) == 2 and pts[0][1] == pts[1][1] and pts[0][0] < pts[1][0]


def test_empty_inputs_write_nothing(tmp_path):
    f = tmp_path / "x.svg"
    with pytest.raises(ValueError):
        render_profile_svg(BetaReachProfile([0.0], [np.inf], 0.0), f)
    with pytest.raises(ValueError):
        render_series_svg({}, f)
    with pytest.raises(ValueError):
        render_points_svg(np.empty((0, 2)), f)
    assert not f.exists()


def test_series_and_points(tmp_path):
    f = tmp_path / "s.svg"
    render_series_svg({"a": ([2, 4, 8], [2.0, 1.5, 1.2], [0.1, 0.05, 0.02])}, f, truth=1.0)
    root = ET.parse(f).getroot()
    assert len(root.findall(f".//{NS}circle")) == 3
    g = tmp_path / "q.svg"
    pts = np.random.default_rng(1).normal(size=(20, 3))
    render_points_svg(pts, g, [(pts[:, 0] > 0, "#ff0000", 2)])
    assert len(ET.parse(g).getroot().findall(f".//{NS}circle")) == int((pts[:, 0] > 0).sum())
