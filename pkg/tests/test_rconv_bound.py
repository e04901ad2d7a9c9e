import json

import numpy as np
import pytest

from reachbound.rconv_bound import (
    LabeledGrid,
    closing_violations,
    covering_radius,
    discrete_offset,
    offset_mask,
    rconv_upper_bound,
)
from reachbound.synth import ShapeSpec, generate


def hole_grid():
    g1 = np.arange(11.0)
    phi = np.stack(np.meshgrid(g1, g1, indexing="ij"), -1).reshape(-1, 2)
    inside = ~np.all(phi == 5, axis=1)
    return LabeledGrid(phi, inside, 0.75)


LINE = LabeledGrid(np.c_[np.arange(4.0), np.zeros(4)], [True, True, False, False])


def scan(grid, eps, r_max, step=1e-3):
    for r in np.arange(eps + step, r_max + step / 2, step):
        if len(closing_violations(grid, r, eps)):
            return r
    return np.inf


def test_covering_radius():
    assert covering_radius(1, 2) == pytest.approx(np.sqrt(2) / 2, abs=1e-15)
    assert covering_radius(0.004, 3) == pytest.approx(0.0034641, abs=1e-7)
    assert covering_radius(1, 1) == 0.5
    with pytest.raises(ValueError):
        covering_radius(0, 2)


def test_offset_examples():
    assert discrete_offset(LINE, 1).mask.tolist() == [True, True, True, False]
    assert discrete_offset(LINE, -1).mask.tolist() == [True, False, False, False]
    full = LabeledGrid(LINE.phi, np.ones(4, bool))
    assert discrete_offset(full, -5).mask.all()


def test_grid_validation():
    with pytest.raises(ValueError):
        LabeledGrid([[0, 0], [0, 0]], [True, False])
    g = LabeledGrid([[0, 0], [0, 0], [1, 0]], [True, True, False])
    assert g.n == 2
    with pytest.raises(ValueError):
        LabeledGrid([[0, 0]], [True, False])


def test_hole_violations():
    g = hole_grid()
    assert closing_violations(g, 2, 0.75).points.tolist() == [60]
    assert len(closing_violations(g, 1.5, 0.75)) == 0
    with pytest.raises(ValueError):
        closing_violations(g, 0.5, 0.75)


def test_hole_bound_is_exact():
    res = rconv_upper_bound(hole_grid(), 0.75, 5)
    assert res.value == 1 + 0.75
    assert res.witness == 60 and not res.window_limited
    d = json.loads(res.to_json())
    assert d["bound"] == 1.75 and d["witness"] == 60 and d["r_max"] == 5


def test_no_outside_points_is_window_limited():
    res = rconv_upper_bound(LabeledGrid(LINE.phi, np.ones(4, bool)), 0.5, 3)
    assert res.value == np.inf and res.window_limited
    assert res.to_dict()["bound"] == "inf"


def test_no_inside_points():
    res = rconv_upper_bound(LabeledGrid(LINE.phi, np.zeros(4, bool)), 0.5, 3)
    assert res.value == np.inf and not res.window_limited


def test_bad_r_max():
    with pytest.raises(ValueError):
        rconv_upper_bound(hole_grid(), 0.75, 0.5)


@pytest.mark.parametrize("seed", range(3))
def test_mask_monotone_and_semigroup(seed):
    rng = np.random.default_rng(seed)
    phi = rng.uniform(-1, 1, size=(300, 2))
    inside = np.linalg.norm(phi, axis=1) < 0.6 + 0.2 * np.sin(5 * np.arctan2(phi[:, 1], phi[:, 0]))
    g = LabeledGrid(phi, inside)
    rs = [-0.3, -0.1, -0.02, 0.0, 0.05, 0.2, 0.4]
    masks = [discrete_offset(g, r).mask for r in rs]
    for a, b in zip(masks, masks[1:]):
        assert np.all(a <= b)
    assert np.all(masks[0] <= g.inside) and np.all(g.inside <= masks[3])
    for r in (0.05, 0.1, 0.2):
        for s in (0.05, 0.15):
            twice = offset_mask(phi, offset_mask(phi, inside, r), s)
            assert np.all(twice <= offset_mask(phi, inside, r + s))


def test_disk_specificity():
    for seed in range(3):
        grid, _ = generate(ShapeSpec("disk", 0, seed, {"spacing": 0.05}))
        for r in np.linspace(grid.epsilon * 1.01, 1, 12):
            assert len(closing_violations(grid, r, grid.epsilon)) == 0
        assert rconv_upper_bound(grid, grid.epsilon, 1.0).value == np.inf


@pytest.mark.parametrize("seed", range(10))
def test_sweep_matches_scan(seed):
    rng = np.random.default_rng(seed)
    spacing = 0.25
    k = int(rng.integers(10, 22))
    g1 = (np.arange(k) - k / 2) * spacing
    phi = np.stack(np.meshgrid(g1, g1, indexing="ij"), -1).reshape(-1, 2)
    th = rng.uniform(0, 2 * np.pi)
    phi = phi @ np.array([[np.cos(th), -np.sin(th)], [np.sin(th), np.cos(th)]])
    c = rng.uniform(-0.5, 0.5, 2)
    inside = np.abs(np.linalg.norm(phi - c, axis=1) - 1.0) > rng.uniform(0.1, 0.4)
    grid = LabeledGrid(phi, inside)
    eps = covering_radius(spacing, 2)
    r_max = 1.5
    res = rconv_upper_bound(grid, eps, r_max)
    ref = scan(grid, eps, r_max)
    if np.isinf(ref):
        assert np.isinf(res.value)
    else:
        assert res.value <= ref <= res.value + 1e-3 + 1e-12
        assert res.witness in closing_violations(grid, res.value, eps).points
