import numpy as np
import pytest

from reachbound.rconv_bound import LabeledGrid
from reachbound.synth import (
    KINDS,
    GroundTruth,
    ProfileModel,
    ShapeSpec,
    generate,
    ground_truth_profile,
    graph_mesh,
    membership,
)


def test_two_rays_small():
    pts, truth = generate(ShapeSpec("two_rays", 3, 0, {"theta": np.pi / 2}))
    assert len(pts) == 5
    assert np.allclose(np.linalg.norm(pts, axis=1), [0, 0.5, 1, 0.5, 1])
    assert truth.profile_model.slope == pytest.approx(1.5, abs=1e-12)
    assert truth.reach == 0.0


def test_arc_three_points():
    pts, truth = generate(ShapeSpec("arc", 3, 0, {"radius": 1.0, "angle": np.pi}))
    assert np.allclose(pts, [[1, 0], [0, 1], [-1, 0]], atol=1e-15)
    assert truth.reach == 1.0
    assert ground_truth_profile(ShapeSpec("arc", 3), 0.3) == 1.0


def test_paraboloid_on_surface():
    pts, truth = generate(ShapeSpec("paraboloid", 1500, 4, {"c": 4.0}))
    assert pts.shape == (1500, 3)
    assert np.allclose(pts[:, 0] ** 2 + pts[:, 1] ** 2, 8 * pts[:, 2], atol=1e-10)
    assert truth.profile_model.intercept == 4 and truth.profile_model.slope == 0.5
    assert truth.reach == truth.rconv == 4


def test_paraboloid_embedded():
    pts, truth = generate(ShapeSpec("paraboloid", 500, 1, {"m": 3, "c": 6.0, "d": 5}))
    assert pts.shape == (500, 5)
    # a rank-4 cloud: the fifth singular value vanishes
    s = np.linalg.svd(pts - pts.mean(axis=0), compute_uv=False)
    assert s[-1] < 1e-9 * s[0]
    assert truth.rconv == np.inf
    assert ground_truth_profile(ShapeSpec("paraboloid", 10, 0, {"m": 3, "c": 6.0}), 1.0) == 6.5


def test_two_spheres_model():
    spec = ShapeSpec("two_spheres", 3000, 0, {})
    assert ground_truth_profile(spec, 1.0) == 2.0
    assert ground_truth_profile(spec, 3.0) == 4.0
    pts, truth = generate(spec)
    r = np.minimum(np.linalg.norm(pts - [6, 0, 0, 0], axis=1), np.linalg.norm(pts + [6, 0, 0, 0], axis=1))
    assert np.allclose(r, 2.0)
    assert truth.reach == 2.0


def test_c2_graph_model():
    spec = ShapeSpec("c2_graph", 200, 0, {"h1": 0.5, "h2": 0.0})
    assert ground_truth_profile(spec, 0.0) == 1.0
    assert ground_truth_profile(spec, 0.2) == pytest.approx(1.1, abs=1e-15)
    with pytest.raises(ValueError):
        generate(ShapeSpec("c2_graph", 200, 0, {"h1": 0.5, "h2": -3.0}))


@pytest.mark.parametrize("kind", KINDS)
def test_determinism(kind):
    n = 4 if kind in ("disk", "set_U", "set_W") else 200
    a, ta = generate(ShapeSpec(kind, n, 7, {}))
    b, tb = generate(ShapeSpec(kind, n, 7, {}))
    c, _ = generate(ShapeSpec(kind, n, 8, {}))
    if isinstance(a, LabeledGrid):
        assert np.array_equal(a.phi, b.phi) and np.array_equal(a.inside, b.inside)
        assert not np.array_equal(a.phi[:10], c.phi[:10])
    else:
        assert np.array_equal(a, b)
        if kind not in ("two_rays", "arc"):
            assert not np.array_equal(a, c)
    assert ta == tb
    if ta.rconv is not None:
        assert ta.reach <= ta.rconv


@pytest.mark.parametrize("kind", ["disk", "set_U", "set_W"])
def test_lattice_labels_are_exact(kind):
    grid, truth = generate(ShapeSpec(kind, 3, 1, {}))
    w = 3.0
    inwin = np.all(np.abs(grid.phi) <= w, axis=1)
    assert np.array_equal(grid.inside, membership(kind, grid.phi) & inwin)
    assert grid.epsilon == pytest.approx(0.7 / 3 / np.sqrt(2), rel=1e-15)
    assert grid.inside.any() and (~grid.inside).any()


def test_set_lattice_runs_past_window():
    grid, _ = generate(ShapeSpec("set_U", 2, 0, {}))
    assert np.abs(grid.phi).max() > 3 + 6


def test_ground_truth_validation():
    with pytest.raises(ValueError):
        GroundTruth(2.0, 1.0, 0.1)
    model = ProfileModel(((1.0, 2.0, 0.5),))
    assert model(1.0) == 2.5
    with pytest.raises(ValueError):
        model(1.5)


def test_bad_specs():
    with pytest.raises(ValueError):
        generate(ShapeSpec("moebius", 10))
    with pytest.raises(ValueError):
        generate(ShapeSpec("two_rays", 10, 0, {"theta": np.pi}))
    with pytest.raises(ValueError):
        generate(ShapeSpec("two_spheres", 10, 0, {"gap": 3.0}))
    with pytest.raises(ValueError):
        generate(ShapeSpec("arc", 10, 0, {"d": 1}))


def test_graph_mesh_interpolates():
    pts, _ = generate(ShapeSpec("paraboloid", 400, 0, {"c": 1.0}))
    mesh = graph_mesh(pts)
    assert len(mesh.triangles) > len(pts)
    with pytest.raises(ValueError):
        graph_mesh(pts[:, :2])
