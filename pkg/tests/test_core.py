import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from reachbound.core import (
    BruteForceOracle,
    CloudOracle,
    DimensionError,
    DomainError,
    SpatialIndex,
    build_index,
    default_workers,
    g,
    g_inv,
    nearest_distance,
    point_cloud,
)


def test_g_examples():
    assert g(2, 1) == 1.0
    assert g(4, 1) == 2.5
    assert g(1, 0) == np.inf


def test_g_inv_examples():
    assert g_inv(2, 1) == 1.0
    assert g_inv(4, 2.5) == 1.0
    assert g_inv(0, 5) == 0.0


def test_g_domain():
    with pytest.raises(DomainError):
        g(2, 1.1)
    with pytest.raises(DomainError):
        g(2, -0.1)
    with pytest.raises(DomainError):
        g_inv(4, 1.0)
    # rounding slack is clamped, not rejected
    assert g(2, 1 + 1e-13) == 1.0
    assert g_inv(2, 1 - 1e-13) == 1.0


def test_g_vectorised():
    out = g(np.array([2.0, 4.0, 1.0]), np.array([1.0, 1.0, 0.0]))
    assert np.array_equal(out, [1.0, 2.5, np.inf])
    assert isinstance(g(4, 1), float)


@settings(max_examples=300, deadline=None)
@given(st.floats(1e-6, 1e6), st.floats(1e-6, 1))
def test_g_bounds_and_round_trip(alpha, t):
    x = t * alpha / 2
    v = g(alpha, x)
    assert v >= x and v >= alpha / 2
    assert abs(g(alpha, g_inv(alpha, v)) - v) <= 1e-12 * v
    # away from the vertex the inverse is well conditioned in x as well
    if t <= 0.9:
        assert abs(g_inv(alpha, v) - x) <= 1e-9 * x


@settings(max_examples=100, deadline=None)
@given(st.floats(1e-3, 1e3), st.lists(st.floats(0.01, 1), min_size=2, max_size=20))
def test_g_monotone(alpha, ts):
    xs = np.sort(np.array(ts) * alpha / 2)
    v = g(alpha, xs)
    assert np.all(np.diff(v) <= 0)
    rs = np.sort(alpha / 2 + np.array(ts) * alpha)
    assert np.all(np.diff(g_inv(alpha, rs)) <= 0)


def test_point_cloud_validation_and_dedupe():
    pts = point_cloud([[0, 0], [1, 1], [0, 0], [2, 2]])
    assert pts.tolist() == [[0, 0], [1, 1], [2, 2]]
    with pytest.raises(ValueError):
        point_cloud(np.empty((0, 2)))
    with pytest.raises(ValueError):
        point_cloud([[0, np.nan]])


def test_nearest_distance_examples():
    idx = build_index([[0, 0], [2, 0]])
    assert nearest_distance(idx, [1, 0]) == (1.0, 0)
    assert nearest_distance(idx, [0, 0]) == (0.0, 0)
    assert nearest_distance(build_index([[0, 0], [3, 4]]), [3, 0]) == (3.0, 0)
    single = build_index([[1.0, 2.0, 3.0]])
    q = np.random.default_rng(0).normal(size=(5, 3))
    assert np.allclose(single.distances(q), np.linalg.norm(q - [1, 2, 3], axis=1))
    with pytest.raises(DimensionError):
        nearest_distance(idx, [1, 0, 0])


@pytest.mark.parametrize("d", [1, 2, 3, 6])
def test_index_matches_brute_force(d):
    rng = np.random.default_rng(d)
    pts = rng.uniform(size=(300, d))
    q = rng.uniform(size=(2000, d))
    tree = SpatialIndex(pts)
    brute = SpatialIndex(pts, use_tree=False)
    assert tree.uses_tree and not brute.uses_tree
    dt, it = tree.query(q)
    db, ib = brute.query(q)
    assert np.array_equal(dt, db)
    assert np.array_equal(it, ib)


def test_index_ties_go_to_lowest_id():
    # lattice midpoints are equidistant from several points
    g1 = np.arange(10.0)
    pts = np.stack(np.meshgrid(g1, g1, indexing="ij"), -1).reshape(-1, 2)
    rng = np.random.default_rng(1)
    pts = pts[rng.permutation(len(pts))]
    q = np.stack(np.meshgrid(g1[:-1] + 0.5, g1[:-1] + 0.5, indexing="ij"), -1).reshape(-1, 2)
    dt, it = SpatialIndex(pts).query(q)
    db, ib = SpatialIndex(pts, use_tree=False).query(q)
    assert np.array_equal(dt, db) and np.array_equal(it, ib)
    assert np.allclose(dt, np.sqrt(0.5))


@settings(max_examples=40, deadline=None)
@given(st.integers(64, 200), st.integers(1, 5), st.integers(0, 2**32 - 1))
def test_oracle_equivalence_property(n, d, seed):
    rng = np.random.default_rng(seed)
    pts = point_cloud(np.round(rng.uniform(size=(n, d)) * 8) / 8)
    q = np.round(rng.uniform(size=(100, d)) * 16) / 16
    assert np.array_equal(CloudOracle(pts).distances(q), BruteForceOracle(pts).distances(q))


def test_default_workers_env(monkeypatch):
    monkeypatch.setenv("REACHBOUND_THREADS", "1")
    assert default_workers() == 1
    monkeypatch.setenv("REACHBOUND_THREADS", "bogus")
    with pytest.warns(UserWarning):
        assert default_workers() >= 1
