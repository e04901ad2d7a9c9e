import json
import warnings

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from reachbound.core import g
from reachbound.reach_bound import reach_upper_bound
from reachbound.synth import ShapeSpec, generate


def circle(n):
    t = 2 * np.pi * np.arange(n) / n
    return np.c_[np.cos(t), np.sin(t)]


def circle_hausdorff(n):
    # farthest circle point from the sample sits mid-arc between neighbours
    return 2 * np.sin(np.pi / (2 * n))


def test_two_point_example():
    res = reach_upper_bound([[-1, 0], [1, 0]], 0.5)
    assert res.value == 1.25 == g(2, 0.5)
    assert (res.witness.i, res.witness.j) == (0, 1)
    d = json.loads(res.to_json())
    assert d["bound"] == 1.25 and d["witness_i"] == 0 and d["alpha"] == 2.0


def test_empty_admissible_set_is_infinite():
    with pytest.warns(UserWarning):
        res = reach_upper_bound([[-1, 0], [1, 0]], 1.5)
    assert res.value == np.inf and res.witness is None
    assert res.to_dict()["bound"] == "inf"


def test_negative_epsilon():
    with pytest.raises(ValueError):
        reach_upper_bound([[0, 0], [1, 0]], -0.1)


def test_circle_360():
    res = reach_upper_bound(circle(360), 0.009)
    assert 1.0 <= res.value <= 1.01


def test_circle_convergence():
    excess = []
    for n in (90, 180, 360, 720):
        eps = circle_hausdorff(n)
        v = reach_upper_bound(circle(n), eps).value
        assert v >= 1.0
        excess.append((v - 1, 3 * np.sqrt(eps)))
    e = [a for a, _ in excess]
    assert all(b < a for a, b in zip(e, e[1:]))
    assert all(a <= bound for a, bound in excess[2:])


@pytest.mark.parametrize("seed", range(4))
def test_pruned_equals_unpruned(seed):
    rng = np.random.default_rng(seed)
    pts = rng.uniform(size=(250, 1 + seed % 3))
    eps = 0.01
    a = reach_upper_bound(pts, eps)
    b = reach_upper_bound(pts, eps, prune=False)
    assert a.value == b.value and a.witness == b.witness
    assert b.pairs_pruned == 0 and a.pairs_pruned > 0


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32 - 1), st.floats(0, 0.05), st.floats(0, 0.05))
def test_monotone_in_epsilon(seed, e1, e2):
    rng = np.random.default_rng(seed)
    pts = rng.uniform(size=(60, 2))
    lo, hi = sorted((e1, e2))
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        assert reach_upper_bound(pts, hi).value >= reach_upper_bound(pts, lo).value


@pytest.mark.parametrize("kind,params", [
    ("arc", {"radius": 1.0, "angle": np.pi}),
    ("two_spheres", {}),
    ("paraboloid", {"c": 1.0}),
])
def test_sound_on_analytic_sets(kind, params):
    n = 400 if kind == "arc" else 1500
    pts, truth = generate(ShapeSpec(kind, n, 0, params))
    res = reach_upper_bound(pts, truth.hausdorff_bound)
    assert res.value >= truth.reach
