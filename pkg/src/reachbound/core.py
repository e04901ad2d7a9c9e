"""Geometric primitives shared by every bound in the package.

The spherical-cap function ``g`` and its inverse, point-cloud normalisation,
and exact nearest-neighbour distance evaluation with deterministic
tie-breaking (lowest point index wins).
"""

from __future__ import annotations

import os
import warnings

import numpy as np
from scipy.spatial import cKDTree

__all__ = [
    "DOMAIN_SLACK",
    "DomainError",
    "DimensionError",
    "g",
    "g_inv",
    "point_cloud",
    "SpatialIndex",
    "build_index",
    "nearest_distance",
    "CloudOracle",
    "BruteForceOracle",
    "sqdist",
    "default_workers",
]

DOMAIN_SLACK = 1e-12

# tree pruning stops paying off beyond this dimension / below this size
_TREE_MAX_DIM = 12
_TREE_MIN_POINTS = 64
# candidate neighbours fetched per query before falling back to a ball search
_TREE_K = 2
_BRUTE_CHUNK = 1 << 22


class DomainError(ValueError):
    """Argument outside the domain of ``g`` or ``g_inv``."""


class DimensionError(ValueError):
    """Query and reference set live in different dimensions."""


def default_workers():
    """Worker count, capped by the ``REACHBOUND_THREADS`` environment variable."""
    env = os.environ.get("REACHBOUND_THREADS")
    ncpu = os.cpu_count() or 1
    if env:
        try:
            return max(1, min(int(env), ncpu))
        except ValueError:
            warnings.warn(f"ignoring malformed REACHBOUND_THREADS={env!r}")
    return ncpu


def _scalar_or_array(out, *inputs):
    if all(np.ndim(v) == 0 for v in inputs):
        return float(out)
    return out


def g(alpha, x):
    """Radius of the sphere whose cap over a chord of length ``alpha`` has height ``x``.

    ``alpha**2 / (8 x) + x / 2`` for ``x > 0`` and ``inf`` for ``x == 0``.
    Valid for ``0 <= x <= alpha / 2``; arguments within ``DOMAIN_SLACK`` of
    either end of the domain are clamped, anything further out raises
    :class:`DomainError`. Broadcasts over numpy arrays.
    """
    a = np.asarray(alpha, dtype=float)
    xx = np.asarray(x, dtype=float)
    if np.any(a < 0) or np.any(np.isnan(a)) or np.any(np.isnan(xx)):
        raise DomainError("alpha must be a non-negative number")
    half = a / 2
    if np.any(xx < -DOMAIN_SLACK) or np.any(xx > half + DOMAIN_SLACK):
        raise DomainError("x must lie in [0, alpha/2]")
    xx = np.clip(xx, 0.0, half)
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        out = np.where(xx > 0, a * a / (8 * xx) + xx / 2, np.inf)
    return _scalar_or_array(out, alpha, x)


def g_inv(alpha, r):
    """Cap height ``x`` in ``[0, alpha/2]`` with ``g(alpha, x) == r``.

    Evaluated as ``(alpha**2/4) / (r + sqrt(r**2 - alpha**2/4))``, which equals
    ``r - sqrt(r**2 - alpha**2/4)`` without the cancellation for ``r >> alpha``.
    """
    a = np.asarray(alpha, dtype=float)
    rr = np.asarray(r, dtype=float)
    if np.any(a < 0) or np.any(np.isnan(a)) or np.any(np.isnan(rr)):
        raise DomainError("alpha must be a non-negative number")
    half = a / 2
    if np.any(rr < half - DOMAIN_SLACK):
        raise DomainError("r must be at least alpha/2")
    rr = np.maximum(rr, half)
    quarter = half * half
    with np.errstate(invalid="ignore", divide="ignore", over="ignore"):
        root = np.sqrt((rr - half) * (rr + half))
        out = np.where(np.isinf(rr), 0.0, quarter / (rr + root))
        out = np.where(quarter == 0, 0.0, out)
    out = np.minimum(out, half)
    return _scalar_or_array(out, alpha, r)


def point_cloud(points, dedupe=True):
    """Validate ``points`` as an ``(n, d)`` float array.

    Exact duplicate rows are dropped (first occurrence kept, order preserved),
    so point ids refer to the deduplicated cloud.
    """
    arr = np.asarray(points, dtype=float)
    if arr.ndim == 1:
        arr = arr[:, None]
    if arr.ndim != 2 or arr.shape[0] == 0 or arr.shape[1] == 0:
        raise ValueError("a point cloud needs at least one point of dimension >= 1")
    if not np.all(np.isfinite(arr)):
        raise ValueError("point coordinates must be finite")
    if dedupe:
        _, first = np.unique(arr, axis=0, return_index=True)
        if len(first) < len(arr):
            arr = arr[np.sort(first)]
    return np.ascontiguousarray(arr)


def sqdist(a, b):
    """Squared Euclidean distance along the last axis.

    Coordinates are accumulated left to right so the result for a given pair
    of rows is bit-identical whatever the surrounding array shapes.
    """
    diff = a[..., 0] - b[..., 0]
    s = diff * diff
    for k in range(1, a.shape[-1]):
        diff = a[..., k] - b[..., k]
        s = s + diff * diff
    return s


class SpatialIndex:
    """Immutable nearest-neighbour index over a point cloud.

    Uses a k-d tree when it can prune (``d <= 12`` and ``n >= 64``), brute
    force otherwise. Both paths return the same distances and witnesses:
    the witness is the lowest index among points of minimal squared distance.
    """

    def __init__(self, points, workers=None, use_tree=None):
        self.points = point_cloud(points, dedupe=False)
        self.points.setflags(write=False)
        self.n, self.dim = self.points.shape
        self.workers = default_workers() if workers is None else workers
        if use_tree is None:
            use_tree = self.dim <= _TREE_MAX_DIM and self.n >= _TREE_MIN_POINTS
        if use_tree:
            self.tree = cKDTree(self.points)
        else:
            self.tree = None

    @property
    def uses_tree(self):
        return self.tree is not None

    def query(self, queries):
        """Nearest distances and witness ids for an ``(m, d)`` array of queries."""
        q = np.asarray(queries, dtype=float)
        if q.ndim == 1:
            q = q[None, :]
        if q.shape[1] != self.dim:
            raise DimensionError(f"query dimension {q.shape[1]} != index dimension {self.dim}")
        if len(q) == 0:
            return np.empty(0), np.empty(0, dtype=np.intp)
        if self.tree is None:
            return self._query_brute(q)
        return self._query_tree(q)

    def distances(self, queries):
        return self.query(queries)[0]

    def _query_brute(self, q):
        pts = self.points
        step = max(1, _BRUTE_CHUNK // max(self.n, 1))
        dist = np.empty(len(q))
        ids = np.empty(len(q), dtype=np.intp)
        for lo in range(0, len(q), step):
            block = q[lo:lo + step]
            sq = sqdist(block[:, None, :], pts[None, :, :])
            k = np.argmin(sq, axis=1)
            ids[lo:lo + step] = k
            dist[lo:lo + step] = np.sqrt(sq[np.arange(len(block)), k])
        return dist, ids

    def _query_tree(self, q):
        dist = np.empty(len(q))
        ids = np.empty(len(q), dtype=np.intp)
        todo = np.arange(len(q))
        k = min(_TREE_K, self.n)
        while len(todo):
            sub = q[todo]
            tdist, tidx = self.tree.query(sub, k=k, workers=self.workers)
            if k == 1:
                tdist, tidx = tdist[:, None], tidx[:, None]
            sq = sqdist(sub[:, None, :], self.points[tidx])
            # lowest squared distance, then lowest id
            best_sq = sq.min(axis=1)
            cand = np.where(sq == best_sq[:, None], tidx, self.n)
            ids[todo] = cand.min(axis=1)
            dist[todo] = np.sqrt(best_sq)
            if k == self.n:
                break
            # a point beyond the k fetched could tie or win by rounding
            margin = dist[todo] * (1 + 1e-9) + 1e-300
            todo = todo[tdist[:, -1] <= margin]
            k = min(4 * k, self.n)
        return dist, ids


def build_index(cloud, workers=None, use_tree=None):
    """Build an immutable :class:`SpatialIndex` over ``cloud``."""
    return SpatialIndex(cloud, workers=workers, use_tree=use_tree)


def nearest_distance(index, q):
    """``(distance, witness id)`` of the point of ``index`` nearest to ``q``."""
    q = np.asarray(q, dtype=float).reshape(-1)
    if q.shape[0] != index.dim:
        raise DimensionError(f"query dimension {q.shape[0]} != index dimension {index.dim}")
    d, i = index.query(q[None, :])
    return float(d[0]), int(i[0])


class CloudOracle:
    """Distance to a finite point set, backed by a :class:`SpatialIndex`."""

    kind = "cloud"

    def __init__(self, cloud_or_index):
        if isinstance(cloud_or_index, SpatialIndex):
            self.index = cloud_or_index
        else:
            self.index = SpatialIndex(cloud_or_index)
        self.dim = self.index.dim

    def distances(self, queries):
        return self.index.distances(queries)


class BruteForceOracle(CloudOracle):
    """Cloud oracle that never uses the tree; reference path for equivalence checks."""

    def __init__(self, cloud):
        super().__init__(SpatialIndex(cloud, workers=1, use_tree=False))
