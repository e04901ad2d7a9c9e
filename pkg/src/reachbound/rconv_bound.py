"""Discrete dilation / erosion on labelled sample clouds and the r-convexity bound.

A :class:`LabeledGrid` is a cloud ``phi`` covering a region together with
the membership of each point in an unknown closed set ``A``. Offsets are
taken inside ``phi``: dilating keeps the points of ``phi`` within ``r`` of
the inside points, eroding keeps the inside points farther than ``|r|``
from every outside point. A point labelled outside that survives a dilation
by ``r - eps`` followed by an erosion by ``r + eps`` certifies
``rconv(A) <= r`` when ``eps`` covers the sampling gaps.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .core import SpatialIndex, point_cloud, sqdist

__all__ = [
    "LabeledGrid",
    "OffsetMask",
    "ViolationSet",
    "RconvBoundResult",
    "covering_radius",
    "offset_mask",
    "discrete_offset",
    "closing_violations",
    "rconv_upper_bound",
]


def covering_radius(spacing, d):
    """Covering radius ``spacing * sqrt(d) / 2`` of the cubic lattice in R^d."""
    if spacing <= 0:
        raise ValueError("lattice spacing must be positive")
    if d < 1:
        raise ValueError("dimension must be at least 1")
    return spacing * np.sqrt(d) / 2


@dataclass
class LabeledGrid:
    phi: np.ndarray
    inside: np.ndarray
    epsilon: float | None = None

    def __post_init__(self):
        phi = np.asarray(self.phi, dtype=float)
        inside = np.asarray(self.inside, dtype=bool).reshape(-1)
        if phi.ndim == 1:
            phi = phi[:, None]
        if len(phi) != len(inside):
            raise ValueError("need one label per sample point")
        _, first, inv = np.unique(phi, axis=0, return_index=True, return_inverse=True)
        inv = inv.reshape(-1)
        if len(first) < len(phi):
            clash = np.zeros(len(first), dtype=int)
            np.add.at(clash, inv, inside.astype(int))
            counts = np.bincount(inv)
            if np.any((clash > 0) & (clash < counts)):
                raise ValueError("duplicate sample points carry different labels")
            keep = np.sort(first)
            phi, inside = phi[keep], inside[keep]
        self.phi = point_cloud(phi, dedupe=False)
        self.inside = inside
        if self.epsilon is not None and not self.epsilon > 0:
            raise ValueError("epsilon must be positive")
        self._dist_in = None

    @property
    def n(self):
        return len(self.phi)

    @property
    def dim(self):
        return self.phi.shape[1]

    def inside_distance(self):
        """Distance from every sample point to the nearest inside point (inf if none)."""
        if self._dist_in is None:
            if not self.inside.any():
                self._dist_in = np.full(self.n, np.inf)
            else:
                d = SpatialIndex(self.phi[self.inside]).distances(self.phi)
                d[self.inside] = 0.0
                self._dist_in = d
        return self._dist_in


@dataclass(frozen=True)
class OffsetMask:
    mask: np.ndarray
    r: float


@dataclass(frozen=True)
class ViolationSet:
    r: float
    epsilon: float
    points: np.ndarray

    def __len__(self):
        return len(self.points)


@dataclass(frozen=True)
class RconvBoundResult:
    value: float
    epsilon: float
    r_max: float
    witness: int | None
    window_limited: bool
    candidates: int = 0

    def to_dict(self):
        return {
            "bound": "inf" if np.isinf(self.value) else self.value,
            "epsilon": self.epsilon,
            "r_max": self.r_max,
            "witness": self.witness,
            "window_limited": self.window_limited,
        }

    def to_json(self):
        return json.dumps(self.to_dict(), indent=2)


def _dist_to(points, subset_mask, queries):
    if not subset_mask.any():
        return np.full(len(queries), np.inf)
    return SpatialIndex(points[subset_mask]).distances(queries)


def offset_mask(points, mask, r):
    """Offset of the subset ``mask`` of ``points`` by signed radius ``r``, within ``points``."""
    points = np.asarray(points, dtype=float)
    mask = np.asarray(mask, dtype=bool)
    if r >= 0:
        if not mask.any():
            return np.zeros(len(points), dtype=bool)
        d = _dist_to(points, mask, points)
        d[mask] = 0.0
        return d <= r
    out = np.zeros(len(points), dtype=bool)
    if mask.any():
        out[mask] = _dist_to(points, ~mask, points[mask]) > -r
    return out


def discrete_offset(grid, r):
    """Dilation (``r >= 0``) or erosion (``r < 0``) of the inside points, as a mask over ``phi``."""
    if r >= 0:
        return OffsetMask(grid.inside_distance() <= r, float(r))
    return OffsetMask(offset_mask(grid.phi, grid.inside, r), float(r))


def closing_violations(grid, r, epsilon):
    """Outside points kept by dilating the inside set by ``r - epsilon`` then eroding by ``r + epsilon``.

    A non-empty result certifies ``rconv(A) <= r`` (and so ``reach(A) <= r``)
    whenever ``epsilon`` is at least the covering radius of ``phi``.
    """
    if not r > epsilon or epsilon < 0:
        raise ValueError("need r > epsilon >= 0")
    din = grid.inside_distance()
    # dilation by r - eps, written so it agrees bit-for-bit with the sweep
    dilated = din + epsilon <= r
    outside = ~grid.inside
    cand = np.flatnonzero(dilated & outside)
    if len(cand) == 0:
        return ViolationSet(float(r), float(epsilon), cand)
    rest = ~dilated
    if not rest.any():
        return ViolationSet(float(r), float(epsilon), cand)
    d = SpatialIndex(grid.phi[rest]).distances(grid.phi[cand])
    return ViolationSet(float(r), float(epsilon), cand[d - epsilon > r])


def _sweep(dists, din, epsilon, limit, complete):
    """Smallest violating radius for one outside point up to ``limit``.

    ``dists`` are distances from the point to its neighbours (itself included)
    and ``din`` their distances to the inside set. Returns ``(r, exhausted)``
    where ``exhausted`` marks a radius only reached once the erosion ball
    holds every sample point (``complete`` says the neighbour list is all of
    ``phi``); ``r`` is inf when there is no violation.
    """
    order = np.lexsort((din, dists))
    a = dists[order] - epsilon
    b = np.maximum.accumulate(din[order] + epsilon)
    ends = np.flatnonzero(np.r_[a[1:] != a[:-1], True])
    a_k, b_k = a[ends], b[ends]
    r_k = np.maximum(a_k, b_k)
    nxt = np.r_[a_k[1:], np.inf]
    ok = (r_k < nxt) & (r_k <= limit) & (r_k > epsilon)
    if not ok.any():
        return np.inf, False
    k = int(np.argmax(ok))
    return float(r_k[k]), complete and k == len(r_k) - 1


def rconv_upper_bound(grid, epsilon, r_max):
    """Smallest ``r`` in ``(epsilon, r_max]`` with a closing violation, or ``inf``.

    Computed exactly per outside point by sweeping its neighbours in order of
    distance: the violation condition only changes where the erosion ball
    picks up a new neighbour. A violation that needs an erosion ball holding
    every sample point says nothing beyond the window: the result is then
    ``inf`` with ``window_limited`` set.
    """
    if not r_max > epsilon or epsilon < 0:
        raise ValueError("need r_max > epsilon >= 0")
    outside = np.flatnonzero(~grid.inside)
    if len(outside) == 0:
        return RconvBoundResult(np.inf, float(epsilon), float(r_max), None, True)
    if not grid.inside.any():
        return RconvBoundResult(np.inf, float(epsilon), float(r_max), None, False)
    din = grid.inside_distance()
    tree = SpatialIndex(grid.phi).tree
    phi = grid.phi

    order = outside[np.lexsort((outside, din[outside]))]
    best, witness, limited, examined = float(r_max), None, False, 0
    for q in order:
        # q itself must be recaptured by the dilation
        if din[q] + epsilon > best:
            break
        examined += 1
        if tree is not None:
            reach = (best + epsilon) * (1 + 1e-9) + 1e-12
            nb = np.asarray(tree.query_ball_point(phi[q], reach), dtype=np.intp)
        else:
            nb = np.arange(len(phi))
        d = np.sqrt(sqdist(phi[q][None, :], phi[nb]))
        r_q, ex = _sweep(d, din[nb], epsilon, best, len(nb) == len(phi))
        if np.isinf(r_q):
            continue
        key, cur = (r_q, ex, q), (best, limited, witness)
        if witness is None or key < cur:
            best, witness, limited = r_q, int(q), ex
    if witness is None:
        return RconvBoundResult(np.inf, float(epsilon), float(r_max), None, False, examined)
    if limited:
        return RconvBoundResult(np.inf, float(epsilon), float(r_max), witness, True, examined)
    return RconvBoundResult(best, float(epsilon), float(r_max), witness, False, examined)
