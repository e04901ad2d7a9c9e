"""Exact β-reach profiles of finite point clouds.

For a cloud ``A`` and a distance oracle ``S`` (the cloud itself or a
triangle mesh built over it), every pair ``i < j`` gives a chord length
``alpha``, a midpoint distance ``x = dist_S(midpoint)`` and a value
``g(alpha, min(x, alpha/2))``. The β-reach at ``beta`` is the minimum value
over pairs with ``x >= beta``; the profile is that map for all ``beta``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.spatial import cKDTree

from . import _pairs
from .core import CloudOracle, DimensionError, SpatialIndex, g, point_cloud, sqdist

__all__ = [
    "PairRecord",
    "BetaReachProfile",
    "ProfileFit",
    "TriangleMesh",
    "MeshOracle",
    "pair_records",
    "profile",
    "beta_reach_at",
    "distance_to_mesh",
    "fit_profile",
]


@dataclass(frozen=True)
class PairRecord:
    i: int
    j: int
    alpha: float
    x: float
    gval: float


@dataclass
class BetaReachProfile:
    """Non-decreasing step function ``beta -> reach_beta``.

    ``value[k]`` holds on ``(beta[k], beta[k+1]]`` (on ``[0, beta[1]]`` for
    the first step) and the last step ends at ``beta_max``; beyond it the
    profile is ``inf``. So the value at any ``beta`` includes every pair whose
    midpoint distance equals ``beta``. When ``truncated_at`` is set the
    profile is exact only on ``[0, truncated_at]`` and is not defined beyond.
    """

    beta: np.ndarray
    value: np.ndarray
    beta_max: float
    truncated_at: float | None = None
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.beta = np.asarray(self.beta, dtype=float)
        self.value = np.asarray(self.value, dtype=float)
        if self.beta.ndim != 1 or self.beta.shape != self.value.shape or len(self.beta) == 0:
            raise ValueError("profile needs matching, non-empty breakpoint arrays")
        if self.beta[0] != 0 or np.any(np.diff(self.beta) <= 0):
            raise ValueError("breakpoints must start at 0 and increase strictly")

    def __call__(self, beta):
        b = np.asarray(beta, dtype=float)
        if np.any(b < 0):
            raise ValueError("beta must be non-negative")
        if self.truncated_at is not None and np.any(b > self.truncated_at):
            raise ValueError(f"profile is only known up to beta = {self.truncated_at}")
        k = np.clip(np.searchsorted(self.beta, b, side="left") - 1, 0, None)
        out = np.where(b > self.beta_max, np.inf, self.value[k])
        return float(out) if out.ndim == 0 else out

    def step_value(self, beta):
        """Value of the step starting at or before ``beta`` (right-continuous reading)."""
        b = np.asarray(beta, dtype=float)
        k = np.clip(np.searchsorted(self.beta, b, side="right") - 1, 0, None)
        out = np.where(b > self.beta_max, np.inf, self.value[k])
        return float(out) if out.ndim == 0 else out

    def __len__(self):
        return len(self.beta)

    def equals(self, other):
        """Bit-for-bit equality of breakpoints, values and domain."""
        return (
            np.array_equal(self.beta, other.beta)
            and np.array_equal(self.value, other.value)
            and self.beta_max == other.beta_max
            and self.truncated_at == other.truncated_at
        )


@dataclass(frozen=True)
class ProfileFit:
    beta_lo: float
    beta_hi: float
    intercept: float
    slope: float
    rms_residual: float
    n_samples: int
    weighting: str = "equal per breakpoint"


def _as_oracle(cloud, oracle):
    if oracle is None:
        return CloudOracle(cloud)
    if oracle.dim != cloud.shape[1]:
        raise DimensionError(f"oracle dimension {oracle.dim} != cloud dimension {cloud.shape[1]}")
    return oracle


def _pair_index(cloud, oracle):
    # reuse the oracle's tree only when it indexes the cloud itself
    if isinstance(oracle, CloudOracle) and np.array_equal(oracle.index.points, cloud):
        return oracle.index
    return SpatialIndex(cloud)


def _gvals(alpha, x):
    return g(alpha, np.minimum(x, alpha / 2))


def pair_records(cloud, oracle=None):
    """All pairs ``i < j`` as arrays ``(i, j, alpha, x, gval)``; no pruning."""
    cloud = point_cloud(cloud)
    oracle = _as_oracle(cloud, oracle)
    shells = _pairs.PairShells(SpatialIndex(cloud, use_tree=False))
    i, j, alpha = shells.shell(-1.0, np.inf)
    x = _pairs.midpoint_distances(cloud, i, j, oracle.distances)
    return i, j, alpha, x, _gvals(alpha, x)


def _build_profile(x, gval, beta_cap=None, meta=None):
    if beta_cap is not None:
        xe = np.minimum(x, beta_cap)
    else:
        xe = x
    if len(xe) == 0:
        return BetaReachProfile([0.0], [np.inf], 0.0, meta=meta or {})
    order = np.lexsort((gval, -xe))
    xs, gs = xe[order], gval[order]
    run = np.minimum.accumulate(gs)
    last = np.flatnonzero(np.r_[xs[1:] != xs[:-1], True])
    cx, cm = xs[last], run[last]
    keep = np.r_[True, cm[1:] < cm[:-1]]
    cx, cm = cx[keep][::-1], cm[keep][::-1]
    beta = np.r_[0.0, cx[:-1]]
    truncated = None
    if beta_cap is not None and np.max(x) >= beta_cap:
        truncated = float(beta_cap)
    return BetaReachProfile(beta, cm, float(cx[-1]), truncated, meta or {})


_BATCH = 1 << 14


def _suffix_min(xe, gv):
    """Sorted ``xe`` and ``min(g over xe' >= xe)`` for a left-closed lookup."""
    order = np.argsort(xe, kind="stable")
    xs = xe[order]
    sm = np.minimum.accumulate(gv[order][::-1])[::-1]
    return xs, sm


def _evaluate(cloud, i, j, alpha, oracle, cap, xs, gs):
    """Midpoint distances and ``g`` values for the pairs that can shape the profile.

    Oracles with a cheap upper bound on distance (``upper_distances``) get
    their exact distance evaluated in batches of most promising pairs first;
    a pair whose best possible value is already matched at a larger scale by
    an evaluated pair cannot change the profile and is skipped. ``xs`` and
    ``gs`` hold pairs evaluated earlier and are extended in place.
    """
    upper = getattr(oracle, "upper_distances", None)
    if upper is None:
        x = _pairs.midpoint_distances(cloud, i, j, oracle.distances)
        xs.append(x)
        gs.append(_gvals(alpha, x))
        return len(i)
    ub = _pairs.midpoint_distances(cloud, i, j, upper)
    hi = ub if cap is None else np.minimum(ub, cap)
    lb = _gvals(alpha, ub)
    order = np.argsort(lb, kind="stable")
    i, j, alpha, hi, lb = i[order], j[order], alpha[order], hi[order], lb[order]
    done = 0
    while len(i):
        if xs:
            xe = np.concatenate(xs)
            if cap is not None:
                xe = np.minimum(xe, cap)
            sx, sm = _suffix_min(xe, np.concatenate(gs))
            k = np.searchsorted(sx, hi, side="left")
            best = np.where(k < len(sx), sm[np.minimum(k, len(sx) - 1)], np.inf)
            live = best > lb
            i, j, alpha, hi, lb = i[live], j[live], alpha[live], hi[live], lb[live]
        take = slice(0, _BATCH)
        x = _pairs.midpoint_distances(cloud, i[take], j[take], oracle.distances)
        xs.append(x)
        gs.append(_gvals(alpha[take], x))
        done += len(x)
        i, j, alpha, hi, lb = i[_BATCH:], j[_BATCH:], alpha[_BATCH:], hi[_BATCH:], lb[_BATCH:]
    return done


def profile(cloud, oracle=None, beta_cap=None, prune=True):
    """Exact β-reach profile of ``cloud`` against ``oracle`` (default: the cloud).

    With ``beta_cap`` the profile is computed on ``[0, beta_cap]`` only, and
    ``prune`` lets pairs be skipped once ``alpha/2`` exceeds the profile value
    at the cap (no such pair can lower any tracked value since
    ``g >= alpha/2``). Pruned and unpruned results are identical.
    """
    cloud = point_cloud(cloud)
    oracle = _as_oracle(cloud, oracle)
    if beta_cap is not None and beta_cap < 0:
        raise ValueError("beta_cap must be non-negative")
    index = _pair_index(cloud, oracle)
    shells = _pairs.PairShells(index)
    meta = {"n_points": len(cloud), "pairs_total": shells.total, "oracle": getattr(oracle, "kind", "custom")}
    xs, gs = [], []
    if beta_cap is None or not prune:
        i, j, alpha = shells.shell(-1.0, np.inf)
        meta["pairs_examined"] = _evaluate(cloud, i, j, alpha, oracle, beta_cap, xs, gs)
    else:
        examined = 0
        r_lo, r_hi = -1.0, _pairs.initial_radius(index, 2.5 * beta_cap)
        while True:
            i, j, alpha = shells.shell(r_lo, r_hi)
            examined += _evaluate(cloud, i, j, alpha, oracle, beta_cap, xs, gs)
            if r_hi >= shells.diameter:
                break
            x_all, g_all = np.concatenate(xs), np.concatenate(gs)
            at_cap = g_all[x_all >= beta_cap]
            v = at_cap.min() if len(at_cap) else np.inf
            if r_hi >= 2 * v:
                break
            r_lo, r_hi = r_hi, max(2 * r_hi, 2 * v) if np.isfinite(v) else 2 * r_hi
        meta["pairs_examined"] = examined
    if not xs:
        return _build_profile(np.empty(0), np.empty(0), beta_cap, meta)
    return _build_profile(np.concatenate(xs), np.concatenate(gs), beta_cap, meta)


def beta_reach_at(cloud, oracle=None, beta=0.0):
    """β-reach of ``cloud`` at a single ``beta``: min of ``g`` over pairs with ``x >= beta``."""
    cloud = point_cloud(cloud)
    oracle = _as_oracle(cloud, oracle)
    if beta < 0:
        raise ValueError("beta must be non-negative")
    index = _pair_index(cloud, oracle)
    shells = _pairs.PairShells(index)
    best = np.inf
    r_lo, r_hi = -1.0, _pairs.initial_radius(index, 2.5 * beta)
    while True:
        i, j, alpha = shells.shell(r_lo, r_hi)
        x = _pairs.midpoint_distances(cloud, i, j, oracle.distances)
        ok = x >= beta
        if np.any(ok):
            best = min(best, float(_gvals(alpha[ok], x[ok]).min()))
        if r_hi >= shells.diameter or r_hi >= 2 * best:
            return best
        r_lo, r_hi = r_hi, max(2 * r_hi, 2 * best) if np.isfinite(best) else 2 * r_hi


# --- triangle meshes -------------------------------------------------------


class TriangleMesh:
    """Triangle soup in R^3; zero-area triangles are dropped at construction."""

    def __init__(self, vertices, triangles, area_tol=1e-14):
        v = np.asarray(vertices, dtype=float)
        t = np.asarray(triangles, dtype=np.intp).reshape(-1, 3)
        if v.ndim != 2 or v.shape[1] != 3:
            raise DimensionError("mesh vertices must be 3-dimensional")
        if not np.all(np.isfinite(v)):
            raise ValueError("mesh vertices must be finite")
        if len(t) and (t.min() < 0 or t.max() >= len(v)):
            raise ValueError("triangle references a missing vertex")
        if len(t):
            a, b, c = v[t[:, 0]], v[t[:, 1]], v[t[:, 2]]
            area2 = np.linalg.norm(np.cross(b - a, c - a), axis=1)
            scale = np.maximum(np.abs(v).max(), 1.0) ** 2
            t = t[area2 > area_tol * scale]
        if len(t) == 0:
            raise ValueError("mesh has no non-degenerate triangles")
        self.vertices = v
        self.triangles = t

    @classmethod
    def from_faces(cls, vertices, faces):
        """Fan-triangulate polygonal faces (lists of vertex ids)."""
        tris = []
        for f in faces:
            f = list(f)
            if len(f) < 3:
                raise ValueError("a face needs at least three vertices")
            tris.extend((f[0], f[k], f[k + 1]) for k in range(1, len(f) - 1))
        return cls(vertices, np.array(tris, dtype=np.intp).reshape(-1, 3))

    @property
    def dim(self):
        return 3

    def corners(self, ids=None):
        t = self.triangles if ids is None else self.triangles[ids]
        return self.vertices[t[..., 0]], self.vertices[t[..., 1]], self.vertices[t[..., 2]]


def _dot(u, w):
    return u[..., 0] * w[..., 0] + u[..., 1] * w[..., 1] + u[..., 2] * w[..., 2]


def point_triangle_sqdist(p, a, b, c):
    """Squared distance from points ``p`` to triangles ``(a, b, c)`` (broadcast over leading axes).

    Closest-feature classification by Voronoi region of vertex, edge or face.
    """
    ab, ac, ap = b - a, c - a, p - a
    d1, d2 = _dot(ab, ap), _dot(ac, ap)
    bp = p - b
    d3, d4 = _dot(ab, bp), _dot(ac, bp)
    cp = p - c
    d5, d6 = _dot(ab, cp), _dot(ac, cp)
    vc = d1 * d4 - d3 * d2
    vb = d5 * d2 - d1 * d6
    va = d3 * d6 - d5 * d4
    with np.errstate(divide="ignore", invalid="ignore"):
        t_ab = d1 / (d1 - d3)
        t_ac = d2 / (d2 - d6)
        t_bc = (d4 - d3) / ((d4 - d3) + (d5 - d6))
        denom = va + vb + vc
        v = vb / denom
        w = vc / denom
    conds = [
        (d1 <= 0) & (d2 <= 0),
        (d3 >= 0) & (d4 <= d3),
        (vc <= 0) & (d1 >= 0) & (d3 <= 0),
        (d6 >= 0) & (d5 <= d6),
        (vb <= 0) & (d2 >= 0) & (d6 <= 0),
        (va <= 0) & (d4 - d3 >= 0) & (d5 - d6 >= 0),
    ]
    shape = np.broadcast(p[..., 0], a[..., 0]).shape
    out = np.empty(shape + (3,))
    choices = [
        a,
        b,
        a + t_ab[..., None] * ab,
        c,
        a + t_ac[..., None] * ac,
        b + t_bc[..., None] * (c - b),
    ]
    closest = a + v[..., None] * ab + w[..., None] * ac
    taken = np.zeros(shape, dtype=bool)
    for cond, pt in zip(conds, choices):
        sel = cond & ~taken
        out[sel] = np.broadcast_to(pt, shape + (3,))[sel]
        taken |= sel
    out[~taken] = np.broadcast_to(closest, shape + (3,))[~taken]
    return sqdist(np.broadcast_to(p, shape + (3,)), out)


_MESH_BUDGET = 1 << 18


class MeshOracle:
    """Exact distance to a :class:`TriangleMesh`.

    Candidate triangles come from a k-d tree over triangle centroids; a
    query is settled once the best distance found is below the K-th centroid
    distance minus the largest centroid-to-corner radius, otherwise K grows.
    """

    kind = "mesh"
    dim = 3

    def __init__(self, mesh, chunk=20000):
        self.mesh = mesh
        a, b, c = mesh.corners()
        self.centroids = (a + b + c) / 3
        rad = np.sqrt(np.maximum.reduce([sqdist(a, self.centroids), sqdist(b, self.centroids), sqdist(c, self.centroids)]))
        self.rmax = float(rad.max())
        self.tree = cKDTree(self.centroids)
        self.vertex_index = SpatialIndex(mesh.vertices)
        self.chunk = chunk

    def upper_distances(self, queries):
        """Distance to the nearest mesh vertex, an upper bound on the mesh distance."""
        return self.vertex_index.distances(queries)

    def distances(self, queries):
        q = np.asarray(queries, dtype=float)
        if q.ndim == 1:
            q = q[None, :]
        if q.shape[1] != 3:
            raise DimensionError("mesh distance queries must be 3-dimensional")
        out = np.empty(len(q))
        for lo in range(0, len(q), self.chunk):
            out[lo:lo + self.chunk] = self._block(q[lo:lo + self.chunk])
        return out

    def _block(self, q):
        ntri = len(self.centroids)
        out = np.empty(len(q))
        todo = np.arange(len(q))
        k = min(8, ntri)
        while len(todo):
            # keep the (query, triangle) work array near a fixed budget
            step = max(1, _MESH_BUDGET // k)
            still = []
            for lo in range(0, len(todo), step):
                part = todo[lo:lo + step]
                sub = q[part]
                cd, ci = self.tree.query(sub, k=k)
                if k == 1:
                    cd, ci = cd[:, None], ci[:, None]
                a, b, c = self.mesh.corners(ci)
                best = np.sqrt(point_triangle_sqdist(sub[:, None, :], a, b, c).min(axis=1))
                out[part] = best
                if k < ntri:
                    still.append(part[best > cd[:, -1] - self.rmax])
            if k == ntri or not still:
                break
            todo = np.concatenate(still)
            k = min(4 * k, ntri)
        return out


def distance_to_mesh(mesh, q):
    """Exact Euclidean distance from a 3-d point to the nearest triangle of ``mesh``."""
    q = np.asarray(q, dtype=float).reshape(-1)
    if q.shape[0] != 3:
        raise DimensionError("mesh distance queries must be 3-dimensional")
    a, b, c = mesh.corners()
    return float(np.sqrt(point_triangle_sqdist(q[None, :], a, b, c).min()))


# --- fitting ---------------------------------------------------------------


def fit_profile(p, beta_lo, beta_hi):
    """Least-squares line through the profile on ``[beta_lo, beta_hi]``.

    Samples are the breakpoints inside the window plus the two window ends,
    each read as the value of the step starting there, equally weighted.
    The intercept estimates the reach and the slope the first-order growth.
    """
    if not beta_lo < beta_hi:
        raise ValueError("need beta_lo < beta_hi")
    inside = p.beta[(p.beta >= beta_lo) & (p.beta <= beta_hi)]
    b = np.unique(np.r_[beta_lo, inside, beta_hi])
    if p.truncated_at is not None:
        b = b[b <= p.truncated_at]
    v = p.step_value(b) if len(b) else np.empty(0)
    ok = np.isfinite(v)
    b, v = b[ok], v[ok]
    if len(b) < 2:
        raise ValueError("fit window holds fewer than two finite profile samples")
    slope, intercept = np.polyfit(b, v, 1)
    resid = v - (intercept + slope * b)
    return ProfileFit(float(beta_lo), float(beta_hi), float(intercept), float(slope),
                      float(np.sqrt(np.mean(resid ** 2))), int(len(b)))
