"""Seeded generators for shapes with known reach, r-convexity and β-reach profile.

Every generator takes a :class:`ShapeSpec` and returns the sample together
with a :class:`GroundTruth`. Randomness comes from numpy's counter-based
Philox generator keyed by ``spec.seed``, so a spec reproduces the same
sample bit for bit on any platform.

Kinds and their parameters (defaults in brackets):

``two_rays``     two segments from the origin at angle ``theta`` [pi/2],
                 ``length`` [1], ``n`` equispaced points per segment
``arc``          circular arc of ``radius`` [1] and ``angle`` [pi], ``n``
                 equispaced points; ``angle = 2 pi`` gives a full circle
``c2_graph``     graph of ``f(x) = h(x**2)`` on [-1, 1] with
                 ``h(t) = h1 t + h2 t**2 / 2`` [h1 = 0.5, h2 = 0], ``n`` points
``paraboloid``   ``|u|**2 = 2 c z`` over ``|u| <= rim`` in R^(m+1),
                 ``m`` [2], ``c`` [4], ``rim`` [1.25 c], ``n`` points
``two_spheres``  two m-spheres of ``radius`` [2] whose centres are ``gap``
                 [12] apart, ``m`` [3], ``n`` points split evenly
``disk``         lattice-sampled disk of ``radius`` [1] in the window
                 ``[-w, w]**2`` with ``w = 3 * radius``
``set_U``        lattice-sampled ``y <= x**2/2`` intersected with ``[-3, 3]**2``
``set_W``        lattice-sampled ``|y| >= x**2/2 + 1`` intersected with ``[-3, 3]**2``

All manifold kinds accept an ambient dimension ``d``: extra zero
coordinates are appended and a seeded random rotation applied. Lattice
kinds use spacing ``params["spacing"]`` or ``0.7 / n`` with a uniformly
random rotation and offset. For ``set_U`` and ``set_W`` the lattice extends
``margin`` [2 w + spacing] past the window, with every point beyond the
window labelled outside. The closing test at radius ``r`` looks up to
``2 r`` away from the set, so a margin of ``2 r_max + spacing`` keeps the
lattice edge from posing as a violation for every ``r <= r_max``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.spatial import Delaunay

from .beta_reach import TriangleMesh
from .core import SpatialIndex, point_cloud
from .rconv_bound import LabeledGrid, covering_radius

__all__ = [
    "KINDS",
    "ShapeSpec",
    "ProfileModel",
    "GroundTruth",
    "make_rng",
    "generate",
    "ground_truth_profile",
    "graph_mesh",
    "random_rotation",
]

KINDS = ("two_rays", "arc", "c2_graph", "paraboloid", "two_spheres", "disk", "set_U", "set_W")
_GRID_KINDS = ("disk", "set_U", "set_W")
_REFERENCE_SIZE = 20000


@dataclass(frozen=True)
class ShapeSpec:
    kind: str
    n: float = 1000
    seed: int = 0
    params: dict = field(default_factory=dict)

    def get(self, key, default):
        return self.params.get(key, default)


@dataclass(frozen=True)
class ProfileModel:
    """Piecewise-linear closed form for the β-reach profile.

    ``pieces`` holds ``(beta_hi, intercept, slope)`` triples in increasing
    ``beta_hi``; the piece applies for ``beta`` up to and including
    ``beta_hi``. Beyond the last ``beta_hi`` the model says nothing.
    """

    pieces: tuple

    @property
    def intercept(self):
        return self.pieces[0][1]

    @property
    def slope(self):
        return self.pieces[0][2]

    @property
    def beta_max(self):
        return self.pieces[-1][0]

    def __call__(self, beta):
        if beta < 0 or beta > self.beta_max:
            raise ValueError(f"beta={beta} outside the model's range [0, {self.beta_max}]")
        for hi, c0, c1 in self.pieces:
            if beta <= hi:
                return c0 + c1 * beta
        raise AssertionError("unreachable")


@dataclass(frozen=True)
class GroundTruth:
    reach: float
    rconv: float | None
    hausdorff_bound: float
    profile_model: ProfileModel | None = None

    def __post_init__(self):
        if self.rconv is not None and self.reach > self.rconv:
            raise ValueError("reach cannot exceed rconv")


def make_rng(seed):
    return np.random.Generator(np.random.Philox(int(seed) % (1 << 64)))


def random_rotation(d, rng):
    """Haar-distributed orthogonal matrix."""
    q, r = np.linalg.qr(rng.standard_normal((d, d)))
    return q * np.sign(np.diag(r))


def _embed(points, d, rng):
    m = points.shape[1]
    if d < m:
        raise ValueError(f"ambient dimension {d} below the shape's own dimension {m}")
    if d == m:
        return points
    padded = np.hstack([points, np.zeros((len(points), d - m))])
    return padded @ random_rotation(d, rng).T


def _flat_rconv(native_dim, d, value):
    # a set inside a proper affine subspace is r-convex for every r
    return np.inf if d > native_dim else value


def _gap_estimate(sample, reference):
    """Largest distance from a dense reference sample of the shape to ``sample``."""
    return float(SpatialIndex(sample).distances(reference).max())


def _check_positive(**kw):
    for k, v in kw.items():
        if not v > 0:
            raise ValueError(f"{k} must be positive, got {v}")


def _count(spec, least=1):
    n = int(spec.n)
    if n != spec.n or n < least:
        raise ValueError(f"{spec.kind} needs an integer sample count >= {least}")
    return n


def _two_rays(spec, rng):
    theta = spec.get("theta", np.pi / 2)
    length = spec.get("length", 1.0)
    d = spec.get("d", 2)
    if not 0 < theta < np.pi:
        raise ValueError("theta must lie in (0, pi)")
    _check_positive(length=length)
    n = _count(spec, 2)
    t = np.linspace(0.0, length, n)
    h = theta / 2
    u = np.array([[np.cos(h), np.sin(h)], [np.cos(h), -np.sin(h)]])
    pts = point_cloud(np.vstack([t[:, None] * u[0], t[:, None] * u[1]]))
    slope = (1 + 1 / np.cos(h) ** 2) / 2
    model = ProfileModel(((length * np.sin(theta) / 2, 0.0, slope),))
    truth = GroundTruth(0.0, _flat_rconv(2, d, 0.0), length / (n - 1) / 2, model)
    return _embed(pts, d, rng), truth


def _arc(spec, rng):
    radius = spec.get("radius", 1.0)
    angle = spec.get("angle", np.pi)
    d = spec.get("d", 2)
    _check_positive(radius=radius)
    if not 0 < angle <= 2 * np.pi:
        raise ValueError("arc angle must lie in (0, 2 pi]")
    n = _count(spec, 2)
    circle = np.isclose(angle, 2 * np.pi)
    phi = np.linspace(0.0, angle, n, endpoint=not circle)
    pts = point_cloud(radius * np.c_[np.cos(phi), np.sin(phi)])
    step = angle / (n if circle else n - 1)
    gap = 2 * radius * np.sin(step / 4)
    if circle:
        reach, rconv = radius, _flat_rconv(2, d, radius)
        model = ProfileModel(((radius, radius, 0.0),))
    elif angle <= np.pi:
        # no validity limit is known for the constant profile of an arc
        reach, rconv = radius, None
        model = ProfileModel(((np.inf, radius, 0.0),))
    else:
        reach, rconv, model = radius * np.sin(angle / 2), None, None
    if d > 2 and rconv is None:
        rconv = np.inf
    return _embed(pts, d, rng), GroundTruth(reach, rconv, gap, model)


def _graph_samples(rng, n, f, df, lo, hi):
    # rejection sampling against the arc-length element sqrt(1 + f'^2)
    xs = np.linspace(lo, hi, 4097)
    top = np.sqrt(1 + df(xs) ** 2).max() * (1 + 1e-9)
    out = []
    while sum(len(o) for o in out) < n:
        x = rng.uniform(lo, hi, 2 * n)
        keep = rng.uniform(0, top, 2 * n) <= np.sqrt(1 + df(x) ** 2)
        out.append(x[keep])
    x = np.concatenate(out)[:n]
    return np.c_[x, f(x)]


def _c2_graph(spec, rng):
    h1 = spec.get("h1", 0.5)
    h2 = spec.get("h2", 0.0)
    d = spec.get("d", 2)
    _check_positive(h1=h1)

    def f(x):
        t = x * x
        return h1 * t + h2 * t * t / 2

    def df(x):
        return 2 * x * (h1 + h2 * x * x)

    xs = np.linspace(-1, 1, 4001)
    f1 = df(xs)
    f2 = 2 * h1 + 6 * h2 * xs * xs
    kappa = np.abs(f2) / (1 + f1 * f1) ** 1.5
    if kappa.argmax() != len(xs) // 2 and kappa.max() > kappa[len(xs) // 2] * (1 + 1e-12):
        raise ValueError("the graph must have its maximal curvature at x = 0")
    n = _count(spec, 2)
    pts = point_cloud(_graph_samples(rng, n, f, df, -1.0, 1.0))
    ref = np.linspace(-1, 1, 40 * n + 1)
    gap = _gap_estimate(pts, np.c_[ref, f(ref)])
    model = ProfileModel(((np.inf, 1 / (2 * h1), 0.5 - h2 / (4 * h1 ** 3)),))
    return _embed(pts, d, rng), GroundTruth(1 / (2 * h1), np.inf if d > 2 else None, gap, model)


def _paraboloid_points(rng, n, m, c, rim):
    top = np.sqrt(1 + (rim / c) ** 2)
    out = []
    while sum(len(o) for o in out) < n:
        # uniform in the m-ball, then accept against the area element
        g = rng.standard_normal((2 * n, m))
        u = g / np.linalg.norm(g, axis=1, keepdims=True)
        u *= rim * rng.uniform(0, 1, (2 * n, 1)) ** (1 / m)
        rho2 = np.sum(u * u, axis=1)
        keep = rng.uniform(0, top, 2 * n) <= np.sqrt(1 + rho2 / c ** 2)
        out.append(np.c_[u[keep], rho2[keep] / (2 * c)])
    return np.vstack(out)[:n]


def _paraboloid(spec, rng):
    m = spec.get("m", 2)
    d = spec.get("d", m + 1)
    c = spec.get("c", 4.0)
    rim = spec.get("rim", 1.25 * c)
    _check_positive(c=c, rim=rim, m=m)
    n = _count(spec, 2)
    pts = point_cloud(_paraboloid_points(rng, n, m, c, rim))
    ref = _paraboloid_points(make_rng(spec.seed ^ 0x5EED), _REFERENCE_SIZE, m, c, rim)
    gap = _gap_estimate(pts, ref)
    # symmetric chords give c + beta/2 while their midpoint still sees the vertex
    model = ProfileModel(((min(c, rim * rim / (2 * c)), c, 0.5),))
    return _embed(pts, d, rng), GroundTruth(c, _flat_rconv(m + 1, d, c), gap, model)


def _sphere_points(rng, n, m, radius):
    g = rng.standard_normal((n, m + 1))
    return radius * g / np.linalg.norm(g, axis=1, keepdims=True)


def _two_spheres(spec, rng):
    m = spec.get("m", 3)
    d = spec.get("d", m + 1)
    radius = spec.get("radius", 2.0)
    gap = spec.get("gap", 12.0)
    _check_positive(radius=radius, m=m)
    if not gap > 2 * radius:
        raise ValueError("the spheres must be disjoint (gap > 2 radius)")
    n = _count(spec, 2)
    shift = np.zeros(m + 1)
    shift[0] = gap / 2
    k = n // 2
    pts = np.vstack([_sphere_points(rng, k, m, radius) - shift,
                     _sphere_points(rng, n - k, m, radius) + shift])
    pts = point_cloud(pts)
    ref_rng = make_rng(spec.seed ^ 0x5EED)
    half = _REFERENCE_SIZE // 2
    ref = np.vstack([_sphere_points(ref_rng, half, m, radius) - shift,
                     _sphere_points(ref_rng, half, m, radius) + shift])
    hd = _gap_estimate(pts, ref)
    neck = (gap - 2 * radius) / 2
    feats = sorted([(radius, radius), (neck, neck)])
    # each feature caps the profile for all beta up to its own scale
    pieces = []
    for scale, _ in feats:
        val = min(v for s, v in feats if s >= scale)
        if not pieces or scale > pieces[-1][0]:
            pieces.append((scale, val, 0.0))
    truth = GroundTruth(min(radius, neck), _flat_rconv(m + 1, d, radius), hd, ProfileModel(tuple(pieces)))
    return _embed(pts, d, rng), truth


def _lattice(rng, spacing, half_width):
    """Square lattice with random rotation and offset, clipped to ``[-w, w]**2``."""
    theta = rng.uniform(0, 2 * np.pi)
    offset = rng.uniform(0, spacing, 2)
    rot = np.array([[np.cos(theta), -np.sin(theta)], [np.sin(theta), np.cos(theta)]])
    k = int(np.ceil(np.sqrt(2) * half_width / spacing)) + 2
    idx = np.arange(-k, k + 1) * spacing
    base = np.stack(np.meshgrid(idx, idx, indexing="ij"), axis=-1).reshape(-1, 2) + offset
    pts = base @ rot.T
    return pts[np.all(np.abs(pts) <= half_width, axis=1)]


def _grid_spacing(spec):
    spacing = spec.get("spacing", None)
    if spacing is None:
        if not spec.n > 0:
            raise ValueError("lattice kinds need n > 0 (spacing 0.7/n)")
        spacing = 0.7 / spec.n
    _check_positive(spacing=spacing)
    return spacing


def membership(kind, pts, params=None):
    """Exact membership of 2-D points in the ideal set of a lattice kind."""
    params = params or {}
    x, y = pts[:, 0], pts[:, 1]
    if kind == "set_U":
        return y <= x * x / 2
    if kind == "set_W":
        return np.abs(y) >= x * x / 2 + 1
    if kind == "disk":
        r = params.get("radius", 1.0)
        return x * x + y * y <= r * r
    raise ValueError(f"{kind} is not a lattice kind")


def _grid(spec, rng):
    spacing = _grid_spacing(spec)
    eps = covering_radius(spacing, 2)
    if spec.kind == "disk":
        radius = spec.get("radius", 1.0)
        _check_positive(radius=radius)
        w = spec.get("window", 3 * radius)
        reach = rconv = np.inf
        margin = spec.get("margin", 0.0)
    else:
        w = spec.get("window", 3.0)
        reach = rconv = 1.0
        # the closing at radius r reaches 2 r past the set, so the lattice
        # runs past the window and everything beyond it is outside
        margin = spec.get("margin", 2 * w + spacing)
    _check_positive(window=w)
    if margin < 0:
        raise ValueError("margin must be non-negative")
    pts = _lattice(rng, spacing, w + margin)
    inside = membership(spec.kind, pts, spec.params) & np.all(np.abs(pts) <= w, axis=1)
    return LabeledGrid(pts, inside, eps), GroundTruth(reach, rconv, eps)


_GENERATORS = {
    "two_rays": _two_rays,
    "arc": _arc,
    "c2_graph": _c2_graph,
    "paraboloid": _paraboloid,
    "two_spheres": _two_spheres,
    "disk": _grid,
    "set_U": _grid,
    "set_W": _grid,
}


def generate(spec):
    """Sample ``spec``: a point cloud (or a :class:`LabeledGrid`) and its ground truth."""
    if spec.kind not in _GENERATORS:
        raise ValueError(f"unknown shape kind {spec.kind!r}; expected one of {KINDS}")
    d = spec.params.get("d")
    if d is not None and (int(d) != d or d < 1):
        raise ValueError("ambient dimension must be a positive integer")
    return _GENERATORS[spec.kind](spec, make_rng(spec.seed))


def _model_of(spec):
    """Ground-truth profile model without drawing a full sample."""
    kind = spec.kind
    if kind in _GRID_KINDS:
        return None
    if kind == "paraboloid":
        c = spec.get("c", 4.0)
        rim = spec.get("rim", 1.25 * c)
        return ProfileModel(((min(c, rim * rim / (2 * c)), c, 0.5),))
    small = ShapeSpec(kind, 8 if kind != "two_spheres" else 4, spec.seed, dict(spec.params))
    return generate(small)[1].profile_model


def ground_truth_profile(spec, beta):
    """Closed-form β-reach of the ideal shape behind ``spec`` at scale ``beta``."""
    model = _model_of(spec)
    if model is None:
        raise ValueError(f"no closed-form profile for {spec.kind} with these parameters")
    return float(model(beta))


def graph_mesh(points, area_tol=1e-14):
    """Triangulate a surface sample that is a graph over its first two coordinates."""
    pts = np.asarray(points, dtype=float)
    if pts.ndim != 2 or pts.shape[1] != 3:
        raise ValueError("graph_mesh expects points in R^3")
    tri = Delaunay(pts[:, :2])
    return TriangleMesh(pts, tri.simplices, area_tol=area_tol)
