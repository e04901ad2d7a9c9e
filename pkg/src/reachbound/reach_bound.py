"""Upper bound on the reach of a closed set from a sample within Hausdorff distance ε."""

from __future__ import annotations

import json
import warnings
from dataclasses import dataclass

import numpy as np

from . import _pairs
from .beta_reach import PairRecord
from .core import CloudOracle, SpatialIndex, g, point_cloud

__all__ = ["ReachBoundResult", "reach_upper_bound"]


@dataclass(frozen=True)
class ReachBoundResult:
    value: float
    epsilon: float
    witness: PairRecord | None
    pairs_examined: int
    pairs_pruned: int

    def to_dict(self):
        if self.witness is None:
            return {"bound": "inf" if np.isinf(self.value) else self.value, "epsilon": self.epsilon}
        w = self.witness
        return {
            "bound": self.value,
            "epsilon": self.epsilon,
            "witness_i": w.i,
            "witness_j": w.j,
            "alpha": w.alpha,
            "x": w.x,
        }

    def to_json(self):
        return json.dumps(self.to_dict(), indent=2)


def _shell_best(i, j, alpha, x, epsilon):
    ok = x >= epsilon
    if not np.any(ok):
        return None
    i, j, alpha, x = i[ok], j[ok], alpha[ok], x[ok]
    y = np.minimum(x - epsilon, alpha / 2)
    vals = g(alpha, y)
    best = vals.min()
    # shells arrive sorted by (i, j), so the first minimum is the lowest pair
    k = int(np.flatnonzero(vals == best)[0])
    return float(best), PairRecord(int(i[k]), int(j[k]), float(alpha[k]), float(x[k]), float(best))


def reach_upper_bound(cloud, epsilon, prune=True, index=None):
    """``inf g(alpha, x - epsilon)`` over pairs whose midpoint lies at ``x >= epsilon`` from the cloud.

    If every point of ``cloud`` lies in a closed set ``A`` and ``A`` lies
    within ``epsilon`` of the cloud, the value is at least ``reach(A)``.
    Pairs are visited in shells of growing chord length and the search stops
    once half the chord exceeds the best value found (``g >= alpha/2``).
    Returns ``inf`` with a warning when no midpoint is ``epsilon`` away.
    """
    if epsilon < 0 or not np.isfinite(epsilon):
        raise ValueError("epsilon must be a finite non-negative number")
    cloud = point_cloud(cloud)
    index = SpatialIndex(cloud) if index is None else index
    oracle = CloudOracle(index)
    shells = _pairs.PairShells(index)
    best, witness, examined = np.inf, None, 0

    if prune:
        r_lo, r_hi = -1.0, _pairs.initial_radius(index, 4 * epsilon)
    else:
        r_lo, r_hi = -1.0, np.inf
    while True:
        i, j, alpha = shells.shell(r_lo, r_hi)
        x = _pairs.midpoint_distances(cloud, i, j, oracle.distances)
        examined += len(i)
        found = _shell_best(i, j, alpha, x, epsilon)
        if found is not None and np.isfinite(found[0]):
            val, rec = found
            if val < best or (val == best and (rec.i, rec.j) < (witness.i, witness.j)):
                best, witness = val, rec
        if r_hi >= shells.diameter or r_hi >= 2 * best:
            break
        r_lo, r_hi = r_hi, max(2 * r_hi, 2 * best) if np.isfinite(best) else 2 * r_hi

    if witness is None:
        warnings.warn("no pair midpoint lies epsilon away from the cloud; epsilon exceeds the "
                      "cloud's resolution and the bound is infinite")
    return ReachBoundResult(best, float(epsilon), witness, examined, shells.total - examined)
