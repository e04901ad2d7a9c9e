"""Pair enumeration in shells of increasing chord length.

Both the β-reach profile and the reach bound only need pairs whose chord
``alpha`` is at most twice the current best value (``g >= alpha/2``), so
pairs are produced shell by shell: every call returns the pairs with
``alpha`` in ``(r_lo, r_hi]``, sorted by ``(i, j)``.
"""

import numpy as np

from .core import sqdist

_MID_CHUNK = 1 << 20


class PairShells:
    def __init__(self, index):
        self.index = index
        self.points = index.points
        self.n = index.n
        self.total = self.n * (self.n - 1) // 2
        lo, hi = self.points.min(axis=0), self.points.max(axis=0)
        # no chord is longer than the bounding-box diagonal
        self.diameter = float(np.sqrt(sqdist(lo, hi)))
        self._all = None

    def _all_pairs(self):
        if self._all is None:
            i, j = np.triu_indices(self.n, 1)
            i = i.astype(np.intp)
            j = j.astype(np.intp)
            alpha = np.sqrt(sqdist(self.points[i], self.points[j]))
            self._all = (i, j, alpha)
        return self._all

    def shell(self, r_lo, r_hi):
        """Pairs ``i < j`` with ``r_lo < alpha <= r_hi`` (``r_lo < 0`` includes everything below)."""
        if self.n < 2:
            empty = np.empty(0, dtype=np.intp)
            return empty, empty, np.empty(0)
        tree = self.index.tree
        if tree is None or r_hi >= self.diameter:
            i, j, alpha = self._all_pairs()
        else:
            pairs = tree.query_pairs(r_hi * (1 + 1e-9) + 1e-300, output_type="ndarray")
            if len(pairs) == 0:
                empty = np.empty(0, dtype=np.intp)
                return empty, empty, np.empty(0)
            pairs = np.sort(pairs.astype(np.intp), axis=1)
            order = np.lexsort((pairs[:, 1], pairs[:, 0]))
            i, j = pairs[order, 0], pairs[order, 1]
            alpha = np.sqrt(sqdist(self.points[i], self.points[j]))
        keep = (alpha > r_lo) & (alpha <= r_hi)
        return i[keep], j[keep], alpha[keep]


def midpoint_distances(points, i, j, distances):
    """``distances(midpoints)`` for each pair, evaluated in bounded chunks."""
    x = np.empty(len(i))
    for lo in range(0, len(i), _MID_CHUNK):
        ii, jj = i[lo:lo + _MID_CHUNK], j[lo:lo + _MID_CHUNK]
        mid = (points[ii] + points[jj]) / 2
        x[lo:lo + _MID_CHUNK] = distances(mid)
    return x


def initial_radius(index, floor):
    """First shell radius: a few typical neighbour spacings, at least ``floor``."""
    if index.n < 2:
        return max(floor, 0.0)
    # second neighbour: the first is the point itself
    if index.tree is not None:
        dd, _ = index.tree.query(index.points, k=2)
        spacing = float(np.median(dd[:, 1]))
    else:
        sq = sqdist(index.points[:, None, :], index.points[None, :, :])
        np.fill_diagonal(sq, np.inf)
        spacing = float(np.median(np.sqrt(sq.min(axis=1))))
    return max(8 * spacing, floor)
