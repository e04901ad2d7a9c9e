"""Convergence experiment on lattice-sampled sets with known reach and rconv.

For each resolution ``n`` and replication, a randomly placed and rotated
square lattice of spacing ``0.7/n`` samples ``set_U`` or ``set_W``. The
r-convexity bound uses the lattice covering radius as ``epsilon`` and the
reach bound runs on the inside points with ``epsilon = scale * a``. Both
sets have reach and rconv equal to 1, so every bound must be at least 1.
Replication ``k`` (rows ordered by ``(n, replication)``) uses seed
``base_seed + k``.
"""

from __future__ import annotations

import csv
import time
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, fields

import numpy as np
from scipy import stats

from .core import default_workers
from .io import fmt
from .rconv_bound import rconv_upper_bound
from .reach_bound import reach_upper_bound
from .synth import ShapeSpec, generate

__all__ = [
    "EPSILON_SCALE",
    "SoundnessError",
    "ExperimentRow",
    "ExperimentTable",
    "RateFit",
    "run_replication",
    "run_convergence",
    "rate_fit",
    "rate_fit_means",
]

EPSILON_SCALE = float(np.sqrt(1.25))
TRUTH = 1.0


class SoundnessError(AssertionError):
    """A bound fell below the known reach / rconv of the sampled set."""


@dataclass(frozen=True)
class ExperimentRow:
    set_kind: str
    n: float
    replication: int
    seed: int
    rconv_bound: float
    reach_bound: float
    epsilon_rconv: float
    epsilon_reach: float
    runtime_s: float


COLUMNS = tuple(f.name for f in fields(ExperimentRow))


@dataclass
class ExperimentTable:
    rows: list

    def column(self, name):
        return np.array([getattr(r, name) for r in self.rows], dtype=float)

    def summary(self, column):
        """Per-``n`` mean and 95% t-interval half width of ``column``."""
        ns = np.array([r.n for r in self.rows], dtype=float)
        vals = self.column(column)
        out = []
        for n in np.unique(ns):
            v = vals[ns == n]
            half = 0.0
            if len(v) > 1 and np.all(np.isfinite(v)):
                half = float(stats.t.ppf(0.975, len(v) - 1) * v.std(ddof=1) / np.sqrt(len(v)))
            out.append((float(n), float(v.mean()), half, len(v)))
        return out

    def to_csv(self, path, runtime=True):
        """Write the table; ``runtime=False`` drops the only non-deterministic column."""
        cols = [c for c in COLUMNS if runtime or c != "runtime_s"]
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(cols)
            for r in self.rows:
                d = asdict(r)
                w.writerow([fmt(d[c]) if isinstance(d[c], float) else d[c] for c in cols])

    @classmethod
    def from_csv(cls, path):
        rows = []
        with open(path, newline="") as fh:
            for rec in csv.DictReader(fh):
                rows.append(ExperimentRow(
                    rec["set_kind"], float(rec["n"]), int(rec["replication"]), int(rec["seed"]),
                    float(rec["rconv_bound"]), float(rec["reach_bound"]),
                    float(rec["epsilon_rconv"]), float(rec["epsilon_reach"]),
                    float(rec.get("runtime_s", "nan")),
                ))
        return cls(rows)


@dataclass(frozen=True)
class RateFit:
    coefficient: float
    exponent: float
    truth: float
    n_values: tuple

    def __call__(self, n):
        return self.truth + self.coefficient * np.asarray(n, dtype=float) ** (-self.exponent)


def run_replication(set_kind, n, replication, seed, window=3.0, r_max=None, epsilon_scale=EPSILON_SCALE):
    """One row: sample the set, then compute both bounds.

    ``r_max`` defaults to the window half-width. The lattice margin is sized
    from it so no closing ball at ``r <= r_max`` runs off the sample.
    """
    t0 = time.perf_counter()
    a = 0.7 / n
    r_max = window if r_max is None else r_max
    grid, truth = generate(ShapeSpec(set_kind, n, seed, {"window": window, "margin": 2 * r_max + a}))
    eps_rconv = truth.hausdorff_bound
    eps_reach = epsilon_scale * a
    rconv = rconv_upper_bound(grid, eps_rconv, r_max).value
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        reach = reach_upper_bound(grid.phi[grid.inside], eps_reach).value
    return ExperimentRow(set_kind, float(n), int(replication), int(seed), float(rconv), float(reach),
                         float(eps_rconv), float(eps_reach), time.perf_counter() - t0)


def _run_job(job):
    return run_replication(*job)


def run_convergence(set_kind, n_list, reps, base_seed=0, window=3.0, r_max=None,
                    epsilon_scale=EPSILON_SCALE, workers=None, check=True):
    """Replicated bounds for every ``n`` in ``n_list``; rows ordered by ``(n, replication)``.

    With ``check`` a :class:`SoundnessError` is raised if any bound drops
    below the known value 1 of ``set_U`` / ``set_W``.
    """
    if set_kind not in ("set_U", "set_W"):
        raise ValueError("the convergence experiment runs on set_U or set_W")
    n_list = list(n_list)
    if not n_list or reps < 1:
        raise ValueError("need a nonempty n_list and reps >= 1")
    jobs = []
    for k_n, n in enumerate(n_list):
        for rep in range(reps):
            row = k_n * reps + rep
            jobs.append((set_kind, n, rep, base_seed + row, window, r_max, epsilon_scale))
    workers = default_workers() if workers is None else workers
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            rows = list(ex.map(_run_job, jobs))
    else:
        rows = [_run_job(j) for j in jobs]
    table = ExperimentTable(rows)
    if check:
        for r in rows:
            if r.rconv_bound < TRUTH or r.reach_bound < TRUTH:
                raise SoundnessError(f"bound below 1 for {r.set_kind} n={r.n} seed={r.seed}: "
                                     f"rconv={r.rconv_bound}, reach={r.reach_bound}")
    return table


def rate_fit_means(ns, means, truth=TRUTH):
    """Least squares of ``log(mean - truth)`` on ``log n``: ``mean ~ truth + C n**-p``."""
    ns = np.asarray(ns, dtype=float)
    means = np.asarray(means, dtype=float)
    keep = np.isfinite(means) & (means > truth)
    if len(np.unique(ns[keep])) < 3:
        raise ValueError("rate fit needs at least 3 distinct n with mean above the truth")
    slope, icept = np.polyfit(np.log(ns[keep]), np.log(means[keep] - truth), 1)
    return RateFit(float(np.exp(icept)), float(-slope), float(truth), tuple(ns[keep].tolist()))


def rate_fit(table, column, truth=TRUTH):
    """Fit ``mean(column) ~ truth + C n**-p`` over the table's per-``n`` means."""
    summ = table.summary(column)
    return rate_fit_means([s[0] for s in summ], [s[1] for s in summ], truth)
