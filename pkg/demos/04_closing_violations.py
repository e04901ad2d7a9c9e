# r-convexity from a binary image.
# A lattice samples U = {y <= x^2/2}, whose complement has a bend of
# curvature radius 1 at the origin. Closing the sampled set by radius r
# recaptures outside pixels near the bend once r exceeds about rconv(U) = 1
# plus lattice error; each recaptured pixel certifies rconv <= r.
import os
import sys

import numpy as np

from reachbound.rconv_bound import closing_violations, rconv_upper_bound
from reachbound.svg import render_points_svg
from reachbound.synth import ShapeSpec, generate

out = sys.argv[1] if len(sys.argv) > 1 else "demo_out"
os.makedirs(out, exist_ok=True)

grid, truth = generate(ShapeSpec("set_U", 6, 0, {"margin": 6.2}))
eps = grid.epsilon
print(f"{grid.n} lattice points, {grid.inside.sum()} inside, eps = {eps:.4f}")

res = rconv_upper_bound(grid, eps, 3.0)
q = grid.phi[res.witness]
print(f"rconv bound {res.value:.4f} (truth {truth.rconv}), witness at ({q[0]:.3f}, {q[1]:.3f})")

for r in (1.0, res.value, 1.8, 2.5):
    vs = closing_violations(grid, r, eps)
    print(f"r = {r:.4f}: {len(vs)} flagged points")

vs = closing_violations(grid, 2.5, eps)
flag = np.zeros(grid.n, dtype=bool)
flag[vs.points] = True
near = np.all(np.abs(grid.phi) <= 3.2, axis=1)
render_points_svg(grid.phi[near], os.path.join(out, "set_U_flags.svg"),
                  [(~grid.inside[near], "#dddddd", 1.2), (grid.inside[near], "#1f77b4", 1.2),
                   (flag[near], "#d62728", 2.5)], title="closing violations at r = 2.5")

# a convex disk is never flagged
disk, _ = generate(ShapeSpec("disk", 0, 1, {"spacing": 0.05}))
total = sum(len(closing_violations(disk, r, disk.epsilon)) for r in np.linspace(0.05, 1, 20))
print(f"disk: {total} flagged points over 20 radii")
