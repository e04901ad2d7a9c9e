# Two profiles whose shape is known in closed form.
# A corner of angle theta has reach 0 and grows like beta (1 + sec^2(theta/2)) / 2.
# Two far-apart spheres plateau at their radius, then at half the gap between them.
import os
import sys

import numpy as np

from reachbound.beta_reach import fit_profile, profile
from reachbound.svg import render_profile_svg
from reachbound.synth import ShapeSpec, generate

out = sys.argv[1] if len(sys.argv) > 1 else "demo_out"
os.makedirs(out, exist_ok=True)

for theta in (np.pi / 3, np.pi / 2, 2 * np.pi / 3):
    pts, truth = generate(ShapeSpec("two_rays", 400, 0, {"theta": theta}))
    f = fit_profile(profile(pts, beta_cap=0.3), 0.05, 0.3)
    print(f"corner theta={np.degrees(theta):.0f} deg: slope {f.slope:.4f}, "
          f"model {truth.profile_model.slope:.4f}, intercept {f.intercept:.4f}")

pts, truth = generate(ShapeSpec("two_rays", 400, 0, {"theta": np.pi / 2}))
render_profile_svg(profile(pts, beta_cap=0.5), os.path.join(out, "corner.svg"),
                   model=truth.profile_model, title="right-angle corner")

# 3-spheres of radius 2 in R^4, centres 12 apart: radius 2 up to beta = 2, then 4.
# 1500 points per 3-sphere leave gaps of about 0.5, so below that scale the
# profile sees the holes in the sample rather than the spheres.
pts, truth = generate(ShapeSpec("two_spheres", 3000, 0, {}))
p = profile(pts, beta_cap=3.8)
print(f"two spheres: reach {truth.reach}, sample gap {truth.hausdorff_bound:.3f}, profile steps {len(p)}")
for beta in (0.5, 1.0, 1.9, 2.3, 3.0, 3.8):
    print(f"  beta={beta}: {p(beta):.3f}  model {truth.profile_model(beta):.3f}")
render_profile_svg(p, os.path.join(out, "two_spheres.svg"), model=truth.profile_model, title="two 3-spheres")
