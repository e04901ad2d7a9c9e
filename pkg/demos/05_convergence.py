# Bounds on reach and rconv converge to the truth as the lattice refines.
# U has its reach set by curvature, W by a bottleneck of width 2; both have
# reach = rconv = 1. The rate fit is mean ~ 1 + C n^-p.
import os
import sys
import time

from reachbound.harness import rate_fit, run_convergence
from reachbound.svg import render_series_svg

out = sys.argv[1] if len(sys.argv) > 1 else "demo_out"
reps = int(sys.argv[2]) if len(sys.argv) > 2 else 10
os.makedirs(out, exist_ok=True)

for kind in ("set_U", "set_W"):
    t = time.perf_counter()
    table = run_convergence(kind, [2, 3, 4, 6, 8], reps, base_seed=0)
    table.to_csv(os.path.join(out, f"{kind}.csv"))
    print(f"{kind}: {len(table.rows)} replications in {time.perf_counter() - t:.0f}s")
    series = {}
    for col in ("rconv_bound", "reach_bound"):
        s = table.summary(col)
        f = rate_fit(table, col)
        print(f"  {col}: " + "  ".join(f"n={n:g} {m:.3f}+-{h:.3f}" for n, m, h, _ in s))
        print(f"  {col}: 1 + {f.coefficient:.2f} n^-{f.exponent:.2f}")
        series[col.replace("_", " ")] = ([r[0] for r in s], [r[1] for r in s], [r[2] for r in s])
    render_series_svg(series, os.path.join(out, f"{kind}.svg"), truth=1.0, title=kind)
