"""
Period doubling into chaos along the mu1 axis.

A 200-point sweep from 0.6 to 1.05 MOhm: the bifurcation data tells us where
the fixed point first loses stability, the Lyapunov curve where it turns
positive. The surrogate is a rescaled logistic map, so both landmarks sit at
the logistic values 3 and 3.5699... times 2.63/10.

Passing an output directory writes CSV plus gnuplot scripts for both plots.

Run:  python3 demos/02_cascade.py [outdir]
"""

import sys
import time
from pathlib import Path

from gnmchaos.analysis import (
    SweepSpec,
    bifurcation_sweep,
    chaos_onset,
    classify_regions,
    first_flip,
    lyapunov_sweep,
    orbit_period,
)
from gnmchaos.export import (
    gnuplot_bifurcation,
    gnuplot_lyapunov,
    write_bifurcation_csv,
    write_lyapunov_csv,
)

spec = SweepSpec("mu1", 0.6, 1.05, 200)

t = time.perf_counter()
data = bifurcation_sweep(spec, workers=4)
curve = lyapunov_sweep(spec, n=10_000, workers=4)
print(f"200-step sweep took {time.perf_counter() - t:.1f} s")

print(f"first flip bifurcation at mu1 = {first_flip(data):.4f} MOhm"
      f"  (logistic r=3 maps to {3 * 0.263:.4f})")
print(f"chaos onset at mu1 = {chaos_onset(curve):.4f} MOhm"
      f"  (accumulation point maps to {3.5699456 * 0.263:.4f})")

# Periods along the way, sampled every 10th step.
print("\n  mu1    period  lambda")
for (v, samples), lam in list(zip(data.rows, curve.lambdas))[::10]:
    p = orbit_period(samples)
    print(f"{v:6.3f}  {p if p else 'chaos':>6}  {lam:+.3f}")

print("\nregions:")
for r in classify_regions(curve):
    print(f"  [{r.lo:.4f}, {r.hi:.4f}] {r.label}")

if len(sys.argv) > 1:
    out = Path(sys.argv[1])
    out.mkdir(parents=True, exist_ok=True)
    write_bifurcation_csv(out / "bifurcation.csv", data)
    write_lyapunov_csv(out / "lyapunov.csv", curve)
    (out / "bifurcation.gp").write_text(gnuplot_bifurcation("bifurcation.csv", "mu1"))
    (out / "lyapunov.gp").write_text(gnuplot_lyapunov("lyapunov.csv", "mu1"))
    print(f"\nwrote plot data to {out}/")
