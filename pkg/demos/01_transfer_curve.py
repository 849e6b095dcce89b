"""
Walk through the surrogate transfer curve and its three knobs.

mu1 is the TIA gain and sets the peak height, mu2 and mu3 are the two
bias voltages that stretch the cutoff and the curvature. For each setting
we print the cutoff voltage, the peak and the effective logistic parameter
the curve is conjugate to, then the first few iterates from a DAC seed.

Run:  python3 demos/01_transfer_curve.py
"""

import numpy as np

from gnmchaos import BufferFeedback
from gnmchaos.maps import GnmParams, gnm_effective_r, gnm_map, sample_map
from gnmchaos.oscillator import iterate

settings = [
    (0.80, 0.0, 0.0),
    (0.95, 0.0, 0.0),
    (1.05, 0.0, 0.0),
    (1.00, 0.3, 0.0),   # mu2 pushes the cutoff out
    (1.00, 0.0, 0.3),   # mu3 pulls it in
]

print(f"{'mu1':>5} {'mu2':>5} {'mu3':>5} | {'Vc (V)':>7} {'peak (V)':>8} {'r_eff':>6}")
for mu1, mu2, mu3 in settings:
    p = GnmParams(mu1, mu2, mu3)
    m = gnm_map(p)
    peak = max(sample_map(m, 2001)[1])
    print(f"{mu1:5.2f} {mu2:5.2f} {mu3:5.2f} | {m.cutoff:7.3f} {peak:8.3f} {gnm_effective_r(p):6.3f}")

# A coarse ASCII sketch of the mu1 = 1.0 curve.
m = gnm_map((1.0,))
xs = np.linspace(0, m.cutoff, 27)
print("\ntransfer curve, mu1 = 1.0 MOhm")
for x in xs:
    y = m(float(x))
    print(f"{x:5.2f} V |{'#' * int(round(y / m.cutoff * 50))}")

# Buffer in the loop, 500 transient steps dropped: period 1, period 2, chaos.
for mu1 in (0.70, 0.85, 1.00):
    orb = iterate(gnm_map((mu1,)), BufferFeedback(), 0.1, 508, transient=500)
    print(f"\nmu1={mu1:.2f}: " + " ".join(f"{v:.3f}" for v in orb.samples))
