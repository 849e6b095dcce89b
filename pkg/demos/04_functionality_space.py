"""
How many gate configurations does each design buy you?

F1 varies only the control bits and one gain, F2 the threshold and one gain
per iteration, F3 all three parameters per iteration with control bits, and
F4 additionally puts a second tunable map in the feedback path. Counts grow
exponentially in n, so they are shown as log10.

Run:  python3 demos/04_functionality_space.py
"""

from gnmchaos.funcspace import SpaceParams, compare_spaces

p = SpaceParams(c=1, n_mu=10, n_mu1=10, n_mu2=10, n_mu3=10, n_vref=5)
print(p)
print(f"{'n':>2}  {'log10 F1':>9} {'log10 F2':>9} {'log10 F3':>9} {'log10 F4':>9}")
for row in compare_spaces(p, (1, 10)):
    print(f"{row.n:2d}  " + " ".join(f"{v:9.2f}" for v in row.log10))

# Exact integers, no overflow even when F4 passes 10^60.
last = compare_spaces(p, (10, 10))[0]
print(f"\nF4 at n=10 is exactly {last.f4}")
