"""
One oscillator, many gates.

Four DAC seeds encode the inputs 00, 01, 10, 11. Iterate each, threshold at
Vref, and read the four output bits as a function number. The same
hardware gives a different gate after every iteration, which is the whole
trick. The second half searches the default grid for robust settings of
the six common gates.

Run:  python3 demos/03_chaogate.py
"""

from gnmchaos.chaogate import (
    INPUTS,
    MNEMONICS,
    GateConfig,
    dac_encode,
    gate_trace,
    search_configurations,
)
from gnmchaos.maps import GnmParams

names = {v: k for k, v in MNEMONICS.items()}

cfg = GateConfig(GnmParams(0.95), cb=0, vref=1.25, n=5)
tr = gate_trace(cfg)

print("seed (input)   " + "  ".join(f"  n={k}  " for k in range(1, 6)))
for bits, row, obits in zip(INPUTS, tr.values, tr.bits):
    seed = dac_encode(bits, cfg.cb)
    cells = "  ".join(f"{x:5.2f}({b})" for x, b in zip(row, obits))
    print(f"{seed:5.3f} ({bits[0]}{bits[1]})    {cells}")
print("function       " + "  ".join(
    f"{f:>3} {names.get(f, ''):<4}" for f in tr.functions))

# Which gates can we get, and how far from the threshold do they sit?
print("\nbest configuration per gate on the default grid (margin >= 50 mV):")
print(f"{'gate':<5} {'mu1':>5} {'mu2':>5} {'mu3':>5} {'cb':>2} {'Vref':>5} {'n':>2}  margin")
for name in ("AND", "OR", "XOR", "NAND", "NOR", "XNOR"):
    hits = search_configurations(name, min_margin=0.05, limit=1, workers=4)
    if not hits:
        print(f"{name:<5} none")
        continue
    r = hits[0].as_record()
    print(f"{name:<5} {r['mu1_mohm']:5.2f} {r['mu2_v']:5.2f} {r['mu3_v']:5.2f} {r['cb']:2d}"
          f" {r['vref_v']:5.2f} {r['n']:2d}  {r['margin_v']:.3f} V")
