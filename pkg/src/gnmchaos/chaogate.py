"""
Reconfigurable logic gates built on the chaotic oscillator.

A gate evaluation runs four orbits, one per data input ``00, 01, 10, 11``.
The seed comes from a 3-bit DAC whose code is ``4*b1 + 2*b0 + cb``. After
each iteration the output is thresholded (``1`` iff ``x > vref``) and the
four bits are packed into a function number, first input most significant::

    id = 8*O(00) + 4*O(01) + 2*O(10) + 1*O(11)

so AND is 1 and NAND is 14.
"""

import itertools
import math
from dataclasses import dataclass, field, replace
from functools import partial

import numpy as np

from ._parallel import ordered_map
from .errors import ConfigurationError, DomainError, GridTooLargeError
from .maps import GnmParams, SurrogateConstants, gnm_map
from .oscillator import BufferFeedback, Schedule, iterate, iterate_scheduled

__all__ = [
    "DacSpec",
    "GateConfig",
    "GateTrace",
    "SearchGrid",
    "SearchResult",
    "MNEMONICS",
    "INPUTS",
    "dac_encode",
    "comparator",
    "encode_function",
    "decode_function",
    "parse_function",
    "gate_trace",
    "gate_function",
    "noise_margin",
    "decision_margin",
    "search_configurations",
    "DEFAULT_GRID_CAP",
]

#: Two-input functions by name, as function numbers.
MNEMONICS = {"AND": 1, "OR": 7, "XOR": 6, "NAND": 14, "NOR": 8, "XNOR": 9}

#: Data inputs in truth-table order.
INPUTS = ((0, 0), (0, 1), (1, 0), (1, 1))

DEFAULT_GRID_CAP = 10_000_000


@dataclass(frozen=True)
class DacSpec:
    vmin: float = 0.1
    step: float = 0.3285
    bits: int = 3

    def __post_init__(self):
        if not self.step > 0:
            raise ConfigurationError("DAC step must be > 0")
        if self.bits < 1:
            raise ConfigurationError("DAC needs at least one bit")

    @property
    def vmax(self):
        return self.vmin + (2**self.bits - 1) * self.step


def dac_encode(data_bits, cb, dac=DacSpec(), domain=None):
    """Seed voltage for a data word and control bit.

    ``data_bits`` is ``(b1, b0)`` or a string like ``"01"``; the control bit
    is the least significant bit of the DAC code.

    >>> dac_encode("00", 0)
    0.1
    """
    if isinstance(data_bits, str):
        data_bits = tuple(int(c) for c in data_bits)
    bits = tuple(data_bits) + (cb,)
    if len(bits) != dac.bits or any(b not in (0, 1) for b in bits):
        raise ConfigurationError(f"need {dac.bits - 1} data bits and a control bit, got {bits}")
    code = 0
    for b in bits:
        code = 2 * code + b
    x0 = dac.vmin + code * dac.step
    if domain is not None and x0 not in domain:
        raise ConfigurationError(f"DAC output {x0} V outside map domain [{domain.lo}, {domain.hi}]")
    return x0


def comparator(x, vref):
    return 1 if x > vref else 0


def encode_function(bits):
    """Pack truth-table output bits (first input first) into a function number."""
    fid = 0
    for b in bits:
        fid = 2 * fid + (1 if b else 0)
    return fid


def decode_function(fid, inputs=2):
    rows = 2**inputs
    if not 0 <= fid < 2**rows:
        raise ConfigurationError(f"function id {fid} out of range for {inputs} inputs")
    return tuple((fid >> (rows - 1 - i)) & 1 for i in range(rows))


def parse_function(target, inputs=2):
    """Accept a decimal id or a mnemonic such as ``"NAND"``."""
    if isinstance(target, str):
        key = target.strip().upper()
        if inputs == 2 and key in MNEMONICS:
            return MNEMONICS[key]
        try:
            target = int(key)
        except ValueError:
            raise ConfigurationError(f"unknown function {target!r}") from None
    if isinstance(target, bool) or not isinstance(target, (int, np.integer)):
        raise ConfigurationError(f"function id must be an integer, got {target!r}")
    hi = 2 ** (2**inputs) - 1
    if not 0 <= target <= hi:
        raise ConfigurationError(f"function id {target} out of range [0, {hi}]")
    return int(target)


@dataclass(frozen=True)
class GateConfig:
    params: object  # GnmParams or Schedule
    cb: int = 0
    vref: float = 1.25
    n: int = 1
    topology: object = BufferFeedback()
    dac: DacSpec = DacSpec()
    constants: SurrogateConstants = SurrogateConstants()

    def __post_init__(self):
        if not isinstance(self.params, (GnmParams, Schedule)):
            object.__setattr__(self, "params", GnmParams(*self.params))
        if self.cb not in (0, 1):
            raise ConfigurationError(f"control bit must be 0 or 1, got {self.cb}")
        if self.n < 1:
            raise ConfigurationError(f"n must be >= 1, got {self.n}")
        if not math.isfinite(self.vref):
            raise ConfigurationError("vref must be finite")

    def as_record(self):
        """Flat dict in the search-result export layout (constant parameters only)."""
        p = self.params
        if isinstance(p, Schedule):
            if len(p) != 1:
                raise ConfigurationError("scheduled configurations have no flat record")
            p = p.entries[0]
        return {
            "mu1_mohm": p.mu1,
            "mu2_v": p.mu2,
            "mu3_v": p.mu3,
            "cb": self.cb,
            "vref_v": self.vref,
            "n": self.n,
        }


@dataclass(frozen=True, eq=False)
class GateTrace:
    """Analog outputs per data input (rows) and iteration (columns)."""

    values: np.ndarray
    vref: float
    clipped: bool

    @property
    def bits(self):
        return (self.values > self.vref).astype(int)

    @property
    def functions(self):
        return [encode_function(col) for col in self.bits.T]


def _forward_map(config):
    p = config.params
    if isinstance(p, Schedule):
        p = p.entries[0]
    return gnm_map(p, config.constants)


def gate_trace(config, upto_n=None):
    """Run the four input orbits for ``upto_n`` iterations (default ``config.n``)."""
    upto_n = config.n if upto_n is None else upto_n
    if upto_n < 1:
        raise ConfigurationError("upto_n must be >= 1")
    fw = _forward_map(config)
    rows, clipped = [], False
    for bits in INPUTS:
        x0 = dac_encode(bits, config.cb, config.dac, fw.domain)
        if isinstance(config.params, Schedule) and len(config.params) > 1:
            family = partial(gnm_map, constants=config.constants)
            orb = iterate_scheduled(family, config.params, config.topology, x0, upto_n)
        else:
            orb = iterate(fw, config.topology, x0, upto_n)
        rows.append(orb.samples)
        clipped |= orb.clipped
    return GateTrace(np.vstack(rows), config.vref, clipped)


def gate_function(config, upto_n=None):
    """Function numbers realised at iterations ``1..upto_n``.

    Use :func:`gate_trace` to also get the analog values and clipping flag.
    """
    return gate_trace(config, upto_n).functions


def decision_margin(values, vref):
    """``min |x - vref|`` over the decision voltages."""
    return float(np.min(np.abs(np.asarray(values, dtype=float) - vref)))


def noise_margin(config):
    """Smallest distance between a decision voltage ``x_n`` and ``vref``."""
    return decision_margin(gate_trace(config).values[:, -1], config.vref)


@dataclass(frozen=True)
class SearchGrid:
    """Cartesian grid of gate configurations, enumerated row-major in field order."""

    mu1: tuple = tuple(np.round(np.linspace(0.90, 1.05, 16), 12).tolist())
    mu2: tuple = (-0.3, 0.0, 0.3)
    mu3: tuple = (-0.3, 0.0, 0.3)
    cb: tuple = (0, 1)
    vref: tuple = tuple(np.round(np.arange(0.5, 1.65, 0.1), 12).tolist())
    n: tuple = tuple(range(1, 9))

    def __post_init__(self):
        for name in ("mu1", "mu2", "mu3", "cb", "vref", "n"):
            vals = tuple(getattr(self, name))
            if not vals:
                raise ConfigurationError(f"grid axis {name} is empty")
            object.__setattr__(self, name, vals)
        if any(c not in (0, 1) for c in self.cb):
            raise ConfigurationError("cb values must be 0 or 1")
        if any(n < 1 for n in self.n):
            raise ConfigurationError("iteration counts must be >= 1")

    @classmethod
    def from_ranges(cls, mu1=(0.90, 1.05, 16), mu2=(-0.3, 0.3, 3), mu3=(-0.3, 0.3, 3),
                    cb=(0, 1), vref=(0.5, 1.6, 12), n=(1, 8)):
        """Build a grid from ``(lo, hi, steps)`` axis ranges and an inclusive ``n`` range."""

        def axis(lo, hi, steps):
            if steps < 1:
                raise ConfigurationError("axis step count must be >= 1")
            if steps == 1:
                return (float(lo),)
            return tuple(np.round(np.linspace(lo, hi, steps), 12).tolist())

        return cls(axis(*mu1), axis(*mu2), axis(*mu3), tuple(cb), axis(*vref),
                   tuple(range(n[0], n[1] + 1)))

    @property
    def size(self):
        return (len(self.mu1) * len(self.mu2) * len(self.mu3)
                * len(self.cb) * len(self.vref) * len(self.n))


@dataclass(frozen=True)
class SearchResult:
    config: GateConfig
    function: int
    margin: float

    def as_record(self):
        return dict(self.config.as_record(), function=self.function, margin_v=self.margin)


def _search_block(target, grid, min_margin, allow_clipped, topology, dac, constants, mu1):
    """All hits for one ``mu1`` slice, in enumeration order."""
    hits = []
    nmax = max(grid.n)
    for mu2, mu3, cb in itertools.product(grid.mu2, grid.mu3, grid.cb):
        base = GateConfig(GnmParams(mu1, mu2, mu3), cb, grid.vref[0], nmax, topology, dac, constants)
        try:
            tr = gate_trace(base, nmax)
        except (ConfigurationError, DomainError):
            continue  # seeds fall outside this map's domain
        if tr.clipped and not allow_clipped:
            continue
        vals = tr.values
        for vref in grid.vref:
            bits = vals > vref
            for n in grid.n:
                col = bits[:, n - 1]
                if encode_function(col) != target:
                    continue
                m = decision_margin(vals[:, n - 1], vref)
                if m >= min_margin:
                    hits.append(SearchResult(replace(base, vref=vref, n=n), target, m))
    return hits


def search_configurations(target, grid=SearchGrid(), min_margin=0.0, limit=10, *,
                          topology=BufferFeedback(), dac=DacSpec(),
                          constants=SurrogateConstants(), allow_clipped=False,
                          cap=DEFAULT_GRID_CAP, workers=1):
    """Exhaustive search for configurations realising ``target``.

    Returns up to ``limit`` results with margin ``>= min_margin`` sorted by
    descending margin, ties kept in grid enumeration order. Cells whose
    orbits saturate are skipped unless ``allow_clipped``; cells whose DAC
    seeds fall outside the map domain are always skipped.
    """
    target = parse_function(target)
    if grid.size > cap:
        raise GridTooLargeError(grid.size, cap)
    block = partial(_search_block, target, grid, min_margin, allow_clipped, topology, dac, constants)
    hits = [h for part in ordered_map(block, grid.mu1, workers) for h in part]
    hits.sort(key=lambda h: -h.margin)
    return hits[:limit] if limit is not None else hits
