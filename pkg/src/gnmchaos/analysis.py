"""
Bifurcation sweeps, Lyapunov exponents and chaotic/periodic classification.
"""

import math
import warnings
from dataclasses import dataclass, field
from functools import partial
from typing import NamedTuple

import numpy as np

from ._parallel import ordered_map
from .errors import ClippingWarning, ConfigurationError
from .maps import GnmParams, Logistic, Sine, SurrogateConstants, Tent, gnm_map
from .oscillator import BufferFeedback, MapFeedback, _clip, _unit_bounds, iterate

__all__ = [
    "SweepSpec",
    "BifurcationData",
    "LyapunovCurve",
    "Region",
    "lyapunov_exponent",
    "bifurcation_sweep",
    "lyapunov_sweep",
    "classify_regions",
    "orbit_period",
    "first_flip",
    "chaos_onset",
]

#: Slopes smaller than this count as exactly zero (superstable orbit).
ZERO_SLOPE = 1e-300

_AXES = {
    "gnm": ("mu1", "mu2", "mu3"),
    "logistic": ("r",),
    "tent": ("m",),
    "sine": ("a",),
}
_GNM_DEFAULTS = {"mu1": 1.0, "mu2": 0.0, "mu3": 0.0}


@dataclass(frozen=True)
class SweepSpec:
    """One-parameter sweep of a map family.

    ``fixed`` holds the parameters that are not swept; for the surrogate
    they default to ``mu1 = 1 MOhm, mu2 = mu3 = 0 V``. ``x0=None`` seeds
    every orbit at the middle of the map's domain.
    """

    axis: str
    lo: float
    hi: float
    steps: int
    family: str = "gnm"
    fixed: dict = field(default_factory=dict)
    x0: float = None
    transient: int = 1000
    retained: int = 3000
    topology: object = BufferFeedback()
    constants: SurrogateConstants = SurrogateConstants()

    def __post_init__(self):
        if self.family not in _AXES:
            raise ConfigurationError(f"unknown map family {self.family!r}")
        if self.axis not in _AXES[self.family]:
            raise ConfigurationError(
                f"axis {self.axis!r} incompatible with {self.family} map "
                f"(allowed: {', '.join(_AXES[self.family])})"
            )
        unknown = set(self.fixed) - set(_AXES[self.family])
        if unknown:
            raise ConfigurationError(f"unknown fixed parameters for {self.family}: {sorted(unknown)}")
        if not self.lo < self.hi:
            raise ConfigurationError(f"sweep range needs lo < hi, got [{self.lo}, {self.hi}]")
        if self.steps < 2:
            raise ConfigurationError(f"steps must be >= 2, got {self.steps}")
        if self.transient <= 0 or self.retained <= 0:
            raise ConfigurationError("transient and retained must be > 0")

    @property
    def values(self):
        return np.linspace(self.lo, self.hi, self.steps)

    def map_at(self, value):
        """Forward map with the swept parameter set to ``value``."""
        if self.family == "gnm":
            p = dict(_GNM_DEFAULTS, **self.fixed)
            p[self.axis] = float(value)
            return gnm_map(GnmParams(p["mu1"], p["mu2"], p["mu3"]), self.constants)
        cls = {"logistic": Logistic, "tent": Tent, "sine": Sine}[self.family]
        return cls(float(value))

    def seed_for(self, fw):
        return fw.domain.mid if self.x0 is None else self.x0


@dataclass(frozen=True, eq=False)
class BifurcationData:
    axis: str
    values: np.ndarray
    samples: np.ndarray  # shape (steps, retained)
    clipped: np.ndarray

    @property
    def rows(self):
        return list(zip(self.values.tolist(), self.samples))


@dataclass(frozen=True, eq=False)
class LyapunovCurve:
    axis: str
    values: np.ndarray
    lambdas: np.ndarray

    @property
    def rows(self):
        return list(zip(self.values.tolist(), self.lambdas.tolist()))


class Region(NamedTuple):
    lo: float
    hi: float
    label: str


def lyapunov_exponent(fw, topo, x0, n=100_000, burn=1000):
    """Mean log-stretching rate ``(1/n) sum ln|f'(x_i)|`` along an orbit.

    For the map-feedback topology one step is the composite ``g(f(x))``
    and contributes ``ln|g'(y_i)| + ln|f'(x_i)|``. A vanishing slope
    (superstable orbit) returns ``-inf``. A ``ClippingWarning`` is issued
    when more than 1% of the counted steps were clipped.

    Examples
    --------
    >>> round(lyapunov_exponent(Logistic(2.5), BufferFeedback(), 0.3, 10_000, 100), 4)
    -0.6931
    """
    if n < 1 or burn < 0:
        raise ConfigurationError("need n >= 1 and burn >= 0")
    x0 = fw._check(x0)
    fb = topo.fb if isinstance(topo, MapFeedback) else None
    if fb is not None:
        topo.check_compatible(fw)
        fb_lo, fb_hi = _unit_bounds(fb)
        fb_scale = fb.scale
    scale = fw.scale
    lo, hi = _unit_bounds(fw)
    f, df = fw._raw, fw._slope
    log, fabs = math.log, math.fabs
    s = x0 / scale
    total = 0.0
    nclip = 0
    for k in range(burn + n):
        d = df(s)[0]
        s, c = _clip(f(s), lo, hi)
        if fb is not None:
            y = s * scale
            d *= fb._slope(y / fb_scale)[0]
            t, c2 = _clip(fb._raw(y / fb_scale), fb_lo, fb_hi)
            s, c3 = _clip(t * fb_scale / scale, lo, hi)
            c = c or c2 or c3
        if k < burn:
            continue
        nclip += c
        d = fabs(d)
        if d < ZERO_SLOPE:
            return -math.inf
        total += log(d)
    if nclip > 0.01 * n:
        warnings.warn(
            f"orbit clipped on {nclip} of {n} steps; exponent is unreliable",
            ClippingWarning,
            stacklevel=2,
        )
    return total / n


def _bifurcation_row(spec, value):
    fw = spec.map_at(value)
    orb = iterate(fw, spec.topology, spec.seed_for(fw), spec.transient + spec.retained, spec.transient)
    return orb.samples, orb.clipped


def _lyapunov_row(spec, n, burn, value):
    fw = spec.map_at(value)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", ClippingWarning)
        return lyapunov_exponent(fw, spec.topology, spec.seed_for(fw), n, burn)


def bifurcation_sweep(spec, workers=1):
    """Steady-state samples for every axis value of ``spec``.

    Each orbit discards ``spec.transient`` outputs and keeps the next
    ``spec.retained``.
    """
    values = spec.values
    rows = ordered_map(partial(_bifurcation_row, spec), values.tolist(), workers)
    samples = np.vstack([r[0] for r in rows])
    clipped = np.array([r[1] for r in rows], dtype=bool)
    return BifurcationData(spec.axis, values, samples, clipped)


def lyapunov_sweep(spec, n=100_000, burn=None, workers=1):
    """Lyapunov exponent at every axis value; ``burn`` defaults to ``spec.transient``."""
    burn = spec.transient if burn is None else burn
    values = spec.values
    lams = ordered_map(partial(_lyapunov_row, spec, n, burn), values.tolist(), workers)
    return LyapunovCurve(spec.axis, values, np.array(lams, dtype=float))


def classify_regions(curve, tol=0.0):
    """Split a Lyapunov curve into maximal runs labelled by sign.

    ``curve`` is a :class:`LyapunovCurve` or a sequence of
    ``(axis_value, lambda)`` pairs. Runs with ``lambda > tol`` are
    ``"chaotic"``, ``lambda < -tol`` ``"periodic"``, anything else
    ``"marginal"``.

    >>> classify_regions([(1, -0.5), (2, -0.1), (3, 0.4)])
    [Region(lo=1, hi=2, label='periodic'), Region(lo=3, hi=3, label='chaotic')]
    """
    rows = curve.rows if isinstance(curve, LyapunovCurve) else list(curve)
    if not rows:
        raise ConfigurationError("empty Lyapunov curve")
    if tol < 0:
        raise ConfigurationError("tol must be >= 0")

    def label(lam):
        if lam > tol:
            return "chaotic"
        if lam < -tol:
            return "periodic"
        return "marginal"

    regions = []
    start, cur = rows[0][0], label(rows[0][1])
    prev = start
    for v, lam in rows[1:]:
        lab = label(lam)
        if lab != cur:
            regions.append(Region(start, prev, cur))
            start, cur = v, lab
        prev = v
    regions.append(Region(start, prev, cur))
    return regions


def orbit_period(samples, tol=1e-6, max_period=64, window=256):
    """Smallest period of the tail of ``samples`` within ``tol``; 0 if none found."""
    s = np.asarray(samples, dtype=float)
    w = min(len(s), window + max_period)
    tail = s[-w:]
    for p in range(1, min(max_period, w - 1) + 1):
        if np.max(np.abs(tail[p:] - tail[:-p])) <= tol:
            return p
    return 0


def first_flip(data, tol=1e-6):
    """First axis value whose steady state is not a fixed point, or ``None``."""
    for v, samples in data.rows:
        if orbit_period(samples, tol) != 1:
            return v
    return None


def chaos_onset(curve, tol=0.0):
    """First axis value with ``lambda > tol``, or ``None``."""
    for v, lam in curve.rows:
        if lam > tol:
            return v
    return None
