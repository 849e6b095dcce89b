"""
One-dimensional interval maps.

Every map is an immutable object ``f: [lo, hi] -> [lo, hi]`` whose output
is clipped back into its interval. Besides the classical reference maps
(logistic, tent, sine) the module provides:

* :class:`GnmSurrogate` -- a smooth unimodal stand-in for the transfer
  curve of the G4FET-NDR map circuit with three bifurcation parameters
  (TIA gain ``mu1`` in MOhm, n-channel top gate ``mu2`` and p-channel top
  gate ``mu3`` in volts);
* :class:`Tabulated` -- a measured or simulated transfer curve given as
  knots and interpolated with a shape-preserving monotone cubic.

Internally each map works in *unit coordinates* ``s = x / scale``. For all
maps except the surrogate ``scale == 1``; for the surrogate ``scale`` is
the cutoff voltage ``V_c`` so that iterating in unit coordinates is
bit-for-bit the logistic recursion when ``gamma == 0``.
"""

import csv
import math
from bisect import bisect_right
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path

import numpy as np
from scipy.interpolate import PchipInterpolator

from .errors import (
    ConfigurationError,
    DomainError,
    ExtrapolationError,
    NotConjugateError,
    TableParseError,
)

__all__ = [
    "Interval",
    "GnmParams",
    "SurrogateConstants",
    "Logistic",
    "Tent",
    "Sine",
    "GnmSurrogate",
    "Tabulated",
    "eval_map",
    "map_derivative",
    "gnm_effective_r",
    "gnm_map",
    "identity_map",
    "load_tabulated",
    "sample_map",
    "DEFAULT_BIAS_BOUNDS",
]

#: Slack allowed when an input sits just outside the interval endpoints.
ENDPOINT_TOL = 1e-12

#: Admissible top-gate bias range for mu2 and mu3 (volts).
DEFAULT_BIAS_BOUNDS = (-0.5, 0.5)

_MOHM = 1e6


@dataclass(frozen=True)
class Interval:
    lo: float
    hi: float

    def __post_init__(self):
        if not (math.isfinite(self.lo) and math.isfinite(self.hi)):
            raise ConfigurationError(f"interval bounds must be finite: {self}")
        if not self.lo < self.hi:
            raise ConfigurationError(f"interval needs lo < hi, got {self}")

    @property
    def width(self):
        return self.hi - self.lo

    @property
    def mid(self):
        return 0.5 * (self.lo + self.hi)

    def __contains__(self, x):
        return self.lo <= x <= self.hi


@dataclass(frozen=True)
class GnmParams:
    """Bifurcation parameters of the surrogate map.

    ``mu1`` is the transimpedance gain in MOhm, ``mu2``/``mu3`` the n- and
    p-channel top-gate voltages in volts.
    """

    mu1: float
    mu2: float = 0.0
    mu3: float = 0.0
    bias_bounds: tuple = field(default=DEFAULT_BIAS_BOUNDS, compare=False, repr=False)

    def __post_init__(self):
        if not (math.isfinite(self.mu1) and self.mu1 > 0):
            raise ConfigurationError(f"mu1 must be > 0 MOhm, got {self.mu1}")
        lo, hi = self.bias_bounds
        for name in ("mu2", "mu3"):
            v = getattr(self, name)
            if not (math.isfinite(v) and lo <= v <= hi):
                raise ConfigurationError(f"{name}={v} V outside bias bounds [{lo}, {hi}]")


@dataclass(frozen=True)
class SurrogateConstants:
    """Shape constants of the surrogate transfer curve.

    The defaults put the flip bifurcation at mu1 ~ 0.789 MOhm and the onset
    of chaos at mu1 ~ 0.939 MOhm with mu2 = mu3 = 0.
    """

    Vc0: float = 2.63
    k0: float = 10e-6
    a_n: float = 0.5
    a_p: float = 0.5
    b_n: float = 0.3
    b_p: float = 0.3
    gamma: float = 0.0

    def __post_init__(self):
        if not self.Vc0 > 0:
            raise ConfigurationError("Vc0 must be > 0")
        if not self.k0 > 0:
            raise ConfigurationError("k0 must be > 0")
        for name in ("a_n", "a_p", "b_n", "b_p", "gamma"):
            if not getattr(self, name) >= 0:
                raise ConfigurationError(f"{name} must be >= 0")


class _Map:
    """Shared evaluation machinery; subclasses define the unit-coordinate curve."""

    scale = 1.0

    @property
    def domain(self):
        return Interval(0.0, 1.0)

    # unit-coordinate interval, [0, 1] unless overridden
    _ulo = 0.0
    _uhi = 1.0

    def _raw(self, s):
        raise NotImplementedError

    def _slope(self, s):
        """Return ``(df/dx, one_sided)`` at unit coordinate ``s``."""
        raise NotImplementedError

    def _check(self, x):
        d = self.domain
        if d.lo - ENDPOINT_TOL <= x <= d.hi + ENDPOINT_TOL:
            return min(max(x, d.lo), d.hi)
        raise DomainError(f"x={x!r} outside map domain [{d.lo}, {d.hi}]")

    def __call__(self, x):
        x = self._check(x)
        y = self._raw(x / self.scale)
        return self.scale * min(max(y, self._ulo), self._uhi)

    def derivative(self, x):
        """Slope of the map at ``x`` together with a one-sided flag."""
        x = self._check(x)
        s = x / self.scale
        slope, one_sided = self._slope(s)
        y = self._raw(s)
        if y < self._ulo or y > self._uhi:
            one_sided = True
        return slope, one_sided


@dataclass(frozen=True)
class Logistic(_Map):
    r: float

    def _raw(self, s):
        return self.r * s * (1.0 - s)

    def _slope(self, s):
        return self.r * (1.0 - 2.0 * s), False


@dataclass(frozen=True)
class Tent(_Map):
    m: float

    def _raw(self, s):
        return self.m * min(s, 1.0 - s)

    def _slope(self, s):
        if s == 0.5:
            return self.m, True
        return (self.m if s < 0.5 else -self.m), False


@dataclass(frozen=True)
class Sine(_Map):
    a: float

    def _raw(self, s):
        return self.a * math.sin(math.pi * s)

    def _slope(self, s):
        return self.a * math.pi * math.cos(math.pi * s), False


@dataclass(frozen=True)
class GnmSurrogate(_Map):
    """Surrogate for the G4FET-NDR map.

    With ``V_c = Vc0 + a_n mu2 - a_p mu3``, ``k = k0 (1 + b_n mu2)(1 - b_p mu3)``
    and ``u = x / V_c``::

        f(x) = clip(mu1 * k * u * (1 - u) * (1 + gamma * u), 0, V_c)

    so the output voltage is the TIA gain times a unimodal NDR current.
    """

    params: GnmParams
    constants: SurrogateConstants = SurrogateConstants()

    def __post_init__(self):
        if not self.cutoff > 0:
            raise ConfigurationError(f"cutoff voltage {self.cutoff} V is not positive")
        if not self.peak_current > 0:
            raise ConfigurationError("peak-current scale is not positive")

    @cached_property
    def cutoff(self):
        p, c = self.params, self.constants
        return c.Vc0 + c.a_n * p.mu2 - c.a_p * p.mu3

    @cached_property
    def peak_current(self):
        p, c = self.params, self.constants
        return c.k0 * (1.0 + c.b_n * p.mu2) * (1.0 - c.b_p * p.mu3)

    @cached_property
    def r(self):
        """Dimensionless gain ``mu1 k / V_c`` of the normalized curve."""
        return self.params.mu1 * _MOHM * self.peak_current / self.cutoff

    @property
    def scale(self):
        return self.cutoff

    @property
    def domain(self):
        return Interval(0.0, self.cutoff)

    def _raw(self, s):
        g = self.constants.gamma
        if g == 0.0:
            return self.r * s * (1.0 - s)
        return self.r * s * (1.0 - s) * (1.0 + g * s)

    def _slope(self, s):
        g = self.constants.gamma
        return self.r * (1.0 - 2.0 * s + 2.0 * g * s - 3.0 * g * s * s), False


def _round_flat_peaks(xs, ys, slopes):
    """Un-flatten extremum intervals whose two knots have equal values.

    PCHIP zeroes both end slopes of such an interval, which turns a sampled
    peak into a short plateau: every point on it maps to the same value, so
    the interpolant acquires a superstable cycle the sampled map does not
    have. There the two knots take the three-point slope instead, giving one
    rounded extremum inside the interval. Monotone stretches are untouched.
    """
    d = np.diff(ys) / np.diff(xs)
    slopes = slopes.copy()
    for i in range(1, len(d) - 1):
        if d[i] == 0 and d[i - 1] * d[i + 1] < 0:
            slopes[i] = d[i - 1] * (xs[i + 1] - xs[i]) / (xs[i + 1] - xs[i - 1])
            slopes[i + 1] = d[i + 1] * (xs[i + 1] - xs[i]) / (xs[i + 2] - xs[i])
    return slopes


@dataclass(frozen=True, eq=False)
class Tabulated(_Map):
    """Transfer curve given by knots, interpolated with PCHIP.

    The interpolant is shape preserving, so it does not add spurious
    extrema between knots. A peak sampled by two equal knots is rounded
    rather than flat (see :func:`_round_flat_peaks`). Knot slopes come from scipy's PCHIP; scalar
    evaluation is done here because it sits in the inner iteration loop.
    """

    xs: tuple
    ys: tuple
    _slopes: tuple = field(init=False, repr=False)

    def __post_init__(self):
        xs = np.asarray(self.xs, dtype=float)
        ys = np.asarray(self.ys, dtype=float)
        if xs.ndim != 1 or xs.shape != ys.shape:
            raise ConfigurationError("knot arrays must be 1-D and of equal length")
        if len(xs) < 4:
            raise ConfigurationError(f"insufficient knots: need >= 4, got {len(xs)}")
        if not np.all(np.isfinite(xs)) or not np.all(np.isfinite(ys)):
            raise ConfigurationError("knots must be finite")
        if not np.all(np.diff(xs) > 0):
            raise ConfigurationError("knot x values must be strictly increasing")
        slopes = _round_flat_peaks(xs, ys, PchipInterpolator(xs, ys)(xs, 1))
        object.__setattr__(self, "xs", tuple(xs.tolist()))
        object.__setattr__(self, "ys", tuple(ys.tolist()))
        object.__setattr__(self, "_slopes", tuple(slopes.tolist()))

    def __eq__(self, other):
        if not isinstance(other, Tabulated):
            return NotImplemented
        return self.xs == other.xs and self.ys == other.ys

    def __hash__(self):
        return hash((self.xs, self.ys))

    @cached_property
    def domain(self):
        return Interval(self.xs[0], self.xs[-1])

    @property
    def _ulo(self):
        return self.xs[0]

    @property
    def _uhi(self):
        return self.xs[-1]

    def _check(self, x):
        try:
            return super()._check(x)
        except DomainError:
            raise ExtrapolationError(
                f"x={x!r} outside knot range [{self.xs[0]}, {self.xs[-1]}]"
            ) from None

    def _raw(self, x):
        xs, ys, ms = self.xs, self.ys, self._slopes
        i = bisect_right(xs, x) - 1
        if i < 0:
            i = 0
        elif i > len(xs) - 2:
            i = len(xs) - 2
        x0 = xs[i]
        h = xs[i + 1] - x0
        t = (x - x0) / h
        t2 = t * t
        t3 = t2 * t
        return (
            (2 * t3 - 3 * t2 + 1) * ys[i]
            + (t3 - 2 * t2 + t) * h * ms[i]
            + (-2 * t3 + 3 * t2) * ys[i + 1]
            + (t3 - t2) * h * ms[i + 1]
        )

    def _slope(self, x):
        lo, hi = self.xs[0], self.xs[-1]
        h = 1e-6 * (hi - lo)
        if x - h < lo:
            return (self._raw(x + h) - self._raw(x)) / h, True
        if x + h > hi:
            return (self._raw(x) - self._raw(x - h)) / h, True
        return (self._raw(x + h) - self._raw(x - h)) / (2 * h), False


def eval_map(desc, x):
    """Evaluate ``desc`` at ``x`` (volts), clipping the result into its domain."""
    return desc(x)


def map_derivative(desc, x, return_flag=False):
    """Slope ``f'(x)``.

    Analytic for the closed-form maps, a central difference of the
    interpolant (step ``1e-6`` of the domain width) for tabulated maps.
    At a tent kink, near a table edge, or where the output is clipped, the
    returned slope is one-sided; pass ``return_flag=True`` to get
    ``(slope, one_sided)``.
    """
    slope, one_sided = desc.derivative(x)
    if return_flag:
        return slope, one_sided
    return slope


def gnm_effective_r(params, constants=SurrogateConstants()):
    """Logistic parameter conjugate to the surrogate, ``mu1 k / V_c``."""
    if constants.gamma != 0:
        raise NotConjugateError(f"gamma={constants.gamma}: surrogate is not logistic-conjugate")
    return GnmSurrogate(params, constants).r


def gnm_map(params, constants=SurrogateConstants()):
    """Build a surrogate map; accepts :class:`GnmParams` or a ``(mu1, mu2, mu3)`` tuple."""
    if not isinstance(params, GnmParams):
        params = GnmParams(*params)
    return GnmSurrogate(params, constants)


def identity_map(lo=0.0, hi=1.0, knots=8):
    """Tabulated identity on ``[lo, hi]``; handy as a transparent feedback stage."""
    xs = np.linspace(lo, hi, knots)
    return Tabulated(tuple(xs), tuple(xs))


def sample_map(desc, n=1024):
    """Sample ``desc`` at ``n`` uniform points across its domain, as ``(xs, ys)`` arrays."""
    d = desc.domain
    xs = np.linspace(d.lo, d.hi, n)
    ys = np.array([desc(float(x)) for x in xs])
    return xs, ys


def load_tabulated(path):
    """Read a ``x_volts,y_volts`` CSV (optional header) into a :class:`Tabulated` map."""
    xs, ys = [], []
    with open(Path(path), newline="", encoding="utf-8") as fh:
        for rowno, row in enumerate(csv.reader(fh), start=1):
            if not row or all(not c.strip() for c in row):
                continue
            if len(row) != 2:
                raise TableParseError(f"expected 2 columns, got {len(row)}", rowno)
            try:
                x, y = float(row[0]), float(row[1])
            except ValueError:
                if rowno == 1 and not xs:
                    continue  # header
                raise TableParseError(f"non-numeric cell in {row!r}", rowno) from None
            if not (math.isfinite(x) and math.isfinite(y)):
                raise TableParseError(f"non-finite value in {row!r}", rowno)
            if xs and x <= xs[-1]:
                kind = "duplicate" if x == xs[-1] else "decreasing"
                raise TableParseError(f"{kind} x value {x!r}; knots must increase strictly", rowno)
            xs.append(x)
            ys.append(y)
    if len(xs) < 4:
        raise TableParseError(f"insufficient knots: need >= 4, got {len(xs)}")
    return Tabulated(tuple(xs), tuple(ys))
