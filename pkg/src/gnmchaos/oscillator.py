"""
Closed-loop iteration of a map in the two oscillator topologies.

``BufferFeedback``
    the map output is sampled and fed straight back: ``x[k+1] = f(x[k])``.
``MapFeedback``
    a second map sits on the return path: ``y[k] = f(x[k])``,
    ``x[k+1] = g(y[k])``. The observed sequence is the forward output ``y``.

Orbits record outputs only; the seed is not part of ``samples``. Output
number ``k`` (1-based) is the result of the ``k``-th pass through the
forward map.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigurationError, DomainError
from .maps import ENDPOINT_TOL, GnmParams, SurrogateConstants, gnm_map

__all__ = [
    "BufferFeedback",
    "MapFeedback",
    "Schedule",
    "Orbit",
    "iterate",
    "iterate_scheduled",
]


@dataclass(frozen=True)
class BufferFeedback:
    pass


@dataclass(frozen=True)
class MapFeedback:
    fb: object

    def check_compatible(self, fw):
        """Raise unless the feedback domain covers the forward map's range."""
        d, r = self.fb.domain, fw.domain
        if d.lo > r.lo + ENDPOINT_TOL or d.hi < r.hi - ENDPOINT_TOL:
            raise ConfigurationError(
                f"feedback domain [{d.lo}, {d.hi}] does not contain forward range [{r.lo}, {r.hi}]"
            )


@dataclass(frozen=True)
class Schedule:
    """Per-iteration parameter sets; a single entry means constant parameters."""

    entries: tuple

    def __post_init__(self):
        entries = tuple(e if isinstance(e, GnmParams) else GnmParams(*e) for e in self.entries)
        if not entries:
            raise ConfigurationError("schedule must have at least one entry")
        object.__setattr__(self, "entries", entries)

    @classmethod
    def constant(cls, params):
        return cls((params,))

    def __len__(self):
        return len(self.entries)

    def check_length(self, n):
        if len(self.entries) not in (1, n):
            raise ConfigurationError(
                f"schedule length {len(self.entries)} does not match {n} iterations"
            )

    def at(self, k):
        """Parameters for 0-based iteration ``k``."""
        return self.entries[0] if len(self.entries) == 1 else self.entries[k]


@dataclass(frozen=True, eq=False)
class Orbit:
    x0: float
    transient_count: int
    samples: np.ndarray = field(repr=False)
    clipped: bool = False

    def __eq__(self, other):
        if not isinstance(other, Orbit):
            return NotImplemented
        return (
            self.x0 == other.x0
            and self.transient_count == other.transient_count
            and self.clipped == other.clipped
            and np.array_equal(self.samples, other.samples)
        )

    @property
    def indices(self):
        """Row labels used in exported orbit files, starting at ``transient_count``."""
        return np.arange(self.transient_count, self.transient_count + len(self.samples))


def _check_counts(n, transient):
    if not (isinstance(n, (int, np.integer)) and isinstance(transient, (int, np.integer))):
        raise ConfigurationError("n and transient must be integers")
    if not n > transient >= 0:
        raise ConfigurationError(f"need n > transient >= 0, got n={n}, transient={transient}")


def _clip(s, lo, hi):
    if s < lo:
        return lo, True
    if s > hi:
        return hi, True
    return s, False


def _unit_bounds(m):
    d = m.domain
    return d.lo / m.scale, d.hi / m.scale


def _run(maps_at, topo, x0, n, transient):
    """Core loop; ``maps_at(k)`` yields the forward map for 0-based step ``k``.

    The state is carried in the forward map's unit coordinates and is only
    re-derived from volts when the scale changes between steps, so the
    recursion is exact in those coordinates.
    """
    out = np.empty(n - transient)
    clipped = False
    fw = maps_at(0)
    try:
        fw._check(x0)
    except DomainError as exc:
        raise ConfigurationError(f"seed outside forward map domain: {exc}") from None
    fb = topo.fb if isinstance(topo, MapFeedback) else None
    if fb is not None:
        topo.check_compatible(fw)
        fb_lo, fb_hi = _unit_bounds(fb)
        fb_scale = fb.scale
    scale = fw.scale
    lo, hi = _unit_bounds(fw)
    s, c = _clip(min(max(x0, fw.domain.lo), fw.domain.hi) / scale, lo, hi)
    prev = fw
    for k in range(n):
        if k:
            fw = maps_at(k)
            if fw is not prev:
                if fw.scale != scale or fw.domain != prev.domain:
                    x = s * scale
                    scale = fw.scale
                    lo, hi = _unit_bounds(fw)
                    s, c = _clip(x / scale, lo, hi)
                    clipped |= c
                prev = fw
        s, c = _clip(fw._raw(s), lo, hi)
        clipped |= c
        y = s * scale
        if k >= transient:
            out[k - transient] = y
        if fb is not None:
            t, c = _clip(fb._raw(y / fb_scale), fb_lo, fb_hi)
            clipped |= c
            s, c = _clip(t * fb_scale / scale, lo, hi)
            clipped |= c
    out.flags.writeable = False
    return Orbit(float(x0), int(transient), out, bool(clipped))


def iterate(fw, topo, x0, n, transient=0):
    """Run the oscillator for ``n`` iterations and keep the last ``n - transient`` outputs.

    Out-of-interval values are clipped and reported through
    ``Orbit.clipped``; they never abort the run.

    Examples
    --------
    >>> from gnmchaos.maps import Logistic
    >>> orb = iterate(Logistic(2.0), BufferFeedback(), 0.3, 100, 99)
    >>> round(float(orb.samples[0]), 12)
    0.5
    """
    _check_counts(n, transient)
    return _run(lambda k: fw, topo, x0, n, transient)


def iterate_scheduled(fw_family, sched, topo, x0, n, transient=0):
    """Iterate with parameters taken from ``sched`` at every step.

    ``fw_family`` builds a forward map from a :class:`GnmParams`; pass
    ``None`` for the surrogate with default constants.
    """
    _check_counts(n, transient)
    if not isinstance(sched, Schedule):
        sched = Schedule(tuple(sched))
    sched.check_length(n)
    if fw_family is None:
        fw_family = gnm_map
    cache = {}

    def maps_at(k):
        p = sched.at(k)
        m = cache.get(p)
        if m is None:
            m = cache[p] = fw_family(p)
        return m

    return _run(maps_at, topo, x0, n, transient)


def default_family(constants=SurrogateConstants()):
    """Map constructor for the surrogate with fixed shape constants."""

    def family(params):
        return gnm_map(params, constants)

    return family
