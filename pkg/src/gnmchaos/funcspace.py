"""
Functionality-space sizes of chaogate designs.

All four counts are exact Python integers; they overflow 64 bits quickly.

========  =====================================================================
``f1``    single parameter, control bits, iteration count:  ``2^c * N_mu * n``
``f2``    threshold levels, per-iteration parameter:  ``N_vref * N_mu^n * n``
``f3``    one three-parameter map, per-iteration levels:
          ``N_vref * 2^c * (N_mu1 * N_mu2 * N_mu3)^n * n``
``f4``    forward and feedback maps, each with three parameters:
          ``N_vref * 2^c * (N_mu1 * N_mu2 * N_mu3)^(2n) * n``
========  =====================================================================
"""

import math
from dataclasses import dataclass, replace
from typing import NamedTuple

from .errors import ConfigurationError

__all__ = ["SpaceParams", "SpaceRow", "f1", "f2", "f3", "f4", "compare_spaces", "COMPARE_HEADER"]


@dataclass(frozen=True)
class SpaceParams:
    c: int = 0
    n_mu: int = 1
    n_mu1: int = 1
    n_mu2: int = 1
    n_mu3: int = 1
    n_vref: int = 1
    n: int = 1

    def __post_init__(self):
        for name in ("c", "n_mu", "n_mu1", "n_mu2", "n_mu3", "n_vref", "n"):
            v = getattr(self, name)
            if isinstance(v, bool) or not isinstance(v, int):
                raise ConfigurationError(f"{name} must be an integer, got {v!r}")
        if self.c < 0:
            raise ConfigurationError("c must be >= 0")
        for name in ("n_mu", "n_mu1", "n_mu2", "n_mu3", "n_vref", "n"):
            if getattr(self, name) < 1:
                raise ConfigurationError(f"{name} must be >= 1")


def f1(p):
    return 2**p.c * p.n_mu * p.n


def f2(p):
    return p.n_vref * p.n_mu**p.n * p.n


def f3(p):
    return p.n_vref * 2**p.c * p.n_mu1**p.n * p.n_mu2**p.n * p.n_mu3**p.n * p.n


def f4(p):
    k = 2 * p.n
    return p.n_vref * 2**p.c * p.n_mu1**k * p.n_mu2**k * p.n_mu3**k * p.n


class SpaceRow(NamedTuple):
    n: int
    f1: int
    f2: int
    f3: int
    f4: int

    @property
    def log10(self):
        return tuple(math.log10(v) for v in (self.f1, self.f2, self.f3, self.f4))


COMPARE_HEADER = (
    "F1..F4 are configuration counts of single-parameter, threshold-scheduled, "
    "one-map and two-map designs. F4 > F3 > F2 > F1 is expected when every level "
    "count is >= 2, n >= 2, and N_mu equals N_mu1."
)


def compare_spaces(p, n_range):
    """Rows ``(n, F1, F2, F3, F4)`` for every ``n`` in ``n_range`` (inclusive pair or iterable)."""
    if isinstance(n_range, tuple) and len(n_range) == 2:
        lo, hi = n_range
        ns = range(lo, hi + 1)
    else:
        ns = list(n_range)
    if not ns:
        raise ConfigurationError("empty n range")
    rows = []
    for n in ns:
        q = replace(p, n=n)
        rows.append(SpaceRow(n, f1(q), f2(q), f3(q), f4(q)))
    return rows
