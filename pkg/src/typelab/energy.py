"""Coulomb energy of finite point configurations.

The energy of a configuration is the sum of ``log|x_k - x_l|`` over ordered
pairs ``k != l`` (every unordered pair counted twice, matching the per-point
factorial closed form for arithmetic grids).  The deficit of a configuration
inside an interval ``I`` is ``count^2 * log|I| - energy``; it is nonnegative
whenever ``|I| >= 1`` and measures how far the points are from uniform.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import Interval, RealSequence, TypelabError

# below this separation a pair is treated as coincident rather than
# silently contributing -inf
DEGENERATE_DISTANCE = 1e-300

# configurations up to this size use one full pairwise matrix
_MATRIX_LIMIT = 512
_BLOCK = 256


class TooFewPoints(TypelabError):
    pass


class IntervalTooShort(TypelabError):
    pass


class DegenerateDistance(TypelabError):
    pass


@dataclass(frozen=True)
class EnergyReport:
    """Point count, energy and uniformity deficit of one interval."""

    delta: int
    energy: float
    deficit: float
    interval: Interval

    def to_dict(self) -> dict:
        return {
            "delta": self.delta,
            "energy": self.energy,
            "deficit": self.deficit,
            "interval": self.interval.to_dict(),
        }


def _as_points(config) -> np.ndarray:
    if isinstance(config, RealSequence):
        return config.points
    return np.asarray(config, dtype=float)


def coulomb_energy(config, exact: bool = False) -> float:
    """Sum of ``log|x_k - x_l|`` over ordered pairs of distinct points.

    Points must be pairwise distinct; a gap below 1e-300 raises
    :class:`DegenerateDistance` instead of poisoning downstream deficits
    with -inf.  ``exact=True`` switches to exactly rounded summation over
    every pair (O(n^2) python loop, intended for small test configurations).
    """
    pts = np.sort(_as_points(config))
    n = pts.size
    if n < 2:
        raise TooFewPoints("coulomb energy needs at least 2 points")
    gaps = np.diff(pts)
    if np.min(gaps) < DEGENERATE_DISTANCE:
        raise DegenerateDistance("two points closer than 1e-300")

    if exact:
        terms = []
        for i in range(n - 1):
            for j in range(i + 1, n):
                terms.append(math.log(pts[j] - pts[i]))
        return 2.0 * math.fsum(terms)

    if n <= _MATRIX_LIMIT:
        rows, cols = np.triu_indices(n, k=1)
        # numpy's pairwise (cascade) summation keeps the error compensated
        # and the reduction order fixed for a given size
        return 2.0 * float(np.log(pts[cols] - pts[rows]).sum())

    # row-blocked pairwise sum; fixed block size keeps the reduction order
    # independent of the execution environment
    block_sums: list[float] = []
    for start in range(0, n - 1, _BLOCK):
        stop = min(start + _BLOCK, n - 1)
        acc = 0.0
        for i in range(start, stop):
            acc += float(np.log(pts[i + 1:] - pts[i]).sum())
        block_sums.append(acc)
    return 2.0 * math.fsum(block_sums)


def grid_energy_closed_form(delta: int, d: float) -> float:
    """Closed-form energy of the arithmetic grid ``{0, 1/d, ..., (delta-1)/d}``.

    Evaluates ``sum_m [lgamma(m) + lgamma(delta - m + 1)] - delta(delta-1) log d``
    via log-gamma, avoiding factorial overflow.
    """
    if delta < 2:
        raise TooFewPoints("closed form needs delta >= 2")
    if d <= 0:
        raise TypelabError("grid density d must be positive")
    terms = [math.lgamma(m) + math.lgamma(delta - m + 1) for m in range(1, delta + 1)]
    return math.fsum(terms) - delta * (delta - 1) * math.log(d)


def energy_report(config, interval: Interval) -> EnergyReport:
    """Count, energy and deficit of ``config`` restricted to ``interval``.

    Requires ``|interval| >= 1`` so that the deficit is guaranteed
    nonnegative.  With at most one point inside, the energy is 0 and the
    deficit reduces to ``delta^2 log|I|``.
    """
    if interval.length < 1.0:
        raise IntervalTooShort(f"interval length {interval.length} < 1")
    pts = _as_points(config)
    lo = np.searchsorted(pts, interval.left, side="right")
    hi = np.searchsorted(pts, interval.right, side="right")
    inside = pts[lo:hi]
    delta = int(inside.size)
    energy = coulomb_energy(inside) if delta >= 2 else 0.0
    deficit = delta * delta * math.log(interval.length) - energy
    return EnergyReport(delta, energy, deficit, interval)
