"""Shared domain types and the Poisson-tail primitives.

Everything downstream works on finite truncations: a symmetric window
``[-T, T]`` stands in for the real line, and every "is this series finite"
question becomes a :class:`SumVerdict`, a classification of the truncated
series backed by dyadic-shell diagnostics.

Conventions used throughout the package:

* intervals are half-open ``(left, right]``; a breakpoint belongs to the
  interval it closes on the right;
* the Poisson weight is ``1 / (1 + x^2)``;
* dyadic shell ``j`` collects contributions whose location satisfies
  ``2^j <= |x| < 2^(j+1)``; locations with ``|x| < 1`` form the inner
  remainder and never take part in the convergence fit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

CONVERGENT = "convergent"
DIVERGENT = "divergent"
INCONCLUSIVE = "inconclusive"

# Least-squares slope thresholds of log(shell sum) vs shell index, fitted
# over the outer half of the nonempty shells.
SLOPE_CONVERGENT = -0.2
SLOPE_DIVERGENT = -0.05
MIN_SHELLS = 4


class TypelabError(Exception):
    """Base class for all domain errors raised by this package."""


class EmptyInput(TypelabError):
    pass


class DuplicatePoint(TypelabError):
    pass


class OutOfWindow(TypelabError):
    pass


class NegativeTerm(TypelabError):
    pass


def poisson_weight(x: float) -> float:
    """Weight of the Poisson measure dx/(1+x^2) at ``x``."""
    return 1.0 / (1.0 + x * x)


@dataclass(frozen=True)
class Interval:
    """Half-open interval ``(left, right]``."""

    left: float
    right: float

    def __post_init__(self) -> None:
        if not self.right > self.left:
            raise TypelabError(f"interval needs right > left, got ({self.left}, {self.right}]")

    @property
    def length(self) -> float:
        return self.right - self.left

    @property
    def midpoint(self) -> float:
        return 0.5 * (self.left + self.right)

    def dist0(self) -> float:
        """Distance from the origin to the closure of the interval."""
        if self.left <= 0.0 <= self.right:
            return 0.0
        return self.left if self.left > 0.0 else -self.right

    def contains(self, x: float) -> bool:
        return self.left < x <= self.right

    def dilate(self, factor: float) -> "Interval":
        """Concentric dilation by ``factor``."""
        half = 0.5 * factor * self.length
        return Interval(self.midpoint - half, self.midpoint + half)

    def to_dict(self) -> dict:
        return {"left": self.left, "right": self.right}


@dataclass(frozen=True)
class RealSequence:
    """Finite truncation of a discrete real sequence on ``[-T, T]``.

    Points are strictly increasing with no duplicates.  ``generator_tag``
    optionally records how the infinite extension would continue
    (e.g. ``"arithmetic(d=1)"``).
    """

    points: np.ndarray
    window: float
    generator_tag: str | None = None

    def __post_init__(self) -> None:
        pts = np.asarray(self.points, dtype=float)
        object.__setattr__(self, "points", pts)
        if self.window <= 0:
            raise TypelabError("window must be positive")
        if pts.size:
            if np.any(np.diff(pts) <= 0):
                raise DuplicatePoint("points must be strictly increasing")
            if np.max(np.abs(pts)) > self.window:
                raise OutOfWindow("points must lie in [-T, T]")

    def __len__(self) -> int:
        return int(self.points.size)

    def count_in(self, left: float, right: float) -> int:
        """Number of points in ``(left, right]``."""
        pts = self.points
        return int(np.searchsorted(pts, right, side="right")
                   - np.searchsorted(pts, left, side="right"))

    def centered_indices(self) -> np.ndarray:
        """Enumeration indices with 0 at the first point ``>= 0``."""
        if not len(self):
            return np.zeros(0, dtype=int)
        k0 = int(np.searchsorted(self.points, 0.0, side="left"))
        return np.arange(len(self)) - k0

    def to_dict(self) -> dict:
        out = {"points": self.points.tolist(), "window": self.window}
        if self.generator_tag is not None:
            out["generator"] = self.generator_tag
        return out


def validate_sequence(points, window: float, generator_tag: str | None = None) -> RealSequence:
    """Sort, validate and wrap raw points into a :class:`RealSequence`.

    Raises :class:`EmptyInput`, :class:`DuplicatePoint` (exactly equal
    entries) or :class:`OutOfWindow` (``|x| > T``).
    """
    arr = np.asarray(list(points), dtype=float)
    if arr.size == 0:
        raise EmptyInput("at least one point is required")
    arr = np.sort(arr)
    if np.any(np.diff(arr) == 0):
        raise DuplicatePoint("duplicate points in input")
    if np.max(np.abs(arr)) > window:
        raise OutOfWindow(f"point outside [-{window}, {window}]")
    return RealSequence(arr, float(window), generator_tag)


@dataclass(frozen=True)
class Partition:
    """Contiguous half-open intervals tiling ``(first, last]``, with 0 a breakpoint."""

    breakpoints: np.ndarray

    def __post_init__(self) -> None:
        bks = np.asarray(self.breakpoints, dtype=float)
        object.__setattr__(self, "breakpoints", bks)
        if bks.size < 2:
            raise TypelabError("a partition needs at least two breakpoints")
        if np.any(np.diff(bks) <= 0):
            raise TypelabError("breakpoints must be strictly increasing")
        if not np.any(bks == 0.0):
            raise TypelabError("partition must contain 0 as a breakpoint")

    @property
    def intervals(self) -> list[Interval]:
        bks = self.breakpoints
        return [Interval(bks[i], bks[i + 1]) for i in range(len(bks) - 1)]

    @property
    def span(self) -> Interval:
        return Interval(float(self.breakpoints[0]), float(self.breakpoints[-1]))

    def __len__(self) -> int:
        return len(self.breakpoints) - 1

    def to_dict(self) -> dict:
        return {"breakpoints": self.breakpoints.tolist()}


@dataclass(frozen=True)
class DiscreteMeasure:
    """Finite positive discrete measure: atoms at ``positions`` with ``masses``."""

    positions: np.ndarray
    masses: np.ndarray
    window: float
    tag: str | None = None

    def __post_init__(self) -> None:
        pos = np.asarray(self.positions, dtype=float)
        mas = np.asarray(self.masses, dtype=float)
        object.__setattr__(self, "positions", pos)
        object.__setattr__(self, "masses", mas)
        if pos.size == 0:
            raise EmptyInput("measure needs at least one atom")
        if pos.shape != mas.shape:
            raise TypelabError("positions and masses must align")
        if np.any(np.diff(pos) <= 0):
            raise DuplicatePoint("atom positions must be strictly increasing")
        if np.any(mas <= 0) or not np.all(np.isfinite(mas)):
            raise TypelabError("masses must be positive and finite")
        if np.max(np.abs(pos)) > self.window:
            raise OutOfWindow("atom outside the window")

    def __len__(self) -> int:
        return int(self.positions.size)

    @property
    def total_mass(self) -> float:
        return float(math.fsum(self.masses))

    def support(self) -> RealSequence:
        return RealSequence(self.positions.copy(), self.window, self.tag)

    def mass_in(self, left: float, right: float, closed: bool = False) -> float:
        """Mass of ``(left, right]`` (default) or ``[left, right]``."""
        pos = self.positions
        lo = np.searchsorted(pos, left, side="left" if closed else "right")
        hi = np.searchsorted(pos, right, side="right")
        return float(math.fsum(self.masses[lo:hi]))

    def centered_indices(self) -> np.ndarray:
        k0 = int(np.searchsorted(self.positions, 0.0, side="left"))
        return np.arange(len(self)) - k0

    def to_dict(self) -> dict:
        out = {"atoms": [[float(x), float(m)] for x, m in zip(self.positions, self.masses)],
               "window": self.window}
        if self.tag is not None:
            out["tag"] = self.tag
        return out


MU_WEIGHT = "mu-weight"
SAMPLES = "samples"


@dataclass(frozen=True)
class WeightTable:
    """Piecewise-constant function: ``values[i]`` on ``(breakpoints[i], breakpoints[i+1]]``.

    ``kind="mu-weight"`` enforces values >= floor >= 1 and requires the
    weight not to dip toward the window edges (min over the outer 10% of
    the span must be >= min over the inner 10%).  ``kind="samples"`` only
    requires nonnegative values and is used for plain density samples.
    """

    breakpoints: np.ndarray
    values: np.ndarray
    kind: str = MU_WEIGHT
    floor: float = 1.0

    def __post_init__(self) -> None:
        bks = np.asarray(self.breakpoints, dtype=float)
        vals = np.asarray(self.values, dtype=float)
        object.__setattr__(self, "breakpoints", bks)
        object.__setattr__(self, "values", vals)
        if bks.size < 2 or vals.size != bks.size - 1:
            raise TypelabError("need n+1 breakpoints for n values")
        if np.any(np.diff(bks) <= 0):
            raise TypelabError("breakpoints must be strictly increasing")
        if self.kind == MU_WEIGHT:
            if self.floor < 1.0:
                raise TypelabError("mu-weight floor must be >= 1")
            if np.any(vals < self.floor):
                raise TypelabError("mu-weight values must be >= floor")
            span = bks[-1] - bks[0]
            outer = vals[(_mids(bks) <= bks[0] + 0.1 * span) | (_mids(bks) >= bks[-1] - 0.1 * span)]
            inner_lo = bks[0] + 0.45 * span
            inner_hi = bks[0] + 0.55 * span
            inner = vals[(_mids(bks) >= inner_lo) & (_mids(bks) <= inner_hi)]
            if outer.size and inner.size and outer.min() < inner.min() - 1e-12 * abs(inner.min()):
                raise TypelabError("mu-weight must not dip toward the window edges")
        elif self.kind == SAMPLES:
            if np.any(vals < 0):
                raise TypelabError("sample values must be >= 0")
        else:
            raise TypelabError(f"unknown weight table kind {self.kind!r}")

    def evaluate(self, x) -> np.ndarray:
        """Evaluate the step function; clamps outside the covered span."""
        xs = np.atleast_1d(np.asarray(x, dtype=float))
        idx = np.searchsorted(self.breakpoints, xs, side="left") - 1
        idx = np.clip(idx, 0, len(self.values) - 1)
        out = self.values[idx]
        return out if np.ndim(x) else float(out[0])

    @property
    def pieces(self) -> list[tuple[float, float, float]]:
        bks, vals = self.breakpoints, self.values
        return [(float(bks[i]), float(bks[i + 1]), float(vals[i])) for i in range(len(vals))]

    def to_dict(self) -> dict:
        return {"breakpoints": self.breakpoints.tolist(),
                "values": self.values.tolist(),
                "kind": self.kind}


def _mids(bks: np.ndarray) -> np.ndarray:
    return 0.5 * (bks[:-1] + bks[1:])


@dataclass(frozen=True)
class SumVerdict:
    """Classification of a truncated nonnegative series.

    ``shell_sums`` lists ``(j, sum of terms with 2^j <= |location| < 2^(j+1))``;
    ``inner_sum`` holds the ``|location| < 1`` remainder, so that
    ``value_truncated == inner_sum + sum(shell sums)`` up to rounding.
    ``fit_ratio`` is the estimated geometric ratio between consecutive
    shell sums (``exp`` of the fitted slope), or None when no fit was made.
    """

    value_truncated: float
    shell_sums: tuple[tuple[int, float], ...]
    inner_sum: float
    classification: str
    fit_ratio: float | None = None
    note: str | None = None

    @property
    def convergent(self) -> bool:
        return self.classification == CONVERGENT

    @property
    def divergent(self) -> bool:
        return self.classification == DIVERGENT

    def to_dict(self) -> dict:
        return {
            "value_truncated": self.value_truncated,
            "shell_sums": [[j, s] for j, s in self.shell_sums],
            "inner_sum": self.inner_sum,
            "classification": self.classification,
            "fit_ratio": self.fit_ratio,
            "note": self.note,
        }


def shell_index(location: float) -> int | None:
    """Dyadic shell of a location; None for the inner region ``|x| < 1``."""
    ax = abs(location)
    if ax < 1.0:
        return None
    return int(math.floor(math.log2(ax)))


def shell_sum_verdict(locations, values, note: str | None = None) -> SumVerdict:
    """Classify the series ``sum(values)`` whose terms live at ``locations``.

    Values must be nonnegative; they are binned into dyadic shells by
    ``|location|`` and the log of the (smoothed) shell sums is fitted
    against the shell index by least squares over the outer half of the
    shell range.  The slope decides: <= -0.2 convergent, >= -0.05
    divergent, otherwise inconclusive; fewer than four nonempty shells is
    always inconclusive.
    """
    locations = np.asarray(list(locations), dtype=float)
    values = np.asarray(list(values), dtype=float)
    if locations.shape != values.shape:
        raise TypelabError("locations and values must align")
    if np.any(values < 0):
        raise NegativeTerm("series terms must be nonnegative")

    total = math.fsum(values)
    shells: dict[int, list[float]] = {}
    inner: list[float] = []
    for loc, val in zip(locations, values):
        j = shell_index(loc)
        if j is None:
            inner.append(val)
        else:
            shells.setdefault(j, []).append(val)
    shell_sums = tuple(sorted((j, math.fsum(vs)) for j, vs in shells.items()))
    inner_sum = math.fsum(inner)

    classification, ratio = _classify_shells(shell_sums)
    return SumVerdict(total, shell_sums, inner_sum, classification, ratio, note)


def _classify_shells(shell_sums: tuple[tuple[int, float], ...]) -> tuple[str, float | None]:
    if len(shell_sums) < MIN_SHELLS:
        return INCONCLUSIVE, None
    shells = shell_sums
    if len(shells) > MIN_SHELLS:
        # the outermost shell is usually clipped by the window and would
        # bias the fit downward
        shells = shells[:-1]
    # fit on 3-shell moving-window means: a geometric sequence keeps its
    # slope while binning jitter (a term landing just under a dyadic
    # boundary empties its neighbour shell) is smoothed away
    j_lo, j_hi = shells[0][0], shells[-1][0]
    dense = {j: 0.0 for j in range(j_lo, j_hi + 1)}
    dense.update(dict(shells))
    # the topmost window would be right-clipped and could fake a decaying
    # tail out of a single straggler shell, so the fit stops one short
    windows = []
    for j in range(j_lo, j_hi):
        vals = [dense[i] for i in (j - 1, j, j + 1) if j_lo <= i <= j_hi]
        windows.append((j, math.fsum(vals) / len(vals)))
    outer = windows[len(windows) // 2:]
    pts = [(j, math.log(s)) for j, s in outer if s > 0.0]
    if len(pts) < 2:
        if all(s == 0.0 for _, s in outer):
            # tail vanishes identically: nothing left to sum
            return CONVERGENT, 0.0
        return INCONCLUSIVE, None
    xs = np.array([p[0] for p in pts], dtype=float)
    ys = np.array([p[1] for p in pts], dtype=float)
    xbar, ybar = xs.mean(), ys.mean()
    denom = float(np.sum((xs - xbar) ** 2))
    if denom == 0.0:
        return INCONCLUSIVE, None
    slope = float(np.sum((xs - xbar) * (ys - ybar)) / denom)
    ratio = math.exp(min(max(slope, -700.0), 700.0))
    if slope <= SLOPE_CONVERGENT:
        return CONVERGENT, ratio
    if slope >= SLOPE_DIVERGENT:
        return DIVERGENT, ratio
    return INCONCLUSIVE, ratio


def poisson_tail_sum(terms) -> SumVerdict:
    """Classify ``sum value/(1 + location^2)`` for ``terms = [(location, value), ...]``.

    The nonnegative ``value`` entries are Poisson-weighted at their
    locations and handed to the dyadic-shell classifier; an empty list
    yields value 0 and an inconclusive verdict.
    """
    locs = [float(t[0]) for t in terms]
    vals = [float(t[1]) for t in terms]
    if any(v < 0 for v in vals):
        raise NegativeTerm("poisson_tail_sum requires nonnegative values")
    weighted = [v * poisson_weight(x) for x, v in zip(locs, vals)]
    return shell_sum_verdict(locs, weighted)


def poisson_piece_contributions(pieces) -> list[tuple[float, float]]:
    """Exact Poisson integrals of a step function, split at dyadic bounds.

    ``pieces`` is an iterable of ``(left, right, value)``; each piece is cut
    at the shell boundaries ``+-2^j`` so that every returned contribution
    ``(location, integral)`` lies in a single shell.  The integral of
    ``value/(1+x^2)`` over ``[u, v]`` is ``value * (atan v - atan u)``.
    """
    out: list[tuple[float, float]] = []
    for left, right, value in pieces:
        for u, v in split_at_shells(left, right):
            contrib = value * (math.atan(v) - math.atan(u))
            out.append((0.5 * (u + v), contrib))
    return out


def split_at_shells(left: float, right: float) -> list[tuple[float, float]]:
    """Cut ``[left, right]`` at 0 and at every ``+-2^j`` inside it."""
    cuts = {left, right}
    if left < 0.0 < right:
        cuts.add(0.0)
    hi = max(abs(left), abs(right))
    j = 0
    while 2.0 ** j < hi:
        for s in (2.0 ** j, -(2.0 ** j)):
            if left < s < right:
                cuts.add(s)
        j += 1
    seq = sorted(cuts)
    return [(seq[i], seq[i + 1]) for i in range(len(seq) - 1) if seq[i + 1] > seq[i]]
