"""Generators for the bundled test families.

Includes two constructive procedures: the auxiliary pair/fill sequence
built around a weighted base sequence, and the block construction placing
points at equal measure inside a prescribed union of intervals.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .core import (
    DiscreteMeasure,
    Interval,
    Partition,
    RealSequence,
    TypelabError,
    WeightTable,
)

class WeightUnbounded(TypelabError):
    pass


class BadL(TypelabError):
    pass


class UnknownFamily(TypelabError):
    pass


class ConditionsFailed(TypelabError):
    pass


def arithmetic(d: float, T: float) -> RealSequence:
    """Arithmetic progression of density ``d``: points ``k/d`` with ``|k/d| <= T``."""
    if d <= 0 or T <= 0:
        raise TypelabError("d and T must be positive")
    kmax = int(math.floor(d * T + 1e-9))
    pts = np.arange(-kmax, kmax + 1, dtype=float) / d
    return RealSequence(pts, T, f"arithmetic(d={d:g})")


def perturb_exponential(seq: RealSequence, c: float, rng_seed: int) -> RealSequence:
    """Shift each point by a seeded uniform offset within ``+-exp(-c|x|)``.

    The output is re-sorted; exact collisions keep the earlier point.
    """
    if c <= 0:
        raise TypelabError("decay rate c must be positive")
    rng = np.random.default_rng(rng_seed)
    pts = seq.points
    offsets = rng.uniform(-1.0, 1.0, size=pts.size) * np.exp(-c * np.abs(pts))
    shifted = np.sort(pts + offsets)
    shifted = np.clip(shifted, -seq.window, seq.window)
    keep = np.ones(shifted.size, dtype=bool)
    keep[1:] = np.diff(shifted) > 0.0  # exact collisions keep the earlier point
    return RealSequence(shifted[keep], seq.window,
                        f"perturbed(c={c:g}, seed={rng_seed})")


def alternating_partition(even_len: float, odd_len: float, T: float) -> Partition:
    """Symmetric tiling by alternating intervals, even-length first after 0.

    Index parity is anchored at the breakpoint 0: the interval just right
    of 0 has even index (length ``even_len``), the one just left of 0 has
    odd index (length ``odd_len``).
    """
    if even_len <= 0 or odd_len <= 0:
        raise TypelabError("interval lengths must be positive")
    right = [0.0]
    while True:
        for step in (even_len, odd_len):
            right.append(right[-1] + step)
        if right[-1] >= T:
            break
    left = [0.0]
    while True:
        for step in (odd_len, even_len):
            left.append(left[-1] - step)
        if left[-1] <= -T:
            break
    bks = sorted(set(left) | set(right))
    return Partition(np.asarray(bks))


@dataclass(frozen=True)
class AuxiliaryFamily:
    """Output of the pair/fill construction around a base sequence."""

    a_sequence: RealSequence      # pair points plus uniform gap fill
    c_sequence: RealSequence      # midpoints of consecutive A-points
    b_matched: RealSequence       # base points recovered as midpoints
    max_gap: float
    max_pair_width: float
    pair_widths: np.ndarray       # aligned with the interior base points
    fill_count: int

    def to_dict(self) -> dict:
        return {
            "a_sequence": self.a_sequence.to_dict(),
            "c_sequence": self.c_sequence.to_dict(),
            "b_matched": self.b_matched.to_dict(),
            "max_gap": self.max_gap,
            "max_pair_width": self.max_pair_width,
            "fill_count": self.fill_count,
        }


def auxiliary_sequence(B: RealSequence, w: WeightTable, epsilon: float,
                       L: float) -> AuxiliaryFamily:
    """Surround each base point with a weighted pair and fill long gaps.

    Around each interior base point ``b`` a pair ``b -+ l/3`` is placed,
    where ``l = min(gap left, gap right, w(b))``; gaps between consecutive
    pairs longer than ``L`` receive ``floor(gap/L)`` uniformly spaced fill
    points.  Every base point is then exactly the midpoint of its pair, so
    it reappears in the midpoint sequence C.

    Requires ``L >= 1/epsilon`` (fill spacing consistent with the gap bound)
    and strictly positive finite weights.
    """
    if epsilon <= 0:
        raise TypelabError("epsilon must be positive")
    if L < 1.0 / epsilon:
        raise BadL(f"need L >= 1/epsilon = {1.0 / epsilon}")
    if len(B) < 3:
        raise TypelabError("base sequence needs at least 3 points")
    wb = np.atleast_1d(w.evaluate(B.points))
    if np.any(~np.isfinite(wb)) or np.any(wb <= 0):
        raise WeightUnbounded("weights must be positive and finite")

    b = B.points
    gaps_left = b[1:-1] - b[:-2]
    gaps_right = b[2:] - b[1:-1]
    l = np.minimum(np.minimum(gaps_left, gaps_right), wb[1:-1])
    centers = b[1:-1]
    if np.any(l / 3.0 <= 4.0 * np.spacing(np.abs(centers))):
        raise WeightUnbounded(
            "pair widths fall below the float spacing of the base points; "
            "shrink the window or raise the weights")
    pairs = np.empty(2 * centers.size)
    pairs[0::2] = centers - l / 3.0
    pairs[1::2] = centers + l / 3.0

    fill: list[float] = []
    for i in range(centers.size - 1):
        lo = pairs[2 * i + 1]
        hi = pairs[2 * i + 2]
        gap = hi - lo
        if gap > L:
            m = int(math.floor(gap / L))
            for k in range(1, m + 1):
                fill.append(lo + k * gap / (m + 1))
    a_pts = np.sort(np.concatenate([pairs, np.asarray(fill)]))
    a_seq = RealSequence(a_pts, B.window, "auxiliary-A")
    c_pts = 0.5 * (a_pts[:-1] + a_pts[1:])
    c_seq = RealSequence(c_pts, B.window, "auxiliary-C")

    # base points reappear as pair midpoints, up to rounding
    scale = max(1.0, float(np.max(np.abs(b))))
    matched = centers[np.isclose(centers[:, None], c_pts[None, :],
                                 atol=1e-9 * scale, rtol=0.0).any(axis=1)]
    widths = 2.0 * l / 3.0
    return AuxiliaryFamily(
        a_seq, c_seq,
        RealSequence(matched, B.window, "auxiliary-B-matched"),
        float(np.max(np.diff(a_pts))) if a_pts.size > 1 else 0.0,
        float(np.max(widths)),
        widths,
        len(fill),
    )


@dataclass(frozen=True)
class BenedicksFamily:
    sequence: RealSequence
    blocks: Partition
    block_counts: tuple[int, ...]

    def to_dict(self) -> dict:
        return {
            "sequence": self.sequence.to_dict(),
            "blocks": self.blocks.to_dict(),
            "block_counts": list(self.block_counts),
        }


def default_block_growth(n: int) -> int:
    return max(1, math.ceil(math.log(2 + abs(n))))


def benedicks_sequence(partition: Partition, C: float,
                       c1: float = 8.0, c2: float = 8.0, c3: float = 0.4,
                       block_growth: Callable[[int], int] | None = None) -> BenedicksFamily:
    """Place points at equal measure inside the even intervals of blocks.

    The alternating partition is regrouped into blocks spanning a slowly
    growing number of cells; each block of length ``|J|`` receives
    ``floor(C |J|)`` points inside the union of its even intervals, spaced
    so that the margins and all inner gaps carry equal measure of that
    union.  Fails with :class:`ConditionsFailed` when the alternating
    partition does not satisfy the admissibility conditions at
    ``(c1, c2, c3)``.
    """
    from .typeproblem import benedicks_conditions  # deferred: avoids import cycle

    verdict = benedicks_conditions(partition, c1, c2, c3)
    if not verdict.applicable:
        raise ConditionsFailed(str(verdict.evidence.get("failures", "conditions not met")))
    if C <= 0:
        raise TypelabError("point density C must be positive")
    growth = block_growth or default_block_growth

    bks = partition.breakpoints
    i0 = int(np.flatnonzero(bks == 0.0)[0])
    n_min = -i0
    n_max = len(bks) - 1 - i0

    def a(n: int) -> float:
        return float(bks[i0 + n])

    # block boundaries in units of even-interval index: n_{k+1} = n_k + growth(n_k)
    # rightward and n_{k-1} = n_k - growth(n_k) leftward
    marks = [0]
    n = 0
    while 2 * (n + growth(n)) <= n_max:
        n = n + growth(n)
        marks.append(n)
    n = 0
    while 2 * (n - growth(n)) >= n_min:
        n = n - growth(n)
        marks.insert(0, n)
    if len(marks) < 2:
        raise ConditionsFailed("partition too small to form one block")

    block_bks = [a(2 * n) for n in marks]
    points: list[float] = []
    counts: list[int] = []
    for lo_mark, hi_mark in zip(marks, marks[1:]):
        lo, hi = a(2 * lo_mark), a(2 * hi_mark)
        evens = []
        for m in range(2 * lo_mark, 2 * hi_mark):
            if m % 2 == 0 and i0 + m + 1 <= len(bks) - 1:
                evens.append(Interval(a(m), a(m + 1)))
        placed = _equal_measure_points(evens, int(math.floor(C * (hi - lo))))
        points.extend(placed)
        counts.append(len(placed))
    seq = RealSequence(np.asarray(sorted(points)),
                       float(max(abs(bks[0]), abs(bks[-1]))),
                       f"benedicks(C={C:g})")
    return BenedicksFamily(seq, Partition(np.asarray(block_bks)), tuple(counts))


def _equal_measure_points(evens: list[Interval], n_points: int) -> list[float]:
    """Invert the cumulative even-interval length at equally spaced levels."""
    if n_points <= 0 or not evens:
        return []
    lengths = np.array([iv.length for iv in evens])
    cum = np.concatenate([[0.0], np.cumsum(lengths)])
    total = cum[-1]
    out = []
    for m in range(1, n_points + 1):
        level = total * m / (n_points + 1)
        idx = int(np.searchsorted(cum, level, side="left")) - 1
        idx = min(max(idx, 0), len(evens) - 1)
        if level >= cum[idx + 1]:
            # level sits exactly on a plateau edge: resolve to the left
            # endpoint of the next even interval
            idx = min(idx + 1, len(evens) - 1)
        off = level - cum[idx]
        out.append(evens[idx].left + off)
    return out


def weight_families(name: str, params: dict | None, indices) -> np.ndarray:
    """Point-weight families evaluated at integer indices.

    Known names: ``polynomial`` ((1+n^2)^-beta), ``exponential``
    (exp(-c|n|)), ``super-exponential`` (exp(-n^2)) and ``mixed``
    (exponential on even n, polynomial on odd n).
    """
    params = dict(params or {})
    n = np.asarray(list(indices), dtype=float)
    if name == "polynomial":
        beta = float(params.get("beta", 2.0))
        return (1.0 + n * n) ** (-beta)
    if name == "exponential":
        c = float(params.get("c", 1.0))
        return np.exp(-c * np.abs(n))
    if name == "super-exponential":
        return np.exp(-n * n)
    if name == "mixed":
        beta = float(params.get("beta", 2.0))
        c = float(params.get("c", 1.0))
        even = np.mod(np.abs(n), 2) < 0.5
        return np.where(even, np.exp(-c * np.abs(n)), (1.0 + n * n) ** (-beta))
    raise UnknownFamily(f"unknown weight family {name!r}")


def measure_from_weights(support: RealSequence, name: str,
                         params: dict | None = None) -> DiscreteMeasure:
    """Discrete measure on ``support`` with family weights at centered indices."""
    idx = support.centered_indices()
    masses = weight_families(name, params, idx)
    tag = f"{support.generator_tag or 'seq'}+{name}"
    return DiscreteMeasure(support.points.copy(), masses, support.window, tag)
