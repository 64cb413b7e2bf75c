"""Type estimators for discrete measures and the classical gap/type checkers.

All estimates are p-free (the type of a finite measure does not depend on
the exponent for p > 1) and are reported in angular-frequency units: a
sequence of density d certifies type ``2 pi d``.

The discrete estimator is a certified lower bound.  Atoms whose log-weight
penalty exceeds a per-shell budget are dropped so that the retained
penalty series is summable by construction; a spread-out subsequence of
the surviving support is then tested for d-uniformity, scanning the
density grid downward.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .core import (
    CONVERGENT,
    DIVERGENT,
    DiscreteMeasure,
    Interval,
    Partition,
    RealSequence,
    SumVerdict,
    TypelabError,
    WeightTable,
    poisson_piece_contributions,
    poisson_tail_sum,
    shell_index,
    shell_sum_verdict,
)
from .density import spread_selection
from .partitions import (
    InsufficientData,
    OverlappingIntervals,
    classify_family,
    find_short_partition,
)
from .uniformity import UniformityReport, check_d_uniform

TWO_PI = 2.0 * math.pi

# weight filter: atom with centered index n in dyadic shell j survives when
# max(0, -log w) / (1 + n^2) <= WEIGHT_BUDGET * 2^(-1.5 j); retained shell
# totals are then bounded by a geometric sequence of ratio 2^(-1/2)
WEIGHT_BUDGET = 8.0

# desk-scale stand-in for "separated by some c > 0"
SEPARATION_GAP = 1e-6

TYPE_ZERO = "type_zero"
TYPE_AT_LEAST = "type_at_least"
TYPE_INFINITE = "type_infinite"
MU_MUST_VANISH = "mu_must_vanish"
INCONCLUSIVE = "inconclusive"
TYPE_ORDERING = "type_ordering"


class NotSeparated(TypelabError):
    pass


class NotUniform(TypelabError):
    pass


class EmptyNeighborhood(TypelabError):
    pass


class WeightBelowOne(TypelabError):
    pass


class BadAlternation(TypelabError):
    pass


@dataclass(frozen=True)
class Conclusion:
    kind: str
    value: float | None = None

    def to_dict(self) -> dict:
        return {"kind": self.kind, "value": self.value}


@dataclass(frozen=True)
class TheoremVerdict:
    theorem: str
    applicable: bool
    conclusion: Conclusion
    evidence: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.conclusion.kind != INCONCLUSIVE and not self.applicable:
            raise TypelabError("a definite conclusion requires applicable hypotheses")

    def to_dict(self) -> dict:
        return {
            "theorem": self.theorem,
            "applicable": self.applicable,
            "conclusion": self.conclusion.to_dict(),
            "evidence": _evidence_dict(self.evidence),
        }


def _evidence_dict(ev: dict) -> dict:
    out = {}
    for k, v in ev.items():
        out[k] = v.to_dict() if hasattr(v, "to_dict") else v
    return out


@dataclass(frozen=True)
class TypeCertificate:
    subsequence: RealSequence
    weight_verdict: SumVerdict
    uniformity: UniformityReport

    def to_dict(self) -> dict:
        return {
            "subsequence": self.subsequence.to_dict(),
            "weight_verdict": self.weight_verdict.to_dict(),
            "uniformity": self.uniformity.to_dict(),
        }


@dataclass(frozen=True)
class TypeEstimate:
    lower_bound_type: float
    certificate: TypeCertificate | None
    method: str
    two_sided: bool = False
    diagnostics: tuple[tuple[float, bool, str], ...] = ()

    def to_dict(self) -> dict:
        return {
            "lower_bound_type": self.lower_bound_type,
            "certificate": self.certificate.to_dict() if self.certificate else None,
            "method": self.method,
            "two_sided": self.two_sided,
            "diagnostics": [[d, p, note] for d, p, note in self.diagnostics],
        }


def _log_weight_penalties(measure: DiscreteMeasure, denominator: str) -> np.ndarray:
    pen = np.maximum(0.0, -np.log(measure.masses))
    if denominator == "index":
        n = measure.centered_indices().astype(float)
    elif denominator == "location":
        n = measure.positions
    else:
        raise TypelabError("denominator must be 'index' or 'location'")
    return pen / (1.0 + n * n), n


def weight_filter_mask(measure: DiscreteMeasure, denominator: str = "index",
                       budget: float = WEIGHT_BUDGET) -> np.ndarray:
    """Atoms surviving the per-shell log-weight budget."""
    penalties, n = _log_weight_penalties(measure, denominator)
    keep = np.ones(len(measure), dtype=bool)
    for i, (p, ni) in enumerate(zip(penalties, n)):
        j = shell_index(ni)
        if j is None:
            continue
        if p > budget * 2.0 ** (-1.5 * j):
            keep[i] = False
    return keep


def weight_sum_verdict(measure: DiscreteMeasure, positions,
                       denominator: str = "index") -> SumVerdict:
    """Convergence verdict of the retained log-weight penalty series.

    ``sum max(0, -log w(n)) / (1 + n^2)`` over the atoms at ``positions``;
    convergent means the signed series ``sum log w(n)/(1+n^2)`` stays above
    minus infinity.
    """
    penalties, n = _log_weight_penalties(measure, denominator)
    wanted = np.isin(measure.positions, np.asarray(positions))
    return shell_sum_verdict(n[wanted], penalties[wanted])


def _default_d_grid(measure: DiscreteMeasure) -> list[float]:
    density = len(measure) / (2.0 * measure.window)
    step = 0.05 * density
    return [step * k for k in range(1, 27)]  # up to 1.3x the gross density


def _scan_type(measure: DiscreteMeasure, d_grid, denominator: str, budget: float,
               skip_energy: bool, method: str, two_sided: bool) -> TypeEstimate:
    if len(measure) < 2:
        raise InsufficientData("need at least 2 atoms")
    grid = sorted(float(d) for d in (d_grid if d_grid is not None
                                     else _default_d_grid(measure)))
    mask = weight_filter_mask(measure, denominator, budget)
    if not np.any(mask):
        return TypeEstimate(0.0, None, method, two_sided,
                            ((grid[0], False, "weight filter removed every atom"),))
    support = RealSequence(measure.positions[mask], measure.window, "weight-filtered")
    diagnostics: list[tuple[float, bool, str]] = []
    for d in reversed(grid):
        try:
            partition = find_short_partition(support, d)
        except InsufficientData as exc:
            diagnostics.append((d, False, f"partition: {exc}"))
            continue
        selected = spread_selection(support, partition, d)
        if len(selected) == 0:
            diagnostics.append((d, False, "selection empty"))
            continue
        report = check_d_uniform(selected, d, partition, skip_energy=skip_energy)
        if not report.overall:
            diagnostics.append((d, False, "uniformity fail"))
            continue
        wv = weight_sum_verdict(measure, selected.points, denominator)
        if wv.classification != CONVERGENT:
            diagnostics.append((d, False, f"weight sum {wv.classification}"))
            continue
        diagnostics.append((d, True, "pass"))
        cert = TypeCertificate(selected, wv, report)
        return TypeEstimate(TWO_PI * d, cert, method, two_sided,
                            tuple(sorted(diagnostics)))
    return TypeEstimate(0.0, None, method, two_sided, tuple(sorted(diagnostics)))


def type_discrete(measure: DiscreteMeasure, d_grid=None, denominator: str = "index",
                  budget: float = WEIGHT_BUDGET) -> TypeEstimate:
    """Certified lower bound on the type of a discrete measure.

    Scans the density grid downward; each candidate needs a d-uniform
    spread subsequence of the weight-filtered support whose retained
    log-weight series is summable.  Returns ``2 pi d`` for the largest
    passing ``d`` (0 when none passes), with the full certificate.
    """
    est = _scan_type(measure, d_grid, denominator, budget,
                     skip_energy=False, method="discrete-scan", two_sided=False)
    growth = _counting_growth_summable(measure)
    return TypeEstimate(est.lower_bound_type, est.certificate, est.method,
                        two_sided=False,
                        diagnostics=est.diagnostics + (
                            (0.0, growth, "log-counting-function Poisson-summable"),))


def _counting_growth_summable(measure: DiscreteMeasure) -> bool:
    # diagnostic for the two-sided regime: log(|n_B| + 1) integrable against
    # the Poisson measure over the window
    pos = measure.positions
    pieces = []
    idx = measure.centered_indices()
    for i in range(len(pos) - 1):
        pieces.append((pos[i], pos[i + 1], math.log(abs(float(idx[i])) + 1.0)))
    verdict = shell_sum_verdict(
        [0.5 * (l + r) for l, r, _ in pieces],
        [v * (math.atan(r) - math.atan(l)) for l, r, v in pieces],
    )
    return verdict.classification != DIVERGENT


def type_separated(measure: DiscreteMeasure, d_grid=None, denominator: str = "index",
                   min_gap: float = SEPARATION_GAP,
                   budget: float = WEIGHT_BUDGET) -> TypeEstimate:
    """Two-sided type estimate for a measure on a separated support.

    Separation (checked: consecutive gaps at least ``min_gap``) makes the
    energy condition automatic, so candidates are tested on density and
    shortness only, and the scan value is an equality rather than a lower
    bound.
    """
    gaps = np.diff(measure.positions)
    if gaps.size and float(np.min(gaps)) < min_gap:
        raise NotSeparated(f"min gap {float(np.min(gaps)):.3g} below {min_gap:.3g}")
    return _scan_type(measure, d_grid, denominator, budget,
                      skip_energy=True, method="separated-scan", two_sided=True)


def suffgen_bound(measure: DiscreteMeasure, A: RealSequence, d: float,
                  partition: Partition | None = None) -> TheoremVerdict:
    """Lower type bound from neighbourhood masses along a d-uniform sequence.

    Each interior point of ``A`` gets the one-third-gap neighbourhood
    ``(a_n - eps_n, a_n + eps_n)``; when the log of the measure of these
    neighbourhoods is Poisson-summable in the index, the type is at least
    ``2 pi d``.  Boundary points (missing a neighbour) are dropped.
    """
    report = check_d_uniform(A, d, partition)
    if not report.overall:
        raise NotUniform(f"A is not d-uniform at d={d}")
    pts = A.points
    if pts.size < 3:
        raise InsufficientData("need at least 3 points for neighbourhoods")
    centers = pts[1:-1]
    eps = np.minimum(pts[1:-1] - pts[:-2], pts[2:] - pts[1:-1]) / 3.0
    masses = []
    for x, e in zip(centers, eps):
        lo = int(np.searchsorted(measure.positions, x - e, side="right"))
        hi = int(np.searchsorted(measure.positions, x + e, side="left"))
        m = float(math.fsum(measure.masses[lo:hi]))
        if m <= 0.0:
            raise EmptyNeighborhood(f"zero mass in ({x - e}, {x + e})")
        masses.append(m)
    idx = A.centered_indices()[1:-1].astype(float)
    verdict = shell_sum_verdict(idx, [max(0.0, -math.log(m)) / (1.0 + n * n)
                                      for m, n in zip(masses, idx)])
    applicable = verdict.classification == CONVERGENT
    conclusion = Conclusion(TYPE_AT_LEAST, TWO_PI * d) if applicable else Conclusion(INCONCLUSIVE)
    return TheoremVerdict("neighbourhood-mass-bound", applicable, conclusion,
                          {"mass_sum": verdict, "uniformity": report})


def beurling_gap_check(support) -> TheoremVerdict:
    """Long gaps in the support force any gapped measure on it to vanish.

    ``support`` is a :class:`RealSequence` or a list of intervals; the
    complement gaps inside the window are classified, and a long gap
    family means no positive-density uniform sequence fits the support.
    """
    gaps: list[Interval] = []
    if isinstance(support, RealSequence):
        T = support.window
        pts = support.points
        cuts = [-T] + pts.tolist() + [T]
        for l, r in zip(cuts, cuts[1:]):
            if r > l:
                gaps.append(Interval(l, r))
    else:
        ivs = sorted(support, key=lambda i: i.left)
        for prev, cur in zip(ivs, ivs[1:]):
            if cur.left > prev.right:
                gaps.append(Interval(prev.right, cur.left))
    verdict = classify_family(gaps) if gaps else None
    long_gaps = verdict is not None and verdict.classification == DIVERGENT
    conclusion = Conclusion(MU_MUST_VANISH) if long_gaps else Conclusion(INCONCLUSIVE)
    return TheoremVerdict("gap-support", True, conclusion,
                          {"gap_family": verdict, "gap_count": len(gaps)})


def levinson_check(measure: DiscreteMeasure) -> TheoremVerdict:
    """Fast-decaying tails force a gapped measure to vanish.

    Classifies the Poisson integral of ``|log M|`` on the positive
    half-axis, where ``M(x)`` is the mass beyond ``x``.  A region of the
    window where ``M`` vanishes on positive length makes the integral
    infinite outright.  Divergent means the measure must vanish; emits the
    geometric-threshold points ``a_n`` and the dyadic step weight as
    diagnostics.
    """
    T = measure.window
    pos_atoms = measure.positions[measure.positions > 0]
    pos_masses = measure.masses[measure.positions > 0]
    tail = np.concatenate([np.cumsum(pos_masses[::-1])[::-1], [0.0]])
    # M(x) = tail[k] on [b_{k-1}, b_k) with b_-1 = 0
    cuts = np.concatenate([[0.0], pos_atoms])
    pieces = []
    zero_from = float(pos_atoms[-1]) if pos_atoms.size else 0.0
    for k in range(len(cuts) - 1):
        m = float(tail[k])
        if m > 0:
            pieces.append((float(cuts[k]), float(cuts[k + 1]), abs(math.log(m))))
    thresholds = _levinson_thresholds(cuts, tail)
    evidence: dict = {"thresholds": thresholds.tolist()}
    if len(thresholds) >= 2:
        evidence["dyadic_weight"] = WeightTable(
            thresholds, 2.0 ** np.arange(1, len(thresholds), dtype=float),
            kind="samples")
    if T - zero_from > 0:
        evidence["zero_tail"] = [zero_from, T]
        evidence["poisson_log_tail"] = None
        return TheoremVerdict("tail-decay", True, Conclusion(MU_MUST_VANISH), evidence)
    verdict = shell_sum_verdict(*_piece_arrays(pieces))
    evidence["poisson_log_tail"] = verdict
    if verdict.classification == DIVERGENT:
        return TheoremVerdict("tail-decay", True, Conclusion(MU_MUST_VANISH), evidence)
    return TheoremVerdict("tail-decay", True, Conclusion(INCONCLUSIVE), evidence)


def _piece_arrays(pieces):
    contribs = poisson_piece_contributions(pieces)
    return [c[0] for c in contribs], [c[1] for c in contribs]


def _levinson_thresholds(cuts: np.ndarray, tail: np.ndarray, n_max: int = 64) -> np.ndarray:
    total = float(tail[0]) if len(tail) else 0.0
    if total <= 0:
        return np.zeros(0)
    out = [0.0]
    for n in range(1, n_max + 1):
        target = total * 3.0 ** (-n)
        k = int(np.argmax(tail <= target))
        a_n = float(cuts[min(k, len(cuts) - 1)])
        if tail[k] <= 0 or a_n <= out[-1]:
            break
        out.append(a_n)
    return np.asarray(out)


def hybrid_check(measure: DiscreteMeasure, intervals) -> TheoremVerdict:
    """Smallness of the measure along a long family forces it to vanish.

    Evaluates ``sum |I| min(|I|, log 1/mu(I)) / (1 + dist^2(I, 0))``; zero
    mass contributes via the ``|I|`` cap, mass at least one contributes
    nothing.  Divergence means no nonzero measure with a spectral gap can
    put so little mass there.
    """
    ivs = sorted(intervals, key=lambda i: i.left)
    for prev, cur in zip(ivs, ivs[1:]):
        if cur.left < prev.right:
            raise OverlappingIntervals("intervals must be disjoint")
    terms = []
    for iv in ivs:
        mass = measure.mass_in(iv.left, iv.right)
        if mass <= 0.0:
            val = iv.length
        else:
            val = min(iv.length, max(0.0, math.log(1.0 / mass)))
        terms.append((iv.dist0(), iv.length * val))
    verdict = poisson_tail_sum(terms)
    if verdict.classification == DIVERGENT:
        return TheoremVerdict("sparse-mass", True, Conclusion(MU_MUST_VANISH),
                              {"series": verdict})
    return TheoremVerdict("sparse-mass", True, Conclusion(INCONCLUSIVE),
                          {"series": verdict})


def debranges_check(K: WeightTable, measure: DiscreteMeasure,
                    modulus_of_continuity: float) -> TheoremVerdict:
    """Admissible unbounded weights rule out gapped measures.

    Hypotheses checked at desk scale: ``K >= 1``; ``log K`` Lipschitz at
    the given modulus across consecutive piece midpoints; ``int K d|mu|``
    summable (shell verdict of the atom series); and the Poisson integral
    of ``log K`` divergent.  All four met means the measure must vanish.
    """
    if float(np.min(K.values)) < 1.0:
        raise WeightBelowOne("weight must be >= 1")
    mids = 0.5 * (K.breakpoints[:-1] + K.breakpoints[1:])
    logv = np.log(K.values)
    slopes = np.abs(np.diff(logv)) / np.diff(mids)
    continuity_ok = bool(np.all(slopes <= modulus_of_continuity + 1e-12))

    kw = np.atleast_1d(K.evaluate(measure.positions))
    mass_series = shell_sum_verdict(measure.positions, kw * measure.masses)
    mass_ok = mass_series.classification == CONVERGENT

    log_pieces = [(l, r, math.log(v)) for l, r, v in K.pieces]
    poisson_logk = shell_sum_verdict(*_piece_arrays(log_pieces))
    unsummable = poisson_logk.classification == DIVERGENT

    applicable = continuity_ok and mass_ok and unsummable
    evidence = {
        "continuity_ok": continuity_ok,
        "max_log_slope": float(np.max(slopes)) if slopes.size else 0.0,
        "mass_series": mass_series,
        "poisson_log_weight": poisson_logk,
    }
    conclusion = Conclusion(MU_MUST_VANISH) if applicable else Conclusion(INCONCLUSIVE)
    return TheoremVerdict("admissible-weight", applicable, conclusion, evidence)


def krein_lm_check(density_samples: WeightTable, monotone_flag: bool = True) -> TheoremVerdict:
    """Type of an absolutely continuous measure from its density samples.

    Poisson-summable ``log w`` gives infinite type.  Unsummable ``log w``
    that is monotone toward the divergent half-axis (verified on the
    samples, asserted by the caller) gives type zero; otherwise the
    samples are inconclusive.  Pieces where ``w`` vanishes on positive
    length make ``log w`` unsummable outright.
    """
    pieces = density_samples.pieces
    zero_pieces = [(l, r) for l, r, v in pieces if v <= 0.0 and r > l]
    pos_pieces = [(l, r, v) for l, r, v in pieces if v > 0.0]
    log_pieces = [(l, r, abs(math.log(v))) for l, r, v in pos_pieces]
    overall = shell_sum_verdict(*_piece_arrays(log_pieces)) if log_pieces else None
    evidence: dict = {"poisson_log_density": overall,
                      "zero_pieces": len(zero_pieces)}
    if not zero_pieces and overall is not None and overall.classification == CONVERGENT:
        return TheoremVerdict("density-log-summability", True,
                              Conclusion(TYPE_INFINITE), evidence)

    for side in ("positive", "negative"):
        side_pieces = [(l, r, v) for l, r, v in pos_pieces
                       if (l >= 0 if side == "positive" else r <= 0)]
        side_zero = any((l >= 0 if side == "positive" else r <= 0) for l, r in zero_pieces)
        side_log = [(l, r, abs(math.log(v))) for l, r, v in side_pieces]
        side_verdict = shell_sum_verdict(*_piece_arrays(side_log)) if side_log else None
        diverges = side_zero or (side_verdict is not None
                                 and side_verdict.classification == DIVERGENT)
        vals = [v for _, _, v in side_pieces]
        if side == "negative":
            vals = vals[::-1]
        monotone = all(b <= a * (1 + 1e-12) for a, b in zip(vals, vals[1:]))
        evidence[f"{side}_half"] = {"diverges": diverges, "monotone": monotone,
                                    "verdict": side_verdict}
        if diverges and monotone and monotone_flag:
            return TheoremVerdict("density-log-summability", True,
                                  Conclusion(TYPE_ZERO), evidence)
    return TheoremVerdict("density-log-summability", False,
                          Conclusion(INCONCLUSIVE), evidence)


def borichev_sodin_compare(mu: DiscreteMeasure, nu: DiscreteMeasure, delta: float,
                           C: float, l: float) -> TheoremVerdict:
    """Exponential-neighbourhood domination implies ordering of types.

    Verifies ``mu([x-e, x+e]) <= C (1+|x|)^l (nu([x-2e, x+2e]) + e^2)`` with
    ``e = exp(-delta |x|)`` at the atoms of ``mu`` and the midpoints between
    consecutive atoms; when the relation holds, the type of ``mu`` is at
    most the type of ``nu``.
    """
    if delta <= 0 or C <= 0:
        raise TypelabError("delta and C must be positive")
    xs = sorted(set(mu.positions.tolist())
                | {0.5 * (a + b) for a, b in zip(mu.positions, mu.positions[1:])})
    worst = None
    for x in xs:
        e = math.exp(-delta * abs(x))
        lhs = mu.mass_in(x - e, x + e, closed=True)
        rhs = C * (1.0 + abs(x)) ** l * (nu.mass_in(x - 2 * e, x + 2 * e, closed=True)
                                         + math.exp(-2.0 * delta * abs(x)))
        margin = rhs - lhs
        if worst is None or margin < worst[1]:
            worst = (x, margin)
        if lhs > rhs * (1.0 + 1e-12):
            return TheoremVerdict("exponential-domination", False,
                                  Conclusion(INCONCLUSIVE),
                                  {"failed_at": x, "lhs": lhs, "rhs": rhs})
    return TheoremVerdict("exponential-domination", True, Conclusion(TYPE_ORDERING),
                          {"ordering": "type(mu) <= type(nu)",
                           "worst_margin_at": worst[0], "worst_margin": worst[1]})


def duffin_schaeffer_check(measure: DiscreteMeasure, L: float, c: float) -> TheoremVerdict:
    """A uniform Poisson-size mass floor in every window certifies positive type.

    Checks ``mu([x-L, x+L]) > c/(1+x^2)`` exactly over ``[-T+L, T-L]``: the
    window mass is piecewise constant with jumps at atom positions shifted
    by ``+-L``, so each piece is tested at its point nearest the origin.
    A pass gives type at least ``pi / L``.
    """
    if L <= 0 or c <= 0:
        raise TypelabError("L and c must be positive")
    T = measure.window
    lo, hi = -T + L, T - L
    if hi <= lo:
        raise InsufficientData("window too small for the requested L")
    events = sorted({lo, hi}
                    | {float(b) + s for b in measure.positions for s in (-L, L)
                       if lo < b + s < hi})
    worst = None
    for u, v in zip(events, events[1:]):
        x_mid = 0.5 * (u + v)
        mass = measure.mass_in(x_mid - L, x_mid + L, closed=True)
        # the floor c/(1+x^2) peaks at the piece's point nearest the origin
        x_star = 0.0 if u <= 0.0 <= v else (u if u > 0.0 else v)
        floor = c / (1.0 + x_star * x_star)
        margin = mass - floor
        if worst is None or margin < worst[1]:
            worst = (x_mid, margin)
        if mass <= floor:
            return TheoremVerdict("window-mass-floor", False, Conclusion(INCONCLUSIVE),
                                  {"failed_at": x_mid, "mass": mass, "floor": floor})
    return TheoremVerdict("window-mass-floor", True,
                          Conclusion(TYPE_AT_LEAST, math.pi / L),
                          {"worst_margin_at": worst[0], "worst_margin": worst[1]})


def benedicks_conditions(partition, C1: float, C2: float, C3: float) -> TheoremVerdict:
    """Admissibility of an alternating partition for the block construction.

    Checks, over the available indices: comparability of odd-interval
    lengths across C1-comparable odd breakpoints; C1-comparability of
    consecutive odd breakpoints; the pointwise lower bound
    ``|I_odd| > C3 max(|I_even|, 1)``; and summability of the weighted
    odd-length series.  All four passing makes the partition usable by the
    block construction (the quantitative bound is delegated to it).
    """
    bks = partition.breakpoints if isinstance(partition, Partition) else _tiling_breakpoints(partition)
    zero_idx = np.flatnonzero(np.abs(bks) < 1e-12)
    if zero_idx.size != 1:
        raise BadAlternation("alternating partition needs 0 as a breakpoint")
    i0 = int(zero_idx[0])
    n_lo, n_hi = -i0, len(bks) - 1 - i0

    def a(n: int) -> float:
        return float(bks[i0 + n])

    odd_ns = [n for n in range(n_lo, n_hi) if n % 2 != 0]  # interval I_n exists for n < n_hi
    odd_bk_ns = [n for n in range(n_lo, n_hi + 1) if n % 2 != 0]
    failures: list[str] = []

    # 1: odd lengths comparable whenever odd breakpoints are C1-comparable
    cond1 = True
    for n in odd_ns:
        for k in odd_ns:
            an, ak = abs(a(n)), abs(a(k))
            if an == 0 or ak == 0:
                continue
            if an / C1 < ak < an * C1:
                ln = a(n + 1) - a(n)
                lk = a(k + 1) - a(k)
                if not (ln / C2 < lk < ln * C2):
                    cond1 = False
                    failures.append(f"condition 1 at ({n}, {k})")
                    break
        if not cond1:
            break

    # 2: consecutive odd breakpoints C1-comparable in absolute value
    cond2 = True
    odd_bk_set = set(odd_bk_ns)
    for n in odd_bk_ns:
        if n - 2 not in odd_bk_set:
            continue
        small, large = sorted((abs(a(n)), abs(a(n - 2))))
        if small <= 0 or large / small >= C1:
            cond2 = False
            failures.append(f"condition 2 at n={n}")
            break

    # 3: odd intervals dominate their even neighbour
    cond3 = True
    for n in range(n_lo, n_hi - 1):
        if n % 2 == 0:
            even_len = a(n + 1) - a(n)
            odd_len = a(n + 2) - a(n + 1)
            if not odd_len > C3 * max(even_len, 1.0):
                cond3 = False
                failures.append(f"condition 3 at even index {n}")
                break

    # 4: weighted odd-length series summable
    terms = []
    for n in odd_ns:
        ln = a(n + 1) - a(n)
        prev_even = a(n) - a(n - 1) if n - 1 >= n_lo else None
        bracket = 1.0
        if prev_even and prev_even > 0:
            bracket = max(0.0, math.log(ln / prev_even)) + 1.0
        terms.append((a(n), ln * ln * bracket))
    series = poisson_tail_sum(terms)
    cond4 = series.classification == CONVERGENT

    applicable = cond1 and cond2 and cond3 and cond4
    evidence = {"condition1": cond1, "condition2": cond2, "condition3": cond3,
                "odd_length_series": series, "failures": failures}
    return TheoremVerdict("alternating-partition-admissibility", applicable,
                          Conclusion(INCONCLUSIVE), evidence)


def _tiling_breakpoints(intervals) -> np.ndarray:
    ivs = sorted(intervals, key=lambda i: i.left)
    bks = [ivs[0].left]
    for iv in ivs:
        if abs(iv.left - bks[-1]) > 1e-12:
            raise BadAlternation("intervals must tile contiguously")
        bks.append(iv.right)
    return np.asarray(bks)


def polynomial_rescale(measure: DiscreteMeasure, alpha: float) -> DiscreteMeasure:
    """Divide masses by ``1 + |x|^alpha``; the type is invariant under this."""
    if alpha < 0:
        raise TypelabError("alpha must be nonnegative")
    scale = 1.0 + np.abs(measure.positions) ** alpha
    return DiscreteMeasure(measure.positions.copy(), measure.masses / scale,
                           measure.window,
                           f"{measure.tag or 'measure'}/poly(alpha={alpha:g})")
