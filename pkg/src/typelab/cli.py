"""Command-line interface: one subcommand per analysis surface.

Exit codes: 0 computed, 1 verdict-level failure in ``suite``, 2 input or
usage error.  All reports go through the canonical serializer, so repeated
runs with identical inputs (and any ``--threads``) are byte-identical.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from . import __version__
from .constructions import (
    alternating_partition,
    arithmetic,
    auxiliary_sequence,
    benedicks_sequence,
    measure_from_weights,
    perturb_exponential,
)
from .core import Interval, TypelabError
from .density import (
    exterior_density,
    interior_density,
    regularity_block_scan,
    strong_regularity_defect,
)
from .energy import coulomb_energy, energy_report
from .oracle import residual_scan
from .partitions import classify_family, find_short_partition, short2I_diagnostic
from .serialize import (
    canonical_json,
    load_intervals,
    load_measure,
    load_partition,
    load_sequence,
    load_weight_table,
    render_csv,
    render_curve_csv,
)
from .suite import run_suite
from .typeproblem import (
    benedicks_conditions,
    beurling_gap_check,
    borichev_sodin_compare,
    debranges_check,
    duffin_schaeffer_check,
    hybrid_check,
    krein_lm_check,
    levinson_check,
    polynomial_rescale,
    suffgen_bound,
    type_discrete,
    type_separated,
)
from .uniformity import check_d_uniform


def _emit(args, payload) -> None:
    if getattr(args, "format", "json") == "csv":
        sys.stdout.write(render_csv(payload))
    else:
        sys.stdout.write(canonical_json(payload) + "\n")


def _parse_grid(spec: str) -> list[float]:
    """``start:stop:step`` or a comma-separated list."""
    if ":" in spec:
        start, stop, step = (float(p) for p in spec.split(":"))
        out = []
        x = start
        while x <= stop + 1e-12:
            out.append(round(x, 12))
            x += step
        return out
    return [float(p) for p in spec.split(",")]


def _cmd_energy(args) -> int:
    seq = load_sequence(args.input)
    if args.interval:
        left, right = (float(p) for p in args.interval.split(","))
        _emit(args, energy_report(seq, Interval(left, right)))
    else:
        _emit(args, {"energy": coulomb_energy(seq), "points": len(seq)})
    return 0


def _cmd_partition(args) -> int:
    seq = load_sequence(args.input)
    _emit(args, find_short_partition(seq, args.d))
    return 0


def _cmd_classify(args) -> int:
    _emit(args, classify_family(load_intervals(args.intervals)))
    return 0


def _cmd_short2i(args) -> int:
    _emit(args, short2I_diagnostic(load_intervals(args.intervals), args.C))
    return 0


def _cmd_density(args) -> int:
    seq = load_sequence(args.input)
    grid = _parse_grid(args.grid)
    est = interior_density(seq, grid) if args.kind == "interior" else exterior_density(seq, grid)
    _emit(args, est)
    return 0


def _cmd_regularity(args) -> int:
    seq = load_sequence(args.input)
    if args.scan == "families":
        _emit(args, regularity_block_scan(seq, args.a, args.epsilon))
    else:
        _emit(args, strong_regularity_defect(seq, args.a))
    return 0


def _cmd_uniform(args) -> int:
    seq = load_sequence(args.input)
    partition = load_partition(args.partition) if args.partition else None
    _emit(args, check_d_uniform(seq, args.d, partition))
    return 0


def _cmd_type(args) -> int:
    measure = load_measure(args.input)
    grid = _parse_grid(args.grid) if args.grid else None
    if args.separated:
        est = type_separated(measure, grid, denominator=args.denominator)
    else:
        est = type_discrete(measure, grid, denominator=args.denominator)
    _emit(args, est)
    return 0


_THEOREM_NEEDS = {
    "levinson": ("input",),
    "hybrid": ("input", "intervals"),
    "debranges": ("input", "weight"),
    "krein-lm": ("weight",),
    "borichev-sodin": ("input", "other"),
    "duffin-schaeffer": ("input",),
    "benedicks": ("partition",),
    "suffgen": ("input", "sequence"),
}


def _cmd_theorem(args) -> int:
    name = args.name
    for needed in _THEOREM_NEEDS.get(name, ()):
        if getattr(args, needed) is None:
            raise TypelabError(f"theorem {name} requires --{needed}")
    if name == "beurling-gap":
        if not args.intervals and not args.input:
            raise TypelabError("theorem beurling-gap requires --input or --intervals")
        if args.intervals:
            verdict = beurling_gap_check(load_intervals(args.intervals))
        else:
            verdict = beurling_gap_check(load_sequence(args.input))
    elif name == "levinson":
        verdict = levinson_check(load_measure(args.input))
    elif name == "hybrid":
        verdict = hybrid_check(load_measure(args.input), load_intervals(args.intervals))
    elif name == "debranges":
        verdict = debranges_check(load_weight_table(args.weight), load_measure(args.input),
                                  args.modulus)
    elif name == "krein-lm":
        verdict = krein_lm_check(load_weight_table(args.weight),
                                 monotone_flag=not args.no_monotone)
    elif name == "borichev-sodin":
        verdict = borichev_sodin_compare(load_measure(args.input), load_measure(args.other),
                                         args.delta, args.C, args.l)
    elif name == "duffin-schaeffer":
        verdict = duffin_schaeffer_check(load_measure(args.input), args.L, args.c)
    elif name == "benedicks":
        verdict = benedicks_conditions(load_partition(args.partition),
                                       args.c1, args.c2, args.c3)
    elif name == "suffgen":
        verdict = suffgen_bound(load_measure(args.input), load_sequence(args.sequence), args.d)
    else:  # pragma: no cover - argparse restricts choices
        raise TypelabError(f"unknown theorem {name!r}")
    _emit(args, verdict)
    return 0


def _cmd_rescale(args) -> int:
    _emit(args, polynomial_rescale(load_measure(args.input), args.alpha))
    return 0


def _cmd_construct(args) -> int:
    params = {}
    for item in args.param or []:
        key, _, value = item.partition("=")
        params[key] = value
    family = args.family
    if family == "arithmetic":
        obj = arithmetic(float(params.get("d", 1.0)), float(params.get("T", 100.0)))
    elif family == "perturbed":
        base = arithmetic(float(params.get("d", 1.0)), float(params.get("T", 100.0)))
        obj = perturb_exponential(base, float(params.get("c", 1.0)),
                                  int(params.get("seed", 0)))
    elif family == "alternating-partition":
        obj = alternating_partition(float(params.get("even", 1.0)),
                                    float(params.get("odd", 2.0)),
                                    float(params.get("T", 100.0)))
    elif family == "benedicks":
        partition = alternating_partition(float(params.get("even", 1.0)),
                                          float(params.get("odd", 2.0)),
                                          float(params.get("T", 900.0)))
        obj = benedicks_sequence(partition, float(params.get("C", 0.5)))
    elif family == "auxiliary":
        base = arithmetic(float(params.get("d", 1.0)), float(params.get("T", 400.0)))
        from .core import WeightTable

        w = WeightTable(np.array([-base.window, base.window]),
                        np.array([float(params.get("w", 1.0))]))
        obj = auxiliary_sequence(base, w, float(params.get("epsilon", 0.05)),
                                 float(params.get("L", 20.0)))
    elif family == "weighted-measure":
        base = arithmetic(float(params.get("d", 1.0)), float(params.get("T", 100.0)))
        obj = measure_from_weights(base, params.get("weights", "polynomial"),
                                   {k: float(v) for k, v in params.items()
                                    if k in ("beta", "c")})
    else:
        raise TypelabError(f"unknown construction family {family!r}")
    text = canonical_json(obj) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
        sys.stdout.write(canonical_json({"written": args.out}) + "\n")
    else:
        sys.stdout.write(text)
    return 0


def _cmd_oracle(args) -> int:
    measure = load_measure(args.input)
    step = (args.a_max - args.a_min) / args.steps
    grid = [args.a_min + step * k for k in range(1, args.steps + 1)]
    curve = residual_scan(measure, grid, freq_density=args.freq_density,
                          extended_precision=args.extended_precision,
                          threads=args.threads)
    if args.csv:
        with open(args.csv, "w", encoding="utf-8") as fh:
            fh.write(render_curve_csv(curve))
    if args.format == "csv":
        sys.stdout.write(render_curve_csv(curve))
        return 0
    summary = {
        "knee": curve.knee,
        "max_curvature": curve.max_curvature,
        "extended_used": curve.extended_used,
        "sigma_min_first": float(curve.sigma_min[0]),
        "sigma_min_last": float(curve.sigma_min[-1]),
        "csv": args.csv,
    }
    _emit(args, summary)
    return 0


def _cmd_suite(args) -> int:
    rows = run_suite(threads=args.threads)
    _emit(args, rows)
    return 0 if all(r["status"] == "pass" for r in rows) else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="typelab",
        description="Exponential-type toolkit: energies, densities, uniformity, "
                    "type estimators, classical checkers and a completeness oracle.")
    parser.add_argument("--version", action="version", version=f"typelab {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--format", choices=("json", "csv"), default="json")
        p.add_argument("--threads", type=int, default=1)

    p = sub.add_parser("energy", help="Coulomb energy or per-interval report")
    p.add_argument("--input", required=True, help="sequence JSON document")
    p.add_argument("--interval", help="a,b for a per-interval report")
    common(p)
    p.set_defaults(func=_cmd_energy)

    p = sub.add_parser("partition", help="greedy short partition adapted to a sequence")
    p.add_argument("--input", required=True)
    p.add_argument("--d", type=float, required=True)
    common(p)
    p.set_defaults(func=_cmd_partition)

    p = sub.add_parser("classify", help="long/short verdict for an interval family")
    p.add_argument("--intervals", required=True, help="intervals JSON document")
    common(p)
    p.set_defaults(func=_cmd_classify)

    p = sub.add_parser("short2i", help="overlap-length diagnostic of a short family")
    p.add_argument("--intervals", required=True)
    p.add_argument("--C", type=float, default=2.0)
    common(p)
    p.set_defaults(func=_cmd_short2i)

    p = sub.add_parser("density", help="interior/exterior density estimate")
    p.add_argument("--input", required=True)
    p.add_argument("--kind", choices=("interior", "exterior"), default="interior")
    p.add_argument("--grid", required=True, help="start:stop:step or comma list")
    common(p)
    p.set_defaults(func=_cmd_density)

    p = sub.add_parser("regularity", help="regularity defect of a sequence at rate a")
    p.add_argument("--input", required=True)
    p.add_argument("--a", type=float, required=True)
    p.add_argument("--scan", choices=("integral", "families"), default="integral")
    p.add_argument("--epsilon", type=float, default=0.05)
    common(p)
    p.set_defaults(func=_cmd_regularity)

    p = sub.add_parser("uniform", help="d-uniformity verdict")
    p.add_argument("--input", required=True)
    p.add_argument("--d", type=float, required=True)
    p.add_argument("--partition", help="optional partition JSON document")
    common(p)
    p.set_defaults(func=_cmd_uniform)

    p = sub.add_parser("type", help="type estimate for a discrete measure")
    p.add_argument("--input", required=True, help="measure JSON document")
    p.add_argument("--separated", action="store_true")
    p.add_argument("--grid", help="density grid, start:stop:step or comma list")
    p.add_argument("--denominator", choices=("index", "location"), default="index")
    common(p)
    p.set_defaults(func=_cmd_type)

    p = sub.add_parser("theorem", help="classical checker verdicts")
    p.add_argument("name", choices=("beurling-gap", "levinson", "hybrid", "debranges",
                                    "krein-lm", "borichev-sodin", "duffin-schaeffer",
                                    "benedicks", "suffgen"))
    p.add_argument("--input", help="measure or sequence JSON document")
    p.add_argument("--intervals")
    p.add_argument("--weight")
    p.add_argument("--other", help="second measure (borichev-sodin)")
    p.add_argument("--sequence", help="d-uniform sequence (suffgen)")
    p.add_argument("--partition")
    p.add_argument("--modulus", type=float, default=1.0)
    p.add_argument("--no-monotone", action="store_true")
    p.add_argument("--delta", type=float, default=1.0)
    p.add_argument("--C", type=float, default=1.0)
    p.add_argument("--l", type=float, default=1.0)
    p.add_argument("--L", type=float, default=1.0)
    p.add_argument("--c", type=float, default=0.5)
    p.add_argument("--c1", type=float, default=8.0)
    p.add_argument("--c2", type=float, default=8.0)
    p.add_argument("--c3", type=float, default=0.4)
    p.add_argument("--d", type=float, default=1.0)
    common(p)
    p.set_defaults(func=_cmd_theorem)

    p = sub.add_parser("rescale", help="divide masses by 1+|x|^alpha (type-invariant)")
    p.add_argument("--input", required=True)
    p.add_argument("--alpha", type=float, required=True)
    common(p)
    p.set_defaults(func=_cmd_rescale)

    p = sub.add_parser("construct", help="generate bundled families")
    p.add_argument("family", choices=("arithmetic", "perturbed", "alternating-partition",
                                      "benedicks", "auxiliary", "weighted-measure"))
    p.add_argument("--param", action="append", help="key=value, repeatable")
    p.add_argument("--out", help="write the JSON document here")
    common(p)
    p.set_defaults(func=_cmd_construct)

    p = sub.add_parser("oracle", help="completeness probe: residual curve and knee")
    p.add_argument("--input", required=True)
    p.add_argument("--a-min", type=float, default=0.0)
    p.add_argument("--a-max", type=float, required=True)
    p.add_argument("--steps", type=int, default=64)
    p.add_argument("--freq-density", type=float, default=8.0)
    p.add_argument("--extended-precision", action="store_true")
    p.add_argument("--csv", help="write the residual curve CSV here")
    common(p)
    p.set_defaults(func=_cmd_oracle)

    p = sub.add_parser("suite", help="bundled acceptance battery")
    common(p)
    p.set_defaults(func=_cmd_suite)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0,) else 0
    try:
        return args.func(args)
    except (TypelabError, FileNotFoundError, ValueError, TypeError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
