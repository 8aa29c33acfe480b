"""Command-line interface: ``onedep <command> ...``.

Exit codes: 0 success, 2 bad arguments, 3 infeasible or unsupported
computation.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
from fractions import Fraction
from typing import Sequence

from . import coloring, critical, oracle
from .exact import InfeasibleSystemError, format_rational, parse_rational
from .star import StarConfig, star_prob

EXIT_USAGE = 2
EXIT_INFEASIBLE = 3


def _dump(obj) -> str:
    return json.dumps(obj, separators=(",", ":"))


def _rays(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _density(text: str):
    if "/" in text:
        return parse_rational(text)
    try:
        return float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None


def _rational(text: str) -> Fraction:
    try:
        return parse_rational(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _digits(tol: float) -> int:
    return max(1, min(17, round(-math.log10(tol)) + 2))


def _result(res: critical.CriticalResult, tol: float, fmt: str) -> str:
    if fmt == "json":
        return _dump({
            "d": res.d, "value": res.value, "residual": res.residual,
            "bracket_width": res.bracket_width, "method": res.method,
        })
    return f"{res.value:.{_digits(tol)}f}"


def _fmt_value(x) -> str:
    return format_rational(x) if isinstance(x, Fraction) else repr(float(x))


# ---------------------------------------------------------------------------
# handlers


def cmd_critical(args) -> str:
    return _result(critical.ph_star(args.d, args.tol), args.tol, args.format)


def cmd_critical_finite(args) -> str:
    return _result(critical.ph_finite(args.rays, args.tol), args.tol, args.format)


def cmd_upper_bound(args) -> str:
    return _result(critical.p_star(args.d, args.tol), args.tol, args.format)


def cmd_min_colors(args) -> str:
    q = critical.min_colors_lower_bound(args.d)
    return _dump({"d": args.d, "min_colors": q}) if args.format == "json" else str(q)


def cmd_table(args) -> str:
    return critical.emit_table(args.which, args.dmax, args.format)


def cmd_cylinder(args) -> str:
    cfg = StarConfig.parse(args.config)
    p = args.p
    if args.exact and not isinstance(p, Fraction):
        p = Fraction(repr(p))
    value = star_prob(cfg, p)
    if args.format == "json":
        return _dump({"config": str(cfg), "p": _fmt_value(p), "prob": _fmt_value(value)})
    return _fmt_value(value)


def cmd_verify_dependence(args) -> str:
    shape = oracle.StarShape(args.rays)
    rep = oracle.check_one_dependence(shape, args.p)
    total = sum(oracle.enumerate_probs(shape, args.p).values())
    out = {
        "rays": list(shape.rays),
        "p": _fmt_value(args.p),
        "total": _fmt_value(total),
        "pairs_checked": rep.pairs_checked,
        "max_violation": _fmt_value(rep.max_violation),
        "ok": rep.ok,
    }
    if args.format == "json":
        return _dump(out)
    return "\n".join(f"{k}: {v}" for k, v in out.items())


def cmd_oracle_ph(args) -> str:
    value = oracle.ph_oracle(oracle.StarShape(args.rays), args.tol)
    if args.format == "json":
        return _dump({"rays": list(args.rays), "value": value})
    return f"{value:.{_digits(args.tol)}f}"


def cmd_color_count(args) -> str:
    n = coloring.count_classes(args.q, args.k)
    out = {"q": args.q, "k": args.k, "classes": n}
    if args.q == 4:
        out["formula"] = coloring.l4k_formula(args.k)
    if args.format == "json":
        return _dump(out)
    return str(n) if "formula" not in out else f"{n} (closed form: {out['formula']})"


def cmd_color_solve(args) -> str:
    levels = coloring.solve_levels(args.q, args.k)
    region = coloring.feasibility(levels)
    sol = levels[args.k]
    if args.format == "json":
        return _dump(coloring.level_to_json(sol, region))
    lines = [f"k={sol.level} classes={len(sol.classes)} new_params={[str(p) for p in sol.new_params]} "
             f"equations={sol.equation_count} (formula {sol.formula_equation_count})"]
    lines += [f"P({cls}) = {sol.prob[cls]}" for cls in sol.classes]
    return "\n".join(lines)


def _region_json(region: coloring.FeasibilityRegion) -> dict:
    out = {
        "params": [str(p) for p in region.params],
        "inequalities": [str(e) for e in region.inequalities],
        "empty": region.empty,
    }
    if region.interval is not None:
        out["interval"] = [None if b is None else format_rational(b) for b in region.interval]
    if region.point is not None:
        out["point"] = {str(k): format_rational(v) for k, v in region.point.items()}
    return out


def cmd_color_feasible(args) -> str:
    region = coloring.feasibility(coloring.solve_levels(args.q, args.kmax))
    if args.format == "json":
        return _dump(_region_json(region))
    if region.empty:
        return "empty"
    if region.interval is not None:
        lo, hi = region.interval
        if not region.params:
            return "no free parameters"
        fmt = lambda b, inf: inf if b is None else format_rational(b)  # noqa: E731
        return f"{region.params[0]} in [{fmt(lo, '-inf')}, {fmt(hi, 'inf')}]"
    if region.point is not None:
        pt = ", ".join(f"{k}={format_rational(v)}" for k, v in region.point.items())
        return f"nonempty; feasible point {pt}"
    return f"{len(region.params)} parameters; {len(region.inequalities)} inequalities (not resolved)"


def cmd_color_star3(args) -> str:
    verdict = coloring.star3_obstruction()
    if args.format == "json":
        return _dump(verdict.to_json())
    lo, hi = verdict.path_interval
    return (f"alpha <= {format_rational(verdict.alpha_bound)} from the star; "
            f"path requires alpha in [{format_rational(lo)}, {format_rational(hi)}]; "
            f"contradiction: {str(verdict.contradiction).lower()}")


def cmd_color_probe(args) -> str:
    assignment = {coloring.ALPHA: args.alpha}
    if args.beta is not None:
        assignment[coloring.BETA] = args.beta
    rows = coloring.probe_alpha(assignment, args.kmax, q=4)
    if args.format == "json":
        return _dump([
            {"k": r.level,
             "min": None if r.minimum is None else format_rational(r.minimum),
             "argmin": None if r.argmin is None else str(r.argmin),
             "unresolved": r.unresolved}
            for r in rows
        ])
    lines = []
    for r in rows:
        if r.minimum is None:
            lines.append(f"k={r.level} all {r.unresolved} classes depend on unassigned parameters")
        else:
            extra = f" ({r.unresolved} unresolved)" if r.unresolved else ""
            lines.append(f"k={r.level} min P({r.argmin}) = {format_rational(r.minimum)}{extra}")
    return "\n".join(lines)


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="onedep",
        description="Critical points of one-dependent hard-core processes on star graphs "
                    "and exact constraint systems for symmetric one-dependent colorings.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def fmt(p, choices=("text", "json")):
        p.add_argument("--format", choices=choices, default="text")

    p = sub.add_parser("critical", help="critical point of the infinite d-ray star")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--tol", type=float, default=critical.DEFAULT_TOL)
    fmt(p)
    p.set_defaults(func=cmd_critical)

    p = sub.add_parser("critical-finite", help="critical point of a finite star")
    p.add_argument("--rays", type=_rays, required=True)
    p.add_argument("--tol", type=float, default=critical.DEFAULT_TOL)
    fmt(p)
    p.set_defaults(func=cmd_critical_finite)

    p = sub.add_parser("upper-bound", help="upper bound for graphs of maximum degree d")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--tol", type=float, default=critical.DEFAULT_TOL)
    fmt(p)
    p.set_defaults(func=cmd_upper_bound)

    p = sub.add_parser("min-colors", help="lower bound on colors for the d-ray star")
    p.add_argument("--d", type=int, required=True)
    fmt(p)
    p.set_defaults(func=cmd_min_colors)

    p = sub.add_parser("table", help="tables of critical values")
    p.add_argument("--which", type=int, choices=(1, 2), required=True)
    p.add_argument("--dmax", type=int, default=12)
    fmt(p, ("text", "csv", "json"))
    p.set_defaults(func=cmd_table)

    p = sub.add_parser("cylinder", help="cylinder probability of a star configuration")
    p.add_argument("--config", required=True, help='"c|r1,...,rd", e.g. "0|01,001,0"')
    p.add_argument("--p", type=_density, required=True, help="decimal or num/den (exact)")
    p.add_argument("--exact", action="store_true", help="evaluate in exact rationals")
    fmt(p)
    p.set_defaults(func=cmd_cylinder)

    verify = sub.add_parser("verify", help="brute-force identity checks").add_subparsers(
        dest="check", required=True)
    p = verify.add_parser("one-dependence", help="exact one-dependence and normalization check")
    p.add_argument("--rays", type=_rays, required=True)
    p.add_argument("--p", type=_rational, required=True)
    fmt(p)
    p.set_defaults(func=cmd_verify_dependence)

    orc = sub.add_parser("oracle", help="brute-force critical points").add_subparsers(
        dest="check", required=True)
    p = orc.add_parser("ph", help="threshold of cylinder non-negativity")
    p.add_argument("--rays", type=_rays, required=True)
    p.add_argument("--tol", type=float, default=1e-10)
    fmt(p)
    p.set_defaults(func=cmd_oracle_ph)

    color = sub.add_parser("color", help="symmetric one-dependent colorings").add_subparsers(
        dest="action", required=True)
    p = color.add_parser("count", help="classes of proper words")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    fmt(p)
    p.set_defaults(func=cmd_color_count)

    p = color.add_parser("solve", help="solve the level-k system")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    fmt(p)
    p.set_defaults(func=cmd_color_solve)

    p = color.add_parser("feasible", help="non-negativity region through level kmax")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--kmax", type=int, required=True)
    fmt(p)
    p.set_defaults(func=cmd_color_feasible)

    p = color.add_parser("star3-check", help="obstruction for the 3-ray star with four colors")
    fmt(p)
    p.set_defaults(func=cmd_color_star3)

    p = color.add_parser("probe", help="minimum class probability per level at fixed parameters")
    p.add_argument("--alpha", type=_rational, required=True)
    p.add_argument("--beta", type=_rational)
    p.add_argument("--kmax", type=int, required=True)
    fmt(p)
    p.set_defaults(func=cmd_color_probe)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        out = args.func(args)
    except (InfeasibleSystemError, coloring.UnsupportedLevelError, ArithmeticError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except (ValueError, KeyError) as exc:
        print(f"{parser.prog}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    print(out)
    return 0


if __name__ == "__main__":
    sys.exit(main())
