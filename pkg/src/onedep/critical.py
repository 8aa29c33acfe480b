"""Critical densities of star graphs and the tables built from them."""
from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import asdict, dataclass
from decimal import ROUND_HALF_EVEN, Decimal
from fractions import Fraction
from typing import Callable, Sequence

from .star import a_seq, limit_a

DEFAULT_TOL = 1e-12
LOW = 1e-12


@dataclass(frozen=True)
class CriticalResult:
    d: int
    value: float
    residual: float
    bracket_width: float
    method: str  # "bisect" or "closed_form"


def bisect_monotone(feasible: Callable[[float], bool], lo: float, hi: float) -> tuple[float, float]:
    """Shrink ``[lo, hi]`` with ``feasible(lo)`` and not ``feasible(hi)``.

    Runs until the midpoint can no longer be represented strictly inside the
    bracket, so the width ends at one or two ulps.
    """
    if not feasible(lo):
        raise ValueError(f"lower end {lo} of the bracket is infeasible")
    if feasible(hi):
        return hi, hi
    while True:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            return lo, hi
        if feasible(mid):
            lo = mid
        else:
            hi = mid


def _check_d(d: int) -> None:
    if not isinstance(d, int) or d < 2:
        raise ValueError(f"d must be an integer >= 2, got {d!r}")


def star_equation(d: int, p: float) -> float:
    """``limit_a(p)**d - p``; positive below the critical point of the d-ray star."""
    return limit_a(p) ** d - p


def ph_star(d: int, tol: float = DEFAULT_TOL) -> CriticalResult:
    """Critical point of the infinite d-ray star.

    The root of ``((1 + sqrt(1 - 4p)) / 2)**d = p`` on (0, 1/4].  For d = 2 the
    root sits on the end of the bracket and is returned as exactly 1/4.
    """
    _check_d(d)
    if tol <= 0:
        raise ValueError("tol must be positive")
    if d == 2:
        return CriticalResult(2, 0.25, star_equation(2, 0.25), 0.0, "closed_form")
    lo, hi = bisect_monotone(lambda p: star_equation(d, p) >= 0, LOW, 0.25)
    return _result(d, lo, hi, lambda p: star_equation(d, p), tol)


def _result(d, lo, hi, g, tol) -> CriticalResult:
    res = CriticalResult(d, lo, abs(g(lo)), hi - lo, "bisect")
    if res.bracket_width > tol or res.residual > tol:
        raise ArithmeticError(f"bisection did not reach tol={tol}: {res}")
    return res


def ph_star_closed_form(d: int) -> float:
    """Closed forms quoted for d = 2, 3, 4."""
    if d == 2:
        return 0.25
    if d == 3:
        return math.sqrt(5) - 2
    if d == 4:
        s = 9 * math.sqrt(93) - 47
        return (2 - 11 * (2 / s) ** (1 / 3) + (s / 2) ** (1 / 3)) / 3
    raise ValueError("closed form known only for d in {2, 3, 4}")


def _finite_feasible(rays: Sequence[int], p: float) -> bool:
    seq = a_seq(p, max(rays))
    if seq.truncated or seq.values[-1] <= 0:
        return False
    prod = 1.0
    for n in rays:
        prod *= seq.values[n - 1]
    return p <= prod


def _check_rays(rays: Sequence[int]) -> tuple[int, ...]:
    rays = tuple(rays)
    if len(rays) < 2 or any(not isinstance(n, int) or n < 1 for n in rays):
        raise ValueError(f"need at least two positive ray lengths, got {rays}")
    return rays


def ph_finite(rays: Sequence[int], tol: float = DEFAULT_TOL) -> CriticalResult:
    """Critical point of the finite star with the given ray lengths.

    The largest p with every ``a_k(p) > 0`` (k up to the longest ray) and
    ``p <= prod_i a_{n_i}(p)``; the infimum over ``k <= n_i`` is the last
    term because the ratios decrease while positive.
    """
    rays = _check_rays(rays)

    def slack(p: float) -> float:
        vals = a_seq(p, max(rays)).values
        return math.prod(vals[n - 1] for n in rays) - p

    lo, hi = bisect_monotone(lambda p: _finite_feasible(rays, p), LOW, 0.5)
    return _result(len(rays), lo, hi, slack, tol)


def p_star_equation(d: int, p: float) -> float:
    return (1 - p) ** (d - 1) * limit_a(p) - p


def p_star(d: int, tol: float = DEFAULT_TOL) -> CriticalResult:
    """Upper bound on the critical point of any infinite graph of max degree d.

    This is the critical point of a star with d - 1 rays of length one and a
    single infinite ray.  For d <= 3 the defining equation has no root below
    1/4 and the value is 1/4.
    """
    _check_d(d)
    if d <= 3:
        return CriticalResult(d, 0.25, 0.0, 0.0, "closed_form")
    lo, hi = bisect_monotone(lambda p: p_star_equation(d, p) >= 0, LOW, 0.25)
    return _result(d, lo, hi, lambda p: p_star_equation(d, p), tol)


def lower_bound_any_graph(d: int) -> Fraction:
    """``(d-1)**(d-1) / d**d``, the lower bound valid for every max-degree-d graph."""
    _check_d(d)
    return Fraction((d - 1) ** (d - 1), d**d)


# ---------------------------------------------------------------------------
# exact sign of the star equation at rational points


def _qmul(x, y, t):
    return (x[0] * y[0] + x[1] * y[1] * t, x[0] * y[1] + x[1] * y[0])


def _sign_surd(a: Fraction, b: Fraction, t: Fraction) -> int:
    """Sign of ``a + b * sqrt(t)`` for rational a, b and t >= 0."""
    sa = (a > 0) - (a < 0)
    sb = (b > 0) - (b < 0) if t else 0
    if sb == 0:
        return sa
    if sa == 0 or sa == sb:
        return sb
    diff = a * a - b * b * t
    if diff == 0:
        return 0
    return sa if diff > 0 else sb


def star_equation_sign(d: int, p: Fraction) -> int:
    """Exact sign of ``limit_a(p)**d - p`` for rational ``0 <= p <= 1/4``."""
    p = Fraction(p)
    if p < 0 or p > Fraction(1, 4):
        raise ValueError("need 0 <= p <= 1/4")
    t = 1 - 4 * p
    base = (Fraction(1, 2), Fraction(1, 2))  # (1 + sqrt t) / 2
    acc = (Fraction(1), Fraction(0))
    for _ in range(d):
        acc = _qmul(acc, base, t)
    return _sign_surd(acc[0] - p, acc[1], t)


def min_colors_lower_bound(d: int) -> int:
    """Smallest integer q with ``q >= 1 / ph_star(d)``.

    ``q`` qualifies iff ``1/q`` is at most the critical point, i.e. the star
    equation is non-negative at ``1/q``; that sign is decided exactly, so the
    ceiling is certified even when ``1/ph_star`` is close to an integer.
    """
    _check_d(d)

    def ok(q: int) -> bool:
        return q >= 4 and star_equation_sign(d, Fraction(1, q)) >= 0

    q = max(4, math.floor(1 / ph_star(d).value) - 1)
    while not ok(q):
        q += 1
    while q > 4 and ok(q - 1):
        q -= 1
    return q


# ---------------------------------------------------------------------------
# tables


def round3(x: float) -> str:
    return str(Decimal(repr(x)).quantize(Decimal("0.001"), rounding=ROUND_HALF_EVEN))


@dataclass(frozen=True)
class TableRow:
    d: int
    value: float
    rounded: str


def table_rows(which: int, dmax: int) -> list[TableRow]:
    """Rows d = 2..dmax of the ``ph_star`` (1) or ``p_star`` (2) table."""
    if which not in (1, 2):
        raise ValueError("which must be 1 or 2")
    if dmax < 2:
        raise ValueError("dmax must be >= 2")
    solver = ph_star if which == 1 else p_star
    rows = []
    for d in range(2, dmax + 1):
        v = solver(d).value
        rows.append(TableRow(d, v, round3(v)))
    return rows


def emit_table(which: int, dmax: int, fmt: str = "text") -> str:
    rows = table_rows(which, dmax)
    if fmt == "json":
        return json.dumps([asdict(r) for r in rows], separators=(",", ":"))
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["d", "value"])
        for r in rows:
            writer.writerow([r.d, r.rounded])
        return buf.getvalue().rstrip("\n")
    if fmt == "text":
        name = "p_h(S^d)" if which == 1 else "p_star(d)"
        lines = [f"{'d':>3}  {name}"]
        lines += [f"{r.d:>3}  {r.rounded}" for r in rows]
        return "\n".join(lines)
    raise ValueError(f"unknown format {fmt!r}")
