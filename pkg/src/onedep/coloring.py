"""Symmetric one-dependent proper colorings of paths, solved level by level.

The unknowns at word length ``k`` are the probabilities of the color classes
(words up to color relabeling and reversal).  They are constrained by

* consistency: ``sum_c P(u c) = P(u)`` for every word ``u`` of length k-1;
* one-dependence: removing the value at an internal position factorizes,
  ``sum_c P(w[:i] c w[i+1:]) = P(w[:i]) P(w[i+1:])``.

Lower levels enter as affine expressions in the free parameters found so far,
so each level is a linear system with affine right-hand sides.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Iterator, Mapping, Sequence

from .exact import (
    AffineClosureError,
    AffineExpr,
    LinearSystem,
    ParamName,
    format_rational,
    solve_affine_system,
)

Word = tuple[int, ...]

ALPHA = ParamName(4, 1, "alpha")
BETA = ParamName(6, 1, "beta")

#: enumeration guard for :func:`count_classes` (number of proper words)
MAX_WORDS = 4 * 3**11


class UnsupportedLevelError(ValueError):
    """The level needs a product of two parameter-dependent probabilities."""


def _as_word(w) -> Word:
    if isinstance(w, str):
        return tuple(int(ch) for ch in w)
    return tuple(int(x) for x in w)


def is_proper(w: Sequence[int]) -> bool:
    return all(a != b for a, b in zip(w, w[1:]))


def pattern(w: Sequence[int]) -> Word:
    """Relabel colors in order of first appearance."""
    relabel: dict[int, int] = {}
    out = []
    for c in w:
        if c not in relabel:
            relabel[c] = len(relabel) + 1
        out.append(relabel[c])
    return tuple(out)


@dataclass(frozen=True, order=True)
class ColorClass:
    rep: Word

    @property
    def length(self) -> int:
        return len(self.rep)

    @property
    def n_colors(self) -> int:
        return max(self.rep, default=0)

    def __str__(self) -> str:
        return "".join(map(str, self.rep))


@lru_cache(maxsize=1 << 20)
def _canonical(w: Word) -> ColorClass:
    return ColorClass(min(pattern(w), pattern(w[::-1])))


def canonicalize(w) -> ColorClass:
    """Canonical class of a proper word under color permutations and reversal."""
    w = _as_word(w)
    if not is_proper(w):
        raise ValueError(f"improper coloring word: {''.join(map(str, w))}")
    return _canonical(w)


def proper_words(q: int, k: int) -> Iterator[Word]:
    """All proper words of length k over colors 1..q, in lexicographic order."""
    if k == 0:
        yield ()
        return
    for first in range(1, q + 1):
        stack = [(first,)]
        while stack:
            w = stack.pop()
            if len(w) == k:
                yield w
                continue
            for c in range(q, 0, -1):
                if c != w[-1]:
                    stack.append(w + (c,))


def pattern_words(q: int, k: int) -> Iterator[Word]:
    """Proper words in first-appearance form, one per color-permutation orbit."""
    def grow(w: Word, used: int):
        if len(w) == k:
            yield w
            return
        for c in range(1, min(used + 1, q) + 1):
            if not w or c != w[-1]:
                yield from grow(w + (c,), max(used, c))

    yield from grow((), 0)


def count_classes(q: int, k: int, max_words: int = MAX_WORDS) -> int:
    """Number of classes of proper words, by brute-force enumeration."""
    if q < 2 or k < 1:
        raise ValueError("need q >= 2 and k >= 1")
    n_words = q * (q - 1) ** (k - 1)
    if n_words > max_words:
        raise ValueError(f"enumeration of {n_words} words exceeds the cap {max_words}")
    return len({_canonical(w) for w in proper_words(q, k)})


def l4k_formula(k: int) -> int:
    """Closed form for the number of classes with four colors.

    With ``m = k - 1`` the count is ``(1 + 3**(m-1) + 3**((m-2)/2) * s) / 4``
    where ``s = 2 + sqrt3 + (-1)**m * (2 - sqrt3)``.  For even m, s = 4; for
    odd m, s = 2*sqrt3 and the sqrt3 factors combine into ``2 * 3**((m-1)/2)``,
    so the evaluation stays in the integers.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    if k == 1:
        return 1
    m = k - 1
    if m % 2 == 0:
        tail = 4 * 3 ** ((m - 2) // 2)
    else:
        tail = 2 * 3 ** ((m - 1) // 2)
    total = 1 + 3 ** (m - 1) + tail
    if total % 4:
        raise ArithmeticError(f"closed form is not integral at k={k}")
    return total // 4


# ---------------------------------------------------------------------------
# equations


@dataclass
class LevelSolution:
    q: int
    level: int
    classes: tuple[ColorClass, ...]
    prob: dict[ColorClass, AffineExpr]
    new_params: tuple[ParamName, ...]
    equation_count: int
    instance_count: int = 0

    @property
    def formula_equation_count(self) -> int:
        """The ``(k - 1) * L`` count of equations quoted for this level."""
        return (self.level - 1) * len(self.classes)

    def __getitem__(self, word) -> AffineExpr:
        return self.prob[canonicalize(word)]


Solved = Mapping[int, LevelSolution]


def _lookup(solved: Solved, w: Word) -> AffineExpr:
    if not w:
        return AffineExpr(1)
    return solved[len(w)].prob[_canonical(w)]


def classes_at(q: int, k: int) -> tuple[ColorClass, ...]:
    return tuple(sorted({_canonical(w) for w in pattern_words(q, k)}))


def word_equations(q: int, w: Word, solved: Solved) -> list[tuple[dict[ColorClass, int], AffineExpr]]:
    """Equations attached to one word of length k (as class -> coefficient)."""
    k = len(w)
    out = []
    for i in range(1, k - 1):
        left, right = w[:i], w[i + 1:]
        lhs: dict[ColorClass, int] = {}
        for c in range(1, q + 1):
            if c != w[i - 1] and c != w[i + 1]:
                cls = _canonical(left + (c,) + right)
                lhs[cls] = lhs.get(cls, 0) + 1
        try:
            rhs = _lookup(solved, left) * _lookup(solved, right)
        except AffineClosureError as exc:
            raise UnsupportedLevelError(
                f"level {k}: split {''.join(map(str, left))}|{''.join(map(str, right))} "
                f"multiplies two parameter-dependent probabilities"
            ) from exc
        out.append((lhs, rhs))
    return out


def _consistency_equation(q: int, u: Word, solved: Solved) -> tuple[dict[ColorClass, int], AffineExpr]:
    lhs: dict[ColorClass, int] = {}
    for c in range(1, q + 1):
        if not u or c != u[-1]:
            cls = _canonical(u + (c,))
            lhs[cls] = lhs.get(cls, 0) + 1
    return lhs, _lookup(solved, u)


def _equation_key(lhs: Mapping[ColorClass, int], rhs: AffineExpr):
    return tuple(sorted(lhs.items())), rhs


def generate_equations(q: int, k: int, solved: Solved) -> tuple[LinearSystem, int]:
    """Deduplicated level-k system and the number of word-level instances.

    Words related by a color permutation give identical equations, so one
    word per permutation orbit is enumerated.
    """
    unknowns = classes_at(q, k)
    index = {cls: j for j, cls in enumerate(unknowns)}
    seen: dict = {}
    instances = 0

    def add(lhs, rhs):
        nonlocal instances
        instances += 1
        key = _equation_key(lhs, rhs)
        if key not in seen:
            coeffs = [Fraction(0)] * len(unknowns)
            for cls, c in lhs.items():
                coeffs[index[cls]] = Fraction(c)
            seen[key] = (tuple(coeffs), rhs)

    for w in pattern_words(q, k):
        for lhs, rhs in word_equations(q, w, solved):
            add(lhs, rhs)
    for u in pattern_words(q, k - 1):
        add(*_consistency_equation(q, u, solved))
    return LinearSystem(unknowns, tuple(seen.values())), instances


def _relabel(sol: LevelSolution, names: Sequence[ParamName]) -> LevelSolution:
    sub = {old: AffineExpr.param(new) for old, new in zip(sol.new_params, names)}
    prob = {cls: e.substitute(sub) for cls, e in sol.prob.items()}
    return LevelSolution(sol.q, sol.level, sol.classes, prob, tuple(names), sol.equation_count, sol.instance_count)


def _align_alpha(sol: LevelSolution) -> LevelSolution:
    """Re-express a one-parameter level-4 solution in alpha = 48 P(1212)."""
    (raw,) = sol.new_params
    target = sol.prob[ColorClass((1, 2, 1, 2))]
    b = target.coefficient(raw)
    c = target.constant
    # raw = (alpha/48 - c) / b
    sub = {raw: (AffineExpr.param(ALPHA).scale(Fraction(1, 48)) - c).scale(1 / b)}
    prob = {cls: e.substitute(sub) for cls, e in sol.prob.items()}
    return LevelSolution(sol.q, sol.level, sol.classes, prob, (ALPHA,), sol.equation_count, sol.instance_count)


def solve_level(q: int, k: int, solved: Solved) -> LevelSolution:
    system, instances = generate_equations(q, k, solved)
    result = solve_affine_system(system, k)
    sol = LevelSolution(
        q, k, system.unknowns, dict(result.values), result.new_params, len(system.rows), instances
    )
    if q == 4 and k == 4 and len(sol.new_params) == 1:
        sol = _align_alpha(sol)
    elif q == 4 and k == 6 and len(sol.new_params) == 1:
        sol = _relabel(sol, [BETA])
    return sol


@lru_cache(maxsize=64)
def _solve_levels_cached(q: int, kmax: int) -> tuple[LevelSolution, ...]:
    if kmax <= 1:
        solved: dict[int, LevelSolution] = {}
    else:
        solved = {s.level: s for s in _solve_levels_cached(q, kmax - 1)}
    solved[kmax] = solve_level(q, kmax, solved)
    return tuple(solved[k] for k in sorted(solved))


def solve_levels(q: int, kmax: int) -> dict[int, LevelSolution]:
    """Solve levels 1..kmax in turn; returns a fresh dict keyed by level."""
    if q < 2 or kmax < 1:
        raise ValueError("need q >= 2 and kmax >= 1")
    return {s.level: s for s in _solve_levels_cached(q, kmax)}


# ---------------------------------------------------------------------------
# non-negativity


@dataclass
class FeasibilityRegion:
    """Parameter values keeping every listed expression non-negative.

    ``interval`` is filled for at most one parameter (``None`` bounds are
    infinite), ``point`` is a feasible point for two parameters.
    """

    params: tuple[ParamName, ...]
    inequalities: tuple[AffineExpr, ...]
    empty: bool | None
    interval: tuple[Fraction | None, Fraction | None] | None = None
    point: dict[ParamName, Fraction] | None = None

    def contains(self, assignment: Mapping[ParamName, Fraction]) -> bool:
        return all(e.evaluate(assignment) >= 0 for e in self.inequalities)


def _interval(params, ineqs) -> FeasibilityRegion:
    lo: Fraction | None = None
    hi: Fraction | None = None
    empty = False
    for e in ineqs:
        if not params or e.is_constant():
            if e.constant < 0:
                empty = True
            continue
        a = e.coefficient(params[0])
        bound = -e.constant / a
        if a > 0:
            lo = bound if lo is None else max(lo, bound)
        else:
            hi = bound if hi is None else min(hi, bound)
    if lo is not None and hi is not None and lo > hi:
        empty = True
    return FeasibilityRegion(tuple(params), tuple(ineqs), empty, None if empty else (lo, hi))


def _solve2(e1: AffineExpr, e2: AffineExpr, x: ParamName, y: ParamName):
    a1, b1, c1 = e1.coefficient(x), e1.coefficient(y), e1.constant
    a2, b2, c2 = e2.coefficient(x), e2.coefficient(y), e2.constant
    det = a1 * b2 - a2 * b1
    if det == 0:
        return None
    return {x: (-c1 * b2 + c2 * b1) / det, y: (-a1 * c2 + a2 * c1) / det}


def _plane(params, ineqs) -> FeasibilityRegion:
    x, y = params
    if any(e.is_constant() and e.constant < 0 for e in ineqs):
        return FeasibilityRegion(tuple(params), tuple(ineqs), True)
    lines = [e for e in ineqs if not e.is_constant()]
    vertices = []
    for e1, e2 in itertools.combinations(lines, 2):
        pt = _solve2(e1, e2, x, y)
        if pt is not None and all(e.evaluate(pt) >= 0 for e in lines):
            vertices.append(pt)
    if vertices:
        point = {
            x: sum((v[x] for v in vertices), Fraction(0)) / len(vertices),
            y: sum((v[y] for v in vertices), Fraction(0)) / len(vertices),
        }
        return FeasibilityRegion(tuple(params), tuple(ineqs), False, point=point)
    # no vertex: nonempty only if all normals are parallel (a strip or half-plane)
    normals = [(e.coefficient(x), e.coefficient(y)) for e in lines]
    if lines and any(a * normals[0][1] - b * normals[0][0] for a, b in normals):
        return FeasibilityRegion(tuple(params), tuple(ineqs), True)
    if not lines:
        return FeasibilityRegion(tuple(params), tuple(ineqs), False, point={x: Fraction(0), y: Fraction(0)})
    # project onto the common normal direction: one-dimensional problem in t
    a0, b0 = normals[0]
    axis = y if a0 == 0 else x
    t = ParamName(0, 0, "t")
    projected = []
    for e in lines:
        a, b = e.coefficient(x), e.coefficient(y)
        scale = a / a0 if a0 else b / b0
        projected.append(AffineExpr(e.constant, {t: scale}))
    sub = _interval([t], projected)
    if sub.empty:
        return FeasibilityRegion(tuple(params), tuple(ineqs), True)
    lo, hi = sub.interval
    tval = lo if lo is not None else (hi if hi is not None else Fraction(0))
    # t = a0 x + b0 y; realize it along the chosen axis
    other = x if axis is y else y
    coef = a0 if axis is x else b0
    point = {axis: tval / coef, other: Fraction(0)}
    return FeasibilityRegion(tuple(params), tuple(ineqs), False, point=point)


def feasibility(levels: Mapping[int, LevelSolution] | Iterable[LevelSolution]) -> FeasibilityRegion:
    """Region where every solved class probability is non-negative."""
    sols = list(levels.values()) if isinstance(levels, Mapping) else list(levels)
    ineqs: list[AffineExpr] = []
    seen = set()
    for sol in sorted(sols, key=lambda s: s.level):
        for cls in sol.classes:
            e = sol.prob[cls]
            if e not in seen:
                seen.add(e)
                ineqs.append(e)
    params = tuple(sorted({p for e in ineqs for p in e.params}))
    if len(params) <= 1:
        return _interval(params, ineqs)
    if len(params) == 2:
        return _plane(params, ineqs)
    return FeasibilityRegion(params, tuple(ineqs), None)


# ---------------------------------------------------------------------------
# the 3-ray star


@dataclass(frozen=True)
class Star3Verdict:
    alpha_bound: Fraction
    path_interval: tuple[Fraction, Fraction]
    contradiction: bool

    def to_json(self) -> dict:
        return {
            "alpha_bound": format_rational(self.alpha_bound),
            "path_interval": [format_rational(x) for x in self.path_interval],
            "contradiction": self.contradiction,
        }


def star3_obstruction() -> Star3Verdict:
    """Test ``P(123) P(12132) >= P(1234) P(12)**2`` against the path window.

    The left side bounds the probability of a 3-ray star coloring that
    contains the path 1234 through the center and two further copies of 12
    on the third ray; the right side is what one-dependence at the center
    forces for it.  The inequality caps alpha from above.
    """
    levels = solve_levels(4, 5)
    lhs = levels[3][(1, 2, 3)] * levels[5][(1, 2, 1, 3, 2)]
    rhs = levels[4][(1, 2, 3, 4)] * (levels[2][(1, 2)] * levels[2][(1, 2)])
    slack = lhs - rhs  # >= 0
    a = slack.coefficient(ALPHA)
    if a >= 0 or set(slack.params) != {ALPHA}:
        raise AssertionError(f"unexpected form of the star inequality: {slack} >= 0")
    bound = -slack.constant / a
    region = feasibility(levels)
    lo, hi = region.interval
    return Star3Verdict(bound, (lo, hi), bound < lo)


# ---------------------------------------------------------------------------
# exploration


@dataclass(frozen=True)
class LevelProbe:
    level: int
    minimum: Fraction | None
    argmin: ColorClass | None
    unresolved: int = 0  # classes still depending on unassigned parameters


def probe_alpha(assignment: Mapping[ParamName, Fraction], kmax: int, q: int = 4) -> list[LevelProbe]:
    """Smallest class probability per level once the parameters are fixed.

    Classes whose probability still involves an unassigned parameter are
    counted in ``unresolved`` and left out of the minimum.
    """
    levels = solve_levels(q, kmax)
    out = []
    for k in sorted(levels):
        sol = levels[k]
        vals = []
        unresolved = 0
        for cls in sol.classes:
            e = sol.prob[cls].substitute(assignment)
            if e.is_constant():
                vals.append((e.constant, cls))
            else:
                unresolved += 1
        if vals:
            m, cls = min(vals)
            out.append(LevelProbe(k, m, cls, unresolved))
        else:
            out.append(LevelProbe(k, None, None, unresolved))
    return out


def level_to_json(sol: LevelSolution, region: FeasibilityRegion | None = None) -> dict:
    out = {
        "k": sol.level,
        "classes": [{"rep": str(cls), "prob": str(sol.prob[cls])} for cls in sol.classes],
        "new_params": [str(p) for p in sol.new_params],
        "equation_count": sol.equation_count,
        "formula_equation_count": sol.formula_equation_count,
    }
    if region is not None and region.interval is not None:
        out["feasible_interval"] = [None if b is None else format_rational(b) for b in region.interval]
    return out
