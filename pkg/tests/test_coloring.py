import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from onedep.coloring import (
    ALPHA,
    BETA,
    ColorClass,
    UnsupportedLevelError,
    _consistency_equation,
    canonicalize,
    classes_at,
    count_classes,
    feasibility,
    generate_equations,
    l4k_formula,
    probe_alpha,
    proper_words,
    solve_levels,
    star3_obstruction,
    word_equations,
)
from onedep.exact import AffineExpr, ParamName, residuals

F = Fraction
L4 = [1, 1, 2, 4, 10, 25, 70, 196, 574, 1681]


def a(const=0, alpha=0, beta=0):
    return AffineExpr(const, {ALPHA: alpha, BETA: beta})


# ---------------------------------------------------------------- canonical form


def test_canonicalize_examples():
    assert canonicalize("213") == ColorClass((1, 2, 3))
    assert canonicalize("1213") == canonicalize("3132")
    assert canonicalize("1231") == ColorClass((1, 2, 3, 1))
    assert canonicalize("1232") == ColorClass((1, 2, 1, 3))
    with pytest.raises(ValueError):
        canonicalize("1123")


@st.composite
def proper_word_and_perm(draw):
    q = draw(st.integers(2, 6))
    k = draw(st.integers(1, 12))
    w = [draw(st.integers(1, q))]
    for _ in range(k - 1):
        w.append(draw(st.integers(1, q).filter(lambda c, last=w[-1]: c != last)))
    perm = draw(st.permutations(range(1, q + 1)))
    return tuple(w), perm


@settings(max_examples=300)
@given(proper_word_and_perm())
def test_canonical_invariance(data):
    w, perm = data
    cls = canonicalize(w)
    permuted = tuple(perm[c - 1] for c in w)
    assert canonicalize(permuted) == cls
    assert canonicalize(w[::-1]) == cls
    assert canonicalize(cls.rep) == cls


def test_canonical_matches_orbit_minimum():
    # brute force over the whole symmetry group for q=4, k=5
    for w in proper_words(4, 5):
        orbit = set()
        for perm in itertools.permutations(range(1, 5)):
            for v in (w, w[::-1]):
                orbit.add(tuple(perm[c - 1] for c in v))
        patterns = {v for v in orbit if canonicalize(v).rep == v}
        assert patterns == {canonicalize(w).rep}


# ---------------------------------------------------------------- class counts


@pytest.mark.parametrize("k, expected", list(enumerate(L4, start=1)))
def test_counts_match_closed_form(k, expected):
    assert count_classes(4, k) == expected
    assert l4k_formula(k) == expected


def test_closed_form_beyond_enumeration():
    # OEIS A001998 continues 5002, 14884
    assert [l4k_formula(k) for k in (11, 12)] == [5002, 14884]
    assert count_classes(4, 11) == 5002


def test_count_guard():
    with pytest.raises(ValueError):
        count_classes(4, 13)
    with pytest.raises(ValueError):
        count_classes(1, 3)
    assert count_classes(3, 13, max_words=10**5) == count_classes(3, 13, max_words=10**6)


def test_classes_at_matches_enumeration():
    for q in (3, 4, 5):
        for k in range(1, 7):
            assert len(classes_at(q, k)) == count_classes(q, k)


# ---------------------------------------------------------------- equations


def test_level_two_system():
    levels = solve_levels(4, 1)
    system, _ = generate_equations(4, 2, levels)
    assert system.unknowns == (ColorClass((1, 2)),)
    assert system.rows == (((F(3),), AffineExpr(F(1, 4))),)


def test_level_five_rhs_products():
    levels = solve_levels(4, 4)
    eqs = word_equations(4, (1, 2, 3, 1, 2), levels)
    # split at position 4 leaves 123 | 2
    assert eqs[-1][1] == AffineExpr(F(1, 32) * F(1, 4))


def test_equations_identical_within_a_class():
    levels = solve_levels(4, 4)
    by_class: dict = {}
    for w in proper_words(4, 5):
        eqs = word_equations(4, w, levels)
        # reversal maps position i to k+1-i, so compare as sets
        key = frozenset((tuple(sorted(lhs.items())), rhs) for lhs, rhs in eqs)
        by_class.setdefault(canonicalize(w), set()).add(key)
    assert all(len(v) == 1 for v in by_class.values())
    for u in proper_words(4, 3):
        lhs, rhs = _consistency_equation(4, u, levels)
        lhs2, rhs2 = _consistency_equation(4, canonicalize(u).rep, levels)
        assert (lhs, rhs) == (lhs2, rhs2)


def test_unsupported_level():
    levels = solve_levels(4, 8)
    with pytest.raises(UnsupportedLevelError, match="1212"):
        generate_equations(4, 9, levels)


# ---------------------------------------------------------------- solutions


def test_low_levels_exact():
    lv = solve_levels(4, 4)
    assert lv[1]["1"] == a(F(1, 4))
    assert lv[2]["12"] == a(F(1, 12))
    assert lv[3]["121"] == a(F(1, 48))
    assert lv[3]["123"] == a(F(1, 32))
    assert lv[4]["1212"] == a(alpha=F(1, 48))
    assert lv[4]["1213"] == a(F(1, 96), F(-1, 96))
    assert lv[4]["1231"] == a(F(1, 96))
    assert lv[4]["1234"] == a(F(1, 96), F(1, 96))
    assert [len(lv[k].new_params) for k in (1, 2, 3, 4)] == [0, 0, 0, 1]
    assert lv[4].new_params == (ALPHA,)


def test_level_five_exact():
    lv = solve_levels(4, 5)[5]
    expected = {
        "12134": a(F(1, 288)),
        "12314": a(F(5, 1152)),
        "12324": a(F(1, 288)),
        "12341": a(F(1, 384), F(4, 384)),
        "12131": a(F(5, 1152), F(-12, 1152)),
        "12123": a(F(1, 576)),
        "12132": a(F(1, 384)),
        "12312": a(F(1, 288)),
        "12321": a(F(1, 192), F(-2, 192)),
        "12121": a(F(-1, 288), F(6, 288)),
    }
    assert {str(c) for c in lv.classes} == set(expected)
    for word, expr in expected.items():
        assert lv[word] == expr
    assert lv.new_params == ()


def test_level_six_shape():
    lv = solve_levels(4, 6)[6]
    assert len(lv.classes) == 25
    assert lv.new_params == (BETA,)
    assert {p for e in lv.prob.values() for p in e.params} == {ALPHA, BETA}


def test_parameter_counts_through_eight():
    lv = solve_levels(4, 8)
    assert [len(lv[k].new_params) for k in range(1, 9)] == [0, 0, 0, 1, 0, 1, 0, 1]


@pytest.mark.parametrize("k", range(1, 9))
def test_solutions_satisfy_every_equation(k):
    lv = solve_levels(4, k)
    system, _ = generate_equations(4, k, lv)
    assert all(r == AffineExpr(0) for r in residuals(system, lv[k].prob))


def test_other_color_counts():
    # with five colors P(1) = 1/5 and P(12) = 1/20
    lv = solve_levels(5, 3)
    assert lv[1]["1"] == a(F(1, 5))
    assert lv[2]["12"] == a(F(1, 20))
    for q in (3, 5, 6):
        assert solve_levels(q, 1)[1]["1"] == a(F(1, q))


def test_equation_counts_reported():
    lv = solve_levels(4, 6)
    for k in range(2, 7):
        sol = lv[k]
        assert sol.formula_equation_count == (k - 1) * L4[k - 1]
        assert sol.equation_count <= sol.instance_count


# ---------------------------------------------------------------- feasibility


def test_feasibility_intervals():
    assert feasibility(solve_levels(4, 3)).interval == (None, None)
    assert feasibility(solve_levels(4, 4)).interval == (0, 1)
    region = feasibility(solve_levels(4, 5))
    assert region.interval == (F(1, 6), F(5, 12)) and not region.empty
    assert feasibility([]).interval == (None, None)


def test_feasibility_interval_by_scanning():
    # independent route: test non-negativity at many rational alphas
    lv = solve_levels(4, 5)
    ok = []
    for n in range(0, 481):
        alpha = F(n, 480)
        if all(e.evaluate({ALPHA: alpha}) >= 0 for s in lv.values() for e in s.prob.values()):
            ok.append(alpha)
    assert (min(ok), max(ok)) == (F(1, 6), F(5, 12))


def test_two_parameter_region():
    region = feasibility(solve_levels(4, 6))
    assert set(region.params) == {ALPHA, BETA}
    assert region.empty is False
    assert region.contains(region.point)


def _brute_2d(ineqs, x, y):
    rng = random.Random(0)
    for _ in range(4000):
        pt = {x: F(rng.randint(-400, 400), 40), y: F(rng.randint(-400, 400), 40)}
        if all(e.evaluate(pt) >= 0 for e in ineqs):
            return True
    return False


@pytest.mark.parametrize("seed", range(25))
def test_two_parameter_emptiness_against_sampling(seed):
    rng = random.Random(seed)
    x, y = ParamName(1, 1), ParamName(1, 2)
    ineqs = [
        AffineExpr(rng.randint(-3, 3), {x: rng.randint(-2, 2), y: rng.randint(-2, 2)})
        for _ in range(rng.randint(2, 5))
    ]
    ineqs = [e for e in ineqs if not e.is_constant()]
    if len({p for e in ineqs for p in e.params}) < 2:
        return
    from onedep.coloring import _plane

    region = _plane((x, y), ineqs)
    if region.empty:
        assert not _brute_2d(ineqs, x, y)
    else:
        assert all(e.evaluate(region.point) >= 0 for e in ineqs)


def test_parallel_strip_and_empty_cases():
    from onedep.coloring import _plane

    x, y = ParamName(1, 1), ParamName(1, 2)
    strip = [AffineExpr(1, {x: 1, y: 1}), AffineExpr(1, {x: -1, y: -1})]
    region = _plane((x, y), strip)
    assert region.empty is False and region.contains(region.point)
    gap = [AffineExpr(-2, {x: 1, y: 1}), AffineExpr(1, {x: -1, y: -1})]
    assert _plane((x, y), gap).empty is True


# ---------------------------------------------------------------- the star and probes


def test_star3_obstruction():
    v = star3_obstruction()
    assert v.alpha_bound == F(1, 8)
    assert v.path_interval == (F(1, 6), F(5, 12))
    assert v.contradiction is True
    assert v.to_json() == {"alpha_bound": "1/8", "path_interval": ["1/6", "5/12"], "contradiction": True}


def test_star3_inequality_by_hand():
    # 1/32 * 1/384 >= (1 + alpha)/96 * (1/12)**2  <=>  alpha <= 1/8
    for alpha in (F(1, 8), F(1, 9), F(1, 7)):
        holds = F(1, 32) * F(1, 384) >= (1 + alpha) / 96 * F(1, 144)
        assert holds == (alpha <= F(1, 8))


def test_probe_examples():
    rows = probe_alpha({ALPHA: F(1, 4)}, 5)
    assert rows[-1].minimum == F(1, 576) and rows[-1].minimum >= 0
    assert all(r.minimum >= 0 for r in rows)
    lv5 = solve_levels(4, 5)[5]
    assert lv5["12321"].evaluate({ALPHA: F(1, 4)}) == F(1, 384)
    rows = probe_alpha({ALPHA: F(0)}, 5)
    assert rows[-1].minimum == F(-1, 288) and str(rows[-1].argmin) == "12121"
    rows = probe_alpha({ALPHA: F(1, 6)}, 5)
    assert rows[-1].minimum == 0


def test_probe_with_unassigned_parameter():
    rows = probe_alpha({ALPHA: F(1, 5)}, 6)
    assert rows[-1].unresolved > 0
    rows = probe_alpha({ALPHA: F(1, 5), BETA: F(1, 1000)}, 6)
    assert rows[-1].unresolved == 0
