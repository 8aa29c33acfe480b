import math
from fractions import Fraction

import pytest

from onedep.critical import ph_finite, ph_star
from onedep.oracle import (
    StarShape,
    all_nonnegative,
    check_one_dependence,
    enumerate_probs,
    marginal,
    ph_oracle,
    shapes_up_to,
)

F = Fraction


def test_shape_basics():
    s = StarShape((2, 1, 0))
    assert s.d == 3 and s.n_vertices == 4
    assert s.neighbors((0, 0)) == [(1, 1), (2, 1)]
    assert s.neighbors((1, 1)) == [(0, 0), (1, 2)]
    assert s.neighbors((1, 2)) == [(1, 1)]
    with pytest.raises(ValueError):
        StarShape((5, 5, 5))
    with pytest.raises(ValueError):
        StarShape((3,))
    assert StarShape((5, 5, 5), cap=20).n_vertices == 16


def test_enumerate_normalized():
    probs = enumerate_probs(StarShape((1, 1, 1)), F(2, 11))
    assert len(probs) == 16
    assert sum(probs.values()) == 1


def test_enumerate_deterministic_at_zero():
    probs = enumerate_probs(StarShape((1, 1)), F(0))
    positive = {str(c): v for c, v in probs.items() if v}
    assert positive == {"0|0,0": 1}


def test_enumerate_nonnegative_below_threshold():
    probs = enumerate_probs(StarShape((2, 2, 2)), F(1, 5))
    assert min(probs.values()) >= 0
    assert 0.2 < ph_finite((2, 2, 2)).value


def test_one_dependence_exact():
    rep = check_one_dependence(StarShape((2, 2, 2)), F(1, 5))
    assert rep.ok and rep.max_violation == 0 and rep.pairs_checked > 0
    assert check_one_dependence(StarShape((1, 1)), F(0)).ok


def test_distance_two_singletons():
    shape = StarShape((2, 2))  # a path of five vertices
    p = F(1, 5)
    assert marginal(shape, p, {(1, 1): 1, (2, 1): 1}) == p * p
    assert marginal(shape, p, {(1, 2): 1, (0, 0): 1}) == p * p
    # adjacent vertices are not independent
    assert marginal(shape, p, {(1, 1): 1, (0, 0): 1}) == 0


def test_check_detects_a_broken_evaluator(monkeypatch):
    import onedep.oracle as oracle_mod

    real = oracle_mod.star_prob

    def skewed(cfg, p):
        # moves mass between two configurations; still normalized
        if str(cfg) == "0|0,0":
            return real(cfg, p) + F(1, 100)
        if str(cfg) == "0|1,0":
            return real(cfg, p) - F(1, 100)
        return real(cfg, p)

    monkeypatch.setattr(oracle_mod, "star_prob", skewed)
    rep = check_one_dependence(StarShape((1, 1)), F(1, 5))
    assert not rep.ok and rep.max_violation > 0


def test_ph_oracle_examples():
    assert ph_oracle(StarShape((1, 1))) == pytest.approx((3 - math.sqrt(5)) / 2, abs=1e-9)
    # p = (1 - p)**3: the all-zero star is the binding configuration
    root = ph_oracle(StarShape((1, 1, 1)))
    assert abs(root - (1 - root) ** 3) < 1e-9


def test_single_long_ray_approaches_quarter_from_above():
    prev = 1.0
    for n in (3, 6, 9):
        value = ph_oracle(StarShape((n, 0)))
        # a path of n + 1 vertices
        assert value == pytest.approx(1 / (4 * math.cos(math.pi / (n + 3)) ** 2), abs=1e-9)
        assert 0.25 < value < prev
        prev = value


def test_oracle_at_least_infinite_star():
    for shape in shapes_up_to(8, (2, 3, 4), 3):
        assert ph_oracle(shape, 1e-8) >= ph_star(shape.d).value - 1e-9


def test_oracle_decreases_with_length():
    values = [ph_oracle(StarShape((n, 1, 1)), 1e-9) for n in (1, 2, 3, 4)]
    assert values == sorted(values, reverse=True)


def test_all_nonnegative_predicate_is_monotone():
    shape = StarShape((2, 1, 1))
    verdicts = [all_nonnegative(shape, F(n, 100)) for n in range(0, 51)]
    first_bad = verdicts.index(False)
    assert all(verdicts[:first_bad]) and not any(verdicts[first_bad:])


def test_oracle_matches_ph_finite_small():
    for rays in [(1, 1), (2, 1), (2, 2, 2), (3, 1, 1, 1)]:
        assert abs(ph_oracle(StarShape(rays)) - ph_finite(rays).value) < 1e-8
