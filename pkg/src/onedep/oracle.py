"""Brute-force checks of the star evaluator by exhaustive exact summation."""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Mapping, Sequence

from .star import StarConfig, star_prob

MAX_VERTICES = 14


@dataclass(frozen=True)
class StarShape:
    """A star with ``len(rays)`` rays; length-0 rays are allowed."""

    rays: tuple[int, ...]
    cap: int = MAX_VERTICES

    def __post_init__(self):
        object.__setattr__(self, "rays", tuple(int(n) for n in self.rays))
        if len(self.rays) < 2:
            raise ValueError("a star shape needs at least two rays")
        if any(n < 0 for n in self.rays):
            raise ValueError("ray lengths must be non-negative")
        if self.n_vertices > self.cap:
            raise ValueError(f"{self.n_vertices} vertices exceed the cap of {self.cap}")

    @property
    def d(self) -> int:
        return len(self.rays)

    @property
    def n_vertices(self) -> int:
        return 1 + sum(self.rays)

    def vertices(self) -> list[tuple[int, int]]:
        """``(0, 0)`` is the center, ``(i, j)`` is position j on ray i (1-based)."""
        out = [(0, 0)]
        for i, n in enumerate(self.rays, start=1):
            out += [(i, j) for j in range(1, n + 1)]
        return out

    def neighbors(self, v: tuple[int, int]) -> list[tuple[int, int]]:
        i, j = v
        if i == 0:
            return [(r, 1) for r, n in enumerate(self.rays, start=1) if n > 0]
        out = [(0, 0) if j == 1 else (i, j - 1)]
        if j < self.rays[i - 1]:
            out.append((i, j + 1))
        return out

    def config(self, bits: Mapping[tuple[int, int], int]) -> StarConfig:
        rays = tuple(
            "".join(str(bits[(i, j)]) for j in range(1, n + 1))
            for i, n in enumerate(self.rays, start=1)
        )
        return StarConfig(bits[(0, 0)], rays)

    def configs(self) -> Iterator[tuple[tuple[int, ...], StarConfig]]:
        verts = self.vertices()
        for bits in itertools.product((0, 1), repeat=len(verts)):
            yield bits, self.config(dict(zip(verts, bits)))


def enumerate_probs(shape: StarShape, p) -> dict[StarConfig, object]:
    """``star_prob`` of every configuration of the shape."""
    return {cfg: star_prob(cfg, p) for _, cfg in shape.configs()}


def marginal(shape: StarShape, p, assignment: Mapping[tuple[int, int], int]):
    """Probability of a partial assignment, by summing full configurations."""
    verts = shape.vertices()
    total = 0 * p
    for bits, cfg in shape.configs():
        if all(bits[verts.index(v)] == b for v, b in assignment.items()):
            total = total + star_prob(cfg, p)
    return total


@dataclass(frozen=True)
class DependenceReport:
    max_violation: object
    pair: tuple[frozenset, frozenset] | None
    pairs_checked: int

    @property
    def ok(self) -> bool:
        return self.pair is None


def check_one_dependence(shape: StarShape, p) -> DependenceReport:
    """Compare joint and product marginals for subsets at distance >= 2.

    Independence of ``A`` and ``B`` implies independence of their subsets, so
    it suffices to pair every nonempty ``A`` with ``B = V - N[A]``.  For exact
    ``p`` the sums run over integers scaled by a common denominator.
    """
    verts = shape.vertices()
    pos = {v: k for k, v in enumerate(verts)}
    table = [(bits, star_prob(cfg, p)) for bits, cfg in shape.configs()]
    scale = 1
    if isinstance(p, Fraction):
        scale = math.lcm(*(Fraction(pr).denominator for _, pr in table))
        table = [(bits, int(pr * scale)) for bits, pr in table]
    worst = 0
    worst_pair = None
    checked = 0
    for r in range(1, len(verts)):
        for a in itertools.combinations(verts, r):
            closed = set(a)
            for v in a:
                closed.update(shape.neighbors(v))
            b = tuple(v for v in verts if v not in closed)
            if not b:
                continue
            checked += 1
            ia = [pos[v] for v in a]
            ib = [pos[v] for v in b]
            joint: dict = {}
            ma: dict = {}
            mb: dict = {}
            for bits, pr in table:
                ka = tuple(bits[k] for k in ia)
                kb = tuple(bits[k] for k in ib)
                joint[ka, kb] = joint.get((ka, kb), 0) + pr
                ma[ka] = ma.get(ka, 0) + pr
                mb[kb] = mb.get(kb, 0) + pr
            for ka, pa in ma.items():
                for kb, pb in mb.items():
                    # joint/scale == (pa/scale) * (pb/scale)
                    gap = abs(joint.get((ka, kb), 0) * scale - pa * pb)
                    if gap > worst:
                        worst = gap
                        worst_pair = (frozenset(a), frozenset(b))
    if isinstance(p, Fraction):
        worst = Fraction(worst, scale * scale)
    return DependenceReport(worst, worst_pair, checked)


def _ray_words(n: int) -> list[str]:
    return ["".join(w) for m in range(n + 1) for w in itertools.product("01", repeat=m)]


def all_nonnegative(shape: StarShape, p) -> bool:
    """Every cylinder probability on the shape and its sub-stars is >= 0."""
    words = [_ray_words(n) for n in shape.rays]
    for rays in itertools.product(*words):
        for c in (0, 1):
            if star_prob(StarConfig(c, rays), p) < 0:
                return False
    return True


def ph_oracle(shape: StarShape, tol: float = 1e-10) -> float:
    """Largest density with all cylinder probabilities non-negative.

    Bisection over exact rational midpoints, so each feasibility verdict is
    exact; only the final bracket width is an approximation.
    """
    lo, hi = Fraction(0), Fraction(1)
    if all_nonnegative(shape, hi):
        return 1.0
    while hi - lo > tol:
        mid = (lo + hi) / 2
        if all_nonnegative(shape, mid):
            lo = mid
        else:
            hi = mid
    return float((lo + hi) / 2)


def shapes_up_to(max_vertices: int, arities: Sequence[int], max_len: int) -> list[StarShape]:
    """Star shapes with positive ray lengths, one per multiset of lengths."""
    out = []
    for d in arities:
        for rays in itertools.combinations_with_replacement(range(1, max_len + 1), d):
            if 1 + sum(rays) <= max_vertices:
                out.append(StarShape(rays))
    return out
