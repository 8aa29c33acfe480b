"""Exact rationals, affine parametric expressions and a rational Gaussian solver.

Rationals are :class:`fractions.Fraction`; they are always stored in lowest
terms with a positive denominator, which is all the canonical-form contract
asks for.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence, Union

ExactRational = Fraction
Scalar = Union[int, Fraction]


class InfeasibleSystemError(ValueError):
    """A row reduced to ``0 = residual`` with a nonzero residual."""

    def __init__(self, residual: "AffineExpr", message: str | None = None):
        self.residual = residual
        super().__init__(message or f"inconsistent system: 0 = {residual}")


class AffineClosureError(ValueError):
    """Product of two parameter-dependent affine expressions."""


def rat(n: int, d: int = 1) -> Fraction:
    if d == 0:
        raise ValueError("zero denominator")
    return Fraction(n, d)


def parse_rational(text: str) -> Fraction:
    """Parse ``"num/den"``, an integer or a finite decimal string exactly."""
    text = text.strip()
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"not a rational number: {text!r}") from exc


def format_rational(x: Fraction) -> str:
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


@dataclass(frozen=True, order=True)
class ParamName:
    """Free parameter introduced while solving word length ``level``."""

    level: int
    index: int
    label: str | None = field(default=None, compare=False)

    def __str__(self) -> str:
        return self.label or f"a{self.level}_{self.index}"


class AffineExpr:
    """``constant + sum(coef * param)`` with exact rational coefficients."""

    __slots__ = ("constant", "_coeffs", "_hash")

    def __init__(self, constant: Scalar = 0, coefficients: Mapping[ParamName, Scalar] | None = None):
        self.constant = Fraction(constant)
        items = []
        if coefficients:
            for name, c in coefficients.items():
                c = Fraction(c)
                if c:
                    items.append((name, c))
        items.sort()
        self._coeffs: tuple[tuple[ParamName, Fraction], ...] = tuple(items)
        self._hash: int | None = None

    @classmethod
    def param(cls, name: ParamName) -> "AffineExpr":
        return cls(0, {name: 1})

    @property
    def coefficients(self) -> dict[ParamName, Fraction]:
        return dict(self._coeffs)

    @property
    def params(self) -> tuple[ParamName, ...]:
        return tuple(name for name, _ in self._coeffs)

    def is_constant(self) -> bool:
        return not self._coeffs

    def coefficient(self, name: ParamName) -> Fraction:
        for n, c in self._coeffs:
            if n == name:
                return c
        return Fraction(0)

    # arithmetic ---------------------------------------------------------
    @staticmethod
    def _lift(other) -> "AffineExpr":
        if isinstance(other, AffineExpr):
            return other
        if isinstance(other, (int, Fraction)):
            return AffineExpr(other)
        return NotImplemented

    def _combine(self, other: "AffineExpr", sign: int) -> "AffineExpr":
        coeffs = dict(self._coeffs)
        for name, c in other._coeffs:
            coeffs[name] = coeffs.get(name, 0) + sign * c
        return AffineExpr(self.constant + sign * other.constant, coeffs)

    def __add__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return self._combine(other, 1)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return self._combine(other, -1)

    def __rsub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return other._combine(self, -1)

    def __neg__(self) -> "AffineExpr":
        return self.scale(-1)

    def scale(self, factor: Scalar) -> "AffineExpr":
        factor = Fraction(factor)
        return AffineExpr(self.constant * factor, {n: c * factor for n, c in self._coeffs})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if not isinstance(other, AffineExpr):
            return NotImplemented
        if other.is_constant():
            return self.scale(other.constant)
        if self.is_constant():
            return other.scale(self.constant)
        raise AffineClosureError(f"non-affine product ({self}) * ({other})")

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, AffineExpr):
            if not other.is_constant():
                raise AffineClosureError(f"division by non-constant ({other})")
            other = other.constant
        if not isinstance(other, (int, Fraction)):
            return NotImplemented
        return self.scale(1 / Fraction(other))

    # substitution -------------------------------------------------------
    def substitute(self, mapping: Mapping[ParamName, "AffineExpr | Scalar"]) -> "AffineExpr":
        """Replace parameters by expressions; unmapped parameters are kept."""
        out = AffineExpr(self.constant)
        for name, c in self._coeffs:
            if name in mapping:
                out = out + AffineExpr._lift(mapping[name]).scale(c)
            else:
                out = out + AffineExpr(0, {name: c})
        return out

    def evaluate(self, assignment: Mapping[ParamName, Scalar]) -> Fraction:
        missing = [n for n, _ in self._coeffs if n not in assignment]
        if missing:
            raise KeyError(f"unassigned parameters: {', '.join(map(str, missing))}")
        return self.constant + sum((c * Fraction(assignment[n]) for n, c in self._coeffs), Fraction(0))

    # comparison / display ----------------------------------------------
    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            return self.is_constant() and self.constant == other
        if not isinstance(other, AffineExpr):
            return NotImplemented
        return self.constant == other.constant and self._coeffs == other._coeffs

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.constant, self._coeffs))
        return self._hash

    def __bool__(self) -> bool:
        return bool(self.constant) or bool(self._coeffs)

    def __str__(self) -> str:
        parts = []
        if self.constant or not self._coeffs:
            parts.append(format_rational(self.constant))
        for name, c in self._coeffs:
            mag = format_rational(abs(c))
            term = str(name) if abs(c) == 1 else f"{mag}*{name}"
            if not parts:
                parts.append(term if c > 0 else f"-{term}")
            else:
                parts.append(("+ " if c > 0 else "- ") + term)
        return " ".join(parts)

    def __repr__(self) -> str:
        return f"AffineExpr({str(self)!r})"


def as_affine(x) -> AffineExpr:
    return x if isinstance(x, AffineExpr) else AffineExpr(x)


@dataclass(frozen=True)
class LinearSystem:
    """Rows ``sum(coef[j] * unknown[j]) = rhs`` with rational coefficients."""

    unknowns: tuple
    rows: tuple[tuple[tuple[Fraction, ...], AffineExpr], ...]

    def __post_init__(self):
        n = len(self.unknowns)
        for coeffs, _ in self.rows:
            if len(coeffs) != n:
                raise ValueError(f"row has {len(coeffs)} coefficients, expected {n}")

    @classmethod
    def from_rows(cls, unknowns: Sequence, rows: Iterable[tuple[Sequence[Scalar], object]]) -> "LinearSystem":
        return cls(
            tuple(unknowns),
            tuple((tuple(Fraction(c) for c in coeffs), as_affine(rhs)) for coeffs, rhs in rows),
        )


@dataclass(frozen=True)
class SolveResult:
    values: dict  # unknown label -> AffineExpr
    new_params: tuple[ParamName, ...]
    rank: int


def solve_affine_system(system: LinearSystem, new_param_level: int) -> SolveResult:
    """Solve exactly by reduction to reduced row echelon form.

    Pivots are the leftmost nonzero columns; every free column becomes a new
    parameter ``ParamName(new_param_level, i)`` numbered left to right.
    Raises :class:`InfeasibleSystemError` on a row ``0 = r`` with ``r != 0``.
    """
    n = len(system.unknowns)
    # pivot column -> (sparse row with leading 1, rhs); kept fully reduced
    pivots: dict[int, tuple[dict[int, Fraction], AffineExpr]] = {}

    for coeffs, rhs in system.rows:
        row = {j: c for j, c in enumerate(coeffs) if c}
        for col in sorted(pivots):
            c = row.get(col)
            if c:
                prow, prhs = pivots[col]
                for j, v in prow.items():
                    nv = row.get(j, 0) - c * v
                    if nv:
                        row[j] = nv
                    else:
                        row.pop(j, None)
                rhs = rhs - prhs.scale(c)
        if not row:
            if rhs:
                raise InfeasibleSystemError(rhs)
            continue
        lead = min(row)
        inv = 1 / row[lead]
        row = {j: v * inv for j, v in row.items()}
        rhs = rhs.scale(inv)
        for col, (prow, prhs) in list(pivots.items()):
            c = prow.get(lead)
            if c:
                for j, v in row.items():
                    nv = prow.get(j, 0) - c * v
                    if nv:
                        prow[j] = nv
                    else:
                        prow.pop(j, None)
                pivots[col] = (prow, prhs - rhs.scale(c))
        pivots[lead] = (row, rhs)

    free_cols = [j for j in range(n) if j not in pivots]
    new_params = tuple(ParamName(new_param_level, i + 1) for i in range(len(free_cols)))
    free_expr = {j: AffineExpr.param(name) for j, name in zip(free_cols, new_params)}

    values = {}
    for j, label in enumerate(system.unknowns):
        if j in free_expr:
            values[label] = free_expr[j]
        else:
            prow, prhs = pivots[j]
            expr = prhs
            for f, v in prow.items():
                if f != j:
                    expr = expr - free_expr[f].scale(v)
            values[label] = expr
    return SolveResult(values, new_params, len(pivots))


def residuals(system: LinearSystem, values: Mapping) -> list[AffineExpr]:
    """``lhs - rhs`` of every row after substituting ``values``."""
    out = []
    for coeffs, rhs in system.rows:
        lhs = AffineExpr()
        for label, c in zip(system.unknowns, coeffs):
            if c:
                lhs = lhs + as_affine(values[label]).scale(c)
        out.append(lhs - rhs)
    return out
