"""
Affine forms over the coordinates of a valuation table.

A form is a coefficient per bundle mask plus a constant; it evaluates
exactly on any dense table of the same size. Equality systems are brought
to reduced row echelon form over the rationals so two systems spanning the
same space compare equal.
"""
import math
import operator
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from valcore.bundles import goods_of
from valcore.exceptions import UsageError
from valcore.values import Value, as_value

EQ = "="
GE = ">="


@dataclass(frozen=True)
class AffineForm:
    coeffs: tuple[Fraction, ...]
    const: Fraction = Fraction(0)

    @classmethod
    def zero(cls, k: int) -> "AffineForm":
        return cls((Fraction(0),) * (1 << k))

    @classmethod
    def coordinate(cls, k: int, mask: int) -> "AffineForm":
        coeffs = [Fraction(0)] * (1 << k)
        coeffs[mask] = Fraction(1)
        return cls(tuple(coeffs))

    def _check(self, other: "AffineForm") -> None:
        if len(self.coeffs) != len(other.coeffs):
            raise UsageError("forms over different table sizes")

    def __add__(self, other):
        if not isinstance(other, AffineForm):
            return AffineForm(self.coeffs, self.const + Fraction(other))
        self._check(other)
        return AffineForm(tuple(map(operator.add, self.coeffs, other.coeffs)), self.const + other.const)

    __radd__ = __add__

    def __neg__(self):
        return AffineForm(tuple(-c for c in self.coeffs), -self.const)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, scalar):
        scalar = Fraction(scalar)
        return AffineForm(tuple(c * scalar for c in self.coeffs), self.const * scalar)

    __rmul__ = __mul__

    def at(self, v) -> Value:
        table = v.table
        if len(table) != len(self.coeffs):
            raise UsageError(f"form has {len(self.coeffs)} coordinates, table has {len(table)}")
        total = self.const + sum((c * x for c, x in zip(self.coeffs, table) if c), Fraction(0))
        return as_value(total)

    def vector(self) -> tuple[Fraction, ...]:
        return self.coeffs + (self.const,)


# ───────────── Named forms ─────────────

def value_form(k: int, mask: int) -> AffineForm:
    return AffineForm.coordinate(k, mask)


def mu_form(k: int, g: int) -> AffineForm:
    return value_form(k, 1 << g) - value_form(k, 0)


def theta_form(k: int, mask: int) -> AffineForm:
    """theta(A) = sum of mu over A minus (v(A) - v(empty))."""
    total = AffineForm.zero(k)
    for g in goods_of(mask):
        total = total + mu_form(k, g)
    return total - (value_form(k, mask) - value_form(k, 0))


def delta_form(k: int, i: int, j: int) -> AffineForm:
    return theta_form(k, 1 << i | 1 << j)


def theta_minus_form(k: int, x: int) -> AffineForm:
    """theta of the bundle holding every good except x."""
    return theta_form(k, ((1 << k) - 1) ^ 1 << x)


# ───────────── Constraints ─────────────

@dataclass(frozen=True)
class Constraint:
    kind: str
    form: AffineForm
    text: str

    def holds(self, v) -> bool:
        x = self.form.at(v)
        return x == 0 if self.kind == EQ else x >= 0

    def __str__(self) -> str:
        return self.text


def equal(lhs, rhs, text: str) -> Constraint:
    return Constraint(EQ, lhs - rhs, text)


def nonneg(form: AffineForm, text: str) -> Constraint:
    return Constraint(GE, form, text)


# ───────────── Exact elimination ─────────────

def rref(rows: Sequence[Sequence]) -> tuple[list[tuple[Fraction, ...]], list[int]]:
    """Reduced row echelon form and pivot columns; zero rows are dropped."""
    m = [[Fraction(x) for x in row] for row in rows]
    if not m:
        return [], []
    n_rows, n_cols = len(m), len(m[0])
    pivots = []
    piv_r = 0
    for piv_c in range(n_cols):
        for i_row in range(piv_r, n_rows):
            if m[i_row][piv_c] != 0:
                break
        else:
            continue
        if i_row != piv_r:
            m[piv_r], m[i_row] = m[i_row], m[piv_r]
        fp = m[piv_r][piv_c]
        m[piv_r] = [x / fp for x in m[piv_r]]
        for r in range(n_rows):
            if r == piv_r:
                continue
            fr = m[r][piv_c]
            if fr == 0:
                continue
            m[r] = [x - y * fr for x, y in zip(m[r], m[piv_r])]
        pivots.append(piv_c)
        piv_r += 1
        if piv_r == n_rows:
            break
    return [tuple(row) for row in m[:piv_r]], pivots


def reduce_modulo(vector: Sequence, basis: Sequence[Sequence], pivots: Sequence[int]) -> tuple[Fraction, ...]:
    """Canonical representative of ``vector`` modulo the span of an RREF basis."""
    out = [Fraction(x) for x in vector]
    for row, c in zip(basis, pivots):
        f = out[c]
        if f:
            out = [x - y * f for x, y in zip(out, row)]
    return tuple(out)


def primitive(vector: Sequence[Fraction]) -> tuple[int, ...] | None:
    """Positive multiple with coprime integer entries, or None for the zero vector."""
    if not any(vector):
        return None
    scale = math.lcm(*(Fraction(x).denominator for x in vector))
    ints = [int(Fraction(x) * scale) for x in vector]
    g = math.gcd(*ints)
    return tuple(x // g for x in ints)
