"""Exact arithmetic substrate.

Rational vectors and matrices, Gaussian rationals, canonical unit-circle
values, and integer lattice routines (Hermite normal form and membership).
Every scalar is a `fractions.Fraction`; nothing here touches floats.

Throughout the package ``exp(z)`` denotes ``e^{2*pi*i*z}``, so two exponents
describe the same unit value exactly when they differ by a real integer.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Iterable, Sequence

Rational = Fraction
Vec = tuple[Fraction, ...]
Mat = tuple[Vec, ...]

_ZERO = Fraction(0)


def to_fraction(x) -> Fraction:
    if type(x) is Fraction:
        return x
    if isinstance(x, float):
        raise TypeError("floats are not allowed in exact computations")
    return Fraction(x)


def to_vec(entries: Iterable) -> Vec:
    return tuple(to_fraction(x) for x in entries)


def to_mat(rows: Iterable[Iterable]) -> Mat:
    m = tuple(to_vec(r) for r in rows)
    if m and any(len(r) != len(m[0]) for r in m):
        raise ValueError("ragged matrix")
    return m


def zero_vec(dim: int) -> Vec:
    return (Fraction(0),) * dim


def basis_vec(dim: int, k: int) -> Vec:
    return tuple(Fraction(1 if a == k else 0) for a in range(dim))


def vec_add(u: Vec, v: Vec) -> Vec:
    return tuple(a + b for a, b in zip(u, v, strict=True))


def vec_sub(u: Vec, v: Vec) -> Vec:
    return tuple(a - b for a, b in zip(u, v, strict=True))


def vec_scale(c, v: Vec) -> Vec:
    c = to_fraction(c)
    return tuple(c * a for a in v)


def vec_is_zero(v: Vec) -> bool:
    return all(a == 0 for a in v)


def vec_is_integral(v: Vec) -> bool:
    return all(a.denominator == 1 for a in v)


def dot(u: Vec, v: Vec) -> Fraction:
    if len(u) != len(v):
        raise ValueError("dimension mismatch")
    total = _ZERO
    for a, b in zip(u, v):
        if a and b:  # skip zero terms; these vectors are typically sparse
            total = total + a * b
    return total


def mat_vec(m: Mat, v: Vec) -> Vec:
    return tuple(dot(row, v) for row in m)


def mat_transpose(m: Mat) -> Mat:
    return tuple(zip(*m)) if m else ()


def mat_mul(a: Mat, b: Mat) -> Mat:
    bt = mat_transpose(b)
    return tuple(tuple(dot(row, col) for col in bt) for row in a)


def identity_mat(k: int) -> Mat:
    return tuple(basis_vec(k, i) for i in range(k))


def det(m: Mat) -> Fraction:
    """Determinant by exact fraction Gaussian elimination."""
    n = len(m)
    if any(len(r) != n for r in m):
        raise ValueError("determinant needs a square matrix")
    rows = [list(r) for r in m]
    sign = 1
    result = Fraction(1)
    for c in range(n):
        pivot = next((i for i in range(c, n) if rows[i][c] != 0), None)
        if pivot is None:
            return Fraction(0)
        if pivot != c:
            rows[c], rows[pivot] = rows[pivot], rows[c]
            sign = -sign
        result *= rows[c][c]
        inv = 1 / rows[c][c]
        for i in range(c + 1, n):
            if rows[i][c] != 0:
                factor = rows[i][c] * inv
                for j in range(c, n):
                    rows[i][j] -= factor * rows[c][j]
    return sign * result


@dataclass(frozen=True)
class GaussianRational:
    """Element of Q(i): an exact complex number re + im*i."""

    re: Fraction
    im: Fraction

    def __post_init__(self):
        object.__setattr__(self, "re", to_fraction(self.re))
        object.__setattr__(self, "im", to_fraction(self.im))

    @staticmethod
    def real(x) -> "GaussianRational":
        return GaussianRational(to_fraction(x), Fraction(0))

    @property
    def is_zero(self) -> bool:
        return self.re == 0 and self.im == 0

    @property
    def is_real(self) -> bool:
        return self.im == 0

    def times_i(self) -> "GaussianRational":
        return GaussianRational(-self.im, self.re)

    def _coerce(self, other):
        if isinstance(other, GaussianRational):
            return other
        if isinstance(other, (int, Fraction)):
            return GaussianRational.real(other)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return GaussianRational(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return GaussianRational(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __neg__(self) -> "GaussianRational":
        return GaussianRational(-self.re, -self.im)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return GaussianRational(
            self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re
        )

    __rmul__ = __mul__

    def __str__(self) -> str:
        return f"{self.re}{'+' if self.im >= 0 else ''}{self.im}i"


ZERO_G = GaussianRational(Fraction(0), Fraction(0))


@dataclass(frozen=True)
class UnitValue:
    """exp(exponent) with the real part of the exponent reduced into [0, 1).

    A nonzero imaginary part means the value has modulus != 1; such values
    occur for intermediate data and are kept exact.
    """

    exponent: GaussianRational

    def __post_init__(self):
        e = self.exponent
        if not isinstance(e, GaussianRational):
            e = GaussianRational.real(e)
        object.__setattr__(
            self, "exponent", GaussianRational(e.re % 1, e.im)
        )

    @property
    def is_trivial(self) -> bool:
        return self.exponent.re == 0 and self.exponent.im == 0

    def __mul__(self, other: "UnitValue") -> "UnitValue":
        return UnitValue(self.exponent + other.exponent)

    def __str__(self) -> str:
        if self.exponent.im == 0:
            return f"exp({self.exponent.re})"
        return f"exp({self.exponent})"


def unit_reduce(z) -> UnitValue:
    """Canonical representative of exp(z) for z rational or Gaussian rational."""
    if isinstance(z, GaussianRational):
        return UnitValue(z)
    return UnitValue(GaussianRational.real(z))


def _check_int_matrix(m) -> list[list[int]]:
    rows = [[int(x) for x in r] for r in m]
    for r, orig in zip(rows, m):
        for x, y in zip(r, orig):
            if x != y:
                raise ValueError("hermite_normal_form needs an integer matrix")
    if rows and any(len(r) != len(rows[0]) for r in rows):
        raise ValueError("ragged matrix")
    return rows


def hermite_normal_form(m: Sequence[Sequence[int]]):
    """Row-style Hermite normal form.

    Returns (H, U) with H = U*m, U unimodular over the integers, and H in
    row echelon form with positive pivots and entries above each pivot
    reduced into [0, pivot).
    """
    rows = _check_int_matrix(m)
    nrows = len(rows)
    ncols = len(rows[0]) if nrows else 0
    u = [[int(i == j) for j in range(nrows)] for i in range(nrows)]

    def row_op(i, j, q):
        # row_i -= q * row_j
        ri, rj = rows[i], rows[j]
        for k in range(ncols):
            ri[k] -= q * rj[k]
        ui, uj = u[i], u[j]
        for k in range(nrows):
            ui[k] -= q * uj[k]

    def swap(i, j):
        rows[i], rows[j] = rows[j], rows[i]
        u[i], u[j] = u[j], u[i]

    def negate(i):
        rows[i] = [-x for x in rows[i]]
        u[i] = [-x for x in u[i]]

    r = 0
    for c in range(ncols):
        while True:
            nonzero = [i for i in range(r, nrows) if rows[i][c] != 0]
            if not nonzero:
                break
            best = min(nonzero, key=lambda i: abs(rows[i][c]))
            if best != r:
                swap(r, best)
            done = True
            for i in range(r + 1, nrows):
                if rows[i][c] != 0:
                    row_op(i, r, rows[i][c] // rows[r][c])
                    if rows[i][c] != 0:
                        done = False
            if done:
                break
        if r < nrows and rows[r][c] != 0:
            if rows[r][c] < 0:
                negate(r)
            for j in range(r):
                if rows[j][c] != 0:
                    row_op(j, r, rows[j][c] // rows[r][c])
            r += 1
            if r == nrows:
                break
    h = tuple(tuple(x for x in row) for row in rows)
    ut = tuple(tuple(x for x in row) for row in u)
    return h, ut


def lattice_membership(generators: Sequence[Sequence], target) -> tuple[int, ...] | None:
    """Integer coefficients c with sum(c_i * generators_i) == target, or None.

    Generators and target may be rational; denominators are cleared before
    solving over the integers via the Hermite normal form.
    """
    gens = [to_vec(g) for g in generators]
    tgt = to_vec(target)
    dim = len(tgt)
    if any(len(g) != dim for g in gens):
        raise ValueError("generator/target dimension mismatch")
    if not gens:
        return () if vec_is_zero(tgt) else None

    denoms = [x.denominator for g in gens for x in g] + [x.denominator for x in tgt]
    d = lcm(*denoms) if denoms else 1
    g_int = [[int(x * d) for x in g] for g in gens]
    t_int = [int(x * d) for x in tgt]

    h, u = hermite_normal_form(g_int)
    residual = list(t_int)
    y = [0] * len(gens)
    for r, row in enumerate(h):
        pivot_col = next((c for c, x in enumerate(row) if x != 0), None)
        if pivot_col is None:
            break
        if residual[pivot_col] % row[pivot_col] != 0:
            return None
        q = residual[pivot_col] // row[pivot_col]
        y[r] = q
        for k in range(dim):
            residual[k] -= q * row[k]
    if any(residual):
        return None
    coeffs = tuple(
        sum(y[r] * u[r][i] for r in range(len(gens))) for i in range(len(gens))
    )
    # paranoia: witnesses must reconstruct the target exactly
    acc = zero_vec(dim)
    for c, g in zip(coeffs, gens):
        acc = vec_add(acc, vec_scale(c, g))
    if acc != tgt:
        raise AssertionError("lattice_membership produced a bad witness")
    return coeffs
