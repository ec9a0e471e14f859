"""Complex tori with a rational complex structure on the lattice Z^{2n}.

The lattice is always Z^{2n} in the standard basis; multiplication by i on
the real torus V = R^{2n} is a rational matrix J with J*J = -I.  This module
also houses integer/rational alternating 2- and 3-forms on the lattice, the
(1,1) type projectors, and the trilinear type condition that gerbe data must
satisfy.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

from .exact import (
    Mat,
    Vec,
    basis_vec,
    dot,
    identity_mat,
    lattice_membership,
    mat_mul,
    mat_transpose,
    mat_vec,
    to_fraction,
    to_mat,
    to_vec,
    vec_is_zero,
    zero_vec,
)


class NotAComplexStructure(ValueError):
    """Raised when a candidate matrix J does not satisfy J*J = -I."""


@dataclass(frozen=True)
class TorusData:
    """A complex torus of dimension n presented by J acting on R^{2n}."""

    n: int
    j: Mat
    jt: Mat = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        dim = 2 * self.n
        j = to_mat(self.j)
        if self.n < 1 or len(j) != dim or any(len(r) != dim for r in j):
            raise NotAComplexStructure(f"J must be {dim}x{dim}")
        minus_identity = tuple(
            tuple(-x for x in row) for row in identity_mat(dim)
        )
        if mat_mul(j, j) != minus_identity:
            raise NotAComplexStructure("J*J != -I")
        object.__setattr__(self, "j", j)
        object.__setattr__(self, "jt", mat_transpose(j))

    @property
    def dim(self) -> int:
        return 2 * self.n

    def mul_i(self, v: Vec) -> Vec:
        """Multiplication by i, realized as J*v."""
        return mat_vec(self.j, v)

    def basis(self) -> tuple[Vec, ...]:
        return tuple(basis_vec(self.dim, k) for k in range(self.dim))


def check_complex_structure(j_rows) -> TorusData:
    """Validate a candidate complex-structure matrix and wrap it."""
    j = to_mat(j_rows)
    if not j or len(j) % 2 != 0:
        raise NotAComplexStructure("J must be square of even dimension")
    return TorusData(n=len(j) // 2, j=j)


@dataclass(frozen=True)
class AltForm2:
    """Alternating bilinear form on Q^{dim}, stored as its full matrix."""

    entries: Mat

    def __post_init__(self):
        m = to_mat(self.entries)
        dim = len(m)
        if any(len(r) != dim for r in m):
            raise ValueError("AltForm2 matrix must be square")
        for a in range(dim):
            for b in range(a, dim):
                if m[a][b] != -m[b][a]:
                    raise ValueError("AltForm2 matrix must be antisymmetric")
        object.__setattr__(self, "entries", m)

    @staticmethod
    def zero(dim: int) -> "AltForm2":
        return AltForm2(tuple(zero_vec(dim) for _ in range(dim)))

    @staticmethod
    def from_pairs(dim: int, coeffs: dict) -> "AltForm2":
        """Build from {(a, b): c} with 0 <= a < b < dim (zero elsewhere)."""
        m = [[Fraction(0)] * dim for _ in range(dim)]
        for (a, b), c in coeffs.items():
            if not (0 <= a < b < dim):
                raise ValueError(f"pair indices must satisfy 0 <= a < b < dim, got {(a, b)}")
            c = to_fraction(c)
            m[a][b] += c
            m[b][a] -= c
        return AltForm2(tuple(tuple(r) for r in m))

    @property
    def dim(self) -> int:
        return len(self.entries)

    def entry(self, a: int, b: int) -> Fraction:
        return self.entries[a][b]

    def apply(self, v: Vec) -> Vec:
        """The vector (omega(e_k, v))_k."""
        return mat_vec(self.entries, v)

    def evaluate(self, x: Vec, y: Vec) -> Fraction:
        return dot(x, self.apply(y))

    def scale(self, c) -> "AltForm2":
        c = to_fraction(c)
        return AltForm2(tuple(tuple(c * x for x in row) for row in self.entries))

    def __add__(self, other: "AltForm2") -> "AltForm2":
        if self.dim != other.dim:
            raise ValueError("dimension mismatch")
        return AltForm2(
            tuple(
                tuple(a + b for a, b in zip(ra, rb))
                for ra, rb in zip(self.entries, other.entries)
            )
        )

    def __sub__(self, other: "AltForm2") -> "AltForm2":
        return self + other.scale(-1)

    def __neg__(self) -> "AltForm2":
        return self.scale(-1)

    @property
    def is_zero(self) -> bool:
        return all(vec_is_zero(row) for row in self.entries)

    @property
    def is_integral(self) -> bool:
        return all(x.denominator == 1 for row in self.entries for x in row)

    def upper_coeffs(self) -> Vec:
        """Coefficients on pairs a < b in lexicographic order."""
        d = self.dim
        return tuple(self.entries[a][b] for a in range(d) for b in range(a + 1, d))


@dataclass(frozen=True)
class AltForm3:
    """Alternating trilinear form, stored on strictly increasing triples."""

    dim: int
    entries: tuple[tuple[tuple[int, int, int], Fraction], ...]

    @staticmethod
    def zero(dim: int) -> "AltForm3":
        return AltForm3(dim, ())

    @staticmethod
    def from_coeffs(dim: int, coeffs: dict) -> "AltForm3":
        """Build from {(a, b, c): value} with 0 <= a < b < c < dim."""
        items = []
        for (a, b, c), v in coeffs.items():
            if not (0 <= a < b < c < dim):
                raise ValueError(
                    f"triple indices must satisfy 0 <= a < b < c < dim, got {(a, b, c)}"
                )
            v = to_fraction(v)
            if v != 0:
                items.append(((a, b, c), v))
        items.sort(key=lambda t: t[0])
        return AltForm3(dim, tuple(items))

    def coeff(self, a: int, b: int, c: int) -> Fraction:
        for triple, v in self.entries:
            if triple == (a, b, c):
                return v
        return Fraction(0)

    def evaluate(self, x: Vec, y: Vec, z: Vec) -> Fraction:
        total = Fraction(0)
        for (a, b, c), coef in self.entries:
            xa, xb, xc = x[a], x[b], x[c]
            ya, yb, yc = y[a], y[b], y[c]
            za, zb, zc = z[a], z[b], z[c]
            total += coef * (
                xa * (yb * zc - yc * zb)
                - ya * (xb * zc - xc * zb)
                + za * (xb * yc - xc * yb)
            )
        return total

    def contract(self, w: Vec) -> AltForm2:
        """The 2-form (x, y) -> E(w, x, y)."""
        d = self.dim
        m = [[Fraction(0)] * d for _ in range(d)]

        def bump(a, b, v):
            m[a][b] += v
            m[b][a] -= v

        for (p, q, r), coef in self.entries:
            bump(q, r, coef * w[p])
            bump(p, r, -coef * w[q])
            bump(p, q, coef * w[r])
        return AltForm2(tuple(tuple(row) for row in m))

    def scale(self, c) -> "AltForm3":
        c = to_fraction(c)
        return AltForm3.from_coeffs(self.dim, {t: c * v for t, v in self.entries})

    @property
    def is_zero(self) -> bool:
        return not self.entries

    @property
    def is_integral(self) -> bool:
        return all(v.denominator == 1 for _, v in self.entries)


@dataclass(frozen=True)
class HodgeImage:
    """Value of the Hodge projection: a complex-valued alternating 2-form."""

    re: AltForm2
    im: AltForm2

    @property
    def is_zero(self) -> bool:
        return self.re.is_zero and self.im.is_zero


def contract3(e3: AltForm3, w) -> AltForm2:
    """Contraction of a 3-form in its first slot: (x, y) -> E(w, x, y)."""
    return e3.contract(to_vec(w))


def j_pullback2(torus: TorusData, omega: AltForm2) -> AltForm2:
    """Pullback (x, y) -> omega(Jx, Jy)."""
    if omega.dim != torus.dim:
        raise ValueError("form/torus dimension mismatch")
    return AltForm2(mat_mul(torus.jt, mat_mul(omega.entries, torus.j)))


def anti_invariant_part(torus: TorusData, omega: AltForm2) -> AltForm2:
    """Projector onto the J-anti-invariant part: (omega - J*omega)/2.

    The kernel is exactly the J-invariant forms, i.e. those of type (1,1).
    """
    return (omega - j_pullback2(torus, omega)).scale(Fraction(1, 2))


def hodge_projection(torus: TorusData, omega: AltForm2) -> HodgeImage:
    """Complex-valued projection killing the (1,1) part:

    omega^H(w1, w2) = (omega(w1,w2) - omega(Jw1,Jw2)
                       + i*omega(Jw1,w2) + i*omega(w1,Jw2)) / 4
    """
    if omega.dim != torus.dim:
        raise ValueError("form/torus dimension mismatch")
    m = omega.entries
    re = (omega - j_pullback2(torus, omega)).scale(Fraction(1, 4))
    jt_m = mat_mul(torus.jt, m)
    m_j = mat_mul(m, torus.j)
    im = AltForm2(
        tuple(
            tuple((a + b) / 4 for a, b in zip(ra, rb))
            for ra, rb in zip(jt_m, m_j)
        )
    )
    return HodgeImage(re=re, im=im)


def type_condition_check(torus: TorusData, e3: AltForm3) -> bool:
    """Whether E(x,y,z) = E(ix,iy,z) + E(x,iy,iz) + E(ix,y,iz) on the lattice.

    Both sides are alternating and trilinear, so strictly increasing basis
    triples suffice.  In complex dimension 2 this holds for every E.
    """
    if e3.dim != torus.dim:
        raise ValueError("form/torus dimension mismatch")
    basis = torus.basis()
    jbasis = tuple(torus.mul_i(b) for b in basis)
    for a, b, c in itertools.combinations(range(torus.dim), 3):
        lhs = e3.evaluate(basis[a], basis[b], basis[c])
        rhs = (
            e3.evaluate(jbasis[a], jbasis[b], basis[c])
            + e3.evaluate(basis[a], jbasis[b], jbasis[c])
            + e3.evaluate(jbasis[a], basis[b], jbasis[c])
        )
        if lhs != rhs:
            return False
    return True


def skew_symmetrize(f, args):
    """Sum of sign(sigma) * f(permuted args) over all permutations (k = 2, 3)."""
    args = tuple(args)
    if len(args) == 2:
        a, b = args
        return f(a, b) - f(b, a)
    if len(args) == 3:
        a, b, c = args
        return (
            f(a, b, c) - f(a, c, b) + f(b, c, a) - f(b, a, c) + f(c, a, b) - f(c, b, a)
        )
    raise ValueError("skew_symmetrize supports 2 or 3 arguments")


def integral_anti_invariant_member(torus: TorusData, omega: AltForm2) -> bool:
    """Whether omega lies in Alt^2(Z) + {type (1,1) forms}.

    Decided exactly: the anti-invariant part of omega must be an integer
    combination of the anti-invariant parts of the integer basis 2-forms.
    """
    if omega.dim != torus.dim:
        raise ValueError("form/torus dimension mismatch")
    d = torus.dim
    target = anti_invariant_part(torus, omega).upper_coeffs()
    gens = []
    for a in range(d):
        for b in range(a + 1, d):
            basis_form = AltForm2.from_pairs(d, {(a, b): 1})
            gens.append(anti_invariant_part(torus, basis_form).upper_coeffs())
    return lattice_membership(gens, target) is not None
