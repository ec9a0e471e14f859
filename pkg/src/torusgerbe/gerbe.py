"""Canonical gerbe data and the exponents it attaches to lattice pairs.

A gerbe on the torus is presented by a rational alternating 2-form B and an
integral alternating 3-form E satisfying the type condition.  The attached
cocycle has values exp(B(l1,l2)/2 + H_{l1,l2}(v)) where H is holomorphic and
linear in v; this module computes those exponents exactly, the effect of
translating the data, and the isomorphism test for two presentations.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .exact import (
    GaussianRational,
    Vec,
    ZERO_G,
    dot,
    mat_vec,
    to_vec,
    vec_is_integral,
    vec_is_zero,
    zero_vec,
)
from .torus import (
    AltForm2,
    AltForm3,
    TorusData,
    anti_invariant_part,
    contract3,
    integral_anti_invariant_member,
    j_pullback2,
    type_condition_check,
)


class TypeConditionFailed(ValueError):
    """Raised when a 3-form is incompatible with the complex structure."""


@dataclass(frozen=True)
class ExponentFn:
    """Exponent of a holomorphic function of v: const + (re + i*im) . v.

    The linear part is stored as a pair of real covectors.  Holomorphy of
    exp of this function amounts to lin_re(Jv) = -lin_im(v) and
    lin_im(Jv) = lin_re(v), which is exactly checkable.
    """

    const: GaussianRational
    lin_re: Vec
    lin_im: Vec

    @staticmethod
    def zero(dim: int) -> "ExponentFn":
        return ExponentFn(ZERO_G, zero_vec(dim), zero_vec(dim))

    @staticmethod
    def constant(dim: int, c: GaussianRational) -> "ExponentFn":
        return ExponentFn(c, zero_vec(dim), zero_vec(dim))

    @property
    def dim(self) -> int:
        return len(self.lin_re)

    def linear(self, v: Vec) -> GaussianRational:
        return GaussianRational(dot(self.lin_re, v), dot(self.lin_im, v))

    def evaluate(self, v) -> GaussianRational:
        return self.const + self.linear(to_vec(v))

    def shift(self, w) -> "ExponentFn":
        """Precompose with v -> v + w."""
        return ExponentFn(self.const + self.linear(to_vec(w)), self.lin_re, self.lin_im)

    def add_const(self, c: GaussianRational) -> "ExponentFn":
        return ExponentFn(self.const + c, self.lin_re, self.lin_im)

    def __add__(self, other: "ExponentFn") -> "ExponentFn":
        return ExponentFn(
            self.const + other.const,
            tuple(a + b for a, b in zip(self.lin_re, other.lin_re, strict=True)),
            tuple(a + b for a, b in zip(self.lin_im, other.lin_im, strict=True)),
        )

    def __sub__(self, other: "ExponentFn") -> "ExponentFn":
        return self + (-other)

    def __neg__(self) -> "ExponentFn":
        return ExponentFn(
            -self.const,
            tuple(-a for a in self.lin_re),
            tuple(-a for a in self.lin_im),
        )

    @property
    def is_zero(self) -> bool:
        return self.const.is_zero and vec_is_zero(self.lin_re) and vec_is_zero(self.lin_im)

    @property
    def linear_part_is_zero(self) -> bool:
        return vec_is_zero(self.lin_re) and vec_is_zero(self.lin_im)

    def is_holomorphic(self, torus: TorusData) -> bool:
        re_j = mat_vec(torus.jt, self.lin_re)
        im_j = mat_vec(torus.jt, self.lin_im)
        return re_j == tuple(-a for a in self.lin_im) and im_j == self.lin_re


@dataclass(frozen=True)
class Character:
    """Homomorphism from the lattice to C^x, stored as exponents on the basis.

    The value on a lattice vector l is exp(sum_k exponents[k] * l_k).  Two
    characters agree exactly when the exponent difference is real and
    integral componentwise.
    """

    exponents: tuple[GaussianRational, ...]

    @staticmethod
    def identity(dim: int) -> "Character":
        return Character((ZERO_G,) * dim)

    @property
    def dim(self) -> int:
        return len(self.exponents)

    def exponent_at(self, v) -> GaussianRational:
        v = to_vec(v)
        if not vec_is_integral(v):
            raise ValueError("characters are defined on lattice vectors")
        total = ZERO_G
        for e, c in zip(self.exponents, v, strict=True):
            total = total + e * c
        return total

    def __mul__(self, other: "Character") -> "Character":
        return Character(
            tuple(a + b for a, b in zip(self.exponents, other.exponents, strict=True))
        )

    def inverse(self) -> "Character":
        return Character(tuple(-a for a in self.exponents))

    @property
    def is_trivial(self) -> bool:
        return all(e.im == 0 and e.re.denominator == 1 for e in self.exponents)

    def equivalent(self, other: "Character") -> bool:
        return (self * other.inverse()).is_trivial


@dataclass(frozen=True)
class GerbeData:
    """Gerbe presentation (B, E) on a torus; E integral and type-compatible."""

    torus: TorusData
    b: AltForm2
    e: AltForm3

    def __post_init__(self):
        if self.b.dim != self.torus.dim or self.e.dim != self.torus.dim:
            raise ValueError("form/torus dimension mismatch")
        if not self.e.is_integral:
            raise ValueError("the 3-form of a gerbe must be integral")
        if not type_condition_check(self.torus, self.e):
            raise TypeConditionFailed(
                "3-form violates the type condition for this complex structure"
            )


def _require_lattice(v: Vec, what: str):
    if not vec_is_integral(v):
        raise ValueError(f"{what} must be a lattice (integer) vector")


def exponent_re(torus: TorusData, e3: AltForm3, a, b, c) -> Fraction:
    """Real part of the canonical exponent, trilinear in rational arguments:

    (E(a,b,c) + E(ia,ib,c)/2 + E(ia,b,ic)/2) / 8
    """
    a, b, c = to_vec(a), to_vec(b), to_vec(c)
    ia = torus.mul_i(a)
    return (
        e3.evaluate(a, b, c)
        + e3.evaluate(ia, torus.mul_i(b), c) / 2
        + e3.evaluate(ia, b, torus.mul_i(c)) / 2
    ) / 8


def exponent_im(torus: TorusData, e3: AltForm3, a, b, c) -> Fraction:
    """Imaginary part of the canonical exponent, trilinear in rational arguments:

    (E(a,ib,c)/2 + E(a,b,ic)/2 - E(ia,b,c)) / 8
    """
    a, b, c = to_vec(a), to_vec(b), to_vec(c)
    return (
        e3.evaluate(a, torus.mul_i(b), c) / 2
        + e3.evaluate(a, b, torus.mul_i(c)) / 2
        - e3.evaluate(torus.mul_i(a), b, c)
    ) / 8


def pair_exponent(gerbe: GerbeData, l1, l2) -> ExponentFn:
    """The holomorphic exponent H attached to a lattice pair, linear in v."""
    t = gerbe.torus
    l1, l2 = to_vec(l1), to_vec(l2)
    _require_lattice(l1, "l1")
    _require_lattice(l2, "l2")
    basis = t.basis()
    lin_re = tuple(exponent_re(t, gerbe.e, ek, l1, l2) for ek in basis)
    lin_im = tuple(exponent_im(t, gerbe.e, ek, l1, l2) for ek in basis)
    return ExponentFn(ZERO_G, lin_re, lin_im)


def cocycle_exponent(gerbe: GerbeData, l1, l2) -> ExponentFn:
    """Exponent of the canonical cocycle: B(l1,l2)/2 plus the pair exponent.

    The translation-invariant normalizing constants of the full cocycle are
    omitted; every identity computed downstream is independent of them.
    """
    l1, l2 = to_vec(l1), to_vec(l2)
    h = pair_exponent(gerbe, l1, l2)
    return h.add_const(GaussianRational.real(gerbe.b.evaluate(l1, l2) / 2))


def translation_factor(gerbe: GerbeData, w, l1, l2) -> GaussianRational:
    """Exponent of the factor a translation by w multiplies the cocycle by."""
    t = gerbe.torus
    w, l1, l2 = to_vec(w), to_vec(l1), to_vec(l2)
    _require_lattice(l1, "l1")
    _require_lattice(l2, "l2")
    return GaussianRational(
        exponent_re(t, gerbe.e, w, l1, l2), exponent_im(t, gerbe.e, w, l1, l2)
    )


def translation_shift_form(torus: TorusData, e3: AltForm3, w) -> AltForm2:
    """The 2-form (5*E(w,.,.) - 3*E(w,i.,i.)) / 8 added to B by translation."""
    omega = contract3(e3, w)
    return (omega.scale(5) - j_pullback2(torus, omega).scale(3)).scale(Fraction(1, 8))


def translate_gerbe(gerbe: GerbeData, w) -> GerbeData:
    """Canonical presentation of the gerbe pulled back by translation by w."""
    shift = translation_shift_form(gerbe.torus, gerbe.e, to_vec(w))
    return GerbeData(torus=gerbe.torus, b=gerbe.b + shift, e=gerbe.e)


def gerbes_isomorphic(g1: GerbeData, g2: GerbeData) -> bool:
    """Whether two presentations describe isomorphic gerbes.

    True iff the 3-forms agree and the difference of the 2-forms lies in
    Alt^2(Z) + {type (1,1) forms}, decided exactly via lattice membership of
    anti-invariant parts.
    """
    if g1.torus != g2.torus:
        raise ValueError("gerbes live on different tori")
    if g1.e != g2.e:
        return False
    return integral_anti_invariant_member(g1.torus, g1.b - g2.b)
