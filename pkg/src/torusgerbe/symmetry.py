"""Translation symmetries of a gerbe.

A translation by w fixes the gerbe class exactly when the contraction
E(w,.,.) lies in Alt^2(Z) + {type (1,1) forms}.  Two distinguished
subgroups admit a linear choice of decomposition data and are the ones all
obstruction computations run over: the integral case (contraction has
integer coefficients) and the type (1,1) case (contraction is J-invariant).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction

from .exact import to_vec
from .torus import (
    AltForm2,
    AltForm3,
    TorusData,
    anti_invariant_part,
    contract3,
    integral_anti_invariant_member,
    j_pullback2,
)
from .gerbe import translation_shift_form


class NotInSubgroup(ValueError):
    """Raised when a vector fails the membership required by the chosen case."""


class SubgroupCase(enum.Enum):
    INTEGRAL = "integral"
    TYPE_ONE_ONE = "oneone"


@dataclass(frozen=True)
class InvarianceClass:
    """Contraction representative and whether its class vanishes."""

    representative: AltForm2
    is_zero: bool


@dataclass(frozen=True)
class Decomposition:
    """Splitting of the translation shift into (1,1) and integral pieces.

    invariant_part + integral_part always equals the translation shift form;
    when the case membership holds the invariant part is of type (1,1) and
    the integral part has integer coefficients.
    """

    invariant_part: AltForm2
    integral_part: AltForm2


def invariance_class(torus: TorusData, e3: AltForm3, w) -> InvarianceClass:
    """Class of the translation action of w on the gerbe presentation."""
    rep = contract3(e3, to_vec(w))
    return InvarianceClass(
        representative=rep, is_zero=integral_anti_invariant_member(torus, rep)
    )


def fixes_gerbe(torus: TorusData, e3: AltForm3, w) -> bool:
    """Whether translation by w preserves the isomorphism class."""
    return invariance_class(torus, e3, w).is_zero


def in_case_subgroup(torus: TorusData, e3: AltForm3, w, case: SubgroupCase) -> bool:
    """Membership of w in the chosen decomposition subgroup."""
    omega = contract3(e3, to_vec(w))
    if case is SubgroupCase.INTEGRAL:
        return omega.is_integral
    return anti_invariant_part(torus, omega).is_zero


def case_decomposition(
    torus: TorusData, e3: AltForm3, w, case: SubgroupCase, check: bool = True
) -> Decomposition:
    """Linear-in-w decomposition data for the chosen case.

    Integral case: invariant part -3/8*(E(w,.,.) + E(w,i.,i.)), integral
    part E(w,.,.).  Type (1,1) case: invariant part is the full translation
    shift (which equals E(w,.,.)/4 on the subgroup), integral part zero.
    With check=False the same formulas are applied to any w; the resulting
    data then fails its defining property exactly when w is outside the
    subgroup, which is what the trivialization verifier witnesses.
    """
    w = to_vec(w)
    omega = contract3(e3, w)
    if case is SubgroupCase.INTEGRAL:
        if check and not omega.is_integral:
            raise NotInSubgroup("contraction with the 3-form is not integral")
        invariant = (omega + j_pullback2(torus, omega)).scale(Fraction(-3, 8))
        return Decomposition(invariant_part=invariant, integral_part=omega)
    if check and not anti_invariant_part(torus, omega).is_zero:
        raise NotInSubgroup("contraction with the 3-form is not of type (1,1)")
    return Decomposition(
        invariant_part=translation_shift_form(torus, e3, w),
        integral_part=AltForm2.zero(torus.dim),
    )
