"""The thirteen CM classes of elliptic curves over Q.

Each class is identified by the absolute value of the discriminant of its
CM order (called `cm` here).  A curve with CM is a twist of the stored
representative: quadratic (squarefree k) when j is not 0 or 1728, sextic
(sixth-power-free k, y^2 = x^3 + k) when j = 0, and quartic
(fourth-power-free k, y^2 = x^3 + k*x) when j = 1728.  The (cm, k) pair
pins the curve down uniquely, and the torsion over Q is a closed form in
these invariants.
"""

from dataclasses import dataclass
from fractions import Fraction

from .ellcurve import EllipticCurve, TorsionGroup
from .errors import InternalConsistencyError
from .exactnum import is_perfect_power, power_free_part, squarefree_part

__all__ = [
    "CMClass",
    "CMInvariants",
    "NotCMError",
    "CM_CLASSES",
    "class_for_cm",
    "detect_cm",
    "normal_form",
    "torsion_over_Q_table",
    "canonical_k",
    "is_canonical_k",
]


class NotCMError(ValueError):
    """The curve's j-invariant matches none of the thirteen CM classes."""


@dataclass(frozen=True)
class CMClass:
    """One row of the CM classification: field disc -D, conductor, j, model."""

    cm: int
    D: int
    conductor: int
    j: int
    A: int
    B: int

    @property
    def base_curve(self):
        return EllipticCurve(self.A, self.B)


CM_CLASSES = (
    CMClass(3, 3, 1, 0, 0, 1),
    CMClass(12, 3, 2, 54000, -15, 22),
    CMClass(27, 3, 3, -12288000, -480, 4048),
    CMClass(4, 4, 1, 1728, 1, 0),
    CMClass(16, 4, 2, 287496, -11, 14),
    CMClass(7, 7, 1, -3375, -2835, -71442),
    CMClass(28, 7, 2, 16581375, -595, 5586),
    CMClass(8, 8, 1, 8000, -4320, 96768),
    CMClass(11, 11, 1, -32768, -9504, 365904),
    CMClass(19, 19, 1, -884736, -608, 5776),
    CMClass(43, 43, 1, -884736000, -13760, 621264),
    CMClass(67, 67, 1, -147197952000, -117920, 15585808),
    CMClass(163, 163, 1, -262537412640768000, -34790720, 78984748304),
)

_BY_CM = {row.cm: row for row in CM_CLASSES}
_BY_J = {Fraction(row.j): row for row in CM_CLASSES}


def _self_check():
    if len(_BY_J) != len(CM_CLASSES):
        raise InternalConsistencyError("CM class j-invariants are not distinct")
    for row in CM_CLASSES:
        if row.base_curve.j_invariant != row.j:
            raise InternalConsistencyError(
                f"stored j for cm={row.cm} disagrees with its [A, B] model"
            )


_self_check()


def class_for_cm(cm):
    try:
        return _BY_CM[cm]
    except KeyError:
        raise ValueError(f"unknown CM class {cm}") from None


def _k_modulus(cm):
    # exponent n with k ranging over Q*/(Q*)^n representatives
    return 6 if cm == 3 else 4 if cm == 4 else 2


def is_canonical_k(cm, k):
    return k != 0 and power_free_part(k, _k_modulus(cm)) == k


def canonical_k(cm, k):
    """Reduce any nonzero rational twist parameter to the class representative."""
    return power_free_part(k, _k_modulus(cm))


@dataclass(frozen=True)
class CMInvariants:
    """(cm, k): the CM class and the canonical twist parameter."""

    cm: int
    k: int

    def __post_init__(self):
        if self.cm not in _BY_CM:
            raise ValueError(f"unknown CM class {self.cm}")
        if not is_canonical_k(self.cm, self.k):
            raise ValueError(
                f"k={self.k} is not a canonical twist parameter for cm={self.cm}"
            )


def normal_form(inv):
    """The canonical model for (cm, k)."""
    if inv.cm == 3:
        return EllipticCurve(0, inv.k)
    if inv.cm == 4:
        return EllipticCurve(inv.k, 0)
    row = _BY_CM[inv.cm]
    return EllipticCurve(inv.k**2 * row.A, inv.k**3 * row.B)


def detect_cm(curve):
    """CM-invariants of a rational curve, or NotCMError.

    The recovered (cm, k) is verified by checking that the curve really is
    Q-isomorphic to the (cm, k) normal form; a failure there indicates an
    internal bug, not bad input.
    """
    if curve.field is not None:
        raise ValueError("CM detection expects a curve over Q")
    row = _BY_J.get(curve.j_invariant)
    if row is None:
        raise NotCMError(f"j = {curve.j_invariant} is not a CM j-invariant")
    a, b = curve.a, curve.b
    if row.cm == 3:
        k_q = power_free_part(b, 6)
        ok = is_perfect_power(b / k_q, 6) is not None
    elif row.cm == 4:
        k_q = power_free_part(a, 4)
        ok = is_perfect_power(a / k_q, 4) is not None
    else:
        if a == 0 or b == 0:
            raise InternalConsistencyError("j not in {0, 1728} forces a, b nonzero")
        k_q = squarefree_part(Fraction(b * row.A, 1) / (a * row.B))
        u4 = is_perfect_power(a / (k_q**2 * row.A), 4)
        ok = u4 is not None and b / (k_q**3 * row.B) == u4**6
    if not ok:
        raise InternalConsistencyError(
            f"recovered k={k_q} fails the isomorphism check for cm={row.cm}"
        )
    inv = CMInvariants(row.cm, int(k_q))
    return inv


def torsion_over_Q_table(inv):
    """Closed-form torsion over Q from the (cm, k) classification."""
    cm, k = inv.cm, inv.k
    if cm == 3:
        if k == 1:
            return TorsionGroup.cyclic(6)
        if k == -432 or is_perfect_power(k, 2) is not None:
            return TorsionGroup.cyclic(3)
        if is_perfect_power(k, 3) is not None:
            return TorsionGroup.cyclic(2)
        return TorsionGroup.cyclic(1)
    if cm == 12:
        return TorsionGroup.cyclic(6 if k == 1 else 2)
    if cm == 27:
        return TorsionGroup.cyclic(3 if k == 1 else 1)
    if cm == 4:
        if k == 4:
            return TorsionGroup.cyclic(4)
        if k < 0 and is_perfect_power(-k, 2) is not None:
            return TorsionGroup(2, 2)
        return TorsionGroup.cyclic(2)
    if cm == 16:
        return TorsionGroup.cyclic(4 if k in (1, 2) else 2)
    if cm in (7, 28, 8):
        return TorsionGroup.cyclic(2)
    return TorsionGroup.cyclic(1)
