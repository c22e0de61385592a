"""Primitive torsion growth over cubic fields, two independent ways.

growth_engine computes the multiset of primitive growths of a CM curve by
honest calculation: it factors primitive division polynomials, collects
the irreducible cubic factors, tests the twist square condition in each
candidate field, merges fields up to isomorphism, and recomputes the full
torsion over every surviving field.  growth_table answers the same
question from the closed-form classification in terms of the CM
invariants.  cross_check runs both and compares.

A cubic field has no proper subfield other than Q, so growth over it is
primitive exactly when it is strict.
"""

from dataclasses import dataclass
from fractions import Fraction

from . import cmclass
from .cmclass import CMInvariants, detect_cm, normal_form, torsion_over_Q_table
from .ellcurve import (
    EllipticCurve,
    TorsionGroup,
    REALIZABLE_GROUPS,
    primitive_division_polynomial,
    torsion_over_base,
)
from .ellcurve import _order_possible, _rational_roots_distinct  # shared internals
from .errors import InternalConsistencyError
from .exactnum import is_perfect_power
from .numberfield import CubicField, fields_isomorphic, galois_cubic_test, is_square
from .poly import Poly
from . import polyfactor

__all__ = [
    "GrowthRecord",
    "GrowthReport",
    "Verdict",
    "growth_engine",
    "growth_table",
    "cross_check",
    "canonical_k_values",
    "GROWTH_SEARCH_ORDERS",
    "PARANOID_ORDERS",
]

GROWTH_SEARCH_ORDERS = (2, 3, 4, 7, 9)
# Orders outside the CM classification bound; the paranoid mode verifies
# they genuinely contribute nothing.
PARANOID_ORDERS = (5, 6, 8)


@dataclass(frozen=True)
class GrowthRecord:
    """One primitive growth: the bigger group over one cubic field."""

    group: TorsionGroup
    field: CubicField
    generators: tuple = ()

    def sort_key(self):
        return (self.group.order, self.group.d1, self.field.defining_poly.sort_key())


@dataclass(frozen=True)
class GrowthReport:
    curve: EllipticCurve
    inv: CMInvariants
    torsion_q: TorsionGroup
    growths: tuple

    def __post_init__(self):
        if len(self.growths) > 2:
            raise InternalConsistencyError("more than two primitive cubic growths")
        for rec in self.growths:
            if rec.group not in REALIZABLE_GROUPS:
                raise InternalConsistencyError(f"unrealizable growth {rec.group.name}")
        for i, r1 in enumerate(self.growths):
            for r2 in self.growths[i + 1 :]:
                if fields_isomorphic(r1.field, r2.field):
                    raise InternalConsistencyError("duplicate growth field")

    @property
    def h_count(self):
        return len(self.growths)

    def group_multiset(self):
        return tuple(sorted(rec.group.name for rec in self.growths))


def _field_sort_key(g):
    weight = max(abs(c.numerator * c.denominator) for c in g.coeffs)
    return (weight, g.sort_key())


def _merge_fields(fields):
    """Partition by isomorphism; represent each class by its nicest poly."""
    classes = []
    for K in fields:
        for cls in classes:
            if fields_isomorphic(cls[0], K):
                cls.append(K)
                break
        else:
            classes.append([K])
    reps = []
    for cls in classes:
        reps.append(min(cls, key=lambda K: _field_sort_key(K.defining_poly)))
    return reps


def _candidate_fields(curve, paranoid=False):
    """Cubic fields over which some division polynomial yields a point."""
    f = curve.f_poly
    fields = []
    if not _rational_roots_distinct(f):
        # 2-torsion appears over the field cut out by the irreducible cubic f
        fields.append(CubicField(f.monic()))
    order3 = None
    for m in (3, 4, 7, 9):
        if m == 9 and order3 is None and not _has_rational_order3(curve):
            continue
        if not _order_possible(curve, m, cubic=True):
            continue
        prim = primitive_division_polynomial(curve, m)
        for g in polyfactor.factors_up_to_degree(prim, 3):
            if g.degree != 3:
                continue
            K = CubicField(g)
            alpha = K.gen
            v = f(alpha)
            if v.is_zero:
                raise InternalConsistencyError("division polynomial root on 2-torsion")
            if is_square(v) is not None:
                fields.append(K)
                if m == 3:
                    order3 = K
    if paranoid:
        for m in PARANOID_ORDERS:
            prim = primitive_division_polynomial(curve, m)
            for g in polyfactor.factors_up_to_degree(prim, 3):
                if g.degree != 3:
                    continue
                K = CubicField(g)
                if is_square(f(K.gen)) is not None:
                    raise InternalConsistencyError(
                        f"order-{m} point over a cubic field contradicts the bound"
                    )
    return fields


def _has_rational_order3(curve):
    prim = primitive_division_polynomial(curve, 3)
    for r in _rational_roots_distinct(prim):
        v = curve.f_poly(r)
        if v != 0 and is_perfect_power(v, 2) is not None:
            return True
    return False


def growth_engine(curve, paranoid=False):
    """Compute the growth report of a CM curve over Q by direct search."""
    inv = detect_cm(curve)
    tq = torsion_over_base(curve)
    records = []
    for K in _merge_fields(_candidate_fields(curve, paranoid=paranoid)):
        data = torsion_over_base(curve, K)
        if not tq.group.embeds_in(data.group):
            raise InternalConsistencyError("torsion failed to carry over to the field")
        if data.group.order > tq.group.order:
            records.append(GrowthRecord(data.group, K, data.generators))
    records.sort(key=GrowthRecord.sort_key)
    return GrowthReport(curve, inv, tq.group, tuple(records))


# ---------------------------------------------------------------------------
# Closed-form growth: the explicit description in the CM invariants.
# ---------------------------------------------------------------------------


def _pure_cubic(n):
    """x^3 - n."""
    return Poly((-n, 0, 0, 1))


def _cubic(c0, c1, c2):
    return Poly((c0, c1, c2, 1))


def _rec(name, poly):
    return GrowthRecord(TorsionGroup.from_name(name), CubicField(poly))


def _table_rows_cm3(k):
    if k == 1:
        return []
    if k == 16:
        return [_rec("C6", _pure_cubic(2)), _rec("C9", _cubic(-1, -3, 0))]
    if k == -432:
        return [_rec("C6", _pure_cubic(2))]
    if is_perfect_power(k, 2) is not None:  # k = r^2, r != +-1, +-4
        return [_rec("C6", _pure_cubic(k))]
    if k == -27:
        return [_rec("C6", _pure_cubic(2))]
    if is_perfect_power(k, 3) is not None:  # k = r^3, r != 1, -3
        return []
    if k == -108:
        return [_rec("C6", _pure_cubic(2))]
    r2 = is_perfect_power(Fraction(-k, 3), 2)
    if r2 is not None:  # k = -3 r^2, r != +-6
        return [_rec("C2", _pure_cubic(-k)), _rec("C3", _pure_cubic(-4 * k))]
    return [_rec("C2", _pure_cubic(k))]


_FIXED_CUBICS = {
    11: _cubic(1, 1, -1),
    19: _cubic(-1, 3, -1),
    43: _cubic(3, -1, -1),
    67: _cubic(5, -3, -1),
    163: _cubic(-10, -8, 0),
}


def growth_table(inv):
    """The closed-form growth report for (cm, k)."""
    cm, k = inv.cm, inv.k
    if cm == 3:
        growths = _table_rows_cm3(k)
    elif cm == 12:
        growths = [_rec("C6", _pure_cubic(2))] if k == -3 else []
    elif cm == 27:
        if k == 1:
            growths = [_rec("C6", _pure_cubic(2)), _rec("C9", _cubic(-1, -3, 0))]
        elif k == -3:
            growths = [_rec("C2", _pure_cubic(2)), _rec("C3", _pure_cubic(3))]
        else:
            growths = [_rec("C2", _pure_cubic(2))]
    elif cm in (4, 16, 8):
        growths = []
    elif cm == 7:
        growths = [_rec("C14", _cubic(-1, -2, 1))] if k == -7 else []
    elif cm == 28:
        growths = [_rec("C14", _cubic(-1, -2, 1))] if k == 7 else []
    else:
        growths = [GrowthRecord(TorsionGroup.cyclic(2), CubicField(_FIXED_CUBICS[cm]))]
    growths = sorted(growths, key=GrowthRecord.sort_key)
    return GrowthReport(normal_form(inv), inv, torsion_over_Q_table(inv), tuple(growths))


# ---------------------------------------------------------------------------
# Cross-checking the two routes.
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Verdict:
    status: str  # "MATCH" or "MISMATCH"
    diff: dict | None
    engine: GrowthReport
    table: GrowthReport

    @property
    def matched(self):
        return self.status == "MATCH"


def _pairing_matches(engine_recs, table_recs):
    if len(engine_recs) != len(table_recs):
        return False
    remaining = list(table_recs)
    for rec in engine_recs:
        for i, cand in enumerate(remaining):
            if rec.group == cand.group and fields_isomorphic(rec.field, cand.field):
                remaining.pop(i)
                break
        else:
            return False
    return True


def _report_digest(report):
    return {
        "torsion_q": report.torsion_q.name,
        "growths": [
            {"group": rec.group.name, "field": rec.field.defining_poly.render_sparse()}
            for rec in report.growths
        ],
    }


def cross_check(inv, paranoid=False):
    """Run the engine and the closed form for (cm, k) and compare."""
    engine = growth_engine(normal_form(inv), paranoid=paranoid)
    table = growth_table(inv)
    ok = engine.torsion_q == table.torsion_q and _pairing_matches(
        engine.growths, table.growths
    )
    diff = None
    if not ok:
        diff = {"computed": _report_digest(engine), "expected": _report_digest(table)}
    return Verdict("MATCH" if ok else "MISMATCH", diff, engine, table)


def canonical_k_values(cm, bound):
    """All canonical twist parameters for the class with |k| <= bound."""
    return [
        k
        for k in range(-bound, bound + 1)
        if k != 0 and cmclass.is_canonical_k(cm, k)
    ]
