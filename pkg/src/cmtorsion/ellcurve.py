"""Short Weierstrass curves y^2 = x^3 + a*x + b over Q and cubic fields.

Division polynomials follow the convention that even-index polynomials
are stored as their x-part after stripping the 2y factor, with the
2-division polynomial defined as x^3 + a*x + b itself.  The primitive
n-division polynomial divides out every primitive m-division polynomial
for proper divisors m >= 2, so its roots are exactly the x-coordinates
of points of exact order n.

Curves over a cubic field only arise here as base changes of curves over
Q, so coefficients are always rational; points may have coordinates in
the extension.
"""

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
import math

from .errors import InternalConsistencyError
from .numberfield import CubicField, FieldElem, is_square, _cubic_roots_in_field
from .exactnum import is_perfect_power
from .poly import Poly
from . import polyfactor

__all__ = [
    "TorsionGroup",
    "EllipticCurve",
    "Point",
    "SingularCurveError",
    "TorsionData",
    "REALIZABLE_GROUPS",
    "TORSION_ORDER_CANDIDATES",
    "quadratic_twist",
    "division_polynomial",
    "primitive_division_polynomial",
    "torsion_over_base",
    "point_add",
    "point_mul",
]


class SingularCurveError(ValueError):
    """The Weierstrass equation has vanishing discriminant."""


@dataclass(frozen=True, order=True)
class TorsionGroup:
    """Abelian group C_{d1} x C_{d2} with d1 | d2; cyclic groups have d1 = 1."""

    d1: int
    d2: int

    def __post_init__(self):
        if self.d1 < 1 or self.d2 < 1 or self.d2 % self.d1:
            raise ValueError("invalid invariant factors")

    @classmethod
    def cyclic(cls, n):
        return cls(1, n)

    @classmethod
    def from_name(cls, name):
        if "x" in name:
            left, right = name.split("x")
            return cls(int(left[1:]), int(right[1:]))
        return cls(1, int(name[1:]))

    @property
    def order(self):
        return self.d1 * self.d2

    @property
    def name(self):
        if self.d1 == 1:
            return f"C{self.d2}"
        return f"C{self.d1}xC{self.d2}"

    def embeds_in(self, other):
        return other.d1 % self.d1 == 0 and other.d2 % self.d2 == 0

    def __str__(self):
        return self.name


# Torsion groups that occur for CM elliptic curves over Q or over a cubic
# field (classical classification: the degree-1 CM list plus C9 and C14).
REALIZABLE_GROUPS = frozenset(
    [
        TorsionGroup.cyclic(1),
        TorsionGroup.cyclic(2),
        TorsionGroup.cyclic(3),
        TorsionGroup.cyclic(4),
        TorsionGroup.cyclic(6),
        TorsionGroup.cyclic(9),
        TorsionGroup.cyclic(14),
        TorsionGroup(2, 2),
    ]
)

# Orders of points that can contribute to those groups beyond 2-torsion
# handled separately; the classification above makes larger orders
# provably impossible, so the search stops here.
TORSION_ORDER_CANDIDATES = (2, 3, 4, 7, 9)


def _fr(v):
    if isinstance(v, Fraction):
        return v
    if isinstance(v, int):
        return Fraction(v)
    raise TypeError(f"expected rational coefficient, got {type(v).__name__}")


class EllipticCurve:
    """y^2 = x^3 + a*x + b with rational a, b, optionally base-changed."""

    __slots__ = ("a", "b", "field")

    def __init__(self, a, b, field=None):
        a, b = _fr(a), _fr(b)
        if field is not None and not isinstance(field, CubicField):
            raise TypeError("field must be a CubicField or None")
        if 4 * a**3 + 27 * b**2 == 0:
            raise SingularCurveError(f"curve y^2=x^3+({a})x+({b}) is singular")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "field", field)

    def __setattr__(self, name, value):
        raise AttributeError("EllipticCurve is immutable")

    @property
    def f_poly(self):
        return Poly((self.b, self.a, 0, 1))

    @property
    def disc(self):
        return -16 * (4 * self.a**3 + 27 * self.b**2)

    @property
    def j_invariant(self):
        return 6912 * self.a**3 / (4 * self.a**3 + 27 * self.b**2)

    def base_change(self, field):
        return EllipticCurve(self.a, self.b, field)

    def over_q(self):
        return EllipticCurve(self.a, self.b) if self.field is not None else self

    def _coerce(self, v):
        if self.field is None:
            return _fr(v)
        if isinstance(v, FieldElem):
            if v.field != self.field:
                raise ValueError("coordinate from a different field")
            return v
        return self.field.embed(_fr(v))

    def point(self, x, y):
        return Point(self, self._coerce(x), self._coerce(y))

    def infinity(self):
        return Point(self, None, None)

    def __eq__(self, other):
        return (
            isinstance(other, EllipticCurve)
            and self.a == other.a
            and self.b == other.b
            and self.field == other.field
        )

    def __hash__(self):
        return hash(("EllipticCurve", self.a, self.b, self.field))

    def __repr__(self):
        base = "Q" if self.field is None else repr(self.field)
        return f"EllipticCurve(y^2 = {self.f_poly.render_sparse()} over {base})"


class Point:
    """A point on an elliptic curve, validated on construction."""

    __slots__ = ("curve", "x", "y")

    def __init__(self, curve, x, y):
        if (x is None) != (y is None):
            raise ValueError("both coordinates or neither")
        if x is not None:
            lhs = y * y
            rhs = x * x * x + curve.a * x + curve.b
            if lhs != rhs:
                raise ValueError("point is not on the curve")
        object.__setattr__(self, "curve", curve)
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)

    def __setattr__(self, name, value):
        raise AttributeError("Point is immutable")

    @property
    def is_infinity(self):
        return self.x is None

    def __neg__(self):
        if self.is_infinity:
            return self
        return Point(self.curve, self.x, -self.y)

    def __eq__(self, other):
        return (
            isinstance(other, Point)
            and self.curve == other.curve
            and self.x == other.x
            and self.y == other.y
        )

    def __hash__(self):
        return hash(("Point", self.curve, self.x, self.y))

    def __add__(self, other):
        return point_add(self, other)

    def __rmul__(self, n):
        return point_mul(n, self)

    def __repr__(self):
        if self.is_infinity:
            return "Point(infinity)"
        return f"Point({self.x!r}, {self.y!r})"


def point_add(p, q):
    """Chord-and-tangent addition."""
    if p.curve != q.curve:
        raise ValueError("points on different curves")
    if p.is_infinity:
        return q
    if q.is_infinity:
        return p
    if p.x == q.x:
        if p.y == -q.y:
            return p.curve.infinity()
        # doubling; y != 0 here since y == -y was caught above
        slope = (3 * p.x * p.x + p.curve.a) / (2 * p.y)
    else:
        slope = (q.y - p.y) / (q.x - p.x)
    x3 = slope * slope - p.x - q.x
    y3 = slope * (p.x - x3) - p.y
    return Point(p.curve, x3, y3)


def point_mul(n, p):
    """n*P by double-and-add; negative n negates."""
    if n < 0:
        return point_mul(-n, -p)
    result = p.curve.infinity()
    addend = p
    while n:
        if n & 1:
            result = point_add(result, addend)
        addend = point_add(addend, addend)
        n >>= 1
    return result


def quadratic_twist(curve, d):
    """The d-quadratic twist y^2 = x^3 + d^2*a*x + d^3*b (over Q)."""
    if curve.field is not None:
        raise ValueError("twists are only taken over Q here")
    if d == 0:
        raise ValueError("twist parameter must be nonzero")
    return EllipticCurve(d * d * curve.a, d**3 * curve.b)


# ---------------------------------------------------------------------------
# Division polynomials.
# ---------------------------------------------------------------------------


@lru_cache(maxsize=None)
def _h_poly(a, b, n):
    """x-part h_n: psi_n = h_n for odd n, psi_n = 2y * h_n for even n."""
    if n == 0:
        return Poly()
    if n in (1, 2):
        return Poly((1,))
    if n == 3:
        return Poly((-(a * a), 12 * b, 6 * a, 0, 3))
    if n == 4:
        return Poly(
            (
                -2 * (8 * b * b + a**3),
                -8 * a * b,
                -10 * a * a,
                40 * b,
                10 * a,
                0,
                2,
            )
        )
    m = n // 2
    if n % 2:
        f = Poly((b, a, 0, 1))
        lhs = _h_poly(a, b, m + 2) * _h_poly(a, b, m) ** 3
        rhs = _h_poly(a, b, m - 1) * _h_poly(a, b, m + 1) ** 3
        if m % 2 == 0:
            return 16 * f * f * lhs - rhs
        return lhs - 16 * f * f * rhs
    return _h_poly(a, b, m) * (
        _h_poly(a, b, m + 2) * _h_poly(a, b, m - 1) ** 2
        - _h_poly(a, b, m - 2) * _h_poly(a, b, m + 1) ** 2
    )


def division_polynomial(curve, n):
    """The n-division polynomial as a polynomial in x.

    For odd n this is the classical psi_n; for even n the 2y factor is
    stripped; n = 2 returns x^3 + a*x + b, whose roots are the 2-torsion
    x-coordinates.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if n == 2:
        return curve.f_poly
    return _h_poly(curve.a, curve.b, n)


def _primitive_degree(n):
    if n == 2:
        return 3
    d = n * n
    for p in {p for p, _ in _prime_factors(n)}:
        d = d // (p * p) * (p * p - 1)
    return d // 2


def _prime_factors(n):
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            e = 0
            while n % d == 0:
                n //= d
                e += 1
            out.append((d, e))
        d += 1
    if n > 1:
        out.append((n, 1))
    return out


@lru_cache(maxsize=None)
def _primitive_psi(a, b, n):
    f = Poly((b, a, 0, 1))
    if n == 2:
        return f
    full = _h_poly(a, b, n)
    if n % 2 == 0:
        full = f * full  # restore the 2-torsion roots carried by the y factor
    for m in range(2, n):
        if n % m == 0:
            full = full.exact_div(_primitive_psi(a, b, m))
    if full.degree != _primitive_degree(n):
        raise InternalConsistencyError(
            f"primitive {n}-division polynomial has degree {full.degree}"
        )
    return full


def primitive_division_polynomial(curve, n):
    """Division polynomial whose roots are x-coordinates of exact order n."""
    if n < 2:
        raise ValueError("n must be >= 2")
    return _primitive_psi(curve.a, curve.b, n)


# ---------------------------------------------------------------------------
# Torsion over Q or a cubic field.
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TorsionData:
    group: TorsionGroup
    generators: tuple


def _integral_model(a, b):
    """(A, B) integral with y^2 = x^3 + A*x + B isomorphic to the input."""
    u = math.lcm(a.denominator, b.denominator)
    return int(a * u**4), int(b * u**6)


def _count_points(A, B, p):
    """#E(F_p) by direct character sum (p odd, good reduction)."""
    n = p + 1
    half = (p - 1) // 2
    for x in range(p):
        v = (x * x * x + A * x + B) % p
        if v == 0:
            continue
        n += 1 if pow(v, half, p) == 1 else -1
    return n


_FILTER_PRIMES = (5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
_FILTER_COUNT = 4


@lru_cache(maxsize=None)
def _reduction_counts(a, b):
    """[(p, N1, N3)] over a few good primes of the integral model."""
    A, B = _integral_model(a, b)
    disc = -16 * (4 * A**3 + 27 * B**2)
    out = []
    for p in _FILTER_PRIMES:
        if len(out) >= _FILTER_COUNT:
            break
        if disc % p == 0:
            continue
        n1 = _count_points(A, B, p)
        t = p + 1 - n1
        n3 = p**3 + 1 - (t**3 - 3 * p * t)
        out.append((p, n1, n3))
    return tuple(out)


def _order_possible(curve, m, cubic):
    """False only when reduction counting rules out m-torsion.

    Over any cubic field some prime above p has residue degree 1 or 3, and
    torsion injects into the reduction there, so m must divide #E(F_p) or
    #E(F_p^3) for every good p >= 5.
    """
    for p, n1, n3 in _reduction_counts(curve.a, curve.b):
        if n1 % m == 0:
            continue
        if cubic and n3 % m == 0:
            continue
        return False
    return True


def _rational_roots_distinct(f):
    return [-g[0] for g in polyfactor.factors_up_to_degree(f, 1)]


def _roots_in(f, field):
    """Distinct roots of f over Q (field None) or in the cubic field.

    Only irreducible factors of degree 1 or 3 can have roots in a cubic
    field, so the bounded factor search suffices.
    """
    if field is None:
        return _rational_roots_distinct(f)
    roots = [field.embed(r) for r in _rational_roots_distinct(f)]
    for g in polyfactor.factors_up_to_degree(f, 3):
        if g.degree == 3:
            roots.extend(_cubic_roots_in_field(g, field))
    return roots


def _sqrt_in(v, field):
    """Square root of v in Q (field None) or in the cubic field, or None."""
    if field is None:
        return is_perfect_power(v, 2)
    return is_square(v)


def torsion_over_base(curve, field=None):
    """Exact torsion subgroup of E over Q or over a cubic field.

    Searches the orders in TORSION_ORDER_CANDIDATES via primitive division
    polynomials, after a reduction-count filter discards impossible
    orders; returns the group together with generating points.
    """
    if field is None:
        field = curve.field
    base = curve if curve.field == field else curve.base_change(field)
    cubic = field is not None
    f = curve.f_poly

    two_roots = _roots_in(f, field)
    has2, full2 = len(two_roots) >= 1, len(two_roots) == 3
    if len(two_roots) == 2:
        raise InternalConsistencyError("cubic with exactly two roots in a field")

    points = {}
    for m in (3, 4, 7, 9):
        if m == 4 and not has2:
            continue  # an order-4 point would double to 2-torsion in the field
        if m == 9 and 3 not in points:
            continue  # an order-9 point would triple to order 3 in the field
        if not _order_possible(curve, m, cubic):
            continue
        prim = primitive_division_polynomial(curve, m)
        for alpha in _roots_in(prim, field):
            v = f(alpha)
            if v == 0:
                raise InternalConsistencyError("order-m root collides with 2-torsion")
            w = _sqrt_in(v, field)
            if w is not None:
                points[m] = base.point(alpha, w)
                break

    odd = 9 if 9 in points else (3 if 3 in points else 1)
    if 7 in points:
        odd *= 7
    even = 4 if 4 in points else (2 if has2 else 1)

    if full2:
        group = TorsionGroup(2, (4 if 4 in points else 2) * odd)
    else:
        group = TorsionGroup.cyclic(even * odd)
    if group not in REALIZABLE_GROUPS:
        raise InternalConsistencyError(f"computed unrealizable torsion {group.name}")

    # assemble generators: combine coprime-order points into one generator
    gen = base.infinity()
    if 4 in points:
        gen = point_add(gen, points[4])
    elif has2:
        gen = point_add(gen, base.point(two_roots[0], 0))
    for m in (9, 3, 7):
        if m in points and (m != 3 or 9 not in points):
            gen = point_add(gen, points[m])
    gens = []
    if full2:
        # a second 2-torsion point, independent of the one inside <gen>
        half = point_mul(group.d2 // 2, gen)
        other = next(base.point(r, 0) for r in two_roots if base.point(r, 0) != half)
        gens = [other, gen]
    elif not gen.is_infinity:
        gens = [gen]

    expected = [group.d1, group.d2] if full2 else [group.d2]
    for g, n in zip(gens, expected):
        if n > 1 and not _has_exact_order(g, n):
            raise InternalConsistencyError("generator has wrong order")
    return TorsionData(group, tuple(gens))


def _has_exact_order(p, n):
    if not point_mul(n, p).is_infinity:
        return False
    for q in {q for q, _ in _prime_factors(n)}:
        if point_mul(n // q, p).is_infinity:
            return False
    return True
