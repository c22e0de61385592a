"""Cubic number fields K = Q[x]/(g) and their element arithmetic.

Elements are coordinate triples over the power basis 1, a, a^2 where a is
the image of x.  Squareness testing and root finding over K both reduce
to factorization over Q through Trager's norm construction; a modular
Euler-criterion pre-filter short-circuits most non-squares before the
exact machinery runs.
"""

from fractions import Fraction
from functools import lru_cache
import math

from .errors import InternalConsistencyError
from .exactnum import is_perfect_power, is_probable_prime, squarefree_part
from .poly import Poly, discriminant, resultant
from . import polyfactor

__all__ = [
    "CubicField",
    "FieldElem",
    "norm",
    "is_square",
    "twist_witness",
    "roots_in_field",
    "galois_cubic_test",
    "fields_isomorphic",
]


def _fr(v):
    if isinstance(v, Fraction):
        return v
    if isinstance(v, int):
        return Fraction(v)
    raise TypeError(f"expected rational, got {type(v).__name__}")


class CubicField:
    """Q[x]/(g) for a monic irreducible cubic g."""

    __slots__ = ("defining_poly", "_r3", "_r4", "_disc")

    def __init__(self, defining_poly):
        g = defining_poly
        if not isinstance(g, Poly) or g.degree != 3 or not g.is_monic:
            raise ValueError("defining polynomial must be a monic cubic")
        # a cubic is irreducible over Q exactly when it has no rational root
        if polyfactor.linear_factors(g):
            raise ValueError(f"{g!r} is reducible over Q")
        object.__setattr__(self, "defining_poly", g)
        g0, g1, g2 = g[0], g[1], g[2]
        # x^3 and x^4 reduced mod g, used by element multiplication
        object.__setattr__(self, "_r3", (-g0, -g1, -g2))
        object.__setattr__(self, "_r4", (g2 * g0, g2 * g1 - g0, g2 * g2 - g1))
        object.__setattr__(self, "_disc", None)

    def __setattr__(self, name, value):
        raise AttributeError("CubicField is immutable")

    def elem(self, c0, c1=0, c2=0):
        return FieldElem(self, (_fr(c0), _fr(c1), _fr(c2)))

    def embed(self, q):
        return self.elem(q)

    @property
    def gen(self):
        return self.elem(0, 1)

    @property
    def zero(self):
        return self.elem(0)

    @property
    def one(self):
        return self.elem(1)

    def from_poly(self, p):
        return FieldElem(self, tuple((p % self.defining_poly)[i] for i in range(3)))

    @property
    def disc(self):
        if self._disc is None:
            object.__setattr__(self, "_disc", discriminant(self.defining_poly))
        return self._disc

    @property
    def disc_sqf(self):
        return squarefree_part(self.disc)

    def __eq__(self, other):
        return isinstance(other, CubicField) and self.defining_poly == other.defining_poly

    def __hash__(self):
        return hash(("CubicField", self.defining_poly))

    def __repr__(self):
        return f"CubicField({self.defining_poly.render_sparse()})"


class FieldElem:
    """c0 + c1*a + c2*a^2 in a fixed cubic field."""

    __slots__ = ("field", "coords")

    def __init__(self, field, coords):
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "coords", tuple(coords))

    def __setattr__(self, name, value):
        raise AttributeError("FieldElem is immutable")

    def _coerce(self, other):
        if isinstance(other, FieldElem):
            if other.field != self.field:
                raise ValueError("elements of different cubic fields")
            return other
        if isinstance(other, (int, Fraction)):
            return self.field.embed(other)
        return None

    @property
    def is_zero(self):
        return all(c == 0 for c in self.coords)

    @property
    def is_rational(self):
        return self.coords[1] == 0 and self.coords[2] == 0

    def rational_value(self):
        if not self.is_rational:
            raise ValueError("element is not rational")
        return self.coords[0]

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        a, b = self.coords, o.coords
        return FieldElem(self.field, (a[0] + b[0], a[1] + b[1], a[2] + b[2]))

    __radd__ = __add__

    def __neg__(self):
        return FieldElem(self.field, tuple(-c for c in self.coords))

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        a, b = self.coords, o.coords
        return FieldElem(self.field, (a[0] - b[0], a[1] - b[1], a[2] - b[2]))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        a0, a1, a2 = self.coords
        b0, b1, b2 = o.coords
        c0 = a0 * b0
        c1 = a0 * b1 + a1 * b0
        c2 = a0 * b2 + a1 * b1 + a2 * b0
        c3 = a1 * b2 + a2 * b1
        c4 = a2 * b2
        r3, r4 = self.field._r3, self.field._r4
        return FieldElem(
            self.field,
            (
                c0 + c3 * r3[0] + c4 * r4[0],
                c1 + c3 * r3[1] + c4 * r4[1],
                c2 + c3 * r3[2] + c4 * r4[2],
            ),
        )

    __rmul__ = __mul__

    def inverse(self):
        if self.is_zero:
            raise ZeroDivisionError("inverse of zero field element")
        g = self.field.defining_poly
        s, _t, d = _poly_gcdex(self.to_poly(), g)
        if d.degree != 0:
            raise InternalConsistencyError("defining polynomial not coprime to element")
        return self.field.from_poly(s * (1 / d[0]))

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, e):
        if e < 0:
            return self.inverse() ** (-e)
        result = self.field.one
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.is_rational and self.coords[0] == other
        if isinstance(other, FieldElem):
            return self.field == other.field and self.coords == other.coords
        return NotImplemented

    def __hash__(self):
        return hash(("FieldElem", self.field.defining_poly, self.coords))

    def to_poly(self):
        return Poly(self.coords)

    def norm(self):
        """Product of the conjugates (resultant with the defining cubic)."""
        if self.is_zero:
            return Fraction(0)
        return resultant(self.field.defining_poly, self.to_poly())

    def dense_strings(self):
        return [f"{c.numerator}/{c.denominator}" for c in self.coords]

    def __repr__(self):
        return f"FieldElem({Poly(self.coords).render_sparse('a')})"


def _poly_gcdex(a, b):
    """Extended gcd over Q[x]: (s, t, g) with s*a + t*b = g."""
    s0, s1 = Poly((1,)), Poly()
    t0, t1 = Poly(), Poly((1,))
    while not b.is_zero:
        q, r = a.divmod(b)
        a, b = b, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    return s0, t0, a


def norm(e):
    return e.norm()


# ---------------------------------------------------------------------------
# K[y] arithmetic for the Trager back-mapping gcds.
# ---------------------------------------------------------------------------


def _kp_trim(a):
    while a and a[-1].is_zero:
        a.pop()
    return a


def _kp_mul(a, b, K):
    if not a or not b:
        return []
    out = [K.zero for _ in range(len(a) + len(b) - 1)]
    for i, ai in enumerate(a):
        if not ai.is_zero:
            for j, bj in enumerate(b):
                out[i + j] = out[i + j] + ai * bj
    return _kp_trim(out)


def _kp_divmod(a, b, K):
    if not b:
        raise ZeroDivisionError("K[y] division by zero")
    a = list(a)
    db = len(b) - 1
    if len(a) - 1 < db:
        return [], _kp_trim(a)
    inv = b[-1].inverse()
    quo = [K.zero] * (len(a) - db)
    for i in range(len(quo) - 1, -1, -1):
        c = a[i + db] * inv
        if not c.is_zero:
            quo[i] = c
            for j in range(db + 1):
                a[i + j] = a[i + j] - c * b[j]
    return quo, _kp_trim(a)


def _kp_gcd(a, b, K):
    a, b = list(a), list(b)
    while b:
        a, b = b, _kp_divmod(a, b, K)[1]
    if a:
        inv = a[-1].inverse()
        a = [c * inv for c in a]
    return a


def _kp_from_qpoly(f, K):
    return _kp_trim([K.embed(c) for c in f.coeffs])


def _kp_shift(f, K, shift):
    """f(y + shift) for f over Q and shift in K."""
    out = []
    lin = [shift, K.one]
    for c in reversed(f.coeffs):
        out = _kp_mul(out, lin, K)
        if out:
            out[0] = out[0] + c
        elif c != 0:
            out = [K.embed(c)]
        out = _kp_trim(out)
    return out


# ---------------------------------------------------------------------------
# Norm polynomials via evaluation and interpolation.
# ---------------------------------------------------------------------------


def _lagrange(points):
    """Poly through (x, y) pairs with distinct x."""
    total = Poly()
    for i, (xi, yi) in enumerate(points):
        if yi == 0:
            continue
        num = Poly((1,))
        den = Fraction(1)
        for j, (xj, _) in enumerate(points):
            if i != j:
                num = num * Poly((-xj, 1))
                den *= xi - xj
        total = total + num * (yi / den)
    return total


def _norm_poly(theta_coeff_polys, K, degree):
    """Res_theta(g, F) where F has theta-coefficients in Q[Y].

    The leading theta-coefficient must be a nonzero constant so every
    sample point preserves the theta-degree.
    """
    g = K.defining_poly
    lead = theta_coeff_polys[-1]
    if lead.degree > 0:
        raise InternalConsistencyError("norm polynomial needs constant theta-lc")
    samples = []
    y0 = 0
    while len(samples) < degree + 1:
        theta_poly = Poly(tuple(cp(Fraction(y0)) for cp in theta_coeff_polys))
        samples.append((Fraction(y0), resultant(g, theta_poly)))
        y0 = -y0 + (1 if y0 <= 0 else 0)
    return _lagrange(samples)


def _is_squarefree_q(f):
    from .poly import poly_gcd

    return poly_gcd(f, f.derivative()).degree == 0


def _trager_linear_roots(f, K):
    """Roots in K of f (over Q, squarefree, degree >= 1) via Trager."""
    n = f.degree
    if n == 1:
        return [K.embed(-f[0] / f.lc)]
    roots = []
    for s in range(0, 12):
        # f(Y - s*theta) as a polynomial in theta with Q[Y] coefficients:
        # a*(Y - s*theta)^i contributes a*C(i,j)*(-s)^j*Y^(i-j) to theta^j.
        theta_coeffs = [Poly() for _ in range(n + 1)]
        for i, a in enumerate(f.coeffs):
            if a == 0:
                continue
            for j in range(i + 1):
                term = a * math.comb(i, j) * Fraction(-s) ** j
                theta_coeffs[j] = theta_coeffs[j] + Poly.monomial(term, i - j)
        while len(theta_coeffs) > 1 and theta_coeffs[-1].is_zero:
            theta_coeffs.pop()
        if theta_coeffs[-1].degree > 0:
            continue  # needs a different shift
        N = _norm_poly(theta_coeffs, K, 3 * n)
        if N.is_zero or not _is_squarefree_q(N):
            continue
        fk = _kp_from_qpoly(f, K)
        shift_elem = K.gen * s
        for q, _m in polyfactor.factor_poly(N).factors:
            qk = _kp_shift(q, K, shift_elem)
            d = _kp_gcd(fk, qk, K)
            if len(d) == 2:  # monic linear: y + d0
                roots.append(-d[0])
        for r in roots:
            if not f(r).is_zero:
                raise InternalConsistencyError("Trager produced a non-root")
        return roots
    raise InternalConsistencyError("no squarefree shift found for Trager norms")


@lru_cache(maxsize=None)
def _cubic_roots_in_field(h, K):
    """Roots in K of a monic irreducible cubic h over Q."""
    if squarefree_part(discriminant(h)) != K.disc_sqf:
        return ()
    return tuple(_trager_linear_roots(h, K))


def roots_in_field(f, K):
    """All distinct roots of f (over Q) that lie in K."""
    if f.is_zero:
        raise ValueError("zero polynomial")
    roots = []
    for h, _mult in polyfactor.factor_poly(f).factors:
        if h.degree == 1:
            roots.append(K.embed(-h[0]))
        elif h.degree == 3:
            roots.extend(_cubic_roots_in_field(h, K))
        # irreducible factors of degree 2 or > 3 have no roots in a cubic field
    return sorted(roots, key=lambda r: r.coords)


# ---------------------------------------------------------------------------
# Squareness testing.
# ---------------------------------------------------------------------------

_EULER_MAX_PRIMES = 20


def _euler_nonsquare(e):
    """True if a residue-field Euler test proves e is not a square."""
    g = e.field.defining_poly
    try:
        gz = g.int_coeffs()
    except ValueError:
        return False
    den = 1
    for c in e.coords:
        den = den * c.denominator // math.gcd(den, c.denominator)
    scaled = [int(c * den * den) for c in e.coords]  # e * den^2, square-compatible
    tried = 0
    p = 3
    while tried < _EULER_MAX_PRIMES and p < 500:
        if is_probable_prime(p) and gz[3] % p != 0:
            gp = [c % p for c in gz]
            # cubic irreducible mod p iff rootless mod p
            has_root = any(
                (((x * gp[3] + gp[2]) * x + gp[1]) * x + gp[0]) % p == 0 for x in range(p)
            )
            ep = [c % p for c in scaled]
            if not has_root and any(ep):
                tried += 1
                val = polyfactor._gf_pow_mod(
                    polyfactor._gf_trim(list(ep)), (p**3 - 1) // 2, gp, p
                )
                if val == [p - 1]:
                    return True
                if val != [1]:
                    raise InternalConsistencyError("Euler criterion returned non-unit")
        p += 2
    return False


def _trager_sqrt(e):
    """Exact square root of e in its field via a norm-polynomial factorization."""
    K = e.field
    e0, e1, e2 = e.coords
    for s in range(0, 12):
        s2 = Fraction(s) ** 2
        theta_coeffs = [
            Poly((-e0, 0, 1)),  # Y^2 - e0
            Poly((-e1, -2 * s)),  # -2sY - e1
            Poly((s2 - e2,)),  # s^2 - e2
        ]
        while len(theta_coeffs) > 1 and theta_coeffs[-1].is_zero:
            theta_coeffs.pop()
        if len(theta_coeffs) == 1:
            raise InternalConsistencyError("rational element reached the Trager path")
        if theta_coeffs[-1].degree > 0:
            continue
        N = _norm_poly(theta_coeffs, K, 6)
        if N.is_zero or not _is_squarefree_q(N):
            continue
        fk = [-e, K.zero, K.one]  # y^2 - e
        shift_elem = K.gen * s
        for q, _m in polyfactor.factor_poly(N).factors:
            qk = _kp_shift(q, K, shift_elem)
            d = _kp_gcd(fk, qk, K)
            if len(d) == 2:
                w = -d[0]
                if w * w == e:
                    return w
                raise InternalConsistencyError("Trager witness fails to square back")
        return None
    raise InternalConsistencyError("no squarefree shift found for square test")


def is_square(e):
    """Witness w with w*w == e, or None.  The witness is re-verified."""
    if e.is_zero:
        return e.field.zero
    if e.is_rational:
        r = is_perfect_power(e.coords[0], 2)
        # a rational is a square in a cubic field iff it is a square in Q
        return e.field.embed(r) if r is not None else None
    if is_perfect_power(e.norm(), 2) is None:
        return None
    if _euler_nonsquare(e):
        return None
    return _trager_sqrt(e)


def twist_witness(e):
    """(d, w) with d squarefree, w in K, and e == d * w^2.

    d is forced: it must be the squarefree part of the norm of e.  For
    inputs arising as f(alpha) with alpha a division-polynomial root the
    decomposition always exists; anything else is an internal error.
    """
    if e.is_zero:
        raise ValueError("zero element has no twist decomposition")
    d = squarefree_part(e.norm())
    w = is_square(e / d)
    if w is None:
        raise InternalConsistencyError(f"no squarefree twist for {e!r}")
    return d, w


def galois_cubic_test(g):
    """True iff the cubic field of monic irreducible g is Galois over Q."""
    if g.degree != 3 or not g.is_monic:
        raise ValueError("expected a monic cubic")
    if polyfactor.linear_factors(g):
        raise ValueError("cubic must be irreducible")
    return is_perfect_power(discriminant(g), 2) is not None


@lru_cache(maxsize=None)
def fields_isomorphic(K1, K2):
    """True iff the defining cubic of K2 has a root in K1."""
    if K1 == K2:
        return True
    if K1.disc_sqf != K2.disc_sqf:
        return False
    return bool(_cubic_roots_in_field(K2.defining_poly, K1))
