"""Univariate polynomials with exact rational coefficients.

Coefficients are stored lowest degree first as a trimmed tuple of
Fractions; the zero polynomial is the empty tuple.  Everything here is
pure and immutable.
"""

from fractions import Fraction
from functools import reduce
import math

__all__ = [
    "Poly",
    "ExactDivisionError",
    "poly_gcd",
    "resultant",
    "discriminant",
    "rational_roots",
    "X",
]


class ExactDivisionError(ArithmeticError):
    """Raised when an exact polynomial division leaves a remainder."""


def _coeff(v):
    if isinstance(v, Fraction):
        return v
    if isinstance(v, int):
        return Fraction(v)
    raise TypeError(f"polynomial coefficients must be rational, got {type(v).__name__}")


class Poly:
    """Dense univariate polynomial over Q."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=()):
        cs = [_coeff(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    def __setattr__(self, name, value):
        raise AttributeError("Poly is immutable")

    @classmethod
    def constant(cls, c):
        return cls((c,))

    @classmethod
    def monomial(cls, c, e):
        return cls((0,) * e + (c,))

    # -- basic structure ------------------------------------------------

    @property
    def degree(self):
        return len(self.coeffs) - 1

    @property
    def is_zero(self):
        return not self.coeffs

    @property
    def lc(self):
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    @property
    def is_monic(self):
        return bool(self.coeffs) and self.coeffs[-1] == 1

    def __getitem__(self, i):
        if 0 <= i < len(self.coeffs):
            return self.coeffs[i]
        return Fraction(0)

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self == Poly((other,))
        return NotImplemented

    def __hash__(self):
        return hash(("Poly", self.coeffs))

    def __bool__(self):
        return bool(self.coeffs)

    # -- ring operations -------------------------------------------------

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return Poly(out)

    __radd__ = __add__

    def __neg__(self):
        return Poly(tuple(-c for c in self.coeffs))

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                return Poly()
            return Poly(tuple(c * other for c in self.coeffs))
        if not isinstance(other, Poly):
            return NotImplemented
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return Poly()
        out = [Fraction(0)] * (len(a) + len(b) - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    out[i + j] += ai * bj
        return Poly(out)

    __rmul__ = __mul__

    def __pow__(self, e):
        if e < 0:
            raise ValueError("negative polynomial power")
        result = Poly((1,))
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def divmod(self, other):
        """Quotient and remainder over Q; divisor must be nonzero."""
        other = self._coerce(other)
        if other is NotImplemented or other.is_zero:
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dq = len(rem) - len(other.coeffs)
        if dq < 0:
            return Poly(), self
        quo = [Fraction(0)] * (dq + 1)
        inv_lc = 1 / other.lc
        bc = other.coeffs
        for i in range(dq, -1, -1):
            c = rem[i + len(bc) - 1] * inv_lc
            if c:
                quo[i] = c
                for j, bj in enumerate(bc):
                    rem[i + j] -= c * bj
        return Poly(quo), Poly(rem)

    def __mod__(self, other):
        return self.divmod(other)[1]

    def exact_div(self, other):
        """Exact quotient; raises ExactDivisionError on nonzero remainder."""
        q, r = self.divmod(other)
        if not r.is_zero:
            raise ExactDivisionError(f"{other!r} does not divide {self!r}")
        return q

    def _coerce(self, other):
        if isinstance(other, Poly):
            return other
        if isinstance(other, (int, Fraction)):
            return Poly((other,))
        return NotImplemented

    # -- calculus and evaluation ------------------------------------------

    def derivative(self):
        return Poly(tuple(i * c for i, c in enumerate(self.coeffs) if i))

    def __call__(self, v):
        """Horner evaluation; works for any value supporting + and *."""
        if not self.coeffs:
            return v * 0
        acc = v * 0 + self.coeffs[-1]
        for c in reversed(self.coeffs[:-1]):
            acc = acc * v + c
        return acc

    def shift(self, c):
        """f(x + c) for rational c."""
        c = _coeff(c)
        out = Poly()
        lin = Poly((c, 1))
        for coeff in reversed(self.coeffs):
            out = out * lin + coeff
        return out

    def compose(self, inner):
        """f(inner(x))."""
        out = Poly()
        for coeff in reversed(self.coeffs):
            out = out * inner + coeff
        return out

    def scale_roots(self, c):
        """Monic-degree-preserving substitution: returns c^deg * f(x/c)."""
        c = _coeff(c)
        n = self.degree
        return Poly(tuple(self.coeffs[i] * c ** (n - i) for i in range(n + 1)))

    # -- normal forms ------------------------------------------------------

    def monic(self):
        if self.is_zero:
            raise ZeroDivisionError("zero polynomial has no monic form")
        if self.is_monic:
            return self
        inv = 1 / self.lc
        return Poly(tuple(c * inv for c in self.coeffs))

    def content_and_primitive(self):
        """Split f = content * F with F primitive over Z and lc(F) > 0."""
        if self.is_zero:
            return Fraction(0), self
        den = reduce(math.lcm, (c.denominator for c in self.coeffs), 1)
        ints = [int(c * den) for c in self.coeffs]
        g = reduce(math.gcd, (abs(c) for c in ints), 0)
        if ints[-1] < 0:
            g = -g
        content = Fraction(g, den)
        return content, Poly(tuple(c // g for c in ints))

    def int_coeffs(self):
        """Coefficient list as ints; raises if any coefficient is non-integral."""
        if any(c.denominator != 1 for c in self.coeffs):
            raise ValueError("polynomial has non-integer coefficients")
        return [int(c) for c in self.coeffs]

    # -- rendering -----------------------------------------------------------

    def render_sparse(self, var="x"):
        """Human form like 'x^3 - 3*x - 1'."""
        if self.is_zero:
            return "0"
        parts = []
        for i in range(self.degree, -1, -1):
            c = self.coeffs[i]
            if c == 0:
                continue
            sign = "-" if c < 0 else "+"
            mag = abs(c)
            if i == 0:
                body = str(mag)
            else:
                xpow = var if i == 1 else f"{var}^{i}"
                body = xpow if mag == 1 else f"{mag}*{xpow}"
            parts.append((sign, body))
        sign0, body0 = parts[0]
        text = body0 if sign0 == "+" else f"-{body0}"
        for sign, body in parts[1:]:
            text += f" {sign} {body}"
        return text

    def dense_strings(self):
        """Coefficients lowest degree first as 'num/den' strings."""
        return [f"{c.numerator}/{c.denominator}" for c in self.coeffs]

    @classmethod
    def from_dense_strings(cls, items):
        return cls(tuple(Fraction(s) for s in items))

    def __repr__(self):
        return f"Poly({self.render_sparse()})"

    def sort_key(self):
        return (self.degree, self.coeffs)


X = Poly((0, 1))


def _pseudo_rem(a, b):
    """Pseudo-remainder of integer coefficient lists (low->high)."""
    a = list(a)
    db, lb = len(b) - 1, b[-1]
    while len(a) - 1 >= db and a:
        da = len(a) - 1
        la = a[-1]
        a = [c * lb for c in a]
        for j in range(len(b)):
            a[da - db + j] -= la * b[j]
        while a and a[-1] == 0:
            a.pop()
    return a


def _int_primitive(cs):
    g = reduce(math.gcd, (abs(c) for c in cs), 0)
    return [c // g for c in cs] if g else list(cs)


def poly_gcd(a, b):
    """Monic gcd over Q, computed by a primitive PRS over Z."""
    if a.is_zero and b.is_zero:
        raise ValueError("gcd of two zero polynomials is undefined")
    if a.is_zero:
        return b.monic()
    if b.is_zero:
        return a.monic()
    _, fa = a.content_and_primitive()
    _, fb = b.content_and_primitive()
    u, v = fa.int_coeffs(), fb.int_coeffs()
    if len(u) < len(v):
        u, v = v, u
    while v:
        r = _pseudo_rem(u, v)
        u, v = v, _int_primitive(r)
    return Poly(u).monic()


def resultant(f, g):
    """Resultant over Q via the Euclidean recursion."""
    if f.is_zero or g.is_zero:
        return Fraction(0)
    m, n = f.degree, g.degree
    if n == 0:
        return g.lc**m
    if m == 0:
        return f.lc**n
    r = f % g
    if r.is_zero:
        return Fraction(0)
    sign = -1 if (m * n) % 2 else 1
    return sign * g.lc ** (m - r.degree) * resultant(g, r)


def discriminant(f):
    """Discriminant via resultant(f, f'); requires degree >= 2."""
    n = f.degree
    if n < 2:
        raise ValueError("discriminant requires degree >= 2")
    sign = -1 if (n * (n - 1) // 2) % 2 else 1
    return sign * resultant(f, f.derivative()) / f.lc


def rational_roots(f):
    """All rational roots of f with multiplicity, ascending."""
    if f.is_zero:
        raise ValueError("zero polynomial")
    from . import polyfactor

    roots = []
    for factor, mult in polyfactor.linear_factors(f):
        roots.extend([-factor[0]] * mult)
    return sorted(roots)
