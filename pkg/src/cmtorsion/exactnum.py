"""Exact integer and rational building blocks.

Python ints are already arbitrary precision and ``fractions.Fraction``
gives exact rationals in canonical form (positive denominator, reduced),
so this module only adds what the rest of the package actually needs on
top of them: integer factorization, n-th-power-free parts of rationals,
and exact perfect-power detection.
"""

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
import math

__all__ = [
    "Factorization",
    "factor_integer",
    "power_free_part",
    "squarefree_part",
    "is_perfect_power",
    "is_probable_prime",
    "integer_nth_root",
]

# Trial division bound.  Everything the package feeds this module is far
# below the point where Pollard rho would struggle, but rho + Miller-Rabin
# keeps factor_integer correct for arbitrary input.
_TRIAL_BOUND = 100_000


def _sieve(limit):
    flags = bytearray([1]) * (limit + 1)
    flags[0:2] = b"\x00\x00"
    for i in range(2, math.isqrt(limit) + 1):
        if flags[i]:
            flags[i * i :: i] = bytearray(len(flags[i * i :: i]))
    return [i for i, f in enumerate(flags) if f]


_SMALL_PRIMES = _sieve(_TRIAL_BOUND)

# Witness set deterministic for n < 3.317e24 (Sorenson-Webster); inputs
# beyond that are still tested against the same fixed witnesses, which is
# a strong probable-prime check.
_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_probable_prime(n):
    """Miller-Rabin with fixed witnesses; deterministic below ~3.3e24."""
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    d = n - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in _MR_WITNESSES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _pollard_rho(n):
    """One prime-or-composite splitter for odd composite n with no small factors."""
    if n % 2 == 0:
        return 2
    # Brent's variant; deterministic parameter sweep keeps output reproducible.
    for c in range(1, 100):
        y, m, g, r, q = 2, 128, 1, 1, 1
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = math.gcd(q, n)
                k += m
            r *= 2
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if g != n:
            return g
    raise ArithmeticError(f"pollard rho failed to split {n}")


@lru_cache(maxsize=None)
def _factor_positive(n):
    """Sorted tuple of (prime, exponent) for n > 1."""
    pairs = {}
    for p in _SMALL_PRIMES:
        if p * p > n:
            break
        while n % p == 0:
            pairs[p] = pairs.get(p, 0) + 1
            n //= p
    stack = [n] if n > 1 else []
    while stack:
        m = stack.pop()
        if m == 1:
            continue
        if is_probable_prime(m):
            pairs[m] = pairs.get(m, 0) + 1
        else:
            d = _pollard_rho(m)
            stack.append(d)
            stack.append(m // d)
    return tuple(sorted(pairs.items()))


@dataclass(frozen=True)
class Factorization:
    """Signed prime factorization: sign * prod(p**e)."""

    sign: int
    pairs: tuple

    def __post_init__(self):
        if self.sign not in (1, -1):
            raise ValueError("sign must be +1 or -1")
        prev = 1
        for p, e in self.pairs:
            if p <= prev or e <= 0 or not is_probable_prime(p):
                raise ValueError("pairs must be increasing primes with positive exponents")
            prev = p

    def value(self):
        v = self.sign
        for p, e in self.pairs:
            v *= p**e
        return v


def factor_integer(n):
    """Factor a nonzero integer into a Factorization."""
    if n == 0:
        raise ValueError("cannot factor 0")
    sign = 1 if n > 0 else -1
    n = abs(n)
    pairs = _factor_positive(n) if n > 1 else ()
    return Factorization(sign, pairs)


def _as_fraction(q):
    if isinstance(q, Fraction):
        return q
    if isinstance(q, int):
        return Fraction(q)
    raise TypeError(f"expected int or Fraction, got {type(q).__name__}")


def power_free_part(q, n):
    """Canonical n-th-power-free integer representative of q in Q*/(Q*)^n.

    Every prime exponent of the result lies in [0, n-1] and q divided by
    the result is an n-th power of a rational.  The sign of q is kept
    (for odd n the sign is absorbed into the representative).
    """
    q = _as_fraction(q)
    if q == 0:
        raise ValueError("q must be nonzero")
    if n < 2:
        raise ValueError("n must be >= 2")
    sign = 1 if q > 0 else -1
    m = 1
    exps = {}
    for p, e in factor_integer(q.numerator).pairs:
        exps[p] = e
    for p, e in factor_integer(q.denominator).pairs:
        exps[p] = exps.get(p, 0) - e
    for p, e in exps.items():
        m *= p ** (e % n)
    return sign * m


def squarefree_part(q):
    """Squarefree integer d with q/d a rational square."""
    return power_free_part(q, 2)


def integer_nth_root(m, n):
    """Floor of the n-th root of m >= 0."""
    if m < 0:
        raise ValueError("m must be nonnegative")
    if m < 2:
        return m
    if n == 1:
        return m
    if n == 2:
        return math.isqrt(m)
    x = 1 << (m.bit_length() // n + 1)
    while True:
        y = ((n - 1) * x + m // x ** (n - 1)) // n
        if y >= x:
            return x
        x = y


def is_perfect_power(q, n):
    """Exact rational n-th root of q, or None.

    For even n the positive root is returned (and negative q has none);
    for odd n the root carries the sign of q.
    """
    q = _as_fraction(q)
    if n < 2:
        raise ValueError("n must be >= 2")
    if q == 0:
        return Fraction(0)
    if q < 0 and n % 2 == 0:
        return None
    num, den = abs(q.numerator), q.denominator
    rn = integer_nth_root(num, n)
    if rn**n != num:
        return None
    rd = integer_nth_root(den, n)
    if rd**n != den:
        return None
    root = Fraction(rn, rd)
    return -root if q < 0 else root
