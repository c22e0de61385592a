"""Complete factorization of univariate polynomials over Q.

Pipeline: squarefree decomposition (Yun), factorization modulo a small
prime (distinct-degree + Cantor-Zassenhaus equal-degree splitting with a
fixed-seed RNG), quadratic Hensel lifting past the Landau-Mignotte bound,
and factor recombination by subset search.

A degree-bounded variant of the same pipeline serves the callers that
only need factors up to a given degree (rational roots, cubic factors of
division polynomials); it enumerates only subsets whose modular degrees
can sum to a requested degree, which is dramatically cheaper than a full
factorization of a large polynomial.
"""

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache, reduce
from itertools import combinations
import math
import os
import random

from .errors import InternalConsistencyError
from .exactnum import is_probable_prime
from .poly import Poly, poly_gcd

__all__ = [
    "FactorList",
    "UnsuitablePrimeError",
    "factor_poly",
    "irreducible_factors_of_degree",
    "factors_up_to_degree",
    "linear_factors",
    "factor_degrees_mod_p",
    "enable_factor_log",
    "disable_factor_log",
    "get_factor_log",
]

_DEFAULT_SEED = 1729


def _seed():
    env = os.environ.get("CMTORSION_SEED")
    if env is not None:
        try:
            return int(env)
        except ValueError:
            pass
    return _DEFAULT_SEED


class UnsuitablePrimeError(ValueError):
    """The prime divides the leading coefficient or leaves f non-squarefree."""


# ---------------------------------------------------------------------------
# Arithmetic in GF(p)[x] on dense int lists, lowest degree first.
# ---------------------------------------------------------------------------


def _gf_trim(a):
    while a and a[-1] == 0:
        a.pop()
    return a


def _gf_from_int(cs, p):
    return _gf_trim([c % p for c in cs])


def _gf_neg(a, p):
    return [(-c) % p for c in a]


def _gf_add(a, b, p):
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, c in enumerate(b):
        out[i] = (out[i] + c) % p
    return _gf_trim(out)


def _gf_sub(a, b, p):
    out = list(a) + [0] * max(0, len(b) - len(a))
    for i, c in enumerate(b):
        out[i] = (out[i] - c) % p
    return _gf_trim(out)


def _gf_mul(a, b, p):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] += ai * bj
    return _gf_trim([c % p for c in out])


def _gf_mul_ground(a, c, p):
    c %= p
    if c == 0:
        return []
    return _gf_trim([ai * c % p for ai in a])


def _gf_monic(a, p):
    if not a:
        return []
    if a[-1] == 1:
        return list(a)
    return _gf_mul_ground(a, pow(a[-1], -1, p), p)


def _gf_divmod(a, b, p):
    if not b:
        raise ZeroDivisionError("division by zero polynomial mod p")
    a = list(a)
    db = len(b) - 1
    if len(a) - 1 < db:
        return [], _gf_trim(a)
    inv = pow(b[-1], -1, p)
    quo = [0] * (len(a) - db)
    for i in range(len(quo) - 1, -1, -1):
        c = a[i + db] * inv % p
        if c:
            quo[i] = c
            for j in range(db + 1):
                a[i + j] = (a[i + j] - c * b[j]) % p
    return _gf_trim(quo), _gf_trim(a)


def _gf_rem(a, b, p):
    return _gf_divmod(a, b, p)[1]


def _gf_gcd(a, b, p):
    a, b = list(a), list(b)
    while b:
        a, b = b, _gf_rem(a, b, p)
    return _gf_monic(a, p)


def _gf_gcdex(a, b, p):
    """Extended gcd: returns (s, t, g) monic with s*a + t*b = g mod p."""
    s0, s1 = [1], []
    t0, t1 = [], [1]
    a, b = list(a), list(b)
    while b:
        q, r = _gf_divmod(a, b, p)
        a, b = b, r
        s0, s1 = s1, _gf_sub(s0, _gf_mul(q, s1, p), p)
        t0, t1 = t1, _gf_sub(t0, _gf_mul(q, t1, p), p)
    if not a:
        raise ZeroDivisionError("gcdex of zero polynomials")
    inv = pow(a[-1], -1, p)
    return (_gf_mul_ground(s0, inv, p), _gf_mul_ground(t0, inv, p), _gf_monic(a, p))


def _gf_deriv(a, p):
    return _gf_trim([i * c % p for i, c in enumerate(a)][1:])


def _gf_pow_mod(a, e, f, p):
    result = [1]
    base = _gf_rem(a, f, p)
    while e:
        if e & 1:
            result = _gf_rem(_gf_mul(result, base, p), f, p)
        base = _gf_rem(_gf_mul(base, base, p), f, p)
        e >>= 1
    return result


def _gf_is_squarefree(a, p):
    d = _gf_deriv(a, p)
    if not d:
        return False
    return len(_gf_gcd(a, d, p)) == 1


def _gf_ddf(f, p):
    """Distinct-degree factorization of monic squarefree f: [(product, d)]."""
    blocks = []
    h = [0, 1]
    fstar = list(f)
    d = 0
    while len(fstar) - 1 >= 2 * (d + 1):
        d += 1
        h = _gf_pow_mod(h, p, fstar, p)
        g = _gf_gcd(_gf_sub(h, [0, 1], p), fstar, p)
        if len(g) > 1:
            blocks.append((g, d))
            fstar, r = _gf_divmod(fstar, g, p)
            if r:
                raise InternalConsistencyError("ddf division not exact")
            h = _gf_rem(h, fstar, p)
    if len(fstar) > 1:
        blocks.append((fstar, len(fstar) - 1))
    return blocks


def _gf_edf(f, d, p, rng):
    """Equal-degree splitting (Cantor-Zassenhaus, p odd) of monic f."""
    n = len(f) - 1
    if n == d:
        return [f]
    exponent = (p**d - 1) // 2
    while True:
        t = [rng.randrange(p) for _ in range(n)]
        t = _gf_trim(t)
        if len(t) < 2:
            continue
        u = _gf_sub(_gf_pow_mod(t, exponent, f, p), [1], p)
        g = _gf_gcd(u, f, p)
        if 1 < len(g) < len(f):
            cof, r = _gf_divmod(f, g, p)
            if r:
                raise InternalConsistencyError("edf division not exact")
            return _gf_edf(g, d, p, rng) + _gf_edf(cof, d, p, rng)


def _gf_factor_squarefree(f, p, rng, ddf_blocks=None, split_upto=None):
    """Monic irreducible factors of monic squarefree f, sorted.

    With split_upto set, DDF blocks of irreducible degree above the bound
    are kept whole: they stay valid (coprime, monic) units for Hensel
    lifting but can never participate in a factor of degree <= split_upto,
    so splitting them would be wasted work.
    """
    if ddf_blocks is None:
        ddf_blocks = _gf_ddf(f, p)
    factors = []
    for block, d in ddf_blocks:
        if split_upto is not None and d > split_upto:
            factors.append(block)
        else:
            factors.extend(_gf_edf(block, d, p, rng))
    return sorted(factors, key=lambda g: (len(g), tuple(reversed(g))))


# ---------------------------------------------------------------------------
# Hensel lifting (quadratic, multifactor by divide and conquer).
# ---------------------------------------------------------------------------


def _zm_trunc(a, m):
    return _gf_trim([c % m for c in a])


def _zm_mul(a, b, m):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] += ai * bj
    return _zm_trunc(out, m)


def _zm_sub(a, b, m):
    out = list(a) + [0] * max(0, len(b) - len(a))
    for i, c in enumerate(b):
        out[i] = (out[i] - c) % m
    return _gf_trim(out)


def _zm_add(a, b, m):
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, c in enumerate(b):
        out[i] = (out[i] + c) % m
    return _gf_trim(out)


def _zm_divmod_monic(a, b, m):
    """Division by monic b with coefficients mod m."""
    a = list(a)
    db = len(b) - 1
    if len(a) - 1 < db:
        return [], _gf_trim(a)
    quo = [0] * (len(a) - db)
    for i in range(len(quo) - 1, -1, -1):
        c = a[i + db] % m
        if c:
            quo[i] = c
            for j in range(db + 1):
                a[i + j] = (a[i + j] - c * b[j]) % m
    return _gf_trim(quo), _gf_trim(a)


def _hensel_step(m, f, g, h, s, t):
    """Lift f = g*h and s*g + t*h = 1 from mod m to mod m*m (h monic)."""
    M = m * m
    e = _zm_sub(_zm_trunc(f, M), _zm_mul(g, h, M), M)
    q, r = _zm_divmod_monic(_zm_mul(s, e, M), h, M)
    g1 = _zm_add(g, _zm_add(_zm_mul(t, e, M), _zm_mul(q, g, M), M), M)
    h1 = _zm_add(h, r, M)
    b = _zm_sub(_zm_add(_zm_mul(s, g1, M), _zm_mul(t, h1, M), M), [1], M)
    c, d = _zm_divmod_monic(_zm_mul(s, b, M), h1, M)
    s1 = _zm_sub(s, d, M)
    t1 = _zm_sub(t, _zm_add(_zm_mul(t, b, M), _zm_mul(c, g1, M), M), M)
    return g1, h1, s1, t1


def _hensel_lift(p, f, factors, l):
    """Lift monic factors of f mod p to monic factors mod p**l.

    Requires f = lc(f) * prod(factors) mod p with pairwise coprime monic
    factors.  Returns the list of lifted monic factors mod p**l.
    """
    r = len(factors)
    pl = p**l
    lc = f[-1]
    if r == 1:
        inv = pow(lc % pl, -1, pl)
        return [_zm_trunc([c * inv for c in f], pl)]
    k = r // 2
    g = [lc % p]
    for fac in factors[:k]:
        g = _gf_mul(g, fac, p)
    h = [1]
    for fac in factors[k:]:
        h = _gf_mul(h, fac, p)
    s, t, one = _gf_gcdex(g, h, p)
    if one != [1]:
        raise InternalConsistencyError("modular factors not coprime")
    m = p
    while m < pl:
        g, h, s, t = _hensel_step(m, f, g, h, s, t)
        m *= m
    g, h = _zm_trunc(g, pl), _zm_trunc(h, pl)
    return _hensel_lift(p, g, factors[:k], l) + _hensel_lift(p, h, factors[k:], l)


# ---------------------------------------------------------------------------
# Recombination over Z.
# ---------------------------------------------------------------------------


def _int_sym(a, m):
    half = m // 2
    return _gf_trim([c - m if c > half else c for c in (ci % m for ci in a)])


def _int_pp(a):
    """Primitive part with positive leading coefficient."""
    g = reduce(math.gcd, (abs(c) for c in a), 0)
    if g == 0:
        return list(a)
    if a[-1] < 0:
        g = -g
    return [c // g for c in a]


def _int_exact_div(a, b):
    """Exact quotient of integer polys, or None."""
    a = list(a)
    db = len(b) - 1
    if len(a) - 1 < db:
        return None
    quo = [0] * (len(a) - db)
    lb = b[-1]
    for i in range(len(quo) - 1, -1, -1):
        c = a[i + db]
        if c % lb:
            return None
        c //= lb
        quo[i] = c
        if c:
            for j in range(db + 1):
                a[i + j] -= c * b[j]
    return quo if not any(a) else None


def _mignotte_exponent(F, p, max_factor_deg):
    """Smallest l with p**l covering twice the factor coefficient bound."""
    norm2 = math.isqrt(sum(c * c for c in F)) + 1
    bound = 2 ** (max_factor_deg + 1) * norm2 * abs(F[-1])
    l = 1
    pl = p
    while pl <= 2 * bound:
        pl *= p
        l += 1
    return l


def _subset_sums(degrees):
    mask = 1
    for d in degrees:
        mask |= mask << d
    return mask


def _recombine(F, modular, p, l, max_deg=None, targets=None):
    """Zassenhaus subset search.

    Returns (factors, leftover): primitive irreducible integer factors
    found, plus the remaining cofactor of F.  In bounded mode (max_deg)
    only subsets with degree sum in `targets` are tried and the leftover
    is not claimed irreducible.
    """
    pl = p**l
    pool = list(modular)
    found = []
    size = 1
    while pool:
        if max_deg is None and 2 * size > len(pool):
            break
        if size > len(pool):
            break
        retry = False
        for idx in combinations(range(len(pool)), size):
            dsum = sum(len(pool[i]) - 1 for i in idx)
            if max_deg is not None:
                if dsum > max_deg or (targets is not None and not (targets >> dsum) & 1):
                    continue
            elif 2 * dsum > len(F) - 1:
                continue
            lc = F[-1]
            # cheap reject on the trailing coefficient
            if F[0] != 0:
                tc = lc
                for i in idx:
                    tc = tc * pool[i][0] % pl
                tc = tc - pl if tc > pl // 2 else tc
                if tc == 0 or (F[0] * lc) % tc:
                    continue
            cand = [lc % pl]
            for i in idx:
                cand = _zm_mul(cand, pool[i], pl)
            cand = _int_pp(_int_sym(cand, pl))
            quo = _int_exact_div(F, cand)
            if quo is not None:
                found.append(cand)
                F = quo
                pool = [g for i, g in enumerate(pool) if i not in idx]
                retry = True
                break
        if not retry:
            size += 1
    return found, F


# ---------------------------------------------------------------------------
# Squarefree decomposition over Q (Yun).
# ---------------------------------------------------------------------------

_SQF_PROBE_PRIMES = (3, 5, 7, 11, 13, 17)


def _is_squarefree_probe(F):
    """True if some small prime certifies F squarefree; None if undecided."""
    cs = F.int_coeffs()
    for p in _SQF_PROBE_PRIMES:
        if cs[-1] % p == 0:
            continue
        if _gf_is_squarefree(_gf_from_int(cs, p), p):
            return True
    return None


def _squarefree_parts(F):
    """Squarefree decomposition of primitive integer F: [(primitive part, mult)].

    The parts are pairwise coprime, F = lc * prod(part_i ** mult_i), and a
    cheap mod-p probe short-circuits the common squarefree case.
    """
    if F.degree == 0:
        return []
    if _is_squarefree_probe(F):
        return [(F, 1)]
    f = F.monic()
    g = poly_gcd(f, f.derivative())
    w = f.exact_div(g)  # product of the distinct irreducible factors
    parts = []
    i = 1
    while w.degree > 0:
        y = poly_gcd(w, g)
        z = w.exact_div(y)  # factors of multiplicity exactly i
        if z.degree > 0:
            parts.append((z.content_and_primitive()[1], i))
        w = y
        g = g.exact_div(y)
        i += 1
    return parts


# ---------------------------------------------------------------------------
# Core squarefree factorizer.
# ---------------------------------------------------------------------------

_MAX_SUITABLE_PRIMES = 8
_EXCELLENT_COUNT = 3


def _candidate_primes():
    p = 3
    while True:
        if is_probable_prime(p):
            yield p
        p += 2


def _select_prime(cs, want_targets_upto=None):
    """Pick a working prime for a squarefree integer poly.

    Returns (p, ddf_blocks, targets_mask).  targets_mask is the bitmask of
    degree sums achievable at *every* suitable prime examined (only
    meaningful when want_targets_upto is set); if no degree in
    1..want_targets_upto survives, (None, None, 0) is returned.
    """
    suitable = []
    common_mask = None
    for p in _candidate_primes():
        if len(suitable) >= _MAX_SUITABLE_PRIMES or p > 10000:
            break
        if cs[-1] % p == 0:
            continue
        fp = _gf_from_int(cs, p)
        if len(fp) != len(cs) or not _gf_is_squarefree(fp, p):
            continue
        blocks = _gf_ddf(_gf_monic(fp, p), p)
        degrees = []
        for block, d in blocks:
            degrees.extend([d] * ((len(block) - 1) // d))
        suitable.append((len(degrees), p, blocks))
        if want_targets_upto is not None:
            mask = _subset_sums(degrees)
            common_mask = mask if common_mask is None else common_mask & mask
            low = common_mask & ((1 << (want_targets_upto + 1)) - 1)
            if low <= 1:  # only the empty subset sum remains achievable
                return None, None, 0
        if len(degrees) <= _EXCELLENT_COUNT:
            break
    if not suitable:
        raise InternalConsistencyError("no suitable prime found")
    count, p, blocks = min(suitable)
    return p, blocks, common_mask


def _factor_squarefree_int(F, max_deg=None):
    """Irreducible primitive integer factors of primitive squarefree F.

    With max_deg set, returns only the factors of degree <= max_deg (the
    rest of F is left unexamined).
    """
    cs = F.int_coeffs()
    n = len(cs) - 1
    if n <= 0:
        return []
    if n == 1:
        return [Poly(_int_pp(cs))] if max_deg is None or max_deg >= 1 else []
    p, blocks, targets = _select_prime(cs, want_targets_upto=max_deg)
    if max_deg is not None and p is None:
        return []
    rng = random.Random(_seed())
    modular = _gf_factor_squarefree(
        _gf_monic(_gf_from_int(cs, p), p), p, rng, blocks, split_upto=max_deg
    )
    if len(modular) == 1:
        return [Poly(_int_pp(cs))] if max_deg is None or n <= max_deg else []
    if max_deg is None:
        lift_deg = n // 2
    else:
        lift_deg = min(max_deg, n)
    l = _mignotte_exponent(cs, p, lift_deg)
    lifted = _hensel_lift(p, cs, modular, l)
    found, leftover = _recombine(cs, lifted, p, l, max_deg=max_deg, targets=targets)
    factors = [Poly(f) for f in found]
    if max_deg is None and len(leftover) > 1:
        factors.append(Poly(_int_pp(leftover)))
    return factors


# ---------------------------------------------------------------------------
# Public API.
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FactorList:
    """content * prod(factor**multiplicity) == the factored polynomial."""

    content: Fraction
    factors: tuple

    def __post_init__(self):
        prev = None
        for f, m in self.factors:
            if not f.is_monic or m < 1:
                raise ValueError("factors must be monic with positive multiplicity")
            key = f.sort_key()
            if prev is not None and key < prev:
                raise ValueError("factors must be sorted")
            prev = key

    def reassemble(self):
        out = Poly((self.content,))
        for f, m in self.factors:
            out = out * f**m
        return out


_factor_log = None


def enable_factor_log():
    """Start recording factor_poly results (for consistency audits)."""
    global _factor_log
    _factor_log = {}


def disable_factor_log():
    global _factor_log
    _factor_log = None


def get_factor_log():
    return dict(_factor_log) if _factor_log is not None else {}


@lru_cache(maxsize=None)
def _factor_poly_cached(f):
    content, F = f.content_and_primitive()
    if F.degree <= 0:
        return FactorList(content, ())
    items = {}
    for part, mult in _squarefree_parts(F):
        for g in _factor_squarefree_int(part):
            items[g.monic()] = mult
    factors = tuple(sorted(items.items(), key=lambda fm: fm[0].sort_key()))
    result = FactorList(f.lc, factors)
    if result.reassemble() != f:
        raise InternalConsistencyError("factorization does not reassemble")
    return result


def factor_poly(f):
    """Complete irreducible factorization of nonzero f over Q."""
    if not isinstance(f, Poly):
        raise TypeError("factor_poly expects a Poly")
    if f.is_zero:
        raise ValueError("cannot factor the zero polynomial")
    result = _factor_poly_cached(f)
    if _factor_log is not None:
        _factor_log[f] = result
    return result


@lru_cache(maxsize=None)
def _bounded_factors_cached(f, dmax):
    content, F = f.content_and_primitive()
    out = set()
    if F.degree <= 0:
        return ()
    for part, _ in _squarefree_parts(F):
        for g in _factor_squarefree_int(part, max_deg=dmax):
            out.add(g.monic())
    return tuple(sorted(out, key=Poly.sort_key))


def factors_up_to_degree(f, dmax):
    """Distinct monic irreducible factors of f with degree <= dmax."""
    if f.is_zero:
        raise ValueError("cannot factor the zero polynomial")
    if dmax < 1:
        return []
    return list(_bounded_factors_cached(f, dmax))


def irreducible_factors_of_degree(f, d):
    """Distinct monic irreducible degree-d factors of f, sorted."""
    if f.is_zero:
        raise ValueError("cannot factor the zero polynomial")
    if d < 1 or d > max(f.degree, 0):
        return []
    if 2 * d >= f.degree:
        return [g for g, _ in factor_poly(f).factors if g.degree == d]
    return [g for g in factors_up_to_degree(f, d) if g.degree == d]


def linear_factors(f):
    """Monic linear factors of f with multiplicities: [(Poly, mult)]."""
    if f.is_zero:
        raise ValueError("cannot factor the zero polynomial")
    _, F = f.content_and_primitive()
    out = []
    for part, mult in _squarefree_parts(F):
        for g in _factor_squarefree_int(part, max_deg=1):
            out.append((g.monic(), mult))
    return sorted(out, key=lambda fm: fm[0].sort_key())


def factor_degrees_mod_p(f, p):
    """Degrees of the irreducible factors of f over GF(p), sorted.

    Requires integer coefficients, p prime not dividing the leading
    coefficient, and f squarefree mod p.
    """
    if f.is_zero:
        raise ValueError("zero polynomial")
    if not is_probable_prime(p):
        raise ValueError(f"{p} is not prime")
    cs = f.int_coeffs()
    if cs[-1] % p == 0:
        raise UnsuitablePrimeError(f"{p} divides the leading coefficient")
    fp = _gf_from_int(cs, p)
    if not _gf_is_squarefree(fp, p):
        raise UnsuitablePrimeError(f"f is not squarefree mod {p}")
    degrees = []
    for block, d in _gf_ddf(_gf_monic(fp, p), p):
        degrees.extend([d] * ((len(block) - 1) // d))
    return sorted(degrees)
