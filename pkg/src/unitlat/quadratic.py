"""Exact arithmetic in real quadratic fields Q(sqrt(d)) and fundamental units.

Elements are a + b*sqrt(d) with exact rational a, b.  Fundamental units
are found by the continued-fraction expansion of sqrt(d) (of (1+sqrt(d))/2
when d = 1 mod 4, so that half-integer units like (1+sqrt(5))/2 are not
missed), with every step in exact integer arithmetic.
"""

from dataclasses import dataclass
from fractions import Fraction
from math import isqrt

import mpmath

from .precision import DEFAULT_PRECISION, mpf_ctx


def is_squarefree(d):
    if d < 1:
        return False
    i = 2
    while i * i <= d:
        if d % (i * i) == 0:
            return False
        i += 1
    return True


def _check_squarefree(d):
    if not isinstance(d, int) or d <= 1 or not is_squarefree(d):
        raise ValueError("d must be a squarefree integer > 1, got %r" % (d,))


@dataclass(frozen=True)
class QuadElem:
    """Element a + b*sqrt(d) of Q(sqrt(d)), exact rational coordinates."""

    d: int
    a: Fraction
    b: Fraction

    def __post_init__(self):
        _check_squarefree(self.d)
        object.__setattr__(self, "a", Fraction(self.a))
        object.__setattr__(self, "b", Fraction(self.b))

    def __str__(self):
        return "(%s) + (%s)*sqrt(%d)" % (self.a, self.b, self.d)

    def to_json(self):
        return {"d": self.d, "a": str(self.a), "b": str(self.b)}

    @classmethod
    def from_json(cls, obj):
        return cls(obj["d"], Fraction(obj["a"]), Fraction(obj["b"]))


def quad_mul(x, y):
    if x.d != y.d:
        raise ValueError("mismatched fields: sqrt(%d) vs sqrt(%d)" % (x.d, y.d))
    return QuadElem(x.d, x.a * y.a + x.b * y.b * x.d, x.a * y.b + x.b * y.a)


def quad_conj(x):
    """The nontrivial automorphism of Q(sqrt(d)): sqrt(d) -> -sqrt(d)."""
    return QuadElem(x.d, x.a, -x.b)


def quad_norm(x):
    return x.a * x.a - x.d * x.b * x.b


def quad_inv(x):
    n = quad_norm(x)
    if n == 0:
        raise ZeroDivisionError("zero element has no inverse")
    return QuadElem(x.d, x.a / n, -x.b / n)


def quad_pow(x, k):
    if k < 0:
        return quad_pow(quad_inv(x), -k)
    r = QuadElem(x.d, Fraction(1), Fraction(0))
    base = x
    while k:
        if k & 1:
            r = quad_mul(r, base)
        base = quad_mul(base, base)
        k >>= 1
    return r


def is_quad_integer(x):
    """True iff x lies in the maximal order: trace and norm both integral."""
    trace = 2 * x.a
    return trace.denominator == 1 and quad_norm(x).denominator == 1


def quad_embed(x, precision_bits=DEFAULT_PRECISION):
    """Real value of x under the positive-root embedding sqrt(d) > 0."""
    with mpf_ctx(precision_bits):
        root = mpmath.sqrt(x.d)
        return (mpmath.mpf(x.a.numerator) / x.a.denominator
                + mpmath.mpf(x.b.numerator) / x.b.denominator * root)


def surd_sign(a, b, d):
    """Exact sign of a + b*sqrt(d) for rational a, b and nonsquare d > 1."""
    a, b = Fraction(a), Fraction(b)
    if b == 0:
        return (a > 0) - (a < 0)
    if a == 0:
        return (b > 0) - (b < 0)
    if a > 0 and b > 0:
        return 1
    if a < 0 and b < 0:
        return -1
    # opposite signs: the term with the larger square wins
    lhs, rhs = a * a, b * b * d
    if lhs == rhs:
        return 0  # impossible for irrational sqrt(d), kept as a guard
    if lhs > rhs:
        return 1 if a > 0 else -1
    return 1 if b > 0 else -1


def surd_cmp(a, b, d, c, e, f):
    """Exact sign of (a + b*sqrt(d)) - (c + e*sqrt(f)); b, e >= 0 required."""
    a, b, c, e = Fraction(a), Fraction(b), Fraction(c), Fraction(e)
    if b < 0 or e < 0:
        raise ValueError("surd_cmp requires nonnegative radical coefficients")
    s = a - c
    lhs, rhs = b * b * d, e * e * f
    diff_sign = (lhs > rhs) - (lhs < rhs)  # sign of b*sqrt(d) - e*sqrt(f)
    if s == 0:
        return diff_sign
    if diff_sign == 0:
        return 1 if s > 0 else -1
    s_sign = 1 if s > 0 else -1
    if s_sign == diff_sign:
        return s_sign
    # |s| vs |b*sqrt(d) - e*sqrt(f)|: compare s^2 with (b^2 d + e^2 f) - 2be*sqrt(df)
    t = s * s - lhs - rhs
    u = 2 * b * e
    if t >= 0:
        mag = 1 if (t > 0 or u > 0) else 0
    else:
        uu, tt = u * u * d * f, t * t
        mag = (uu > tt) - (uu < tt)
    if mag == 0:
        return 0
    return s_sign if mag > 0 else diff_sign


def quad_cmp(x, y):
    """Exact comparison of two surds with nonnegative sqrt coefficients."""
    return surd_cmp(x.a, x.b, x.d, y.a, y.b, y.d)


@dataclass(frozen=True)
class FundamentalUnitResult:
    unit: QuadElem
    norm_sign: int
    log_value: object  # mpf, natural log of the real embedding

    def to_json(self):
        return {"unit": self.unit.to_json(), "norm_sign": self.norm_sign,
                "log_value": mpmath.nstr(self.log_value, 30)}


def _floor_surd(p, q, d, sqrt_floor):
    """Exact floor((p + sqrt(d)) / q) for integers p, q != 0 and nonsquare d."""
    if q > 0:
        return (p + sqrt_floor) // q
    # sqrt(d) in (sqrt_floor, sqrt_floor + 1); with q < 0 the two endpoint
    # floors can differ by one, resolve by exact comparison.
    lo = (p + sqrt_floor + 1) // q  # floor of left endpoint value / q (q<0 flips)
    hi = (p + sqrt_floor) // q
    if lo == hi:
        return lo
    # candidate m = hi: m <= (p + sqrt(d))/q  iff  m*q >= p + sqrt(d) (q<0)
    m = hi
    rhs = m * q - p  # need rhs >= sqrt(d)
    if rhs >= 0 and rhs * rhs >= d:
        return hi
    return lo


def _cf_unit_search(d, max_steps=100000):
    """Walk the continued fraction of sqrt(d) (or (1+sqrt(d))/2 for d=1 mod 4)
    and return the first convergent giving a norm +-1 unit of the maximal
    order.  Classical theory places the fundamental unit among these."""
    half_basis = d % 4 == 1
    s = isqrt(d)
    if half_basis:
        pp, qq = 1, 2  # omega = (1 + sqrt(d)) / 2
    else:
        pp, qq = 0, 1  # sqrt(d)
    h_prev, h = 0, 1  # h_{-2}, h_{-1}: convergent numerators
    k_prev, k = 1, 0
    p_cur, q_cur = pp, qq
    for _ in range(max_steps):
        a = _floor_surd(p_cur, q_cur, d, s)
        h_prev, h = h, a * h + h_prev
        k_prev, k = k, a * k + k_prev
        if half_basis:
            # candidate h - k*(1 - sqrt(d))/2 = (2h - k)/2 + (k/2) sqrt(d)
            norm = h * h - h * k + k * k * (1 - d) // 4
            if norm in (1, -1):
                unit = QuadElem(d, Fraction(2 * h - k, 2), Fraction(k, 2))
                return unit, norm
        else:
            norm = h * h - d * k * k
            if norm in (1, -1):
                unit = QuadElem(d, Fraction(h), Fraction(k))
                return unit, norm
        p_cur = a * q_cur - p_cur
        q_cur = (d - p_cur * p_cur) // q_cur
    raise ArithmeticError("continued fraction of sqrt(%d) did not close" % d)


def fundamental_unit(d, precision_bits=DEFAULT_PRECISION):
    """Fundamental unit > 1 of Q(sqrt(d)), exact, with its norm sign."""
    _check_squarefree(d)
    unit, norm = _cf_unit_search(d)
    assert is_quad_integer(unit) and abs(quad_norm(unit)) == 1
    assert surd_sign(unit.a - 1, unit.b, d) > 0, "unit must exceed 1"
    with mpf_ctx(precision_bits):
        log_value = mpmath.log(quad_embed(unit, precision_bits))
    return FundamentalUnitResult(unit, norm, log_value)


def smallest_fundamental_units(bound, precision_bits=DEFAULT_PRECISION):
    """All (d, fundamental unit) for squarefree 2 <= d <= bound, sorted
    ascending by the real value of the unit (exact comparison)."""
    import functools

    entries = [(d, fundamental_unit(d, precision_bits))
               for d in range(2, bound + 1) if is_squarefree(d)]

    def cmp(lhs, rhs):
        return quad_cmp(lhs[1].unit, rhs[1].unit)

    entries.sort(key=functools.cmp_to_key(cmp))
    return entries
