"""Exact arithmetic in biquadratic fields L = Q(sqrt(d1), sqrt(d2)).

Elements live in the basis {1, sqrt(d1), sqrt(d2), sqrt(d3)} where d3 is
the squarefree part of d1*d2 and sqrt(d1)*sqrt(d2) = s*sqrt(d3) with
s = gcd(d1, d2).  Coordinates stay rational under multiplication even
when d1*d2 is not squarefree.
"""

import math
from dataclasses import dataclass
from fractions import Fraction

import mpmath

from .precision import DEFAULT_PRECISION, mpf_ctx, reconstruct_rational
from .quadratic import QuadElem, is_squarefree

GALOIS_KLEIN = ("id", "s1", "s2", "s3")

# group table of Z/2 x Z/2
_KLEIN_MUL = {
    ("id", "id"): "id", ("id", "s1"): "s1", ("id", "s2"): "s2", ("id", "s3"): "s3",
    ("s1", "id"): "s1", ("s1", "s1"): "id", ("s1", "s2"): "s3", ("s1", "s3"): "s2",
    ("s2", "id"): "s2", ("s2", "s1"): "s3", ("s2", "s2"): "id", ("s2", "s3"): "s1",
    ("s3", "id"): "s3", ("s3", "s1"): "s2", ("s3", "s2"): "s1", ("s3", "s3"): "id",
}

# coordinate signs (on y, z, w) applied by each Galois element
_GALOIS_SIGNS = {
    "id": (1, 1, 1),
    "s1": (1, -1, -1),   # fixes sqrt(d1)
    "s2": (-1, 1, -1),   # fixes sqrt(d2)
    "s3": (-1, -1, 1),   # fixes sqrt(d3)
}


def klein_mul(g, h):
    return _KLEIN_MUL[(g, h)]


@dataclass(frozen=True)
class BiquadField:
    d1: int
    d2: int

    def __post_init__(self):
        for d in (self.d1, self.d2):
            if d <= 1 or not is_squarefree(d):
                raise ValueError("need squarefree d > 1, got %r" % (d,))
        if self.d1 == self.d2:
            raise ValueError("d1 and d2 must be distinct")

    @property
    def s(self):
        return math.gcd(self.d1, self.d2)

    @property
    def d3(self):
        return (self.d1 // self.s) * (self.d2 // self.s)

    def one(self):
        return BiquadElem(self, Fraction(1), Fraction(0), Fraction(0), Fraction(0))

    def from_rational(self, q):
        return BiquadElem(self, Fraction(q), Fraction(0), Fraction(0), Fraction(0))

    def lift_quad(self, x: QuadElem):
        """Embed an element of Q(sqrt(d)) for d in {d1, d2, d3}."""
        zero = Fraction(0)
        if x.d == self.d1:
            return BiquadElem(self, x.a, x.b, zero, zero)
        if x.d == self.d2:
            return BiquadElem(self, x.a, zero, x.b, zero)
        if x.d == self.d3:
            return BiquadElem(self, x.a, zero, zero, x.b)
        raise ValueError("sqrt(%d) does not lie in Q(sqrt(%d), sqrt(%d))"
                         % (x.d, self.d1, self.d2))


@dataclass(frozen=True)
class BiquadElem:
    """x + y*sqrt(d1) + z*sqrt(d2) + w*sqrt(d3), exact rational coordinates."""

    field: BiquadField
    x: Fraction
    y: Fraction
    z: Fraction
    w: Fraction

    def __post_init__(self):
        for name in ("x", "y", "z", "w"):
            object.__setattr__(self, name, Fraction(getattr(self, name)))

    def coords(self):
        return (self.x, self.y, self.z, self.w)

    def is_zero(self):
        return not any(self.coords())

    def is_rational(self):
        return self.y == 0 and self.z == 0 and self.w == 0

    def __str__(self):
        f = self.field
        return "(%s) + (%s)*sqrt(%d) + (%s)*sqrt(%d) + (%s)*sqrt(%d)" % (
            self.x, self.y, f.d1, self.z, f.d2, self.w, f.d3)

    def to_json(self):
        return {"d1": self.field.d1, "d2": self.field.d2,
                "coords": [str(c) for c in self.coords()]}

    @classmethod
    def from_json(cls, obj):
        field = BiquadField(obj["d1"], obj["d2"])
        return cls(field, *[Fraction(c) for c in obj["coords"]])


def _same_field(a, b):
    if a.field != b.field:
        raise ValueError("elements from different biquadratic fields")


def biq_add(a, b):
    _same_field(a, b)
    return BiquadElem(a.field, a.x + b.x, a.y + b.y, a.z + b.z, a.w + b.w)


def biq_neg(a):
    return BiquadElem(a.field, -a.x, -a.y, -a.z, -a.w)


def biq_mul(a, b):
    _same_field(a, b)
    f = a.field
    d1, d2, d3, s = f.d1, f.d2, f.d3, f.s
    r1, r2 = d1 // s, d2 // s  # sqrt(d1)sqrt(d3) = r1*sqrt(d2) etc.
    x = a.x * b.x + d1 * a.y * b.y + d2 * a.z * b.z + d3 * a.w * b.w
    y = a.x * b.y + a.y * b.x + r2 * (a.z * b.w + a.w * b.z)
    z = a.x * b.z + a.z * b.x + r1 * (a.y * b.w + a.w * b.y)
    w = a.x * b.w + a.w * b.x + s * (a.y * b.z + a.z * b.y)
    return BiquadElem(f, x, y, z, w)


def galois_apply(g, a):
    """Apply a Klein Galois element; sign flips per the fixed subfield."""
    sy, sz, sw = _GALOIS_SIGNS[g]
    return BiquadElem(a.field, a.x, sy * a.y, sz * a.z, sw * a.w)


def biq_norm_to_Q(a):
    """N_{L/Q}(a) = a * s1(a) * s2(a) * s3(a), an exact rational."""
    prod = biq_mul(biq_mul(a, galois_apply("s1", a)),
                   biq_mul(galois_apply("s2", a), galois_apply("s3", a)))
    assert prod.is_rational(), "norm must land in Q"
    return prod.x


def biq_inv(a):
    if a.is_zero():
        raise ZeroDivisionError("zero element has no inverse")
    cofactor = biq_mul(biq_mul(galois_apply("s1", a), galois_apply("s2", a)),
                       galois_apply("s3", a))
    n = biq_norm_to_Q(a)
    return BiquadElem(a.field, cofactor.x / n, cofactor.y / n,
                      cofactor.z / n, cofactor.w / n)


def biq_pow(a, k):
    if k < 0:
        return biq_pow(biq_inv(a), -k)
    r = a.field.one()
    base = a
    while k:
        if k & 1:
            r = biq_mul(r, base)
        base = biq_mul(base, base)
        k >>= 1
    return r


def char_poly(a):
    """Characteristic polynomial of multiplication-by-a on the rational
    4-dimensional basis, exact, via Faddeev-LeVerrier.  Coefficients are
    returned monic, highest degree first."""
    basis = [
        BiquadElem(a.field, 1, 0, 0, 0),
        BiquadElem(a.field, 0, 1, 0, 0),
        BiquadElem(a.field, 0, 0, 1, 0),
        BiquadElem(a.field, 0, 0, 0, 1),
    ]
    m = [list(biq_mul(a, e).coords()) for e in basis]
    m = [[m[j][i] for j in range(4)] for i in range(4)]  # columns -> matrix

    def mat_mul(p, q):
        return [[sum(p[i][k] * q[k][j] for k in range(4)) for j in range(4)]
                for i in range(4)]

    def trace(p):
        return sum(p[i][i] for i in range(4))

    ident = [[Fraction(int(i == j)) for j in range(4)] for i in range(4)]
    coeffs = [Fraction(1)]
    mk = [row[:] for row in ident]
    for k in range(1, 5):
        mk = mat_mul(m, mk)
        c = -trace(mk) / k
        coeffs.append(c)
        for i in range(4):
            mk[i][i] += c
    return coeffs


def is_algebraic_integer(a):
    return all(c.denominator == 1 for c in char_poly(a))


def is_unit(a):
    return is_algebraic_integer(a) and abs(biq_norm_to_Q(a)) == 1


def _coord_bits(coords):
    return max((abs(c.numerator).bit_length() + c.denominator.bit_length()
                for c in coords), default=1)


def embed_real(a, precision_bits=DEFAULT_PRECISION):
    """The four real embeddings (id, s1, s2, s3 images), sqrt always the
    positive root.

    Conjugates of a large unit are tiny (about 1/|a|), so the working
    precision gets headroom for the full coefficient bit-size to survive
    the cancellation.
    """
    f = a.field
    # a unit's conjugate is ~1/|a|, so cancellation spans twice the
    # coefficient magnitude
    with mpf_ctx(precision_bits + 2 * _coord_bits(a.coords()) + 16):
        roots = (mpmath.mpf(1), mpmath.sqrt(f.d1), mpmath.sqrt(f.d2),
                 mpmath.sqrt(f.d3))

        def frac(q):
            return mpmath.mpf(q.numerator) / q.denominator

        out = []
        for g in GALOIS_KLEIN:
            img = galois_apply(g, a)
            out.append(sum(frac(c) * r for c, r in zip(img.coords(), roots)))
        return tuple(out)


def sqrt_in_field(a, precision_bits=256, denom_bound=10 ** 9):
    """Search for beta in L with beta^2 = a; exact verification, so a
    returned element is always correct.  Returns None when no candidate
    passes at the given precision / denominator bound (sound, not
    complete: caller may escalate)."""
    f = a.field
    with mpf_ctx(precision_bits):
        emb = embed_real(a, precision_bits)
        if any(v <= 0 for v in emb):
            return None  # totally real field: squares are totally positive
        sqrts = [mpmath.sqrt(v) for v in emb]
        roots = (mpmath.sqrt(f.d1), mpmath.sqrt(f.d2), mpmath.sqrt(f.d3))
        for signs in ((1, 1, 1), (1, 1, -1), (1, -1, 1), (1, -1, -1),
                      (-1, 1, 1), (-1, 1, -1), (-1, -1, 1), (-1, -1, -1)):
            # id-embedding fixed positive; signs for (s1, s2, s3) images
            y = [sqrts[0]] + [sg * v for sg, v in zip(signs, sqrts[1:])]
            # invert the fixed sign-pattern basis matrix in closed form
            cx = (y[0] + y[1] + y[2] + y[3]) / 4
            cy = (y[0] + y[1] - y[2] - y[3]) / (4 * roots[0])
            cz = (y[0] - y[1] + y[2] - y[3]) / (4 * roots[1])
            cw = (y[0] - y[1] - y[2] + y[3]) / (4 * roots[2])
            try:
                cand = BiquadElem(f, *[reconstruct_rational(c, denom_bound)
                                       for c in (cx, cy, cz, cw)])
            except (OverflowError, ValueError):
                continue
            if biq_mul(cand, cand) == a:
                if embed_real(cand, 64)[0] < 0:
                    cand = biq_neg(cand)
                return cand
    return None
