"""Power-basis arithmetic in cyclic quartic fields L = Q(alpha).

alpha is a root of a monic integer quartic with four real roots and
cyclic Galois group.  A generator sigma of the Galois group is recovered
by matching root permutations numerically, rationally reconstructing the
image of alpha, and verifying the automorphism exactly.
"""

from dataclasses import dataclass
from fractions import Fraction

import mpmath

from .precision import mpf_ctx, reconstruct_rational

_AUT_PRECISION = 192
_AUT_DENOM_BOUND = 10 ** 12


class NotCyclicError(ValueError):
    """Defining polynomial is not a totally real cyclic quartic."""


_ROOTS_CACHE = {}


@dataclass(frozen=True)
class CyclicQuarticField:
    """Field defined by a monic integer quartic; coeffs constant term first."""

    coeffs: tuple  # (c0, c1, c2, c3, 1)

    def __post_init__(self):
        c = tuple(int(v) for v in self.coeffs)
        if len(c) != 5 or c[4] != 1:
            raise ValueError("need a monic quartic as 5 coefficients, constant first")
        object.__setattr__(self, "coeffs", c)

    def one(self):
        return QuarticElem(self, (Fraction(1), Fraction(0), Fraction(0), Fraction(0)))

    def from_rational(self, q):
        return QuarticElem(self, (Fraction(q), Fraction(0), Fraction(0), Fraction(0)))

    def gen(self):
        return QuarticElem(self, (Fraction(0), Fraction(1), Fraction(0), Fraction(0)))

    def roots(self, precision_bits=_AUT_PRECISION):
        """Real roots, descending; index 0 is the chosen id-embedding.
        Cached per (polynomial, precision): embeddings are hot paths."""
        key = (self.coeffs, precision_bits)
        cached = _ROOTS_CACHE.get(key)
        if cached is not None:
            return cached
        with mpf_ctx(precision_bits):
            poly = [mpmath.mpf(1)] + [mpmath.mpf(c) for c in self.coeffs[3::-1]]
            rts = mpmath.polyroots(poly, maxsteps=200, extraprec=precision_bits)
            if any(abs(mpmath.im(r)) > mpmath.mpf(2) ** (-precision_bits // 2)
                   for r in rts):
                raise NotCyclicError("defining polynomial is not totally real")
            out = sorted((mpmath.re(r) for r in rts), reverse=True)
        _ROOTS_CACHE[key] = out
        return out


@dataclass(frozen=True)
class QuarticElem:
    field: CyclicQuarticField
    coords: tuple  # (c0, c1, c2, c3) in the power basis 1, a, a^2, a^3

    def __post_init__(self):
        c = tuple(Fraction(v) for v in self.coords)
        if len(c) != 4:
            raise ValueError("need 4 power-basis coordinates")
        object.__setattr__(self, "coords", c)

    def is_zero(self):
        return not any(self.coords)

    def is_rational(self):
        return not any(self.coords[1:])

    def rational_value(self):
        assert self.is_rational()
        return self.coords[0]

    def __str__(self):
        return "[" + ", ".join(str(c) for c in self.coords) + "]"

    def to_json(self):
        return [str(c) for c in self.coords]

    @classmethod
    def from_json(cls, field, obj):
        return cls(field, tuple(Fraction(c) for c in obj))


def qr_add(a, b):
    _same(a, b)
    return QuarticElem(a.field, tuple(x + y for x, y in zip(a.coords, b.coords)))


def qr_neg(a):
    return QuarticElem(a.field, tuple(-x for x in a.coords))


def qr_mul(a, b):
    _same(a, b)
    c0, c1, c2, c3 = a.field.coeffs[:4]
    prod = [Fraction(0)] * 7
    for i, x in enumerate(a.coords):
        if x:
            for j, y in enumerate(b.coords):
                prod[i + j] += x * y
    # reduce degrees 6..4 using a^4 = -(c3 a^3 + c2 a^2 + c1 a + c0)
    for deg in (6, 5, 4):
        v = prod[deg]
        if v:
            prod[deg] = Fraction(0)
            prod[deg - 1] -= c3 * v
            prod[deg - 2] -= c2 * v
            prod[deg - 3] -= c1 * v
            prod[deg - 4] -= c0 * v
    return QuarticElem(a.field, tuple(prod[:4]))


def qr_pow(a, k):
    if k < 0:
        return qr_pow(qr_inv(a), -k)
    r = a.field.one()
    base = a
    while k:
        if k & 1:
            r = qr_mul(r, base)
        base = qr_mul(base, base)
        k >>= 1
    return r


def _same(a, b):
    if a.field != b.field:
        raise ValueError("elements from different quartic fields")


def _mult_matrix(a):
    cols = []
    e = [a.field.one(), a.field.gen(),
         qr_mul(a.field.gen(), a.field.gen()),
         qr_pow(a.field.gen(), 3)]
    for b in e:
        cols.append(qr_mul(a, b).coords)
    return [[cols[j][i] for j in range(4)] for i in range(4)]


def char_poly(a):
    """Monic char poly of multiplication-by-a, highest degree first, exact."""
    m = _mult_matrix(a)

    def mat_mul(p, q):
        return [[sum(p[i][k] * q[k][j] for k in range(4)) for j in range(4)]
                for i in range(4)]

    coeffs = [Fraction(1)]
    mk = [[Fraction(int(i == j)) for j in range(4)] for i in range(4)]
    for k in range(1, 5):
        mk = mat_mul(m, mk)
        c = -sum(mk[i][i] for i in range(4)) / k
        coeffs.append(c)
        for i in range(4):
            mk[i][i] += c
    return coeffs


def is_algebraic_integer(a):
    return all(c.denominator == 1 for c in char_poly(a))


def norm_to_Q(a):
    """N_{L/Q}(a) as exact rational (det of the multiplication map)."""
    return _det4(_mult_matrix(a))


def _det4(m):
    # cofactor expansion, exact
    def det3(r):
        return (r[0][0] * (r[1][1] * r[2][2] - r[1][2] * r[2][1])
                - r[0][1] * (r[1][0] * r[2][2] - r[1][2] * r[2][0])
                + r[0][2] * (r[1][0] * r[2][1] - r[1][1] * r[2][0]))
    total = Fraction(0)
    for j in range(4):
        minor = [[m[i][k] for k in range(4) if k != j] for i in range(1, 4)]
        total += (-1) ** j * m[0][j] * det3(minor)
    return total


def qr_inv(a):
    if a.is_zero():
        raise ZeroDivisionError("zero element has no inverse")
    # solve M x = e0 with M the multiplication matrix, exact Gauss
    m = [row[:] + [Fraction(int(i == 0))] for i, row in enumerate(_mult_matrix(a))]
    n = 4
    for col in range(n):
        piv = next(r for r in range(col, n) if m[r][col] != 0)
        m[col], m[piv] = m[piv], m[col]
        pv = m[col][col]
        m[col] = [v / pv for v in m[col]]
        for r in range(n):
            if r != col and m[r][col]:
                factor = m[r][col]
                m[r] = [v - factor * w for v, w in zip(m[r], m[col])]
    return QuarticElem(a.field, tuple(m[i][4] for i in range(n)))


def eval_poly_at(field, elem):
    """Evaluate the defining polynomial at an element of the field."""
    acc = field.from_rational(field.coeffs[4])
    for c in field.coeffs[3::-1]:
        acc = qr_add(qr_mul(acc, elem), field.from_rational(c))
    return acc


class Automorphism:
    """Field automorphism given by the exact image of alpha."""

    def __init__(self, field, image):
        self.field = field
        self.image = image
        gen_powers = [field.one()]
        for _ in range(3):
            gen_powers.append(qr_mul(gen_powers[-1], image))
        self._powers = gen_powers

    def __call__(self, elem):
        acc = self.field.from_rational(0)
        for c, p in zip(elem.coords, self._powers):
            if c:
                acc = qr_add(acc, QuarticElem(self.field,
                                              tuple(c * v for v in p.coords)))
        return acc

    def compose(self, other):
        return Automorphism(self.field, self(other.image))

    def is_identity(self):
        return self.image == self.field.gen()


def _reconstruct_elem(field, roots, values, denom_bound):
    """Solve Vandermonde(roots) * c = values and reconstruct rational c."""
    n = len(roots)
    mat = mpmath.matrix([[roots[i] ** k for k in range(n)] for i in range(n)])
    vec = mpmath.matrix(values)
    sol = mpmath.lu_solve(mat, vec)
    return QuarticElem(field, tuple(reconstruct_rational(sol[i], denom_bound)
                                    for i in range(n)))


def galois_generator(field):
    """An exact order-4 automorphism, or raise NotCyclicError.

    Tries every root permutation fixing no root, reconstructs the image of
    alpha, and keeps the first exactly-verified generator.  Deterministic:
    permutations are tried in lexicographic order over root indices.
    """
    import itertools

    with mpf_ctx(_AUT_PRECISION):
        roots = field.roots(_AUT_PRECISION)
        for j in range(1, 4):
            rest = [k for k in range(4) if k != j]
            for tail in itertools.permutations(rest):
                perm = (j,) + tail
                try:
                    cand = _reconstruct_elem(
                        field, roots, [roots[perm[i]] for i in range(4)],
                        _AUT_DENOM_BOUND)
                except (ZeroDivisionError, ValueError):
                    continue
                if not eval_poly_at(field, cand).is_zero():
                    continue
                tau = Automorphism(field, cand)
                t2 = tau.compose(tau)
                if t2.is_identity():
                    continue
                t4 = t2.compose(t2)
                if t4.is_identity():
                    return tau
    raise NotCyclicError("no order-4 automorphism found; field is not cyclic")


def sqrt_of_rational(field, q, precision_bits=_AUT_PRECISION,
                     denom_bound=_AUT_DENOM_BOUND):
    """Element x of L with x^2 = q (rational q > 0), or None.

    Chooses the root with positive id-embedding.  Exact verification.
    """
    q = Fraction(q)
    if q <= 0:
        return None
    with mpf_ctx(precision_bits):
        roots = field.roots(precision_bits)
        target = mpmath.sqrt(mpmath.mpf(q.numerator) / q.denominator)
        for signs in ((1, 1, 1), (1, 1, -1), (1, -1, 1), (1, -1, -1),
                      (-1, 1, 1), (-1, 1, -1), (-1, -1, 1), (-1, -1, -1)):
            values = [target] + [s * target for s in signs]
            try:
                cand = _reconstruct_elem(field, roots, values, denom_bound)
            except (ZeroDivisionError, ValueError):
                continue
            if qr_mul(cand, cand) == field.from_rational(q):
                return cand
    return None


def embed_all(a, precision_bits=128):
    """Values of a at the four real roots (descending root order)."""
    with mpf_ctx(precision_bits):
        roots = a.field.roots(precision_bits)

        def frac(v):
            return mpmath.mpf(v.numerator) / v.denominator

        out = []
        for r in roots:
            out.append(frac(a.coords[0]) + frac(a.coords[1]) * r
                       + frac(a.coords[2]) * r ** 2 + frac(a.coords[3]) * r ** 3)
        return tuple(out)
