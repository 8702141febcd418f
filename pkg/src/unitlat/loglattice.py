"""Logarithmic embeddings, exterior squares and minimal 1-norm search.

Coordinate conventions: log vectors are indexed by Galois elements,
(id, s1, s2, s3) for Klein fields and (id, s, s^2, s^3) for cyclic ones.
The 6 exterior-square coordinates follow the fixed basis order
  id^s1, s2^s3, id^s3, s1^s2, id^s2, s1^s3
(with s->s_k relabelled accordingly in the cyclic convention).
"""

import warnings
from dataclasses import dataclass

import mpmath
import numpy as np

from .precision import DEFAULT_PRECISION, mpf_ctx
from . import biquadratic, quartic

# index pairs of the wedge basis, identical for both conventions
WEDGE_PAIRS = ((0, 1), (2, 3), (0, 3), (1, 2), (0, 2), (1, 3))

WEDGE_LABELS = {
    "klein": ("id^s1", "s2^s3", "id^s3", "s1^s2", "id^s2", "s1^s3"),
    "cyclic": ("id^s", "s2^s3", "id^s3", "s^s2", "id^s2", "s^s3"),
}


@dataclass(frozen=True)
class LogVector:
    coords: tuple  # 4 mpfs
    convention: str  # "klein" | "cyclic"
    precision_bits: int

    def __post_init__(self):
        if self.convention not in ("klein", "cyclic"):
            raise ValueError("unknown convention %r" % (self.convention,))
        tol = 4 * mpmath.mpf(2) ** (-self.precision_bits + 8)
        scale = max([abs(c) for c in self.coords] + [mpmath.mpf(1)])
        if abs(sum(self.coords, mpmath.mpf(0))) > tol * scale:
            raise ValueError("log vector of a unit must sum to zero")


@dataclass(frozen=True)
class Wedge2Vector:
    coords: tuple  # 6 mpfs
    convention: str
    precision_bits: int

    def to_json(self):
        return {"basis_order": list(WEDGE_LABELS[self.convention]),
                "coords": [mpmath.nstr(c, 20) for c in self.coords]}


def log_embed_klein(x, precision_bits=DEFAULT_PRECISION,
                    order=biquadratic.GALOIS_KLEIN):
    """LOG of a unit of a biquadratic field; domain error on non-units.

    order lists the Galois elements occupying the four coordinates; pass
    the sorted-unit fixers to reproduce the labelling where s_i fixes the
    subfield of u_i.
    """
    if not biquadratic.is_unit(x):
        raise ValueError("log_embed requires a unit")
    if order[0] != "id" or sorted(order) != sorted(biquadratic.GALOIS_KLEIN):
        raise ValueError("order must list id first and all Galois elements")
    with mpf_ctx(precision_bits):
        emb = biquadratic.embed_real(x, precision_bits)
        native = dict(zip(biquadratic.GALOIS_KLEIN, emb))
        return LogVector(tuple(mpmath.log(abs(native[g])) for g in order),
                         "klein", precision_bits)


def log_embed_cyclic(x, sigma, precision_bits=DEFAULT_PRECISION):
    """LOG of a unit of a cyclic quartic field, coordinates ordered by
    id, sigma, sigma^2, sigma^3 (each image taken in the id-embedding)."""
    if not (quartic.is_algebraic_integer(x) and abs(quartic.norm_to_Q(x)) == 1):
        raise ValueError("log_embed requires a unit")
    with mpf_ctx(precision_bits):
        coords = []
        img = x
        for _ in range(4):
            coords.append(mpmath.log(abs(quartic.embed_all(img, precision_bits)[0])))
            img = sigma(img)
        return LogVector(tuple(coords), "cyclic", precision_bits)


def wedge2(a, b):
    if a.convention != b.convention or a.precision_bits != b.precision_bits:
        raise ValueError("wedge of vectors in different conventions")
    with mpf_ctx(a.precision_bits):
        c = tuple(a.coords[i] * b.coords[j] - a.coords[j] * b.coords[i]
                  for i, j in WEDGE_PAIRS)
    return Wedge2Vector(c, a.convention, a.precision_bits)


def one_norm(w):
    return sum((abs(c) for c in w.coords), mpmath.mpf(0))


def two_norm(w):
    return mpmath.sqrt(sum((c * c for c in w.coords), mpmath.mpf(0)))


def klein_norm_closed(n1, n2, n3, x1, x2, x3):
    """Closed form for the 1-norm of n1*L2^L3 + n2*L1^L3 + n3*L1^L2."""
    if not (x1 > x2 > x3 > 0):
        warnings.warn("expected X1 > X2 > X3 > 0 for a sorted Klein field",
                      stacklevel=2)
    t1, t2, t3 = abs(n1 * x1), abs(n2 * x2), abs(n3 * x3)
    return 4 * (max(t2, t3) + max(t1, t2) + max(t1, t3))


def cyclic_f(n1, n2, n3, w1, w2, w3):
    """Closed form for the 1-norm of the cyclic wedge combination."""
    if w1 == 0 or w2 == 0 or w3 == 0:
        warnings.warn("W1, W2, W3 should be nonzero for a unit triple",
                      stacklevel=2)
    y1 = w2 * w2 + w3 * w3
    y2 = 2 * w1 * w2
    y3 = 2 * w1 * w3
    y4 = w1 * w2 + w1 * w3
    y5 = w1 * w2 - w1 * w3
    return (2 * max(abs(n1 * y4 - n2 * y5), abs(n3 * y1))
            + 2 * max(abs(n1 * y5 + n2 * y4), abs(n3 * y1))
            + abs(-n1 * y2 - n2 * y3) + abs(n1 * y3 - n2 * y2))


def summax_check(x, y, precision_bits=53):
    """|X+Y| + |X-Y| == 2*max(|X|, |Y|) to relative tolerance."""
    lhs = abs(x + y) + abs(x - y)
    rhs = 2 * max(abs(x), abs(y))
    tol = 2.0 ** (-precision_bits + 8)
    return abs(lhs - rhs) <= tol * max(abs(lhs), abs(rhs), 1)


def absin_check(m, n, x, y):
    """|mX+nY| + |nX-mY| >= |X| + |Y| for (m, n) != (0, 0)."""
    if m == 0 and n == 0:
        raise ValueError("(m, n) = (0, 0) is excluded")
    lhs = abs(m * x + n * y) + abs(n * x - m * y)
    rhs = abs(x) + abs(y)
    return lhs >= rhs * (1 - 1e-12)


@dataclass(frozen=True)
class LatticeSpec:
    """Coefficient lattice (1/denominator) * {n in Z^3 : parity} over basis."""

    basis: tuple  # 3 Wedge2Vectors
    denominator: int = 1
    parity_constraint: str = None  # None | "even" (n1+n2+n3 even)

    def __post_init__(self):
        if len(self.basis) != 3:
            raise ValueError("need a rank-3 basis")
        if self.denominator not in (1, 2, 4):
            raise ValueError("denominator must be 1, 2 or 4")
        if self.parity_constraint not in (None, "even"):
            raise ValueError("unknown parity constraint %r"
                             % (self.parity_constraint,))


def gram_matrix(spec):
    b = spec.basis
    return [[sum((x * y for x, y in zip(b[i].coords, b[j].coords)),
                 mpmath.mpf(0)) for j in range(3)] for i in range(3)]


_GRAM_DET_MARGIN = 1e-24


def _lambda_min_lower_bound(gram):
    """Certified positive lower bound on the smallest Gram eigenvalue.

    Starts from a floating estimate, shrinks it slightly, and certifies
    G - mu*I positive definite by its leading principal minors at working
    precision (Sylvester).
    """
    gnp = np.array([[float(v) for v in row] for row in gram])
    est = float(np.linalg.eigvalsh(gnp)[0])
    if est <= 0:
        raise ValueError("dependent basis: Gram matrix not positive definite")
    mu = mpmath.mpf(est) * (1 - mpmath.mpf("1e-9"))
    for _ in range(60):
        g = [[gram[i][j] - (mu if i == j else 0) for j in range(3)] for i in range(3)]
        m1 = g[0][0]
        m2 = g[0][0] * g[1][1] - g[0][1] * g[1][0]
        m3 = (g[0][0] * (g[1][1] * g[2][2] - g[1][2] * g[2][1])
              - g[0][1] * (g[1][0] * g[2][2] - g[1][2] * g[2][0])
              + g[0][2] * (g[1][0] * g[2][1] - g[1][1] * g[2][0]))
        if m1 > 0 and m2 > 0 and m3 > 0:
            return mu
        mu = mu / 2
    raise ValueError("dependent basis: could not certify Gram positivity")


def _admissible(parity):
    def check(n1, n2, n3):
        if parity == "even":
            return (n1 + n2 + n3) % 2 == 0
        return True
    return check


def min_one_norm(spec, coeff_bound):
    """Certified minimal 1-norm over nonzero admissible coefficient triples
    with max|n_i| <= coeff_bound.

    Returns (value: mpf, argmin: (n1, n2, n3), certified: bool); certified
    means no triple outside the box can beat the minimum (2-norm bound from
    the smallest Gram eigenvalue).
    """
    if coeff_bound < 1:
        raise ValueError("coeff_bound must be >= 1")
    gram = gram_matrix(spec)
    det = (gram[0][0] * (gram[1][1] * gram[2][2] - gram[1][2] * gram[2][1])
           - gram[0][1] * (gram[1][0] * gram[2][2] - gram[1][2] * gram[2][0])
           + gram[0][2] * (gram[1][0] * gram[2][1] - gram[1][1] * gram[2][0]))
    if det <= _GRAM_DET_MARGIN:
        raise ValueError("dependent basis: Gram determinant below margin")

    bmat = np.array([[float(c) for c in v.coords] for v in spec.basis])
    rng = np.arange(-coeff_bound, coeff_bound + 1)
    grid = np.stack(np.meshgrid(rng, rng, rng, indexing="ij"), axis=-1)
    triples = grid.reshape(-1, 3)
    mask = np.any(triples != 0, axis=1)
    if spec.parity_constraint == "even":
        mask &= triples.sum(axis=1) % 2 == 0
    triples = triples[mask]
    norms = np.abs(triples @ bmat).sum(axis=1) / spec.denominator
    best = norms.min()
    near = triples[norms <= best * (1 + 1e-9) + 1e-300]

    # re-evaluate the near-minimal triples at working precision
    def exact_norm(n):
        total = mpmath.mpf(0)
        for k in range(6):
            total += abs(sum(int(n[i]) * spec.basis[i].coords[k] for i in range(3)))
        return total / spec.denominator

    prec = spec.basis[0].precision_bits
    with mpf_ctx(prec):
        evals = sorted((exact_norm(n), tuple(int(v) for v in n)) for n in near)
        value, _ = evals[0]
        tol = mpmath.mpf(2) ** (-prec // 2) * max(value, mpmath.mpf(1))
        argmin = min(t for v, t in evals if v <= value + tol)

        lam = _lambda_min_lower_bound(gram)
        outside = mpmath.sqrt(lam) * (coeff_bound + 1) / spec.denominator
        certified = bool(outside >= value)
    return value, argmin, certified


def min_result_json(value, argmin, certified):
    return {"min": {"value": mpmath.nstr(value, 15), "argmin": list(argmin),
                    "certified": certified}}
