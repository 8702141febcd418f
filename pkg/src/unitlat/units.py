"""Unit-group structure: Klein generator sets via square-root tests, and
cyclic-quartic catalog entries validated through Hasse's exact relations.

Klein case: the square classes of O_L^* over the subfield-unit group E are
determined by testing which products u1^e1 u2^e2 u3^e3 are squares in L;
the F2-rank of the found patterns gives the index [O_L^*: +-E].

Cyclic case: full unit-group computation is out of scope, so entries carry
claimed generators (relative unit u0, optional u_star) which are verified
exactly against Hasse's relations plus a regulator cross-check against a
brute-force-found sublattice.
"""

import itertools
from dataclasses import dataclass, field as dc_field
from fractions import Fraction

import mpmath
import numpy as np

from .precision import DEFAULT_PRECISION, mpf_ctx
from .quadratic import (QuadElem, fundamental_unit, quad_cmp, quad_pow)
from . import biquadratic as bq
from . import quartic as qt
from .biquadratic import BiquadField, biq_mul, biq_pow, sqrt_in_field
from .loglattice import log_embed_klein, log_embed_cyclic, LogVector

SQRT_SEARCH_LEVELS = ((256, 10 ** 9), (512, 10 ** 15))


class UnresolvedPatternError(ArithmeticError):
    """A square-root pattern stayed unresolved after escalation."""


class CatalogValidationError(ValueError):
    """A cyclic catalog entry failed an exact Hasse relation."""


# ---------------------------------------------------------------------------
# Klein case


def subfield_units(d1, d2, precision_bits=DEFAULT_PRECISION):
    """Fundamental units of the three quadratic subfields of Q(sqrt(d1),
    sqrt(d2)), sorted ascending by real value.

    Returns (units, fixers, permutation): fixers[i] is the Galois element
    fixing the subfield of units[i]; permutation maps sorted positions to
    the native (d1, d2, d3) order.
    """
    field = BiquadField(d1, d2)
    native = [(fundamental_unit(d, precision_bits).unit, fixer)
              for d, fixer in ((field.d1, "s1"), (field.d2, "s2"),
                               (field.d3, "s3"))]
    order = sorted(range(3), key=_cmp_key([u for u, _ in native]))
    units = tuple(native[i][0] for i in order)
    fixers = tuple(native[i][1] for i in order)
    return units, fixers, tuple(order)


def _cmp_key(units):
    import functools

    @functools.cmp_to_key
    def key(i, j):
        return quad_cmp(units[i], units[j])
    return key


@dataclass(frozen=True)
class KleinUnitStructure:
    field: BiquadField
    units: tuple           # (u1, u2, u3) sorted ascending, QuadElems
    fixers: tuple          # Galois element fixing the subfield of each unit
    sqrt_patterns: tuple   # exponent triples e with sqrt(u1^e1 u2^e2 u3^e3) in O_L^*
    sqrt_elements: dict    # pattern -> exact square root (BiquadElem)
    index_over_E: int
    generators: tuple      # 3 BiquadElems generating O_L^* mod +-1
    unresolved: tuple = ()

    def galois_order(self):
        return ("id",) + self.fixers

    def to_json(self):
        return {
            "d1": self.field.d1, "d2": self.field.d2, "d3": self.field.d3,
            "units": [u.to_json() for u in self.units],
            "sqrt_patterns": [list(p) for p in self.sqrt_patterns],
            "index_over_E": self.index_over_E,
            "generators": [g.to_json() for g in self.generators],
            "unresolved": [list(p) for p in self.unresolved],
        }


def _f2_basis(patterns):
    """Greedy F2 Gaussian elimination; returns (rank, [(pattern, pivot)]).

    Pivots of the reduced rows are distinct, so they give a valid slot
    assignment when square roots replace generators.
    """
    basis_rows = []
    chosen = []
    for p in patterns:
        row = list(p)
        for b in basis_rows:
            pivot = next(i for i, v in enumerate(b) if v)
            if row[pivot]:
                row = [(x + y) % 2 for x, y in zip(row, b)]
        if any(row):
            basis_rows.append(row)
            chosen.append((p, next(i for i, v in enumerate(row) if v)))
    return len(basis_rows), chosen


def klein_unit_structure(d1, d2, precision_bits=DEFAULT_PRECISION,
                         search_levels=SQRT_SEARCH_LEVELS):
    """Determine [O_L^*: +-E] and a generating set by testing all seven
    square-root patterns, with one precision/denominator escalation."""
    field = BiquadField(d1, d2)
    units, fixers, _ = subfield_units(d1, d2, precision_bits)
    lifts = [field.lift_quad(u) for u in units]

    patterns = []
    roots = {}
    unresolved = []
    for e in itertools.product((0, 1), repeat=3):
        if e == (0, 0, 0):
            continue
        prod = field.one()
        for ei, lift in zip(e, lifts):
            if ei:
                prod = biq_mul(prod, lift)
        root = None
        for bits, bound in search_levels:
            root = sqrt_in_field(prod, bits, bound)
            if root is not None:
                break
        if root is not None:
            assert bq.is_unit(root)
            patterns.append(e)
            roots[e] = root

    rank, basis_patterns = _f2_basis(patterns)
    generators = list(lifts)
    for p, slot in basis_patterns:
        generators[slot] = roots[p]

    return KleinUnitStructure(
        field=field, units=units, fixers=fixers,
        sqrt_patterns=tuple(patterns), sqrt_elements=roots,
        index_over_E=2 ** rank, generators=tuple(generators),
        unresolved=tuple(unresolved))


def klein_log_vectors(struct, precision_bits=DEFAULT_PRECISION):
    """LOG(u1), LOG(u2), LOG(u3) in the sorted-unit Galois labelling."""
    order = struct.galois_order()
    return tuple(log_embed_klein(struct.field.lift_quad(u), precision_bits,
                                 order=order) for u in struct.units)


def klein_denominator(index_over_E):
    """Lattice denominator implied by the index: each square-root generator
    halves at most one factor of a wedge, two or more halve both."""
    return {1: 1, 2: 2, 4: 4, 8: 4}[index_over_E]


def generator_square_exponents(struct):
    """For each generator g, exponents (m1, m2, m3) with g^2 = u1^m1 u2^m2 u3^m3,
    solved exactly; confirms every generator squares into E."""
    out = []
    for g in struct.generators:
        sq = biq_mul(g, g)
        emb = bq.embed_real(sq, 256)
        target = [mpmath.log(abs(v)) for v in emb]
        # solve with the three unit log-embedding vectors (4 coords, rank 3)
        rows = []
        for u in struct.units:
            rows.append([mpmath.log(abs(v))
                         for v in bq.embed_real(struct.field.lift_quad(u), 256)])
        a = mpmath.matrix([[rows[j][i] for j in range(3)] for i in range(3)])
        b = mpmath.matrix([target[i] for i in range(3)])
        sol = mpmath.lu_solve(a, b)
        exps = tuple(int(mpmath.nint(sol[i])) for i in range(3))
        check = struct.field.one()
        for m, u in zip(exps, struct.units):
            check = biq_mul(check, field_pow(struct.field, u, m))
        if check != sq and check != bq.biq_neg(sq):
            raise ArithmeticError("generator square does not land in E")
        out.append(exps)
    return out


def field_pow(field, quad_unit, m):
    return field.lift_quad(quad_pow(quad_unit, m))


# ---------------------------------------------------------------------------
# Cyclic case


@dataclass(frozen=True)
class CyclicCatalogEntry:
    label: str
    coeffs: tuple            # defining polynomial, constant term first
    quad_subfield_d: int
    u_l: QuadElem
    u0: tuple                # power-basis coordinates (Fractions)
    u_star: tuple = None     # present iff Q_index == 2
    Q_index: int = 1

    def __post_init__(self):
        if self.Q_index not in (1, 2):
            raise CatalogValidationError("Q_index must be 1 or 2")
        if self.Q_index == 2 and self.u_star is None:
            raise CatalogValidationError("Q_index = 2 requires u_star")

    def field(self):
        return qt.CyclicQuarticField(self.coeffs)

    def to_json(self):
        return {
            "label": self.label,
            "defining_polynomial": list(self.coeffs),
            "quad_subfield_d": self.quad_subfield_d,
            "u_l": self.u_l.to_json(),
            "u0": [str(c) for c in self.u0],
            "u_star": None if self.u_star is None else [str(c) for c in self.u_star],
            "Q_index": self.Q_index,
        }

    @classmethod
    def from_json(cls, obj):
        star = obj.get("u_star")
        return cls(
            label=obj["label"],
            coeffs=tuple(obj["defining_polynomial"]),
            quad_subfield_d=obj["quad_subfield_d"],
            u_l=QuadElem.from_json(obj["u_l"]),
            u0=tuple(Fraction(c) for c in obj["u0"]),
            u_star=None if star is None else tuple(Fraction(c) for c in star),
            Q_index=obj["Q_index"],
        )


def quartic_is_irreducible(coeffs):
    """Exact irreducibility over Q for a monic integer quartic: no integer
    roots, no monic integer quadratic factors (Gauss)."""
    c0, c1, c2, c3, _ = coeffs
    if c0 == 0:
        return False
    for r in _divisors(abs(c0)):
        for root in (r, -r):
            if ((root ** 4) + c3 * root ** 3 + c2 * root ** 2
                    + c1 * root + c0) == 0:
                return False
    for b in _divisors(abs(c0)):
        for bb in (b, -b):
            if c0 % bb != 0:
                continue
            dd = c0 // bb
            # (x^2+ax+bb)(x^2+cx+dd): a+c = c3, ac = c2-bb-dd, a*dd+c*bb = c1
            s, prod = c3, c2 - bb - dd
            disc = s * s - 4 * prod
            if disc < 0:
                continue
            sq = _isqrt_exact(disc)
            if sq is None or (s + sq) % 2 != 0:
                continue
            for a in {(s + sq) // 2, (s - sq) // 2}:
                c = s - a
                if a * dd + c * bb == c1:
                    return False
    return True


def _divisors(n):
    out = []
    i = 1
    while i * i <= n:
        if n % i == 0:
            out.extend((i, n // i))
        i += 1
    return sorted(set(out))


def _isqrt_exact(n):
    from math import isqrt
    r = isqrt(n)
    return r if r * r == n else None


@dataclass
class CyclicFieldContext:
    """Cached exact machinery for a verified-or-in-progress entry."""

    field: qt.CyclicQuarticField
    sigma: qt.Automorphism
    sqrt_d: qt.QuarticElem    # image of sqrt(quad_subfield_d) in L
    u_l_emb: qt.QuarticElem   # image of the quadratic fundamental unit


def cyclic_context(entry):
    field = entry.field()
    if not quartic_is_irreducible(entry.coeffs):
        raise CatalogValidationError("defining polynomial is reducible")
    sigma = qt.galois_generator(field)
    sqrt_d = qt.sqrt_of_rational(field, entry.quad_subfield_d)
    if sqrt_d is None:
        raise CatalogValidationError(
            "sqrt(%d) does not lie in the field" % entry.quad_subfield_d)
    u = entry.u_l
    u_l_emb = qt.qr_add(field.from_rational(u.a),
                        qt.QuarticElem(field, tuple(u.b * c for c in sqrt_d.coords)))
    return CyclicFieldContext(field, sigma, sqrt_d, u_l_emb)


def _is_pm(x, target):
    return x == target or x == qt.qr_neg(target)


@dataclass
class HasseReport:
    relations: dict  # name -> bool

    @property
    def passed(self):
        return all(self.relations.values())

    def failures(self):
        return [k for k, v in self.relations.items() if not v]


def verify_hasse_relations(entry, ctx=None):
    """Exact pass/fail per Hasse relation for a catalog entry."""
    ctx = ctx or cyclic_context(entry)
    field, sigma = ctx.field, ctx.sigma
    s2 = sigma.compose(sigma)
    one = field.one()
    u0 = qt.QuarticElem(field, entry.u0)

    rel = {}
    rel["u_l is the fundamental unit of Q(sqrt(d))"] = (
        entry.u_l == fundamental_unit(entry.quad_subfield_d).unit)
    rel["u0 is a unit"] = (qt.is_algebraic_integer(u0)
                           and abs(qt.norm_to_Q(u0)) == 1)
    rel["N_{L/l}(u0) = +-1"] = _is_pm(qt.qr_mul(u0, s2(u0)), one)
    rel["sigma^2(u0) = +-1/u0"] = rel["N_{L/l}(u0) = +-1"]
    rel["u0 independent of u_l"] = _independent_of_ul(entry, ctx, u0)

    if entry.Q_index == 2:
        us = qt.QuarticElem(field, entry.u_star)
        rel["u_star is a unit"] = (qt.is_algebraic_integer(us)
                                   and abs(qt.norm_to_Q(us)) == 1)
        rel["N_{L/l}(u_star) = u_star sigma^2(u_star) = +-u_l"] = _is_pm(
            qt.qr_mul(us, s2(us)), ctx.u_l_emb)
        rel["u_star sigma(u_star) = +-u0"] = _is_pm(
            qt.qr_mul(us, sigma(us)), u0)
        rel["u_star^2 = +-u_l u0 / sigma(u0)"] = _is_pm(
            qt.qr_mul(qt.qr_mul(us, us), sigma(u0)),
            qt.qr_mul(ctx.u_l_emb, u0))
    return HasseReport(rel)


def _independent_of_ul(entry, ctx, u0):
    with mpf_ctx(128):
        lv_ul = log_embed_cyclic(ctx.u_l_emb, ctx.sigma, 128).coords
        lv_u0 = log_embed_cyclic(u0, ctx.sigma, 128).coords
        cross = max(abs(lv_ul[i] * lv_u0[j] - lv_ul[j] * lv_u0[i])
                    for i in range(4) for j in range(i + 1, 4))
        return cross > mpmath.mpf(2) ** (-64)


def cyclic_generators(entry, ctx=None):
    """Generators of O_L^* mod +-1: (u_l, u0, sigma(u0)) for Q=1 and
    (u_l, u0, u_star) for Q=2.  Requires the Hasse relations to pass."""
    ctx = ctx or cyclic_context(entry)
    report = verify_hasse_relations(entry, ctx)
    if not report.passed:
        raise CatalogValidationError(
            "entry failed relations: %s" % ", ".join(report.failures()))
    field = ctx.field
    u0 = qt.QuarticElem(field, entry.u0)
    if entry.Q_index == 1:
        return (ctx.u_l_emb, u0, ctx.sigma(u0))
    return (ctx.u_l_emb, u0, qt.QuarticElem(field, entry.u_star))


def cyclic_log_vectors(entry, ctx=None, precision_bits=DEFAULT_PRECISION):
    """LOG(u_l), LOG(u0), LOG(sigma(u0)) in the cyclic Galois order, plus
    the scalar triple (W1, W2, W3)."""
    ctx = ctx or cyclic_context(entry)
    u0 = qt.QuarticElem(ctx.field, entry.u0)
    lv_ul = log_embed_cyclic(ctx.u_l_emb, ctx.sigma, precision_bits)
    lv_u0 = log_embed_cyclic(u0, ctx.sigma, precision_bits)
    lv_su0 = log_embed_cyclic(ctx.sigma(u0), ctx.sigma, precision_bits)
    return (lv_ul, lv_u0, lv_su0), (lv_ul.coords[0], lv_u0.coords[0],
                                    lv_su0.coords[0])


# ---------------------------------------------------------------------------
# Relative unit search (desk-scale oracle used to populate catalog entries)


def search_relative_units(coeffs, quad_subfield_d, height_bound,
                          include_u_star=True):
    """Enumerate power-basis integer vectors with |coords| <= height_bound,
    keep units (N_{L/Q} = +-1) whose relative norm is +-u_l^k, and return
    them sorted by log magnitude.

    Returns a list of (element, k) pairs: k = 0 marks a relative unit,
    odd k marks a u_star witness (only when include_u_star).
    Elements multiplicatively dependent on u_l alone are dropped.
    """
    if height_bound < 1:
        return []
    field = qt.CyclicQuarticField(coeffs)
    sigma = qt.galois_generator(field)
    s2 = sigma.compose(sigma)
    ul = fundamental_unit(quad_subfield_d)
    sqrt_d = qt.sqrt_of_rational(field, quad_subfield_d)
    if sqrt_d is None:
        raise CatalogValidationError(
            "sqrt(%d) does not lie in the field" % quad_subfield_d)
    ul_emb = qt.qr_add(field.from_rational(ul.unit.a),
                       qt.QuarticElem(field,
                                      tuple(ul.unit.b * c for c in sqrt_d.coords)))

    with mpf_ctx(96):
        roots = [float(r) for r in field.roots(96)]
    vr = np.array([[r ** k for k in range(4)] for r in roots])  # 4 x 4
    h = height_bound
    rng = np.arange(-h, h + 1)
    grid = np.stack(np.meshgrid(rng, rng, rng, rng, indexing="ij"), axis=-1)
    coords = grid.reshape(-1, 4).astype(float)
    emb = coords @ vr.T
    norms = np.abs(emb).prod(axis=1)
    cand_mask = np.abs(norms - 1.0) < 1e-4
    candidates = coords[cand_mask].astype(int)

    w1 = float(ul.log_value)
    found = []
    seen = set()
    for c in candidates:
        elem = qt.QuarticElem(field, tuple(Fraction(int(v)) for v in c))
        if elem.is_rational():
            continue
        if abs(qt.norm_to_Q(elem)) != 1:
            continue
        rel = qt.qr_mul(elem, s2(elem))
        k = _ul_power_exponent(rel, ul_emb, field)
        if k is None:
            continue
        if not include_u_star and k % 2 != 0:
            continue
        # drop elements that are just +-u_l^m (log vector parallel to u_l's)
        le = [abs(float(v)) for v in qt.embed_all(elem, 96)]
        logs = [mpmath.log(v) for v in le]
        if _parallel_to_ul(logs, w1):
            continue
        key = tuple(int(v) for v in c)
        if key in seen or tuple(-v for v in key) in seen:
            continue
        seen.add(key)
        found.append((elem, k, sum(abs(v) for v in logs)))
    found.sort(key=lambda t: (float(t[2]), t[0].coords))
    return [(elem, k) for elem, k, _ in found]


def _ul_power_exponent(rel, ul_emb, field, max_exp=12):
    """If rel = +-u_l^k (k in Z), return k, else None; exact."""
    one = field.one()
    acc = one
    for k in range(max_exp + 1):
        if _is_pm(rel, acc):
            return k
        acc = qt.qr_mul(acc, ul_emb)
    acc = one
    inv = qt.qr_inv(ul_emb)
    for k in range(1, max_exp + 1):
        acc = qt.qr_mul(acc, inv)
        if _is_pm(rel, acc):
            return -k
    return None


def _parallel_to_ul(logs, w1):
    # u_l log pattern is (W1, -W1, W1, -W1) up to root ordering; parallel
    # candidates have all |log| equal
    avg = sum(logs) / 4
    return all(abs(v - avg) < 1e-9 for v in logs)


def populate_cyclic_entry(coeffs, quad_subfield_d, label, height_bound=6):
    """Build a catalog entry by brute-force search, then verify it."""
    field = qt.CyclicQuarticField(tuple(coeffs))
    sigma = qt.galois_generator(field)
    ul = fundamental_unit(quad_subfield_d)
    hits = search_relative_units(coeffs, quad_subfield_d, height_bound)
    if not hits:
        raise CatalogValidationError("no relative units found at height %d"
                                     % height_bound)
    star = next((e for e, k in hits if k % 2 != 0), None)
    if star is not None:
        k = next(k for e, k in hits if e == star)
        sqrt_d = qt.sqrt_of_rational(field, quad_subfield_d)
        ul_emb = qt.qr_add(field.from_rational(ul.unit.a),
                           qt.QuarticElem(field,
                                          tuple(ul.unit.b * c for c in sqrt_d.coords)))
        star = qt.qr_mul(star, qt.qr_pow(ul_emb, -(k - 1) // 2))
        if qt.embed_all(star, 96)[0] < 0:
            star = qt.qr_neg(star)
        u0 = qt.qr_mul(star, sigma(star))
        entry = CyclicCatalogEntry(
            label=label, coeffs=tuple(coeffs),
            quad_subfield_d=quad_subfield_d, u_l=ul.unit,
            u0=u0.coords, u_star=star.coords, Q_index=2)
    else:
        u0 = hits[0][0]
        entry = CyclicCatalogEntry(
            label=label, coeffs=tuple(coeffs),
            quad_subfield_d=quad_subfield_d, u_l=ul.unit,
            u0=u0.coords, Q_index=1)
    report = verify_hasse_relations(entry)
    if not report.passed:
        raise CatalogValidationError(
            "populated entry failed relations: %s" % ", ".join(report.failures()))
    return entry


def regulator_cross_check(entry, height_bound=6, ctx=None):
    """Compare the claimed-generator log lattice against all brute-force
    found units: every found unit must be an integer combination of the
    generators, and the index of the found sublattice must be a plausible
    integer <= 4.  Returns (ok, index_estimate)."""
    ctx = ctx or cyclic_context(entry)
    gens = cyclic_generators(entry, ctx)
    prec = 128
    with mpf_ctx(prec):
        gmat = mpmath.matrix([[float(0)] * 3 for _ in range(4)])
        logvecs = [log_embed_cyclic(g, ctx.sigma, prec).coords for g in gens]
        for i in range(4):
            for j in range(3):
                gmat[i, j] = logvecs[j][i]
        hits = search_relative_units(entry.coeffs, entry.quad_subfield_d,
                                     height_bound)
        coeff_rows = []
        for elem, _k in hits:
            b = mpmath.matrix([log_embed_cyclic(elem, ctx.sigma, prec).coords[i]
                               for i in range(4)])
            sol = mpmath.lu_solve(gmat, b)  # least squares (4x3)
            row = []
            for i in range(3):
                r = mpmath.nint(sol[i])
                if abs(sol[i] - r) > mpmath.mpf(2) ** (-32):
                    return False, None
                row.append(int(r))
            coeff_rows.append(row)
        if not coeff_rows:
            return True, 1
        idx = _integer_lattice_index(coeff_rows)
        return (idx is not None and 1 <= idx <= 4), idx


def _integer_lattice_index(rows):
    """Index in Z^3 of the lattice spanned by integer rows (None if rank < 3),
    via an incremental Hermite normal form over Z."""
    import math

    basis = {}  # pivot column -> echelon row

    def insert(row):
        row = list(row)
        while any(row):
            piv = next(j for j, v in enumerate(row) if v)
            if piv not in basis:
                if row[piv] < 0:
                    row = [-v for v in row]
                basis[piv] = row
                return
            b = basis[piv]
            g = math.gcd(b[piv], row[piv])
            x, y = _ext_gcd(b[piv], row[piv])
            newb = [x * bb + y * rr for bb, rr in zip(b, row)]
            newrow = [(b[piv] // g) * rr - (row[piv] // g) * bb
                      for bb, rr in zip(b, row)]
            basis[piv] = newb
            row = newrow

    for r in rows:
        insert(r)
    if len(basis) < 3:
        return None
    det = 1
    for piv in basis:
        det *= abs(basis[piv][piv])
    return det


def _ext_gcd(a, b):
    """(x, y) with x*a + y*b = gcd(a, b)."""
    old_r, r = a, b
    old_x, x = 1, 0
    old_y, y = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_x, x = x, old_x - q * x
        old_y, y = y, old_y - q * y
    if old_r < 0:
        old_x, old_y = -old_x, -old_y
    return old_x, old_y
