import random
from fractions import Fraction

import pytest

from unitlat.quartic import (CyclicQuarticField, NotCyclicError, QuarticElem,
                             char_poly, embed_all, eval_poly_at,
                             galois_generator, is_algebraic_integer, norm_to_Q,
                             qr_add, qr_inv, qr_mul, qr_neg, qr_pow,
                             sqrt_of_rational)

# maximal real subfield of the 16th cyclotomic field
F = CyclicQuarticField((2, 0, -4, 0, 1))


def rand_elem(field, rng, span=5):
    return QuarticElem(field, tuple(Fraction(rng.randint(-span, span))
                                    for _ in range(4)))


def test_ring_axioms_random():
    rng = random.Random(1)
    for _ in range(100):
        a, b, c = (rand_elem(F, rng) for _ in range(3))
        assert qr_mul(a, b) == qr_mul(b, a)
        assert qr_mul(a, qr_mul(b, c)) == qr_mul(qr_mul(a, b), c)
        assert qr_mul(a, qr_add(b, c)) == qr_add(qr_mul(a, b), qr_mul(a, c))


def test_defining_relation():
    alpha = F.gen()
    # alpha^4 = 4 alpha^2 - 2
    assert qr_pow(alpha, 4) == QuarticElem(F, (-2, 0, 4, 0))
    assert eval_poly_at(F, alpha).is_zero()


def test_norm_and_inverse():
    rng = random.Random(2)
    assert norm_to_Q(F.gen()) == 2
    for _ in range(40):
        a = rand_elem(F, rng)
        if a.is_zero():
            continue
        assert qr_mul(a, qr_inv(a)) == F.one()
    b = rand_elem(F, rng)
    assert norm_to_Q(qr_mul(F.gen(), b)) == 2 * norm_to_Q(b)


def test_char_poly_of_generator():
    assert char_poly(F.gen()) == [Fraction(c) for c in (1, 0, -4, 0, 2)]
    assert is_algebraic_integer(F.gen())
    assert not is_algebraic_integer(F.from_rational(Fraction(1, 2)))


def test_galois_generator_exact():
    sigma = galois_generator(F)
    # sigma(alpha) = alpha^3 - 3*alpha
    assert sigma.image == QuarticElem(F, (0, -3, 0, 1))
    assert eval_poly_at(F, sigma.image).is_zero()
    s2 = sigma.compose(sigma)
    assert not s2.is_identity()
    assert s2.compose(s2).is_identity()
    # automorphism property on random elements
    rng = random.Random(3)
    for _ in range(20):
        a, b = rand_elem(F, rng), rand_elem(F, rng)
        assert sigma(qr_mul(a, b)) == qr_mul(sigma(a), sigma(b))


def test_sqrt_of_rational():
    root = sqrt_of_rational(F, 2)
    assert root == QuarticElem(F, (-2, 0, 1, 0))  # alpha^2 - 2
    assert embed_all(root, 64)[0] > 0
    assert sqrt_of_rational(F, 3) is None
    assert sqrt_of_rational(F, -2) is None


def test_embeddings_descending_and_conjugate():
    roots = F.roots(96)
    assert all(roots[i] > roots[i + 1] for i in range(3))
    assert abs(float(roots[0]) - (2 + 2 ** 0.5) ** 0.5) < 1e-12
    # norm as product of embeddings
    a = QuarticElem(F, (1, 1, 0, 0))
    prod = 1.0
    for v in embed_all(a, 96):
        prod *= float(v)
    assert abs(prod - float(norm_to_Q(a))) < 1e-9


def test_not_cyclic_rejected():
    with pytest.raises(NotCyclicError):
        CyclicQuarticField((-2, 0, 0, 0, 1)).roots()  # x^4 - 2, complex roots
    with pytest.raises(NotCyclicError):
        # x^4 - 10x^2 + 1 is totally real but biquadratic (Klein group)
        galois_generator(CyclicQuarticField((1, 0, -10, 0, 1)))


def test_bad_polynomial_rejected():
    with pytest.raises(ValueError):
        CyclicQuarticField((1, 0, -4, 0, 2))  # not monic
    with pytest.raises(ValueError):
        CyclicQuarticField((1, 0, 1))
