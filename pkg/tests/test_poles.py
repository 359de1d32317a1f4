from __future__ import annotations

from fractions import Fraction

import pytest

from samples import Q, poly

from mahler.field import RadicalMonomial, ZeroDivisor, root_of_unity
from mahler.poles import UnsupportedDenominator, binomial_exponent, find_poles


def test_binomial_exponent():
    assert binomial_exponent([Fraction(-2), 0, 0, Fraction(1)]) == (3, 2)
    assert binomial_exponent([Fraction(1), Fraction(1), Fraction(1)]) == (3, 1)


def test_roots_of_unity_and_multiplicities():
    b = poly(Q[2], [-1, 1]) ** 2 * poly(Q[2], [1, 1, 1])
    assert find_poles(b, 2) == [
        (root_of_unity(1, 0, 2), 2),
        (root_of_unity(3, 1, 2), 1),
        (root_of_unity(3, 2, 2), 1),
    ]


def test_radical_poles():
    poles = dict(find_poles(poly(Q[3], [-2, 0, 0, 1]), 3))
    root = RadicalMonomial.make(3, radical={2: Fraction(1, 3)})
    assert set(poles) == {root * root_of_unity(3, i, 3) for i in range(3)}
    poles = dict(find_poles(poly(Q[2], [3, 0, 1]), 2))
    sqrt3 = RadicalMonomial.make(2, radical={3: Fraction(1, 2)})
    assert set(poles) == {sqrt3 * root_of_unity(4, 1, 2), sqrt3 * root_of_unity(4, 3, 2)}


def test_unsupported_denominators():
    with pytest.raises(UnsupportedDenominator):
        find_poles(poly(Q[2], [-1, -1, 1]), 2)
    with pytest.raises(UnsupportedDenominator):
        find_poles(poly(Q[2], [-2, 0, 0, 1]), 2)
    # roots are sqrt(2)*zeta(8)^k, and sqrt(2) already lies in Q(zeta(8))
    with pytest.raises(ZeroDivisor):
        find_poles(poly(Q[2], [4, 0, 0, 0, 1]), 2)


def test_denominator_must_be_prime_to_x():
    with pytest.raises(ValueError):
        find_poles(poly(Q[2], [0, 1, 1]), 2)
