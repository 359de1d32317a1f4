from __future__ import annotations

from fractions import Fraction

import pytest
import sympy

from mahler.field import FieldDescriptor, RadicalMonomial, field_for, monomial_value, root_of_unity
from mahler.vcoeffs import universal_v, v_coeff


def sympy_universal(p: int, s: int, k: int) -> Fraction:
    # coefficient of t^(s-k) in (sum_{j<p} (1+t)^j)^(-s)
    t = sympy.Symbol("t")
    series = sympy.series(sum((1 + t) ** j for j in range(p)) ** (-s), t, 0, s - k + 1).removeO()
    c = sympy.Poly(series, t).coeff_monomial(t ** (s - k))
    return Fraction(int(c.p), int(c.q))


@pytest.mark.parametrize("p", [2, 3, 4, 5])
def test_table_matches_series_expansion(p):
    V = universal_v(p, 4)
    for s in range(1, 5):
        for k in range(1, s + 1):
            assert V(s, k) == sympy_universal(p, s, k)


def test_known_values():
    V = universal_v(3, 2)
    assert V(2, 2) == Fraction(1, 9)
    assert V(2, 1) == Fraction(-2, 9)
    V2 = universal_v(2, 3)
    assert [V2(3, k) for k in (3, 2, 1)] == [Fraction(1, 8), Fraction(-3, 16), Fraction(3, 16)]


def test_extend_keeps_entries():
    small = universal_v(3, 2)
    big = small.extend(5)
    assert big(2, 1) == small(2, 1)
    assert big(5, 5) == Fraction(1, 3**5)


def test_v_coeff_scales_by_monomial():
    alpha = RadicalMonomial.make(3, radical={2: Fraction(1, 3)}) * root_of_unity(3, 1, 3)
    F = field_for([alpha], 3)
    V = universal_v(3, 2)
    a = monomial_value(alpha, F)
    got = v_coeff(V, alpha, 2, 1, F)
    assert got * a**5 == Fraction(-2, 9)
    assert v_coeff(V, a, 2, 1) == got


def test_v_coeff_needs_a_field_for_monomials():
    with pytest.raises(ValueError):
        v_coeff(universal_v(2, 1), RadicalMonomial.make(2, scalar=2), 1, 1)
    F = FieldDescriptor(p=2)
    assert v_coeff(universal_v(2, 1), RadicalMonomial.make(2, scalar=2), 1, 1, F) == Fraction(1, 4)
