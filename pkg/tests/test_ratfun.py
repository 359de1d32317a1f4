from __future__ import annotations

import random
from fractions import Fraction

import pytest

from samples import Q, poly, random_proper, ratfun

from mahler.field import field_for, monomial_value, root_of_unity
from mahler.poles import find_poles
from mahler.ratfun import (
    FactorMismatch,
    LaurentPoly,
    PartialFraction,
    RationalFunction,
    delta,
    laurent_plus,
    partial_fractions,
    recombine,
    sigma,
    split_LT,
    trajectory_components,
    trajectory_rep,
)

F2 = Q[2]


def test_normal_form_is_reduced_and_monic():
    f = ratfun(F2, [2, 2], [4, 4])
    assert f == RationalFunction.constant(F2, Fraction(1, 2))
    g = ratfun(F2, [1], [2, 2])
    assert g.den.lead() == 1
    assert g.den == poly(F2, [1, 1])
    assert g.num == poly(F2, [Fraction(1, 2)])


def test_arithmetic():
    x = RationalFunction.x(F2)
    f = 1 / (x - 1)
    assert f * (x - 1) == RationalFunction.constant(F2, 1)
    assert (f + f) - 2 * f == RationalFunction.zero(F2)
    assert f**-1 == x - 1


def test_sigma_and_delta():
    f = ratfun(F2, [1], [-1, 1])
    assert sigma(f, 2) == ratfun(F2, [1], [-1, 0, 1])
    assert delta(f, 2) == ratfun(F2, [0, -1], [-1, 0, 1])
    assert sigma(LaurentPoly(F2, {-1: 3, 2: 1}), 3) == LaurentPoly(F2, {-3: 3, 6: 1})
    with pytest.raises(ValueError):
        sigma(f, 1)


def test_split_LT():
    f = ratfun(F2, [1, 2, 0, 3, 1], [0, 0, 1, 1])
    fl, ft = split_LT(f)
    assert fl == LaurentPoly(F2, {1: 1, 0: 2, -1: 1, -2: 1})
    assert ft == ratfun(F2, [-3], [1, 1])
    assert laurent_plus(fl, ft) == f


def test_trajectories():
    assert trajectory_rep(12, 2) == 3
    assert trajectory_rep(-12, 3) == -4
    assert trajectory_rep(0, 5) == 0
    comps = trajectory_components(LaurentPoly(F2, {1: 1, 2: 1, 4: 1, 3: 2, -6: 1}), 2)
    assert set(comps) == {1, 3, -3}
    assert comps[1] == LaurentPoly(F2, {1: 1, 2: 1, 4: 1})


def test_partial_fractions_of_cube_roots_of_unity():
    F = Q[3]
    f = ratfun(F, [9]) / ratfun(F, [-1, 0, 0, 1]) ** 2
    pf = partial_fractions(f, find_poles(f.den, 3))
    one = root_of_unity(1, 0, 3)
    assert pf.coeff(one, 2) == 1
    assert pf.coeff(one, 1) == -2
    z = monomial_value(root_of_unity(3, 1, 3), pf.field)
    assert pf.coeff(root_of_unity(3, 1, 3), 1) == -2 * z
    assert recombine(pf).restrict(F) == f


def test_partial_fractions_checks_multiplicities():
    f = ratfun(F2, [1], [-1, 1]) ** 2
    with pytest.raises(FactorMismatch):
        partial_fractions(f, [(root_of_unity(1, 0, 2), 1)])
    with pytest.raises(ValueError):
        partial_fractions(ratfun(F2, [0, 0, 1], [-1, 1]), [(root_of_unity(1, 0, 2), 1)])


def test_partial_fraction_algebra():
    f = ratfun(F2, [1], [-2, 1])
    g = ratfun(F2, [3], [1, 1]) ** 2
    G = field_for([root_of_unity(2, 1, 2)], 2)
    pf = partial_fractions(f, find_poles(f.den, 2), field=G)
    pg = partial_fractions(g, find_poles(g.den, 2), field=G)
    total = pf + pg
    assert recombine(total).restrict(F2) == f + g
    assert (total - pg) == pf
    assert (pf - pf).is_zero()
    assert isinstance(total.select(pf.poles()), PartialFraction)


def test_recombine_round_trip_random():
    rng = random.Random(11)
    for _ in range(15):
        p = rng.choice([2, 3])
        f = random_proper(rng, p)
        pf = partial_fractions(f, find_poles(f.den, p))
        assert recombine(pf).restrict(f.field) == f


def test_embed_restrict_ratfun():
    f = ratfun(F2, [1, 2], [3, 0, 1])
    G = field_for([root_of_unity(4, 1, 2)], 2)
    assert f.embed(G).restrict(F2) == f
