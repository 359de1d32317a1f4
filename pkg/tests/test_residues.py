from __future__ import annotations

import random
from fractions import Fraction

from samples import Q, random_delta_image, random_g, ratfun

from mahler.field import FieldDescriptor, RadicalMonomial, field_for, monomial_value, root_of_unity
from mahler.poles import find_poles
from mahler.ratfun import LaurentPoly, delta, partial_fractions
from mahler.residues import (
    cyclic_D,
    cyclic_L,
    dres_infinity,
    mahler_report,
    reduce_infinity,
    remainder,
)
from mahler.vcoeffs import universal_v

F2, F3 = Q[2], Q[3]


def test_laurent_reduction():
    fl = LaurentPoly(F2, {1: 1, 2: -3, 4: 5, -3: 1, 0: 2})
    fbar, g = reduce_infinity(fl, 2)
    assert fbar == LaurentPoly(F2, {4: 3, 0: 2, -3: 1})
    assert g == LaurentPoly(F2, {1: 1, 2: -2})
    assert fbar.to_ratfun() == fl.to_ratfun() + delta(g.to_ratfun(), 2)
    assert dres_infinity(fl, 2) == {1: F2(3), 0: F2(2), -3: F2(1)}


def test_laurent_summability():
    assert mahler_report(ratfun(F2, [0, -1, 1]), 2).summable
    r = mahler_report(ratfun(F2, [0, 1, 1]), 2)
    assert not r.summable
    assert r.residues_at_infinity == {1: F2(2)}
    assert not mahler_report(ratfun(F2, [5]), 2).summable


def test_delta_of_simple_pole_expansion():
    # values derived by hand with sympy: delta(1/(x-2)) for p = 2
    f = delta(ratfun(F2, [1], [-2, 1]), 2)
    pf = partial_fractions(f, find_poles(f.den, 2))
    sqrt2 = RadicalMonomial.make(2, radical={2: Fraction(1, 2)})
    s = monomial_value(sqrt2, pf.field)
    assert pf.coeff(sqrt2, 1) == s / 4
    assert pf.coeff(sqrt2 * root_of_unity(2, 1, 2), 1) == -s / 4
    assert pf.coeff(RadicalMonomial.make(2, scalar=2), 1) == -1


def test_cyclic_D_on_the_example_cycle():
    g = root_of_unity(4, 1, 3)
    G = FieldDescriptor(N=4, p=3)
    i = monomial_value(g, G)
    V = universal_v(3, 1)
    assert cyclic_D(g, 2, 1, V, [[-i / 4], [i / 4]], G) == [[-i / 6], [i / 6]]
    assert cyclic_L(g, 2, 1, V, [[-i / 6], [i / 6]], G) == [[-i / 4], [i / 4]]


def test_cyclic_maps_invert_each_other():
    g = root_of_unity(7, 1, 2)
    G = field_for([g], 2)
    V = universal_v(2, 3)
    rng = random.Random(3)
    table = [[G(Fraction(rng.randint(-9, 9), rng.randint(1, 5))) * G.zeta(rng.randrange(7)) for _ in range(3)] for _ in range(3)]
    assert cyclic_L(g, 3, 3, V, cyclic_D(g, 3, 3, V, table, G), G) == table


def test_simple_poles_on_the_unit_cycle():
    r = mahler_report(ratfun(F2, [1], [-1, 1]), 2)
    (tr,) = r.tree_residues
    assert (tr.h, tr.e) == (0, 1)
    assert not r.summable
    assert r.remainder == r.f


def test_worked_examples():
    f = ratfun(F3, [0, -4, 1, 4, 0, 0, -1]) / (ratfun(F3, [-2, 1]) ** 2 * ratfun(F3, [-2, 0, 0, 1]) ** 2)
    r = mahler_report(f, 3)
    assert r.summable and r.solution == ratfun(F3, [1], [-2, 1]) ** 2
    assert r.nonzero_residues() == 0
    r = mahler_report(ratfun(F3, [1], [1, 0, 0, 0, 0, 0, 1]), 3)
    assert not r.summable and r.nonzero_residues() == 4


def test_remainder_kills_delta_images_and_respects_classes():
    rng = random.Random(12)
    for _ in range(8):
        p = rng.choice([2, 3])
        f, _g = random_delta_image(rng, p)
        assert remainder(f, p).is_zero()
        h = random_g(rng, p)
        # positions depend on the height, so compare classes rather than forms
        a, b = remainder(h + f, p), remainder(h, p)
        assert a.is_zero() == b.is_zero()
        assert remainder(a - b, p).is_zero()


def test_report_identity_on_random_inputs():
    rng = random.Random(13)
    for _ in range(10):
        p = rng.choice([2, 3])
        f = random_g(rng, p)
        r = mahler_report(f, p)
        assert r.remainder == f + delta(r.certificate, p)
        assert r.summable == r.remainder.is_zero()
