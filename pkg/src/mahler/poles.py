"""Recognize the roots of a denominator as cyclotomic-radical monomials.

Rational denominators are factored over Q; every irreducible factor q must
divide some binomial x^M - r, and its roots are then read off among the
M-th roots of r.  For denominators with algebraic coefficients the same
recognition runs on the absolute norm, and the candidates are tested
against the denominator itself.
"""

from __future__ import annotations

from fractions import Fraction

import sympy

from .field import (
    FieldDescriptor,
    FieldError,
    IncompatibleFields,
    RadicalMonomial,
    cyclotomic_polynomial,
    factor_rational,
    field_for,
    is_p_smooth,
    monomial_value,
    root_of_unity,
)
from .poly import Poly

MAX_BINOMIAL_DEGREE = 4096

_x = sympy.Symbol("x")


class UnsupportedDenominator(FieldError):
    """A denominator factor whose roots are not cyclotomic-radical monomials for this p."""


def _fraction_poly_mulmod(a: list, b: list, q: list) -> list:
    """a*b mod q for Fraction coefficient lists, q monic."""
    d = len(q) - 1
    prod = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, u in enumerate(a):
        if u:
            for j, v in enumerate(b):
                if v:
                    prod[i + j] += u * v
    for k in range(len(prod) - 1, d - 1, -1):
        c = prod[k]
        if c:
            for i in range(d):
                prod[k - d + i] -= c * q[i]
            prod[k] = 0
    return (prod[:d] + [Fraction(0)] * d)[:d]


def binomial_exponent(q: list[Fraction]) -> tuple[int, Fraction]:
    """Smallest M with x^M congruent to a constant r modulo q; returns (M, r)."""
    lead = q[-1]
    q = [c / lead for c in q]
    d = len(q) - 1
    if d == 1:
        return 1, -q[0]
    x_poly = [Fraction(0)] * d
    x_poly[1] = Fraction(1)
    cur = list(x_poly)
    for M in range(1, MAX_BINOMIAL_DEGREE + 1):
        if all(c == 0 for c in cur[1:]):
            return M, cur[0]
        cur = _fraction_poly_mulmod(cur, x_poly, q)
    raise UnsupportedDenominator(
        f"factor {_render_fraction_poly(q)} does not divide any x^M - r with M <= {MAX_BINOMIAL_DEGREE}"
    )


def _render_fraction_poly(q) -> str:
    from .render import render_poly

    return render_poly([Fraction(c) for c in q])


def binomial_roots(M: int, r: Fraction, p: int) -> list[RadicalMonomial]:
    """All roots of x^M - r as monomials."""
    if r == 0:
        raise UnsupportedDenominator("zero is not allowed as a pole here")
    rad = {}
    for q, e in factor_rational(abs(r)).items():
        ex = Fraction(e, M)
        if not is_p_smooth(ex.denominator, p):
            raise UnsupportedDenominator(
                f"roots of x^{M} - ({r}) involve {q}^({ex}), whose denominator is not a power of p={p}"
            )
        rad[q] = ex
    base = RadicalMonomial.make(p, radical=rad)
    if r > 0:
        return [base * root_of_unity(M, j, p) for j in range(M)]
    return [base * root_of_unity(2 * M, 2 * j + 1, p) for j in range(M)]


def _roots_of_irreducible(q: list[Fraction], p: int) -> list[RadicalMonomial]:
    M, r = binomial_exponent(q)
    d = len(q) - 1
    if abs(r) == 1 and M > 1:
        order = M if r == 1 else 2 * M
        if len(cyclotomic_polynomial(order)) - 1 == d:
            from math import gcd

            return [root_of_unity(order, j, p) for j in range(order) if gcd(j, order) == 1]
    candidates = binomial_roots(M, r, p)
    if d == M:
        return candidates
    lead = q[-1]
    roots = []
    for alpha in candidates:
        F = field_for([alpha], p)
        val = F.zero()
        for i, c in enumerate(q):
            if c:
                val = val + monomial_value(alpha**i, F) * (c / lead)
        if val.is_zero():
            roots.append(alpha)
    if len(roots) != d:
        raise UnsupportedDenominator(
            f"could not isolate the {d} roots of {_render_fraction_poly(q)} among the roots of x^{M} - ({r})"
        )
    return roots


def _factor_rational_poly(coeffs: list[Fraction]) -> list[tuple[list[Fraction], int]]:
    sp = sympy.Poly([sympy.Rational(c.numerator, c.denominator) for c in reversed(coeffs)], _x, domain="QQ")
    _lc, factors = sp.factor_list()
    out = []
    for fac, mult in factors:
        cs = [Fraction(int(c.p), int(c.q)) for c in reversed(fac.all_coeffs())]
        out.append((cs, mult))
    return out


def _norm_polynomial(b: Poly) -> list[Fraction]:
    """A nonzero rational multiple of prod over conjugates of b."""
    F = b.field
    z, y = sympy.symbols("z y")
    expr = 0
    for deg, c in enumerate(b.coeffs):
        if c.is_zero():
            continue
        term = 0
        for k, v in enumerate(c.coefficients()):
            if v:
                t, j = divmod(k, F.phi)
                term += sympy.Rational(v.numerator, v.denominator) * z**j * y**t
        expr += term * _x**deg
    if F.c is not None:
        expr = sympy.resultant(expr, F.c.denominator * y**F.P - F.c.numerator, y)
    if F.N > 2:
        phi = sum(int(c) * z**i for i, c in enumerate(cyclotomic_polynomial(F.N)))
        expr = sympy.resultant(sympy.expand(expr), phi, z)
    poly = sympy.Poly(sympy.expand(expr), _x)
    return [Fraction(int(sympy.fraction(c)[0]), int(sympy.fraction(c)[1])) for c in reversed(poly.all_coeffs())]


def find_poles(b: Poly, p: int) -> list[tuple[RadicalMonomial, int]]:
    """Roots of b (with b(0) != 0) as (monomial, multiplicity) pairs."""
    if b.degree <= 0:
        return []
    if b[0].is_zero():
        raise ValueError("strip the power of x before looking for poles")
    if b.is_rational():
        out = []
        for q, mult in _factor_rational_poly(b.rational_coefficients()):
            for alpha in _roots_of_irreducible(q, p):
                out.append((alpha, mult))
        return sorted(out, key=lambda t: t[0].sort_key())
    return _find_poles_algebraic(b, p)


def _find_poles_algebraic(b: Poly, p: int) -> list[tuple[RadicalMonomial, int]]:
    from .ratfun import _PowerCache, taylor_coefficients

    norm = _norm_polynomial(b)
    candidates: list[RadicalMonomial] = []
    for q, _mult in _factor_rational_poly(norm):
        candidates.extend(_roots_of_irreducible(q, p))
    out = []
    total = 0
    for alpha in candidates:
        try:
            F = field_for([alpha], p, base=b.field)
        except IncompatibleFields as exc:
            raise UnsupportedDenominator(f"pole {alpha} needs a radical incompatible with the input: {exc}")
        bb = b.embed(F)
        powers = _PowerCache(alpha, F)
        mult = 0
        while True:
            (v,) = taylor_coefficients(bb, powers, mult + 1, start=mult)
            if not v.is_zero():
                break
            mult += 1
        if mult:
            out.append((alpha, mult))
            total += mult
    if total != b.degree:
        raise UnsupportedDenominator("denominator roots are not all cyclotomic-radical monomials")
    return sorted(out, key=lambda t: t[0].sort_key())
