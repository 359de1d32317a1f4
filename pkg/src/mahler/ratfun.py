"""Rational functions, Laurent polynomials and partial fractions over a tower field."""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from math import comb, lcm
from typing import Iterable, Mapping, Sequence, Union

from .field import (
    FieldDescriptor,
    FieldError,
    RadicalMonomial,
    TowerElement,
    embed,
    field_for,
    invert,
    monomial_value,
    restrict,
)
from .poly import Poly


class FactorMismatch(FieldError):
    """The supplied poles do not account for the denominator."""


# ---------------------------------------------------------------------------
# Laurent polynomials


class LaurentPoly:
    """Sparse map exponent -> nonzero coefficient."""

    __slots__ = ("field", "terms")

    def __init__(self, field: FieldDescriptor, terms: Mapping[int, object] | None = None):
        self.field = field
        clean = {}
        for e, c in (terms or {}).items():
            c = field(c) if not (isinstance(c, TowerElement) and c.field == field) else c
            if not c.is_zero():
                clean[int(e)] = c
        self.terms = clean

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def coeff(self, e: int) -> TowerElement:
        return self.terms.get(e, self.field.zero())

    def __eq__(self, other):
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self.field == other.field and self.terms == other.terms

    def __add__(self, other: LaurentPoly) -> LaurentPoly:
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out[e] + c if e in out else c
        return LaurentPoly(self.field, out)

    def __neg__(self) -> LaurentPoly:
        return LaurentPoly(self.field, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other: LaurentPoly) -> LaurentPoly:
        return self + (-other)

    def scale(self, c) -> LaurentPoly:
        return LaurentPoly(self.field, {e: v * c for e, v in self.terms.items()})

    def to_ratfun(self) -> RationalFunction:
        if not self.terms:
            return RationalFunction.zero(self.field)
        low = min(min(self.terms), 0)
        num = [self.field.zero()] * (max(max(self.terms), 0) - low + 1)
        for e, c in self.terms.items():
            num[e - low] = c
        return RationalFunction(Poly(self.field, num), Poly.monomial(self.field, -low))

    def embed(self, target: FieldDescriptor) -> LaurentPoly:
        return LaurentPoly(target, {e: embed(c, target) for e, c in self.terms.items()})

    def restrict(self, target: FieldDescriptor) -> LaurentPoly:
        return LaurentPoly(target, {e: restrict(c, target) for e, c in self.terms.items()})

    def __repr__(self):
        from .render import render_laurent

        return f"LaurentPoly({render_laurent(self.terms)})"


# ---------------------------------------------------------------------------
# rational functions


class RationalFunction:
    """num/den with coprime parts and monic denominator."""

    __slots__ = ("num", "den")

    def __init__(self, num: Poly, den: Poly | None = None, *, reduced: bool = False):
        if den is None:
            den = Poly(num.field, [1])
        if num.field != den.field:
            raise ValueError("numerator and denominator over different fields")
        if not den:
            raise ZeroDivisionError("zero denominator")
        if not num:
            den = Poly(num.field, [1])
        elif not reduced:
            g = num.gcd(den)
            if g.degree > 0:
                num = num.exact_div(g)
                den = den.exact_div(g)
        lead = den.lead()
        if not lead == 1:
            inv = invert(lead)
            num = num * inv
            den = den * inv
        self.num = num
        self.den = den

    @property
    def field(self) -> FieldDescriptor:
        return self.num.field

    @classmethod
    def zero(cls, field: FieldDescriptor) -> RationalFunction:
        return cls(Poly(field), Poly(field, [1]), reduced=True)

    @classmethod
    def constant(cls, field: FieldDescriptor, c) -> RationalFunction:
        return cls(Poly(field, [c]), reduced=True)

    @classmethod
    def x(cls, field: FieldDescriptor) -> RationalFunction:
        return cls(Poly(field, [0, 1]), reduced=True)

    def is_zero(self) -> bool:
        return not self.num

    def __bool__(self):
        return bool(self.num)

    def is_constant(self) -> bool:
        return self.num.degree <= 0 and self.den.degree == 0

    def is_proper(self) -> bool:
        return self.num.degree < self.den.degree

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = RationalFunction.constant(self.field, other)
        if not isinstance(other, RationalFunction):
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.num, self.den))

    def _lift(self, other) -> RationalFunction:
        if isinstance(other, RationalFunction):
            if other.field != self.field:
                raise ValueError("rational functions over different fields")
            return other
        if isinstance(other, LaurentPoly):
            return other.to_ratfun()
        return RationalFunction.constant(self.field, other)

    def __add__(self, other) -> RationalFunction:
        o = self._lift(other)
        if not o.num:
            return self
        if not self.num:
            return o
        if self.den == o.den:
            return RationalFunction(self.num + o.num, self.den)
        g = self.den.gcd(o.den)
        if g.degree > 0:
            b1 = self.den.exact_div(g)
            d1 = o.den.exact_div(g)
            return RationalFunction(self.num * d1 + o.num * b1, b1 * o.den)
        return RationalFunction(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self) -> RationalFunction:
        return RationalFunction(-self.num, self.den, reduced=True)

    def __sub__(self, other) -> RationalFunction:
        return self + (-self._lift(other))

    def __rsub__(self, other) -> RationalFunction:
        return self._lift(other) - self

    def __mul__(self, other) -> RationalFunction:
        o = self._lift(other)
        return RationalFunction(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, other) -> RationalFunction:
        o = self._lift(other)
        if not o.num:
            raise ZeroDivisionError("division by the zero rational function")
        return RationalFunction(self.num * o.den, self.den * o.num)

    def __rtruediv__(self, other) -> RationalFunction:
        return self._lift(other) / self

    def __pow__(self, n: int) -> RationalFunction:
        if n < 0:
            return RationalFunction.constant(self.field, 1) / (self ** (-n))
        return RationalFunction(self.num**n, self.den**n, reduced=True)

    def embed(self, target: FieldDescriptor) -> RationalFunction:
        return RationalFunction(self.num.embed(target), self.den.embed(target), reduced=True)

    def restrict(self, target: FieldDescriptor) -> RationalFunction:
        return RationalFunction(self.num.restrict(target), self.den.restrict(target), reduced=True)

    def __repr__(self):
        from .render import render_ratfun

        return f"RationalFunction({render_ratfun(self.num.coeffs, self.den.coeffs)})"

    def __str__(self):
        from .render import render_ratfun

        return render_ratfun(self.num.coeffs, self.den.coeffs)


Function = Union[RationalFunction, LaurentPoly]


# ---------------------------------------------------------------------------
# the Mahler operator


def sigma(f, p: int):
    """f(x^p) for a rational function or Laurent polynomial."""
    if p < 2:
        raise ValueError("p must be at least 2")
    if isinstance(f, LaurentPoly):
        return LaurentPoly(f.field, {e * p: c for e, c in f.terms.items()})
    if isinstance(f, RationalFunction):
        return RationalFunction(f.num.compose_power(p), f.den.compose_power(p), reduced=True)
    if isinstance(f, PartialFraction):
        return sigma(recombine(f), p)
    raise TypeError(f"cannot apply sigma to {type(f).__name__}")


def delta(g, p: int):
    """sigma(g) - g."""
    return sigma(g, p) - g


# ---------------------------------------------------------------------------
# Laurent / proper split


def _series_inverse(b: Poly, n: int) -> Poly:
    """Inverse of b modulo x^n (b(0) != 0)."""
    F = b.field
    b0inv = invert(b[0])
    out = [b0inv]
    for k in range(1, n):
        acc = F.zero()
        for j in range(1, min(k, b.degree) + 1):
            acc = acc + b[j] * out[k - j]
        out.append(-acc * b0inv)
    return Poly(F, out)


def split_LT(f: RationalFunction) -> tuple[LaurentPoly, RationalFunction]:
    """Split f into a Laurent polynomial and a proper part whose denominator is prime to x."""
    F = f.field
    s = f.den.valuation()
    b0 = f.den.drop_x(s)
    q, r = f.num.divmod(f.den)
    terms: dict[int, TowerElement] = {i: c for i, c in enumerate(q.coeffs)}
    if s == 0:
        return LaurentPoly(F, terms), RationalFunction(r, f.den, reduced=True)
    A = (r * _series_inverse(b0, s)).truncate(s)
    B = (r - A * b0).drop_x(s)
    for i, c in enumerate(A.coeffs):
        e = i - s
        terms[e] = terms[e] + c if e in terms else c
    return LaurentPoly(F, terms), RationalFunction(B, b0)


def laurent_plus(fl: LaurentPoly, ft: RationalFunction) -> RationalFunction:
    return fl.to_ratfun() + ft


# ---------------------------------------------------------------------------
# trajectories


def trajectory_rep(j: int, p: int) -> int:
    """The p-free representative of the trajectory through exponent j (0 for j = 0)."""
    if j == 0:
        return 0
    while j % p == 0:
        j //= p
    return j


def trajectory_components(fl: LaurentPoly, p: int) -> dict[int, LaurentPoly]:
    if p < 2:
        raise ValueError("p must be at least 2")
    groups: dict[int, dict[int, TowerElement]] = {}
    for e, c in fl.terms.items():
        groups.setdefault(trajectory_rep(e, p), {})[e] = c
    return {k: LaurentPoly(fl.field, v) for k, v in sorted(groups.items())}


# ---------------------------------------------------------------------------
# partial fractions


@dataclass
class PartialFraction:
    """pole -> (c_1, ..., c_m) meaning sum_k c_k / (x - pole)^k."""

    field: FieldDescriptor
    terms: dict = dc_field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for alpha, cs in self.terms.items():
            cs = [self.field(c) if not (isinstance(c, TowerElement) and c.field == self.field) else c for c in cs]
            while cs and cs[-1].is_zero():
                cs.pop()
            if cs:
                clean[alpha] = tuple(cs)
        self.terms = dict(sorted(clean.items(), key=lambda kv: kv[0].sort_key()))

    def poles(self) -> list[RadicalMonomial]:
        return list(self.terms)

    def order(self, alpha: RadicalMonomial) -> int:
        return len(self.terms.get(alpha, ()))

    def coeff(self, alpha: RadicalMonomial, k: int) -> TowerElement:
        cs = self.terms.get(alpha, ())
        return cs[k - 1] if 1 <= k <= len(cs) else self.field.zero()

    def max_order(self) -> int:
        return max((len(v) for v in self.terms.values()), default=0)

    def is_zero(self) -> bool:
        return not self.terms

    def select(self, poles: Iterable[RadicalMonomial]) -> PartialFraction:
        keep = set(poles)
        return PartialFraction(self.field, {a: c for a, c in self.terms.items() if a in keep})

    def embed(self, target: FieldDescriptor) -> PartialFraction:
        return PartialFraction(target, {a: [embed(c, target) for c in cs] for a, cs in self.terms.items()})

    def __add__(self, other: PartialFraction) -> PartialFraction:
        if other.field != self.field:
            raise ValueError("partial fractions over different fields")
        out = {a: list(cs) for a, cs in self.terms.items()}
        for a, cs in other.terms.items():
            cur = out.setdefault(a, [])
            for k, c in enumerate(cs):
                if k < len(cur):
                    cur[k] = cur[k] + c
                else:
                    cur.append(c)
        return PartialFraction(self.field, out)

    def __neg__(self) -> PartialFraction:
        return PartialFraction(self.field, {a: [-c for c in cs] for a, cs in self.terms.items()})

    def __sub__(self, other: PartialFraction) -> PartialFraction:
        return self + (-other)

    def __eq__(self, other):
        if not isinstance(other, PartialFraction):
            return NotImplemented
        return self.field == other.field and self.terms == other.terms


class _PowerCache:
    """Values of alpha^j in a fixed field, computed from the monomial normal form."""

    def __init__(self, alpha: RadicalMonomial, field: FieldDescriptor):
        self.alpha = alpha
        self.field = field
        self.cache: dict[int, TowerElement] = {}

    def __getitem__(self, j: int) -> TowerElement:
        v = self.cache.get(j)
        if v is None:
            v = monomial_value(self.alpha**j, self.field)
            self.cache[j] = v
        return v


def taylor_coefficients(poly: Poly, powers: _PowerCache, n: int, start: int = 0) -> list[TowerElement]:
    """Coefficients start..n-1 of poly(alpha + t), poly already in the target field."""
    F = powers.field
    if poly.is_rational() and poly.coeffs:
        return _taylor_rational(poly, powers, n, start)
    out = []
    for j in range(start, n):
        acc = F.zero()
        for i in range(j, poly.degree + 1):
            c = poly.coeffs[i]
            if c.is_zero():
                continue
            term = powers[i - j]
            scale = comb(i, j)
            if c.is_rational():
                acc = acc + term * (c.rational_value() * scale)
            else:
                acc = acc + term * c * scale
        out.append(acc)
    return out


def _taylor_rational(poly: Poly, powers: _PowerCache, n: int, start: int) -> list[TowerElement]:
    # integer accumulation over one common denominator; much faster than field adds
    F = powers.field
    qs = poly.rational_coefficients()
    D = 1
    for q in qs:
        D = lcm(D, q.denominator)
    ints = [q.numerator * (D // q.denominator) for q in qs]
    deg = len(ints) - 1
    vals = [powers[k] for k in range(deg + 1 - min(start, deg + 1))]
    L = 1
    for v in vals:
        L = lcm(L, v.den)
    scaled = [[x * (L // v.den) for x in v.num] for v in vals]
    out = []
    for j in range(start, n):
        acc = [0] * F.dim
        for i in range(j, deg + 1):
            c = ints[i]
            if not c:
                continue
            w = c * comb(i, j)
            for t, x in enumerate(scaled[i - j]):
                if x:
                    acc[t] += w * x
        out.append(TowerElement(F, acc, D * L))
    return out


def pole_expansion(a: Poly, b: Poly, alpha: RadicalMonomial, m: int, F: FieldDescriptor) -> list[TowerElement]:
    """Coefficients c_1..c_m of a/b at the order-m pole alpha (a, b in F)."""
    powers = _PowerCache(alpha, F)
    low = taylor_coefficients(b, powers, m + 1)
    if any(not v.is_zero() for v in low[:m]) or low[m].is_zero():
        raise FactorMismatch(f"{alpha} is not a pole of order exactly {m}")
    B = [low[m]] + taylor_coefficients(b, powers, 2 * m, start=m + 1)
    A = taylor_coefficients(a, powers, m)
    inv0 = invert(B[0])
    Q: list[TowerElement] = []
    for j in range(m):
        acc = A[j]
        for i in range(1, j + 1):
            acc = acc - B[i] * Q[j - i]
        Q.append(acc * inv0)
    # Q[j] is the coefficient of t^(j - m); c_k sits at j = m - k
    return [Q[m - k] for k in range(1, m + 1)]


def partial_fractions(
    f_T: RationalFunction,
    poles: Sequence[tuple[RadicalMonomial, int]],
    *,
    field: FieldDescriptor | None = None,
    select: Iterable[RadicalMonomial] | None = None,
) -> PartialFraction:
    """Expansion of the proper function f_T at the given poles.

    ``poles`` must list every root of the denominator with its multiplicity.
    ``select`` restricts the output to a subset of the poles.
    """
    if f_T.num.degree >= f_T.den.degree and f_T.num:
        raise ValueError("partial_fractions needs a proper rational function")
    if f_T.den[0].is_zero() and f_T.den.degree > 0:
        raise ValueError("denominator must be prime to x")
    seen = set()
    for alpha, _m in poles:
        if alpha in seen:
            raise FactorMismatch(f"pole {alpha} listed twice")
        seen.add(alpha)
    if sum(m for _a, m in poles) != f_T.den.degree:
        raise FactorMismatch(
            f"multiplicities add up to {sum(m for _a, m in poles)} but the denominator has degree {f_T.den.degree}"
        )
    if not f_T.num:
        return PartialFraction(field or f_T.field)
    if field is None:
        p = poles[0][0].p if poles else 2
        field = field_for([a for a, _m in poles], p, base=f_T.field)
    a = f_T.num.embed(field)
    b = f_T.den.embed(field)
    wanted = None if select is None else set(select)
    terms = {}
    for alpha, m in poles:
        if wanted is not None and alpha not in wanted:
            continue
        terms[alpha] = pole_expansion(a, b, alpha, m, field)
    return PartialFraction(field, terms)


def recombine(pf: PartialFraction) -> RationalFunction:
    """The proper rational function with the given expansion."""
    F = pf.field
    if not pf.terms:
        return RationalFunction.zero(F)
    linear = {a: Poly(F, [-monomial_value(a, F), 1]) for a in pf.terms}
    powers = {a: linear[a] ** len(cs) for a, cs in pf.terms.items()}
    den = Poly(F, [1])
    for v in powers.values():
        den = den * v
    num = Poly(F)
    for a, cs in pf.terms.items():
        m = len(cs)
        rest = Poly(F, [1])
        for b, v in powers.items():
            if b != a:
                rest = rest * v
        # sum_k c_k (x - a)^(m - k)
        local = Poly(F)
        lin_pow = Poly(F, [1])
        for k in range(m, 0, -1):
            local = local + lin_pow * cs[k - 1]
            lin_pow = lin_pow * linear[a]
        num = num + local * rest
    return RationalFunction(num, den, reduced=True)
