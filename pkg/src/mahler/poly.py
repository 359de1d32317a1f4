"""Dense univariate polynomials with coefficients in one tower field."""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

from .field import FieldDescriptor, TowerElement, embed, invert, restrict


class Poly:
    """Coefficients low to high, trailing zeros stripped; immutable."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field: FieldDescriptor, coeffs: Iterable = ()):
        cs = [c if isinstance(c, TowerElement) and c.field == field else field(c) for c in coeffs]
        while cs and cs[-1].is_zero():
            cs.pop()
        self.field = field
        self.coeffs = tuple(cs)

    @classmethod
    def _raw(cls, field, coeffs: list) -> Poly:
        while coeffs and coeffs[-1].is_zero():
            coeffs.pop()
        obj = cls.__new__(cls)
        obj.field = field
        obj.coeffs = tuple(coeffs)
        return obj

    @classmethod
    def constant(cls, field, c) -> Poly:
        return cls(field, [c])

    @classmethod
    def monomial(cls, field, degree: int, c=1) -> Poly:
        return cls(field, [0] * degree + [c])

    @classmethod
    def x_minus(cls, field, a) -> Poly:
        return cls(field, [-field(a), 1])

    # --- inspection -------------------------------------------------------
    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self):
        return bool(self.coeffs)

    def lead(self) -> TowerElement:
        return self.coeffs[-1] if self.coeffs else self.field.zero()

    def __getitem__(self, i: int) -> TowerElement:
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else self.field.zero()

    def valuation(self) -> int:
        """Multiplicity of x as a factor (0 for the zero polynomial)."""
        for i, c in enumerate(self.coeffs):
            if not c.is_zero():
                return i
        return 0

    def is_rational(self) -> bool:
        return all(c.is_rational() for c in self.coeffs)

    def __eq__(self, other):
        if not isinstance(other, Poly):
            return NotImplemented
        return self.field == other.field and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.field, self.coeffs))

    def __repr__(self):
        from .render import render_poly

        return f"Poly({render_poly(self.coeffs)})"

    # --- arithmetic -------------------------------------------------------
    def _check(self, other: Poly):
        if other.field != self.field:
            raise ValueError("polynomials over different fields")

    def __add__(self, other: Poly) -> Poly:
        self._check(other)
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] = out[i] + c
        return Poly._raw(self.field, out)

    def __neg__(self) -> Poly:
        return Poly._raw(self.field, [-c for c in self.coeffs])

    def __sub__(self, other: Poly) -> Poly:
        return self + (-other)

    def __mul__(self, other) -> Poly:
        if not isinstance(other, Poly):
            c = self.field(other)
            return Poly._raw(self.field, [v * c for v in self.coeffs])
        self._check(other)
        if not self.coeffs or not other.coeffs:
            return Poly._raw(self.field, [])
        out = [self.field.zero()] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a.is_zero():
                continue
            for j, b in enumerate(other.coeffs):
                if not b.is_zero():
                    out[i + j] = out[i + j] + a * b
        return Poly._raw(self.field, out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> Poly:
        result = Poly(self.field, [1])
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def divmod(self, other: Poly) -> tuple[Poly, Poly]:
        self._check(other)
        if not other.coeffs:
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        db = other.degree
        if len(rem) - 1 < db:
            return Poly._raw(self.field, []), self
        inv_lead = invert(other.lead()) if not other.lead() == 1 else None
        q = [self.field.zero()] * (len(rem) - db)
        for i in range(len(q) - 1, -1, -1):
            c = rem[i + db]
            if c.is_zero():
                continue
            if inv_lead is not None:
                c = c * inv_lead
            q[i] = c
            for j, b in enumerate(other.coeffs):
                if not b.is_zero():
                    rem[i + j] = rem[i + j] - c * b
        return Poly._raw(self.field, q), Poly._raw(self.field, rem[:db])

    def __floordiv__(self, other: Poly) -> Poly:
        return self.divmod(other)[0]

    def __mod__(self, other: Poly) -> Poly:
        return self.divmod(other)[1]

    def exact_div(self, other: Poly) -> Poly:
        q, r = self.divmod(other)
        if r:
            raise ArithmeticError("inexact polynomial division")
        return q

    def monic(self) -> Poly:
        if not self.coeffs:
            return self
        lead = self.lead()
        if lead == 1:
            return self
        inv = invert(lead)
        return Poly._raw(self.field, [c * inv for c in self.coeffs])

    def gcd(self, other: Poly) -> Poly:
        """Monic gcd; rational inputs go through sympy's modular gcd over QQ."""
        if not self.coeffs or not other.coeffs:
            return (self if self.coeffs else other).monic()
        if self.degree == 0 or other.degree == 0:
            return Poly(self.field, [1])
        if self.is_rational() and other.is_rational():
            return _rational_gcd(self, other)
        a, b = self.monic(), other.monic()
        while b:
            a, b = b, (a % b).monic()
        return a

    def inverse_mod(self, modulus: Poly) -> Poly:
        """Inverse of ``self`` modulo ``modulus`` (requires coprimality)."""
        r0, r1 = modulus, self % modulus
        s0, s1 = Poly(self.field), Poly(self.field, [1])
        while r1.degree > 0:
            q, r = r0.divmod(r1)
            r0, r1, s0, s1 = r1, r, s1, s0 - q * s1
        if not r1:
            raise ZeroDivisionError("not invertible modulo the given polynomial")
        return (s1 * invert(r1.lead())) % modulus

    # --- evaluation and substitution --------------------------------------
    def __call__(self, a):
        acc = self.field.zero() if not isinstance(a, TowerElement) else a.field.zero()
        for c in reversed(self.coeffs):
            acc = acc * a + c
        return acc

    def compose_power(self, p: int) -> Poly:
        """self(x^p)."""
        if not self.coeffs:
            return self
        zero = self.field.zero()
        out = [zero] * (self.degree * p + 1)
        for i, c in enumerate(self.coeffs):
            out[i * p] = c
        return Poly._raw(self.field, out)

    def shift_x(self, s: int) -> Poly:
        """Multiply by x^s (s >= 0)."""
        if not self.coeffs or s == 0:
            return self
        return Poly._raw(self.field, [self.field.zero()] * s + list(self.coeffs))

    def drop_x(self, s: int) -> Poly:
        """Divide by x^s assuming exactness."""
        if any(not c.is_zero() for c in self.coeffs[:s]):
            raise ArithmeticError("not divisible by the requested power of x")
        return Poly._raw(self.field, list(self.coeffs[s:]))

    def truncate(self, n: int) -> Poly:
        return Poly._raw(self.field, list(self.coeffs[:n]))

    # --- change of field ----------------------------------------------------
    def embed(self, target: FieldDescriptor) -> Poly:
        if target == self.field:
            return self
        return Poly._raw(target, [embed(c, target) for c in self.coeffs])

    def restrict(self, target: FieldDescriptor) -> Poly:
        if target == self.field:
            return self
        return Poly._raw(target, [restrict(c, target) for c in self.coeffs])

    def rational_coefficients(self) -> list[Fraction]:
        return [c.rational_value() for c in self.coeffs]


def _to_sympy(a: Poly):
    import sympy

    return sympy.Poly.from_list(
        [sympy.Rational(q.numerator, q.denominator) for q in reversed(a.rational_coefficients())],
        sympy.Symbol("x"),
        domain="QQ",
    )


def _rational_gcd(a: Poly, b: Poly) -> Poly:
    g = _to_sympy(a).gcd(_to_sympy(b)).monic()
    coeffs = [Fraction(int(c.p), int(c.q)) for c in reversed(g.all_coeffs())]
    return poly_from_rationals(a.field, coeffs)


def poly_from_rationals(field: FieldDescriptor, coeffs: Sequence) -> Poly:
    return Poly(field, [field.from_rational(c) for c in coeffs])
