"""Exact scalars: Q, cyclotomic fields Q(zeta_N) and radical towers over them.

A tower is ``Q(zeta_N)[rho] / (rho^P - c)`` with ``P = p**h`` and ``c`` a
positive rational, ``rho`` standing for the positive real root ``c^(1/P)``.
Elements are stored flat over the Q-basis ``rho^t * zeta_N^j`` (``t < P``,
``j < phi(N)``) as integer numerators over one positive common denominator.

Pole values are kept symbolically as :class:`RadicalMonomial`, products
``zeta_M^a * prod(q^e_q)`` with exponents ``e_q`` in ``Z[1/p]``.  Equality of
monomials is decided on that normal form, so the tree combinatorics never
touch field arithmetic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Iterable, Sequence, Union

from sympy import factorint

Rational = Fraction
Scalar = Union[int, Fraction, "TowerElement"]


class FieldError(ArithmeticError):
    """Base class for scalar-field failures."""


class ZeroDivisor(FieldError):
    """The tower modulus splits over the cyclotomic base; carries the factor found."""

    def __init__(self, message: str, factor=None):
        super().__init__(message)
        self.factor = factor


class IncompatibleFields(FieldError):
    pass


class FieldTooSmall(FieldError):
    pass


class NotInSubfield(FieldError):
    pass


# ---------------------------------------------------------------------------
# integer helpers


def euler_phi(n: int) -> int:
    result = n
    for q in factorint(n):
        result -= result // q
    return result


def divisors(n: int) -> list[int]:
    out = [1]
    for q, e in factorint(n).items():
        out = [d * q**k for d in out for k in range(e + 1)]
    return sorted(out)


def multiplicative_order(a: int, n: int) -> int:
    """Order of ``a`` in (Z/nZ)^x; 1 for n == 1."""
    if n == 1:
        return 1
    if math.gcd(a, n) != 1:
        raise ValueError(f"{a} is not a unit mod {n}")
    k, x = 1, a % n
    while x != 1:
        x = x * a % n
        k += 1
    return k


def lcm(*values: int) -> int:
    out = 1
    for v in values:
        out = out * v // math.gcd(out, v)
    return out


def p_smooth_part(n: int, p: int) -> int:
    """Largest divisor of ``n`` built only from primes dividing ``p``."""
    out = 1
    g = math.gcd(n, p)
    while g > 1:
        n //= g
        out *= g
        g = math.gcd(n, p)
    return out


def is_p_smooth(n: int, p: int) -> bool:
    return p_smooth_part(n, p) == n


def p_exponent_for(n: int, p: int) -> int:
    """Smallest h with ``n | p**h``; ``n`` must be p-smooth."""
    h, q = 0, 1
    while q % n:
        q *= p
        h += 1
    return h


def factor_rational(q: Fraction) -> dict[int, int]:
    """Prime exponent map of a positive rational."""
    if q <= 0:
        raise ValueError("expected a positive rational")
    out: dict[int, int] = {}
    for pr, e in factorint(q.numerator).items():
        out[pr] = e
    for pr, e in factorint(q.denominator).items():
        out[pr] = out.get(pr, 0) - e
    return out


def _rational_from_factors(factors: dict[int, int]) -> Fraction:
    num = den = 1
    for q, e in factors.items():
        if e >= 0:
            num *= q**e
        else:
            den *= q ** (-e)
    return Fraction(num, den)


# ---------------------------------------------------------------------------
# cyclotomic polynomials and powers of zeta


def _int_poly_exact_div(num: list[int], den: Sequence[int]) -> list[int]:
    num = list(num)
    dn = len(den) - 1
    out = [0] * (len(num) - dn)
    for i in range(len(out) - 1, -1, -1):
        c = num[i + dn] // den[dn]
        out[i] = c
        if c:
            for j, d in enumerate(den):
                num[i + j] -= c * d
    if any(num[:dn]):
        raise ArithmeticError("inexact polynomial division")
    return out


@lru_cache(maxsize=None)
def cyclotomic_polynomial(n: int) -> tuple[int, ...]:
    """Coefficients (low to high) of the n-th cyclotomic polynomial."""
    poly = [-1] + [0] * (n - 1) + [1]
    for d in divisors(n)[:-1]:
        poly = _int_poly_exact_div(poly, cyclotomic_polynomial(d))
    return tuple(poly)


@lru_cache(maxsize=None)
def _zeta_power_table(n: int) -> tuple[tuple[int, ...], ...]:
    """Reduced coordinate vectors of zeta_n^j for 0 <= j < n."""
    phi_poly = cyclotomic_polynomial(n)
    deg = len(phi_poly) - 1
    rows = []
    cur = [0] * deg
    cur[0] = 1
    for _ in range(n):
        rows.append(tuple(cur))
        top = cur[-1]
        cur = [0] + cur[:-1]
        if top:
            for i in range(deg):
                cur[i] -= top * phi_poly[i]
    return tuple(rows)


def _reduce_cyclotomic(vec: list, n: int, deg: int) -> list:
    """Reduce a coefficient list in place modulo Phi_n (monic)."""
    phi_poly = cyclotomic_polynomial(n)
    for k in range(len(vec) - 1, deg - 1, -1):
        c = vec[k]
        if c:
            base = k - deg
            for i in range(deg):
                if phi_poly[i]:
                    vec[base + i] -= c * phi_poly[i]
            vec[k] = 0
    del vec[deg:]
    return vec


# ---------------------------------------------------------------------------
# field descriptors


@dataclass(frozen=True)
class FieldDescriptor:
    """The ambient field ``Q(zeta_N)[c^(1/p^h)]`` for one computation."""

    N: int = 1
    c: Fraction | None = None
    h: int = 0
    p: int = 2

    def __post_init__(self):
        if self.N < 1:
            raise ValueError("N must be positive")
        if self.p < 2:
            raise ValueError("p must be at least 2")
        if self.c is None:
            if self.h:
                raise ValueError("radical depth without a radicand")
            return
        c = Fraction(self.c)
        object.__setattr__(self, "c", c)
        if c <= 0 or c == 1:
            raise ValueError(f"radicand must be a positive rational other than 1, got {c}")
        if self.h < 1:
            raise ValueError("radicand needs h >= 1")
        exps = factor_rational(c)
        for q in factorint(self.p):
            if all(e % q == 0 for e in exps.values()):
                raise ValueError(f"radicand {c} is a {q}-th power")

    @cached_property
    def phi(self) -> int:
        return euler_phi(self.N)

    @cached_property
    def P(self) -> int:
        return self.p**self.h if self.c is not None else 1

    @cached_property
    def dim(self) -> int:
        return self.phi * self.P

    @cached_property
    def radicand_factors(self) -> dict[int, int]:
        return factor_rational(self.c) if self.c is not None else {}

    def zero(self) -> TowerElement:
        return TowerElement(self, (0,) * self.dim, 1, _trusted=True)

    def one(self) -> TowerElement:
        return self.from_rational(1)

    def from_rational(self, q) -> TowerElement:
        q = Fraction(q)
        num = [0] * self.dim
        num[0] = q.numerator
        return TowerElement(self, tuple(num), q.denominator, _trusted=True)

    def zeta(self, k: int = 1) -> TowerElement:
        """zeta_N^k."""
        row = _zeta_power_table(self.N)[k % self.N]
        return TowerElement(self, tuple(row) + (0,) * (self.dim - self.phi), 1, _trusted=True)

    def rho(self, k: int = 1) -> TowerElement:
        """rho^k for 0 <= k < P."""
        if not 0 <= k < self.P:
            raise ValueError("rho exponent out of range")
        num = [0] * self.dim
        num[k * self.phi] = 1
        return TowerElement(self, tuple(num), 1, _trusted=True)

    def __call__(self, value) -> TowerElement:
        if isinstance(value, TowerElement):
            if value.field == self:
                return value
            return embed(value, self)
        return self.from_rational(value)

    def rho_monomial(self) -> RadicalMonomial | None:
        if self.c is None:
            return None
        return RadicalMonomial.make(
            self.p, radical={q: Fraction(e, self.P) for q, e in self.radicand_factors.items()}
        )

    def describe(self) -> str:
        s = f"Q(zeta({self.N}))"
        if self.c is not None:
            s += f"[root({self.c},{self.P})]"
        return s


# ---------------------------------------------------------------------------
# raw arithmetic on flat integer vectors


def _mul_flat(F: FieldDescriptor, a: Sequence[int], b: Sequence[int]) -> tuple[list[int], int]:
    """Product of two flat numerator vectors; returns (numerators, extra denominator)."""
    phi, P, N = F.phi, F.P, F.N
    width = 2 * phi - 1
    rows = 2 * P - 1
    prod = [0] * (rows * width)
    nz_b = [(k // phi, k % phi, v) for k, v in enumerate(b) if v]
    for ka, va in enumerate(a):
        if not va:
            continue
        ta, ja = divmod(ka, phi)
        for tb, jb, vb in nz_b:
            prod[(ta + tb) * width + ja + jb] += va * vb
    out = []
    for t in range(rows):
        row = prod[t * width:(t + 1) * width]
        if any(row):
            _reduce_cyclotomic(row, N, phi)
        else:
            row = [0] * phi
        out.append(row)
    if P > 1 and any(any(r) for r in out[P:]):
        cn, cd = F.c.numerator, F.c.denominator
        flat = []
        for t in range(P):
            low = out[t]
            high = out[t + P] if t + P < rows else None
            if high is None:
                flat.extend(v * cd for v in low)
            else:
                flat.extend(v * cd + w * cn for v, w in zip(low, high))
        return flat, cd
    flat = []
    for t in range(P):
        flat.extend(out[t])
    return flat, 1


def _normalize(num: Iterable[int], den: int) -> tuple[tuple[int, ...], int]:
    num = tuple(num)
    if den < 0:
        num = tuple(-v for v in num)
        den = -den
    g = math.gcd(den, *num)
    if g > 1:
        num = tuple(v // g for v in num)
        den //= g
    if not any(num):
        den = 1
    return num, den


# Fraction-vector helpers used by inversion --------------------------------


def _fpoly_trim(a: list) -> list:
    while a and a[-1] == 0:
        a.pop()
    return a


def _fpoly_divmod(a: list, b: list, inv_lead) -> tuple[list, list]:
    a = list(a)
    db = len(b) - 1
    if len(a) - 1 < db:
        return [], _fpoly_trim(a)
    q = [0] * (len(a) - db)
    for i in range(len(q) - 1, -1, -1):
        c = a[i + db] * inv_lead
        q[i] = c
        if c:
            for j, bj in enumerate(b):
                if bj:
                    a[i + j] -= c * bj
    return q, _fpoly_trim(a[:db])


def _cyclo_mul(a: list, b: list, n: int, deg: int) -> list:
    if not any(a) or not any(b):
        return [Fraction(0)] * deg
    prod = [Fraction(0)] * (2 * deg - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                if y:
                    prod[i + j] += x * y
    return _reduce_cyclotomic(prod, n, deg)


def _cyclo_inv(a: list, n: int, deg: int) -> list:
    """Inverse in Q[z]/Phi_n by the extended Euclidean algorithm."""
    r0 = [Fraction(v) for v in cyclotomic_polynomial(n)]
    r1 = _fpoly_trim([Fraction(v) for v in a])
    if not r1:
        raise ZeroDivisionError("inverse of zero")
    s0: list = []
    s1: list = [Fraction(1)]
    while len(r1) > 1:
        q, r = _fpoly_divmod(r0, r1, 1 / r1[-1])
        qs1 = _fpoly_mul_plain(q, s1)
        s_new = _fpoly_sub(s0, qs1)
        r0, r1, s0, s1 = r1, r, s1, s_new
        if not r1:
            raise ArithmeticError("cyclotomic polynomial is not irreducible?")
    inv = 1 / r1[0]
    out = [v * inv for v in s1]
    out = out + [Fraction(0)] * (2 * deg)
    return _reduce_cyclotomic(out, n, deg)


def _fpoly_mul_plain(a: list, b: list) -> list:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def _fpoly_sub(a: list, b: list) -> list:
    n = max(len(a), len(b))
    out = [(a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0) for i in range(n)]
    return _fpoly_trim(out)


# ---------------------------------------------------------------------------
# tower elements


class TowerElement:
    """An element of the field described by ``field``; immutable."""

    __slots__ = ("field", "num", "den", "_hash")

    def __init__(self, field: FieldDescriptor, num: Sequence[int], den: int = 1, *, _trusted=False):
        if not _trusted:
            if len(num) != field.dim:
                raise ValueError("coefficient vector has the wrong length")
            num, den = _normalize(num, den)
        self.field = field
        self.num = tuple(num)
        self.den = den
        self._hash = None

    # --- construction -----------------------------------------------------
    @classmethod
    def from_coefficients(cls, field: FieldDescriptor, coeffs: Sequence) -> TowerElement:
        """Build from rational coordinates in the basis ``rho^t zeta^j`` (flat order)."""
        fr = [Fraction(c) for c in coeffs]
        den = lcm(*(f.denominator for f in fr)) if fr else 1
        return cls(field, [f.numerator * (den // f.denominator) for f in fr], den)

    def _make(self, num, den) -> TowerElement:
        num, den = _normalize(num, den)
        return TowerElement(self.field, num, den, _trusted=True)

    # --- inspection -------------------------------------------------------
    def coefficients(self) -> list[Fraction]:
        return [Fraction(v, self.den) for v in self.num]

    def cyclo_coefficients(self) -> list[list[Fraction]]:
        """Coordinates grouped by power of rho: one Q(zeta_N) vector per rho^t."""
        phi = self.field.phi
        flat = self.coefficients()
        return [flat[t * phi:(t + 1) * phi] for t in range(self.field.P)]

    def is_zero(self) -> bool:
        return not any(self.num)

    def __bool__(self):
        return not self.is_zero()

    def is_rational(self) -> bool:
        return not any(self.num[1:])

    def rational_value(self) -> Fraction:
        if not self.is_rational():
            raise ValueError("element is not rational")
        return Fraction(self.num[0], self.den)

    def size(self) -> int:
        """Symbolic size used for pivoting: total bit length of the representation."""
        return self.den.bit_length() + sum(abs(v).bit_length() for v in self.num)

    # --- equality ---------------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, TowerElement):
            return self.field == other.field and self.num == other.num and self.den == other.den
        if isinstance(other, (int, Fraction)):
            return self.is_rational() and Fraction(self.num[0], self.den) == other
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.field, self.num, self.den))
        return self._hash

    # --- arithmetic -------------------------------------------------------
    def _coerce(self, other) -> TowerElement | None:
        if isinstance(other, TowerElement):
            if other.field != self.field:
                raise IncompatibleFields(
                    f"cannot combine {self.field.describe()} with {other.field.describe()}"
                )
            return other
        if isinstance(other, (int, Fraction)):
            return self.field.from_rational(other)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if self.den == o.den:
            return self._make([a + b for a, b in zip(self.num, o.num)], self.den)
        return self._make(
            [a * o.den + b * self.den for a, b in zip(self.num, o.num)], self.den * o.den
        )

    __radd__ = __add__

    def __neg__(self):
        return TowerElement(self.field, tuple(-v for v in self.num), self.den, _trusted=True)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def scale(self, q) -> TowerElement:
        q = Fraction(q)
        return self._make([v * q.numerator for v in self.num], self.den * q.denominator)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if o.is_rational():
            return self._make([v * o.num[0] for v in self.num], self.den * o.den)
        if self.is_rational():
            return o._make([v * self.num[0] for v in o.num], self.den * o.den)
        num, extra = _mul_flat(self.field, self.num, o.num)
        return self._make(num, self.den * o.den * extra)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise ZeroDivisionError("division by zero")
            return self.scale(1 / Fraction(other))
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * invert(o)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * invert(self)

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return invert(self) ** (-n)
        result = self.field.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __repr__(self):
        from .render import render_scalar

        return f"TowerElement({render_scalar(self)} in {self.field.describe()})"

    __str__ = lambda self: __import__("mahler.render", fromlist=["render_scalar"]).render_scalar(self)


def CycloElement(N: int, coeffs: Sequence, p: int = 2) -> TowerElement:
    """An element of Q(zeta_N) from its coordinates in the power basis."""
    F = FieldDescriptor(N=N, p=p)
    coeffs = list(coeffs) + [0] * (F.phi - len(coeffs))
    if len(coeffs) != F.phi:
        raise ValueError("too many coordinates for Q(zeta_N)")
    return TowerElement.from_coefficients(F, coeffs)


def invert(x: TowerElement) -> TowerElement:
    """Multiplicative inverse via the extended Euclidean algorithm on the tower modulus."""
    if x.is_zero():
        raise ZeroDivisionError("division by zero in " + x.field.describe())
    F = x.field
    if x.is_rational():
        return F.from_rational(1 / x.rational_value())
    n, deg = F.N, F.phi
    layers = x.cyclo_coefficients()
    if F.P == 1:
        inv = _cyclo_inv(layers[0], n, deg)
        return TowerElement.from_coefficients(F, inv)

    zero = [Fraction(0)] * deg

    def is_zero(v):
        return not any(v)

    def trim(a):
        while a and is_zero(a[-1]):
            a.pop()
        return a

    def cmul(a, b):
        return _cyclo_mul(a, b, n, deg)

    def csub(a, b):
        return [u - v for u, v in zip(a, b)]

    def pmul(a, b):
        if not a or not b:
            return []
        out = [list(zero) for _ in range(len(a) + len(b) - 1)]
        for i, u in enumerate(a):
            if is_zero(u):
                continue
            for j, v in enumerate(b):
                if not is_zero(v):
                    w = cmul(u, v)
                    out[i + j] = [s + t for s, t in zip(out[i + j], w)]
        return trim(out)

    def psub(a, b):
        m = max(len(a), len(b))
        out = [
            csub(a[i] if i < len(a) else zero, b[i] if i < len(b) else zero) for i in range(m)
        ]
        return trim(out)

    def pdivmod(a, b):
        a = [list(v) for v in a]
        db = len(b) - 1
        if len(a) - 1 < db:
            return [], trim(a)
        inv_lead = _cyclo_inv(b[-1], n, deg)
        q = [list(zero) for _ in range(len(a) - db)]
        for i in range(len(q) - 1, -1, -1):
            c = cmul(a[i + db], inv_lead)
            q[i] = c
            if not is_zero(c):
                for j, bj in enumerate(b):
                    if not is_zero(bj):
                        a[i + j] = csub(a[i + j], cmul(c, bj))
        return q, trim(a[:db])

    one = [Fraction(1)] + [Fraction(0)] * (deg - 1)
    modulus = [[-F.c] + [Fraction(0)] * (deg - 1)] + [list(zero) for _ in range(F.P - 1)] + [one]
    r0, r1 = modulus, trim([list(v) for v in layers])
    s0: list = []
    s1: list = [one]
    while len(r1) > 1:
        q, r = pdivmod(r0, r1)
        r0, r1, s0, s1 = r1, r, s1, psub(s0, pmul(q, s1))
        if not r1:
            factor = [list(v) for v in r0]
            raise ZeroDivisor(
                f"rho^{F.P} - {F.c} is reducible over Q(zeta_{F.N}); "
                f"found a factor of degree {len(factor) - 1}",
                factor=factor,
            )
    inv_c = _cyclo_inv(r1[0], n, deg)
    s1 = [cmul(v, inv_c) for v in s1]
    s1 = s1 + [list(zero) for _ in range(F.P - len(s1))]
    flat = [v for layer in s1 for v in layer]
    return TowerElement.from_coefficients(F, flat)


# ---------------------------------------------------------------------------
# radical monomials


def _frac_in_p_ring(q: Fraction, p: int) -> bool:
    return is_p_smooth(q.denominator, p)


@dataclass(frozen=True)
class RadicalMonomial:
    """``zeta_order^exp * prod(prime^e)`` with exponents in Z[1/p].

    ``order`` is the exact order of the root-of-unity part, ``exp`` a unit
    mod ``order`` (``exp == 0`` when ``order == 1``).  ``radical`` is a sorted
    tuple of ``(prime, exponent)`` pairs with nonzero exponents.
    """

    p: int
    order: int = 1
    exp: int = 0
    radical: tuple[tuple[int, Fraction], ...] = ()

    @classmethod
    def make(cls, p: int, order: int = 1, exp: int = 0, radical=None, scalar=None) -> RadicalMonomial:
        rad: dict[int, Fraction] = {}
        if radical:
            for q, e in dict(radical).items():
                rad[q] = rad.get(q, Fraction(0)) + Fraction(e)
        if scalar is not None:
            s = Fraction(scalar)
            if s == 0:
                raise ValueError("zero is not a monomial")
            if s < 0:
                order, exp = _torsion_mul(order, exp, 2, 1)
                s = -s
            for q, e in factor_rational(s).items():
                rad[q] = rad.get(q, Fraction(0)) + e
        for q, e in list(rad.items()):
            if e == 0:
                del rad[q]
            elif not _frac_in_p_ring(e, p):
                raise ValueError(f"exponent {e} of {q} has a denominator that is not a power of p={p}")
        order, exp = _torsion_reduce(order, exp)
        return cls(p, order, exp, tuple(sorted(rad.items())))

    # --- basic predicates ---------------------------------------------------
    @property
    def is_torsion(self) -> bool:
        return not self.radical

    @property
    def radical_map(self) -> dict[int, Fraction]:
        return dict(self.radical)

    def torsion(self) -> RadicalMonomial:
        return RadicalMonomial(self.p, self.order, self.exp, ())

    def radical_part(self) -> RadicalMonomial:
        return RadicalMonomial(self.p, 1, 0, self.radical)

    # --- arithmetic ---------------------------------------------------------
    def __mul__(self, other: RadicalMonomial) -> RadicalMonomial:
        if not isinstance(other, RadicalMonomial):
            return NotImplemented
        if other.p != self.p:
            raise ValueError("monomials for different p")
        order, exp = _torsion_mul(self.order, self.exp, other.order, other.exp)
        rad = dict(self.radical)
        for q, e in other.radical:
            rad[q] = rad.get(q, Fraction(0)) + e
        rad = {q: e for q, e in rad.items() if e}
        return RadicalMonomial(self.p, order, exp, tuple(sorted(rad.items())))

    def __truediv__(self, other: RadicalMonomial) -> RadicalMonomial:
        return self * other.inverse()

    def inverse(self) -> RadicalMonomial:
        order, exp = _torsion_reduce(self.order, -self.exp)
        return RadicalMonomial(self.p, order, exp, tuple((q, -e) for q, e in self.radical))

    def __pow__(self, n: int) -> RadicalMonomial:
        if not isinstance(n, int):
            return NotImplemented
        order, exp = _torsion_reduce(self.order, self.exp * n)
        rad = tuple((q, e * n) for q, e in self.radical) if n else ()
        return RadicalMonomial(self.p, order, exp, rad)

    def pow_p(self, t: int) -> RadicalMonomial:
        return self ** (self.p**t)

    def is_one(self) -> bool:
        return self.order == 1 and not self.radical

    def sort_key(self):
        return (len(self.radical), self.radical, self.order, self.exp)

    def __lt__(self, other: RadicalMonomial):
        return self.sort_key() < other.sort_key()

    def __str__(self):
        from .render import render_monomial

        return render_monomial(self)

    def __repr__(self):
        return f"RadicalMonomial({self})"


def _torsion_reduce(order: int, exp: int) -> tuple[int, int]:
    exp %= order
    if exp == 0:
        return 1, 0
    g = math.gcd(exp, order)
    return order // g, exp // g


def _torsion_mul(o1: int, e1: int, o2: int, e2: int) -> tuple[int, int]:
    m = lcm(o1, o2)
    return _torsion_reduce(m, e1 * (m // o1) + e2 * (m // o2))


def root_of_unity(N: int, a: int, p: int = 2) -> RadicalMonomial:
    """zeta_N^a in normal form (stored order exact)."""
    if N < 1:
        raise ValueError("N must be positive")
    order, exp = _torsion_reduce(N, a)
    return RadicalMonomial(p, order, exp, ())


def monomial_pow_p(alpha: RadicalMonomial, t: int) -> RadicalMonomial:
    if t < 0:
        raise ValueError("t must be non-negative")
    return alpha.pow_p(t)


def monomial_eq(alpha: RadicalMonomial, beta: RadicalMonomial) -> bool:
    if alpha.p != beta.p:
        raise ValueError("monomials for different p")
    return alpha == beta


def pth_roots(beta: RadicalMonomial) -> list[RadicalMonomial]:
    """All ``p`` solutions of ``y^p = beta``."""
    p = beta.p
    root = RadicalMonomial.make(
        p,
        order=beta.order * p,
        exp=beta.exp,
        radical={q: e / p for q, e in beta.radical},
    )
    return [root * root_of_unity(p, j, p) for j in range(p)]


# ---------------------------------------------------------------------------
# evaluation of monomials and field inclusions


def _radical_index(alpha: RadicalMonomial, F: FieldDescriptor) -> tuple[int, Fraction]:
    """Find k, r with radical(alpha) = r * rho^k and r rational."""
    if not alpha.radical:
        return 0, Fraction(1)
    if all(e.denominator == 1 for _q, e in alpha.radical):
        return 0, _rational_from_factors({q: int(e) for q, e in alpha.radical})
    if F.c is None:
        raise FieldTooSmall(f"{alpha} needs a radical but {F.describe()} has none")
    u = F.radicand_factors
    e = alpha.radical_map
    primes = set(u) | set(e)
    for k in range(F.P):
        rest = {q: e.get(q, Fraction(0)) - Fraction(k * u.get(q, 0), F.P) for q in primes}
        if all(v.denominator == 1 for v in rest.values()):
            return k, _rational_from_factors({q: int(v) for q, v in rest.items()})
    raise FieldTooSmall(f"{alpha} is not a power of root({F.c},{F.P}) up to rationals")


def monomial_value(alpha: RadicalMonomial, target: FieldDescriptor) -> TowerElement:
    """The element of ``target`` equal to ``alpha``."""
    if target.N % alpha.order:
        raise FieldTooSmall(f"{target.describe()} does not contain zeta({alpha.order})")
    k, r = _radical_index(alpha, target)
    j = alpha.exp * (target.N // alpha.order)
    row = _zeta_power_table(target.N)[j % target.N]
    num = [0] * target.dim
    base = k * target.phi
    for i, v in enumerate(row):
        num[base + i] = v * r.numerator
    return TowerElement(target, num, r.denominator)


@lru_cache(maxsize=None)
def _embedding_images(src: FieldDescriptor, dst: FieldDescriptor) -> tuple[TowerElement, ...]:
    if dst.N % src.N:
        raise IncompatibleFields(f"cannot embed {src.describe()} into {dst.describe()}")
    if src.p != dst.p:
        raise IncompatibleFields("descriptors for different p")
    rho_img = dst.one() if src.c is None else monomial_value(src.rho_monomial(), dst)
    zeta_img = dst.zeta(dst.N // src.N)
    images = []
    rho_pow = dst.one()
    for _t in range(src.P):
        z_pow = rho_pow
        for _j in range(src.phi):
            images.append(z_pow)
            z_pow = z_pow * zeta_img
        rho_pow = rho_pow * rho_img
    return tuple(images)


def embed(x, target: FieldDescriptor) -> TowerElement:
    """Value-preserving inclusion of ``x`` into ``target``."""
    if isinstance(x, (int, Fraction)):
        return target.from_rational(x)
    if x.field == target:
        return x
    if x.is_rational():
        return target.from_rational(x.rational_value())
    images = _embedding_images(x.field, target)
    num = [0] * target.dim
    den = 1
    for v, img in zip(x.num, images):
        if v:
            # accumulate v * img over a common denominator
            new_den = lcm(den, img.den)
            num = [a * (new_den // den) + v * b * (new_den // img.den) for a, b in zip(num, img.num)]
            den = new_den
    return TowerElement(target, num, den * x.den)


@lru_cache(maxsize=None)
def _restriction_data(src: FieldDescriptor, dst: FieldDescriptor):
    """Pivot rows and inverse submatrix for inverting the embedding src -> dst."""
    from .linalg import invert_matrix, row_basis

    images = _embedding_images(src, dst)
    cols = [img.coefficients() for img in images]
    matrix = [[cols[j][i] for j in range(len(cols))] for i in range(dst.dim)]
    rows = row_basis(matrix)
    if len(rows) != src.dim:
        raise IncompatibleFields(
            f"embedding {src.describe()} -> {dst.describe()} is not injective (reducible tower)"
        )
    sub = [matrix[r] for r in rows]
    return rows, invert_matrix(sub)


def restrict(x: TowerElement, source: FieldDescriptor) -> TowerElement:
    """Inverse of :func:`embed`: express ``x`` (in a larger field) in ``source``."""
    if x.field == source:
        return x
    if x.is_rational():
        return source.from_rational(x.rational_value())
    rows, inv = _restriction_data(source, x.field)
    coords = x.coefficients()
    rhs = [coords[r] for r in rows]
    sol = [sum((a * b for a, b in zip(row, rhs)), Fraction(0)) for row in inv]
    y = TowerElement.from_coefficients(source, sol)
    if embed(y, x.field) != x:
        raise NotInSubfield(f"element does not lie in {source.describe()}")
    return y


# ---------------------------------------------------------------------------
# choosing working fields


def _radical_vectors(monos: Iterable[RadicalMonomial]) -> list[dict[int, Fraction]]:
    return [m.radical_map for m in monos if m.radical]


def field_for(
    monomials: Iterable[RadicalMonomial],
    p: int,
    base: FieldDescriptor | None = None,
    extra_N: int = 1,
) -> FieldDescriptor:
    """Smallest supported descriptor containing ``base`` and every monomial."""
    monomials = list(monomials)
    N = lcm(extra_N, *(m.order for m in monomials)) if monomials else extra_N
    if base is not None:
        N = lcm(N, base.N)
        if base.p != p:
            raise IncompatibleFields("base field has a different p")
    gens: list[dict[int, Fraction]] = []
    if base is not None and base.c is not None:
        gens.append(base.rho_monomial().radical_map)
    gens.extend(_radical_vectors(monomials))
    # fractional parts only
    fracs = []
    for g in gens:
        f = {q: e - math.floor(e) for q, e in g.items()}
        f = {q: e for q, e in f.items() if e}
        fracs.append(f)
    fracs = [f for f in fracs if f]
    if not fracs:
        return FieldDescriptor(N=N, p=p)
    D = lcm(*(e.denominator for f in fracs for e in f.values()))
    K = p_exponent_for(D, p)
    mod = p**K
    primes = sorted({q for f in fracs for q in f})
    vecs = [tuple(int(f.get(q, 0) * mod) % mod for q in primes) for f in fracs]

    def order(v):
        return mod // math.gcd(mod, *v)

    best = max(range(len(vecs)), key=lambda i: (order(vecs[i]), -i))
    g = vecs[best]
    o = order(g)
    for v in vecs:
        if not any(all((a * gi - vi) % mod == 0 for gi, vi in zip(g, v)) for a in range(o)):
            raise IncompatibleFields(
                "radicals in this problem are not all powers of a single radical: "
                + ", ".join(f"{q}^{Fraction(x, mod)}" for q, x in zip(primes, v))
            )
    H = p_exponent_for(o, p)
    P = p**H
    # generator exponents are g/mod = w/o; radicand exponents u = w * P / o
    u = [gi * P // mod for gi in g]
    # strip common factors made of primes dividing p so c is not a q-th power
    common = math.gcd(*u)
    d = p_smooth_part(common, p) if common else 1
    u = [x // d for x in u]
    c = _rational_from_factors(dict(zip(primes, u)))
    F = FieldDescriptor(N=N, c=c, h=H, p=p)
    check_irreducible(F)
    return F


def _quadratic_conductor(c: Fraction) -> int:
    """Conductor of Q(sqrt(c)) for a positive rational non-square c."""
    s = 1
    for q, e in factor_rational(c).items():
        if e % 2:
            s *= q
    return s if s % 4 == 1 else 4 * s


def check_irreducible(F: FieldDescriptor) -> None:
    """Raise ZeroDivisor when rho^P - c splits over Q(zeta_N).

    For odd prime divisors of P this never happens (c is not a q-th power);
    for 2 | P the polynomial splits exactly when sqrt(c) lies in Q(zeta_N),
    which is decided by the conductor of Q(sqrt(c)).
    """
    if F.c is None or F.P % 2:
        return
    cond = _quadratic_conductor(F.c)
    if F.N % cond == 0:
        raise ZeroDivisor(
            f"root({F.c},{F.P}) needs sqrt({F.c}), which already lies in Q(zeta({F.N})); "
            "this radical/root-of-unity combination is not supported",
            factor=(F.c, cond),
        )
