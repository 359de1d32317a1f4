"""Universal coefficients of 1/(x^p - a^p)^m and their evaluations V^s_k(alpha)."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb

from .field import FieldDescriptor, RadicalMonomial, TowerElement, monomial_value


def _series_mul(a: list[Fraction], b: list[Fraction], n: int) -> list[Fraction]:
    out = [Fraction(0)] * n
    for i, u in enumerate(a[:n]):
        if u:
            for j in range(min(len(b), n - i)):
                out[i + j] += u * b[j]
    return out


def _series_inverse(a: list[Fraction], n: int) -> list[Fraction]:
    inv0 = 1 / a[0]
    out = [inv0]
    for k in range(1, n):
        acc = sum((a[j] * out[k - j] for j in range(1, min(k, len(a) - 1) + 1)), Fraction(0))
        out.append(-acc * inv0)
    return out


@dataclass(frozen=True)
class UniversalVTable:
    """entries[(s, k)] for 1 <= k <= s <= m_max."""

    p: int
    m_max: int
    entries: dict

    def __call__(self, s: int, k: int) -> Fraction:
        if not 1 <= k <= s <= self.m_max:
            raise IndexError(f"no universal coefficient for s={s}, k={k} (m_max={self.m_max})")
        return self.entries[(s, k)]

    def extend(self, m_max: int) -> UniversalVTable:
        return self if m_max <= self.m_max else universal_v(self.p, m_max)


@lru_cache(maxsize=None)
def universal_v(p: int, m_max: int) -> UniversalVTable:
    if p < 2 or m_max < 1:
        raise ValueError("need p >= 2 and m_max >= 1")
    n = m_max
    # q(t) = sum_{j<p} (1+t)^j truncated at t^n
    q = [Fraction(sum(comb(j, i) for j in range(p))) for i in range(n)]
    qinv = _series_inverse(q, n)
    entries = {}
    power = [Fraction(1)] + [Fraction(0)] * (n - 1)
    for s in range(1, m_max + 1):
        power = _series_mul(power, qinv, n)
        for k in range(1, s + 1):
            entries[(s, k)] = power[s - k]
    return UniversalVTable(p, m_max, entries)


def v_coeff(table: UniversalVTable, alpha, s: int, k: int, field: FieldDescriptor | None = None) -> TowerElement:
    """V^s_k(alpha) = table(s, k) * alpha^(k - p*s).

    ``alpha`` is a monomial (evaluated in ``field``) or an invertible field element.
    """
    u = table(s, k)
    if isinstance(alpha, RadicalMonomial):
        if field is None:
            raise ValueError("a field is needed to evaluate a monomial")
        return monomial_value(alpha ** (k - table.p * s), field) * u
    return (alpha ** (k - table.p * s)) * u
