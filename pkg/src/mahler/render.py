"""Exact string forms for scalars, monomials, polynomials and rational functions.

Every string produced here is accepted by :mod:`mahler.parse` and evaluates
back to the same value.
"""

from __future__ import annotations

from fractions import Fraction
from typing import TYPE_CHECKING

if TYPE_CHECKING:
    from .field import RadicalMonomial, TowerElement


def render_rational(q: Fraction) -> str:
    q = Fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def _basis_label(field, t: int, j: int) -> str:
    parts = []
    if j:
        parts.append(f"zeta({field.N})" + (f"^{j}" if j > 1 else ""))
    if t:
        parts.append(f"root({field.c},{field.P})" + (f"^{t}" if t > 1 else ""))
    return "*".join(parts)


def _join_terms(terms: list[tuple[Fraction, str]]) -> str:
    """Join ``coeff * label`` terms into a signed sum."""
    if not terms:
        return "0"
    out = []
    for idx, (c, label) in enumerate(terms):
        neg = c < 0
        a = -c if neg else c
        if label:
            body = label if a == 1 else f"{render_rational(a)}*{label}"
        else:
            body = render_rational(a)
        if idx == 0:
            out.append(("-" if neg else "") + body)
        else:
            out.append((" - " if neg else " + ") + body)
    return "".join(out)


def render_scalar(x) -> str:
    if isinstance(x, (int, Fraction)):
        return render_rational(Fraction(x))
    F = x.field
    terms = []
    for k, v in enumerate(x.num):
        if v:
            t, j = divmod(k, F.phi)
            terms.append((Fraction(v, x.den), _basis_label(F, t, j)))
    return _join_terms(terms)


def _is_compound(s: str) -> bool:
    body = s[1:] if s.startswith("-") else s
    return " + " in body or " - " in body


def render_monomial(alpha: RadicalMonomial) -> str:
    parts = []
    if alpha.order > 1:
        if alpha.order == 2:
            parts.append("(-1)")
        else:
            parts.append(f"zeta({alpha.order})" + (f"^{alpha.exp}" if alpha.exp != 1 else ""))
    for q, e in alpha.radical:
        if e.denominator == 1:
            parts.append(str(q) if e == 1 else f"{q}^{e.numerator}" if e > 0 else f"{q}^({e.numerator})")
        else:
            base = f"root({q},{e.denominator})"
            n = e.numerator
            parts.append(base if n == 1 else f"{base}^{n}" if n > 0 else f"{base}^({n})")
    return "*".join(parts) if parts else "1"


def render_poly(coeffs, var: str = "x") -> str:
    """Polynomial from low-to-high coefficients (scalars), highest degree first."""
    chunks = []
    for d in range(len(coeffs) - 1, -1, -1):
        c = coeffs[d]
        if c == 0:
            continue
        chunks.append((d, render_scalar(c)))
    return _join_monomials(chunks, var)


def render_laurent(terms: dict, var: str = "x") -> str:
    chunks = [(d, render_scalar(terms[d])) for d in sorted(terms, reverse=True)]
    return _join_monomials(chunks, var)


def _power(var: str, d: int) -> str:
    if d == 1:
        return var
    if d < 0:
        return f"{var}^({d})"
    return f"{var}^{d}"


def _join_monomials(chunks: list[tuple[int, str]], var: str) -> str:
    if not chunks:
        return "0"
    out = []
    for idx, (d, s) in enumerate(chunks):
        if _is_compound(s):
            s = f"({s})"
            neg = False
        else:
            neg = s.startswith("-")
            if neg:
                s = s[1:]
        if d == 0:
            body = s
        elif s == "1":
            body = _power(var, d)
        else:
            body = f"{s}*{_power(var, d)}"
        if idx == 0:
            out.append(("-" if neg else "") + body)
        else:
            out.append((" - " if neg else " + ") + body)
    return "".join(out)


def render_ratfun(num, den, var: str = "x") -> str:
    """``num/den`` given low-to-high coefficient sequences."""
    n = render_poly(num, var)
    if len(den) == 1 and den[0] == 1:
        return n
    d = render_poly(den, var)
    if n == "0":
        return "0"
    n_wrapped = f"({n})" if _is_compound(n) else n
    return f"{n_wrapped}/({d})"
