"""Trees, cycles, heights, dispersions and pole addresses.

All of this runs on :class:`RadicalMonomial` normal forms; no field
arithmetic is involved except when filling coefficient tables.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Iterable, Union

from .field import (
    FieldError,
    RadicalMonomial,
    TowerElement,
    multiplicative_order,
    p_exponent_for,
    p_smooth_part,
    root_of_unity,
)
from .ratfun import LaurentPoly, PartialFraction, trajectory_rep

INF = math.inf


class TreeNotInSupport(FieldError):
    pass


class EmptySupport(FieldError):
    pass


class AddressFailure(FieldError):
    pass


@dataclass(frozen=True)
class TreeId:
    """Torsion trees carry (r, orbit); non-torsion trees carry a core monomial."""

    torsion: bool
    r: int = 1
    orbit: int = 0
    core: RadicalMonomial | None = None

    def sort_key(self):
        if self.torsion:
            return (0, self.r, self.orbit)
        return (1,) + self.core.sort_key()

    def __str__(self):
        if self.torsion:
            return f"torsion(r={self.r}, orbit={self.orbit})"
        return f"core({self.core})"


@dataclass(frozen=True)
class CycleInfo:
    gamma: RadicalMonomial
    e: int

    def elements(self) -> list[RadicalMonomial]:
        return [self.gamma.pow_p(l) for l in range(self.e)]


# ---------------------------------------------------------------------------
# basic invariants of a monomial


def torsion_level(alpha: RadicalMonomial) -> int:
    """Number of p-power steps before the root-of-unity part has order prime to p."""
    return p_exponent_for(p_smooth_part(alpha.order, alpha.p), alpha.p)


def coprime_order(alpha: RadicalMonomial) -> int:
    return alpha.order // p_smooth_part(alpha.order, alpha.p)


def radical_depth(alpha: RadicalMonomial) -> int:
    """The integer k with alpha's exponent vector times p^k integral but times p^(k-1) not."""
    if alpha.is_torsion:
        raise ValueError("torsion monomials have no radical depth")
    p = alpha.p
    exps = [e for _q, e in alpha.radical]
    k = 0
    if all(e.denominator == 1 for e in exps):
        while all((e / p).denominator == 1 for e in exps):
            exps = [e / p for e in exps]
            k -= 1
    else:
        while not all(e.denominator == 1 for e in exps):
            exps = [e * p for e in exps]
            k += 1
    return k


def tree_of(alpha: RadicalMonomial, p: int | None = None) -> TreeId:
    if p is not None and p != alpha.p:
        raise ValueError("monomial built for a different p")
    p = alpha.p
    if alpha.is_torsion:
        t = torsion_level(alpha)
        beta = alpha.pow_p(t)
        r = beta.order
        if r == 1:
            return TreeId(True, 1, 0)
        orbit = min(beta.exp * pow(p, j, r) % r for j in range(multiplicative_order(p, r)))
        return TreeId(True, r, orbit)
    k = radical_depth(alpha)
    r = coprime_order(alpha)
    er = multiplicative_order(p, r)
    need = max(0, -k, torsion_level(alpha) - k)
    T = er * -(-need // er)
    beta = alpha.pow_p(k + T)
    w = {q: e * Fraction(p) ** k for q, e in alpha.radical}
    core = beta.torsion() * RadicalMonomial.make(p, radical=w)
    return TreeId(False, core=core)


def cycle_of(tid: TreeId, p: int) -> CycleInfo:
    if not tid.torsion:
        raise ValueError("only torsion trees have cycles")
    if tid.r == 1:
        return CycleInfo(root_of_unity(1, 0, p), 1)
    return CycleInfo(root_of_unity(tid.r, tid.orbit, p), multiplicative_order(p, tid.r))


def on_cycle(alpha: RadicalMonomial) -> bool:
    return alpha.is_torsion and p_smooth_part(alpha.order, alpha.p) == 1


# ---------------------------------------------------------------------------
# support helpers

Support = Union[PartialFraction, Iterable[RadicalMonomial]]


def _poles(support: Support) -> list[RadicalMonomial]:
    if isinstance(support, PartialFraction):
        return support.poles()
    return list(support)


def tree_poles(support: Support, tid: TreeId) -> list[RadicalMonomial]:
    out = [a for a in _poles(support) if tree_of(a) == tid]
    if not out:
        raise TreeNotInSupport(f"no pole lies in the tree {tid}")
    return sorted(out, key=lambda a: a.sort_key())


def group_by_tree(poles: Iterable[RadicalMonomial]) -> dict[TreeId, list[RadicalMonomial]]:
    out: dict[TreeId, list[RadicalMonomial]] = {}
    for a in poles:
        out.setdefault(tree_of(a), []).append(a)
    return {t: sorted(v, key=lambda a: a.sort_key()) for t, v in sorted(out.items(), key=lambda kv: kv[0].sort_key())}


# ---------------------------------------------------------------------------
# height, bouquets, dispersion


def height(support: Support, tid: TreeId, p: int) -> tuple[int, RadicalMonomial]:
    poles = tree_poles(support, tid)
    if tid.torsion:
        return max(torsion_level(a) for a in poles), cycle_of(tid, p).gamma
    depths = {a: radical_depth(a) for a in poles}
    K = max(depths.values())
    gamma = min((a for a in poles if depths[a] == K), key=lambda a: a.sort_key())
    h = 0
    while True:
        apex = gamma.pow_p(h)
        if all(depths[a] >= K - h and a.pow_p(depths[a] - K + h) == apex for a in poles):
            return h, gamma
        h += 1


def bouquet(gamma: RadicalMonomial, h: int, p: int | None = None) -> list[RadicalMonomial]:
    p = gamma.p if p is None else p
    seen: list[RadicalMonomial] = []
    for n in range(h + 1):
        base = gamma.pow_p(h - n)
        for i in range(p**n):
            a = root_of_unity(p**n, i, p) * base
            if a not in seen:
                seen.append(a)
    return seen


def dispersion(support: Support, tid: TreeId, p: int):
    poles = tree_poles(support, tid)
    if tid.torsion and any(on_cycle(a) for a in poles):
        return INF
    h, _gamma = height(poles, tid, p)
    pole_set = set(poles)
    best = 0
    for a in poles:
        for d in range(1, h + 1):
            if a.pow_p(d) in pole_set:
                best = max(best, d)
    return best


def dispersion_at_infinity(fl: LaurentPoly, p: int) -> int:
    if fl.is_zero():
        raise EmptySupport("the Laurent part is zero")
    exps = set(fl.terms)
    best = 0
    for j in exps:
        if j == 0:
            continue
        d, t = 0, j
        while True:
            t *= p
            d += 1
            if abs(t) > max(abs(e) for e in exps):
                break
            if t in exps:
                best = max(best, d)
    return best


def laurent_height(component: LaurentPoly, p: int) -> tuple[int, int]:
    """(i, h) for a single trajectory component: representative and largest level used."""
    exps = [e for e in component.terms]
    if not exps:
        raise EmptySupport("empty trajectory component")
    i = trajectory_rep(exps[0], p)
    if i == 0:
        return 0, 0
    h = 0
    for e in exps:
        n, t = 0, e
        while t != i:
            t //= p
            n += 1
        h = max(h, n)
    return i, h


# ---------------------------------------------------------------------------
# addresses and tree data


@dataclass
class TreeData:
    id: TreeId
    gamma: RadicalMonomial
    h: int
    m: int
    e: int
    p: int
    field: object
    coeffs: dict = dc_field(default_factory=dict)
    addresses: dict = dc_field(default_factory=dict)

    @property
    def torsion(self) -> bool:
        return self.id.torsion

    def node(self, n: int, i: int, l: int = 0) -> RadicalMonomial:
        return node_monomial(self.gamma, self.p, self.h, n, i, l, self.e if self.torsion else 0)

    def level_indices(self, n: int) -> list:
        return level_indices(self.p, n, self.e if self.torsion else 0)

    def coeff(self, k: int, *addr) -> TowerElement:
        return self.coeffs.get((k,) + tuple(addr), self.field.zero())


def node_monomial(gamma: RadicalMonomial, p: int, h: int, n: int, i: int, l: int = 0, e: int = 0) -> RadicalMonomial:
    """The pole with address (n, i) (non-torsion, e == 0) or (n, i, l) (torsion)."""
    z = root_of_unity(p**n, i, p)
    if e:
        return z * gamma.pow_p((l - n) % e)
    return z * gamma.pow_p(h - n)


def level_indices(p: int, n: int, e: int = 0) -> list:
    """Addresses at level n: ints i for non-torsion, pairs (i, l) for torsion."""
    if not e:
        return list(range(p**n))
    if n == 0:
        return [(0, l) for l in range(e)]
    return [(i, l) for l in range(e) for i in range(p**n) if i % p]


def _root_index(z: RadicalMonomial, p: int, n: int) -> int:
    """i with z = zeta_{p^n}^i, or -1 if z is not a p^n-th root of unity."""
    if not z.is_torsion or (p**n) % z.order:
        return -1
    return z.exp * (p**n // z.order) % (p**n)


def address_of(alpha: RadicalMonomial, gamma: RadicalMonomial, h: int, e: int, p: int) -> tuple:
    if e:
        n = torsion_level(alpha)
        top = alpha.pow_p(n)
        l = next((l for l in range(e) if gamma.pow_p(l) == top), None)
        if l is None or n > h:
            raise AddressFailure(f"{alpha} is not in the bouquet of {gamma} at height {h}")
        i = _root_index(alpha / gamma.pow_p((l - n) % e), p, n)
        if i < 0 or (n and i % p == 0):
            raise AddressFailure(f"{alpha} has no torsion address relative to {gamma}")
        return (n, i, l)
    apex = gamma.pow_p(h)
    for n in range(h + 1):
        if alpha.pow_p(n) == apex:
            i = _root_index(alpha / gamma.pow_p(h - n), p, n)
            if i < 0:
                break
            return (n, i)
    raise AddressFailure(f"{alpha} is not in the bouquet of {gamma} at height {h}")


def address_poles(pf: PartialFraction, tid: TreeId, gamma: RadicalMonomial, h: int, e: int, p: int) -> TreeData:
    poles = [a for a in pf.poles() if tree_of(a) == tid]
    m = max((pf.order(a) for a in poles), default=0)
    data = TreeData(tid, gamma, h, m, e if tid.torsion else 0, p, pf.field)
    for a in poles:
        addr = address_of(a, gamma, h, data.e, p)
        if node_monomial(gamma, p, h, *addr[:2], *(addr[2:] or (0,)), e=data.e) != a:
            raise AddressFailure(f"address {addr} does not reproduce {a}")
        if addr in data.addresses.values():
            raise AddressFailure(f"two poles share the address {addr}")
        data.addresses[a] = addr
        for k, c in enumerate(pf.terms[a], start=1):
            data.coeffs[(k,) + addr] = c
    return data
