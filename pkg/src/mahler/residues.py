"""Discrete residues, the reductions they come from, and the summability decision."""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Sequence

from .field import (
    FieldDescriptor,
    FieldError,
    NotInSubfield,
    RadicalMonomial,
    TowerElement,
    field_for,
    root_of_unity,
)
from .poles import find_poles
from .ratfun import (
    LaurentPoly,
    PartialFraction,
    RationalFunction,
    delta,
    partial_fractions,
    recombine,
    split_LT,
    trajectory_components,
)
from .structure import (
    TreeData,
    TreeId,
    address_poles,
    cycle_of,
    group_by_tree,
    height,
    laurent_height,
)
from .vcoeffs import UniversalVTable, universal_v, v_coeff


class VerificationError(FieldError):
    """An internal identity failed to hold exactly; indicates a bug."""


# ---------------------------------------------------------------------------
# at infinity


def dres_infinity(fl: LaurentPoly, p: int) -> dict[int, TowerElement]:
    out = {}
    for rep, comp in trajectory_components(fl, p).items():
        total = fl.field.zero()
        for c in comp.terms.values():
            total = total + c
        if not total.is_zero():
            out[rep] = total
    return out


def reduce_infinity(fl: LaurentPoly, p: int) -> tuple[LaurentPoly, LaurentPoly]:
    """(fbar, g) with fbar = fl + delta(g) and each trajectory collapsed to its top exponent."""
    F = fl.field
    fbar: dict[int, TowerElement] = {}
    g: dict[int, TowerElement] = {}
    for rep, comp in trajectory_components(fl, p).items():
        if rep == 0:
            fbar[0] = comp.coeff(0)
            continue
        _i, h = laurent_height(comp, p)
        running = F.zero()
        for k in range(h + 1):
            running = running + comp.coeff(rep * p**k)
            if k < h:
                g[rep * p**k] = running
        fbar[rep * p**h] = running
    return LaurentPoly(F, fbar), LaurentPoly(F, g)


# ---------------------------------------------------------------------------
# non-torsion trees


def hat_c(data: TreeData, vtable: UniversalVTable) -> dict:
    """Table (k, n, i) -> c-hat for 0 <= n <= h, dense with explicit zeros."""
    if data.torsion:
        raise ValueError("hat_c needs a non-torsion tree")
    F, p, m = data.field, data.p, data.m
    vtable = vtable.extend(m)
    out = {}
    for k in range(1, m + 1):
        out[(k, 0, 0)] = data.coeff(k, 0, 0)
    for n in range(1, data.h + 1):
        for i in data.level_indices(n):
            alpha = data.node(n, i)
            parent = i % p ** (n - 1)
            for k in range(1, m + 1):
                acc = data.coeff(k, n, i)
                for s in range(k, m + 1):
                    prev = out[(s, n - 1, parent)]
                    if not prev.is_zero():
                        acc = acc + v_coeff(vtable, alpha, s, k, F) * prev
                out[(k, n, i)] = acc
    return out


# ---------------------------------------------------------------------------
# cyclic maps on a torsion cycle


def _cycle_field(table, field):
    if field is not None:
        return field
    for row in table:
        for v in row:
            if isinstance(v, TowerElement):
                return v.field
    raise ValueError("cannot infer the field; pass field=")


def cyclic_D(
    gamma: RadicalMonomial,
    e: int,
    m: int,
    vtable: UniversalVTable,
    c: Sequence[Sequence],
    field: FieldDescriptor | None = None,
) -> list[list[TowerElement]]:
    """d[l][k-1] = c[l][k-1] - sum_{s>=k} V^s_k(gamma^(p^l)) c[l+1][s-1]."""
    F = _cycle_field(c, field)
    vtable = vtable.extend(m)
    c = [[F(v) for v in row] for row in c]
    out = []
    for l in range(e):
        beta = gamma.pow_p(l)
        nxt = c[(l + 1) % e]
        row = []
        for k in range(1, m + 1):
            acc = c[l][k - 1]
            for s in range(k, m + 1):
                if not nxt[s - 1].is_zero():
                    acc = acc - v_coeff(vtable, beta, s, k, F) * nxt[s - 1]
            row.append(acc)
        out.append(row)
    return out


def cyclic_L(
    gamma: RadicalMonomial,
    e: int,
    m: int,
    vtable: UniversalVTable,
    d: Sequence[Sequence],
    field: FieldDescriptor | None = None,
) -> list[list[TowerElement]]:
    """The inverse of :func:`cyclic_D`, solved from the top order down."""
    F = _cycle_field(d, field)
    vtable = vtable.extend(m)
    d = [[F(v) for v in row] for row in d]
    p = gamma.p
    betas = [gamma.pow_p(l) for l in range(e)]
    c = [[F.zero()] * m for _ in range(e)]
    for k in range(m, 0, -1):
        rhs = []
        for l in range(e):
            acc = d[l][k - 1]
            nxt = c[(l + 1) % e]
            for s in range(k + 1, m + 1):
                if not nxt[s - 1].is_zero():
                    acc = acc + v_coeff(vtable, betas[l], s, k, F) * nxt[s - 1]
            rhs.append(acc)
        a = [v_coeff(vtable, betas[l], k, k, F) for l in range(e)]
        # c_l = rhs_l + a_l c_{l+1}; the product of all a_l is p^(-e k)
        total = F.zero()
        prefix = F.one()
        for j in range(e):
            total = total + prefix * rhs[j]
            prefix = prefix * a[j]
        c0 = total * (1 / (1 - Fraction(1, p ** (e * k))))
        c[0][k - 1] = c0
        nxt_val = c0
        for l in range(e - 1, 0, -1):
            nxt_val = rhs[l] + a[l] * nxt_val
            c[l][k - 1] = nxt_val
    return c


# ---------------------------------------------------------------------------
# torsion trees


def hat_d(data: TreeData, vtable: UniversalVTable) -> dict:
    """Table (k, n, i, l) -> d-hat for 0 <= n <= h, dense with explicit zeros."""
    if not data.torsion:
        raise ValueError("hat_d needs a torsion tree")
    F, p, m, e = data.field, data.p, data.m, data.e
    vtable = vtable.extend(m)
    base = [[data.coeff(k, 0, 0, l) for k in range(1, m + 1)] for l in range(e)]
    lifted = cyclic_L(data.gamma, e, m, vtable, base, field=F)
    out = {}
    for l in range(e):
        for k in range(1, m + 1):
            out[(k, 0, 0, l)] = lifted[l][k - 1]
    for n in range(1, data.h + 1):
        for i, l in data.level_indices(n):
            alpha = data.node(n, i, l)
            parent = (i % p ** (n - 1), l) if n > 1 else (0, l)
            for k in range(1, m + 1):
                acc = data.coeff(k, n, i, l)
                for s in range(k, m + 1):
                    prev = out[(s, n - 1) + parent]
                    if not prev.is_zero():
                        acc = acc + v_coeff(vtable, alpha, s, k, F) * prev
                out[(k, n, i, l)] = acc
    return out


def reduce_tree(data: TreeData, vtable: UniversalVTable, p: int | None = None) -> tuple[PartialFraction, PartialFraction]:
    """(fbar_tau, g_tau) as partial fractions with fbar_tau = f_tau + delta(g_tau)."""
    F, m = data.field, data.m
    if m == 0:
        return PartialFraction(F), PartialFraction(F)
    if data.torsion and data.h == 0:
        fbar = {}
        for l in range(data.e):
            fbar[data.node(0, 0, l)] = [data.coeff(k, 0, 0, l) for k in range(1, m + 1)]
        return PartialFraction(F, fbar), PartialFraction(F)
    table = hat_d(data, vtable) if data.torsion else hat_c(data, vtable)
    fbar: dict = {}
    g: dict = {}
    for n in range(data.h + 1):
        target = fbar if n == data.h else g
        for idx in data.level_indices(n):
            addr = idx if isinstance(idx, tuple) else (idx,)
            alpha = data.node(n, *addr)
            target[alpha] = [table[(k, n) + addr] for k in range(1, m + 1)]
    return PartialFraction(F, fbar), PartialFraction(F, g)


# ---------------------------------------------------------------------------
# the report


@dataclass
class TreeResidues:
    id: TreeId
    gamma: RadicalMonomial
    h: int
    e: int
    m: int
    field: FieldDescriptor
    residues: dict  # k -> {pole: value}, nonzero only

    def is_zero(self) -> bool:
        return not any(self.residues.values())

    def poles(self) -> list[RadicalMonomial]:
        out = []
        for by_pole in self.residues.values():
            for a in by_pole:
                if a not in out:
                    out.append(a)
        return out


@dataclass
class MahlerReport:
    f: RationalFunction
    p: int
    summable: bool
    residues_at_infinity: dict
    tree_residues: list
    remainder: RationalFunction
    certificate: RationalFunction
    solution: RationalFunction | None
    trees: list = dc_field(default_factory=list)
    remainder_laurent: LaurentPoly | None = None
    certificate_laurent: LaurentPoly | None = None

    @property
    def field(self) -> FieldDescriptor:
        return self.f.field

    def nonzero_residues(self) -> int:
        count = len(self.residues_at_infinity)
        for tr in self.tree_residues:
            count += sum(len(v) for v in tr.residues.values())
        return count


def _group_key(tid: TreeId):
    if tid.torsion:
        return ()
    return tid.core.radical


def tree_field(base: FieldDescriptor, p: int, specs: list[tuple[TreeId, RadicalMonomial, int, list]]) -> FieldDescriptor:
    """Working field for a group of trees sharing one radical: (id, gamma, h, poles) per tree."""
    monos = []
    for _tid, gamma, h, poles in specs:
        monos.append(gamma)
        monos.append(root_of_unity(p**h, 1, p))
        monos.extend(poles)
    return field_for(monos, p, base=base)


def analyse_trees(f_T: RationalFunction, p: int, vtable: UniversalVTable | None = None):
    """Run the tree pipeline on a proper part.

    Returns a list of (group field, [(TreeData, fbar_pf, g_pf)]) and the pole list.
    """
    F0 = f_T.field
    if not f_T.num:
        return [], []
    poles = find_poles(f_T.den, p)
    m_all = max(m for _a, m in poles)
    vtable = (vtable or universal_v(p, m_all)).extend(m_all)
    trees = group_by_tree([a for a, _m in poles])
    groups: dict = {}
    for tid, tpoles in trees.items():
        h, gamma = height(tpoles, tid, p)
        e = cycle_of(tid, p).e if tid.torsion else 0
        groups.setdefault(_group_key(tid), []).append((tid, gamma, h, e, tpoles))
    out = []
    for _key, members in groups.items():
        G = tree_field(F0, p, [(tid, gamma, h, tp) for tid, gamma, h, _e, tp in members])
        wanted = [a for *_rest, tp in members for a in tp]
        pf = partial_fractions(f_T, poles, field=G, select=wanted)
        results = []
        for tid, gamma, h, e, _tp in members:
            data = address_poles(pf, tid, gamma, h, e, p)
            fbar, g = reduce_tree(data, vtable, p)
            results.append((data, fbar, g))
        out.append((G, results))
    return out, poles


def _restrict_ratfun(r: RationalFunction, F0: FieldDescriptor) -> RationalFunction:
    try:
        return r.restrict(F0)
    except NotInSubfield as exc:
        raise VerificationError(f"a tree-group component is not defined over the input field: {exc}")


def mahler_report(f: RationalFunction, p: int) -> MahlerReport:
    if p < 2:
        raise ValueError("p must be at least 2")
    F0 = f.field
    fl, ft = split_LT(f)
    fbar_L, g_L = reduce_infinity(fl, p)
    res_inf = dres_infinity(fl, p)
    groups, _poles = analyse_trees(ft, p)
    fbar = fbar_L.to_ratfun()
    g = g_L.to_ratfun()
    tree_res = []
    trees = []
    for G, results in groups:
        fbar_pf = PartialFraction(G)
        g_pf = PartialFraction(G)
        for data, fb, gg in results:
            fbar_pf = fbar_pf + fb
            g_pf = g_pf + gg
            by_order: dict = {}
            for alpha, cs in fb.terms.items():
                for k, c in enumerate(cs, start=1):
                    if not c.is_zero():
                        by_order.setdefault(k, {})[alpha] = c
            tree_res.append(TreeResidues(data.id, data.gamma, data.h, data.e, data.m, G, by_order))
            trees.append(data)
        fbar = fbar + _restrict_ratfun(recombine(fbar_pf), F0)
        g = g + _restrict_ratfun(recombine(g_pf), F0)
    if fbar != f + delta(g, p):
        raise VerificationError("fbar = f + delta(g) failed")
    summable = fbar.is_zero()
    return MahlerReport(
        f=f,
        p=p,
        summable=summable,
        residues_at_infinity=res_inf,
        tree_residues=tree_res,
        remainder=fbar,
        certificate=g,
        solution=-g if summable else None,
        trees=trees,
        remainder_laurent=fbar_L,
        certificate_laurent=g_L,
    )


def remainder(f: RationalFunction, p: int) -> RationalFunction:
    """The Mahler remainder of f (zero exactly when f is summable)."""
    return mahler_report(f, p).remainder


def tree_components(
    f_T: RationalFunction,
    p: int,
    field: FieldDescriptor | None = None,
    trees: Sequence[TreeId] | None = None,
) -> dict[TreeId, PartialFraction]:
    """Per-tree partial fractions of a proper function, optionally for a subset of trees."""
    if not f_T.num:
        return {}
    poles = find_poles(f_T.den, p)
    groups = group_by_tree([a for a, _m in poles])
    if trees is not None:
        groups = {tid: tp for tid, tp in groups.items() if tid in trees}
    wanted = [a for tp in groups.values() for a in tp]
    if field is None:
        field = field_for(wanted, p, base=f_T.field)
    pf = partial_fractions(f_T, poles, field=field, select=wanted)
    return {tid: pf.select(tp) for tid, tp in groups.items()}
