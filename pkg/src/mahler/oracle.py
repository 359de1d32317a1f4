"""Independent summability check: solve f = delta(g) over a finite ansatz for g.

The ansatz puts poles of g on the first levels above each tree's apex (or
cycle) and Laurent terms along each trajectory, then matches partial
fraction and Laurent coordinates by exact linear algebra.  Node sets are
generated by repeated p-th roots, not by the address formulas the residue
pipeline uses.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

from .field import FieldDescriptor, RadicalMonomial, field_for, pth_roots
from .linalg import solve
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
from .residues import VerificationError, _group_key
from .structure import TreeId, cycle_of, group_by_tree, height, laurent_height, on_cycle
from .vcoeffs import universal_v, v_coeff


@dataclass
class AnsatzBounds:
    """Overrides for the default ansatz; ``None`` means derive from the input."""

    max_height: int | None = None
    max_order: int | None = None
    per_tree: dict = dc_field(default_factory=dict)  # TreeId -> (H, M)


def _ansatz_nodes(tid: TreeId, gamma: RadicalMonomial, h: int, H: int, p: int) -> list[RadicalMonomial]:
    if tid.torsion:
        level = cycle_of(tid, p).elements()
        nodes = list(level)
        for _n in range(H):
            level = [a for b in level for a in pth_roots(b) if not on_cycle(a)]
            nodes.extend(level)
        return nodes
    level = [gamma.pow_p(h)]
    nodes = list(level)
    for _n in range(H):
        level = [a for b in level for a in pth_roots(b)]
        nodes.extend(level)
    return nodes


def _solve_laurent(fl: LaurentPoly, p: int, bounds: AnsatzBounds) -> LaurentPoly | None:
    F = fl.field
    g: dict = {}
    for rep, comp in trajectory_components(fl, p).items():
        if rep == 0:
            if not comp.coeff(0).is_zero():
                return None
            continue
        _i, h = laurent_height(comp, p)
        if bounds.max_height is not None:
            h = bounds.max_height
        exps = [rep * p**n for n in range(h + 1)]
        unknowns = exps
        rows = []
        rhs = []
        # coefficient of x^j in delta(sum u_e x^e) = u_{j/p} - u_j
        for j in [rep * p**n for n in range(h + 2)]:
            row = []
            for e in unknowns:
                v = 0
                if e * p == j:
                    v += 1
                if e == j:
                    v -= 1
                row.append(F(v))
            rows.append(row)
            rhs.append(comp.coeff(j))
        sol = solve(rows, rhs, zero=F.zero())
        if sol is None:
            return None
        for e, v in zip(unknowns, sol):
            if not v.is_zero():
                g[e] = v
    return LaurentPoly(F, g)


def _tree_nodes(tid, gamma, h, m, p, bounds: AnsatzBounds) -> tuple[list[RadicalMonomial], int]:
    H, M = bounds.per_tree.get(tid, (None, None))
    if H is None:
        H = bounds.max_height if bounds.max_height is not None else max(h - 1, 0)
    if M is None:
        M = bounds.max_order if bounds.max_order is not None else m
    return _ansatz_nodes(tid, gamma, h, H, p), M


def _solve_group(
    f_pf: PartialFraction,
    G: FieldDescriptor,
    nodes: list[RadicalMonomial],
    M: int,
    p: int,
) -> PartialFraction | None:
    vtable = universal_v(p, max(M, 1))
    unknowns = [(b, s) for b in nodes for s in range(1, M + 1)]
    positions: dict = {}

    def pos(alpha, k):
        key = (alpha, k)
        if key not in positions:
            positions[key] = len(positions)
        return positions[key]

    columns = []
    for b, s in unknowns:
        col = {pos(b, s): G(-1)}
        for a in pth_roots(b):
            for k in range(1, s + 1):
                i = pos(a, k)
                v = v_coeff(vtable, a, s, k, G)
                col[i] = col[i] + v if i in col else v
        columns.append(col)
    for a, cs in f_pf.terms.items():
        for k in range(1, len(cs) + 1):
            pos(a, k)
    n_eq = len(positions)
    zero = G.zero()
    matrix = [[zero] * len(unknowns) for _ in range(n_eq)]
    for j, col in enumerate(columns):
        for i, v in col.items():
            matrix[i][j] = v
    rhs = [zero] * n_eq
    for (a, k), i in positions.items():
        rhs[i] = f_pf.coeff(a, k)
    sol = solve(matrix, rhs, zero=zero) if unknowns else ([] if all(v.is_zero() for v in rhs) else None)
    if sol is None:
        return None
    terms: dict = {}
    for (b, s), v in zip(unknowns, sol):
        cs = terms.setdefault(b, [zero] * M)
        cs[s - 1] = v
    return PartialFraction(G, terms)


def oracle_summable(f: RationalFunction, p: int, bounds: AnsatzBounds | None = None) -> RationalFunction | None:
    """A rational g with delta(g) = f inside the ansatz, or None."""
    bounds = bounds or AnsatzBounds()
    F0 = f.field
    fl, ft = split_LT(f)
    gl = _solve_laurent(fl, p, bounds)
    if gl is None:
        return None
    g = gl.to_ratfun()
    if ft.num:
        poles = find_poles(ft.den, p)
        groups: dict = {}
        for tid, tpoles in group_by_tree([a for a, _m in poles]).items():
            h, gamma = height(tpoles, tid, p)
            m = max(mult for a, mult in poles if a in tpoles)
            groups.setdefault(_group_key(tid), []).append((tid, gamma, h, m, tpoles))
        for members in groups.values():
            nodes: list[RadicalMonomial] = []
            M = 0
            for tid, gamma, h, m, _tp in members:
                tn, tm = _tree_nodes(tid, gamma, h, m, p, bounds)
                nodes.extend(a for a in tn if a not in nodes)
                M = max(M, tm)
            wanted = [a for *_r, tp in members for a in tp]
            roots = [a for b in nodes for a in pth_roots(b)]
            G = field_for(wanted + nodes + roots, p, base=F0)
            f_pf = partial_fractions(ft, poles, field=G, select=wanted)
            g_pf = _solve_group(f_pf, G, nodes, M, p)
            if g_pf is None:
                return None
            g = g + recombine(g_pf).restrict(F0)
    if delta(g, p) != f:
        raise VerificationError("oracle produced a g with delta(g) != f")
    return g
