"""Acceptance criteria 1-10, one pass/fail line each.

Run under pytest (``pytest -s tests/test_acceptance.py`` to see the lines) or
directly with ``python3 tests/test_acceptance.py``.
"""

from __future__ import annotations

import random
import sys
from fractions import Fraction
from pathlib import Path

import sympy

sys.path.insert(0, str(Path(__file__).parent))

from samples import (  # noqa: E402
    Q,
    fresh_pole_term,
    proper_poles,
    random_delta_image,
    random_g,
    random_proper,
    ratfun,
)

from mahler.field import (  # noqa: E402
    FieldDescriptor,
    RadicalMonomial,
    TowerElement,
    ZeroDivisor,
    field_for,
    monomial_value,
    multiplicative_order,
    root_of_unity,
)
from mahler.oracle import oracle_summable  # noqa: E402
from mahler.parse import evaluate, parse, parse_function, render_expr  # noqa: E402
from mahler.poles import find_poles  # noqa: E402
from mahler.poly import Poly  # noqa: E402
from mahler.ratfun import (  # noqa: E402
    RationalFunction,
    delta,
    partial_fractions,
    recombine,
    sigma,
    split_LT,
    trajectory_components,
)
from mahler.residues import cyclic_D, cyclic_L, mahler_report, tree_components  # noqa: E402
from mahler.structure import INF, dispersion, group_by_tree, laurent_height, torsion_level  # noqa: E402
from mahler.vcoeffs import universal_v, v_coeff  # noqa: E402


def verdict(n: int, ok: bool, detail: str = "") -> None:
    print(f"criterion {n}: {'PASS' if ok else 'FAIL'}" + (f" ({detail})" if detail else ""))
    assert ok, f"criterion {n} failed: {detail}"


def zeta(N, a=1, p=3):
    return root_of_unity(N, a, p)


def random_element(rng: random.Random, F: FieldDescriptor) -> TowerElement:
    return TowerElement(F, [rng.randint(-5, 5) for _ in range(F.dim)], rng.randint(1, 4))


def random_monomial(rng: random.Random, p: int) -> RadicalMonomial:
    """A random invertible monomial whose field the package can build."""
    while True:
        N = rng.choice([1, 2, 3, 4, 5, 6, 7, 8, 9, 12])
        alpha = root_of_unity(N, rng.randrange(N), p)
        if rng.random() < 0.7:
            q = rng.choice([2, 3, 5, 7])
            e = Fraction(rng.choice([1, -1, 2]), p ** rng.randint(0, 1))
            alpha = alpha * RadicalMonomial.make(p, radical={q: e})
        try:
            field_for([alpha, zeta(p, 1, p) * alpha], p)
        except ZeroDivisor:
            continue
        return alpha


# ---------------------------------------------------------------------------


def test_criterion_1_universal_coefficients_and_expansion():
    V = universal_v(3, 2)
    ok_v = V(2, 2) == Fraction(1, 9) and V(2, 1) == Fraction(-2, 9)
    F = Q[3]
    f = ratfun(F, [9]) / ratfun(F, [-1, 0, 0, 1]) ** 2
    poles = find_poles(f.den, 3)
    pf = partial_fractions(f, poles)
    G = pf.field
    z1, z2 = zeta(3, 1), zeta(3, 2)
    one = root_of_unity(1, 0, 3)
    z = monomial_value(z1, G)
    expected = {
        (one, 2): G.one(),
        (z1, 2): z * z,
        (z2, 2): z,
        (one, 1): G(-2),
        (z1, 1): -2 * z,
        (z2, 1): -2 * z * z,
    }
    ok_pf = sorted(pf.poles()) == sorted([one, z1, z2]) and all(pf.coeff(a, k) == c for (a, k), c in expected.items())
    verdict(1, ok_v and ok_pf, f"V22={V(2, 2)}, V21={V(2, 1)}, six terms match={ok_pf}")


def test_criterion_2_summable_example():
    F = Q[3]
    f = ratfun(F, [0, -4, 1, 4, 0, 0, -1], [1]) / (ratfun(F, [-2, 1]) ** 2 * ratfun(F, [-2, 0, 0, 1]) ** 2)
    r = mahler_report(f, 3)
    all_zero = not r.residues_at_infinity and all(tr.is_zero() for tr in r.tree_residues)
    s = r.solution
    ok = (
        all_zero
        and r.summable
        and s is not None
        and delta(s, 3) == f
        and (s - ratfun(F, [1]) / ratfun(F, [-2, 1]) ** 2).is_constant()
    )
    verdict(2, ok, f"summable={r.summable}, solution={s}")


def test_criterion_3_nonsummable_example():
    F = Q[3]
    f = ratfun(F, [1], [1, 0, 0, 0, 0, 0, 1])
    r = mahler_report(f, 3)
    (tr,) = r.tree_residues
    z4 = zeta(4)
    G = FieldDescriptor(N=4, p=3)
    i = monomial_value(z4, G)
    Vt = universal_v(3, 1)
    img = cyclic_L(z4, 2, 1, Vt, [[-i / 6], [i / 6]], field=G)
    ok_L = img == [[-i / 4], [i / 4]]
    ok_res = True
    positions = []
    for ii in (1, 2):
        for ell in (1, 2):
            a = zeta(12, 4 * ii + 3**ell)
            nxt = zeta(12, 4 * ii + 3 ** (ell + 1))
            positions.append(a)
            got = tr.residues.get(1, {}).get(a)
            ok_res = ok_res and got is not None and got == monomial_value(nxt, tr.field) * Fraction(1, 4)
    ok_res = ok_res and set(tr.residues[1]) == set(positions) and set(tr.residues) == {1}
    ok = tr.h == 1 and tr.e == 2 and ok_L and ok_res and not r.summable
    verdict(3, ok, f"h={tr.h}, e={tr.e}, L-step ok={ok_L}, residues ok={ok_res}, summable={r.summable}")


def test_criterion_4_top_coefficient_law():
    rng = random.Random(4)
    failures = 0
    for _ in range(20):
        p = rng.choice([2, 3, 4])
        m = rng.randint(1, 4)
        alpha = random_monomial(rng, p)
        F = field_for([alpha], p)
        lhs = v_coeff(universal_v(p, m), alpha, m, m, F)
        rhs = monomial_value(alpha ** (m - p * m), F) * Fraction(1, p**m)
        failures += lhs != rhs
    verdict(4, failures == 0, f"{20 - failures}/20 cases")


def test_criterion_5_defining_expansion():
    rng = random.Random(5)
    failures = 0
    for _ in range(10):
        p = rng.choice([2, 3])
        m = rng.randint(1, 3)
        alpha = random_monomial(rng, p)
        roots = [zeta(p, i, p) * alpha for i in range(p)]
        F = field_for(roots, p)
        base = Poly(F, [-monomial_value(alpha**p, F)] + [0] * (p - 1) + [1])
        f = RationalFunction(Poly(F, [1]), base**m)
        pf = partial_fractions(f, [(b, m) for b in roots], field=F)
        table = universal_v(p, m)
        for b in roots:
            for k in range(1, m + 1):
                failures += pf.coeff(b, k) != v_coeff(table, b, m, k, F)
    verdict(5, failures == 0, f"{failures} mismatching coefficients")


def test_criterion_6_delta_image_completeness():
    rng = random.Random(6)
    bad_reports = bad_disp = checked = 0
    for _ in range(50):
        p = rng.choice([2, 3])
        f, g = random_delta_image(rng, p)
        r = mahler_report(f, p)
        if not (r.summable and r.solution is not None and delta(r.solution, p) == f):
            bad_reports += 1
        trees_f = group_by_tree(proper_poles(f, p))
        for tid, poles in group_by_tree(proper_poles(g, p)).items():
            d = dispersion(poles, tid, p)
            if d == INF:
                continue
            checked += 1
            if tid not in trees_f or dispersion(trees_f[tid], tid, p) != d + 1:
                bad_disp += 1
    verdict(6, bad_reports == 0 and bad_disp == 0, f"{50 - bad_reports}/50 summable, dispersion ok on {checked - bad_disp}/{checked} trees")


def test_criterion_7_obstruction_soundness():
    rng = random.Random(7)
    bad = 0
    for _ in range(50):
        p = rng.choice([2, 3])
        f, _g = random_delta_image(rng, p)
        f = f + fresh_pole_term(rng, p)
        r = mahler_report(f, p)
        if r.summable or r.nonzero_residues() == 0 or oracle_summable(f, p) is not None:
            bad += 1
    verdict(7, bad == 0, f"{50 - bad}/50 detected and confirmed by the oracle")


def _coords(table) -> list[Fraction]:
    out = []
    for row in table:
        for v in row:
            out.extend(Fraction(n, v.den) for n in v.num)
    return out


def test_criterion_8_cyclic_map_laws():
    rng = random.Random(8)
    cases = [(zeta(4, 1, 3), 3), (root_of_unity(7, 1, 2), 2), (root_of_unity(1, 0, 2), 2), (root_of_unity(1, 0, 3), 3)]
    bad = 0
    kernels = {}
    for t in range(30):
        gamma, p = cases[t % len(cases)]
        e = multiplicative_order(p, gamma.order) if gamma.order > 1 else 1
        m = rng.randint(1, 3)
        F = field_for([gamma], p)
        V = universal_v(p, m)
        v = [[random_element(rng, F) for _ in range(m)] for _ in range(e)]
        if cyclic_L(gamma, e, m, V, cyclic_D(gamma, e, m, V, v, F), F) != v:
            bad += 1
        if cyclic_D(gamma, e, m, V, cyclic_L(gamma, e, m, V, v, F), F) != v:
            bad += 1
        if any(not x.is_zero() for row in v for x in row) and cyclic_D(gamma, e, m, V, v, F) == v:
            bad += 1
        key = (gamma, p, m)
        if key not in kernels:
            # D - id as a Q-linear map on coordinates must have full rank
            n = e * m * F.dim
            cols = []
            for j in range(n):
                flat = [0] * n
                flat[j] = 1
                unit = [
                    [TowerElement(F, flat[(l * m + k) * F.dim : (l * m + k + 1) * F.dim]) for k in range(m)]
                    for l in range(e)
                ]
                img = cyclic_D(gamma, e, m, V, unit, F)
                cols.append([a - b for a, b in zip(_coords(img), flat)])
            kernels[key] = sympy.Matrix(cols).rank() == n
    bad += sum(not ok for ok in kernels.values())
    verdict(8, bad == 0, f"30 tables, {len(kernels)} fixed-point rank checks, {bad} failures")


def _contract_inputs() -> list[tuple[RationalFunction, int]]:
    F3 = Q[3]
    out = [
        (ratfun(F3, [0, -4, 1, 4, 0, 0, -1]) / (ratfun(F3, [-2, 1]) ** 2 * ratfun(F3, [-2, 0, 0, 1]) ** 2), 3),
        (ratfun(F3, [1], [1, 0, 0, 0, 0, 0, 1]), 3),
        (ratfun(F3, [9]) / ratfun(F3, [-1, 0, 0, 1]) ** 2, 3),
    ]
    rng = random.Random(9)
    for _ in range(20):
        p = rng.choice([2, 3])
        f, _g = random_delta_image(rng, p)
        out.append((f, p))
        out.append((f + fresh_pole_term(rng, p), p))
        out.append((random_g(rng, p), p))
    return out


def test_criterion_9_reduction_contract():
    bad = 0
    inputs = _contract_inputs()
    for f, p in inputs:
        r = mahler_report(f, p)
        if r.remainder != f + delta(r.certificate, p):
            bad += 1
            continue
        allowed = set()
        for tr in r.tree_residues:
            for by_pole in tr.residues.values():
                for a in by_pole:
                    allowed.add(a)
                    on_level = torsion_level(a) == tr.h if tr.id.torsion else a.pow_p(tr.h) == tr.gamma.pow_p(tr.h)
                    bad += not on_level
        bad += not set(proper_poles(r.remainder, p)) <= allowed
        fl, _ft = split_LT(f)
        rl, _rt = split_LT(r.remainder)
        comps = trajectory_components(fl, p)
        for rep, comp in trajectory_components(rl, p).items():
            if rep not in comps:
                bad += 1
                continue
            _i, h = laurent_height(comps[rep], p)
            bad += set(comp.terms) != {rep * p**h}
    verdict(9, bad == 0, f"{len(inputs)} inputs, {bad} violations")


ECHO = [
    "1/(x^6+1)",
    "(-x^6 + 4*x^3 + x^2 - 4*x)/((x - 2)^2*(x^3 - 2)^2)",
    "-x^2 + 3*x^(-2) - 1/(x - zeta(4))",
    "root(2,3)*x/(x^3 - 2) + zeta(3)^2",
    "x^-2 - (x+1)^(-3)*7/3",
]


def test_criterion_10_round_trips():
    rng = random.Random(10)
    bad = 0
    for _ in range(30):
        p = rng.choice([2, 3])
        f = random_proper(rng, p)
        poles = find_poles(f.den, p)
        bad += recombine(partial_fractions(f, poles)).restrict(f.field) != f
    for src in ECHO:
        node, f = parse_function(src, 3)
        once = render_expr(node)
        node2 = parse(once, 3)
        bad += render_expr(node2) != once or evaluate(node2, 3) != f
        bad += evaluate(parse(str(f), 3), 3, f.field) != f
    for _ in range(10):
        p = rng.choice([2, 3])
        f = random_g(rng, p)
        fl, ft = split_LT(f)
        sl, st = split_LT(sigma(f, p))
        bad += sl != sigma(fl, p) or st != sigma(ft, p)
        comps = trajectory_components(fl, p)
        scomps = trajectory_components(sl, p)
        bad += set(comps) != set(scomps) or any(scomps[k] != sigma(c, p) for k, c in comps.items())
        if ft.num:
            lifted = group_by_tree(proper_poles(st, p))
            bad += set(lifted) != set(group_by_tree(proper_poles(ft, p)))
            for tid, tp in lifted.items():
                # one field per tree keeps radicals and roots of unity compatible
                G = field_for(tp, p)
                before = tree_components(ft, p, G, [tid])[tid]
                after = tree_components(st, p, G, [tid])[tid]
                bad += recombine(after) != sigma(recombine(before), p)
    verdict(10, bad == 0, f"{bad} failures")


if __name__ == "__main__":
    failed = 0
    tests = [(int(k.split("_")[2]), fn) for k, fn in globals().items() if k.startswith("test_criterion_")]
    for _n, fn in sorted(tests):
        try:
            fn()
        except AssertionError:
            failed += 1
    sys.exit(1 if failed else 0)
