"""Command-line front end: decide Mahler summability of one rational function."""

from __future__ import annotations

import argparse
import json
import sys
from typing import Sequence

from .field import FieldError
from .oracle import AnsatzBounds, oracle_summable
from .parse import ExprSyntaxError, UnsupportedConstruct, parse, render_expr, evaluate
from .ratfun import delta
from .render import render_monomial, render_scalar
from .residues import MahlerReport, mahler_report

EXIT_SUMMABLE = 0
EXIT_NOT_SUMMABLE = 1
EXIT_ERROR = 2


class CliError(Exception):
    pass


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="mahler",
        description="Report the discrete residues of a rational function f under x -> x^p and solve f = delta(g) when they vanish.",
    )
    ap.add_argument("--p", type=int, required=True, help="the Mahler base p >= 2")
    src = ap.add_mutually_exclusive_group(required=True)
    src.add_argument("--input", help="expression in x, e.g. '1/(x^6+1)'")
    src.add_argument("--file", help="file containing one expression")
    ap.add_argument("--format", choices=("text", "json"), default="text")
    ap.add_argument("--certificate", action="store_true", help="print the certificate g and the solution")
    ap.add_argument("--verify", action="store_true", help="re-check the reduction identity and the solution")
    ap.add_argument("--oracle", action="store_true", help="cross-check with the linear-algebra oracle")
    ap.add_argument("--max-order", type=int, default=None, help="oracle ansatz order bound")
    ap.add_argument("--max-height", type=int, default=None, help="oracle ansatz height bound")
    return ap


def tree_key(tid) -> dict:
    if tid.torsion:
        return {"torsion": {"r": tid.r, "orbit": tid.orbit}}
    return {"core": render_monomial(tid.core)}


def report_document(report: MahlerReport, echo: str, oracle: dict | None) -> dict:
    trees = []
    for tr in report.tree_residues:
        trees.append(
            {
                "tree": tree_key(tr.id),
                "gamma": render_monomial(tr.gamma),
                "h": tr.h,
                "e": tr.e,
                "residues": {
                    str(k): {render_monomial(a): render_scalar(v) for a, v in by_pole.items()}
                    for k, by_pole in sorted(tr.residues.items())
                },
            }
        )
    return {
        "input": echo,
        "p": report.p,
        "summable": report.summable,
        "residues_at_infinity": {str(k): render_scalar(v) for k, v in sorted(report.residues_at_infinity.items())},
        "tree_residues": trees,
        "remainder": str(report.remainder),
        "certificate": str(report.certificate),
        "solution": str(report.solution) if report.solution is not None else None,
        "oracle": oracle,
    }


def render_text(doc: dict, show_certificate: bool) -> str:
    lines = [f"input: {doc['input']}", f"p: {doc['p']}"]
    lines.append("summable: yes" if doc["summable"] else "summable: no")
    if doc["residues_at_infinity"]:
        lines.append("residues at infinity:")
        for k, v in doc["residues_at_infinity"].items():
            lines.append(f"  trajectory {k}: {v}")
    else:
        lines.append("residues at infinity: none")
    nonzero = [t for t in doc["tree_residues"] if t["residues"]]
    lines.append(f"trees: {len(doc['tree_residues'])} ({len(nonzero)} with nonzero residues)")
    for t in doc["tree_residues"]:
        key = t["tree"]
        label = (
            f"torsion r={key['torsion']['r']} orbit={key['torsion']['orbit']}"
            if "torsion" in key
            else f"core {key['core']}"
        )
        lines.append(f"  tree {label}: gamma={t['gamma']} h={t['h']} e={t['e']}")
        for k, by_pole in t["residues"].items():
            for pole, v in by_pole.items():
                lines.append(f"    order {k} at {pole}: {v}")
    lines.append(f"remainder: {doc['remainder']}")
    if show_certificate:
        lines.append(f"certificate: {doc['certificate']}")
        if doc["solution"] is not None:
            lines.append(f"solution: {doc['solution']}")
    if doc["oracle"] is not None:
        o = doc["oracle"]
        lines.append(f"oracle: {'summable' if o['summable'] else 'not summable'} ({'agrees' if o['agrees'] else 'DISAGREES'})")
    return "\n".join(lines)


def run(argv: Sequence[str] | None = None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_ERROR if exc.code else 0
    try:
        if args.p < 2:
            raise CliError("p must be ≥ 2")
        if args.file is not None:
            with open(args.file, encoding="utf-8") as fh:
                text = fh.read().strip()
        else:
            text = args.input
        node = parse(text, args.p)
        f = evaluate(node, args.p)
        report = mahler_report(f, args.p)
        if args.verify:
            if report.remainder != f + delta(report.certificate, args.p):
                raise CliError("verification failed: remainder != f + delta(certificate)")
            if report.solution is not None and delta(report.solution, args.p) != f:
                raise CliError("verification failed: delta(solution) != f")
        oracle_doc = None
        if args.oracle:
            bounds = AnsatzBounds(max_height=args.max_height, max_order=args.max_order)
            g = oracle_summable(f, args.p, bounds)
            oracle_doc = {
                "summable": g is not None,
                "agrees": (g is not None) == report.summable,
                "witness": str(g) if g is not None else None,
            }
        doc = report_document(report, render_expr(node), oracle_doc)
    except (ExprSyntaxError, UnsupportedConstruct) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except (CliError, FieldError, ValueError, ZeroDivisionError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    if args.format == "json":
        print(json.dumps(doc, indent=2, ensure_ascii=False))
    else:
        print(render_text(doc, args.certificate))
        if args.verify:
            print("verified: ok")
    return EXIT_SUMMABLE if report.summable else EXIT_NOT_SUMMABLE


def main() -> None:
    sys.exit(run())
