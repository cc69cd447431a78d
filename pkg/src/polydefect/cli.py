"""Command-line entry point: ``polydefect info|construct|identities|survey|fuzz``.

Exit codes: 0 success, 1 internal-consistency or identity failure, 2 usage or
input error.
"""

from __future__ import annotations

import argparse
import itertools
import json
import os
import sys
from math import ceil

from . import defect, ehrhart, fuzzing, identities, polytope, simplex_box
from .identities import DomainError, IdentityReport
from .lattice_algebra import ConsistencyError
from .polytope import LatticePolytope

FORMAT_VERSION = 1

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


class InputError(Exception):
    """Bad file, bad JSON or a construction string that does not parse."""


def dump(data) -> str:
    return json.dumps(data, sort_keys=True, indent=2)


# construction grammar
#
#   expr := simplex(n) | dilate(k, expr) | cube(n[, a]) | product(expr, ...)
#         | pyramid(expr) | cayley(expr, ...) | file(path)


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def error(self, msg):
        raise InputError(f"construction error at position {self.pos}: {msg} in {self.text!r}")

    def skip(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def expect(self, ch):
        if self.peek() != ch:
            self.error(f"expected {ch!r}")
        self.pos += 1

    def name(self) -> str:
        self.skip()
        start = self.pos
        while self.pos < len(self.text) and (self.text[self.pos].isalpha() or self.text[self.pos] == "_"):
            self.pos += 1
        if start == self.pos:
            self.error("expected a constructor name")
        return self.text[start:self.pos]

    def integer(self) -> int:
        self.skip()
        start = self.pos
        if self.peek() == "-":
            self.pos += 1
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        try:
            return int(self.text[start:self.pos])
        except ValueError:
            self.error("expected an integer")

    def path(self) -> str:
        self.skip()
        depth, start = 0, self.pos
        while self.pos < len(self.text):
            ch = self.text[self.pos]
            if ch == "(":
                depth += 1
            elif ch == ")":
                if depth == 0:
                    break
                depth -= 1
            self.pos += 1
        p = self.text[start:self.pos].strip()
        if not p:
            self.error("empty file path")
        return p

    def args(self, item):
        out = [item()]
        while self.peek() == ",":
            self.pos += 1
            out.append(item())
        return out

    def expr(self) -> LatticePolytope:
        head = self.name()
        self.expect("(")
        if head == "simplex":
            P = polytope.simplex(self.integer())
        elif head == "cube":
            nums = self.args(self.integer)
            if len(nums) not in (1, 2):
                self.error("cube takes (n) or (n, a)")
            P = polytope.cube(*nums)
        elif head == "dilate":
            k = self.integer()
            self.expect(",")
            P = polytope.dilate(self.expr(), k)
        elif head == "pyramid":
            P = polytope.pyramid(self.expr())
        elif head == "product":
            P = polytope.product(*self.args(self.expr))
        elif head == "cayley":
            P = polytope.cayley(self.args(self.expr))
        elif head == "file":
            P = load_polytope(self.path())
        else:
            self.error(f"unknown constructor {head!r}")
        self.expect(")")
        return P

    def parse(self) -> LatticePolytope:
        try:
            P = self.expr()
        except (ValueError, TypeError) as exc:
            raise InputError(f"construction error: {exc}") from exc
        if self.peek():
            self.error("trailing text")
        return P


def construct(text: str) -> LatticePolytope:
    return _Parser(text).parse()


def load_polytope(path: str) -> LatticePolytope:
    try:
        if path == "-":
            data = json.load(sys.stdin)
        else:
            with open(path) as fh:
                data = json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"{path} is not valid JSON: {exc}") from exc
    try:
        return polytope.from_json(data)
    except (ValueError, TypeError) as exc:
        raise InputError(f"{path}: {exc}") from exc


# info


def invariants(P: LatticePolytope) -> dict:
    prof = ehrhart.ehrhart_profile(P)
    return {
        "dim": P.dim,
        "ambient_dim": P.ambient_dim,
        "f_vector": list(P.f_vector()),
        "simple": P.is_simple(),
        "smooth": P.is_smooth(),
        "lattice_points": ehrhart.count_points(P, 1),
        "interior_points": ehrhart.count_interior(P, 1),
        "ehrhart_polynomial": [str(c) for c in prof.ehr_coeffs],
        "h_star": list(prof.h_star),
        "normalized_volume": prof.normalized_volume,
        "degree": prof.degree,
        "codegree": prof.codegree,
        "c": defect.c_invariant(P),
    }


def extra_checks(P: LatticePolytope) -> list[dict]:
    out = []
    if P.is_simple() and ehrhart.degree(P) < P.dim:
        out.append(defect.theorem21_check(P).to_json())
    if len(P.vertices) == P.dim + 1 and P.dim >= 1:
        out.append(simplex_box.support_bound_check(P).to_json())
        rep = IdentityReport("box_point_formula", {})
        rep.record({"quantity": "c"}, simplex_box.c_from_box(P), defect.c_invariant(P))
        out.append(rep.to_json())
    return out


def info_report(P: LatticePolytope, source: str, radius: int | None = None, checks: bool = False) -> dict:
    verdict = defect.defect_verdict(P)
    report = {
        "format": FORMAT_VERSION,
        "input": {"source": source, **polytope.to_json(P)},
        "invariants": invariants(P),
        "verdict": verdict.to_json(),
    }
    if radius is not None:
        report["width_one_directions"] = {
            "radius": radius,
            "coordinates": "chart" if not P.is_full_dimensional else "ambient",
            "directions": [list(u) for u in polytope.width_one_directions(P, radius)],
        }
    if checks:
        report["identities"] = extra_checks(P)
    return report


def _fmt(value) -> str:
    if isinstance(value, (list, tuple)):
        return "(" + ", ".join(str(v) for v in value) + ")"
    if isinstance(value, bool):
        return "yes" if value else "no"
    return str(value)


def info_text(report: dict) -> str:
    rows = [("source", report["input"]["source"])]
    rows += [(k.replace("_", " "), _fmt(v)) for k, v in report["invariants"].items()]
    v = report["verdict"]
    rows.append(("criterion 2cd >= n+3", _fmt(v["criterion_met"])))
    rows.append(("defect", str(v["defect"])))
    for key in ("q_normal_note", "note"):
        if v[key]:
            rows.append(("note", v[key]))
    if "width_one_directions" in report:
        w = report["width_one_directions"]
        rows.append((f"width-one directions (radius {w['radius']})", _fmt([_fmt(u) for u in w["directions"]])))
    for rep in report.get("identities", []):
        rows.append((rep["identity"], f"{'pass' if rep['passed'] else 'FAIL'} ({rep['checked']} checks)"))
    width = max(len(k) for k, _ in rows)
    return "\n".join(f"{k.ljust(width)}  {val}" for k, val in rows)


def cmd_info(args) -> int:
    P = load_polytope(args.file)
    if args.radius is not None and args.radius < 1:
        raise InputError("--radius must be >= 1")
    report = info_report(P, args.file, args.radius, args.checks)
    print(dump(report) if args.json else info_text(report))
    failed = any(not r["passed"] for r in report.get("identities", []))
    return EXIT_FAIL if failed else EXIT_OK


def cmd_construct(args) -> int:
    P = construct(args.expression)
    text = dump(polytope.to_json(P))
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    return EXIT_OK


# identities

SUITE_LIMITS = {
    "lemma22": lambda a: {"max_a": a.max_a or 20, "max_b": a.max_b or 20},
    "lemma23": lambda a: {"max_n": a.max_n or 12},
    "certificate": lambda a: {"max_a": a.max_a or 6, "max_j": a.max_j or 10},
    "recurrences": lambda a: {"max_a": a.max_a or 5, "j_max": a.max_j or 12},
}


def certificate_point(a, j, k, i) -> dict:
    try:
        lhs, rhs = identities.wz_certificate_sides(a, j, k, i)
    except DomainError as exc:
        return {"point": [a, j, k, i], "status": "out-of-domain", "reason": str(exc)}
    return {"point": [a, j, k, i], "status": "pass" if lhs == rhs else "fail",
            "lhs": str(lhs), "rhs": str(rhs)}


def cmd_identities(args) -> int:
    names = sorted(identities.SUITES) if args.suite == "all" else [args.suite]
    results = [identities.SUITES[name](**SUITE_LIMITS[name](args)) for name in names]
    out = {"format": FORMAT_VERSION, "suites": [r.to_json() for r in results]}
    failed = any(not r.passed for r in results)
    if args.point:
        pt = certificate_point(*args.point)
        out["certificate_point"] = pt
        failed = failed or pt["status"] == "fail"
    if args.json:
        print(dump(out))
    else:
        for r in results:
            line = f"{r.identity_name}: {'pass' if r.passed else 'FAIL'} ({r.checked} checks)"
            if not r.passed:
                line += f" first failure {json.dumps(r.first_failure, sort_keys=True)}"
            print(line)
            for note in r.notes:
                print(f"  note: {note}")
        if args.point:
            pt = out["certificate_point"]
            print(f"certificate at (a, j, k, i) = {tuple(pt['point'])}: {pt['status']}"
                  + (f" ({pt['reason']})" if "reason" in pt else ""))
    return EXIT_FAIL if failed else EXIT_OK


# surveys


def survey_segre(k1max: int, k2max: int) -> tuple[list[dict], list[str]]:
    rows = []
    for k1, k2 in itertools.product(range(1, k1max + 1), range(1, k2max + 1)):
        P = polytope.product(polytope.simplex(k1), polytope.simplex(k2))
        closed = defect.c_segre_closed(k1, k2)
        general = defect.c_invariant(P)
        defective = defect.segre_veronese_defect([1, 1], [k1, k2])
        rows.append({
            "k1": k1, "k2": k2, "dim": P.dim,
            "codegree": ehrhart.codegree(P), "degree": ehrhart.degree(P),
            "c_closed": closed, "c_general": general, "c_agree": closed == general,
            "dual_defective": defective, "criterion_agrees_with_c": defective == (general == 0),
        })
    return rows, [defect.SEGRE_WORDING_NOTE]


def survey_dilated_simplex(r: int, dmax: int, kmax: int) -> tuple[list[dict], list[str]]:
    """Products of r dilated unimodular simplices d_i S_(k_i), up to reordering."""
    factors = list(itertools.product(range(1, dmax + 1), range(1, kmax + 1)))
    rows = []
    for combo in itertools.combinations_with_replacement(factors, r):
        ds, ks = [d for d, _ in combo], [k for _, k in combo]
        parts = [polytope.dilate(polytope.simplex(k), d) for d, k in combo]
        direct = [ehrhart.codegree(Pi) for Pi in parts]
        formula = [ceil((k + 1) / d) for d, k in combo]
        P = polytope.product(*parts) if r > 1 else parts[0]
        cd = ehrhart.codegree(P)
        c = defect.c_invariant(P)
        defective = defect.segre_veronese_defect(ds, ks)
        rows.append({
            "d": ds, "k": ks, "dim": P.dim,
            "factor_codegrees": direct, "factor_codegree_formula": formula,
            "factor_formula_agrees": direct == formula,
            "codegree": cd, "product_codegree_is_max": cd == max(direct),
            "degree": ehrhart.degree(P), "c": c,
            "dual_defective": defective, "criterion_agrees_with_c": defective == (c == 0),
        })
    return rows, []


def _survey_ok(row: dict) -> bool:
    return all(v for k, v in row.items() if k.endswith(("agree", "agrees", "agrees_with_c", "is_max")))


def cmd_survey(args) -> int:
    if args.family == "segre":
        if len(args.bounds) != 2:
            raise InputError("segre takes K1MAX K2MAX")
        k1, k2 = args.bounds
        if min(k1, k2) < 1:
            raise InputError("segre bounds must be >= 1")
        rows, notes = survey_segre(k1, k2)
        params = {"k1max": k1, "k2max": k2}
    else:
        if len(args.bounds) != 3:
            raise InputError("dilated-simplex takes R DMAX KMAX")
        r, dmax, kmax = args.bounds
        if min(r, dmax, kmax) < 1:
            raise InputError("dilated-simplex bounds must be >= 1")
        rows, notes = survey_dilated_simplex(r, dmax, kmax)
        params = {"r": r, "dmax": dmax, "kmax": kmax}
    ok = all(_survey_ok(row) for row in rows)
    if args.json:
        print(dump({"format": FORMAT_VERSION, "family": args.family, "parameters": params,
                    "rows": rows, "notes": notes, "passed": ok}))
    else:
        cols = list(rows[0]) if rows else []
        table = [[_fmt(row[c]) for c in cols] for row in rows]
        widths = [max([len(c)] + [len(t[i]) for t in table]) for i, c in enumerate(cols)]
        print("  ".join(c.rjust(w) for c, w in zip(cols, widths)))
        for t in table:
            print("  ".join(x.rjust(w) for x, w in zip(t, widths)))
        for note in notes:
            print(f"note: {note}")
    return EXIT_OK if ok else EXIT_FAIL


# fuzzing


def cmd_fuzz(args) -> int:
    if args.dim < 1 or args.bound < 1 or args.count < 0:
        raise InputError("need dim >= 1, bound >= 1 and count >= 0")
    results = fuzzing.run(args.kind, args.dim, args.bound, args.count, args.seed, workers=args.threads)
    failures = [r for r in results if r.failures]
    findings = [r for r in results if r.findings]
    summary = {
        "format": FORMAT_VERSION,
        "kind": args.kind, "dim": args.dim, "bound": args.bound,
        "count": args.count, "seed": args.seed,
        "failures": [r.to_json() for r in failures],
        "findings": [r.to_json() for r in findings],
        "passed": not failures,
    }
    if args.json:
        print(dump(summary))
    else:
        print(f"{args.kind} dim {args.dim} bound {args.bound} seed {args.seed}: "
              f"{args.count - len(failures)}/{args.count} instances pass, {len(findings)} findings")
        for r in failures:
            print(f"FAIL reproducer: --seed {args.seed} index {r.index} "
                  f"ambient_dim {r.ambient_dim} vertices {json.dumps(r.vertices)}")
            for msg in r.failures:
                print(f"  {msg}")
        for r in findings:
            print(f"finding: index {r.index} vertices {json.dumps(r.vertices)}: {'; '.join(r.findings)}")
    return EXIT_FAIL if failures else EXIT_OK


# argument handling


def _threads_default() -> int:
    raw = os.environ.get("POLYDEFECT_THREADS")
    if raw is None:
        return 1
    try:
        value = int(raw)
    except ValueError:
        raise InputError(f"POLYDEFECT_THREADS must be an integer, got {raw!r}") from None
    if value < 1:
        raise InputError("POLYDEFECT_THREADS must be >= 1")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="polydefect",
        description="Ehrhart invariants, the face-lattice invariant c(P) and dual-defect checks "
                    "for lattice polytopes.")
    parser.add_argument("--threads", type=int, default=None,
                        help="worker processes for fuzzing (default: $POLYDEFECT_THREADS or 1)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("info", help="invariants and defect verdict of a polytope file")
    p.add_argument("file", help='polytope JSON {"ambient_dim": n, "vertices": [...]}, or - for stdin')
    p.add_argument("--json", action="store_true")
    p.add_argument("--radius", type=int, default=None, help="also scan for width-one directions")
    p.add_argument("--checks", action="store_true", help="also run the applicable identity checks")
    p.set_defaults(func=cmd_info)

    p = sub.add_parser("construct", help="build a polytope from a construction expression")
    p.add_argument("expression", help="e.g. 'product(pyramid(dilate(2,simplex(2))),cube(1,2))'")
    p.add_argument("-o", "--output", help="write the polytope JSON here instead of stdout")
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("identities", help="exhaustive binomial identity sweeps")
    p.add_argument("suite", choices=sorted(identities.SUITES) + ["all"])
    p.add_argument("--max-a", type=int, default=None)
    p.add_argument("--max-b", type=int, default=None)
    p.add_argument("--max-n", type=int, default=None)
    p.add_argument("--max-j", type=int, default=None)
    p.add_argument("--point", type=int, nargs=4, metavar=("A", "J", "K", "I"),
                   help="evaluate the certificate relation at one point")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_identities)

    p = sub.add_parser("survey", help="tabulate codegree, c and the defect criterion over a family")
    p.add_argument("family", choices=["segre", "dilated-simplex"])
    p.add_argument("bounds", type=int, nargs="+",
                   help="segre: K1MAX K2MAX; dilated-simplex: R DMAX KMAX (keep total dim <= 8)")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_survey)

    p = sub.add_parser("fuzz", help="property checks on seeded random polytopes")
    p.add_argument("kind", choices=sorted(fuzzing.GENERATORS))
    p.add_argument("dim", type=int)
    p.add_argument("bound", type=int, help="coordinate bound")
    p.add_argument("count", type=int)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_fuzz)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.threads is None:
            args.threads = _threads_default()
        elif args.threads < 1:
            raise InputError("--threads must be >= 1")
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ConsistencyError as exc:
        print(f"internal consistency error: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
