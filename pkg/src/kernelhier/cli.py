"""Command-line front end.

    kernelhier hierarchy  SYSTEM [--level L] [--augmented] [--oracle] [--inclusion]
    kernelhier kernel     SYSTEM [--cap N]
    kernelhier limits     SYSTEM [--abel]
    kernelhier fields     SYSTEM [--level L ...]
    kernelhier rank       SYSTEM
    kernelhier rightgroup SYSTEM
    kernelhier construct  --case a|b R B

SYSTEM is a YAML file path, or ``-``/omitted for standard input.  ``--machine``
switches to JSON output.  Exit codes: 0 success, 2 unreadable input, 3 domain
error.
"""
from __future__ import annotations

import argparse
import sys
from fractions import Fraction

from .classify import classify_rank_n_minus_1, split_no_loop, split_with_loop
from .core import from_oneline, subsets
from .errors import ExplosionGuard, HierarchyError
from .fields import detect_rank, pi_field, rank_witness, right_group_test, split_matrix, stationary, u_field
from .hierarchy import (COLLAPSED, augmented_level_matrix, inclusion_operator, level_matrix,
                        level_matrix_via_permanents)
from .limits import abel_numeric, a_level, eigenprojection, factorize_lambda, limit_measure_exact
from .semigroup import (DEFAULT_CAP, ColorSystem, generate_semigroup, kernel_of, kernel_table,
                        local_group, structural_left_group, structural_right_group)
from .serialize import ParseError, dumps, frac, parse_system

EXIT_PARSE = 2
EXIT_DOMAIN = 3


def _labels(n, level, augmented=False):
    labs = [list(s) for s in subsets(n, level)]
    return labs + [COLLAPSED] if augmented else labs


def _matrix(entries, rows, cols):
    return {"rows": rows, "cols": cols, "entries": [list(r) for r in entries]}


def _system(cs: ColorSystem):
    return {"n": cs.n, "colors": list(cs.colors), "weights": list(cs.weights)}


def _analyze(cs, cap):
    st = generate_semigroup(cs, cap)
    ks = kernel_of(st)
    return st, ks


def report_hierarchy(cs, level=2, augmented=False, oracle=False, inclusion=False):
    out = {"command": "hierarchy", "system": _system(cs), "level": level, "colors": []}
    for c in cs.colors:
        lm = augmented_level_matrix(c, level) if augmented else level_matrix(c, level)
        entry = {"map": c, "augmented": augmented,
                 "matrix": _matrix(lm.entries, _labels(cs.n, level, augmented), _labels(cs.n, level, augmented))}
        if oracle:
            entry["permanent_oracle_agrees"] = level_matrix_via_permanents(c, level).entries == level_matrix(c, level).entries
        out["colors"].append(entry)
    if inclusion and level > 1:
        E = inclusion_operator(level, level - 1, cs.n).entries
        out["inclusion"] = _matrix(E, _labels(cs.n, level), _labels(cs.n, level - 1))
    return out


def report_kernel(cs, cap=DEFAULT_CAP):
    st, ks = _analyze(cs, cap)
    g = local_group(ks, *ks.base_cell)
    return {
        "command": "kernel", "system": _system(cs),
        "semigroup_size": len(st), "kernel_size": len(ks.elements), "rank": ks.rank,
        "partitions": [[list(b) for b in p] for p in ks.partitions],
        "ranges": [list(r) for r in ks.ranges],
        "idempotents": [list(row) for row in kernel_table(ks)],
        "base_idempotent": ks.base,
        "group_order": ks.group.order,
        "local_group": g.elements,
        "local_group_abelian": g.is_abelian(),
        "right_group": structural_right_group(ks),
        "left_group": structural_left_group(ks),
    }


def report_limits(cs, cap=DEFAULT_CAP, abel=False):
    st, ks = _analyze(cs, cap)
    lam = limit_measure_exact(cs, st, ks)
    fac = factorize_lambda(lam, ks)
    out = {
        "command": "limits", "system": _system(cs),
        "alpha": list(fac.alpha), "beta": list(fac.beta), "group_order": fac.group_order,
        "partitions": [[list(b) for b in p] for p in ks.partitions],
        "ranges": [list(r) for r in ks.ranges],
        "lambda": [[k, lam[k]] for k in sorted(lam)],
    }
    if abel:
        A = a_level(cs, 1)
        exact = eigenprojection(A).entries
        rows = []
        for s in (0.9, 0.99, 0.999, 0.9999, 1 - 1e-6):
            Q = abel_numeric(A, s)
            err = max(abs(Q[i][j] - float(exact[i][j])) for i in range(cs.n) for j in range(cs.n))
            rows.append([s, err])
        out["abel_numeric_diagnostic"] = {"level": 1, "max_error_by_s": rows}
    return out


def report_fields(cs, levels=None, cap=DEFAULT_CAP):
    st, ks = _analyze(cs, cap)
    lam = limit_measure_exact(cs, st, ks)
    levels = levels or list(range(1, ks.rank + 1))
    out = {"command": "fields", "system": _system(cs), "rank": ks.rank, "fields": []}
    for lv in levels:
        p, u = pi_field(cs, ks, lv, lam), u_field(cs, ks, lv, lam)
        out["fields"].append({
            "level": lv, "labels": _labels(cs.n, lv),
            "pi": list(p.values), "pi_raw": list(p.raw),
            "u": list(u.values), "u_raw": list(u.raw),
        })
    return out


def report_rank(cs, cap=DEFAULT_CAP):
    st, ks = _analyze(cs, cap)
    lam = limit_measure_exact(cs, st, ks)
    pi = stationary(cs)
    u2 = u_field(cs, ks, 2, lam) if ks.rank >= 2 else None
    if u2 is None:
        return {"command": "rank", "system": _system(cs), "pi": list(pi.values),
                "rank": ks.rank, "structural_rank": ks.rank, "witness": None}
    return {
        "command": "rank", "system": _system(cs), "pi": list(pi.values),
        "u2": list(u2.values), "split_matrix": split_matrix(u2),
        "witness": rank_witness(pi, u2), "rank": detect_rank(pi, u2),
        "structural_rank": ks.rank,
    }


def report_rightgroup(cs, cap=DEFAULT_CAP):
    st, ks = _analyze(cs, cap)
    lam = limit_measure_exact(cs, st, ks)
    out = {"command": "rightgroup", "system": _system(cs), "structural": structural_right_group(ks)}
    if ks.rank < 2:
        out.update({"right_group": True, "partition": [list(range(1, cs.n + 1))]})
        return out
    u2 = u_field(cs, ks, 2, lam)
    ok, part = right_group_test(u2)
    out.update({"u2": list(u2.values), "right_group": ok,
                "partition": [list(b) for b in part] if part else None})
    if ok:
        top = pi_field(cs, ks, ks.rank, lam)
        out["pi_r"] = list(top.values)
        out["ranges"] = [list(s) for s in top.support()]
    return out


def report_construct(case, r, b):
    cs = split_with_loop(r, b) if case == "a" else split_no_loop(r, b)
    rep = classify_rank_n_minus_1(cs)
    return {
        "command": "construct", "case_requested": case,
        "precursor": [from_oneline(r), from_oneline(b)],
        "system": _system(cs),
        "classification": {
            "case": rep.case, "q": rep.q, "doubleton": list(rep.doubleton),
            "renumbering": {str(k): v for k, v in sorted(rep.renumbering.items())},
            "in_degrees": rep.in_degrees, "pi": rep.pi, "predicted_pi": rep.predicted_pi,
            "beta": rep.predicted_beta, "observed_beta": rep.observed_beta,
            "ranges": [list(s) for s in rep.predicted_ranges],
            "u2": rep.predicted_u2, "right_group": rep.right_group,
            "checks": rep.checks,
            "recovered_precursor": list(rep.precursor) if rep.precursor else None,
        },
    }


def _cell(x):
    if isinstance(x, Fraction):
        return frac(x) if x.denominator != 1 else str(x.numerator)
    if isinstance(x, list):
        return "".join(str(v) for v in x) if all(isinstance(v, int) and v < 10 for v in x) else str(x)
    return str(x)


def _table(rows, cols, entries):
    head = [""] + [_cell(c) for c in cols]
    body = [[_cell(r)] + [_cell(x) for x in row] for r, row in zip(rows, entries)]
    widths = [max(len(line[i]) for line in [head] + body) for i in range(len(head))]
    lines = ["  ".join(v.rjust(w) for v, w in zip(line, widths)) for line in [head] + body]
    return "\n".join(lines)


def render_human(report) -> str:
    lines = []
    for key in sorted(report):
        val = report[key]
        if key == "system":
            lines.append("system: n=%d colors=%s weights=%s" % (
                val["n"], " ".join(str(c) for c in val["colors"]), " ".join(_cell(w) for w in val["weights"])))
        elif key == "idempotents":
            rows = ["{" + ",".join("{" + ",".join(map(str, b)) + "}" for b in p) + "}" for p in report["partitions"]]
            cols = ["{" + ",".join(map(str, r)) + "}" for r in report["ranges"]]
            lines.append("idempotents:")
            lines.append(_table(rows, cols, [[str(e) for e in row] for row in val]))
        elif isinstance(val, dict) and "entries" in val:
            lines.append(f"{key}:")
            lines.append(_table(val["rows"], val["cols"], val["entries"]))
        elif key == "colors" and val and isinstance(val[0], dict):
            for c in val:
                lines.append(f"map {c['map']}:")
                m = c["matrix"]
                lines.append(_table(m["rows"], m["cols"], m["entries"]))
                if "permanent_oracle_agrees" in c:
                    lines.append(f"permanent oracle agrees: {c['permanent_oracle_agrees']}")
        elif key == "fields":
            for f in val:
                lines.append(f"level {f['level']}:")
                lines.append(_table(["pi", "pi_raw", "u", "u_raw"], f["labels"],
                                    [f["pi"], f["pi_raw"], f["u"], f["u_raw"]]))
        elif key == "classification":
            lines.append("classification:")
            for k in sorted(val):
                lines.append(f"  {k}: {_fmt(val[k])}")
        elif key == "split_matrix":
            n = len(val)
            lines.append("split_matrix:")
            lines.append(_table(list(range(1, n + 1)), list(range(1, n + 1)), val))
        else:
            lines.append(f"{key.replace('_', ' ')}: {_fmt(val)}")
    return "\n".join(lines) + "\n"


def _fmt(val):
    if isinstance(val, list):
        return "[" + ", ".join(_fmt(v) for v in val) + "]"
    if isinstance(val, dict):
        return "{" + ", ".join(f"{k}: {_fmt(v)}" for k, v in val.items()) + "}"
    if isinstance(val, Fraction):
        return _cell(val)
    return str(val)


def build_parser():
    parser = argparse.ArgumentParser(prog="kernelhier", description=__doc__.split("\n\n")[0])
    parser.add_argument("--machine", action="store_true", help="emit JSON")
    sub = parser.add_subparsers(dest="command", required=True)

    def with_system(name, help_):
        p = sub.add_parser(name, help=help_)
        p.add_argument("system", nargs="?", default="-", help="YAML system file, '-' for stdin")
        p.add_argument("--cap", type=int, default=None, help="semigroup size cap")
        p.add_argument("--machine", action="store_true", default=argparse.SUPPRESS, help="emit JSON")
        return p

    p = with_system("hierarchy", "level matrices of each color")
    p.add_argument("--level", type=int, default=2)
    p.add_argument("--augmented", action="store_true")
    p.add_argument("--oracle", action="store_true", help="cross-check with permanents")
    p.add_argument("--inclusion", action="store_true", help="also print E^(L,L-1)")
    with_system("kernel", "Rees structure of the kernel")
    p = with_system("limits", "limit measure and its factors")
    p.add_argument("--abel", action="store_true", help="floating-point Abel-limit diagnostic")
    p = with_system("fields", "pi and u fields")
    p.add_argument("--level", type=int, action="append", default=None)
    with_system("rank", "kernel rank from pi and u2")
    with_system("rightgroup", "right-group test from u2")
    p = sub.add_parser("construct", help="rank n-1 splitting construction")
    p.add_argument("--case", choices=["a", "b"], required=True)
    p.add_argument("r")
    p.add_argument("b")
    p.add_argument("--machine", action="store_true", default=argparse.SUPPRESS, help="emit JSON")
    return parser


def _read(path):
    if path == "-":
        return sys.stdin.read()
    with open(path) as fh:
        return fh.read()


def run(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_PARSE if exc.code else 0
    machine = args.machine
    try:
        if args.command == "construct":
            try:
                from_oneline(args.r), from_oneline(args.b)
            except (ValueError, HierarchyError) as exc:
                raise ParseError(str(exc)) from exc
            report = report_construct(args.case, args.r, args.b)
        else:
            try:
                text = _read(args.system)
            except OSError as exc:
                raise ParseError(str(exc)) from exc
            cs, options = parse_system(text)
            cap = args.cap or options.get("cap") or DEFAULT_CAP
            if args.command == "hierarchy":
                report = report_hierarchy(cs, args.level, args.augmented, args.oracle, args.inclusion)
            elif args.command == "kernel":
                report = report_kernel(cs, cap)
            elif args.command == "limits":
                report = report_limits(cs, cap, args.abel)
            elif args.command == "fields":
                report = report_fields(cs, args.level or options.get("levels"), cap)
            elif args.command == "rank":
                report = report_rank(cs, cap)
            else:
                report = report_rightgroup(cs, cap)
    except ParseError as exc:
        print(f"error: {exc}", file=stderr)
        return EXIT_PARSE
    except ExplosionGuard as exc:
        print(f"error: {exc} (raise it with --cap)", file=stderr)
        return EXIT_DOMAIN
    except (HierarchyError, ValueError, AssertionError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=stderr)
        return EXIT_DOMAIN
    stdout.write(dumps(report) if machine else render_human(report))
    return 0


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
