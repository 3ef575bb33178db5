"""Command line front end.

Exit codes: 0 when every executed check passed, 1 when a check or model
validation failed, 2 on usage or parse errors. Reports always print both
sides of each identity so exact-arithmetic failures stay diagnosable, and
the structured (JSON) output carries the same numeric content as the text
output.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from . import modelio, pencil
from .errors import (
    CoverDegreeError,
    DescriptorError,
    FibsurfError,
    SchemaError,
    ZeroPairingHorizontalError,
)
from .fibration import c2_count, identity_suite
from .generator import RandomModelSpec, generate_models
from .reduction import (
    ReductionContext,
    SectionCounts,
    base_change_sweep,
    chi_balance,
    min_cover_degree,
    multiplicity_dichotomy,
    section_count_predicates,
)

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_USAGE = 2


def _fmt(value) -> str:
    if isinstance(value, Fraction):
        return str(value)
    return str(value)


def _read(path: str) -> bytes:
    try:
        return Path(path).read_bytes()
    except OSError as exc:
        raise SchemaError(path, f"cannot read file: {exc}") from None


def _load_model(path: str):
    return modelio.parse_model(_read(path))


def _print_doc(doc: dict) -> None:
    print(json.dumps(doc, indent=2))


def _parse_range(text: str, flag: str):
    parts = text.split(",")
    if len(parts) != 2:
        raise SchemaError(flag, f"expected 'lo,hi', got {text!r}")
    try:
        return int(parts[0]), int(parts[1])
    except ValueError:
        raise SchemaError(flag, f"expected integers, got {text!r}") from None


# ---------------------------------------------------------------------------
# subcommands


def _cmd_validate(args) -> int:
    model = _load_model(args.file)
    report = model.validation()
    for w in report.warnings:
        print(f"warning: {w}")
    if report.ok:
        print("valid")
        return EXIT_OK
    for v in report.violations:
        print(f"violation: {v}")
    return EXIT_CHECK_FAILED


def _report_doc(path: str, model) -> dict:
    report = model.validation()
    doc = {
        "model": path,
        "valid": report.ok,
        "violations": list(report.violations),
        "warnings": list(report.warnings),
    }
    if not report.ok:
        doc["passed"] = False
        return doc

    suite = identity_suite(model)
    balance = chi_balance(model)
    doc["identity_suite"] = {
        "delta_square": {
            "lhs": _fmt(suite.delta_square_lhs),
            "rhs": _fmt(suite.delta_square_rhs),
            "ok": suite.delta_square_ok,
        },
        "component_sum": {
            "lhs": _fmt(suite.component_sum_lhs),
            "rhs": _fmt(suite.component_sum_rhs),
            "ok": suite.component_sum_ok,
        },
        "reconstruction_ok": suite.reconstruction_ok,
        "notes": list(suite.notes),
    }
    doc["c2"] = c2_count(model)
    doc["chi_balance"] = {
        "lhs": _fmt(balance.lhs),
        "rhs": _fmt(balance.rhs),
        "chi_kf": _fmt(balance.chi_kf),
        "s": balance.s,
        "ok": balance.ok,
        "per_fiber": [[i, _fmt(v)] for i, v in balance.per_fiber],
    }
    if model.genus >= 2:
        dich = multiplicity_dichotomy(model)
        doc["dichotomy"] = {
            "applicable": True,
            "branch_a": dich.branch_a,
            "branch_a_count": dich.branch_a_count,
            "branch_a_threshold": dich.branch_a_threshold,
            "branch_b": dich.branch_b,
            "branch_b_lhs": _fmt(dich.branch_b_lhs),
            "branch_b_rhs": _fmt(dich.branch_b_rhs),
            "holds": dich.holds,
        }
        dich_ok = dich.holds
    else:
        doc["dichotomy"] = {"applicable": False, "reason": f"genus {model.genus} < 2"}
        dich_ok = True
    doc["passed"] = suite.all_ok and balance.ok and dich_ok
    return doc


def _print_report_text(doc: dict) -> None:
    print(f"model: {doc['model']}")
    for w in doc["warnings"]:
        print(f"warning: {w}")
    if not doc["valid"]:
        for v in doc["violations"]:
            print(f"violation: {v}")
        print("result: FAIL (invalid model)")
        return
    suite = doc["identity_suite"]
    ds, cs = suite["delta_square"], suite["component_sum"]
    print(f"delta-square identity:  {ds['lhs']} = {ds['rhs']}  [{'ok' if ds['ok'] else 'FAIL'}]")
    print(f"component-sum identity: {cs['lhs']} = {cs['rhs']}  [{'ok' if cs['ok'] else 'FAIL'}]")
    print(f"self-intersection reconstruction: {'ok' if suite['reconstruction_ok'] else 'FAIL'}")
    for note in suite["notes"]:
        print(f"note: {note}")
    print(f"c2 count: {doc['c2']}")
    bal = doc["chi_balance"]
    print(f"chi balance: {bal['lhs']} = {bal['rhs']}  (chi(K_F) = {bal['chi_kf']}, s = {bal['s']})"
          f"  [{'ok' if bal['ok'] else 'FAIL'}]")
    dich = doc["dichotomy"]
    if dich["applicable"]:
        print(
            f"dichotomy: branch_a {dich['branch_a']} ({dich['branch_a_count']} >= {dich['branch_a_threshold']}), "
            f"branch_b {dich['branch_b']} ({dich['branch_b_lhs']} <= {dich['branch_b_rhs']})"
            f"  [{'ok' if dich['holds'] else 'FAIL'}]"
        )
    else:
        print(f"dichotomy: not applicable ({dich['reason']})")
    print(f"result: {'PASS' if doc['passed'] else 'FAIL'}")


def _cmd_report(args) -> int:
    model = _load_model(args.file)
    doc = _report_doc(args.file, model)
    if args.format == "structured":
        _print_doc(doc)
    else:
        _print_report_text(doc)
    return EXIT_OK if doc["passed"] else EXIT_CHECK_FAILED


def _cmd_reduce(args) -> int:
    model = _load_model(args.file)
    ctx = ReductionContext(model, args.N)
    rows = [[cid, ctx.ramification[cid]] for cid in sorted(ctx.ramification)]
    doc = {
        "model": args.file,
        "N": ctx.n,
        "base_cover_genus": ctx.g_x,
        "ramification": rows,
    }
    ok = True
    if args.sweep:
        values = [int(v) for v in args.sweep.split(",")]
        sweep = base_change_sweep(model, values)
        doc["sweep"] = {
            "rows": [[n, _fmt(w1), _fmt(w2)] for n, w1, w2 in sweep.rows],
            "way1_coeffs": [_fmt(c) for c in sweep.way1_coeffs],
            "way2_coeffs": [_fmt(c) for c in sweep.way2_coeffs],
            "degree1_gap": _fmt(sweep.degree1_gap),
            "ok": sweep.ok,
        }
        ok = sweep.ok
    if args.format == "structured":
        _print_doc(doc)
    else:
        print(f"N = {doc['N']}, covering base genus g_X = {doc['base_cover_genus']}")
        for cid, ram in rows:
            print(f"ramification {cid}: {ram}")
        if "sweep" in doc:
            for n, w1, w2 in doc["sweep"]["rows"]:
                mark = "ok" if w1 == w2 else "FAIL"
                print(f"N = {n}: way1 = {w1}, way2 = {w2}  [{mark}]")
            print(f"way1 coefficients: {doc['sweep']['way1_coeffs']}")
            print(f"way2 coefficients: {doc['sweep']['way2_coeffs']}")
            print(f"degree-1 coefficient gap: {doc['sweep']['degree1_gap']}")
    return EXIT_OK if ok else EXIT_CHECK_FAILED


def _cmd_resolve(args) -> int:
    chain = pencil.resolve_base_point(args.p, args.q)
    if args.format == "structured":
        doc = {
            "p": chain.p,
            "q": chain.q,
            "gcd": chain.gcd,
            "curves": [
                {
                    "name": c.name,
                    "valuation": [c.v_x, c.v_y],
                    "status": c.status,
                    "multiplicity": c.multiplicity,
                    "self_intersection": c.self_intersection,
                }
                for c in chain.curves
            ],
            "adjacency": [list(e) for e in chain.adjacency],
            "fiber_over_0": [list(t) for t in chain.fiber_over_zero()],
            "fiber_over_inf": [list(t) for t in chain.fiber_over_inf()],
        }
        _print_doc(doc)
        return EXIT_OK
    print(f"resolution of base point (p={chain.p}, q={chain.q}), gcd {chain.gcd}:")
    for c in chain.curves:
        extra = f"multiplicity {c.multiplicity}" if c.status != pencil.HORIZONTAL else f"degree {chain.gcd}"
        print(
            f"  {c.name}  valuation ({c.v_x},{c.v_y})  {c.status}  {extra}  "
            f"self-intersection {c.self_intersection}"
        )
    order = _chain_order(chain)
    print("  chain: " + " - ".join(order))
    print("  fiber over 0: " + " + ".join(f"{m}*{n}" for n, m in chain.fiber_over_zero()))
    print("  fiber over inf: " + " + ".join(f"{m}*{n}" for n, m in chain.fiber_over_inf()))
    return EXIT_OK


def _chain_order(chain) -> list:
    neighbors = {}
    for a, b in chain.adjacency:
        neighbors.setdefault(a, []).append(b)
        neighbors.setdefault(b, []).append(a)
    order = [pencil.X_BRANCH]
    prev = None
    while order[-1] != pencil.Y_BRANCH:
        nxt = [n for n in neighbors[order[-1]] if n != prev]
        prev = order[-1]
        order.append(nxt[0])
    return order


def _cmd_bounds(args) -> int:
    model = _load_model(args.file)
    counts = SectionCounts(h0_kf_n=args.h0_kf, h0_kbar_n=args.h0_kbar, n=args.n)
    report = section_count_predicates(model, counts)
    min_n = min_cover_degree(model, args.n)
    doc = {
        "model": args.file,
        "n": args.n,
        "nef_case": {
            "antecedent": report.nef_antecedent,
            "bound": f"{report.nef_bound_lhs} >= {report.nef_bound_rhs}",
            "holds": report.nef_bound_holds,
            "ok": report.nef_ok,
        },
        "ample_case": {
            "bound": f"{report.ample_bound_lhs} >= {report.ample_bound_rhs}",
            "holds": report.ample_bound_holds,
        },
        "global_generation": {
            "section_bound_holds": report.global_gen_first,
            "self_intersection_bound_holds": report.global_gen_second,
        },
        "split_note": report.split_note,
        "min_cover_degree": min_n,
    }
    if args.format == "structured":
        _print_doc(doc)
    else:
        nef = doc["nef_case"]
        print(f"nef case: antecedent {nef['antecedent']}, bound {nef['bound']}, "
              f"holds {nef['holds']}  [{'ok' if nef['ok'] else 'FAIL'}]")
        print(f"ample case: bound {doc['ample_case']['bound']}, holds {doc['ample_case']['holds']}")
        gg = doc["global_generation"]
        print(f"global generation: section bound {gg['section_bound_holds']}, "
              f"self-intersection bound {gg['self_intersection_bound_holds']}")
        print(f"note: {doc['split_note']}")
        print(f"minimal cover degree: {min_n}")
    return EXIT_OK if report.ok else EXIT_CHECK_FAILED


def _cmd_gen(args) -> int:
    spec = RandomModelSpec(
        seed=args.seed,
        fibers=_parse_range(args.fibers, "--fibers"),
        components=_parse_range(args.components, "--components"),
        multiplicity=_parse_range(args.multiplicity, "--multiplicity"),
        nef=args.nef,
    )
    models = list(generate_models(spec, args.count))
    if args.out:
        outdir = Path(args.out)
        outdir.mkdir(parents=True, exist_ok=True)
        for i, model in enumerate(models):
            path = outdir / f"model_{i:04d}.json"
            path.write_text(modelio.emit_model(model), encoding="utf-8")
            print(path)
    else:
        for model in models:
            if args.count == 1:
                sys.stdout.write(modelio.emit_model(model))
            else:
                sys.stdout.write(json.dumps(modelio.model_to_doc(model)) + "\n")
    return EXIT_OK


def _cmd_assemble(args) -> int:
    desc = modelio.parse_descriptor(_read(args.file))
    model = pencil.assemble_fibration(desc)
    checks = pencil.degree_checks(desc, model)
    text = modelio.emit_model(model)
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    print(
        f"degree formula: {checks.degree_formula_lhs} = {checks.degree_formula_rhs} "
        f"(foliation degree {checks.foliation_degree})  "
        f"[{'ok' if checks.degree_formula_ok else 'FAIL'}]",
        file=sys.stderr,
    )
    print(
        f"genus inequality: {checks.genus_inequality_lhs} >= {checks.genus_inequality_rhs}  "
        f"[{'ok' if checks.genus_inequality_ok else 'FAIL'}]",
        file=sys.stderr,
    )
    print(f"structural checks: {'ok' if checks.structural_ok else 'FAIL'}", file=sys.stderr)
    if checks.saddle_ok is not None:
        print(
            f"saddle count: {checks.saddle_count_found} declared {checks.saddle_count_expected}  "
            f"[{'ok' if checks.saddle_ok else 'FAIL'}]",
            file=sys.stderr,
        )
    return EXIT_OK if checks.all_ok else EXIT_CHECK_FAILED


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fibsurf",
        description="Exact intersection-theoretic checks for fibered surfaces and their foliations.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="validate a model file")
    p.add_argument("file")
    p.set_defaults(func=_cmd_validate)

    p = sub.add_parser("report", help="run the identity and bound checks on a model file")
    p.add_argument("file")
    p.add_argument("--format", choices=("text", "structured"), default="text")
    p.set_defaults(func=_cmd_report)

    p = sub.add_parser("reduce", help="cyclic base change bookkeeping")
    p.add_argument("file")
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--sweep", help="comma separated list of cover degrees")
    p.add_argument("--format", choices=("text", "structured"), default="text")
    p.set_defaults(func=_cmd_reduce)

    p = sub.add_parser("resolve", help="resolve a dicritical base point")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--format", choices=("text", "structured"), default="text")
    p.set_defaults(func=_cmd_resolve)

    p = sub.add_parser("bounds", help="section-count predicates and minimal cover degree")
    p.add_argument("file")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--h0-kf", type=int, required=True, dest="h0_kf")
    p.add_argument("--h0-kbar", type=int, required=True, dest="h0_kbar")
    p.add_argument("--format", choices=("text", "structured"), default="text")
    p.set_defaults(func=_cmd_bounds)

    p = sub.add_parser("gen", help="generate random valid models")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--count", type=int, default=1)
    p.add_argument("--fibers", default="1,4")
    p.add_argument("--components", default="1,6")
    p.add_argument("--multiplicity", default="1,9")
    p.add_argument("--nef", action="store_true")
    p.add_argument("--out", help="directory for model files (stdout when omitted)")
    p.set_defaults(func=_cmd_gen)

    p = sub.add_parser("assemble", help="resolve a pencil descriptor into a model file")
    p.add_argument("file")
    p.add_argument("--out", help="output model file (stdout when omitted)")
    p.set_defaults(func=_cmd_assemble)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except SchemaError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (CoverDegreeError, DescriptorError, ZeroPairingHorizontalError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CHECK_FAILED
    except FibsurfError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CHECK_FAILED


def console_main() -> None:
    raise SystemExit(main())


if __name__ == "__main__":
    console_main()
