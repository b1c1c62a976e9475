"""Command-line entry point.

Subcommands: check-hypotheses, delta, cohomology, tame-ring, closure,
teichmuller, verify.  Every subcommand takes --format {json,text} and
--cap N.  JSON output is canonical (sorted keys, fixed separators) and
byte-identical across runs for identical inputs; timing information only
ever appears in text output.

Exit codes:
  0   success, all checks passed
  2   schema error (unreadable file, malformed or unknown-version input)
  3   hypothesis check failed
  4   domain error (cap exceeded, non-unit, mismatch, nonzero balance, ...)
  5   verification suite failed
  64  usage error (unknown format, bad flag value)
  74  output file could not be written
"""

from __future__ import annotations

import argparse
import json
import sys

from .errors import PndefError, SchemaError
from .grp import DEFAULT_CAP, FiniteMatrixGroup, closure
from .coh import AdjointModule, h1_enumerated
from .hyp import Scenario, run_checks
from .ledger import WilesLedger, theorem_a_ledger
from .localdef import classify_tame_case, enumerate_lifts, residual_pair, verify_presentation
from .mat import Mat2
from .ring import GaloisRing, teichmuller
from .verify import SUITE_NAMES, run_suite

EXIT_OK = 0
EXIT_SCHEMA = 2
EXIT_HYP_FAIL = 3
EXIT_DOMAIN = 4
EXIT_SUITE_FAIL = 5
EXIT_USAGE = 64
EXIT_IO = 74


def canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":")) + "\n"


def _emit(payload: dict, text_lines, fmt: str, out_path=None) -> int:
    if fmt == "json":
        body = canonical_json(payload)
    else:
        body = "\n".join(text_lines) + "\n"
    if out_path:
        try:
            with open(out_path, "w") as fh:
                fh.write(body)
        except OSError as exc:
            print(f"error: cannot write {out_path}: {exc}", file=sys.stderr)
            return EXIT_IO
    else:
        sys.stdout.write(body)
    return EXIT_OK


def _check_format(fmt: str) -> None:
    if fmt not in ("json", "text"):
        print(f"usage error: unknown format {fmt!r} (choose json or text)",
              file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def cmd_check_hypotheses(args) -> int:
    scenario = Scenario.load(args.path)
    report = run_checks(scenario, cap=args.cap)
    payload = {"report": report.serialize()}
    lines = [f"scenario: {args.path}",
             f"ring: p={scenario.ring.p} n={scenario.ring.n} m={scenario.ring.m}"
             f"  weight k={scenario.weight}  claims={list(scenario.claims)}"]
    for name, verdict in report.verdict_map().items():
        mark = {"pass": "PASS", "fail": "FAIL", "not-applicable": "  - "}[verdict.status]
        line = f"  {name:8s} {mark}"
        if verdict.witness:
            line += f"  ({verdict.witness})"
        lines.append(line)
    cond = report.conductor
    lines.append(f"  conductor N = {cond['value']} "
                 f"(squarefree={cond['squarefree']}, prime_to_p={cond['prime_to_p']})")
    if report.all_pass:
        ledger = theorem_a_ledger(scenario, report)
        payload["ledger"] = ledger.serialize()
        payload["dual_selmer_identity"] = {
            "h1_selmer_minus_h1_dual": ledger.delta,
        }
        for row in ledger.rows:
            lines.append(f"  row {row.place:6s} tangent={row.tangent_dim} "
                         f"h0={row.h0_dim}  [{row.tag}]")
        lines.append(f"  delta = {ledger.delta}")
    code = _emit(payload, lines, args.format, args.out)
    if code:
        return code
    return EXIT_OK if report.all_pass else EXIT_HYP_FAIL


def cmd_delta(args) -> int:
    try:
        with open(args.path) as fh:
            obj = json.load(fh)
        ledger = WilesLedger.deserialize(obj)
    except (OSError, json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
        raise SchemaError(f"bad ledger file: {exc}") from exc
    payload = ledger.serialize()
    lines = [f"rows: {len(ledger.rows)}"]
    for row in ledger.rows:
        lines.append(f"  {row.place:8s} tangent={row.tangent_dim} h0={row.h0_dim}")
    lines.append(f"delta = {ledger.delta}")
    return _emit(payload, lines, args.format, args.out)


def _named_group(name: str, p: int, m: int) -> FiniteMatrixGroup:
    ring = GaloisRing(p, 1, m)
    gens = []
    for j in range(m):
        theta = ring.elem([0] * j + [1] + [0] * (m - 1 - j))
        gens.append(Mat2(ring, 1, theta, 0, 1))
        if name in ("sl2", "gl2"):
            gens.append(Mat2(ring, 1, 0, theta, 1))
    if name in ("gl2", "borel"):
        gen = next(u for u in ring.units()
                   if all((u ** k) != ring.one for k in range(1, p ** m - 1)))
        gens.append(Mat2(ring, gen, 0, 0, 1))
    if name == "unipotent":
        pass
    return closure(gens)


def cmd_cohomology(args) -> int:
    if args.group not in ("sl2", "gl2", "borel", "unipotent"):
        print(f"usage error: unknown group {args.group}", file=sys.stderr)
        return EXIT_USAGE
    G = _named_group(args.group, args.p, args.m)
    ring = GaloisRing(args.p, 1, args.m)
    module = AdjointModule.for_ring(ring, args.twist)
    space = h1_enumerated(G, module, cap=args.cap)
    payload = space.serialize()
    payload["group"] = f"{args.group}(F_{args.p}^{args.m})" if args.m > 1 \
        else f"{args.group}(F_{args.p})"
    payload["order"] = len(G)
    lines = [f"group {payload['group']} of order {len(G)}, twist i={args.twist}",
             f"  h0 = {space.h0_dim}",
             f"  z1 = {space.z1_dim}",
             f"  b1 = {space.b1_dim}",
             f"  h1 = {space.h1_dim}"]
    return _emit(payload, lines, args.format, args.out)


def cmd_tame_ring(args) -> int:
    case, pres = classify_tame_case(args.q, args.alpha, args.p)
    payload = {
        "p": args.p, "q": args.q, "alpha": args.alpha,
        "case": case.label,
        "flags": {
            "q_is_1_mod_p": case.q_is_1_mod_p,
            "q_is_-1_mod_p": case.q_is_m1_mod_p,
            "alpha_sq_is_1": case.alpha_sq_is_1,
            "q_sq_alpha_sq_is_1": case.q_sq_alpha_sq_is_1,
        },
        "presentation": pres.serialize() if pres else None,
    }
    lines = [f"(p={args.p}, q={args.q}, alpha={args.alpha}) -> case {case.label}"]
    if pres:
        lines.append(f"  ring: {pres.ring_desc}")
        lines.append(f"  sigma: {pres.sigma_desc}")
        lines.append(f"  tau:   {pres.tau_desc}")
        for gen in pres.ideal_desc:
            lines.append(f"  ideal: {gen}")
    else:
        lines.append("  no presentation covers this residual case")
    if args.enumerate and not args.case_only:
        if pres is None:
            print("error: cannot enumerate a case with no presentation",
                  file=sys.stderr)
            return EXIT_DOMAIN
        sigma_bar, tau_bar = residual_pair(args.p, args.q, args.alpha)
        enum = enumerate_lifts(sigma_bar, tau_bar, args.n, args.q, cap=args.cap)
        report = verify_presentation(case, pres, enum)
        payload["verification"] = report.serialize()
        lines.append(f"  lift classes at n={args.n}: {report.class_count}; "
                     f"ideal points: {report.point_count}; matched: {report.matched}")
    return _emit(payload, lines, args.format, args.out)


def cmd_closure(args) -> int:
    try:
        with open(args.path) as fh:
            obj = json.load(fh)
        rp = obj["ring"]
        ring = GaloisRing(int(rp["p"]), int(rp["n"]), int(rp.get("m", 1)))
        gens = [Mat2.deserialize(g, ring) for g in obj["generators"]]
    except (OSError, json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
        raise SchemaError(f"bad group file: {exc}") from exc
    grp = closure(gens, cap=args.cap)
    payload = grp.serialize()
    lines = [f"closure of {len(gens)} generators over "
             f"GR({ring.p}^{ring.n},{ring.m}): order {len(grp)}"]
    return _emit(payload, lines, args.format, args.out)


def cmd_teichmuller(args) -> int:
    ring = GaloisRing(args.p, args.n, args.m)
    coeffs = [int(c) for c in args.x.split(",")]
    k = ring.residue_field()
    x = k.elem(coeffs if len(coeffs) > 1 else coeffs[0])
    t = teichmuller(x, ring)
    payload = {"input": x.serialize(), "lift": t.serialize()}
    lines = [f"teichmuller lift of {list(x.coeffs)} into GR({args.p}^{args.n},"
             f"{args.m}): {list(t.coeffs)}"]
    return _emit(payload, lines, args.format, args.out)


def cmd_verify(args) -> int:
    if args.suite not in SUITE_NAMES:
        print(f"usage error: unknown suite {args.suite!r} "
              f"(choose from {', '.join(SUITE_NAMES)})", file=sys.stderr)
        return EXIT_USAGE
    result = run_suite(args.suite)
    payload = result.serialize()
    lines = [f"suite {result.name}: {'PASS' if result.passed else 'FAIL'} "
             f"({len(result.checks)} checks, {result.wall_time:.2f}s)"]
    for c in result.checks:
        mark = "PASS" if c["passed"] else "FAIL"
        line = f"  {mark}  {c['check']}"
        if c["detail"] and not c["passed"]:
            line += f"  [{c['detail']}]"
        lines.append(line)
    code = _emit(payload, lines, args.format, args.out)
    if code:
        return code
    return EXIT_OK if result.passed else EXIT_SUITE_FAIL


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pndeform",
        description="exact mod p^n deformation-theory verifications")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--format", default="text",
                        help="output format: json or text (default text)")
        sp.add_argument("--cap", type=int, default=DEFAULT_CAP,
                        help="enumeration capacity bound")
        sp.add_argument("--out", default=None, help="write output to this file")

    sp = sub.add_parser("check-hypotheses", help="run C1-C4 (+shape) on a scenario")
    sp.add_argument("path", help="scenario JSON file")
    common(sp)
    sp.set_defaults(fn=cmd_check_hypotheses)

    sp = sub.add_parser("delta", help="balance a ledger rows file")
    sp.add_argument("path", help="ledger JSON file with a rows array")
    common(sp)
    sp.set_defaults(fn=cmd_delta)

    sp = sub.add_parser("cohomology", help="H^0/H^1 of a named matrix group")
    sp.add_argument("--group", required=True,
                    help="one of sl2, gl2, borel, unipotent")
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--m", type=int, default=1)
    sp.add_argument("--twist", type=int, default=0, help="determinant twist i")
    common(sp)
    sp.set_defaults(fn=cmd_cohomology)

    sp = sub.add_parser("tame-ring", help="classify and verify a tame place")
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--n", type=int, default=2)
    sp.add_argument("--q", type=int, required=True)
    sp.add_argument("--alpha", type=int, required=True)
    sp.add_argument("--case-only", action="store_true",
                    help="print the classification only")
    sp.add_argument("--enumerate", action="store_true",
                    help="run the lift enumeration oracle")
    common(sp)
    sp.set_defaults(fn=cmd_tame_ring)

    sp = sub.add_parser("closure", help="enumerate a generated matrix group")
    sp.add_argument("path", help="JSON file with ring and generators")
    common(sp)
    sp.set_defaults(fn=cmd_closure)

    sp = sub.add_parser("teichmuller", help="multiplicative lift of a residue element")
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--m", type=int, default=1)
    sp.add_argument("--x", required=True,
                    help="residue element coefficients, comma separated")
    common(sp)
    sp.set_defaults(fn=cmd_teichmuller)

    sp = sub.add_parser("verify", help="run a named golden-value suite")
    sp.add_argument("--suite", required=True,
                    help=f"one of {', '.join(SUITE_NAMES)}")
    common(sp)
    sp.set_defaults(fn=cmd_verify)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    _check_format(args.format)
    try:
        return args.fn(args)
    except SchemaError as exc:
        print(f"schema error: {exc}", file=sys.stderr)
        return EXIT_SCHEMA
    except PndefError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
