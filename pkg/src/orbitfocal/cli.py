"""Command-line front end.

Every subcommand prints a short human-readable report, or a single JSON
object with ``--json``.  Exact rationals are emitted as "p/q" strings and
floats are rounded to 12 significant digits.  Exit status: 0 on success,
1 when a verification fails, 2 on usage errors.
"""

from __future__ import annotations

import argparse
import itertools
import json
import sys
from fractions import Fraction
from math import sqrt
from typing import List, Optional, Sequence

from . import __version__
from .bounds import (
    TABLE1,
    classical_family_check,
    combine_constants,
    focal_lower_bound,
    table1_constant,
)
from .chevalley import build_chevalley, verify_jacobi
from .curvature import c_delta, mab_certificate, maximize_sff, phi_set, sff_gram
from .hwmodule import make_context
from .rootsys import (
    InvalidCartanType,
    build_root_system,
    isoparametric_check,
    parse_cartan_type,
    weight_from_fundamental,
)

DEFAULT_SEED = 0
DEFAULT_SAMPLES = 10_000
DEFAULT_STARTS = 64
TORUS_TOKENS = {"T", "T1", "U1"}

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _float(x: float) -> float:
    return float(f"{x:.12g}")


def _q(x) -> str:
    return str(Fraction(x))


def _vec(v) -> List[str]:
    return [_q(c) for c in v]


def _parse_type(text: str):
    try:
        return parse_cartan_type(text)
    except InvalidCartanType as exc:
        raise UsageError(str(exc)) from None


def _parse_weight(text: str, rank: int) -> List[int]:
    try:
        coeffs = [int(t) for t in text.split(",") if t.strip() != ""]
    except ValueError:
        raise UsageError(f"weight must be comma-separated nonnegative integers: {text!r}") from None
    if len(coeffs) != rank:
        raise UsageError(f"weight needs {rank} coefficients, got {len(coeffs)}")
    if any(c < 0 for c in coeffs):
        raise UsageError("weight coefficients must be nonnegative")
    if not any(coeffs):
        raise UsageError("zero weight gives the trivial representation")
    return coeffs


def _parse_factors(text: str):
    types, tori = [], 0
    for tok in (t.strip() for t in text.split(",")):
        if not tok:
            continue
        if tok.upper() in TORUS_TOKENS:
            tori += 1
            continue
        types.append(_parse_type(tok))
    return types, tori


# subcommands --------------------------------------------------------------


def cmd_table1(args):
    rows = []
    for key, c2 in TABLE1.items():
        label = f"{key}_n" if len(key) == 1 and key in "ABCD" else key
        if key in ("G", "F"):
            label = {"G": "G2", "F": "F4"}[key]
        rows.append({"type": label, "c_squared": c2, "c": _float(sqrt(c2))})
    text = "\n".join(f"{r['type']:<5} C^2 = {r['c_squared']:<4} C = {r['c']:.6f}" for r in rows)
    return EXIT_OK, {"command": "table1", "entries": rows}, text


def cmd_cdelta(args):
    ct = _parse_type(args.type)
    rs = build_root_system(ct)
    val = c_delta(rs)
    payload = {
        "command": "cdelta",
        "type": str(ct),
        "c_delta": val,
        "table1_c_squared": table1_constant(ct).c_squared,
        "n_positive": rs.n_positive,
    }
    return EXIT_OK, payload, str(val)


def cmd_phi(args):
    ct = _parse_type(args.type)
    rs = build_root_system(ct)
    gammas = [_vec(g) for g in phi_set(rs)]
    payload = {"command": "phi", "type": str(ct), "count": len(gammas), "gammas": gammas}
    text = "\n".join(["(" + ", ".join(g) + ")" for g in gammas] + [f"{len(gammas)} levels in Phi"])
    return EXIT_OK, payload, text


def cmd_bound(args):
    types, tori = _parse_factors(args.factors)
    warnings = []
    if not types:
        warnings.append("no simple factor given: using the sqrt(2) torus floor")
    fb = focal_lower_bound(types, is_complex=not args.real)
    payload = {
        "command": "bound",
        "factors": [str(t) for t in types],
        "torus_factors": tori,
        "c_squared": fb.c_squared,
        "real": fb.real_form,
        "effective_c_squared": fb.effective_c_squared,
        "c": _float(fb.c_float),
        "radians": _float(fb.bound_radians),
        "warnings": warnings,
    }
    mult = " * sqrt(2)" if fb.real_form else ""
    text = (
        f"C^2 = {fb.c_squared}{mult}\n"
        f"focal radius >= arccot({fb.c_float:.12g}) = {fb.bound_radians:.12g} rad"
    )
    return EXIT_OK, payload, text, warnings


def _mab_one(rs, tbl, coeffs):
    ctx = make_context(rs, weight_from_fundamental(rs, coeffs), tbl)
    cert = mab_certificate(ctx)
    return {
        "weight": list(coeffs),
        "checked": cert.checked,
        "tight": cert.tight,
        "violations": len(cert.violations),
        "ok": cert.ok,
    }


def cmd_verify_mab(args):
    ct = _parse_type(args.type)
    rs = build_root_system(ct)
    tbl = build_chevalley(rs)
    if args.weight:
        grid = [_parse_weight(args.weight, rs.rank)]
    else:
        grid = [list(c) for c in itertools.product(range(3), repeat=rs.rank) if any(c)]
    rows = [_mab_one(rs, tbl, c) for c in grid]
    ok = all(r["ok"] for r in rows)
    payload = {
        "command": "verify mab",
        "type": str(ct),
        "weights": rows,
        "checked": sum(r["checked"] for r in rows),
        "ok": ok,
    }
    text = "\n".join(
        f"lambda={r['weight']}: {r['checked']} pairs, {r['tight']} tight, "
        f"{'PASS' if r['ok'] else 'FAIL'}"
        for r in rows
    )
    return (EXIT_OK if ok else EXIT_FAIL), payload, text


def cmd_verify_classical(args):
    ct = _parse_type(args.type)
    if not ct.is_classical:
        raise UsageError(f"{ct} is not classical (A, B, C or D)")
    if args.samples < 1:
        raise UsageError("--samples must be >= 1")
    rep = classical_family_check(ct, samples=args.samples, seed=args.seed)
    payload = {
        "command": "verify classical",
        "type": str(ct),
        "samples": rep.samples,
        "seed": rep.seed,
        "max_value": _float(rep.max_value),
        "bound": rep.bound,
        "violations": rep.violations,
        "ok": rep.passed,
    }
    text = (
        f"{ct}: max estimate {rep.max_value:.12g} over {rep.samples} samples "
        f"(bound {rep.bound}), {'PASS' if rep.passed else 'FAIL'}"
    )
    return (EXIT_OK if rep.passed else EXIT_FAIL), payload, text


def cmd_verify_jacobi(args):
    ct = _parse_type(args.type)
    rs = build_root_system(ct)
    rep = verify_jacobi(build_chevalley(rs), samples=args.samples, seed=args.seed)
    payload = {
        "command": "verify jacobi",
        "type": str(ct),
        "checked": rep.checked,
        "exhaustive": rep.exhaustive,
        "ok": rep.ok,
        "failures": [[repr(x) for x in t] for t in rep.failures],
    }
    mode = "exhaustive" if rep.exhaustive else "sampled"
    text = f"{ct}: Jacobi identity on {rep.checked} triples ({mode}), {'PASS' if rep.ok else 'FAIL'}"
    return (EXIT_OK if rep.ok else EXIT_FAIL), payload, text


def cmd_maximize(args):
    ct = _parse_type(args.type)
    rs = build_root_system(ct)
    coeffs = _parse_weight(args.weight, rs.rank)
    if args.starts < 1:
        raise UsageError("--starts must be >= 1")
    ctx = make_context(rs, weight_from_fundamental(rs, coeffs))
    rep = maximize_sff(sff_gram(ctx), starts=args.starts, seed=args.seed, real=args.real)
    cd = c_delta(rs)
    t1 = table1_constant(ct).c_squared
    within = rep.value <= min(cd, t1) + 1e-6
    payload = {
        "command": "maximize",
        "type": str(ct),
        "weight": coeffs,
        "starts": rep.starts,
        "seed": args.seed,
        "real": bool(args.real),
        "value": _float(rep.value),
        "norm": _float(sqrt(rep.value)),
        "converged": rep.converged,
        "grad_norm": _float(rep.grad_norm),
        "iterations": rep.iterations,
        "c_delta": cd,
        "table1_c_squared": t1,
        "within_bound": within,
    }
    text = (
        f"{ct} lambda={coeffs}: best ||II(fp,fp)||^2 = {rep.value:.12g} "
        f"(||II|| >= {sqrt(rep.value):.12g}); bounds C_Delta={cd}, C_T^2={t1}; "
        f"{'within bound' if within else 'BOUND EXCEEDED'}"
    )
    return (EXIT_OK if within else EXIT_FAIL), payload, text


def cmd_isopar(args):
    ct = _parse_type(args.type)
    rs = build_root_system(ct)
    val = isoparametric_check(rs)
    ok = val <= 4
    payload = {
        "command": "isopar",
        "type": str(ct),
        "value": _q(val),
        "highest_root": _vec(rs.positive_roots[rs.highest_root]),
        "max_inverse_cos": _float(sqrt(val)),
        "ok": ok,
    }
    text = f"{ct}: max 1/cos^2 = {val} (1/|cos| = {sqrt(val):.12g}), {'PASS' if ok else 'FAIL'}"
    return (EXIT_OK if ok else EXIT_FAIL), payload, text


# parser -------------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(
        prog="orbitfocal",
        description="Root-system curvature constants and focal-radius bounds for highest-weight orbits.",
    )
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    common = _Parser(add_help=False)
    common.add_argument("--json", action="store_true", help="emit one JSON object")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)

    s = sub.add_parser("table1", parents=[common], help="print the squared constants per Cartan type")
    s.set_defaults(func=cmd_table1)

    s = sub.add_parser("cdelta", parents=[common], help="compute C_Delta^2 for a Cartan type")
    s.add_argument("--type", required=True)
    s.set_defaults(func=cmd_cdelta)

    s = sub.add_parser("phi", parents=[common], help="list the levels gamma where S_gamma can be positive")
    s.add_argument("--type", required=True)
    s.set_defaults(func=cmd_phi)

    s = sub.add_parser(
        "bound",
        parents=[common],
        help="focal-radius lower bound from the simple factors",
        description=(
            "Combine the constants of the simple factors (max with the sqrt(2) floor) "
            "and print arccot(C), or arccot(C*sqrt(2)) with --real.  The factor list is "
            "taken at face value: irreducibility of the representation is not checked, "
            "and the bound is only claimed for irreducible representations."
        ),
    )
    s.add_argument("--factors", required=True, help="comma-separated Cartan types, e.g. A2,E8 (T for a torus)")
    s.add_argument("--real", action="store_true", help="representation has no invariant complex structure")
    s.set_defaults(func=cmd_bound)

    v = sub.add_parser("verify", help="run a verification campaign")
    vsub = v.add_subparsers(dest="check", parser_class=_Parser)
    s = vsub.add_parser("mab", parents=[common], help="exact basis-vector estimate for every active pair")
    s.add_argument("--type", required=True)
    s.add_argument("--weight", help="fundamental coefficients c1,...,cn (default: all of {0,1,2}^n)")
    s.set_defaults(func=cmd_verify_mab)
    s = vsub.add_parser("classical", parents=[common], help="sample the classical-family estimate")
    s.add_argument("--type", required=True)
    s.add_argument("--samples", type=int, default=DEFAULT_SAMPLES)
    s.add_argument("--seed", type=int, default=DEFAULT_SEED)
    s.set_defaults(func=cmd_verify_classical)
    s = vsub.add_parser("jacobi", parents=[common], help="Jacobi identity on the Chevalley basis")
    s.add_argument("--type", required=True)
    s.add_argument("--samples", type=int, default=10_000, help="triples sampled when rank > 4")
    s.add_argument("--seed", type=int, default=DEFAULT_SEED)
    s.set_defaults(func=cmd_verify_jacobi)

    s = sub.add_parser("maximize", parents=[common], help="search for large ||II(fp,fp)||")
    s.add_argument("--type", required=True)
    s.add_argument("--weight", required=True)
    s.add_argument("--starts", type=int, default=DEFAULT_STARTS)
    s.add_argument("--seed", type=int, default=DEFAULT_SEED)
    s.add_argument("--real", action="store_true", help="restrict to real coefficients")
    s.set_defaults(func=cmd_maximize)

    s = sub.add_parser("isopar", parents=[common], help="highest-root angle check")
    s.add_argument("--type", required=True)
    s.set_defaults(func=cmd_isopar)
    return p


def run(argv: Optional[Sequence[str]] = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if not getattr(args, "func", None):
            raise UsageError("missing subcommand")
        result = args.func(args)
    except UsageError as exc:
        print(f"orbitfocal: error: {exc}", file=stderr)
        return EXIT_USAGE
    code, payload, text = result[:3]
    for w in result[3] if len(result) > 3 else ():
        print(f"orbitfocal: warning: {w}", file=stderr)
    if args.json:
        print(json.dumps(payload, sort_keys=True), file=stdout)
    else:
        print(text, file=stdout)
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
