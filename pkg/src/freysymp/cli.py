"""Command-line front end.

Exit codes: 0 success, 1 a verification or contradiction check failed,
2 invalid input.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys
from fractions import Fraction

from . import fermatchain as fc
from . import ffcurve as ff
from . import matgroup as mg
from . import symplectic as sy
from . import wmodel as wm
from .numutil import FqElem, is_prime, primes_in_range


class InputError(ValueError):
    pass


def _default(o):
    if isinstance(o, Fraction):
        return str(o)
    if isinstance(o, FqElem):
        return repr(o)
    if isinstance(o, wm.WeierstrassModel):
        return str(o)
    if isinstance(o, fc.VerdictReport):
        return o.as_dict()
    if dataclasses.is_dataclass(o):
        return dataclasses.asdict(o)
    if isinstance(o, (set, frozenset)):
        return sorted(o)
    raise TypeError(f"cannot serialize {type(o).__name__}")


def _emit(args, payload: dict, summary: list[str]) -> None:
    text = json.dumps(payload, indent=2, default=_default)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    if args.json:
        print(text)
    else:
        print("\n".join(summary))


# --- subcommands ---------------------------------------------------------------


def cmd_invariants(args) -> int:
    try:
        model = wm.WeierstrassModel.parse(args.model)
    except (ValueError, TypeError) as exc:
        raise InputError(str(exc)) from exc
    inv = wm.invariants(model)
    payload = {"model": str(model), "invariants": inv.as_dict()}
    summary = [f"model {model}", f"  c4 = {inv.c4}, c6 = {inv.c6}, Delta = {inv.delta}, j = {inv.j}"]
    if args.at is not None:
        if not is_prime(args.at):
            raise InputError(f"--at {args.at} is not prime")
        extra = wm.load_inertia_table(args.inertia_table) if args.inertia_table else ()
        mmin, ld = wm.minimalize_at(model, args.at)
        local = {"minimal_model": str(mmin), **ld.as_dict()}
        if args.at == 2 and ld.reduction_type == wm.POT_GOOD:
            local["inertia_at_2"] = wm.inertia_image_at_2(ld, extra).as_dict()
        payload["local"] = local
        summary.append(
            f"  at {args.at}: minimal model {mmin}, v(c4) = {ld.v_c4}, v(c6) = {ld.v_c6}, "
            f"v(Delta_m) = {ld.v_delta}, v(j) = {ld.v_j}, {ld.reduction_type}"
        )
        if "inertia_at_2" in local:
            summary.append(f"  inertia image at 2: {local['inertia_at_2']['tag']}")
    _emit(args, payload, summary)
    return 0


def cmd_frey(args) -> int:
    try:
        inst = fc.frey_curve(args.a, args.b)
    except fc.PreconditionError as exc:
        raise InputError(str(exc)) from exc
    payload = {"a": inst.a, "b": inst.b, "model": str(inst.model), "s": inst.s,
               "delta": wm.invariants(inst.model).delta}
    summary = [f"E_{{{inst.a},{inst.b}}}: {inst.model}, a^3 + b^3 = {inst.s}, Delta = {payload['delta']}"]
    try:
        chain = fc.valuation_chain(inst)
    except fc.PreconditionError as exc:
        payload["chain"] = None
        payload["chain_error"] = str(exc)
        summary.append(f"  valuation chain not applicable: {exc}")
        _emit(args, payload, summary)
        return 0
    payload["chain"] = chain
    t = chain["twist"]
    summary += [
        f"  v3(c4, c6, Delta) = ({chain['frey']['v3_c4']}, {chain['frey']['v3_c6']}, {chain['frey']['v3_delta']})",
        f"  -3 twist {t['model']}: ({t['v3_c4']}, {t['v3_c6']}, {t['v3_delta']})",
        f"  minimal at 3: {t['minimal_model_at_3']}, v3(Delta_m) = {t['v3_dmin']}"
        f" (expected {chain['expected_v3_dmin']}), multiplicative: {t['multiplicative_at_3']}",
    ]
    _emit(args, payload, summary)
    return 0 if chain["congruence_ok"] else 1


def cmd_classify(args) -> int:
    if args.p is not None:
        if not is_prime(args.p):
            raise InputError(f"{args.p} is not prime")
        rep = fc.obstruction_verdict(args.p)
        summary = [f"p = {rep.p}: {rep.status}"]
        summary += [f"  [{s['step']}] {s['quantity']} = {s['value']}" for s in rep.trace]
        _emit(args, rep.as_dict(), summary)
        return 0
    lo, hi = args.range
    if lo < fc.MIN_EXPONENT or lo > hi:
        raise InputError(f"range must satisfy {fc.MIN_EXPONENT} <= LO <= HI")
    res = fc.classify_range(lo, hi)
    payload = {k: v for k, v in res.items() if k != "verdicts"}
    payload["verdicts"] = [v.as_dict() for v in res["verdicts"]]
    summary = [
        f"primes in [{lo}, {hi}]: {res['primes']}",
        f"  eliminated: {res['counts'][fc.ELIMINATED]}  inconclusive: {res['counts'][fc.INCONCLUSIVE]}",
    ]
    _emit(args, payload, summary)
    return 0


def cmd_verify_lemma(args) -> int:
    if args.p is not None:
        primes = [args.p]
        if args.p < 3 or not is_prime(args.p):
            raise InputError(f"{args.p} is not an odd prime")
    else:
        primes = primes_in_range(3, args.pmax)
    reports, failed = [], []
    for p in primes:
        try:
            reports.append(mg.verify_normalizer_lemma(p, brute_force=args.brute_force))
        except mg.LemmaVerificationError as exc:
            failed.append({"p": p, "error": str(exc)})
    summary = []
    for r in reports:
        clause = "(a) all square" if r.legendre_2_p == 1 else f"(b) square part -> {r.a4_check['image_class']}"
        bf = "" if r.bruteforce_match is None else f", brute force match: {r.bruteforce_match}"
        summary.append(f"p = {r.p}: |N/C| = {r.quotient_order} ({r.quotient_class}), "
                       f"det n1 = {r.det_n1}, det n2 = {r.det_n2}, {clause}{bf}")
    summary += [f"p = {f['p']}: FAILED {f['error']}" for f in failed]
    if args.p is not None and reports:
        payload = dataclasses.asdict(reports[0])
    else:
        payload = {"reports": reports, "failures": failed}
    _emit(args, payload, summary)
    return 1 if failed else 0


def cmd_weil_oracle(args) -> int:
    E = ff.supersingular_f4_curve()
    B = ff.torsion_basis(E, 3)
    checked, bad = 0, []
    for t in mg.gl2_elements(3):
        M = mg.MatModP.from_tuple(t, 3)
        try:
            sy.oracle_r_of_phi(M, B)
        except AssertionError:
            bad.append(M.tolist())
        checked += 1
    payload = {"curve": "y^2 + y = x^3 over F_4", "p": 3, "basis": [repr(B.P), repr(B.Q)],
               "zeta": repr(B.zeta), "matrices_checked": checked, "failures": bad,
               "passed": not bad}
    status = "PASS" if not bad else "FAIL"
    _emit(args, payload, [f"{status}: r(phi) = det(M) for {checked - len(bad)}/{checked} matrices in GL_2(F_3)"])
    return 0 if not bad else 1


def cmd_aut_f4(args) -> int:
    E = ff.supersingular_f4_curve()
    B = ff.torsion_basis(E, 3)
    rows = []
    for a in ff.automorphisms_f4():
        M = ff.psi_map(a, B)
        rows.append({"u": repr(a.u), "s": repr(a.s), "t": repr(a.t), "order": a.order(),
                     "psi": M.tolist(), "det": M.det()})
    image = mg.closure([ff.psi_map(a, B) for a in ff.automorphisms_f4()], 3)
    cls = mg.identify(image).tag
    payload = {"basis": [repr(B.P), repr(B.Q)], "automorphisms": rows,
               "psi_image_order": image.order, "psi_image_class": cls}
    summary = [f"u={r['u']:>6}  s={r['s']:>6}  t={r['t']:>6}  order {r['order']}  psi = {r['psi']}" for r in rows]
    summary.append(f"{len(rows)} automorphisms; psi image of order {image.order} ({cls})")
    _emit(args, payload, summary)
    return 0 if len(rows) == 24 and cls == "SL2F3" else 1


def cmd_density(args) -> int:
    try:
        cs = fc.CongruenceSet.load(args.conditions)
    except (OSError, ValueError, KeyError, TypeError) as exc:
        raise InputError(f"bad congruence file: {exc}") from exc
    d = fc.dirichlet_density(cs)
    payload = {"modulus": cs.modulus(), "classes": sorted(cs.classes()),
               "density": str(d), "decimal": float(d)}
    _emit(args, payload, [f"density = {d} ~ {float(d):.6f} (modulus {cs.modulus()})"])
    return 0


# --- parser --------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="print JSON instead of a summary")
    common.add_argument("--out", metavar="FILE", help="also write the JSON report to FILE")

    ap = argparse.ArgumentParser(prog="freysymp", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("invariants", parents=[common], help="invariants and local data of a model")
    p.add_argument("--model", required=True, help="a1,a2,a3,a4,a6")
    p.add_argument("--at", type=int, help="prime at which to minimalize")
    p.add_argument("--inertia-table", help="JSON file of extra inertia rows")
    p.set_defaults(func=cmd_invariants)

    p = sub.add_parser("frey", parents=[common], help="Frey curve E_{a,b} and its valuation chain")
    p.add_argument("--a", type=int, required=True)
    p.add_argument("--b", type=int, required=True)
    p.set_defaults(func=cmd_frey)

    p = sub.add_parser("classify", parents=[common], help="verdict for exponent(s) p")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--p", type=int)
    g.add_argument("--range", type=int, nargs=2, metavar=("LO", "HI"))
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("verify-lemma", parents=[common], help="normalizer lemma checks")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--p", type=int)
    g.add_argument("--pmax", type=int)
    p.add_argument("--brute-force", action="store_true", help="also scan GL_2(F_p) (p <= 31)")
    p.set_defaults(func=cmd_verify_lemma)

    p = sub.add_parser("weil-oracle", parents=[common], help="r(phi) = det(M) on y^2+y=x^3 over F_4")
    p.set_defaults(func=cmd_weil_oracle)

    p = sub.add_parser("aut-f4", parents=[common], help="automorphisms of y^2+y=x^3 over F_4")
    p.set_defaults(func=cmd_aut_f4)

    p = sub.add_parser("density", parents=[common], help="Dirichlet density of a congruence set")
    p.add_argument("--conditions", required=True, help="JSON list of {modulus, residues}")
    p.set_defaults(func=cmd_density)
    return ap


def run(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (InputError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except AssertionError as exc:
        print(f"verification failed: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run())
