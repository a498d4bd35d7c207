"""Command line entry point ``grouplab``.

Exit codes: 0 success (unknowns allowed), 1 some check failed, 2 bad input.
"""

from __future__ import annotations

import argparse
import sys

from .bolicity import MetricError, bolicity_report
from .formats import (
    ConfigError,
    group_info,
    load_json,
    matrix_from_spec,
    parse_rational,
    resolve_group_arg,
    space_from_spec,
    trace_report,
    write_json,
)
from .groups import DEFAULT_CLOSURE_CAP, DEFAULT_SUBGROUP_CAP, GroupError, all_subgroups, lambda_ring
from .hnn import (
    build_a1,
    conjugacy_search,
    ball,
    element_prime_powers,
    embed,
    relation_failures,
    torsion_survey,
    verify_binate,
)
from .reps import (
    CharacterError,
    action_from_generators,
    artin_decompose,
    kaplansky_rep,
    natural_action,
    permutation_character,
    regular_character,
    trivial_character,
)
from .ring import bass_support_check
from .suite import emit_report, parse_inputs, run_suite

VERIFY_CHOICES = ("binate", "relations", "conjugacy", "torsion")


def _common(p: argparse.ArgumentParser, *flags: str) -> None:
    p.add_argument("--out", default=None, help="output file (default: stdout)")
    if "cap" in flags:
        p.add_argument("--cap-order", type=int, default=None, help="closure cap for group orders")
    if "group" in flags:
        p.add_argument("--group", required=True, help="built-in name (C2, S3, ...) or group JSON file")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="grouplab", description=__doc__.splitlines()[0])
    top = parser.add_subparsers(dest="area", required=True)

    g = top.add_parser("group").add_subparsers(dest="cmd", required=True)
    p = g.add_parser("info", help="order, classes, subgroups and Lambda primes")
    _common(p, "group", "cap")

    r = top.add_parser("ring").add_subparsers(dest="cmd", required=True)
    p = r.add_parser("trace", help="traces of a matrix over the group ring")
    _common(p, "group", "cap")
    p.add_argument("--matrix", required=True)

    h = top.add_parser("hnn").add_subparsers(dest="cmd", required=True)
    p = h.add_parser("a1", help="build A1(H) and run checks on it")
    _common(p, "group", "cap")
    p.add_argument("--verify", action="append", choices=VERIFY_CHOICES,
                   help="check to run (repeatable; default: all)")
    p.add_argument("--radius", type=int, default=2)
    p.add_argument("--nmax", type=int, default=24)

    rp = top.add_parser("rep").add_subparsers(dest="cmd", required=True)
    for name, text in (("artin", "decompose a character over cyclic inductions"),
                       ("kappa", "Kaplansky trace of a character")):
        p = rp.add_parser(name, help=text)
        _common(p, "group", "cap")
        p.add_argument("--char", required=True, help="triv | reg | natural | perm:<action file>")

    m = top.add_parser("metric").add_subparsers(dest="cmd", required=True)
    p = m.add_parser("bolic", help="run every metric checker on a finite space")
    _common(p)
    p.add_argument("--space", required=True)
    p.add_argument("--delta", default="0")
    p.add_argument("--r", default=None, help="radius for the four-point scan (default: diameter)")
    p.add_argument("--tol", type=float, default=1e-9)
    p.add_argument("--seed", type=int, default=0)

    p = top.add_parser("suite", help="run the full verification battery")
    _common(p, "cap")
    p.add_argument("--config", default=None)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--radius", type=int, default=None)
    p.add_argument("--nmax", type=int, default=None)
    p.add_argument("--tol", type=float, default=None)
    p.add_argument("--timings", action="store_true", help="record wall time per check")
    p.add_argument("--sabotage-psi", action="store_true", help=argparse.SUPPRESS)
    return parser


def _cap(args) -> int:
    cap = args.cap_order if args.cap_order is not None else DEFAULT_CLOSURE_CAP
    if cap < 1:
        raise ConfigError("--cap-order must be positive")
    return cap


def _character(G, spec: str):
    if spec == "triv":
        return trivial_character(G)
    if spec == "reg":
        return regular_character(G)
    if spec == "natural":
        return permutation_character(G, natural_action(G))
    if spec.startswith("perm:"):
        data = load_json(spec[5:])
        if not isinstance(data, dict) or "degree" not in data:
            raise ConfigError(f"{spec[5:]}: needs 'degree' and 'action' or 'generators'")
        if "action" in data:
            return permutation_character(G, data["action"])
        if "generators" in data:
            images = {int(k): v for k, v in data["generators"].items()}
            return permutation_character(G, action_from_generators(G, data["degree"], images))
        raise ConfigError(f"{spec[5:]}: needs 'action' or 'generators'")
    raise ConfigError(f"--char: unknown character {spec!r}")


def cmd_group_info(args) -> int:
    G = resolve_group_arg(args.group, _cap(args))
    write_json(group_info(G, DEFAULT_SUBGROUP_CAP), args.out)
    return 0


def cmd_ring_trace(args) -> int:
    G = resolve_group_arg(args.group, _cap(args))
    M = matrix_from_spec(G, load_json(args.matrix), where=args.matrix)
    rep = trace_report(M)
    if rep["idempotent"]:
        rep["bass_support"] = bass_support_check(M)
    write_json(rep, args.out)
    return 0


def cmd_hnn_a1(args) -> int:
    if args.radius < 0 or args.nmax < 1:
        raise ConfigError("--radius must be >= 0 and --nmax >= 1")
    cap = _cap(args)
    H = resolve_group_arg(args.group, cap)
    pres = build_a1(H, cap=cap)
    letters = [
        {"index": L.index, "F": list(L.F.members), "C": list(L.C.members), "A_order": len(L.A), "B_order": len(L.B)}
        for L in pres.letters
    ]
    checks = []
    wanted = args.verify or list(VERIFY_CHOICES)
    words = None
    if {"conjugacy", "torsion"} & set(wanted):
        words = ball(pres, args.radius)
    for name in wanted:
        if name == "binate":
            bad = [[L.index, h] for L in pres.letters for h in L.C if not verify_binate(pres, L.index, h)]
            checks.append({"name": name, "status": "fail" if bad else "pass", "counterexample": bad[:1] or None})
        elif name == "relations":
            bad = relation_failures(pres)
            checks.append({"name": name, "status": "fail" if bad else "pass", "counterexample": bad[0] if bad else None})
        elif name == "conjugacy":
            reps = [c[0] for c in H.partition.classes]
            status, ce = "pass", None
            for i, a in enumerate(reps):
                for b in reps[i + 1:]:
                    ans = conjugacy_search(pres, embed(pres, a), embed(pres, b), args.radius, args.nmax, words)
                    if ans.status == "yes":
                        status, ce = "fail", {"pair": [a, b], "conjugator": ans.witness}
            checks.append({"name": name, "status": status, "counterexample": ce})
        elif name == "torsion":
            found = torsion_survey(pres, args.radius, args.nmax, words)
            extra = found - element_prime_powers(H)
            checks.append({"name": name, "status": "fail" if extra else "pass", "found": found,
                           "counterexample": sorted(extra) or None})
    write_json({"group": H.name, "order": H.order, "letters": letters, "checks": checks,
                "radius": args.radius, "n_max": args.nmax}, args.out)
    return 1 if any(c["status"] == "fail" for c in checks) else 0


def cmd_rep_artin(args) -> int:
    G = resolve_group_arg(args.group, _cap(args))
    dec = artin_decompose(G, _character(G, args.char))
    terms = [{"subgroup_gens": t.generators(), "j": t.j, "coeff": t.coeff} for t in dec.terms]
    write_json({"group": G.name, "character": args.char, "terms": terms, "verified": dec.verified,
                "scale": dec.scale}, args.out)
    return 0 if dec.verified else 1


def cmd_rep_kappa(args) -> int:
    G = resolve_group_arg(args.group, _cap(args))
    k = kaplansky_rep(G, _character(G, args.char))
    lam = lambda_ring(all_subgroups(G, cap=DEFAULT_SUBGROUP_CAP))
    write_json({"group": G.name, "character": args.char, "kappa": k, "lambda_primes": sorted(lam.primes),
                "member": lam.membership(k)}, args.out)
    return 0


def cmd_metric_bolic(args) -> int:
    if args.tol <= 0:
        raise ConfigError("--tol must be positive")
    X = space_from_spec(load_json(args.space), args.tol, seed=args.seed)
    delta = parse_rational(args.delta, "--delta")
    r = X.diameter() if args.r is None else parse_rational(args.r, "--r")
    if delta < 0 or r < 0:
        raise ConfigError("--delta and --r must be non-negative")
    if not X.exact:
        delta, r = float(delta), float(r)
    write_json(bolicity_report(X, delta, r, args.tol), args.out)
    return 0


def cmd_suite(args) -> int:
    cfg = parse_inputs(
        args.config,
        seed=args.seed,
        radius=args.radius,
        n_max=args.nmax,
        cap_order=args.cap_order,
        tol=args.tol,
        sabotage_psi=args.sabotage_psi or None,
        timings=args.timings or None,
    )
    report = run_suite(cfg)
    emit_report(report, args.out)
    counts = report.counts()
    print(f"pass {counts['pass']}  fail {counts['fail']}  unknown {counts['unknown']}", file=sys.stderr)
    return report.exit_code


COMMANDS = {
    ("group", "info"): cmd_group_info,
    ("ring", "trace"): cmd_ring_trace,
    ("hnn", "a1"): cmd_hnn_a1,
    ("rep", "artin"): cmd_rep_artin,
    ("rep", "kappa"): cmd_rep_kappa,
    ("metric", "bolic"): cmd_metric_bolic,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    handler = cmd_suite if args.area == "suite" else COMMANDS[(args.area, args.cmd)]
    try:
        return handler(args)
    except (ConfigError, GroupError, MetricError, CharacterError) as exc:
        print(f"grouplab: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
