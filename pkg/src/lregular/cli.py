"""Command-line front end.

Verbs: expand, bseries, identity, claim, etaform, sturm, radu, hecke,
density, reproduce.  Reports print as JSON (sorted keys, no timestamps, so
output is byte-identical across runs); density can also emit CSV.  Exit
codes: 0 pass/proven, 1 fail/counterexample, 2 inapplicable or hypothesis
failure, 3 usage error.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction

from . import etaform, hecke, lacunarity, partitions, qseries as qs, radu
from .reports import FAIL, INAPPLICABLE, PASS, jsonable

EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_INAPPLICABLE = 2
EXIT_USAGE = 3

_STATUS_EXIT = {PASS: EXIT_PASS, "proven": EXIT_PASS, FAIL: EXIT_FAIL,
                "failed": EXIT_FAIL, INAPPLICABLE: EXIT_INAPPLICABLE}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _ring_from_mod(mod: str | None) -> qs.CoefficientRing:
    if mod is None or mod == "exact":
        return qs.EXACT
    m = int(mod)
    if m < 2 or m & (m - 1):
        raise UsageError(f"--mod must be a power of two >= 2 or 'exact', got {mod}")
    return qs.CoefficientRing.mod_pow2(m.bit_length() - 1)


def _emit(payload: dict, fmt: str):
    if fmt == "plain":
        for key, value in sorted(payload.items()):
            print(f"{key}: {json.dumps(jsonable(value), sort_keys=True)}")
    else:
        print(json.dumps(jsonable(payload), sort_keys=True, indent=2))


def _status_exit(status: str) -> int:
    return _STATUS_EXIT.get(status, EXIT_FAIL)


# ---------------------------------------------------------------------------
# verb handlers

def _cmd_expand(args) -> int:
    ring = _ring_from_mod(args.mod)
    spec = partitions.parse_eta_spec(args.eta)
    series = qs.one(ring, args.terms)
    for delta, r in sorted(spec.items()):
        series = qs.mul(series, qs.eta_factor(delta, r, args.terms, ring))
    _emit({"series": series.to_json_dict(), "eta": args.eta}, args.format)
    return EXIT_PASS


def _cmd_bseries(args) -> int:
    ring = _ring_from_mod(args.mod)
    series = partitions.regular_series(args.ell, args.terms, ring)
    _emit({"series": series.to_json_dict(), "ell": args.ell}, args.format)
    return EXIT_PASS


def _cmd_identity(args) -> int:
    if args.list:
        _emit({"catalog": partitions.catalog_manifest()}, args.format)
        return EXIT_PASS
    if args.id is None:
        raise UsageError("identity needs --id or --list")
    if args.all:
        raise UsageError("use either --id or --all, not both")
    report = partitions.verify_identity(args.id, args.terms)
    _emit(report.to_json_dict(), args.format)
    return _status_exit(report.status)


def _cmd_identity_all(args) -> int:
    ids = sorted(partitions.IDENTITIES, key=lambda s: int(s[1:]))
    with ThreadPoolExecutor(max_workers=args.jobs) as pool:
        reports = list(pool.map(lambda i: partitions.verify_identity(i, args.terms), ids))
    payload = {"identities": [r.to_json_dict() for r in reports]}
    _emit(payload, args.format)
    return EXIT_PASS if all(r.passed for r in reports) else EXIT_FAIL


def _cmd_claim(args) -> int:
    if args.nmax < 0:
        raise UsageError(f"--nmax must be >= 0, got {args.nmax}")
    if args.mod is None:
        raise UsageError("claim needs --mod")
    ring = _ring_from_mod(args.mod)
    claim = partitions.CongruenceClaim(A=args.A, B=args.B, modulus=int(args.mod))
    source = partitions.build_named_series(args.series, claim.argument(args.nmax), ring)
    report = partitions.claim_check(claim, source, args.nmax)
    report.context["series"] = args.series
    _emit(report.to_json_dict(), args.format)
    return _status_exit(report.status)


def _cmd_etaform_inspect(args) -> int:
    eq = etaform.parse_eta_quotient(args.eta, args.level)
    rep = etaform.check_modularity(eq)
    holo = etaform.is_holomorphic(eq)
    payload = {
        "level": eq.level,
        "exponents": {str(d): r for d, r in sorted(eq.exponents.items())},
        "modularity": rep.to_json_dict(),
        "holomorphy": holo.to_json_dict(),
    }
    _emit(payload, args.format)
    return EXIT_PASS if (rep.all_conditions and holo.holomorphic) else EXIT_FAIL


def _cmd_sturm(args) -> int:
    bound = etaform.sturm_bound(args.weight, args.level, not args.different_character)
    _emit({"bound": bound, "weight": args.weight, "level": args.level,
           "same_character": not args.different_character}, args.format)
    return EXIT_PASS


def _cmd_radu_verify(args) -> int:
    r = partitions.parse_eta_spec(args.r)
    rprime = partitions.parse_eta_spec(args.rprime) if args.rprime else {}
    tup = radu.RaduTuple(m=args.m, M=args.M, N=args.N, r=r, t=args.t)
    if args.series != "auto":
        raise UsageError("only --series auto is supported")
    report = radu.verify(tup, rprime, u=int(args.mod))
    _emit(report.to_json_dict(), args.format)
    return _status_exit(report.status)


def _cmd_hecke_selfsim(args) -> int:
    rep = hecke.self_similarity_check(args.p, args.bound)
    _emit(rep.to_json_dict(), args.format)
    return EXIT_PASS if rep.holds else EXIT_FAIL


def _cmd_hecke_scan(args) -> int:
    # survey tool: per-prime evidence only, no aggregate pass/fail
    reports = hecke.scan_self_similarity(args.pmin, args.pmax, args.bound)
    _emit({"scan": [r.to_json_dict() for r in reports]}, args.format)
    return EXIT_PASS


def _cmd_hecke_family(args) -> int:
    claim = hecke.iterated_family(args.k)
    report = hecke.check_iterated_family(args.k, args.check)
    _emit(report.to_json_dict(), args.format)
    return _status_exit(report.status)


def _cmd_density(args) -> int:
    checkpoints = [int(x) for x in args.checkpoints.split(",") if x]
    if not checkpoints or min(checkpoints) < 1:
        raise UsageError("--checkpoints needs positive integers")
    points = lacunarity.density_curve(args.series, int(args.mod), checkpoints, r=args.r)
    if args.csv:
        with open(args.csv, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["X", "M", "r", "count", "delta_num", "delta_den"])
            for p in points:
                w.writerow([p.X, p.M, p.r, p.count, p.delta.numerator, p.delta.denominator])
    _emit({"series": args.series, "points": [p.to_json_dict() for p in points]}, args.format)
    return EXIT_PASS


# ---------------------------------------------------------------------------
# reproduce pipelines

def _pipeline_12(jobs: int) -> dict:
    steps = {}
    m1 = etaform.check_modularity(etaform.g31_eta())
    m2 = etaform.check_modularity(etaform.g32_eta())
    steps["form_conditions"] = m1.all_conditions and m2.all_conditions
    steps["weight"] = str(m1.meta.weight)
    steps["character"] = m1.meta.character_argument()
    bound = etaform.sturm_bound(3, 51, True)
    steps["sturm_bound"] = bound
    steps["sturm_bound_is_18"] = bound == 18
    sturm_rep = hecke.level51_hecke_check()
    steps["hecke_sturm_check"] = sturm_rep.to_json_dict()
    selfsim = hecke.self_similarity_check(17, 2000)
    steps["self_similarity"] = selfsim.to_json_dict()
    fam = {k: hecke.check_iterated_family(k, 1000) for k in (1, 2)}
    steps["families"] = {str(k): r.to_json_dict() for k, r in fam.items()}
    ok = (
        steps["form_conditions"]
        and bound == 18
        and sturm_rep.passed
        and selfsim.holds
        and all(r.passed for r in fam.values())
    )
    return {"status": PASS if ok else FAIL, "steps": steps}


def _radu_pipeline(r: dict, ts: tuple[int, int], residues: tuple, claim_of, series_name: str, jobs: int) -> dict:
    steps = {}
    reports = []
    for t in ts:
        tup = radu.RaduTuple(841, 3, 87, r, t)
        reports.append(radu.verify(tup, {}, u=2))
    steps["certificates"] = [rep.to_json_dict() for rep in reports]
    union = sorted(set(reports[0].pset) | set(reports[1].pset))
    steps["orbit_union"] = union
    steps["orbit_union_matches"] = tuple(union) == residues
    proven = all(rep.proven for rep in reports)
    nmax = 100
    ring = qs.MOD2
    top = max(claim_of(res).argument(nmax) for res in residues)
    source = partitions.build_named_series(series_name, top, ring)
    spot = []
    for res in residues:
        c = claim_of(res)
        spot.append(partitions.claim_check(c, source, nmax))
    steps["spot_checks_pass"] = all(s.passed for s in spot)
    steps["spot_check_nmax"] = nmax
    ok = proven and steps["orbit_union_matches"] and steps["spot_checks_pass"]
    status = PASS if ok else (FAIL if all(rep.status != "inapplicable" for rep in reports) else INAPPLICABLE)
    return {"status": status, "steps": steps}


def _pipeline_13(jobs: int) -> dict:
    return _radu_pipeline(
        {1: 4, 3: -1},
        (64, 93),
        partitions.B3_CERTIFIED_RESIDUES,
        lambda res: partitions.CongruenceClaim(A=841, B=res, modulus=2),
        "b3even",
        jobs,
    )


def _pipeline_14(jobs: int) -> dict:
    return _radu_pipeline(
        {1: -1, 3: 4},
        (414, 443),
        partitions.B21_CERTIFIED_RESIDUES,
        lambda res: partitions.CongruenceClaim(A=841, B=res, modulus=2),
        "b21mult4plus1",
        jobs,
    )


def _pipeline_15(jobs: int, checkpoints=lacunarity.DEFAULT_CHECKPOINTS) -> dict:
    steps = {}
    b6 = etaform.bk_eta(6)
    rep = etaform.check_modularity(b6)
    steps["b6_weight"] = str(rep.meta.weight)
    steps["b6_weight_ok"] = rep.meta.weight == 32
    steps["b6_conditions"] = rep.all_conditions
    steps["b6_character_factors"] = {str(p): e for p, e in sorted(rep.meta.character_factors.items())}
    holo = etaform.is_holomorphic(b6)
    steps["b6_holomorphic"] = holo.holomorphic
    steps["b6_order_at_36"] = str(etaform.cusp_order(b6, 36))
    curves = {}
    trend_ok = True
    for M in (2, 4, 8):
        pts = lacunarity.density_curve("b9odd", M, checkpoints)
        curves[f"b9odd_mod{M}"] = [p.to_json_dict() for p in pts]
        trend_ok &= pts[-1].delta > pts[0].delta
    steps["curves"] = curves
    steps["trend_ok"] = trend_ok
    ok = rep.all_conditions and holo.holomorphic and rep.meta.weight == 32 and trend_ok
    return {"status": PASS if ok else FAIL, "steps": steps}


def _pipeline_16(jobs: int, checkpoints=lacunarity.DEFAULT_CHECKPOINTS) -> dict:
    steps = {}
    ids = {i: partitions.verify_identity(i, 5000) for i in ("I11", "I14", "I15")}
    steps["identities"] = {i: r.to_json_dict() for i, r in ids.items()}
    # second summand of the b_9(4n) split: numerator indices {3, 9}
    cot3 = etaform.cotron_criterion({3: 6, 9: 1}, {1: 1}, p=3, a=1)
    cot2 = etaform.cotron_criterion({3: 6, 9: 1}, {1: 1}, p=2, a=1)
    steps["cotron_p3"] = cot3.to_json_dict()
    steps["cotron_p2"] = cot2.to_json_dict()
    steps["cotron_note"] = (
        "criterion as stated applies with p = 3 (the gcd prime); it does not "
        "apply with p = 2, so the mod-2 reading is flagged rather than assumed"
    )
    T = 5000
    th1 = qs.theta_series(qs.QuadraticForm(3, -1, 0), T, qs.MOD2)
    raw = lacunarity.theta_product_parity(qs.QuadraticForm(3, -1, 0), qs.QuadraticForm(54, -36, 6), T)
    target = partitions.eval_expr(
        partitions.MulE(partitions.EtaF(1, 2), partitions.EtaF(3, 6), partitions.EtaF(9, -2)),
        T, qs.MOD2,
    )
    theta_ok = qs.compare(qs.add(th1, raw), target).equal
    steps["theta_decomposition_ok"] = theta_ok
    pts = lacunarity.density_curve("b9mult4", 2, checkpoints)
    steps["curve_b9mult4_mod2"] = [p.to_json_dict() for p in pts]
    trend_ok = pts[-1].delta > pts[0].delta
    steps["trend_ok"] = trend_ok
    ok = all(r.passed for r in ids.values()) and cot3.holds and theta_ok and trend_ok
    return {"status": PASS if ok else FAIL, "steps": steps}


_PIPELINES = {"1.2": _pipeline_12, "1.3": _pipeline_13, "1.4": _pipeline_14,
              "1.5": _pipeline_15, "1.6": _pipeline_16}


def _cmd_reproduce(args) -> int:
    fn = _PIPELINES.get(args.pipeline)
    if fn is None:
        raise UsageError(f"unknown pipeline {args.pipeline!r}; choose from {sorted(_PIPELINES)}")
    result = fn(args.jobs)
    _emit({"pipeline": args.pipeline, **result}, args.format)
    return _status_exit(result["status"])


# ---------------------------------------------------------------------------
# parser

def build_parser() -> _Parser:
    parser = _Parser(prog="lregular", description=__doc__)
    parser.add_argument("--format", choices=("json", "plain"), default="json")
    parser.add_argument("--jobs", type=int, default=1, help="worker cap for independent checks")
    sub = parser.add_subparsers(dest="verb", required=True)

    p = sub.add_parser("expand", help="expand an eta product (q^d;q^d)^r ...")
    p.add_argument("--eta", required=True, help='exponent map "delta:r,delta:r"')
    p.add_argument("--terms", type=int, required=True)
    p.add_argument("--mod", default=None, help="power of two, or 'exact' (default)")
    p.set_defaults(fn=_cmd_expand)

    p = sub.add_parser("bseries", help="l-regular partition counts as a series")
    p.add_argument("--ell", type=int, required=True)
    p.add_argument("--terms", type=int, required=True)
    p.add_argument("--mod", default=None)
    p.set_defaults(fn=_cmd_bseries)

    p = sub.add_parser("identity", help="verify a catalog identity")
    p.add_argument("--id", default=None)
    p.add_argument("--terms", type=int, default=2000)
    p.add_argument("--list", action="store_true", help="print the catalog manifest")
    p.add_argument("--all", action="store_true", help="verify every catalog identity")
    p.set_defaults(fn=lambda a: _cmd_identity_all(a) if a.all else _cmd_identity(a))

    p = sub.add_parser("claim", help="check c(A n + B) == 0 (mod u) on a named series")
    p.add_argument("--series", required=True)
    p.add_argument("--A", type=int, required=True)
    p.add_argument("--B", type=int, required=True)
    p.add_argument("--mod", required=True)
    p.add_argument("--nmax", type=int, required=True)
    p.set_defaults(fn=_cmd_claim)

    p = sub.add_parser("etaform", help="eta-quotient metadata")
    esub = p.add_subparsers(dest="subverb", required=True)
    pi = esub.add_parser("inspect")
    pi.add_argument("--eta", required=True)
    pi.add_argument("--level", type=int, required=True)
    pi.set_defaults(fn=_cmd_etaform_inspect)

    p = sub.add_parser("sturm", help="Sturm bound for a weight/level")
    p.add_argument("--weight", type=int, required=True)
    p.add_argument("--level", type=int, required=True)
    p.add_argument("--different-character", action="store_true")
    p.set_defaults(fn=_cmd_sturm)

    p = sub.add_parser("radu", help="congruence certificates")
    rsub = p.add_subparsers(dest="subverb", required=True)
    pv = rsub.add_parser("verify")
    pv.add_argument("--m", type=int, required=True)
    pv.add_argument("--M", type=int, required=True)
    pv.add_argument("--N", type=int, required=True)
    pv.add_argument("--r", required=True, help='exponent map "delta:r,delta:r"')
    pv.add_argument("--t", type=int, required=True)
    pv.add_argument("--rprime", default=None)
    pv.add_argument("--mod", default="2")
    pv.add_argument("--series", default="auto")
    pv.set_defaults(fn=_cmd_radu_verify)

    p = sub.add_parser("hecke", help="Hecke self-similarity machinery")
    hsub = p.add_subparsers(dest="subverb", required=True)
    ps = hsub.add_parser("selfsim")
    ps.add_argument("--p", type=int, required=True)
    ps.add_argument("--bound", type=int, default=2000)
    ps.set_defaults(fn=_cmd_hecke_selfsim)
    pc = hsub.add_parser("scan")
    pc.add_argument("--pmin", type=int, default=5)
    pc.add_argument("--pmax", type=int, default=97)
    pc.add_argument("--bound", type=int, default=1000)
    pc.set_defaults(fn=_cmd_hecke_scan)
    pf = hsub.add_parser("family")
    pf.add_argument("--k", type=int, required=True)
    pf.add_argument("--check", type=int, default=1000)
    pf.set_defaults(fn=_cmd_hecke_family)

    p = sub.add_parser("density", help="coefficient-density curve")
    p.add_argument("--series", required=True)
    p.add_argument("--mod", required=True)
    p.add_argument("--checkpoints", default="1000,10000,100000,1000000")
    p.add_argument("--r", type=int, default=0)
    p.add_argument("--csv", default=None)
    p.set_defaults(fn=_cmd_density)

    p = sub.add_parser("reproduce", help="run a bundled end-to-end verification pipeline")
    p.add_argument("pipeline", choices=sorted(_PIPELINES))
    p.set_defaults(fn=_cmd_reproduce)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.fn(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ValueError, KeyError) as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def console_entry():  # pragma: no cover - thin wrapper
    sys.exit(main())
