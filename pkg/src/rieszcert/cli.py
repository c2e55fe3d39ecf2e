"""Command-line entry point: certify, scan, ratio, extremize, stationary, report."""
from __future__ import annotations

import argparse
import json
import math
import os
import sys

from . import __version__
from .catalog import claim_catalog, claim_sort_key, default_grid, get_claim, pair_matches
from .certifier import (CertifierConfig, certificates_json, certify, exit_status,
                        stationary_points, verify_all)
from .errors import CeilingViolation, DomainError, NumericError, ZeroFunction
from .extremal import SWEEP_COLUMNS, maximize_ratio, sweep
from .functions import ExponentPair
from . import torus

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_INCONCLUSIVE = 2
EXIT_USAGE = 64


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _float_list(text):
    try:
        return [float(x) for x in text.replace(",", " ").split()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a list of numbers, got {text!r}")


def _positive_int(text):
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}")
    if v < 0:
        raise argparse.ArgumentTypeError(f"expected a nonnegative integer, got {text!r}")
    return v


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="rieszcert", description=__doc__)
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = ap.add_subparsers(dest="command", parser_class=_Parser)

    c = sub.add_parser("certify", help="certify catalog claims")
    c.add_argument("--claim", help="claim id (default: every claim)")
    c.add_argument("--p", type=float)
    g = c.add_mutually_exclusive_group()
    g.add_argument("--s", type=float)
    g.add_argument("--conjugate", action="store_true", help="use s = p/(p-1) (the default when --s is absent)")
    c.add_argument("--max-depth", type=_positive_int, default=40)
    c.add_argument("--max-boxes", type=_positive_int, default=10**7)
    c.add_argument("--margin", type=float, default=0.0, help="strictness margin")
    c.add_argument("--samples", type=_positive_int, default=1, help="probe points per box")
    c.add_argument("--workers", type=_positive_int, default=1)
    c.add_argument("--expect", choices=("proved", "refuted"))
    c.add_argument("--out", help="certificate JSON file")
    c.add_argument("--stable-output", action="store_true")
    c.add_argument("--list", action="store_true", help="list claims and exit")

    s = sub.add_parser("scan", help="ratio validation on random polynomials")
    s.add_argument("--p-list", type=_float_list, required=True)
    s.add_argument("--trials", type=_positive_int, default=1000)
    s.add_argument("--degree", type=_positive_int, default=16)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--grid", type=_positive_int)
    s.add_argument("--out", help="CSV file")

    r = sub.add_parser("ratio", help="norm report for a coefficient file")
    r.add_argument("--coeffs", required=True)
    r.add_argument("--p", type=float, required=True)
    g = r.add_mutually_exclusive_group()
    g.add_argument("--s", type=float)
    g.add_argument("--conjugate", action="store_true")
    r.add_argument("--grid", type=_positive_int)

    e = sub.add_parser("extremize", help="search for large ratios")
    e.add_argument("--p", type=float)
    e.add_argument("--p-list", type=_float_list, help="sweep over several p instead")
    e.add_argument("--direction", choices=("fwd", "rev", "forward", "reverse"))
    e.add_argument("--degree", type=_positive_int, default=16)
    e.add_argument("--budget", type=_positive_int, default=20000)
    e.add_argument("--restarts", type=_positive_int, default=8)
    e.add_argument("--seed", type=int, default=0)
    e.add_argument("--out", help="best polynomial (JSON) or sweep table (CSV)")

    t = sub.add_parser("stationary", help="roots of the stationary equation")
    t.add_argument("--p", type=float, required=True)
    t.add_argument("--s", type=float)
    t.add_argument("--tol", type=float, default=1e-12)

    rep = sub.add_parser("report", help="summarize certificate files")
    rep.add_argument("--in", dest="indir", required=True)
    return ap


def _pair(p, s, conjugate=False):
    if p is None:
        return None
    try:
        return ExponentPair.conjugate(p) if (s is None or conjugate) else ExponentPair(p, s)
    except DomainError as exc:
        raise UsageError(str(exc))


def _write(path, text):
    if path:
        with open(path, "w") as fh:
            fh.write(text)
    else:
        print(text)


def cmd_certify(args) -> int:
    if args.list:
        for c in sorted(claim_catalog(), key=lambda c: claim_sort_key(c.id)):
            print(f"{c.id:5s} {c.params:8s} {c.fn_id:22s} {c.assertion:14s} {c.citation}")
        return EXIT_OK
    config = CertifierConfig(max_depth=max(1, args.max_depth), max_boxes=args.max_boxes,
                             strictness_margin=args.margin, midpoint_sampling=max(1, args.samples),
                             workers=max(1, args.workers))
    pair = _pair(args.p, args.s, args.conjugate)
    if args.claim:
        try:
            claim = get_claim(args.claim)
        except KeyError:
            raise UsageError(f"unknown claim {args.claim!r}")
        if claim.parameterized:
            pairs = [pair] if pair else [q for q in default_grid() if pair_matches(claim, q)]
            certs = [certify(claim, config, q) for q in pairs]
        else:
            certs = [certify(claim, config, pair if claim.params == "fixed" else None)]
    else:
        grid = [pair] if pair else default_grid()
        certs = verify_all(claim_catalog(), grid, config)
    if args.expect:
        for c in certs:
            c.expect = args.expect
    _write(args.out, certificates_json(certs, stable=args.stable_output))
    for c in certs:
        where = "" if c.p is None else f" p={c.p:g} s={c.s:.6g}"
        print(f"{c.claim_id}{where}: {c.verdict} (expected {c.expect}, {c.boxes_processed} boxes)",
              file=sys.stderr)
    return exit_status(certs)


def cmd_scan(args) -> int:
    rows = torus.scan_ratios(args.p_list, args.trials, args.degree, args.seed, args.grid)
    if args.out:
        torus.write_csv(rows, args.out)
    worst = {}
    for r in rows:
        if r["margin"] is not None:
            worst[r["p"]] = min(worst.get(r["p"], math.inf), r["margin"])
    for p, m in worst.items():
        print(f"p={p:g}: {args.trials} trials, smallest margin {m:.3e}")
    return EXIT_VIOLATION if any(m < -1e-9 for m in worst.values()) else EXIT_OK


def cmd_ratio(args) -> int:
    try:
        f = torus.load(args.coeffs)
    except (OSError, KeyError, ValueError) as exc:
        raise UsageError(f"cannot read {args.coeffs}: {exc}")
    rep = torus.norm_report(f, _pair(args.p, args.s, args.conjugate), args.grid)
    print(json.dumps(rep.as_dict(), indent=2))
    if rep.margin is not None and rep.margin < -1e-9 and ExponentPair(rep.p, rep.s).is_conjugate:
        return EXIT_VIOLATION
    return EXIT_OK


def cmd_extremize(args) -> int:
    if args.p_list:
        rows = sweep(args.p_list, args.degree, args.budget, args.seed, args.restarts)
        if args.out:
            torus.write_csv(rows, args.out, SWEEP_COLUMNS)
        for r in rows:
            print(json.dumps(r))
        return EXIT_VIOLATION if any(r["error"] and "CeilingViolation" in r["error"] for r in rows) else EXIT_OK
    if args.p is None:
        raise UsageError("extremize needs --p or --p-list")
    direction = {"fwd": "forward", "rev": "reverse"}.get(args.direction, args.direction)
    if direction is None:
        direction = "forward" if args.p <= 2 else "reverse"
    state = maximize_ratio(_pair(args.p, None), args.degree, direction, args.budget,
                           args.seed, args.restarts)
    if args.out:
        torus.save(state.best, args.out)
    print(json.dumps({"p": args.p, "direction": direction, "best_ratio": state.best_ratio,
                      "constant": state.constant, "fraction": state.fraction,
                      "evaluations": state.iterations, "improvements": len(state.history)}))
    return EXIT_OK


def cmd_stationary(args) -> int:
    pair = _pair(args.p, args.s)
    for pt in stationary_points(pair, tol=args.tol):
        r = pt["root"]
        fe = pt["big_F_enclosure"]
        print(f"r in [{r.lo!r}, {r.hi!r}]  F(mid) = {pt['big_F']:.12g}  F in [{fe.lo:.12g}, {fe.hi:.12g}]")
    return EXIT_OK


def _load_certificates(indir):
    certs = []
    for name in sorted(os.listdir(indir)):
        if not name.endswith(".json"):
            continue
        with open(os.path.join(indir, name)) as fh:
            data = json.load(fh)
        for obj in data if isinstance(data, list) else [data]:
            if isinstance(obj, dict) and "claim_id" in obj and "verdict" in obj:
                certs.append(obj)
    return certs


def render_report(certs) -> str:
    lines = [f"{'claim':6s} {'p':>7s} {'s':>9s} {'verdict':13s} {'expected':9s} citation"]
    for c in sorted(certs, key=lambda c: (claim_sort_key(c["claim_id"]), c.get("p") or -1, c.get("s") or -1)):
        try:
            cite = get_claim(c["claim_id"]).citation
        except KeyError:
            cite = "(not in catalog)"
        p = "" if c.get("p") is None else f"{c['p']:.4g}"
        s = "" if c.get("s") is None else f"{c['s']:.6g}"
        lines.append(f"{c['claim_id']:6s} {p:>7s} {s:>9s} {c['verdict']:13s} {c.get('expect', ''):9s} {cite}")
    counts = {}
    for c in certs:
        counts[c["verdict"]] = counts.get(c["verdict"], 0) + 1
    lines.append("")
    lines.append(", ".join(f"{k}: {v}" for k, v in sorted(counts.items())) or "no certificates")
    return "\n".join(lines)


def cmd_report(args) -> int:
    if not os.path.isdir(args.indir):
        raise UsageError(f"not a directory: {args.indir}")
    certs = _load_certificates(args.indir)
    print(render_report(certs))
    if any(c["verdict"] == "refuted" and c.get("expect") != "refuted" for c in certs):
        return EXIT_VIOLATION
    if any(c["verdict"] == "inconclusive" for c in certs):
        return EXIT_INCONCLUSIVE
    return EXIT_OK


COMMANDS = {"certify": cmd_certify, "scan": cmd_scan, "ratio": cmd_ratio,
            "extremize": cmd_extremize, "stationary": cmd_stationary, "report": cmd_report}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command is None:
        parser.print_usage(sys.stderr)
        return EXIT_USAGE
    try:
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"rieszcert {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except CeilingViolation as exc:
        print(f"rieszcert {args.command}: sharp constant exceeded: {exc}", file=sys.stderr)
        return EXIT_VIOLATION
    except (ZeroFunction, NumericError) as exc:
        print(f"rieszcert {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
