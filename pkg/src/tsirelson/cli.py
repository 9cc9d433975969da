"""Command-line front end.

Exit codes: 0 success, 1 a checked property failed, 2 usage error.
Rationals are always printed as ``num/den``.
"""
from __future__ import annotations

import argparse
import csv
import io
import itertools
import json
import logging
import sys
from fractions import Fraction
from typing import Sequence

from . import conclab, dualnorm, embed, metrics, tnorm
from .embed import Host
from .metrics import Kind, MetricKind, format_point, parse_alphabet, parse_point
from .ratvec import SparseVector, VectorFormatError, format_rational as fr, parse_vector

log = logging.getLogger("tsirelson")

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _emit(out: str, payload: dict, text: str, csv_rows: list[list] | None = None) -> None:
    if out == "json":
        print(json.dumps(payload, indent=2, sort_keys=True))
    elif out == "csv":
        if csv_rows is None:
            raise UsageError("this command has no CSV form")
        buf = io.StringIO()
        csv.writer(buf, lineterminator="\n").writerows(csv_rows)
        sys.stdout.write(buf.getvalue())
    else:
        print(text)


def _space_value(space: Host, value: Fraction) -> str:
    return f"{fr(value)} (squared)" if space.squared else fr(value)


# commands ---------------------------------------------------------------


def cmd_norm(args) -> int:
    x = parse_vector(args.vector)
    value, cert = tnorm.t_norm(x)
    payload = {"vector": x.to_text(), "value": fr(value), "certificate": tnorm.functional_to_json(cert)}
    _emit(args.out, payload, f"{fr(value)}\ncertificate {tnorm.functional_to_text(cert)}",
          [["vector", "value"], [x.to_text(), fr(value)]])
    return EXIT_OK


def cmd_level_norm(args) -> int:
    x = parse_vector(args.vector)
    value = tnorm.t_norm_level(x, args.k)
    _emit(args.out, {"vector": x.to_text(), "k": args.k, "value": fr(value)}, fr(value),
          [["vector", "k", "value"], [x.to_text(), args.k, fr(value)]])
    return EXIT_OK


def cmd_dual_norm(args) -> int:
    x = parse_vector(args.vector)
    value, cert = dualnorm.tstar_norm(x)
    payload = {
        "vector": x.to_text(),
        "value": fr(value),
        "witness": cert.primal_witness.to_text(),
        "cuts": [tnorm.functional_to_json(f) for f in cert.constraint_set],
    }
    text = f"{fr(value)}\nwitness {cert.primal_witness.to_text() or '0'}\ncuts {len(cert.constraint_set)}"
    _emit(args.out, payload, text, [["vector", "value", "witness"], [x.to_text(), fr(value), cert.primal_witness.to_text()]])
    return EXIT_OK


def cmd_check_213(args) -> int:
    n = args.n
    if n < 1:
        raise UsageError("--n must be >= 1")
    positions = range(n, 2 * n)
    rows, worst, failed = [], None, []
    for signs in itertools.product((1, -1), repeat=n):
        pieces = [SparseVector(((p, Fraction(s)),)) for p, s in zip(positions, signs)]
        value, ok = dualnorm.check_block_inequality(pieces)
        rows.append((signs, value, ok))
        worst = value if worst is None else max(worst, value)
        if not ok:
            failed.append(signs)
    verdict = "OK" if not failed else "FAIL"
    text = f"n={n} patterns={len(rows)} value {fr(worst)} ≤ 2 {verdict}"
    for signs in failed:
        text += "\nviolating signs " + " ".join("+" if s > 0 else "-" for s in signs)
    payload = {"n": n, "patterns": len(rows), "max_value": fr(worst), "ok": not failed,
               "violations": [list(s) for s in failed]}
    table = [["signs", "value", "ok"]] + [["".join("+" if s > 0 else "-" for s in sg), fr(v), ok] for sg, v, ok in rows]
    _emit(args.out, payload, text, table)
    return EXIT_OK if not failed else EXIT_FAIL


def cmd_dist(args) -> int:
    m, n = parse_point(args.m), parse_point(args.n)
    value = metrics.DISTANCES[Kind(args.kind)](m, n)
    print(value)
    return EXIT_OK


def cmd_graph_check(args) -> int:
    alphabet = parse_alphabet(args.alphabet)
    rep = metrics.graph_check(Kind(args.kind), args.k, alphabet)
    text = (f"{rep.kind.value} k={rep.k} alphabet={rep.alphabet[0]}..{rep.alphabet[-1]} "
            f"pairs={rep.pairs} agree={rep.agree} excluded={len(rep.excluded)} "
            f"mismatches={len(rep.mismatches)} {'OK' if rep.ok else 'FAIL'}")
    for p, q, got, want in rep.mismatches[:10]:
        text += f"\nmismatch {format_point(p)} | {format_point(q)}: bfs {got} formula {want}"
    payload = {"kind": rep.kind.value, "k": rep.k, "pairs": rep.pairs, "agree": rep.agree,
               "excluded": [[format_point(p), format_point(q)] for p, q in rep.excluded],
               "mismatches": [[format_point(p), format_point(q), g, w] for p, q, g, w in rep.mismatches],
               "ok": rep.ok}
    _emit(args.out, payload, text, [["pairs", "agree", "excluded", "mismatches"],
                                    [rep.pairs, rep.agree, len(rep.excluded), len(rep.mismatches)]])
    return EXIT_OK if rep.ok else EXIT_FAIL


def cmd_enumerate(args) -> int:
    pts = metrics.enumerate_points(parse_alphabet(args.alphabet), args.k, up_to=args.up_to)
    _emit(args.out, {"points": [list(p) for p in pts]}, "\n".join(format_point(p) or "{}" for p in pts),
          [["point"]] + [[format_point(p)] for p in pts])
    return EXIT_OK


def _map_points(args) -> tuple[embed.NamedMap, list]:
    nm = embed.named_map(args.map, args.k)
    if nm.l2_only and Host(args.space) is not Host.L2:
        raise UsageError(f"map {args.map} carries an irrational scale and needs --space l2")
    points = metrics.enumerate_points(parse_alphabet(args.alphabet), args.k, up_to=nm.up_to)
    return nm, points


def cmd_embed(args) -> int:
    nm, points = _map_points(args)
    images = [(p, nm.f(p)) for p in points]
    payload = {"map": args.map, "k": args.k, "squared_scale": fr(nm.sq_scale),
               "images": [{"point": list(p), "vector": v.to_json()} for p, v in images]}
    text = "\n".join(f"{format_point(p) or '{}'}\t{v.to_text() or '0'}" for p, v in images)
    _emit(args.out, payload, text, [["point", "vector"]] + [[format_point(p), v.to_text()] for p, v in images])
    return EXIT_OK


def cmd_moduli(args) -> int:
    nm, points = _map_points(args)
    space = Host(args.space)
    kind = Kind(args.kind) if args.kind else nm.kind
    rep = embed.compute_moduli(nm.f, points, MetricKind(kind), space, nm.sq_scale)
    if args.out == "csv":
        sys.stdout.write(rep.to_csv())
    elif args.out == "json":
        print(json.dumps(rep.to_json(), indent=2, sort_keys=True))
    else:
        label = "squared " if rep.squared else ""
        lines = [f"finite-sample moduli ({label}values), {rep.pairs} pairs, lip {fr(rep.lip)}"]
        lines += [f"t={fr(t)} rho={fr(r)} omega={fr(w)}" for t, r, w in rep.rows()]
        print("\n".join(lines))
    return EXIT_OK if rep.sandwich_ok else EXIT_FAIL


def cmd_fundamental(args) -> int:
    space = Host(args.space)
    offset = args.k if args.offset is None else args.offset
    value = embed.fundamental_estimate(space, args.k, offset)
    _emit(args.out, {"space": space.value, "k": args.k, "offset": offset, "value": fr(value), "squared": space.squared},
          _space_value(space, value), [["space", "k", "offset", "value"], [space.value, args.k, offset, fr(value)]])
    return EXIT_OK


def cmd_psi(args) -> int:
    space = Host(args.space)
    value = embed.psi_estimate(space, args.k, args.N, budget=args.budget or embed.PSI_BUDGET)
    _emit(args.out, {"space": space.value, "k": args.k, "N": args.N, "value": fr(value), "squared": space.squared},
          _space_value(space, value), [["space", "k", "N", "value"], [space.value, args.k, args.N, fr(value)]])
    return EXIT_OK


def _load_table(path: str) -> dict:
    with open(path) as fh:
        raw = json.load(fh)
    return {parse_point(p): parse_vector(v) for p, v in raw.items()}


def cmd_concentrate(args) -> int:
    cfg = {}
    if args.config:
        with open(args.config) as fh:
            cfg = json.load(fh)
    family_name = cfg.get("family", args.family)
    space = Host(cfg.get("space", args.space))
    k = int(cfg.get("k", args.k))
    if "alphabet" in cfg:
        lo, hi = cfg["alphabet"]
        alphabet = tuple(range(int(lo), int(hi) + 1))
    elif args.alphabet:
        alphabet = parse_alphabet(args.alphabet)
    else:
        # start at 2k so that 2k-term differences are admissible
        alphabet = tuple(range(2 * k, 2 * k + 8))
    subsize = int(cfg.get("subsize", args.subsize or 2 * k))
    mode = cfg.get("mode", args.mode)
    if family_name == "custom":
        if not args.table:
            raise UsageError("--family custom needs --table")
        family = conclab.custom_family(_load_table(args.table), space)
    else:
        family = conclab.get_family(family_name, space)
    budget = args.budget or conclab.SEARCH_BUDGET
    rep = conclab.concentration_check(family, k, alphabet, subsize, mode, Kind(args.kind), budget)
    label = " (squared)" if rep.squared else ""
    text = (f"{rep.family} -> {space.value}, k={k}, alphabet {alphabet[0]}..{alphabet[-1]}, mode {mode}{label}\n"
            f"lip {fr(rep.lip)}\nfull diameter {fr(rep.full_diameter)}\n"
            f"best sub-alphabet {format_point(rep.best_subalphabet)}\nsub diameter {fr(rep.sub_diameter)}\n"
            f"bound {fr(rep.bound_5lip)}\n{'OK' if rep.holds else 'FAIL'}")
    j = rep.to_json()
    _emit(args.out, j, text, [list(j), [v if not isinstance(v, list) else " ".join(map(str, v)) for v in j.values()]])
    return EXIT_OK if rep.holds else EXIT_FAIL


def cmd_contrast(args) -> int:
    ks = [int(t) for t in args.ks.split(",") if t.strip()]
    rows = conclab.contrast_experiment(ks, args.tstar_max, args.l2_max)
    if args.out == "json":
        print(json.dumps([{c: (fr(getattr(r, c)) if isinstance(getattr(r, c), Fraction) else getattr(r, c))
                           for c in conclab.CONTRAST_COLUMNS} for r in rows], indent=2))
    else:
        sys.stdout.write(conclab.contrast_csv(rows))
    ok = all(r.tstar_ratio is None or r.tstar_ratio <= 5 for r in rows)
    return EXIT_OK if ok else EXIT_FAIL


# parser -----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="tsirelson", description="Exact computations in Tsirelson's space and its dual.")
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    def command(name, func, help_text, out=True):
        p = sub.add_parser(name, help=help_text)
        p.set_defaults(func=func)
        if out:
            p.add_argument("--out", choices=("text", "json", "csv"), default="text")
        return p

    spaces = [h.value for h in Host]
    kinds = [k.value for k in Kind]

    p = command("norm", cmd_norm, "norm in T with a norming functional")
    p.add_argument("vector", help='e.g. "3:1 4:1 5:1" or a JSON list')
    p = command("level-norm", cmd_level_norm, "inductive norm ||x||_k")
    p.add_argument("vector")
    p.add_argument("--k", type=int, required=True)
    p = command("dual-norm", cmd_dual_norm, "norm in T* with a primal witness")
    p.add_argument("vector")
    p = command("check-213", cmd_check_213, "sum of n signed singleton functionals from e*_n has norm <= 2")
    p.add_argument("--n", type=int, required=True)

    p = command("dist", cmd_dist, "distance between two finite sets", out=False)
    p.add_argument("--kind", choices=kinds, required=True)
    p.add_argument("m", help="comma-separated increasing integers, empty for the empty set")
    p.add_argument("n")
    p = command("graph-check", cmd_graph_check, "BFS graph distance against the closed form")
    p.add_argument("--kind", choices=("tree", "hamming", "johnson"), required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--alphabet", required=True, help="lo..hi inclusive")
    p = command("enumerate", cmd_enumerate, "list [alphabet]^k or [alphabet]^{<=k}")
    p.add_argument("--alphabet", required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--up-to", action="store_true")

    for name, func, help_text in (("embed", cmd_embed, "images of an embedding map"),
                                  ("moduli", cmd_moduli, "finite-sample compression/expansion moduli")):
        p = command(name, func, help_text)
        p.add_argument("--map", choices=embed.MAP_NAMES, required=True)
        p.add_argument("--space", choices=spaces, default="l2")
        p.add_argument("--k", type=int, required=True)
        p.add_argument("--alphabet", required=True)
        if name == "moduli":
            p.add_argument("--kind", choices=kinds, help="source metric (defaults to the map's own)")

    p = command("fundamental", cmd_fundamental, "host norm of k consecutive basis vectors")
    p.add_argument("--space", choices=spaces, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--offset", type=int)
    p = command("psi", cmd_psi, "minimum over supports and signs of a k-term signed sum")
    p.add_argument("--space", choices=spaces, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--budget", type=int)

    p = command("concentrate", cmd_concentrate, "sub-alphabet search against the 5*Lip bound")
    p.add_argument("--family", default="summing", choices=sorted(conclab.FAMILIES) + ["custom"])
    p.add_argument("--table", help="JSON object mapping points to vectors, for --family custom")
    p.add_argument("--space", choices=spaces, default="Tstar")
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--alphabet")
    p.add_argument("--subsize", type=int)
    p.add_argument("--mode", choices=("exhaustive", "greedy"), default="exhaustive")
    p.add_argument("--kind", choices=("johnson", "hamming"), default="johnson")
    p.add_argument("--budget", type=int)
    p.add_argument("--config", help="JSON {family, k, alphabet: [lo, hi], subsize, mode, space}")

    p = command("contrast", cmd_contrast, "T* versus l2 diameter/Lip table")
    p.add_argument("--ks", default="1,2,3,4")
    p.add_argument("--tstar-max", type=int, default=4)
    p.add_argument("--l2-max", type=int, default=8)
    return parser


def run(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, stream=sys.stderr,
                        format="%(name)s: %(message)s")
    log.info("running %s", args.command)
    try:
        return args.func(args)
    except (UsageError, VectorFormatError, ValueError, LookupError, OSError, conclab.BudgetExceeded,
            embed.BudgetExceeded, dualnorm.PreconditionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main() -> None:
    sys.exit(run())
