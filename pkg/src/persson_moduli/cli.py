"""Command-line interface.

Every subcommand prints one JSON document on stdout.  Exit codes: 0 on
success, 1 on bad input, 2 on a stability violation under ``--strict``
and 3 when a search limit is hit.
"""

import argparse
import json
import sys
from datetime import datetime, timezone
from fractions import Fraction

from . import __version__
from . import cover, degeneration, gf2core as gf, invariants, lattice, polytope, stability
from .report import (InputError, building_data, eigen_json, group_counts, parse_arrangement,
                     render_figures, run_report, stability_violated, tiling_class_to_json, tilings)

EXIT_OK, EXIT_INPUT, EXIT_STABILITY, EXIT_LIMIT = 0, 1, 2, 3
DEFAULT_INPUT = "persson-generic"


def _default(o):
    if isinstance(o, (Fraction, stability.Eps)):
        return str(o)
    if isinstance(o, tuple):
        return list(o)
    raise TypeError(f"cannot serialise {type(o).__name__}")


def emit(body, args):
    if getattr(args, "with_meta", False):
        body = {"body": body, "meta": {"generated": datetime.now(timezone.utc).isoformat(),
                                       "version": __version__}}
    text = json.dumps(body, sort_keys=True, indent=2, default=_default)
    out = getattr(args, "out", None)
    if out:
        with open(out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def _with_weights(arr, args):
    if args.weights:
        try:
            return arr.with_weights(args.weights)
        except ValueError as exc:
            raise InputError(f"--weights: {exc}") from None
    return arr


# subcommands --------------------------------------------------------------


def cmd_invariants(args):
    return invariants.cover_invariants(_datum(args)).to_json()


def cmd_eigen(args):
    data = _datum(args)
    dec = invariants.eigen_decomposition(data)
    body = {"eigen": eigen_json(data), "total": invariants.eigen_totals(dec).as_list()}
    if data.m == 5:
        anti = [chi for chi in dec if chi[-1] == 1]
        body["antiInvariantTotal"] = invariants.eigen_totals(dec, anti).as_list()
    return body


def cmd_building_data(args):
    return _datum(args).to_json()


def cmd_lift(args):
    data = _datum(args)
    lifts = cover.all_lifts(data)
    return {"count": len(lifts),
            "lifts": [{"partition": [[gf.bitstring(a), gf.bitstring(b)] for a, b in part.pairs],
                       "mask": mask,
                       "labels": [gf.bitstring(ln.label) for ln in lifted.branch.lines]}
                      for part, mask, lifted in lifts]}


def cmd_stability(args):
    arr, _ = parse_arrangement(args.input)
    v = stability.is_log_canonical(_with_weights(arr, args))
    args._violation = v.verdict != stability.LC
    return v.to_json()


def cmd_git(args):
    arr, _ = parse_arrangement(args.input)
    v = stability.is_git_semistable(_with_weights(arr, args))
    args._violation = v.verdict == stability.UNSTABLE
    return v.to_json()


def cmd_walls(args):
    b = stability.parse_weights(args.weights, args.n)
    if args.to:
        b2 = stability.parse_weights(args.to, args.n)
        crossed, touched = stability.crossed_walls(b, b2, args.d)
        return {"crossed": [w.to_json() for w in crossed], "touched": [w.to_json() for w in touched]}
    walls = stability.walls_containing(b, args.d)
    return {"count": len(walls), "walls": [w.to_json() for w in walls]}


def cmd_chambers(args):
    b1 = stability.parse_weights(args.weights, args.n)
    b2 = stability.parse_weights(args.other, args.n)
    try:
        return {"sameChamber": stability.same_chamber(b1, b2, args.d)}
    except stability.OnWall as exc:
        raise InputError(f"{exc}: " + ", ".join(f"x{''.join(map(str, w.I))}={w.k}" for w in exc.walls))


def cmd_tilings(args):
    classes = tilings(args.d, args.n, args.b, use_cache=not args.no_cache)
    return {"d": args.d, "n": args.n, "b": args.b, "classes": [tiling_class_to_json(c) for c in classes]}


def cmd_classify(args):
    if args.tiling:
        from .report import load_json
        ts = [polytope.Tiling.from_json(load_json(args.tiling))]
    else:
        ts = [c.tiling for c in tilings(3, 8, "1/2", use_cache=not args.no_cache)]
    out = []
    for t in ts:
        dt = degeneration.classify_tiling(t)
        if args.prime and dt.tag == degeneration.TYPE_II:
            dt = degeneration.type_ii_prime(dt)
        out.append({"tiling": t.to_json(), "degeneration": dt.to_json(),
                    "components": degeneration.component_cover_profile(dt)})
    return {"classified": out}


def cmd_intermediates(args):
    return cover.intermediate_census(_datum(args))


def cmd_lattice(args):
    if args.involution:
        L, M = lattice.double_cover_involution()
        fixed, anti = lattice.fixed_and_antifixed(L, M)
        return {"fixed": lattice.lattice_invariants(fixed).to_json(),
                "antiFixed": lattice.lattice_invariants(anti).to_json()}
    try:
        L = lattice.build(args.expr)
    except ValueError as exc:
        raise InputError(f"--expr: {exc}") from None
    return lattice.lattice_invariants(L).to_json()


def cmd_group(args):
    return group_counts([ln.label for ln in _datum(args).branch.lines])


def cmd_torelli_index(args):
    labels = [ln.label for ln in _datum(args).branch.lines]
    return {"torelliIndex": gf.torelli_index(labels)}


def cmd_report(args):
    body = run_report(args.input, with_tilings=args.tilings)
    args._violation = stability_violated(body)
    if args.out or args.figures:
        prefix = args.figures or args.out.rsplit(".", 1)[0]
        body["figures"] = render_figures(body, prefix)
    return body


def _datum(args):
    if getattr(args, "zl", False):
        return cover.zl_building_data()
    return building_data(args.input)


# parser -------------------------------------------------------------------


def build_parser():
    p = argparse.ArgumentParser(prog="persson-moduli", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, fn, inp=True, weights=False, zl=False):
        sp = sub.add_parser(name)
        sp.set_defaults(func=fn)
        if inp:
            sp.add_argument("input", nargs="?", default=DEFAULT_INPUT,
                            help="arrangement JSON file or a builtin name (default: persson-generic)")
        if weights:
            sp.add_argument("--weights", help="comma separated rationals, or one value for all lines")
            sp.add_argument("--strict", action="store_true", help="exit with status 2 on a violation")
        if zl:
            sp.add_argument("--zl", action="store_true", help="use the five-coordinate lifted datum")
        sp.add_argument("--out", help="write JSON here instead of stdout")
        sp.add_argument("--with-meta", action="store_true", help="wrap the output with run metadata")
        return sp

    add("invariants", cmd_invariants, zl=True)
    add("eigen", cmd_eigen, zl=True)
    add("building-data", cmd_building_data, zl=True)
    add("lift", cmd_lift)
    add("stability", cmd_stability, weights=True)
    add("git", cmd_git, weights=True)
    sp = add("walls", cmd_walls, inp=False)
    sp.add_argument("--weights", required=True)
    sp.add_argument("--to", help="second endpoint: report walls crossed by the segment")
    sp.add_argument("--d", type=int, default=3)
    sp.add_argument("--n", type=int, default=8)
    sp = add("chambers", cmd_chambers, inp=False)
    sp.add_argument("--weights", required=True)
    sp.add_argument("--other", required=True)
    sp.add_argument("--d", type=int, default=3)
    sp.add_argument("--n", type=int, default=8)
    sp = add("tilings", cmd_tilings, inp=False)
    sp.add_argument("--d", type=int, default=3)
    sp.add_argument("--n", type=int, default=8)
    sp.add_argument("--b", default="1/2")
    sp.add_argument("--no-cache", action="store_true")
    sp = add("classify", cmd_classify, inp=False)
    sp.add_argument("--tiling", help="tiling JSON file (default: all enumerated classes)")
    sp.add_argument("--prime", action="store_true", help="mark Type II as the perturbed-weight variant")
    sp.add_argument("--no-cache", action="store_true")
    add("intermediates", cmd_intermediates, zl=True)
    sp = add("lattice", cmd_lattice, inp=False)
    sp.add_argument("--expr", default="U^7 + E8(-1)^2")
    sp.add_argument("--involution", action="store_true",
                    help="fixed and anti-fixed parts of the double cover involution")
    add("group", cmd_group)
    add("torelli-index", cmd_torelli_index)
    sp = add("report", cmd_report, weights=False)
    sp.add_argument("--tilings", action="store_true", help="include tiling classification")
    sp.add_argument("--strict", action="store_true")
    sp.add_argument("--figures", help="file prefix for PNG figures")
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    args._violation = False
    try:
        body = args.func(args)
    except polytope.SearchLimitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_LIMIT
    except (InputError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    emit(body, args)
    if getattr(args, "strict", False) and args._violation:
        return EXIT_STABILITY
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
