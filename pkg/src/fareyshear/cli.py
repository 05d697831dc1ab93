"""Command-line interface: ``fareyshear <command> ...``.

Exit status 0 on success, 2 on invalid input, 3 when a numeric
consistency check fails.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import formats
from .errors import NumericError, ValidationError
from .farey import DEPTH_GUARD, Edge, FareyVertex, tessellation_to_depth
from .geom import DEFAULT_PREC
from .qsdiag import HEAD_TAIL_CUTOFF, SHEAR_CUTOFF, degeneration_scan, estimate_qs_constant
from .render import render
from .shear import check_condition, develop, shear_from_map

EXIT_OK, EXIT_INVALID, EXIT_NUMERIC = 0, 2, 3

DISCLAIMER = ("M is the worst ratio over the examined fans and windows only "
              "(tips up to the given depth, |m| + k <= window); it bounds the "
              "optimal constant from below.")


def _pair(v: FareyVertex) -> list:
    return [v.p, v.q]


def _edge(e: Edge) -> list:
    return [_pair(e.a), _pair(e.b)]


def _depth(text: str) -> int:
    d = int(text)
    if not 0 <= d <= DEPTH_GUARD:
        raise argparse.ArgumentTypeError(f"depth must lie in [0, {DEPTH_GUARD}]")
    return d


def _positive(text: str) -> int:
    n = int(text)
    if n < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return n


def _nonnegative(text: str) -> int:
    n = int(text)
    if n < 0:
        raise argparse.ArgumentTypeError("must be a nonnegative integer")
    return n


# --------------------------------------------------------------------------
# commands


def cmd_tessellate(args):
    tess = tessellation_to_depth(args.depth)
    if args.format == "svg":
        Path(args.out).write_text(render(tess.edges, lambda v: v.value, "disk"),
                                  encoding="utf-8", newline="\n")
        return
    doc = {
        "depth": tess.depth,
        "triangles": len(tess.triangles),
        "vertices": len(tess.vertices),
        "edges": [_edge(e) for e in tess.sorted_edges()],
    }
    formats.dump_json(args.out, doc)


def cmd_develop(args):
    s, _ = formats.read_shears(args.shears)
    dm = develop(s, args.depth, args.precision)
    formats.write_vertex_map(args.out, dm)


def cmd_shear_of(args):
    dm = formats.read_vertex_map(args.map, check_order=False)
    formats.require_coverage(dm, args.depth)
    tess = tessellation_to_depth(args.depth)
    table = {e: shear_from_map(dm, e, tess, prec=dm.precision) for e in tess.interior_edges()}
    formats.write_shears(args.out, table, dm.precision)


def cmd_check(args):
    s, prec = formats.read_shears(args.shears)
    prec = args.precision or prec
    rep = check_condition(s, args.depth, args.window, prec)
    fmt = lambda x: formats.format_real(x, prec)  # noqa: E731
    w = rep.witness
    doc = {
        "M": fmt(rep.M),
        "witness": None if w is None else
        {"tip": _pair(w.tip), "m": w.m, "k": w.k, "ratio": fmt(w.worst_ratio)},
        "depth": rep.depth,
        "window": rep.window,
        "fans_examined": rep.fans_examined,
        "fans": [{"tip": _pair(f.tip), "m": f.m, "k": f.k, "ratio": fmt(f.worst_ratio)}
                 for f in rep.fans if f.worst_ratio != 1],
        "disclaimer": DISCLAIMER,
    }
    if args.scan:
        scan = degeneration_scan(s, args.depth, args.window, args.shear_cutoff,
                                 args.ratio_cutoff, prec)
        doc["degeneration"] = {"mode": scan.mode, "flags": list(scan.flags),
                               "head_tail": fmt(scan.head_tail),
                               "max_abs_shear": fmt(scan.max_abs_shear)}
    formats.dump_json(args.out, doc)


def cmd_estimate_m(args):
    s, prec = formats.read_shears(args.shears)
    prec = args.precision or prec
    dm = develop(s, args.depth, prec)
    est = estimate_qs_constant(dm, seed=args.seed, samples=args.samples)
    fmt = lambda x: formats.format_real(x, prec)  # noqa: E731
    witness = None
    if est.witness is not None:
        quad, img = est.witness
        witness = {"domain": [_pair(v) for v in quad], "image": [fmt(x) for x in img]}
    doc = {
        "M_observed": fmt(est.M_observed),
        "samples": est.samples,
        "seed": est.seed,
        "method": est.method,
        "depth": args.depth,
        "witness": witness,
    }
    formats.dump_json(args.out, doc)


def cmd_render(args):
    dm = formats.read_vertex_map(args.map)
    if args.depth is not None and args.depth != dm.depth:
        raise ValidationError(f"--depth {args.depth} does not match file depth {dm.depth}")
    formats.require_coverage(dm, dm.depth)
    tess = tessellation_to_depth(dm.depth)
    Path(args.out).write_text(render(tess.edges, dm, args.model),
                              encoding="utf-8", newline="\n")


# --------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="fareyshear",
                                description="Shears on the Farey tessellation.")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("tessellate", help="write the Farey tessellation to a depth")
    c.add_argument("--depth", type=_depth, required=True)
    c.add_argument("--format", choices=("json", "svg"), default="json")
    c.add_argument("--out", required=True)
    c.set_defaults(func=cmd_tessellate)

    c = sub.add_parser("develop", help="develop a shear file into a vertex map")
    c.add_argument("--shears", required=True)
    c.add_argument("--depth", type=_depth, required=True)
    c.add_argument("--precision", type=_positive, default=DEFAULT_PREC)
    c.add_argument("--out", required=True)
    c.set_defaults(func=cmd_develop)

    c = sub.add_parser("shear-of", help="extract shears from a vertex map")
    c.add_argument("--map", required=True)
    c.add_argument("--depth", type=_depth, required=True)
    c.add_argument("--out", required=True)
    c.set_defaults(func=cmd_shear_of)

    c = sub.add_parser("check", help="evaluate the fan condition")
    c.add_argument("--shears", required=True)
    c.add_argument("--depth", type=_depth, required=True)
    c.add_argument("--window", type=_nonnegative, required=True)
    c.add_argument("--precision", type=_positive, default=None)
    c.add_argument("--scan", action="store_true", help="add a degeneration scan")
    c.add_argument("--shear-cutoff", type=float, default=SHEAR_CUTOFF)
    c.add_argument("--ratio-cutoff", type=float, default=HEAD_TAIL_CUTOFF)
    c.add_argument("--out", required=True)
    c.set_defaults(func=cmd_check)

    c = sub.add_parser("estimate-m", help="sample the quasisymmetry constant")
    c.add_argument("--shears", required=True)
    c.add_argument("--depth", type=_depth, required=True)
    c.add_argument("--samples", type=_positive, default=10_000)
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--precision", type=_positive, default=None)
    c.add_argument("--out", required=True)
    c.set_defaults(func=cmd_estimate_m)

    c = sub.add_parser("render", help="draw a vertex map as SVG")
    c.add_argument("--map", required=True)
    c.add_argument("--model", choices=("disk", "halfplane"), default="disk")
    c.add_argument("--depth", type=_depth, default=None,
                   help="expected depth; must match the file")
    c.add_argument("--out", required=True)
    c.set_defaults(func=cmd_render)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        args.func(args)
    except ValidationError as exc:
        print(f"fareyshear: error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except OSError as exc:
        print(f"fareyshear: error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except NumericError as exc:
        print(f"fareyshear: numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
