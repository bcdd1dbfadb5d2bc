"""Command-line entry point wiring the library to files and images.

Subcommands: word, poly, cusps, ray, classify, render slice, render
limitset.  Exit status 0 on success, 1 on validation errors (including
usage), 2 on numeric failures.  All floating output uses 17 significant
digits so values round-trip exactly.
"""

from __future__ import annotations

import argparse
import os
import sys

from .errors import RileySliceError, ValidationError
from .farey import Slope
from .limitset import limit_set, rasterize
from .moebius import PARABOLIC_ORDERS, ConeOrders
from .pleating import trace_ray
from .raster import Viewport
from .slices import SlicePoint, classify_point, cusp_cloud, render_slice
from .traces import farey_polynomial_direct, farey_polynomial_recursive
from .farey import farey_word

__all__ = ["main", "run"]


def _fmt(x):
    if isinstance(x, float):
        return format(x, ".17g")
    return str(x)


def _json(obj, indent=0):
    """Tiny JSON writer with .17g floats (stdlib json hides float formatting)."""
    pad = " " * indent
    if isinstance(obj, dict):
        inner = ", ".join(f'"{k}": {_json(v)}' for k, v in obj.items())
        return pad + "{" + inner + "}"
    if isinstance(obj, (list, tuple)):
        return "[" + ", ".join(_json(v) for v in obj) + "]"
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if isinstance(obj, float):
        return format(obj, ".17g")
    if isinstance(obj, int):
        return str(obj)
    if obj is None:
        return "null"
    return '"' + str(obj).replace("\\", "\\\\").replace('"', '\\"') + '"'


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"error: {message}", file=sys.stderr)
        raise SystemExit(1)


def _add_orders(p):
    p.add_argument("--orders", type=ConeOrders.parse, default=PARABOLIC_ORDERS,
                   help="cone orders 'a,b'; integers >= 2 or 'inf' (default inf,inf)")


def _size(text):
    try:
        w, h = text.lower().split("x")
        return int(w), int(h)
    except ValueError:
        raise ValidationError(f"size must look like WxH, got {text!r}") from None


def _build_parser():
    top = _Parser(prog="rileyslice",
                  description="Farey words, trace polynomials, pleating rays, "
                              "cusp clouds and limit sets of the Riley slices.")
    sub = top.add_subparsers(dest="command", required=True)

    p = sub.add_parser("word", parents=[], help="print the Farey word of a slope")
    p.add_argument("slope", type=Slope.parse)
    _add_orders(p)

    p = sub.add_parser("poly", help="print a Farey trace polynomial as JSON")
    p.add_argument("slope", type=Slope.parse)
    _add_orders(p)
    p.add_argument("--method", choices=("direct", "recursive"), default="direct")

    p = sub.add_parser("cusps", help="write a cusp cloud as CSV")
    p.add_argument("--max-denominator", type=int, required=True, metavar="Q")
    _add_orders(p)
    p.add_argument("--out", required=True)
    p.add_argument("--workers", type=int, default=1)

    p = sub.add_parser("ray", help="trace a pleating ray and write CSV samples")
    p.add_argument("slope", type=Slope.parse)
    p.add_argument("--samples", type=int, default=33)
    p.add_argument("--t-start", type=float, default=-100.0)
    _add_orders(p)
    p.add_argument("--out", required=True)

    p = sub.add_parser("classify", help="classify a slice point with a witness")
    p.add_argument("re", type=float)
    p.add_argument("im", type=float)
    _add_orders(p)
    p.add_argument("--max-denominator", type=int, default=20, metavar="Q")
    p.add_argument("--word-depth", type=int, default=4, metavar="L")
    p.add_argument("--tol", type=float, default=1e-9)

    p = sub.add_parser("render", help="raster renders (PPM P6)")
    rsub = p.add_subparsers(dest="render_what", required=True)

    q = rsub.add_parser("slice", help="slice portrait: bounds, rays, cusps")
    _add_orders(q)
    q.add_argument("--max-denominator", type=int, default=20, metavar="Q")
    q.add_argument("--viewport", type=Viewport.parse,
                   default=Viewport(-5, 5, -5, 5), help="x0,x1,y0,y1")
    q.add_argument("--size", type=_size, default=(800, 800), help="WxH")
    q.add_argument("--out", required=True)
    q.add_argument("--workers", type=int, default=1)

    q = rsub.add_parser("limitset", help="limit set render for one group")
    q.add_argument("--rho", required=True, help="RE,IM")
    _add_orders(q)
    q.add_argument("--depth", type=int, default=40)
    q.add_argument("--epsilon", type=float, default=1e-3)
    q.add_argument("--cap", type=int, default=5_000_000)
    q.add_argument("--viewport", type=Viewport.parse,
                   default=Viewport(-3, 3, -3, 3), help="x0,x1,y0,y1")
    q.add_argument("--size", type=_size, default=(800, 800), help="WxH")
    q.add_argument("--out", required=True)
    return top


def _parse_rho(text):
    parts = text.split(",")
    if len(parts) != 2:
        raise ValidationError("rho must look like 'RE,IM'")
    try:
        return complex(float(parts[0]), float(parts[1]))
    except ValueError:
        raise ValidationError(f"bad rho {text!r}") from None


def _workers(args):
    env = os.environ.get("RILEY_THREADS")
    if env is not None:
        try:
            return max(1, int(env))
        except ValueError:
            raise ValidationError(f"RILEY_THREADS must be an integer, got {env!r}") from None
    return max(1, getattr(args, "workers", 1))


def run(argv=None):
    """Dispatch a CLI invocation; returns the process exit status."""
    try:
        args = _build_parser().parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return _dispatch(args)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except RileySliceError as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return 2


def _dispatch(args):
    if args.command == "word":
        print(farey_word(args.slope))
        return 0

    if args.command == "poly":
        builder = (farey_polynomial_direct if args.method == "direct"
                   else farey_polynomial_recursive)
        print(_json(builder(args.slope, args.orders).to_json_dict()))
        return 0

    if args.command == "cusps":
        failures = []
        points = cusp_cloud(args.max_denominator, args.orders,
                            workers=_workers(args), failures=failures)
        with open(args.out, "w", encoding="ascii") as fh:
            fh.write("p,q,re,im,residual\n")
            for cp in points:
                fh.write(f"{cp.slope.p},{cp.slope.q},{_fmt(cp.rho.real)},"
                         f"{_fmt(cp.rho.imag)},{_fmt(cp.residual)}\n")
        for s, err in failures:
            print(f"warning: cusp {s} failed: {err}", file=sys.stderr)
        print(f"wrote {len(points)} cusps to {args.out}")
        return 0

    if args.command == "ray":
        ray = trace_ray(args.slope, args.orders, args.t_start, args.samples)
        with open(args.out, "w", encoding="ascii") as fh:
            fh.write("slope,t,re,im\n")
            for t, z in ray.samples:
                fh.write(f"{ray.slope},{_fmt(t)},{_fmt(z.real)},{_fmt(z.imag)}\n")
        print(f"wrote {len(ray.samples)} samples to {args.out}; "
              f"cusp at {_fmt(ray.cusp.real)}+{_fmt(ray.cusp.imag)}i")
        return 0

    if args.command == "classify":
        pt = SlicePoint(rho=complex(args.re, args.im), orders=args.orders)
        verdict = classify_point(pt, max_denominator=args.max_denominator,
                                 word_depth=args.word_depth, tol=args.tol)
        print(_json(verdict.to_json_dict(pt.rho, pt.orders)))
        return 0

    if args.command == "render" and args.render_what == "slice":
        raster = render_slice(args.orders, args.max_denominator, args.viewport,
                              args.size, workers=_workers(args))
        raster.save(args.out)
        for w in raster.meta["warnings"]:
            print(f"warning: {w}", file=sys.stderr)
        print(f"wrote {args.size[0]}x{args.size[1]} PPM to {args.out}")
        return 0

    if args.command == "render" and args.render_what == "limitset":
        rho = _parse_rho(args.rho)
        cloud = limit_set(rho, args.orders, depth=args.depth,
                          epsilon=args.epsilon, cap=args.cap)
        raster = rasterize(cloud, args.viewport, args.size)
        raster.save(args.out)
        note = " (truncated)" if cloud.truncated else ""
        print(f"wrote {len(cloud.points)} points{note} to {args.out}")
        return 0

    raise ValidationError(f"unknown command {args.command!r}")  # pragma: no cover


def main():
    raise SystemExit(run())
