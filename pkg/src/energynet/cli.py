"""Command-line interface.

Subcommands: kernel, gram, mult, walk, banach.  Networks come either from a
generator spec (--gen path:3) or a file (--net graph.json / graph.csv with
--origin).  Exit codes: 0 pass, 1 certified failure, 2 error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from . import energy, multop, network, randwalk
from .errors import EnergyNetError


def _parse_vertex(token):
    try:
        return int(token)
    except (TypeError, ValueError):
        return token


def _build_net(args):
    if getattr(args, "gen", None) and getattr(args, "net", None):
        raise EnergyNetError("use exactly one of --gen and --net")
    if getattr(args, "gen", None):
        family, _, size = args.gen.partition(":")
        if not size:
            raise EnergyNetError(f"generator spec {args.gen!r} needs a size, e.g. path:3")
        return network.generate(family, int(size))
    if getattr(args, "net", None):
        origin = _parse_vertex(args.origin) if args.origin is not None else None
        return network.load_network(args.net, origin=origin)
    raise EnergyNetError("a network source is required: --gen or --net")


def _parse_multiplier(net, spec):
    kind, _, arg = spec.partition(":")
    if kind == "delta":
        return multop.Multiplier.delta(net, _parse_vertex(arg))
    if kind == "kernel":
        return multop.Multiplier.from_kernel(net, _parse_vertex(arg))
    if kind == "const":
        return multop.Multiplier.constant(net, complex(arg) if "j" in arg else float(arg))
    if kind == "file":
        with open(arg) as fh:
            doc = json.load(fh)
        vals = {
            _parse_vertex(k): (complex(v[0], v[1]) if isinstance(v, list) else v)
            for k, v in doc["f"].items()
        }
        return multop.Multiplier.from_dict(net, vals)
    raise EnergyNetError(f"unknown multiplier spec {spec!r}")


def _parse_vector(net, spec):
    kind, _, arg = spec.partition(":")
    if kind == "kernel":
        return energy.energy_kernel(net, _parse_vertex(arg))
    if kind == "delta":
        return energy.delta(net, _parse_vertex(arg))
    if kind == "const":
        return energy.ground(net, np.full(net.n, float(arg)))
    if kind == "file":
        with open(arg) as fh:
            doc = json.load(fh)
        vals = {
            _parse_vertex(k): (complex(v[0], v[1]) if isinstance(v, list) else v)
            for k, v in doc["values"].items()
        }
        return energy.ground(net, network.VertexFunction.from_dict(net, vals).values)
    raise EnergyNetError(f"unknown vector spec {spec!r}")


def _parse_exhaustion(net, spec):
    xs = [net.vertices[i] for i in energy.x_indices(net)]
    if spec is None or spec == "all":
        return multop.default_exhaustion(net)
    sizes = sorted({int(tok) for tok in spec.split(",")})
    if any(s < 1 or s > len(xs) for s in sizes):
        raise EnergyNetError(f"exhaustion sizes must lie in 1..{len(xs)}")
    return [tuple(xs[:s]) for s in sizes]


def _num(z):
    if isinstance(z, complex):
        return z.real if z.imag == 0 else [z.real, z.imag]
    return float(z)


def _emit(doc, fmt, csv_rows=None):
    if fmt == "json":
        print(json.dumps(doc, sort_keys=True))
    elif fmt == "csv" and csv_rows is not None:
        for row in csv_rows:
            print(",".join(str(c) for c in row))
    else:
        _pretty(doc)


def _fmt6(v):
    if isinstance(v, float):
        return f"{v:.6g}"
    if isinstance(v, list) and all(isinstance(c, (int, float)) for c in v):
        return "[" + ", ".join(_fmt6(float(c)) for c in v) + "]"
    return str(v)


def _pretty(doc, indent=0):
    pad = " " * indent
    for key, val in doc.items():
        if isinstance(val, dict):
            print(f"{pad}{key}:")
            _pretty(val, indent + 2)
        elif isinstance(val, list) and val and isinstance(val[0], (list, dict)):
            print(f"{pad}{key}:")
            for item in val:
                if isinstance(item, dict):
                    _pretty(item, indent + 2)
                else:
                    print(f"{pad}  {_fmt6(item)}")
        else:
            print(f"{pad}{key}: {_fmt6(val) if not isinstance(val, bool) else val}")


def cmd_kernel(args):
    net = _build_net(args)
    x = _parse_vertex(args.vertex)
    vx = energy.energy_kernel(net, x)
    doc = {"command": "kernel", "vertex": x}
    if net.index(x) == net.origin_index:
        doc.update({"note": "v_o is the zero class", "values": {str(v): 0.0 for v in net.vertices}})
        _emit(doc, args.format)
        return 0
    r = energy.effective_resistance(net, x)
    s = energy.sup_norm(vx)
    doc.update(
        {
            "values": {str(v): _num(vx[v]) for v in net.vertices},
            "R": r,
            "sup_norm": s,
            "bound_ok": bool(s <= r + 1e-12),
        }
    )
    rows = [("vertex", "value")] + [(v, vx[v]) for v in net.vertices]
    _emit(doc, args.format, csv_rows=rows)
    return 0 if doc["bound_ok"] else 1


def cmd_gram(args):
    net = _build_net(args)
    F = [_parse_vertex(t) for t in args.F.split(",")]
    gm = energy.gram_matrix(net, F)
    doc = {
        "command": "gram",
        "F": [str(v) for v in gm.F],
        "V": [[float(c) for c in row] for row in gm.V.a],
    }
    if args.sqrt:
        root = gm.sqrt().a
        resid = float(np.abs(root @ root - gm.V.a).max())
        doc["sqrt"] = [[float(c) for c in row] for row in root]
        doc["sqrt_residual"] = resid
    rows = [tuple(["x"] + [str(v) for v in gm.F])] + [
        tuple([str(x)] + [f"{c!r}" for c in row]) for x, row in zip(gm.F, gm.V.a)
    ]
    _emit(doc, args.format, csv_rows=rows)
    return 0


def cmd_mult(args):
    net = _build_net(args)
    m = _parse_multiplier(net, args.f)
    exhaustion = _parse_exhaustion(net, args.exhaust)
    report = multop.analyze(m, exhaustion, bound=args.bound)
    doc = report.to_json_dict()
    doc["command"] = "mult"
    if not args.trace:
        doc["lower_trace"] = doc["lower_trace"][-1:]
    rows = [("F_size", "rho")] + [(n, r) for n, r in doc["lower_trace"]]
    _emit(doc, args.format, csv_rows=rows)
    return 1 if doc["verdict"].startswith("FAIL") else 0


def cmd_walk(args):
    net = _build_net(args)
    x = _parse_vertex(args.vertex)
    est = randwalk.escape_prob_mc(net, x, args.samples, args.seed)
    identity = (
        network.total_conductance(net, x) * energy.effective_resistance(net, x) * est.exact
    )
    doc = est.to_json_dict()
    doc["command"] = "walk"
    doc["x"] = str(doc["x"])
    doc["identity_residual"] = abs(identity - 1.0)
    _emit(doc, args.format)
    return 0 if doc["identity_residual"] <= 1e-9 else 1


def cmd_banach(args):
    net = _build_net(args)
    doc = {"command": "banach"}
    if args.u2:
        u1 = _parse_vector(net, args.u)
        u2 = _parse_vector(net, args.u2)
        prod, est = energy.pointwise_product(u1, u2)
        doc.update(
            {
                "product_energy_sq": est.product_energy_sq,
                "bound": est.bound,
                "slack": est.slack,
                "pass": bool(est.slack >= -1e-9),
                "banach_norm": energy.banach_norm(prod),
            }
        )
        _emit(doc, args.format)
        return 0 if doc["pass"] else 1
    u = _parse_vector(net, args.u)
    doc.update(
        {
            "sup_norm": energy.sup_norm(u),
            "energy_norm": float(np.sqrt(u.energy)),
            "banach_norm": energy.banach_norm(u),
        }
    )
    _emit(doc, args.format)
    return 0


def _add_net_args(p):
    p.add_argument("--gen", help="generator spec, e.g. path:3, integer_segment:8")
    p.add_argument("--net", help="network file (JSON, or CSV with --origin)")
    p.add_argument("--origin", help="origin vertex for CSV input")
    p.add_argument("--format", choices=["json", "csv", "pretty"], default="pretty")


def build_parser():
    parser = argparse.ArgumentParser(prog="energynet", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("kernel", help="energy-kernel element and resistance at a vertex")
    _add_net_args(p)
    p.add_argument("--vertex", required=True)
    p.set_defaults(func=cmd_kernel)

    p = sub.add_parser("gram", help="kernel Gram matrix over a vertex list")
    _add_net_args(p)
    p.add_argument("--F", required=True, help="comma-separated vertex list")
    p.add_argument("--sqrt", action="store_true", help="also emit the psd square root")
    p.set_defaults(func=cmd_gram)

    p = sub.add_parser("mult", help="multiplication-operator norm analysis")
    _add_net_args(p)
    p.add_argument("--f", required=True, help="delta:<v> | kernel:<v> | const:<c> | file:<p>")
    p.add_argument("--bound", type=float, help="certify at this bound")
    p.add_argument("--estimate", action="store_true", help="estimate the norm")
    p.add_argument("--trace", action="store_true", help="emit the full lower trace")
    p.add_argument("--exhaust", help="comma-separated prefix sizes, or 'all'")
    p.set_defaults(func=cmd_mult)

    p = sub.add_parser("walk", help="escape probability, exact and Monte Carlo")
    _add_net_args(p)
    p.add_argument("--vertex", required=True)
    p.add_argument("--samples", type=int, default=10000)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_walk)

    p = sub.add_parser("banach", help="algebra norms and the product estimate")
    _add_net_args(p)
    p.add_argument("--u", required=True, help="kernel:<v> | delta:<v> | const:<c> | file:<p>")
    p.add_argument("--u2", help="second vector: report the product estimate")
    p.set_defaults(func=cmd_banach)
    return parser


def main(argv=None):
    # honored for interface compatibility; all current paths are single-threaded
    os.environ.setdefault("ENERGY_SPACE_THREADS", "1")
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except EnergyNetError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
