"""Command-line driver: ``amplifiber {instance,fan,canonical,conjecture,identity}``."""

import argparse
import json
import math
import os
import random
import sys
from fractions import Fraction
from functools import cmp_to_key
from itertools import combinations

from . import __version__
from .errors import AmplifiberError, GenericityError, ValidationError
from .exact import RatMatrix, complement, pluecker, rational_str, to_rational
from .fans import (_ConeTable, _angle_cmp, _primitive, enumerate_chambers, gale_transform,
                   ray_system)
from .forms import affine_forms, cyclic_interval, fiber_denominator
from .grassmann import Chart, build_Z_moment_curve, fiber_frame, sample_frame
from .jk import (canonical_all_chambers, canonical_function, conjecture_check,
                 geomchar_identity, ray_entry_identity, triangulation_from_chamber)

SEED_ENV = "AMPLIFIBER_SEED"


def _parse_rationals(text):
    try:
        return [to_rational(t) for t in text.split(",") if t.strip()]
    except (ValueError, ZeroDivisionError) as exc:
        raise ValidationError(f"cannot parse rational list {text!r}") from exc


def resolve_seed(args):
    env = os.environ.get(SEED_ENV)
    if env is not None and env.strip():
        try:
            return int(env)
        except ValueError as exc:
            raise ValidationError(f"{SEED_ENV} must be an integer") from exc
    return args.seed


def run_config(args):
    cfg = {"command": args.command, "n": args.n, "k": args.k, "m": args.m,
           "nodes": args.nodes, "seed": resolve_seed(args)}
    for key in ("samples", "chamber", "xi", "point", "rule", "method"):
        if hasattr(args, key):
            cfg[key] = getattr(args, key)
    return cfg


def _instance(args):
    nodes = _parse_rationals(args.nodes) if args.nodes else None
    return build_Z_moment_curve(args.n, args.m, args.k, nodes)


def _frame(args, inst):
    if getattr(args, "point", None):
        with open(args.point) as fh:
            data = json.load(fh)
        if "Y" not in data:
            raise ValidationError("point file needs a 'Y' entry")
        Y = RatMatrix(data["Y"])
        C = RatMatrix(data["C"]) if data.get("C") is not None else None
        return fiber_frame(inst, Y, C)
    return sample_frame(inst, resolve_seed(args))


def cmd_instance(args):
    inst = _instance(args)
    out = inst.to_json()
    out.update({"ell": inst.ell, "chart": inst.chart.value, "conjugate": inst.is_conjugate,
                "polytope": inst.is_polytope, "certificate": "all maximal minors positive"})
    return out


def _fan_payload(args):
    inst = _instance(args)
    frame = _frame(args, inst)
    form = affine_forms(frame)
    fan = enumerate_chambers(ray_system(form), method=args.method)
    return inst, frame, form, fan


def cmd_fan(args):
    inst, frame, form, fan = _fan_payload(args)
    if args.svg:
        if fan.r != 2:
            raise ValidationError("SVG output is only available for 2-dimensional fans")
        with open(args.svg, "w") as fh:
            fh.write(fan_svg(fan))
    return {"instance": inst.to_json(), "frame": frame.to_json(), "fiberform": form.to_json(),
            "fan": fan.to_json(), "degenerate": [list(I) for I in fan.degenerate]}


def cmd_canonical(args):
    inst = _instance(args)
    frame = _frame(args, inst)
    if args.xi:
        xi = _parse_rationals(args.xi)
        cv = canonical_function(frame, xi)
        return {"instance": inst.to_json(), "frame": frame.to_json(), "xi": [rational_str(x) for x in xi],
                "cells": [list(c) for c in cv.cells], "canonicalValue": rational_str(cv.value)}
    sweep = canonical_all_chambers(frame)
    triangulations = []
    for idx, (ch, cv) in enumerate(zip(sweep.fan.chambers, sweep.values)):
        if args.chamber is not None and idx != args.chamber:
            continue
        T = triangulation_from_chamber(sweep.fan, ch, inst)
        entry = {"instance": {"n": inst.n, "k": inst.k, "m": inst.m},
                 "chamber": {"index": idx, "witness": [rational_str(x) for x in ch.witness]},
                 "cells": [list(c) for c in T.sorted_cells()],
                 "canonicalValue": rational_str(cv.value)}
        if inst.k == 1:
            entry["simplices"] = [list(s) for s in sorted(T.simplices())]
        triangulations.append(entry)
    return {"frame": frame.to_json(), "triangulations": triangulations,
            "chambers": len(sweep.fan.chambers), "allChambersAgree": sweep.agree}


def cmd_conjecture(args):
    inst = _instance(args)
    return conjecture_check(inst, args.samples, resolve_seed(args), rule=args.rule,
                            workers=args.workers)


def cmd_identity(args):
    inst = _instance(args)
    seed = resolve_seed(args)
    rng = random.Random(f"identity:{seed}")
    n, k, m = inst.n, inst.k, inst.m
    counts = {"factorization": [0, 0], "geomchar": [0, 0], "rayEntries": [0, 0], "gale": [0, 0]}
    failures = []
    for s in range(args.samples):
        frame = sample_frame(inst, f"{seed}:{s}")
        lam = RatMatrix([[Fraction(rng.randint(-30, 30), rng.randint(1, 9)) for _ in range(n - m)]
                         for _ in range(k)])
        V = lam @ frame.A
        for j in range(1, n + 1):
            ok = fiber_denominator(lam, frame, j) == pluecker(V, cyclic_interval(j, k, n))
            counts["factorization"][0 if ok else 1] += 1
            if not ok:
                failures.append({"suite": "factorization", "sample": s, "j": j})
        if frame.chart is Chart.CONJUGATE:
            for J in combinations(range(1, n + 1), k):
                ok = geomchar_identity(frame, J, args.rule)[2]
                counts["geomchar"][0 if ok else 1] += 1
                if not ok:
                    failures.append({"suite": "geomchar", "sample": s, "J": list(J)})
            for j in range(1, n + 1):
                ok = ray_entry_identity(frame, j, args.rule)[2]
                counts["rayEntries"][0 if ok else 1] += 1
        pair = gale_transform(inst.Z)
        ok = (pair.M @ pair.Mperp).is_zero()
        counts["gale"][0 if ok else 1] += 1
    return {"instance": {"n": n, "k": k, "m": m}, "samples": args.samples, "rule": args.rule,
            "passed": {key: v[0] for key, v in counts.items()},
            "failed": {key: v[1] for key, v in counts.items()}, "failures": failures}


def fan_svg(fan, size=400):
    """Plain SVG of a 2-dimensional fan: shaded chambers and labelled rays."""
    palette = ["#e6194b", "#3cb44b", "#4363d8", "#f58231", "#911eb4", "#42d4f4",
               "#f032e6", "#bfef45", "#469990", "#9a6324"]
    table = _ConeTable(fan.ray_system)
    index = {c.cones: i for i, c in enumerate(fan.chambers)}
    dirs = set()
    for ray in table.int_rays:
        p = _primitive(ray)
        dirs.add(p)
        dirs.add(tuple(-x for x in p))
    dirs = sorted(dirs, key=cmp_to_key(_angle_cmp))
    c, R = size / 2, size * 0.45

    def pt(v, rad=R):
        norm = math.hypot(float(v[0]), float(v[1]))
        return c + rad * float(v[0]) / norm, c - rad * float(v[1]) / norm

    parts = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}">',
             f'<rect width="{size}" height="{size}" fill="white"/>']
    for a, b in zip(dirs, dirs[1:] + dirs[:1]):
        na, nb = abs(a[0]) + abs(a[1]), abs(b[0]) + abs(b[1])
        mid = (a[0] * nb + b[0] * na, a[1] * nb + b[1] * na)
        sig = table.signature(mid)
        if sig not in index:
            continue
        (x1, y1), (x2, y2) = pt(a), pt(b)
        color = palette[index[sig] % len(palette)]
        parts.append(f'<path d="M {c} {c} L {x1:.2f} {y1:.2f} A {R} {R} 0 0 0 {x2:.2f} {y2:.2f} Z" '
                     f'fill="{color}" fill-opacity="0.25" stroke="none"/>')
        tx, ty = pt(mid, R * 0.6)
        parts.append(f'<text x="{tx:.1f}" y="{ty:.1f}" font-size="12">c{index[sig] + 1}</text>')
    for j, ray in enumerate(table.int_rays, start=1):
        x, y = pt(ray)
        parts.append(f'<line x1="{c}" y1="{c}" x2="{x:.2f}" y2="{y:.2f}" stroke="black"/>')
        lx, ly = pt(ray, R * 1.07)
        parts.append(f'<text x="{lx:.1f}" y="{ly:.1f}" font-size="13">{j}</text>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def build_parser():
    p = argparse.ArgumentParser(prog="amplifiber", description=__doc__)
    p.add_argument("--version", action="version", version=f"amplifiber {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("-n", type=int, required=True)
        sp.add_argument("-k", type=int, required=True)
        sp.add_argument("-m", type=int, required=True)
        sp.add_argument("--nodes", help="comma-separated increasing positive rationals (default 1..n)")
        sp.add_argument("--seed", type=int, default=0, help=f"sampling seed; {SEED_ENV} overrides it")
        sp.add_argument("-o", "--output", help="write JSON here instead of stdout")

    common(sub.add_parser("instance", help="build and certify a moment-curve instance"))
    sp = sub.add_parser("fan", help="chamber fan of the fiber rays at a point Y")
    common(sp)
    sp.add_argument("--point", help="JSON file with 'Y' (and optionally a positive preimage 'C')")
    sp.add_argument("--method", choices=["vertex", "fm"], default="vertex")
    sp.add_argument("--svg", help="also write an SVG drawing (2-dimensional fans only)")
    sp = sub.add_parser("canonical", help="JK canonical function over every chamber")
    common(sp)
    sp.add_argument("--point")
    sp.add_argument("--chamber", type=int, help="only report this chamber index")
    sp.add_argument("--xi", help="evaluate at this comma-separated direction instead")
    sp = sub.add_parser("conjecture", help="randomized bracket positivity check")
    common(sp)
    sp.add_argument("--samples", type=int, default=100)
    sp.add_argument("--rule", choices=["corrected", "literal"], default="corrected")
    sp.add_argument("--workers", type=int, default=None)
    sp = sub.add_parser("identity", help="factorization, bracket and Gale identity suites")
    common(sp)
    sp.add_argument("--samples", type=int, default=20)
    sp.add_argument("--rule", choices=["corrected", "literal"], default="corrected")
    return p


COMMANDS = {"instance": cmd_instance, "fan": cmd_fan, "canonical": cmd_canonical,
            "conjecture": cmd_conjecture, "identity": cmd_identity}


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    for attr in ("method", "svg", "point", "chamber", "xi"):
        if not hasattr(args, attr):
            setattr(args, attr, None)
    try:
        result = COMMANDS[args.command](args)
        payload = {"version": __version__, "config": run_config(args), "result": result}
        text = json.dumps(payload, indent=2) + "\n"
    except AmplifiberError as exc:
        err = {"error": type(exc).__name__, "message": str(exc)}
        if isinstance(exc, GenericityError) and exc.wall is not None:
            err["wall"] = list(exc.wall)
        print(json.dumps(err), file=sys.stderr)
        return exc.exit_code
    except AssertionError as exc:
        print(json.dumps({"error": "AssertionError", "message": str(exc)}), file=sys.stderr)
        return 4
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
