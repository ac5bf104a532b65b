"""Command-line front end.

Exit codes: 0 success, 2 an infeasibility proof was found, 1 error or a
failed verification.  Dimensions on the command line are 1-based.
"""
from __future__ import annotations

import argparse
import math
import sys
from fractions import Fraction
from pathlib import Path

from . import bounds, oracle
from .bounds import BoundReport
from .certificate import verify_certificate, write_certificate
from .dff import parse_dff
from .generate import random_instance
from .model import Instance, normalize, parse_instance, serialize_instance
from .scales import ConservativeScale, apply_scale, stretch

EXIT_OK, EXIT_ERROR, EXIT_INFEASIBLE = 0, 1, 2


def _read_instance(path: str) -> Instance:
    text = sys.stdin.read() if path == "-" else Path(path).read_text()
    return parse_instance(text)


def _parse_scales(text: str, dim: int) -> list[ConservativeScale]:
    scales = []
    for chunk in text.split(";"):
        tokens = chunk.split()
        if not tokens:
            continue
        if len(tokens) != dim:
            raise ValueError(f"scale {chunk.strip()!r} has {len(tokens)} components, need {dim}")
        scales.append(ConservativeScale.of(*(parse_dff(t) for t in tokens)))
    if not scales:
        raise ValueError("no scales given")
    return scales


def _approx(x: Fraction) -> str:
    return f"{float(x):.6g}"


def _emit(out, report: BoundReport, inst: Instance, cert_path: str | None) -> None:
    text = write_certificate(report, inst)
    out.write(text)
    if cert_path:
        Path(cert_path).write_text(text)


def cmd_bound(args, out) -> int:
    inst = _read_instance(args.instance)
    norm = normalize(inst)
    if args.problem == "spp":
        if args.l2d or args.l3d:
            raise ValueError("--l2d/--l3d scales act on every axis and are not valid for spp")
        scales = (_parse_scales(args.scales, inst.dim) if args.scales else bounds.spp_battery(norm))
        for s in scales:
            if s.dffs[-1] != bounds.IDENTITY:
                raise ValueError(f"scale {s.describe()} changes the strip axis")
        vol, scale = bounds.best_scale(norm, scales)
        report = BoundReport("SPP", vol * inst.container[-1], scale)
        out.write(f"# strip height lower bound (container units), normalized {vol}\n")
    elif args.problem == "obpp":
        if args.scales and (args.l2d or args.l3d):
            raise ValueError("--scales cannot be combined with --l2d/--l3d")
        if args.scales:
            vol, scale = bounds.best_scale(norm, _parse_scales(args.scales, inst.dim))
            report = BoundReport("OBPP", math.ceil(vol), scale)
        elif args.l2d or (not args.l3d and inst.dim == 2):
            report = bounds.bound_L2d(norm, args.extra_ustep)
        elif args.l3d or inst.dim == 3:
            report = bounds.bound_L3d(norm, args.extra_ustep)
        else:
            vol, scale = bounds.best_scale(norm, bounds.default_battery(norm, args.extra_ustep))
            report = BoundReport("OBPP", math.ceil(vol), scale)
        out.write("# bin count lower bound\n")
    else:
        if args.scales:
            scales = _parse_scales(args.scales, inst.dim)
        else:
            scales = bounds.default_battery(norm, args.extra_ustep)
            if args.l2d:
                scales = [s for _, _, s in bounds.l2d_scales(norm, args.extra_ustep)]
            elif args.l3d:
                scales = [s for _, _, s in bounds.l3d_scales(norm, args.extra_ustep)]
        best = None
        for s in scales:
            value = bounds.okp_relaxation_bound(norm, s)
            if best is None or value < best[0]:
                best = (value, s)
        report = BoundReport("OKP", best[0], best[1])
        out.write("# upper bound on the packable value\n")
    _emit(out, report, inst, args.cert)
    return EXIT_OK


def _check(norm, inst, battery, out, cert_path) -> int:
    vol, scale = bounds.best_scale(norm, battery)
    if vol > 1:
        out.write(f"# verdict Infeasible: transformed volume {vol} (~{_approx(vol)}) > 1\n")
        _emit(out, BoundReport("OPP-infeasibility", vol, scale), inst, cert_path)
        return EXIT_INFEASIBLE
    out.write(f"verdict Pass\nlargest transformed volume {vol} (~{_approx(vol)})\n"
              f"scale {scale.describe()}\nprovenance {scale.provenance}\n")
    return EXIT_OK


def cmd_check(args, out) -> int:
    inst = _read_instance(args.instance)
    norm = normalize(inst)
    battery = (_parse_scales(args.scales, inst.dim) if args.scales
               else bounds.default_battery(norm, args.extra_ustep))
    return _check(norm, inst, battery, out, args.cert)


def cmd_stretch(args, out) -> int:
    inst = _read_instance(args.instance)
    norm = normalize(inst)
    i = args.dim - 1
    if not 0 <= i < inst.dim:
        raise ValueError(f"--dim must lie in 1..{inst.dim}")
    scale = stretch(norm, None, args.box, i)
    stretched = apply_scale(norm, scale)
    old, new = norm.box(args.box).size[i], stretched.box(args.box).size[i]
    vol = bounds.transformed_volume(norm, scale)
    out.write(f"# {scale.provenance}\n")
    out.write(f"# box {args.box} dim {args.dim}: {old * inst.container[i]} -> "
              f"{new * inst.container[i]} (normalized {old} -> {new})\n")
    cvol = math.prod(inst.container)
    out.write(f"# stretched total volume {vol} (~{_approx(vol)}) = {vol * cvol}/{cvol} "
              f"in container units\n")
    # DFF scales on top of a preset-aware scale remain preset-aware
    composed = []
    for s in bounds.default_battery(stretched, args.extra_ustep):
        table = {b.id: s.transform(b) for b in stretched.boxes}
        composed.append(ConservativeScale(table=table, provenance=f"{scale.provenance} then {s.provenance}"))
    return _check(norm, inst, [scale] + composed, out, args.cert)


def cmd_verify_dff(args, out) -> int:
    f = parse_dff(args.spec)
    verdict = oracle.check_dff(f, args.max_denominator)
    if verdict.holds:
        out.write(f"{f}: dual feasible on all multisets with denominators <= {args.max_denominator}"
                  f" (largest image sum {verdict.image_sum})\n")
        return EXIT_OK
    items = " ".join(str(x) for x in verdict.counterexample)
    out.write(f"{f}: counterexample {{{items}}} has image sum {verdict.image_sum} > 1\n")
    return EXIT_ERROR


def cmd_verify_cert(args, out) -> int:
    text = sys.stdin.read() if args.certificate == "-" else Path(args.certificate).read_text()
    result = verify_certificate(text)
    out.write(("valid: " if result.ok else "INVALID: ") + result.message + "\n")
    return EXIT_OK if result.ok else EXIT_ERROR


def cmd_gen(args, out) -> int:
    inst = random_instance(args.dim, args.n, args.seed, args.grid, args.values)
    out.write(f"# gen --dim {args.dim} --n {args.n} --seed {args.seed} --grid {args.grid}\n")
    out.write(serialize_instance(inst))
    return EXIT_OK


def cmd_oracle(args, out) -> int:
    norm = normalize(_read_instance(args.instance))
    if args.what == "packable":
        placement = oracle.find_packing(norm, args.max_boxes)
        if placement is None:
            out.write("packable no\n")
            return EXIT_INFEASIBLE
        out.write("packable yes\n")
        for box_id, pos in placement.items():
            out.write(f"at {box_id} " + " ".join(str(x) for x in pos) + "\n")
    elif args.what == "bins":
        out.write(f"bins {oracle.min_bins(norm, args.max_boxes)}\n")
    elif args.what == "strip":
        out.write(f"height {oracle.min_strip_height(norm, args.max_boxes)} (normalized)\n")
    else:
        out.write(f"okp {oracle.okp_optimum(norm, args.max_boxes)}\n")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="packbounds", description="Lower bounds and infeasibility certificates "
                                       "for orthogonal packing via conservative scales.")
    sub = parser.add_subparsers(dest="command", required=True)

    def scale_flags(p):
        p.add_argument("--scales", help="';'-separated scales, each d whitespace-separated "
                                        "DFF specs, e.g. 'u(2) u(2); id phi(1/3)'")
        p.add_argument("--extra-ustep", type=int, default=0, metavar="K",
                       help="also try u(k), 2 <= k <= K, in the composite families")
        p.add_argument("--cert", help="also write the certificate to this file")

    p = sub.add_parser("bound", help="compute a bound and print its certificate")
    p.add_argument("instance")
    p.add_argument("--problem", choices=("spp", "obpp", "okp"), required=True)
    fam = p.add_mutually_exclusive_group()
    fam.add_argument("--l2d", action="store_true", help="use the seven 2D scale families")
    fam.add_argument("--l3d", action="store_true", help="use the nine 3D scale families")
    scale_flags(p)
    p.set_defaults(func=cmd_bound)

    p = sub.add_parser("check", help="volume criterion over a battery of scales")
    p.add_argument("instance")
    scale_flags(p)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("stretch", help="stretch one box under the instance's edge presets")
    p.add_argument("instance")
    p.add_argument("--box", required=True)
    p.add_argument("--dim", type=int, required=True, help="1-based dimension")
    p.add_argument("--extra-ustep", type=int, default=0, metavar="K")
    p.add_argument("--cert")
    p.set_defaults(func=cmd_stretch)

    p = sub.add_parser("verify-dff", help="exhaustive dual-feasibility check")
    p.add_argument("spec")
    p.add_argument("--max-denominator", type=int, default=12)
    p.set_defaults(func=cmd_verify_dff)

    p = sub.add_parser("verify-cert", help="re-check a certificate file ('-' for stdin)")
    p.add_argument("certificate")
    p.set_defaults(func=cmd_verify_cert)

    p = sub.add_parser("gen", help="emit a reproducible random instance")
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--grid", type=int, default=10, help="container side; sizes are 1..grid")
    p.add_argument("--values", action="store_true", help="attach OKP values")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("oracle", help="brute-force ground truth for tiny instances")
    p.add_argument("what", choices=("packable", "bins", "strip", "okp"))
    p.add_argument("instance")
    p.add_argument("--max-boxes", type=int, default=8)
    p.set_defaults(func=cmd_oracle)
    return parser


def run(argv=None, out=None, err=None) -> int:
    out = sys.stdout if out is None else out
    err = sys.stderr if err is None else err
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_ERROR if exc.code else EXIT_OK
    try:
        return args.func(args, out)
    except (OSError, ValueError, KeyError, oracle.OracleTooLarge) as exc:
        err.write(f"error: {exc}\n")
        return EXIT_ERROR


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
