"""Command-line entry point: ``hermg1 {demo-cube,solve,verify,eval}``.

Exit codes: 0 success, 1 invariant violation, 2 input error, 3 internal
error.  Failures print one line ``error: <Category>: <detail>`` to stderr.
"""
import argparse
import json
import logging
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from .errors import GeometryError, HermG1Error, InputError, TopologyError
from .hermite import patch_eval, patch_normal, patch_partial_u, patch_partial_v
from .mesh import export_obj, merge_meshes, tessellate, weld
from .netio import load_network_json
from .network import demo_cube, solve_network, sphericity, verify_network

logger = logging.getLogger("hermg1")

EXIT_OK, EXIT_INVARIANT, EXIT_INPUT, EXIT_INTERNAL = 0, 1, 2, 3


def _tessellate_all(patches, res, parallel):
    if parallel:
        with ThreadPoolExecutor() as pool:
            return list(pool.map(lambda g: tessellate(g, res), patches))
    return [tessellate(g, res) for g in patches]


def _write_mesh(solved, args):
    meshes = _tessellate_all(solved.patches, args.res, args.parallel)
    if args.weld:
        meshes = [weld(merge_meshes(meshes))]
    export_obj(meshes, args.out)
    return meshes


def _report_dict(report):
    return {
        "passes": report.passes,
        "scale": report.scale,
        "max_corner_residual": report.max_corner_residual,
        "max_c0_gap": report.max_c0_gap,
        "corners": [
            {"corner": r.corner_id, "max_u": r.max_u, "max_v": r.max_v, "vacuous": r.vacuous}
            for r in report.corners
        ],
        "edges": [
            {"corners": list(e.corners), "faces": list(e.faces), "c0_gap": e.c0_gap,
             "max_normal_angle": e.max_normal_angle}
            for e in report.edges
        ],
    }


def _print_report(report, out):
    print(f"corner residuals (tol {report.residual_tol:g}):", file=out)
    for r in report.corners:
        tag = "vacuous" if r.vacuous else ("ok" if r.passes(report.residual_tol) else "FAIL")
        print(f"  corner {r.corner_id}: max|n.t_u| {r.max_u:.3e}  max|n.t_v| {r.max_v:.3e}  {tag}", file=out)
    limit = report.c0_rtol * report.scale
    print(f"shared edges (C0 tol {limit:.3e}):", file=out)
    for e in report.edges:
        tag = "ok" if e.c0_gap <= limit else "FAIL"
        print(f"  edge {e.corners[0]}-{e.corners[1]} faces {e.faces[0]},{e.faces[1]}: "
              f"gap {e.c0_gap:.3e}  max normal angle {e.max_normal_angle:.6f} rad  {tag}", file=out)
    print(f"result: {'PASS' if report.passes else 'FAIL'}", file=out)


def cmd_demo_cube(args):
    net = demo_cube(args.scale)
    solved = solve_network(net, twist=args.twist, chord_scale=args.chord_scale)
    meshes = _write_mesh(solved, args)
    report = verify_network(solved)
    sph = sphericity(solved)
    if args.json_report:
        doc = _report_dict(report)
        doc["sphericity"] = {
            "radius": sph.radius, "min_deviation": sph.min_deviation,
            "max_deviation": sph.max_deviation, "mid_face_deviations": sph.mid_face_deviations,
        }
        doc["vertices"] = sum(len(m.vertices) for m in meshes)
        doc["out"] = str(args.out)
        print(json.dumps(doc, indent=2))
    else:
        _print_report(report, sys.stdout)
        print(f"sphericity: radius {sph.radius:.9g}, radial deviation "
              f"min {sph.min_deviation:.6g} max {sph.max_deviation:.6g}, "
              f"mid-face {np.mean(sph.mid_face_deviations):.6g}")
        print(f"wrote {args.out}")
    return EXIT_OK if report.passes else EXIT_INVARIANT


def _load_and_solve(path):
    data = load_network_json(path)
    net = data.build()
    opts = data.options
    solved = solve_network(net, opts.normal_policy, opts.twist, opts.chord_scale)
    return net, solved


def cmd_solve(args):
    _, solved = _load_and_solve(args.input)
    meshes = _write_mesh(solved, args)
    report = verify_network(solved)
    if args.json_report:
        doc = _report_dict(report)
        doc["vertices"] = sum(len(m.vertices) for m in meshes)
        doc["out"] = str(args.out)
        print(json.dumps(doc, indent=2))
    else:
        _print_report(report, sys.stdout)
        print(f"wrote {args.out}")
    return EXIT_OK if report.passes else EXIT_INVARIANT


def cmd_verify(args):
    _, solved = _load_and_solve(args.input)
    report = verify_network(solved, samples=args.samples)
    if args.json_report:
        print(json.dumps(_report_dict(report), indent=2))
    else:
        _print_report(report, sys.stdout)
    return EXIT_OK if report.passes else EXIT_INVARIANT


def cmd_eval(args):
    net, solved = _load_and_solve(args.input)
    if not 0 <= args.face < len(net.faces):
        raise InputError(f"face {args.face} out of range 0..{len(net.faces) - 1}")
    g = solved.patches[args.face]
    p = patch_eval(g, args.u, args.v)
    pu = patch_partial_u(g, args.u, args.v)
    pv = patch_partial_v(g, args.u, args.v)
    try:
        n = patch_normal(g, args.u, args.v)
        n = n / np.linalg.norm(n)
    except GeometryError:
        n = None
    if args.json_report:
        doc = {"face": args.face, "u": args.u, "v": args.v, "position": p.tolist(),
               "partial_u": pu.tolist(), "partial_v": pv.tolist(),
               "normal": None if n is None else n.tolist()}
        print(json.dumps(doc, indent=2))
    else:
        fmt = lambda a: " ".join(f"{x:.9g}" for x in a)  # noqa: E731
        print(f"position  {fmt(p)}")
        print(f"partial_u {fmt(pu)}")
        print(f"partial_v {fmt(pv)}")
        print(f"normal    {'degenerate' if n is None else fmt(n)}")
    return EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(
        prog="hermg1", description="Smooth bicubic Hermite patch networks over quad meshes.")
    parser.add_argument("-v", "--verbose", action="store_true", help="debug logging")
    sub = parser.add_subparsers(dest="command", required=True)

    def mesh_flags(p):
        p.add_argument("--out", required=True, help="output OBJ path")
        p.add_argument("--res", type=int, default=16, help="grid resolution per patch (>= 2)")
        p.add_argument("--weld", action="store_true", help="merge coincident vertices (1e-9)")
        p.add_argument("--parallel", action="store_true", help="tessellate patches concurrently")

    p = sub.add_parser("demo-cube", help="valence-3 cube corners fitted with sphere normals")
    mesh_flags(p)
    p.add_argument("--chord-scale", type=float, default=1.0)
    p.add_argument("--twist", choices=["zero", "adini"], default="zero")
    p.add_argument("--scale", type=float, default=1.0, help="cube half-edge length")
    p.add_argument("--json-report", action="store_true")
    p.set_defaults(func=cmd_demo_cube)

    p = sub.add_parser("solve", help="solve a JSON network and export OBJ")
    p.add_argument("--in", dest="input", required=True)
    mesh_flags(p)
    p.add_argument("--json-report", action="store_true")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("verify", help="check corner conditions and shared-edge C0")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--samples", type=int, default=33)
    p.add_argument("--json-report", action="store_true")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("eval", help="evaluate one patch at (u, v)")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--face", type=int, required=True)
    p.add_argument("--u", type=float, required=True)
    p.add_argument("--v", type=float, required=True)
    p.add_argument("--json-report", action="store_true")
    p.set_defaults(func=cmd_eval)
    return parser


def _fail(category, detail, code):
    print(f"error: {category}: {detail}", file=sys.stderr)
    return code


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    if getattr(args, "res", 2) < 2:
        return _fail("InputError", f"--res must be >= 2, got {args.res}", EXIT_INPUT)
    try:
        return args.func(args)
    except (InputError, TopologyError, GeometryError) as exc:
        return _fail(exc.category, exc, EXIT_INPUT)
    except HermG1Error as exc:
        return _fail(exc.category, exc, EXIT_INTERNAL)
    except (ValueError, OSError) as exc:
        return _fail("InputError", exc, EXIT_INPUT)
    except Exception as exc:  # noqa: BLE001
        logger.debug("internal error", exc_info=True)
        return _fail("InternalError", f"{type(exc).__name__}: {exc}", EXIT_INTERNAL)


if __name__ == "__main__":
    sys.exit(main())
