"""Exit criteria.  Each test prints one PASS/FAIL line with its measured value.

Run directly (``python tests/test_acceptance.py``) or through pytest; the
lines are repeated in pytest's terminal summary.
"""
import json
import time

import numpy as np
import pytest

from hermg1.cli import main
from hermg1.continuity import CornerStar, NormalPolicy, TangentSlot, project_tangent, solve_corner, verify_corner
from hermg1.hermite import (
    CurveGeometry, PatchGeometry, curve_derivative, curve_eval, patch_eval, patch_normal,
    patch_partial_u, patch_partial_v, side_parameters,
)
from hermg1.mesh import edge_stats, load_obj, merge_meshes, tessellate, weld
from hermg1.network import CORNER_CODES, demo_cube, solve_network, sphericity, verify_network
from hermg1.projective import null_space_2x3, null_space_3x4, normalize_projective
from oracles import double_sum_eval, gauss_null_vector

RESULTS = []


def record(number, name, ok, detail, elapsed, budget):
    ok = bool(ok) and elapsed < budget
    line = f"[{'PASS' if ok else 'FAIL'}] #{number} {name}: {detail}; {elapsed:.3f}s (< {budget:g}s)"
    RESULTS.append(line)
    print(line)
    return ok


def rng_for(number):
    return np.random.default_rng(1000 + number)


def test_1_cross_product_matches_elimination():
    rng = rng_for(1)
    systems3 = rng.normal(size=(1000, 2, 3))
    systems4 = rng.normal(size=(1000, 3, 4))
    start = time.perf_counter()
    worst = 0.0
    for A in systems3:
        diff = normalize_projective(null_space_2x3(A)) - normalize_projective(gauss_null_vector(A))
        worst = max(worst, np.abs(diff).max())
    for A in systems4:
        diff = normalize_projective(null_space_3x4(A)) - normalize_projective(gauss_null_vector(A))
        worst = max(worst, np.abs(diff).max())
    elapsed = time.perf_counter() - start
    assert record(1, "cross product vs Gaussian elimination (1000 2x3 + 1000 3x4)",
                  worst <= 1e-9, f"max canonical diff {worst:.2e} (tol 1e-9)", elapsed, 1.0)


def test_2_hermite_endpoint_contract():
    rng = rng_for(2)
    curves = rng.normal(size=(100, 4, 3))
    patches = rng.normal(size=(100, 4, 4, 3))
    start = time.perf_counter()
    worst = 0.0
    for c in curves:
        g = CurveGeometry.from_array(c)
        scale = np.abs(c).max()
        got = [curve_eval(g, 0.0), curve_eval(g, 1.0), curve_derivative(g, 0.0), curve_derivative(g, 1.0)]
        worst = max(worst, max(np.abs(a - b).max() for a, b in zip(got, c)) / scale)
    for c in patches:
        g = PatchGeometry(c)
        scale = np.abs(c).max()
        for i, j in CORNER_CODES:
            worst = max(worst,
                        np.abs(patch_eval(g, i, j) - c[i, j]).max() / scale,
                        np.abs(patch_partial_u(g, i, j) - c[2 + i, j]).max() / scale,
                        np.abs(patch_partial_v(g, i, j) - c[i, 2 + j]).max() / scale)
    elapsed = time.perf_counter() - start
    assert record(2, "Hermite endpoint contract (100 curves, 100 patches)",
                  worst <= 1e-13, f"max relative error {worst:.2e} (tol 1e-13)", elapsed, 1.0)


def test_3_degree_claims():
    rng = rng_for(3)
    controls = rng.normal(size=(100, 4, 4, 3))
    t9 = np.linspace(0, 1, 9)
    t17 = np.linspace(0, 1, 17)
    start = time.perf_counter()
    worst_boundary = worst_diag = 0.0
    for c in controls:
        g = PatchGeometry(c)
        scale = np.abs(c).max()
        for side in ("u0", "u1", "v0", "v1"):
            pts = g.evaluate(*side_parameters(side, t9))
            worst_boundary = max(worst_boundary, np.abs(np.diff(pts, n=4, axis=0)).max() / scale)
        for pts in (g.evaluate(t17, t17), g.evaluate(t17, 1 - t17)):
            worst_diag = max(worst_diag, np.abs(np.diff(pts, n=7, axis=0)).max() / scale)
    elapsed = time.perf_counter() - start
    ok = worst_boundary <= 1e-9 and worst_diag <= 1e-8
    assert record(3, "degree 3 boundaries / degree 6 diagonals (100 patches)", ok,
                  f"4th diff {worst_boundary:.2e} (tol 1e-9), 7th diff {worst_diag:.2e} (tol 1e-8)",
                  elapsed, 1.0)


def test_4_normal_orthogonal_to_partials():
    rng = rng_for(4)
    controls = rng.normal(size=(100, 4, 4, 3))
    grid = np.linspace(0, 1, 5)
    start = time.perf_counter()
    worst = 0.0
    for c in controls:
        g = PatchGeometry(c)
        for u in grid:
            for v in grid:
                pu, pv = patch_partial_u(g, u, v), patch_partial_v(g, u, v)
                n = patch_normal(g, u, v)
                sn = np.linalg.norm(n)
                worst = max(worst, abs(n @ pu) / (sn * np.linalg.norm(pu)),
                            abs(n @ pv) / (sn * np.linalg.norm(pv)))
    elapsed = time.perf_counter() - start
    assert record(4, "n . p_u = n . p_v = 0 (100 patches x 25 points)",
                  worst <= 1e-10, f"max normalized residual {worst:.2e} (tol 1e-10)", elapsed, 2.0)


def random_star(rng, valence):
    normal = rng.normal(size=3)
    normal /= np.linalg.norm(normal)
    a = np.cross(normal, rng.normal(size=3))
    a /= np.linalg.norm(a)
    b = np.cross(normal, a)
    angles = np.sort(rng.uniform(0, 2 * np.pi, valence))
    slots = []
    for k, theta in enumerate(angles):
        spread = rng.uniform(0.4, 1.2)
        d1 = np.cos(theta) * a + np.sin(theta) * b
        d2 = np.cos(theta + spread) * a + np.sin(theta + spread) * b
        slots.append(TangentSlot(k, (0, 0), rng.uniform(0.2, 3) * d1 + rng.normal(scale=0.4) * normal,
                                 rng.uniform(0.2, 3) * d2 + rng.normal(scale=0.4) * normal))
    return CornerStar(rng.normal(size=3), normal, slots)


def test_5_corner_solving_all_valences():
    rng = rng_for(5)
    policies = list(NormalPolicy)
    stars = [random_star(rng, 2 + k % 7) for k in range(200)]
    start = time.perf_counter()
    worst = worst_idem = 0.0
    for k, star in enumerate(stars):
        solved = solve_corner(star, policies[k % 3])
        worst = max(worst, verify_corner(solved).max_residual)
        for s in solved.slots:
            for t in (s.t_u, s.t_v):
                again = project_tangent(solved.normal, t)
                worst_idem = max(worst_idem, np.linalg.norm(again - t) / np.linalg.norm(t))
    elapsed = time.perf_counter() - start
    valences = sorted({s.valence for s in stars})
    ok = worst <= 1e-10 and worst_idem <= 1e-15 and valences == list(range(2, 9))
    assert record(5, "corner conditions, valence 2-8 (200 corners)", ok,
                  f"max residual {worst:.2e} (tol 1e-10), idempotence {worst_idem:.2e} (tol 1e-15)",
                  elapsed, 1.0)


def test_6_cube_demo(tmp_path, capsys):
    start = time.perf_counter()
    obj = tmp_path / "cube.obj"
    code = main(["demo-cube", "--out", str(obj), "--res", "16", "--weld", "--json-report"])
    cli_report = json.loads(capsys.readouterr().out)

    net = demo_cube(1.0)
    solved = solve_network(net)
    report = verify_network(solved, samples=33)
    valence_ok = net.valences == [3] * 8
    corners_ok = len(report.corners) == 8 and all(r.passes(1e-10) for r in report.corners)
    edges_ok = len(report.edges) == 12 and report.max_c0_gap <= 1e-12 * report.scale
    welded = weld(merge_meshes([tessellate(g, 16) for g in solved.patches]))
    watertight = edge_stats(welded).watertight and edge_stats(load_obj(obj)).watertight
    radii = [np.linalg.norm(patch_eval(solved.patches[f], *CORNER_CODES[k]))
             for f in range(6) for k in range(4)]
    radius_err = max(abs(r - np.sqrt(3.0)) for r in radii)
    sph = sphericity(solved)
    elapsed = time.perf_counter() - start
    ok = (code == 0 and cli_report["passes"] and valence_ok and corners_ok and edges_ok
          and watertight and radius_err <= 4 * np.finfo(float).eps)
    detail = (f"exit {code}, corner residual {report.max_corner_residual:.2e} (tol 1e-10), "
              f"C0 gap {report.max_c0_gap:.2e} (tol {1e-12 * report.scale:.2e}), "
              f"watertight {watertight}, corner radius error {radius_err:.1e}, "
              f"mid-face radial deviation {np.mean(sph.mid_face_deviations):.4f} (diagnostic)")
    assert record(6, "cube demo, valence-3 corners", ok, detail, elapsed, 5.0)


def test_7_tensor_product_oracle():
    rng = rng_for(7)
    controls = rng.normal(size=(100, 4, 4, 3))
    params = rng.uniform(0, 1, size=(100, 25, 2))
    start = time.perf_counter()
    worst = 0.0
    for c, uv in zip(controls, params):
        g = PatchGeometry(c)
        scale = np.abs(c).max()
        for u, v in uv:
            worst = max(worst, np.abs(patch_eval(g, u, v) - double_sum_eval(c, u, v)).max() / scale)
    elapsed = time.perf_counter() - start
    assert record(7, "tensor product vs double sum (100 patches x 25 points)",
                  worst <= 1e-12, f"max relative diff {worst:.2e} (tol 1e-12)", elapsed, 1.0)


def test_8_derivatives_vs_finite_differences():
    rng = rng_for(8)
    h = 1e-5
    curves = rng.normal(size=(100, 4, 3))
    controls = rng.normal(size=(100, 4, 4, 3))
    params = rng.uniform(0.05, 0.95, size=(100, 3))
    start = time.perf_counter()
    worst = 0.0

    def rel(analytic, fd):
        return np.linalg.norm(analytic - fd) / np.linalg.norm(analytic)

    for c, cp, (t, u, v) in zip(curves, controls, params):
        g = CurveGeometry.from_array(c)
        fd = (curve_eval(g, t + h) - curve_eval(g, t - h)) / (2 * h)
        worst = max(worst, rel(curve_derivative(g, t), fd))
        p = PatchGeometry(cp)
        fu = (patch_eval(p, u + h, v) - patch_eval(p, u - h, v)) / (2 * h)
        fv = (patch_eval(p, u, v + h) - patch_eval(p, u, v - h)) / (2 * h)
        worst = max(worst, rel(patch_partial_u(p, u, v), fu), rel(patch_partial_v(p, u, v), fv))
    elapsed = time.perf_counter() - start
    assert record(8, "analytic vs finite-difference derivatives (100 each)",
                  worst <= 1e-7, f"max relative error {worst:.2e} (tol 1e-7)", elapsed, 1.0)


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q", "-s"]))
