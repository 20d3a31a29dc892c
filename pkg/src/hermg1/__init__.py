"""Geometrically continuous bicubic Hermite patch networks over quad meshes."""
from .continuity import (
    CornerStar, NormalPolicy, TangentSlot, normal_from_tangents, project_tangent,
    solve_corner, verify_boundary_c0, verify_corner,
)
from .hermite import (
    HERMITE_MATRIX, CurveGeometry, PatchGeometry, basis_values, boundary_curve, curve_derivative,
    curve_eval, patch_eval, patch_normal, patch_partial_u, patch_partial_v,
)
from .mesh import TriangleMesh, export_obj, tessellate, weld
from .network import (
    CornerRecord, PatchNetwork, TwistPolicy, build_network, demo_cube, solve_network, verify_network,
)
from .projective import cross3, cross4, dehomogenize, normalize_projective, null_space_2x3

__version__ = "0.1.0"
