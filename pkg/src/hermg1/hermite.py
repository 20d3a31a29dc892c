"""Cubic Hermite curves and bicubic Hermite patches.

Monomial vectors are ``[t**3, t**2, t, 1]`` and the basis functions are
``HERMITE_MATRIX @ monomials(t)``:

    F1 = 2t^3 - 3t^2 + 1     (start point)
    F2 = -2t^3 + 3t^2        (end point)
    F3 = t^3 - 2t^2 + t      (start tangent)
    F4 = t^3 - t^2           (end tangent)

A patch stores one 4x4 control matrix per coordinate, packed as an array of
shape ``(4, 4, 3)``.  Index ``[i, j]`` pairs the u-basis function ``i`` with
the v-basis function ``j``, which gives the usual block layout::

    [ p(0,0)    p(0,1)    pv(0,0)   pv(0,1)  ]
    [ p(1,0)    p(1,1)    pv(1,0)   pv(1,1)  ]
    [ pu(0,0)   pu(0,1)   puv(0,0)  puv(0,1) ]
    [ pu(1,0)   pu(1,1)   puv(1,0)  puv(1,1) ]
"""
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateTangentsError
from .projective import cross3

HERMITE_MATRIX = np.array([
    [2.0, -3.0, 0.0, 1.0],
    [-2.0, 3.0, 0.0, 0.0],
    [1.0, -2.0, 1.0, 0.0],
    [1.0, -1.0, 0.0, 0.0],
])
HERMITE_MATRIX.setflags(write=False)

NORMAL_RTOL = 1e-12
SIDES = ("u0", "u1", "v0", "v1")


def monomials(t, d=0):
    """``[t^3, t^2, t, 1]`` or its ``d``-th derivative, stacked on the last axis."""
    t = np.asarray(t, dtype=float)
    one = np.ones_like(t)
    zero = np.zeros_like(t)
    if d == 0:
        cols = (t ** 3, t ** 2, t, one)
    elif d == 1:
        cols = (3 * t ** 2, 2 * t, one, zero)
    elif d == 2:
        cols = (6 * t, 2 * one, zero, zero)
    else:
        raise ValueError("only derivatives up to order 2 are supported")
    return np.stack(cols, axis=-1)


def basis_values(t):
    return monomials(t) @ HERMITE_MATRIX.T


def basis_derivatives(t):
    return monomials(t, 1) @ HERMITE_MATRIX.T


@dataclass(frozen=True)
class CurveGeometry:
    """Endpoints ``p1``, ``p2`` and end tangents ``p3`` (at t=0), ``p4`` (at t=1)."""

    p1: np.ndarray
    p2: np.ndarray
    p3: np.ndarray
    p4: np.ndarray

    def __post_init__(self):
        for name in ("p1", "p2", "p3", "p4"):
            a = np.array(getattr(self, name), dtype=float)
            if a.shape != (3,) or not np.all(np.isfinite(a)):
                raise ValueError(f"{name} must be a finite 3-vector, got {a!r}")
            a.setflags(write=False)
            object.__setattr__(self, name, a)

    @classmethod
    def from_array(cls, control):
        control = np.asarray(control, dtype=float)
        return cls(*control)

    @property
    def control(self):
        """Control data as a ``(4, 3)`` array, rows p1..p4."""
        return np.stack([self.p1, self.p2, self.p3, self.p4])


def curve_eval(g, t):
    return basis_values(t) @ g.control


def curve_derivative(g, t):
    return basis_derivatives(t) @ g.control


class PatchGeometry:
    """Bicubic Hermite patch.

    ``control`` has shape ``(4, 4, 3)``; ``X``, ``Y`` and ``Z`` are the
    per-coordinate 4x4 views.  Instances are immutable.

    Evaluation contracts the control array with Hermite basis values rather
    than a power-basis coefficient form: at u, v in {0, 1} the basis vectors
    are exact unit vectors, so corners and corner tangents are reproduced
    bit for bit.
    """

    __slots__ = ("control",)

    def __init__(self, control):
        control = np.array(control, dtype=float)
        if control.shape != (4, 4, 3):
            raise ValueError(f"control must have shape (4, 4, 3), got {control.shape}")
        if not np.all(np.isfinite(control)):
            raise ValueError("patch control values must be finite")
        control.setflags(write=False)
        object.__setattr__(self, "control", control)

    def __setattr__(self, name, value):
        raise AttributeError("PatchGeometry is immutable")

    @classmethod
    def from_xyz(cls, X, Y, Z):
        return cls(np.stack([X, Y, Z], axis=-1))

    @classmethod
    def from_blocks(cls, positions, u_tangents, v_tangents, twists=None):
        """Assemble from ``(2, 2, 3)`` blocks indexed ``[i, j]`` = corner (u=i, v=j)."""
        control = np.zeros((4, 4, 3))
        control[:2, :2] = positions
        control[2:, :2] = u_tangents
        control[:2, 2:] = v_tangents
        if twists is not None:
            control[2:, 2:] = twists
        return cls(control)

    @property
    def X(self):
        return self.control[..., 0]

    @property
    def Y(self):
        return self.control[..., 1]

    @property
    def Z(self):
        return self.control[..., 2]

    @property
    def positions(self):
        return self.control[:2, :2]

    @property
    def u_tangents(self):
        return self.control[2:, :2]

    @property
    def v_tangents(self):
        return self.control[:2, 2:]

    @property
    def twists(self):
        return self.control[2:, 2:]

    def evaluate(self, u, v, du=0, dv=0):
        """Point (or partial derivative) at broadcastable parameter arrays."""
        fu = monomials(u, du) @ HERMITE_MATRIX.T
        fv = monomials(v, dv) @ HERMITE_MATRIX.T
        return np.einsum("...i,ijk,...j->...k", fu, self.control, fv)

    def __eq__(self, other):
        if not isinstance(other, PatchGeometry):
            return NotImplemented
        return np.array_equal(self.control, other.control)

    def __hash__(self):
        return hash(self.control.tobytes())

    def __repr__(self):
        return f"PatchGeometry(corners={self.positions.reshape(4, 3).tolist()})"


def patch_eval(g, u, v):
    return g.evaluate(u, v)


def patch_partial_u(g, u, v):
    return g.evaluate(u, v, du=1)


def patch_partial_v(g, u, v):
    return g.evaluate(u, v, dv=1)


def patch_twist(g, u, v):
    return g.evaluate(u, v, du=1, dv=1)


def patch_normal(g, u, v):
    """Unnormalized normal ``pu x pv`` at a single parameter point."""
    pu = patch_partial_u(g, u, v)
    pv = patch_partial_v(g, u, v)
    n = cross3(pu, pv)
    if np.linalg.norm(n) <= NORMAL_RTOL * np.linalg.norm(pu) * np.linalg.norm(pv):
        raise DegenerateTangentsError(f"partials are parallel or zero at (u, v) = ({u}, {v})")
    return n


def boundary_curve(g, side):
    """Hermite control data of one boundary: ``u0``, ``u1`` (curves in v) or ``v0``, ``v1``.

    ``u0`` runs along v at u=0 from p(0,0) to p(0,1); ``v0`` runs along u at
    v=0 from p(0,0) to p(1,0).
    """
    c = g.control
    if side == "u0":
        return CurveGeometry.from_array(c[0, :])
    if side == "u1":
        return CurveGeometry.from_array(c[1, :])
    if side == "v0":
        return CurveGeometry.from_array(c[:, 0])
    if side == "v1":
        return CurveGeometry.from_array(c[:, 1])
    raise ValueError(f"unknown side {side!r}; expected one of {SIDES}")


def side_parameters(side, t):
    """Map a curve parameter on ``side`` to patch parameters ``(u, v)``."""
    t = np.asarray(t, dtype=float)
    fixed = {"u0": 0.0, "u1": 1.0, "v0": 0.0, "v1": 1.0}[side]
    fixed = np.full_like(t, fixed)
    if side[0] == "u":
        return fixed, t
    return t, fixed
