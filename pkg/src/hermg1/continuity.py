"""Corner-level geometric continuity.

At a corner shared by any number of patches, every incident patch's two
corner tangents must be orthogonal to one common normal.  The normal comes
from a :class:`NormalPolicy`; seed tangents are then moved onto the tangent
plane by orthogonal projection, which is the smallest change that satisfies
each scalar condition.
"""
import enum
from dataclasses import dataclass, field, replace
from typing import Hashable, Optional

import numpy as np

from .errors import DegenerateTangentsError, ProjectionCollapseError
from .hermite import patch_normal, side_parameters
from .projective import cross3

RESIDUAL_TOL = 1e-10
COLLAPSE_RTOL = 1e-10
DEGENERATE_RTOL = 1e-12


class NormalPolicy(enum.Enum):
    PRESCRIBED = "prescribed"
    FIRST_SLOT = "first_slot"
    AVERAGE_CROSS = "average_cross"


@dataclass(frozen=True)
class TangentSlot:
    """One patch corner incident to a mesh corner.

    ``t_u`` and ``t_v`` are the patch's own partial derivatives at that
    corner, expressed in its (u, v) frame.
    """

    patch_id: Hashable
    corner_code: tuple
    t_u: np.ndarray
    t_v: np.ndarray

    def __post_init__(self):
        for name in ("t_u", "t_v"):
            a = np.array(getattr(self, name), dtype=float)
            if a.shape != (3,) or not np.all(np.isfinite(a)):
                raise ValueError(f"slot {self.patch_id}: {name} must be a finite 3-vector")
            a.setflags(write=False)
            object.__setattr__(self, name, a)
        object.__setattr__(self, "corner_code", tuple(self.corner_code))


@dataclass(frozen=True)
class CornerStar:
    position: np.ndarray
    normal: Optional[np.ndarray] = None
    slots: tuple = ()
    corner_id: Hashable = None

    def __post_init__(self):
        p = np.array(self.position, dtype=float)
        p.setflags(write=False)
        object.__setattr__(self, "position", p)
        if self.normal is not None:
            n = np.array(self.normal, dtype=float)
            n.setflags(write=False)
            object.__setattr__(self, "normal", n)
        object.__setattr__(self, "slots", tuple(self.slots))

    @property
    def valence(self):
        return len(self.slots)


def normal_from_tangents(t_u, t_v):
    """Unit solution of the 2x3 system ``[t_u; t_v] n = 0``."""
    t_u = np.asarray(t_u, dtype=float)
    t_v = np.asarray(t_v, dtype=float)
    n = cross3(t_u, t_v)
    norm = np.linalg.norm(n)
    if norm == 0.0 or norm <= DEGENERATE_RTOL * np.linalg.norm(t_u) * np.linalg.norm(t_v):
        raise DegenerateTangentsError("tangents are parallel or zero")
    return n / norm


def project_tangent(normal, t):
    """Remove the normal component of ``t``: ``t - (n.t) n``."""
    normal = np.asarray(normal, dtype=float)
    t = np.asarray(t, dtype=float)
    out = t - np.dot(normal, t) * normal
    if np.linalg.norm(out) <= COLLAPSE_RTOL * np.linalg.norm(t):
        raise ProjectionCollapseError("tangent is parallel to the normal")
    return out


def corner_normal(corner, policy=None):
    """Unit normal for ``corner`` under ``policy``.

    With ``policy=None`` a prescribed normal wins when present, otherwise the
    normalized sum of the per-slot cross products is used.
    """
    if policy is None:
        policy = NormalPolicy.PRESCRIBED if corner.normal is not None else NormalPolicy.AVERAGE_CROSS
    policy = NormalPolicy(policy)
    if policy is NormalPolicy.PRESCRIBED:
        if corner.normal is None:
            raise ValueError(f"corner {corner.corner_id}: prescribed policy without a normal")
        norm = np.linalg.norm(corner.normal)
        if norm == 0.0:
            raise DegenerateTangentsError("prescribed normal is zero", corner=corner.corner_id)
        return corner.normal / norm
    if not corner.slots:
        raise DegenerateTangentsError("no slots to derive a normal from", corner=corner.corner_id)
    if policy is NormalPolicy.FIRST_SLOT:
        s = corner.slots[0]
        try:
            return normal_from_tangents(s.t_u, s.t_v)
        except DegenerateTangentsError as exc:
            raise DegenerateTangentsError(str(exc), corner=corner.corner_id, slot=s.patch_id) from None
    total = np.zeros(3)
    for s in corner.slots:
        try:
            total += normal_from_tangents(s.t_u, s.t_v)
        except DegenerateTangentsError as exc:
            raise DegenerateTangentsError(str(exc), corner=corner.corner_id, slot=s.patch_id) from None
    norm = np.linalg.norm(total)
    if norm <= DEGENERATE_RTOL * len(corner.slots):
        raise DegenerateTangentsError("slot normals cancel out", corner=corner.corner_id)
    return total / norm


def _project_slot(corner_id, normal, slot, rescale):
    projected = []
    for t in (slot.t_u, slot.t_v):
        try:
            p = project_tangent(normal, t)
        except ProjectionCollapseError as exc:
            raise ProjectionCollapseError(
                f"corner {corner_id}, patch {slot.patch_id}: {exc}",
                corner=corner_id, slot=slot.patch_id) from None
        if rescale:
            p = p * (np.linalg.norm(t) / np.linalg.norm(p))
        projected.append(p)
    t_u, t_v = projected
    if np.linalg.norm(cross3(t_u, t_v)) <= RESIDUAL_TOL * np.linalg.norm(t_u) * np.linalg.norm(t_v):
        raise DegenerateTangentsError(
            f"corner {corner_id}, patch {slot.patch_id}: projected tangents are parallel",
            corner=corner_id, slot=slot.patch_id)
    return replace(slot, t_u=t_u, t_v=t_v)


def solve_corner(corner, policy=None, rescale=False):
    """Return a copy of ``corner`` whose slot tangents all lie in the tangent plane.

    Slots are projected independently, so the result does not depend on the
    slot order.  ``rescale`` restores each tangent's seed magnitude.
    """
    normal = corner_normal(corner, policy)
    slots = tuple(_project_slot(corner.corner_id, normal, s, rescale) for s in corner.slots)
    return replace(corner, normal=normal, slots=slots)


@dataclass
class CornerReport:
    corner_id: Hashable
    slot_residuals: list = field(default_factory=list)
    max_u: float = 0.0
    max_v: float = 0.0
    vacuous: bool = False

    @property
    def max_residual(self):
        return max(self.max_u, self.max_v)

    def passes(self, tol=RESIDUAL_TOL):
        return self.max_residual <= tol


def _normalized_residual(n, t):
    norm = np.linalg.norm(t)
    if norm == 0.0:
        return 0.0
    return abs(float(np.dot(n, t))) / norm


def verify_corner(corner):
    """Measure ``|n.t| / |t|`` for every slot tangent; never raises."""
    report = CornerReport(corner.corner_id, vacuous=not corner.slots)
    if not corner.slots or corner.normal is None:
        return report
    n = corner.normal / np.linalg.norm(corner.normal)
    for s in corner.slots:
        ru = _normalized_residual(n, s.t_u)
        rv = _normalized_residual(n, s.t_v)
        report.slot_residuals.append((s.patch_id, s.corner_code, ru, rv))
        report.max_u = max(report.max_u, ru)
        report.max_v = max(report.max_v, rv)
    return report


def _matched_parameters(samples, reversed_):
    t = np.linspace(0.0, 1.0, samples)
    return t, (1.0 - t if reversed_ else t)


def verify_boundary_c0(patch_a, side_a, patch_b, side_b, samples=33, reversed=False):
    """Largest distance between two boundary restrictions at matched parameters.

    With ``reversed`` the b side is sampled at ``1 - t``.
    """
    ta, tb = _matched_parameters(samples, reversed)
    pa = patch_a.evaluate(*side_parameters(side_a, ta))
    pb = patch_b.evaluate(*side_parameters(side_b, tb))
    return float(np.max(np.linalg.norm(pa - pb, axis=-1)))


@dataclass
class NormalDeviation:
    max_angle: float
    angles: np.ndarray
    degenerate_samples: list


def measure_normal_deviation_along_boundary(patch_a, side_a, patch_b, side_b, samples=33, reversed=False):
    """Angles between the two patches' unit normals along a shared boundary.

    Samples where either normal is undefined are listed in
    ``degenerate_samples`` and reported as NaN.
    """
    ta, tb = _matched_parameters(samples, reversed)
    angles = np.full(samples, np.nan)
    bad = []
    for k in range(samples):
        try:
            na = patch_normal(patch_a, *side_parameters(side_a, ta[k]))
            nb = patch_normal(patch_b, *side_parameters(side_b, tb[k]))
        except DegenerateTangentsError:
            bad.append(k)
            continue
        angles[k] = np.arctan2(np.linalg.norm(cross3(na, nb)), np.dot(na, nb))
    finite = angles[np.isfinite(angles)]
    max_angle = float(finite.max()) if finite.size else float("nan")
    return NormalDeviation(max_angle, angles, bad)


__all__ = [
    "NormalPolicy", "TangentSlot", "CornerStar", "CornerReport", "NormalDeviation",
    "normal_from_tangents", "project_tangent", "corner_normal", "solve_corner",
    "verify_corner", "verify_boundary_c0", "measure_normal_deviation_along_boundary",
]
