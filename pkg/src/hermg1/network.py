"""Quad-mesh patch networks: topology, corner solving and patch assembly.

Face corners are listed in parametric order (0,0) -> (1,0) -> (1,1) -> (0,1).
Each mesh corner gathers one tangent slot per incident face; seeds point
along the face's two edges leaving the corner, signed into the face's own
(u, v) frame.  Because both faces on a shared edge receive the same projected
seed (up to sign), shared boundary curves have identical control data.
"""
import enum
import logging
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .continuity import (
    CornerStar, NormalPolicy, TangentSlot, measure_normal_deviation_along_boundary,
    solve_corner, verify_boundary_c0, verify_corner,
)
from .errors import DegenerateFaceError, InvalidIndexError, NonManifoldEdgeError
from .hermite import PatchGeometry, patch_partial_u, patch_partial_v

logger = logging.getLogger(__name__)

# local corner index -> (u, v) corner code
CORNER_CODES = ((0, 0), (1, 0), (1, 1), (0, 1))
CODE_TO_LOCAL = {code: k for k, code in enumerate(CORNER_CODES)}
# side -> (start local, end local) in the direction of increasing parameter
SIDE_CORNERS = {"v0": (0, 1), "u1": (1, 2), "v1": (3, 2), "u0": (0, 3)}

C0_RTOL = 1e-12


class TwistPolicy(enum.Enum):
    ZERO = "zero"
    ADINI = "adini"


@dataclass(frozen=True)
class CornerRecord:
    position: np.ndarray
    normal: Optional[np.ndarray] = None

    def __post_init__(self):
        p = np.array(self.position, dtype=float)
        if p.shape != (3,) or not np.all(np.isfinite(p)):
            raise ValueError(f"corner position must be a finite 3-vector, got {self.position!r}")
        p.setflags(write=False)
        object.__setattr__(self, "position", p)
        if self.normal is not None:
            n = np.array(self.normal, dtype=float)
            if n.shape != (3,) or not np.all(np.isfinite(n)):
                raise ValueError(f"corner normal must be a finite 3-vector, got {self.normal!r}")
            n.setflags(write=False)
            object.__setattr__(self, "normal", n)

    def __eq__(self, other):
        if not isinstance(other, CornerRecord):
            return NotImplemented
        if not np.array_equal(self.position, other.position):
            return False
        if self.normal is None or other.normal is None:
            return self.normal is None and other.normal is None
        return np.array_equal(self.normal, other.normal)


@dataclass(frozen=True)
class EdgeUse:
    face: int
    side: str
    start: int
    end: int


@dataclass(frozen=True)
class Edge:
    corners: tuple
    uses: tuple

    @property
    def shared(self):
        return len(self.uses) == 2

    @property
    def reversed(self):
        """True when the two faces traverse the edge in opposite parameter directions."""
        return self.shared and self.uses[0].start != self.uses[1].start


@dataclass(frozen=True)
class PatchNetwork:
    corners: tuple
    faces: tuple
    edges: tuple
    incidence: tuple
    consistently_oriented: bool

    @property
    def valences(self):
        return [len(inc) for inc in self.incidence]

    @property
    def shared_edges(self):
        return [e for e in self.edges if e.shared]

    @property
    def boundary_edges(self):
        return [e for e in self.edges if not e.shared]


def build_network(corners, faces):
    """Validate a quad mesh and derive its edge table.

    ``corners`` holds CornerRecord values (or bare positions); ``faces``
    holds 4-tuples of corner indices.
    """
    corners = tuple(c if isinstance(c, CornerRecord) else CornerRecord(c) for c in corners)
    checked = []
    for f, face in enumerate(faces):
        face = tuple(int(i) for i in face)
        if len(face) != 4:
            raise DegenerateFaceError(f"face {f} has {len(face)} corners; only quads are supported")
        for i in face:
            if not 0 <= i < len(corners):
                raise InvalidIndexError(f"face {f} references corner {i}, valid range is 0..{len(corners) - 1}")
        if len(set(face)) != 4:
            raise DegenerateFaceError(f"face {f} repeats a corner: {face}")
        checked.append(face)

    uses = defaultdict(list)
    for f, face in enumerate(checked):
        for side, (a, b) in SIDE_CORNERS.items():
            start, end = face[a], face[b]
            uses[tuple(sorted((start, end)))].append(EdgeUse(f, side, start, end))
    edges = []
    for key in sorted(uses):
        if len(uses[key]) > 2:
            faces_on = [u.face for u in uses[key]]
            raise NonManifoldEdgeError(f"edge {key} is shared by faces {faces_on}")
        edges.append(Edge(key, tuple(uses[key])))

    # cyclic traversal c0->c1->c2->c3: each directed edge may appear once
    directed = set()
    oriented = True
    for face in checked:
        for k in range(4):
            d = (face[k], face[(k + 1) % 4])
            if d in directed:
                oriented = False
            directed.add(d)

    incidence = [[] for _ in corners]
    for f, face in enumerate(checked):
        for k, c in enumerate(face):
            incidence[c].append((f, k))
    return PatchNetwork(corners, tuple(checked), tuple(edges),
                        tuple(tuple(i) for i in incidence), oriented)


def adini_twist(positions, u_tangents, v_tangents, corner_code):
    """Adini twist estimate at one corner from boundary data.

    All inputs are ``(2, 2, 3)`` blocks indexed by corner (u, v).  The value
    is the mixed partial of the bilinearly blended Coons patch built on the
    four boundary curves.
    """
    P = np.asarray(positions, dtype=float)
    Pu = np.asarray(u_tangents, dtype=float)
    Pv = np.asarray(v_tangents, dtype=float)
    i, j = corner_code
    bilinear = P[1, 1] - P[1, 0] - P[0, 1] + P[0, 0]
    return (Pv[1, j] - Pv[0, j]) + (Pu[i, 1] - Pu[i, 0]) - bilinear


def _seed_slot(net, corner, face_index, local, chord_scale):
    face = net.faces[face_index]
    i, j = CORNER_CODES[local]
    here = net.corners[corner].position
    u_nb = net.corners[face[CODE_TO_LOCAL[(1 - i, j)]]].position
    v_nb = net.corners[face[CODE_TO_LOCAL[(i, 1 - j)]]].position
    t_u = (1.0 if i == 0 else -1.0) * chord_scale * (u_nb - here)
    t_v = (1.0 if j == 0 else -1.0) * chord_scale * (v_nb - here)
    return TangentSlot(face_index, (i, j), t_u, t_v)


def corner_star(net, corner, chord_scale=1.0):
    """Unsolved star of ``corner`` with edge-chord seed tangents."""
    rec = net.corners[corner]
    slots = [_seed_slot(net, corner, f, k, chord_scale) for f, k in net.incidence[corner]]
    return CornerStar(rec.position, rec.normal, slots, corner_id=corner)


@dataclass
class SolvedNetwork:
    network: PatchNetwork
    stars: tuple
    patches: tuple
    normal_policy: Optional[NormalPolicy] = None
    twist: TwistPolicy = TwistPolicy.ZERO
    chord_scale: float = 1.0


def solve_network(net, normal_policy=None, twist=TwistPolicy.ZERO, chord_scale=1.0,
                  rescale=False, corner_order=None):
    """Solve every corner star, then instantiate one patch per face.

    ``normal_policy=None`` uses each corner's prescribed normal when present
    and the average of the slot normals otherwise.  ``corner_order`` only
    changes the order in which corners are visited.
    """
    if chord_scale <= 0:
        raise ValueError(f"chord_scale must be positive, got {chord_scale}")
    policy = None if normal_policy is None else NormalPolicy(normal_policy)
    twist = TwistPolicy(twist)
    order = range(len(net.corners)) if corner_order is None else corner_order

    stars = [None] * len(net.corners)
    for c in order:
        star = corner_star(net, c, chord_scale)
        if star.slots:
            star = solve_corner(star, policy, rescale=rescale)
        stars[c] = star

    patches = []
    for f, face in enumerate(net.faces):
        pos = np.empty((2, 2, 3))
        tu = np.empty((2, 2, 3))
        tv = np.empty((2, 2, 3))
        for k, c in enumerate(face):
            i, j = CORNER_CODES[k]
            slot = next(s for s in stars[c].slots if s.patch_id == f and s.corner_code == (i, j))
            pos[i, j] = net.corners[c].position
            tu[i, j] = slot.t_u
            tv[i, j] = slot.t_v
        tw = np.zeros((2, 2, 3))
        if twist is TwistPolicy.ADINI:
            for code in CORNER_CODES:
                tw[code] = adini_twist(pos, tu, tv, code)
        patches.append(PatchGeometry.from_blocks(pos, tu, tv, tw))
    logger.debug("solved network: %d corners, %d patches", len(stars), len(patches))
    return SolvedNetwork(net, tuple(stars), tuple(patches), policy, twist, chord_scale)


def model_scale(net):
    """Bounding-box diagonal of the corner positions (at least 1e-300)."""
    if not net.corners:
        return 1.0
    pts = np.array([c.position for c in net.corners])
    return max(float(np.linalg.norm(pts.max(axis=0) - pts.min(axis=0))), 1e-300)


@dataclass
class EdgeReport:
    corners: tuple
    faces: tuple
    c0_gap: float
    max_normal_angle: float
    degenerate_samples: list = field(default_factory=list)


@dataclass
class NetworkReport:
    corners: list
    edges: list
    scale: float
    residual_tol: float
    c0_rtol: float

    @property
    def max_corner_residual(self):
        return max((r.max_residual for r in self.corners), default=0.0)

    @property
    def max_c0_gap(self):
        return max((e.c0_gap for e in self.edges), default=0.0)

    @property
    def corners_pass(self):
        return all(r.passes(self.residual_tol) for r in self.corners)

    @property
    def edges_pass(self):
        return all(e.c0_gap <= self.c0_rtol * self.scale for e in self.edges)

    @property
    def passes(self):
        return self.corners_pass and self.edges_pass


def measured_star(solved, corner):
    """Star rebuilt from the instantiated patches' actual corner partials."""
    star = solved.stars[corner]
    slots = []
    for f, k in solved.network.incidence[corner]:
        i, j = CORNER_CODES[k]
        g = solved.patches[f]
        slots.append(TangentSlot(f, (i, j), patch_partial_u(g, i, j), patch_partial_v(g, i, j)))
    return CornerStar(star.position, star.normal, slots, corner_id=corner)


def verify_network(solved, samples=33, residual_tol=1e-10, c0_rtol=C0_RTOL):
    """Corner residuals, shared-edge C0 gaps and normal deviations of a solved network."""
    net = solved.network
    corner_reports = [verify_corner(measured_star(solved, c)) for c in range(len(net.corners))]
    edge_reports = []
    for e in net.shared_edges:
        a, b = e.uses
        pa, pb = solved.patches[a.face], solved.patches[b.face]
        gap = verify_boundary_c0(pa, a.side, pb, b.side, samples, reversed=e.reversed)
        dev = measure_normal_deviation_along_boundary(pa, a.side, pb, b.side, samples, reversed=e.reversed)
        edge_reports.append(EdgeReport(e.corners, (a.face, b.face), gap, dev.max_angle,
                                       dev.degenerate_samples))
    return NetworkReport(corner_reports, edge_reports, model_scale(net), residual_tol, c0_rtol)


CUBE_FACES = (
    (0, 3, 2, 1),  # z = -1
    (4, 5, 6, 7),  # z = +1
    (0, 1, 5, 4),  # y = -1
    (3, 7, 6, 2),  # y = +1
    (0, 4, 7, 3),  # x = -1
    (1, 2, 6, 5),  # x = +1
)


def demo_cube(radius_scale=1.0):
    """Cube with corners at ``radius_scale * (+-1, +-1, +-1)`` and sphere normals.

    Faces are ordered so that ``pu x pv`` points outward.
    """
    if radius_scale <= 0:
        raise ValueError(f"radius_scale must be positive, got {radius_scale}")
    signs = [(-1, -1, -1), (1, -1, -1), (1, 1, -1), (-1, 1, -1),
             (-1, -1, 1), (1, -1, 1), (1, 1, 1), (-1, 1, 1)]
    corners = []
    for s in signs:
        p = radius_scale * np.array(s, dtype=float)
        corners.append(CornerRecord(p, np.array(s, dtype=float) / np.sqrt(3.0)))
    return build_network(corners, CUBE_FACES)


@dataclass
class Sphericity:
    center: np.ndarray
    radius: float
    min_deviation: float
    max_deviation: float
    mid_face_deviations: list


def sphericity(solved, samples=9):
    """Radial deviation of the surface from the sphere through the corners.

    The centre is the corner centroid and the radius the mean corner
    distance.  Diagnostic only.
    """
    pts = np.array([c.position for c in solved.network.corners])
    center = pts.mean(axis=0)
    radius = float(np.mean(np.linalg.norm(pts - center, axis=1)))
    t = np.linspace(0.0, 1.0, samples)
    uu, vv = np.meshgrid(t, t, indexing="ij")
    devs = []
    mid = []
    for g in solved.patches:
        r = np.linalg.norm(g.evaluate(uu, vv) - center, axis=-1) - radius
        devs.append(r)
        mid.append(float(np.linalg.norm(g.evaluate(0.5, 0.5) - center) - radius))
    devs = np.concatenate([d.ravel() for d in devs])
    return Sphericity(center, radius, float(devs.min()), float(devs.max()), mid)
