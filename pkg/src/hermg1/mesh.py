"""Triangle meshes: patch tessellation, welding, watertightness and OBJ I/O."""
import logging
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components
from scipy.spatial import cKDTree

from .hermite import NORMAL_RTOL
from .projective import cross3

logger = logging.getLogger(__name__)

WELD_TOL = 1e-9


@dataclass
class TriangleMesh:
    vertices: np.ndarray
    normals: np.ndarray
    triangles: np.ndarray
    warnings: list = field(default_factory=list)

    def __post_init__(self):
        self.vertices = np.asarray(self.vertices, dtype=float).reshape(-1, 3)
        self.normals = np.asarray(self.normals, dtype=float).reshape(-1, 3)
        self.triangles = np.asarray(self.triangles, dtype=np.int64).reshape(-1, 3)

    def validate(self, normal_tol=1e-9):
        """Raise ValueError if an index, normal or triangle is malformed."""
        n = len(self.vertices)
        if self.normals.shape != self.vertices.shape:
            raise ValueError("normals must parallel vertices")
        if self.triangles.size and (self.triangles.min() < 0 or self.triangles.max() >= n):
            raise ValueError("triangle index out of range")
        lengths = np.linalg.norm(self.normals, axis=1)
        if np.any(np.abs(lengths - 1.0) > normal_tol):
            raise ValueError("normals are not unit length")
        t = self.triangles
        if np.any((t[:, 0] == t[:, 1]) | (t[:, 1] == t[:, 2]) | (t[:, 0] == t[:, 2])):
            raise ValueError("degenerate triangle with a repeated index")

    def area(self):
        a, b, c = (self.vertices[self.triangles[:, k]] for k in range(3))
        return float(0.5 * np.linalg.norm(cross3(b - a, c - a), axis=1).sum())


def grid_triangles(n):
    """Two counter-clockwise triangles per cell of an ``(n+1)^2`` grid.

    Vertex ``(i, j)`` (u index i, v index j) has index ``i*(n+1) + j``.
    """
    i, j = np.meshgrid(np.arange(n), np.arange(n), indexing="ij")
    a = (i * (n + 1) + j).ravel()
    b = a + (n + 1)      # (i+1, j)
    c = b + 1            # (i+1, j+1)
    d = a + 1            # (i, j+1)
    tris = np.empty((2 * n * n, 3), dtype=np.int64)
    tris[0::2] = np.stack([a, b, c], axis=1)
    tris[1::2] = np.stack([a, c, d], axis=1)
    return tris


def tessellate(g, n):
    """Sample a patch on a uniform ``(n+1) x (n+1)`` grid.

    Normals are ``pu x pv``, normalized.  Where the partials degenerate the
    nearest valid grid neighbour's normal is used and a warning recorded.
    """
    n = int(n)
    if n < 2:
        raise ValueError(f"grid resolution must be >= 2, got {n}")
    t = np.arange(n + 1) / n
    uu, vv = np.meshgrid(t, t, indexing="ij")
    pts = g.evaluate(uu, vv).reshape(-1, 3)
    pu = g.evaluate(uu, vv, du=1).reshape(-1, 3)
    pv = g.evaluate(uu, vv, dv=1).reshape(-1, 3)
    nrm = cross3(pu, pv)
    lengths = np.linalg.norm(nrm, axis=1)
    bad = lengths <= NORMAL_RTOL * np.linalg.norm(pu, axis=1) * np.linalg.norm(pv, axis=1)
    normals = np.zeros_like(nrm)
    normals[~bad] = nrm[~bad] / lengths[~bad, None]
    warnings = []
    if bad.any():
        good_idx = np.flatnonzero(~bad)
        if good_idx.size == 0:
            raise ValueError("patch has no point with a defined normal")
        ij = np.stack([uu.ravel(), vv.ravel()], axis=1) * n
        tree = cKDTree(ij[good_idx])
        for k in np.flatnonzero(bad):
            _, nearest = tree.query(ij[k])
            normals[k] = normals[good_idx[nearest]]
            i, j = divmod(int(k), n + 1)
            warnings.append(f"degenerate normal at grid ({i}, {j}); copied from neighbour")
        logger.warning("%d degenerate normals replaced", len(warnings))
    return TriangleMesh(pts, normals, grid_triangles(n), warnings)


def merge_meshes(meshes):
    """Concatenate meshes, offsetting triangle indices."""
    verts, norms, tris, warns = [], [], [], []
    offset = 0
    for m in meshes:
        verts.append(m.vertices)
        norms.append(m.normals)
        tris.append(m.triangles + offset)
        warns.extend(m.warnings)
        offset += len(m.vertices)
    if not verts:
        return TriangleMesh(np.zeros((0, 3)), np.zeros((0, 3)), np.zeros((0, 3)))
    return TriangleMesh(np.vstack(verts), np.vstack(norms), np.vstack(tris), warns)


def weld(mesh, tol=WELD_TOL):
    """Merge vertices closer than ``tol``.

    Each cluster keeps its lowest-index vertex position; normals are averaged
    and renormalized.  Triangles collapsed by welding are dropped.
    """
    v = mesh.vertices
    pairs = cKDTree(v).query_pairs(tol, output_type="ndarray")
    graph = coo_matrix((np.ones(len(pairs)), (pairs[:, 0], pairs[:, 1])), shape=(len(v), len(v)))
    _, labels = connected_components(graph, directed=False)
    # relabel clusters in order of first appearance for deterministic output
    first = {}
    for idx, lab in enumerate(labels):
        first.setdefault(lab, idx)
    order = sorted(first, key=first.get)
    new_id = {lab: k for k, lab in enumerate(order)}
    remap = np.array([new_id[lab] for lab in labels], dtype=np.int64)
    verts = v[[first[lab] for lab in order]]
    normals = np.zeros_like(verts)
    np.add.at(normals, remap, mesh.normals)
    lengths = np.linalg.norm(normals, axis=1)
    lengths[lengths == 0] = 1.0
    normals /= lengths[:, None]
    tris = remap[mesh.triangles]
    keep = (tris[:, 0] != tris[:, 1]) & (tris[:, 1] != tris[:, 2]) & (tris[:, 0] != tris[:, 2])
    return TriangleMesh(verts, normals, tris[keep], list(mesh.warnings))


@dataclass
class EdgeStats:
    boundary_edges: int
    interior_edges: int
    nonmanifold_edges: int
    consistently_oriented: bool

    @property
    def watertight(self):
        return self.boundary_edges == 0 and self.nonmanifold_edges == 0


def edge_stats(mesh):
    """Count undirected edges by how many triangles use them."""
    undirected = Counter()
    directed = Counter()
    for a, b, c in mesh.triangles.tolist():
        for e in ((a, b), (b, c), (c, a)):
            directed[e] += 1
            undirected[(min(e), max(e))] += 1
    counts = Counter(undirected.values())
    oriented = all(k == 1 for k in directed.values())
    return EdgeStats(counts.get(1, 0), counts.get(2, 0),
                     sum(v for k, v in counts.items() if k > 2), oriented)


def is_watertight(mesh):
    return edge_stats(mesh).watertight


def _fmt(x):
    # + 0.0 folds negative zero so output does not depend on its sign
    return f"{x + 0.0:.9g}"


def export_obj(meshes, path):
    """Write meshes as one Wavefront OBJ with ``v``, ``vn`` and ``f a//a`` lines."""
    path = Path(path)
    lines = []
    offset = 1
    for m in meshes:
        for x, y, z in m.vertices.tolist():
            lines.append(f"v {_fmt(x)} {_fmt(y)} {_fmt(z)}")
        for x, y, z in m.normals.tolist():
            lines.append(f"vn {_fmt(x)} {_fmt(y)} {_fmt(z)}")
        for a, b, c in (m.triangles + offset).tolist():
            lines.append(f"f {a}//{a} {b}//{b} {c}//{c}")
        offset += len(m.vertices)
    try:
        with open(path, "w", encoding="ascii", newline="\n") as fh:
            fh.write("\n".join(lines) + "\n")
    except OSError as exc:
        raise OSError(f"cannot write OBJ file {path}: {exc.strerror or exc}") from exc
    return path


def load_obj(path):
    """Read the ``v``/``vn``/``f`` subset written by :func:`export_obj`."""
    verts, norms, tris = [], [], []
    with open(path, encoding="ascii") as fh:
        for line in fh:
            parts = line.split()
            if not parts:
                continue
            if parts[0] == "v":
                verts.append([float(x) for x in parts[1:4]])
            elif parts[0] == "vn":
                norms.append([float(x) for x in parts[1:4]])
            elif parts[0] == "f":
                tris.append([int(p.split("/")[0]) - 1 for p in parts[1:4]])
    return TriangleMesh(np.array(verts), np.array(norms), np.array(tris, dtype=np.int64))
