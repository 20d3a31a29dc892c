"""Division-free solutions of small homogeneous systems.

Points, lines and planes are plain float arrays of length 3 (the projective
plane) or 4 (projective space).  A line through two points and the meet of two
lines are both a 3-component cross product; the plane through three points and
the meet of three planes are both the generalized 4-component cross product.
All functions accept stacked inputs of shape ``(..., 3)`` / ``(..., 4)``.
"""
import numpy as np

from .errors import DegenerateSystemError, IdealPointError, ZeroVectorError

# relative threshold below which a cross-product result counts as zero
DEGENERATE_RTOL = 1e-12
IDEAL_EPS = 1e-12


def _as_float(v):
    return np.asarray(v, dtype=float)


def cross3(u, v):
    """Cross product of 3-vectors.

    Gives the line joining two homogeneous points or, dually, the
    intersection point of two lines.  A zero result means the inputs are
    projectively the same element.
    """
    u = _as_float(u)
    v = _as_float(v)
    out = np.empty(np.broadcast_shapes(u.shape, v.shape))
    out[..., 0] = u[..., 1] * v[..., 2] - u[..., 2] * v[..., 1]
    out[..., 1] = u[..., 2] * v[..., 0] - u[..., 0] * v[..., 2]
    out[..., 2] = u[..., 0] * v[..., 1] - u[..., 1] * v[..., 0]
    return out


def cross4(u, v, t):
    """Generalized cross product of three 4-vectors.

    Expands ``det([e1 e2 e3 e4; u; v; t])`` along the symbolic first row, so
    component ``k`` is ``(-1)**k`` times the minor with column ``k`` removed.
    The result is the plane through three points or the common point of
    three planes.
    """
    u = _as_float(u)
    v = _as_float(v)
    t = _as_float(t)
    shape = np.broadcast_shapes(u.shape, v.shape, t.shape)
    # 2x2 minors of the (u, v) rows; exactly zero when u == v
    m = {(i, j): u[..., i] * v[..., j] - u[..., j] * v[..., i]
         for i in range(4) for j in range(i + 1, 4)}

    def minor(a, b, c):
        # 3x3 minor on columns a < b < c, expanded along the t row
        return t[..., a] * m[b, c] - t[..., b] * m[a, c] + t[..., c] * m[a, b]

    out = np.empty(shape)
    out[..., 0] = minor(1, 2, 3)
    out[..., 1] = -minor(0, 2, 3)
    out[..., 2] = minor(0, 1, 3)
    out[..., 3] = -minor(0, 1, 2)
    return out


def is_degenerate(result, *inputs, rtol=DEGENERATE_RTOL):
    """True when ``result`` is zero relative to the product of input norms."""
    scale = 1.0
    for a in inputs:
        scale *= np.linalg.norm(a)
    return bool(np.linalg.norm(result) <= rtol * scale)


def null_space_2x3(rows):
    """Null vector of the 2x3 homogeneous system ``A x = 0``.

    Raises DegenerateSystemError (with the zero vector attached as
    ``result``) when the two rows are proportional.
    """
    r0, r1 = (_as_float(r) for r in rows)
    x = cross3(r0, r1)
    if is_degenerate(x, r0, r1):
        raise DegenerateSystemError("rows of the 2x3 system are proportional", result=x)
    return x


def null_space_3x4(rows):
    """Null vector of the 3x4 homogeneous system ``A x = 0``."""
    r0, r1, r2 = (_as_float(r) for r in rows)
    x = cross4(r0, r1, r2)
    if is_degenerate(x, r0, r1, r2):
        raise DegenerateSystemError("rows of the 3x4 system are linearly dependent", result=x)
    return x


def join(*points):
    """Line through two points of E2, or plane through three points of E3."""
    if len(points) == 2:
        return null_space_2x3(points)
    if len(points) == 3:
        return null_space_3x4(points)
    raise ValueError(f"join expects 2 or 3 elements, got {len(points)}")


# meet is the dual of join: same algebra applied to lines/planes
meet = join


def homogenize(p):
    p = _as_float(p)
    return np.append(p, 1.0)


def dehomogenize(v, eps=IDEAL_EPS):
    v = _as_float(v)
    w = v[-1]
    if abs(w) <= eps:
        raise IdealPointError(f"point at infinity (w = {w!r})")
    return v[:-1] / w


def normalize_projective(v):
    """Canonical representative: unit norm, first nonzero component positive."""
    v = _as_float(v)
    norm = np.linalg.norm(v)
    if norm == 0.0:
        raise ZeroVectorError("cannot normalize the zero vector")
    out = v / norm
    nonzero = np.flatnonzero(out)
    if out[nonzero[0]] < 0:
        out = -out
    return out
