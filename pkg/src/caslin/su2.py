"""Unit quaternions as a model of SU(2).

A quaternion is stored as a length-4 float array ``(w, x, y, z)``.  Trace-free
elements of SU(2) are exactly the pure unit quaternions, so they are stored as
unit 3-vectors ``(x, y, z)`` and double as points of the 2-sphere.  All
functions broadcast over leading axes.
"""

import numpy as np

ONE = np.array([1.0, 0.0, 0.0, 0.0])
I = np.array([0.0, 1.0, 0.0, 0.0])
J = np.array([0.0, 0.0, 1.0, 0.0])
K = np.array([0.0, 0.0, 0.0, 1.0])

E1 = np.array([1.0, 0.0, 0.0])
E2 = np.array([0.0, 1.0, 0.0])
E3 = np.array([0.0, 0.0, 1.0])

NORM_TOL = 1e-12


def real_array(x):
    """``x`` as a float array; extended precision input is kept as is."""
    x = np.asarray(x)
    return x if x.dtype == np.longdouble else x.astype(float)


def normalize(q):
    q = real_array(q)
    return q / np.linalg.norm(q, axis=-1, keepdims=True)


def mul(p, q, renormalize=True):
    """Hamilton product ``p q``."""
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    pw, px, py, pz = np.moveaxis(p, -1, 0)
    qw, qx, qy, qz = np.moveaxis(q, -1, 0)
    out = np.stack([
        pw * qw - px * qx - py * qy - pz * qz,
        pw * qx + px * qw + py * qz - pz * qy,
        pw * qy - px * qz + py * qw + pz * qx,
        pw * qz + px * qy - py * qx + pz * qw,
    ], axis=-1)
    return normalize(out) if renormalize else out


def inverse(q):
    """Inverse of a unit quaternion (its conjugate)."""
    q = np.asarray(q, dtype=float)
    return q * np.array([1.0, -1.0, -1.0, -1.0])


def trace(q):
    """Trace of the corresponding 2x2 SU(2) matrix."""
    return 2.0 * np.asarray(q, dtype=float)[..., 0]


def pure(v):
    """Embed a 3-vector as a pure quaternion."""
    v = np.asarray(v, dtype=float)
    return np.concatenate([np.zeros(v.shape[:-1] + (1,)), v], axis=-1)


def vector_part(q):
    return np.asarray(q, dtype=float)[..., 1:]


def axis_angle(axis, angle):
    """The unit quaternion ``cos(angle/2) + sin(angle/2) axis``.

    Conjugation by it rotates R^3 by ``angle`` about ``axis``.
    """
    axis = normalize(axis)
    half = 0.5 * np.asarray(angle, dtype=float)
    return np.concatenate([np.cos(half)[..., None], np.sin(half)[..., None] * axis], axis=-1)


def conj_action(g, v):
    """``g v g^-1`` for a unit quaternion ``g`` and a point ``v`` of S^2.

    Uses the rotation form ``v + 2w (r x v) + 2 r x (r x v)`` where
    ``g = (w, r)``, so the result is pure by construction.
    """
    g = np.asarray(g, dtype=float)
    v = np.asarray(v, dtype=float)
    w = g[..., :1]
    r = g[..., 1:]
    rv = np.cross(r, v)
    return v + 2.0 * w * rv + 2.0 * np.cross(r, rv)


def rotation_matrix(g):
    """The SO(3) matrix of ``conj_action(g, .)`` (used as an oracle in tests)."""
    w, x, y, z = normalize(g)
    return np.array([
        [1 - 2 * (y * y + z * z), 2 * (x * y - w * z), 2 * (x * z + w * y)],
        [2 * (x * y + w * z), 1 - 2 * (x * x + z * z), 2 * (y * z - w * x)],
        [2 * (x * z - w * y), 2 * (y * z + w * x), 1 - 2 * (x * x + y * y)],
    ])


def from_polar(theta):
    """Point ``cos(theta) e3 + sin(theta) e1`` of the xz great circle.

    This is the trace-free matrix ``(i cos t, sin t; -sin t, -i cos t)``
    written as a pure quaternion.
    """
    theta = np.asarray(theta, dtype=float)
    return np.stack([np.sin(theta), np.zeros_like(theta), np.cos(theta)], axis=-1)


def polar_angle(v):
    """Inverse of :func:`from_polar` for points with ``y == 0``; in (-pi, pi]."""
    v = np.asarray(v, dtype=float)
    return np.arctan2(v[..., 0], v[..., 2])


def rotation_to_e3(v):
    """A unit quaternion ``g`` with ``conj_action(g, v) == e3``.

    Returns the identity exactly when ``v`` already equals ``e3``.
    """
    v = normalize(v)
    cos_a = float(np.clip(v[2], -1.0, 1.0))
    axis = np.cross(v, E3)
    s = np.linalg.norm(axis)
    if s == 0.0:
        if cos_a > 0:
            return ONE.copy()
        return axis_angle(E1, np.pi)
    return axis_angle(axis / s, np.arctan2(s, cos_a))
