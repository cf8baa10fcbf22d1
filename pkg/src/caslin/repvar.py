"""The braid group action on Q_n = (S^2)^n and its differential.

A configuration is an array of shape ``(..., n, 3)`` of unit vectors, each
one a trace-free element of SU(2).  Leading axes are batch axes, so a whole
population of solver seeds can be pushed through a braid word at once.

The generator sigma_i acts by

    (X_i, X_{i+1}) -> (X_i X_{i+1} X_i^-1, X_i)

and its inverse by ``(X_i, X_{i+1}) -> (X_{i+1}, X_{i+1}^-1 X_i X_{i+1})``.
Conjugating by a pure unit quaternion ``a`` is the half-turn about ``a``,
``b -> 2 (a.b) a - b``, which is what the code uses.
"""

import numpy as np

from . import su2
from .braid import BraidError


class ReducibleError(ValueError):
    """Raised when an operation needs an irreducible configuration."""


def as_config(points):
    X = su2.real_array(points)
    if X.ndim < 2 or X.shape[-1] != 3:
        raise ValueError("configuration must have shape (..., n, 3)")
    return X


def half_turn(a, b):
    """``a b a^-1`` for unit pure quaternions ``a``, ``b``."""
    return 2.0 * np.sum(a * b, axis=-1, keepdims=True) * a - b


def _check_index(index, n):
    if index == 0 or abs(index) >= n:
        raise BraidError(f"generator {index} out of range for {n} strands")


def apply_generator(index, X):
    X = as_config(X)
    n = X.shape[-2]
    _check_index(index, n)
    i = abs(index) - 1
    a = X[..., i, :]
    b = X[..., i + 1, :]
    out = X.copy()
    # renormalizing the new point stops radial round-off, which the half-turn
    # formula would otherwise turn into angular error further down the word
    if index > 0:
        out[..., i, :] = su2.normalize(half_turn(a, b))
        out[..., i + 1, :] = a
    else:
        out[..., i, :] = b
        out[..., i + 1, :] = su2.normalize(half_turn(b, a))
    return out


def apply_braid(b, X):
    """Apply the letters of ``b`` left to right."""
    X = as_config(X)
    if X.shape[-2] != b.strands:
        raise BraidError(f"braid has {b.strands} strands, configuration has {X.shape[-2]} points")
    X = su2.normalize(X)
    for e in b.letters:
        X = apply_generator(e, X)
    return X


def product(X):
    """Quaternion product ``X_1 X_2 ... X_n``."""
    X = as_config(X)
    P = su2.pure(X[..., 0, :])
    for i in range(1, X.shape[-2]):
        P = su2.mul(P, su2.pure(X[..., i, :]))
    return P


def conjugate(g, X):
    """``g X g^-1`` pointwise."""
    X = as_config(X)
    g = np.asarray(g, dtype=float)
    return su2.conj_action(g[..., None, :], X)


def is_reducible(X, tol=1e-8):
    """True iff all points lie on one axis (``X_i = +-X_1``) within ``tol``."""
    X = as_config(X)
    cross = np.linalg.norm(np.cross(X, X[..., :1, :]), axis=-1)
    return np.all(cross <= tol, axis=-1)


def gauge_fix(X, tol=1e-9, return_rotation=False):
    """Conjugation normal form.

    The anchor point (``X_2`` when n == 2, else ``X_1``) is rotated to e3 and
    the first point not parallel to the anchor is turned into the xz
    half-plane with x >= 0.
    """
    X = as_config(X)
    if X.ndim != 2:
        raise ValueError("gauge_fix takes a single configuration")
    if is_reducible(X, tol):
        raise ReducibleError("cannot gauge-fix a reducible configuration")
    n = X.shape[0]
    anchor = 1 if n == 2 else 0
    g1 = su2.rotation_to_e3(X[anchor])
    Y = conjugate(g1, X)
    Y[anchor] = su2.E3
    j = next(k for k in range(n) if k != anchor and np.hypot(Y[k, 0], Y[k, 1]) > tol)
    phi = np.arctan2(Y[j, 1], Y[j, 0])
    g2 = su2.axis_angle(su2.E3, -phi)
    Z = conjugate(g2, Y)
    Z[anchor] = su2.E3
    Z[j, 1] = 0.0
    Z[j, 0] = abs(Z[j, 0])
    Z = su2.normalize(Z)
    if return_rotation:
        return Z, su2.mul(g2, g1)
    return Z


def fingerprint(X):
    """Conjugation-invariant traces: tr(X_i X_j) for i < j, then tr(X_1 X_2 X_3).

    For pure quaternions tr(pq) = -2 p.q and tr(pqr) = -2 det[p, q, r].
    """
    X = as_config(X)
    n = X.shape[-2]
    iu, ju = np.triu_indices(n, 1)
    pairs = -2.0 * np.sum(X[..., iu, :] * X[..., ju, :], axis=-1)
    if n < 3:
        return pairs
    triple = -2.0 * np.sum(np.cross(X[..., 0, :], X[..., 1, :]) * X[..., 2, :], axis=-1)
    return np.concatenate([pairs, triple[..., None]], axis=-1)


# -- tangent frames and the Jacobian -----------------------------------------

def tangent_frame(X):
    """Orthonormal ``(u, v)`` with ``u x v = X`` at every point.

    Returns an array of shape ``(..., n, 2, 3)``.
    """
    X = as_config(X)
    helper = np.where(np.abs(X[..., :1]) < 0.9, su2.E1, su2.E2)
    u = helper - np.sum(helper * X, axis=-1, keepdims=True) * X
    u = su2.normalize(u)
    v = np.cross(X, u)
    return np.stack([u, v], axis=-2)


def frame_matrix(X):
    """The 3n x 2n matrix sending frame coordinates to R^{3n}."""
    F = tangent_frame(X)
    n = F.shape[-3]
    E = np.zeros(F.shape[:-3] + (3 * n, 2 * n))
    for i in range(n):
        E[..., 3 * i:3 * i + 3, 2 * i:2 * i + 2] = np.swapaxes(F[..., i, :, :], -1, -2)
    return E


def move(X, delta):
    """Step ``X`` by frame coordinates ``delta`` (shape (..., 2n)) and renormalize."""
    X = as_config(X)
    F = tangent_frame(X)
    d = delta.reshape(delta.shape[:-1] + (X.shape[-2], 2))
    return su2.normalize(X + np.einsum("...ik,...ikj->...ij", d, F))


def braid_with_ambient_jacobian(b, X, columns=None):
    """``apply_braid(b, X)`` and the 3n x 3n Jacobian of the polynomial
    extension of the action to (R^3)^n, right-multiplied by ``columns``
    (default identity).

    Restricted to tangent vectors of Q_n it is the differential of the
    action, since each letter maps Q_n into itself.
    """
    X = as_config(X)
    n = X.shape[-2]
    if n != b.strands:
        raise BraidError(f"braid has {b.strands} strands, configuration has {n} points")
    if columns is None:
        columns = np.eye(3 * n)
    Jac = np.broadcast_to(columns, X.shape[:-2] + columns.shape[-2:]).copy()
    X = su2.normalize(X)
    for e in b.letters:
        i = abs(e) - 1
        a = X[..., i, :].copy()
        c = X[..., i + 1, :].copy()
        ac = np.sum(a * c, axis=-1)
        ra, rc = slice(3 * i, 3 * i + 3), slice(3 * i + 3, 3 * i + 6)
        Ja, Jc = Jac[..., ra, :].copy(), Jac[..., rc, :].copy()
        cJa = c[..., None, :] @ Ja
        aJc = a[..., None, :] @ Jc
        if e > 0:
            # (a, c) -> (2 (a.c) a - c, a)
            Jac[..., ra, :] = 2.0 * a[..., :, None] * (cJa + aJc) + 2.0 * ac[..., None, None] * Ja - Jc
            Jac[..., rc, :] = Ja
            X[..., i, :] = su2.normalize(2.0 * ac[..., None] * a - c)
            X[..., i + 1, :] = a
        else:
            # (a, c) -> (c, 2 (a.c) c - a)
            Jac[..., rc, :] = 2.0 * c[..., :, None] * (cJa + aJc) + 2.0 * ac[..., None, None] * Jc - Ja
            Jac[..., ra, :] = Jc
            X[..., i, :] = c
            X[..., i + 1, :] = su2.normalize(2.0 * ac[..., None] * c - a)
    return X, Jac


def braid_with_jacobian(b, X):
    """``apply_braid(b, X)`` together with its 2n x 2n Jacobian in frame coordinates.

    The Jacobian maps frame coordinates at ``X`` to frame coordinates at the
    image, both taken from :func:`tangent_frame`.
    """
    X = as_config(X)
    Y, Jac = braid_with_ambient_jacobian(b, X, frame_matrix(X))
    return Y, np.swapaxes(frame_matrix(Y), -1, -2) @ Jac


def braid_jacobian(b, X):
    return braid_with_jacobian(b, X)[1]


def orbit_vectors(X):
    """Infinitesimal conjugation directions ``(xi x X_1, ..., xi x X_n)``
    for xi = e1, e2, e3, in frame coordinates; shape (..., 2n, 3)."""
    X = as_config(X)
    F = tangent_frame(X)
    cols = []
    for xi in np.eye(3):
        t = np.cross(xi, X)
        c = np.einsum("...ikj,...ij->...ik", F, t)
        cols.append(c.reshape(c.shape[:-2] + (-1,)))
    return np.stack(cols, axis=-1)


def product_differential(X):
    """Left-translated differential of ``product`` at ``X``: 3 x 2n.

    Column for tangent vector ``t`` at point i is the vector part of
    ``P^-1 X_1..X_{i-1} t X_{i+1}..X_n``.
    """
    X = as_config(X)
    if X.ndim != 2:
        raise ValueError("product_differential takes a single configuration")
    n = X.shape[0]
    F = tangent_frame(X)
    Q = su2.pure(X)
    P = product(X)
    Pinv = su2.inverse(P)
    D = np.zeros((3, 2 * n))
    for i in range(n):
        left = su2.ONE
        for k in range(i):
            left = su2.mul(left, Q[k], renormalize=False)
        right = su2.ONE
        for k in range(i + 1, n):
            right = su2.mul(right, Q[k], renormalize=False)
        for s in range(2):
            t = su2.pure(F[i, s])
            q = su2.mul(Pinv, su2.mul(left, su2.mul(t, right, False), False), False)
            D[:, 2 * i + s] = q[1:]
    return D
