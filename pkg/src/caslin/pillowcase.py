"""Two-strand braids: pillowcase coordinates and (2, q) torus knot tables.

With X_2 = e3 and X_1 in the xz half-plane, a 2-strand configuration is
described by the polar angle theta1 of X_1; the image Y = beta(X) adds the
angle theta2 of Y_1.  Points are taken modulo (theta1, theta2) ~ (-theta1, -theta2).
"""

from dataclasses import dataclass
import math

import numpy as np

from . import su2

BOUNDARY_TOL = 1e-9


class PillowcaseError(ValueError):
    pass


@dataclass(frozen=True)
class PillowPoint:
    theta1: float
    theta2: float
    boundary: bool = False

    def as_tuple(self):
        return (self.theta1, self.theta2)


def wrap(angle):
    """Representative in (-pi, pi]."""
    a = math.remainder(angle, 2 * math.pi)
    return math.pi if a == -math.pi else a


def normalize_point(theta1, theta2):
    """Stored representative with theta1 in [0, pi]."""
    t1, t2 = wrap(theta1), wrap(theta2)
    if t1 < 0:
        t1, t2 = -t1, wrap(-t2)
    boundary = t1 <= BOUNDARY_TOL or t1 >= math.pi - BOUNDARY_TOL
    return PillowPoint(t1, t2, boundary)


def angles(X, Y):
    """Pillowcase coordinates of a 2-strand configuration and its image.

    ``X[1]`` must be e3 and both first points must lie in the xz plane.
    """
    X = np.asarray(X, dtype=float)
    Y = np.asarray(Y, dtype=float)
    if X.shape != (2, 3) or Y.shape != (2, 3):
        raise PillowcaseError("angles needs two 2-point configurations")
    if np.max(np.abs(X[1] - su2.E3)) > 1e-9:
        raise PillowcaseError("second point is not e3; gauge-fix first")
    if abs(X[0, 1]) > 1e-9 or abs(Y[0, 1]) > 1e-9:
        raise PillowcaseError("first points are not in the xz plane")
    return normalize_point(float(su2.polar_angle(X[0])), float(su2.polar_angle(Y[0])))


def _check_q(q):
    if q % 2 == 0:
        raise PillowcaseError(f"q = {q} is even: the closure is a link, not a knot")
    if q < 1 and q != -3:
        raise PillowcaseError(f"q = {q} is not supported (only q >= 1 and q = -3)")


def torus_fixed_points(q):
    """Irreducible fixed points of sigma_1^q: (2 pi k/q, 2 pi k/q), k = 1..(|q|-1)/2."""
    _check_q(q)
    m = abs(q)
    return [PillowPoint(2 * math.pi * k / m, 2 * math.pi * k / m) for k in range(1, (m - 1) // 2 + 1)]


def torus_maslov(q, k):
    _check_q(q)
    if q < 3 or not 1 <= k <= (q - 1) // 2:
        raise PillowcaseError(f"no Maslov index for q = {q}, k = {k}")
    return -2 * k + 1


def torus_floer(q):
    """Graded Floer groups of sigma_1^q as {degree: rank}.

    The generators sit in pairwise non-adjacent degrees, so the boundary
    map vanishes and homology equals the chain groups.
    """
    _check_q(q)
    if q == -3:
        return {0: 1}
    return {torus_maslov(q, k): 1 for k in range(1, (q - 1) // 2 + 1)}


def euler_char(groups):
    return sum((-1) ** (d % 2) * r for d, r in groups.items())


def unknotting_number_torus(q):
    """u of the (2, q) torus knot."""
    return (abs(q) - 1) // 2
