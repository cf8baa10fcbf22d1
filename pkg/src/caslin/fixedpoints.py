"""Irreducible fixed points of the braid action and the Casson-Lin count.

Fixed configurations of beta on Q_n, modulo conjugation, are the
conjugacy classes of trace-free SU(2) representations of the knot group.
They are found by a batched Levenberg-Marquardt iteration started from many
seeds, then gauge-fixed, deduplicated and given a Lefschetz sign.
"""

from dataclasses import dataclass, field
import logging

import numpy as np
from scipy.stats import qmc

from . import su2
from . import repvar as rv
from .braid import BraidError, BraidWord, is_knot, markov_simplify

log = logging.getLogger(__name__)

NONDEGENERATE_TOL = 1e-6
ORBIT_KERNEL_TOL = 1e-8
DEDUP_TOL = 1e-6
# seeds this close to the reducible locus are abandoned; irreducible fixed
# points of knots stay well away from it since Delta(-1) != 0
REDUCIBLE_DROP = 1e-2
STALL_WINDOW = 10
STALL_GAIN = 0.9
SPLIT_MARGIN = 1e-2
POLISH_RANGE = 1e-6

# Fixed once so that the right-handed trefoil sigma_1^3 counts +1.
CALIBRATION = -1


class DegenerateClassError(RuntimeError):
    """A fixed class is degenerate; a Hamiltonian perturbation would be required."""


@dataclass
class SolverOptions:
    seeds: int | None = None        # default 200 * n
    rng_seed: int = 0
    tol: float = 1e-10
    max_iter: int = 200
    dihedral_seeding: bool = True
    dihedral_seeds: int | None = None  # default 50 * n
    simplify: bool = True           # search on a Markov-simplified word

    def __post_init__(self):
        if self.seeds is not None and self.seeds < 1:
            raise ValueError("seed count must be positive")
        if self.tol <= 0 or self.max_iter < 1:
            raise ValueError("tolerance and iteration count must be positive")


@dataclass
class RepClass:
    config: np.ndarray
    residual: float
    min_singular: float
    sign: int                       # +1, -1, or 0 when degenerate
    fingerprint: np.ndarray = field(repr=False)

    @property
    def degenerate(self):
        return self.sign == 0

    @property
    def angles(self):
        """(theta1, theta2) pillowcase angles when n == 2, else None."""
        if self.config.shape[0] != 2:
            return None
        t = float(su2.polar_angle(self.config[0]))
        return (t, t)


def _residual(b, X):
    """max_i |beta(X)_i - X_i| at working precision (float64 unless X is longdouble)."""
    return np.max(np.linalg.norm(rv.apply_braid(b, X) - X, axis=-1), axis=-1)


def residual(b, X):
    """max_i |beta(X)_i - X_i|, evaluated in extended precision.

    Round-off at one letter is amplified by the rest of the word, so on long
    words a float64 evaluation can be off by more than 1e-10.
    """
    r = _residual(b, np.asarray(X, dtype=np.longdouble))
    return r.astype(float) if isinstance(r, np.ndarray) else float(r)


# -- Lefschetz sign ---------------------------------------------------------

def _oriented_complement(A):
    """Orthonormal basis S of the complement of span(A) with det[A | S] > 0."""
    m, k = A.shape
    Q, _ = np.linalg.qr(A, mode="complete")
    S = Q[:, k:].copy()
    if np.linalg.det(np.hstack([A, S])) < 0:
        S[:, 0] = -S[:, 0]
    return S


def return_map(b, X):
    """Reduced return map of I - d(beta) at a fixed configuration.

    ``I - d(beta)`` kills the orbit directions O and lands in the kernel of
    the (left-translated) differential of the product map, because beta
    preserves the product ``X_1 ... X_n``.  It therefore induces a map
    ``T/O -> ker dP`` between (2n-3)-dimensional spaces.  T/O is oriented
    by T = (S^2)^n and su(2); ker dP by T and T_P SU(2) = su(2).

    Returns ``(matrix, orbit_residual)``.
    """
    X = rv.as_config(X)
    Y, Jac = rv.braid_with_jacobian(b, X)
    # re-express the image frame in the frame at X (they agree at a fixed point
    # unless a helper axis switched)
    Jac = rv.frame_matrix(X).T @ rv.frame_matrix(Y) @ Jac
    L = np.eye(Jac.shape[0]) - Jac
    O = rv.orbit_vectors(X)
    orbit_res = float(np.max(np.abs(L @ O)))
    D = rv.product_differential(X)
    S = _oriented_complement(O)
    # kernel of D, oriented so that [K | D^+] is positive
    W = np.linalg.pinv(D)
    K = _oriented_complement(W)
    K_proj = K - W @ (D @ K)
    K, _ = np.linalg.qr(K_proj)
    if np.linalg.det(np.hstack([K, W])) < 0:
        K[:, 0] = -K[:, 0]
    return K.T @ L @ S, orbit_res


def _sign_data(b, X):
    M, orbit_res = return_map(b, X)
    svals = np.linalg.svd(M, compute_uv=False)
    smin = float(svals.min()) if svals.size else float("inf")
    if smin <= NONDEGENERATE_TOL:
        return 0, smin, orbit_res
    return int(np.sign(np.linalg.det(M))), smin, orbit_res


def lefschetz_sign(b, X):
    """Sign of the reduced return map at an irreducible fixed configuration."""
    X = rv.as_config(X)
    if rv.is_reducible(X, 1e-6):
        raise rv.ReducibleError("fixed configuration is reducible")
    res = residual(b, X)
    if res > 1e-10:
        raise ValueError(f"not a fixed configuration (residual {res:.3g})")
    sign, smin, orbit_res = _sign_data(b, X)
    if orbit_res > ORBIT_KERNEL_TOL:
        raise ArithmeticError(f"orbit directions not in the kernel (residual {orbit_res:.3g})")
    if sign == 0:
        raise DegenerateClassError(
            f"degenerate fixed class (min singular value {smin:.3g}): "
            "Hamiltonian perturbation required")
    return sign


# -- seeding ----------------------------------------------------------------

def _slice_points(n, u):
    """Map unit-cube samples (m, 2n-3) onto the gauge slice."""
    m = u.shape[0]
    X = np.zeros((m, n, 3))
    if n == 2:
        X[:, 0] = su2.from_polar(np.pi * u[:, 0])
        X[:, 1] = su2.E3
        return X
    X[:, 0] = su2.E3
    X[:, 1] = su2.from_polar(np.pi * u[:, 0])
    for j in range(2, n):
        z = 2.0 * u[:, 2 * j - 3] - 1.0
        phi = 2.0 * np.pi * u[:, 2 * j - 2]
        r = np.sqrt(np.clip(1.0 - z * z, 0.0, None))
        X[:, j] = np.stack([r * np.cos(phi), r * np.sin(phi), z], axis=-1)
    return X


def _dihedral_points(n, u):
    """Configurations with every axis on the xz great circle."""
    X = np.zeros((u.shape[0], n, 3))
    if n == 2:
        X[:, 0] = su2.from_polar(np.pi * u[:, 0])
        X[:, 1] = su2.E3
        return X
    X[:, 0] = su2.E3
    X[:, 1] = su2.from_polar(np.pi * u[:, 0])
    for j in range(2, n):
        X[:, j] = su2.from_polar(2.0 * np.pi * u[:, j - 1])
    return X


def _sobol(dim, count, seed):
    sampler = qmc.Sobol(d=dim, scramble=True, seed=seed)
    m = int(np.ceil(np.log2(max(count, 2))))
    return sampler.random_base2(m)[:count]


def seed_configurations(n, opts):
    count = opts.seeds if opts.seeds is not None else 200 * n
    if count < 1:
        raise ValueError("zero seeds")
    seeds = [_slice_points(n, _sobol(2 * n - 3, count, opts.rng_seed))]
    if opts.dihedral_seeding:
        dcount = opts.dihedral_seeds if opts.dihedral_seeds is not None else 50 * n
        seeds.append(_dihedral_points(n, _sobol(n - 1, dcount, opts.rng_seed + 1)))
    return np.concatenate(seeds, axis=0)


# -- batched Levenberg-Marquardt ---------------------------------------------

def _split(b):
    """beta = tail . head; fixed points solve head(X) = tail^-1(X)."""
    k = (len(b.letters) + 1) // 2
    return BraidWord(b.strands, b.letters[:k]), BraidWord(b.strands, b.letters[k:]).inverse()


def _residual_and_jacobian(halves, X):
    head, tail_inv = halves
    E = rv.frame_matrix(X)
    Y1, J1 = rv.braid_with_ambient_jacobian(head, X, E)
    Y2, J2 = rv.braid_with_ambient_jacobian(tail_inv, X, E)
    return (Y1 - Y2).reshape(X.shape[0], -1), J1 - J2


def solve(b, X0, tol=1e-10, max_iter=200):
    """Drive each configuration in X0 towards a fixed point of ``b``.

    Returns ``(X, res, converged)`` with ``converged`` judged on the full
    residual ``|beta(X) - X|``.  Seeds falling towards the reducible diagonal
    or stalling are abandoned early.
    """
    X = np.array(X0, dtype=float)
    m, n = X.shape[0], X.shape[1]
    halves = _split(b)
    lam = np.full(m, 1e-3)
    r, R = _residual_and_jacobian(halves, X)
    cost = np.sum(r * r, axis=1)
    active = np.ones(m, dtype=bool)
    eye = np.eye(2 * n)
    history = [cost.copy()]
    for _ in range(max_iter):
        res = np.max(np.linalg.norm(r.reshape(m, n, 3), axis=-1), axis=-1)
        # the split residual is only a proxy for |beta(X) - X|: overshoot it
        active &= res > SPLIT_MARGIN * tol
        active &= ~rv.is_reducible(X, REDUCIBLE_DROP)
        if not active.any():
            break
        idx = np.flatnonzero(active)
        Ra, ra = R[idx], r[idx]
        JtJ = np.swapaxes(Ra, 1, 2) @ Ra
        g = np.einsum("mij,mi->mj", Ra, ra)
        scale = np.trace(JtJ, axis1=1, axis2=2) / (2 * n) + 1e-12
        A = JtJ + (lam[idx] * scale)[:, None, None] * eye
        step = -np.linalg.solve(A, g[..., None])[..., 0]
        Xt = rv.move(X[idx], step)
        rt, Rt = _residual_and_jacobian(halves, Xt)
        ct = np.sum(rt * rt, axis=1)
        better = ct < cost[idx]
        acc = idx[better]
        X[acc], r[acc], R[acc], cost[acc] = Xt[better], rt[better], Rt[better], ct[better]
        lam[acc] = np.maximum(lam[acc] * 0.2, 1e-15)
        rej = idx[~better]
        lam[rej] *= 10.0
        # stalled seeds: damping blew up without progress, or the cost crept
        # down by less than STALL_GAIN over the last STALL_WINDOW iterations
        active[rej[lam[rej] > 1e12]] = False
        history.append(cost.copy())
        if len(history) > STALL_WINDOW:
            old = history.pop(0)
            active &= ~((cost > STALL_GAIN * old) & (cost > tol * tol))
    res = _residual(b, X)
    return X, res, res <= tol


def _slice_tangents(X):
    """Ambient 3n x (2n-3) basis of the gauge slice tangent at gauge-fixed ``X``.

    The anchor point stays put and the first other point moves only inside
    the xz plane, so steps along these columns keep ``X`` gauge-fixed.
    """
    n = X.shape[0]
    anchor = 1 if n == 2 else 0
    j = next(k for k in range(n) if k != anchor and np.hypot(X[k, 0], X[k, 1]) > 1e-9)
    F = rv.tangent_frame(X)
    cols = []
    for k in range(n):
        if k == anchor:
            continue
        vecs = [np.array([X[k, 2], 0.0, -X[k, 0]])] if k == j else list(F[k])
        for v in vecs:
            c = np.zeros(3 * n)
            c[3 * k:3 * k + 3] = v
            cols.append(c)
    return np.stack(cols, axis=-1)


def _polish(b, X, tol, iters=8):
    """Gauss-Newton on the full residual beta(X) - X inside the gauge slice.

    Long words amplify coordinate errors by the norm of d(beta), which can
    reach 1e3 or more, so float64 coordinates alone may leave beta(X) - X
    above ``tol``.  Coordinates and residual are carried in extended
    precision; the linear solve stays in float64.  Steps stay in the slice
    so the result remains gauge-fixed.
    """
    X = X.astype(np.longdouble)
    best, best_r = X, _residual(b, X)
    for _ in range(iters):
        if best_r <= SPLIT_MARGIN * tol:
            break
        x = X.astype(float)
        C = _slice_tangents(x)
        _, J = rv.braid_with_ambient_jacobian(b, x, C)
        r = (rv.apply_braid(b, X) - X).astype(float).ravel()
        step = -np.linalg.lstsq(J - C, r, rcond=None)[0]
        # with d(beta) badly conditioned a single step may not lower the max
        # norm, so keep going and return the best iterate
        X = su2.normalize(X + (C @ step).reshape(X.shape))
        r = _residual(b, X)
        if r < best_r:
            best, best_r = X, r
    return best.astype(float)


def _dedupe(configs):
    """Drop repeated classes; configs are gauge-fixed."""
    kept = []
    for X in configs:
        fp = rv.fingerprint(X)
        dup = False
        for Y, fq in kept:
            if np.max(np.abs(fp - fq)) <= DEDUP_TOL and np.max(np.abs(X - Y)) <= 1e-5:
                dup = True
                break
        if not dup:
            kept.append((X, fp))
    return kept


def _lift(steps, Z):
    """Carry fixed points of a simplified word back through ``steps``."""
    X = Z
    for kind, arg in reversed(steps):
        if kind == "destabilize":
            X = np.concatenate([X, X[..., -1:, :]], axis=-2)
        else:
            X = rv.apply_braid(arg.inverse(), X)
    return X


def _accept(b, X, res, tol):
    """Gauge-fixed irreducible fixed points among solver outputs.

    Near-solutions are polished after gauge fixing, which also keeps round-off
    in long words small.
    """
    out = []
    keep = (res <= POLISH_RANGE) & ~rv.is_reducible(X, REDUCIBLE_DROP)
    for x in X[keep]:
        x = _polish(b, rv.gauge_fix(x), tol)
        # polishing can slide a near-reducible point onto the reducible locus
        if residual(b, x) <= tol and not rv.is_reducible(x, REDUCIBLE_DROP):
            out.append(x)
    return out


def _search(b, opts):
    """Gauge-fixed irreducible fixed points of ``b``, one or more per class."""
    core, steps = markov_simplify(b) if opts.simplify else (b, [])
    X0 = seed_configurations(core.strands, opts)
    X, res, _ = solve(core, X0, opts.tol, opts.max_iter)
    found = _accept(core, X, res, opts.tol)
    log.debug("%s: %d/%d seeds converged to irreducible fixed points", core, len(found), len(X0))
    if not steps or not found:
        return found
    # one representative per class is enough to lift; polish on the full word
    reps = np.array([x for x, _ in _dedupe(found)])
    X, res, _ = solve(b, _lift(steps, reps), opts.tol, opts.max_iter)
    return _accept(b, X, res, opts.tol)


def find_classes(b, opts=None):
    """Gauge-fixed, deduplicated irreducible fixed classes of ``b``, sorted by fingerprint.

    With ``opts.simplify`` the search runs on a cyclically reduced and
    destabilized word and the solutions are carried back to ``b``; residuals
    and signs are always evaluated on ``b`` itself.
    """
    opts = opts or SolverOptions()
    if not is_knot(b):
        raise BraidError("closure is not a knot")
    classes = []
    for Xg, fp in _dedupe(_search(b, opts)):
        sign, smin, _ = _sign_data(b, Xg)
        classes.append(RepClass(Xg, float(residual(b, Xg)), smin, sign, fp))
    classes.sort(key=lambda c: tuple(np.round(c.fingerprint, 9)) + tuple(np.round(c.config.ravel(), 9)))
    return classes


def casson_lin(b, opts=None, classes=None):
    """Calibrated signed count of irreducible fixed classes."""
    if classes is None:
        classes = find_classes(b, opts)
    bad = [c for c in classes if c.degenerate]
    if bad:
        raise DegenerateClassError(
            f"{len(bad)} degenerate fixed class(es) (min singular value "
            f"{min(c.min_singular for c in bad):.3g}): Hamiltonian perturbation required")
    return CALIBRATION * sum(c.sign for c in classes)


# -- brute-force oracle -----------------------------------------------------

def _slice_from_coords(n, c):
    """Gauge-slice configurations from raw angles: (theta,) for n = 2,
    (phi, polar, azimuth) for n = 3."""
    c = np.atleast_2d(c)
    X = np.zeros((c.shape[0], n, 3))
    if n == 2:
        X[:, 0] = su2.from_polar(c[:, 0])
        X[:, 1] = su2.E3
        return X
    X[:, 0] = su2.E3
    X[:, 1] = su2.from_polar(c[:, 0])
    s = np.sin(c[:, 1])
    X[:, 2] = np.stack([s * np.cos(c[:, 2]), s * np.sin(c[:, 2]), np.cos(c[:, 1])], axis=-1)
    return X


def _zoom(b, n, c, h, target=1e-12):
    """Shrinking-grid search around slice coordinates ``c``."""
    c = np.array(c, dtype=float)
    offs = np.linspace(-2.0, 2.0, 9)
    if n == 2:
        stencil = offs[:, None]
    else:
        stencil = np.stack(np.meshgrid(offs, offs, offs, indexing="ij"), -1).reshape(-1, 3)
    best = float(_residual(b, _slice_from_coords(n, c))[0])
    while h > target and best > 0:
        cand = c + h * stencil
        r = _residual(b, _slice_from_coords(n, cand))
        k = int(np.argmin(r))
        if r[k] < best:
            best, c = float(r[k]), cand[k]
        h *= 0.5
    return c, best


def brute_force_scan(b, resolution=0.005, threshold=None, accept=1e-6):
    """Grid scan of |beta(X) - X| over the gauge slice (n <= 3).

    Grid local minima below ``threshold`` are refined by repeated finer grid
    searches; those reaching ``accept`` and not reducible are returned as
    gauge-fixed configurations, clustered at 2 * resolution.
    """
    from scipy.ndimage import minimum_filter

    n = b.strands
    if n > 3:
        raise ValueError("oracle restricted to n <= 3")
    if threshold is None:
        threshold = max(0.05, 25.0 * resolution)
    if n == 2:
        grid = np.arange(0.0, np.pi + 0.5 * resolution, resolution)
        r = _residual(b, _slice_from_coords(2, grid[:, None]))
        lm = r <= minimum_filter(r, size=3, mode="nearest")
        cands = [(r[i], (grid[i],)) for i in np.flatnonzero(lm & (r < threshold))]
    else:
        g1 = np.arange(0.0, np.pi + 0.5 * resolution, resolution)
        g2 = g1
        g3 = np.arange(0.0, 2 * np.pi, resolution)
        r = np.empty((g1.size, g2.size, g3.size), dtype=np.float32)
        P2, P3 = np.meshgrid(g2, g3, indexing="ij")
        for a, phi in enumerate(g1):
            c = np.stack([np.full(P2.size, phi), P2.ravel(), P3.ravel()], axis=-1)
            r[a] = _residual(b, _slice_from_coords(3, c)).reshape(P2.shape)
        lm = r <= minimum_filter(r, size=3, mode=("nearest", "nearest", "wrap"))
        idx = np.argwhere(lm & (r < threshold))
        cands = [(r[i, j, k], (g1[i], g2[j], g3[k])) for i, j, k in idx]
    cands.sort(key=lambda t: t[0])
    starts = []
    for _, c in cands:
        X = _slice_from_coords(n, np.array(c))[0]
        if all(np.max(np.linalg.norm(X - Y, axis=-1)) > 4 * resolution for Y, _ in starts):
            starts.append((X, c))
    basins = []
    for _, c in starts:
        c, best = _zoom(b, n, c, resolution)
        X = _slice_from_coords(n, c)[0]
        if best > accept or rv.is_reducible(X, 1e-4):
            continue
        Xg = rv.gauge_fix(X)
        if all(np.max(np.linalg.norm(Xg - Y, axis=-1)) > 2 * resolution for Y, _ in basins):
            basins.append((Xg, best))
    basins.sort(key=lambda t: tuple(np.round(rv.fingerprint(t[0]), 6)))
    return basins
