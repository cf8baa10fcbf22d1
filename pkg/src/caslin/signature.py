"""Seifert matrix of a braid closure, knot signature and determinant.

The Seifert surface is the Bennequin surface: one disk per strand and one
half-twisted band per letter.  A homology generator runs through two
consecutive bands of the same generator index.  Everything here is exact
integer/rational arithmetic.
"""

from fractions import Fraction

import numpy as np

from .braid import BraidError, free_reduce, is_knot


def _generators(letters):
    """Pairs (p, q) of consecutive positions carrying the same generator index."""
    nxt = {}
    last = {}
    for pos, e in enumerate(letters):
        i = abs(e)
        if i in last:
            nxt[last[i]] = pos
        last[i] = pos
    return sorted(nxt.items())


def _sgn(x):
    return (x > 0) - (x < 0)


def seifert_matrix(b):
    """Integer Seifert matrix of the closure of ``b`` (size = len - n + 1)."""
    if not is_knot(b):
        raise BraidError("closure is not a knot")
    x = free_reduce(b).letters
    gens = _generators(x)
    g = len(gens)
    V = np.zeros((g, g), dtype=np.int64)
    for a, (i, hi) in enumerate(gens):
        V[a, a] = -_sgn(x[i] + x[hi])
        for c in range(a + 1, g):
            j, hj = gens[c]
            if hi < j or hj < hi:
                # disjoint, or j's loop nested strictly between i's bands
                continue
            if hi == j:
                # consecutive loops of one index sharing the band at j
                if x[j] > 0:
                    V[a, c] = 1
                else:
                    V[c, a] = -1
                continue
            di, dj = abs(x[i]), abs(x[j])
            if di - dj == 1:
                V[c, a] = -1
            elif dj - di == 1:
                V[a, c] = 1
    return V


def _as_fractions(M):
    return [[Fraction(int(v)) for v in row] for row in M]


def exact_det(M):
    """Determinant by fraction Gaussian elimination."""
    A = _as_fractions(M)
    n = len(A)
    det = Fraction(1)
    for k in range(n):
        p = next((r for r in range(k, n) if A[r][k] != 0), None)
        if p is None:
            return Fraction(0)
        if p != k:
            A[k], A[p] = A[p], A[k]
            det = -det
        det *= A[k][k]
        for r in range(k + 1, n):
            f = A[r][k] / A[k][k]
            if f:
                for c in range(k, n):
                    A[r][c] -= f * A[k][c]
    return det


def symmetric_signature(M):
    """Signature of a symmetric integer matrix by congruence diagonalization."""
    A = _as_fractions(M)
    n = len(A)
    pos = neg = 0
    for k in range(n):
        if A[k][k] == 0:
            j = next((j for j in range(k + 1, n) if A[j][j] != 0), None)
            if j is not None:
                A[k], A[j] = A[j], A[k]
                for row in A:
                    row[k], row[j] = row[j], row[k]
            else:
                j = next((j for j in range(k + 1, n) if A[k][j] != 0), None)
                if j is None:
                    continue  # zero row: null direction
                # row/col j added to k makes the pivot 2 A[k][j] != 0
                for c in range(n):
                    A[k][c] += A[j][c]
                for r in range(n):
                    A[r][k] += A[r][j]
        piv = A[k][k]
        for r in range(k + 1, n):
            f = A[r][k] / piv
            if f:
                for c in range(k + 1, n):
                    A[r][c] -= f * A[k][c]
        for r in range(k + 1, n):
            A[r][k] = A[k][r] = Fraction(0)
        pos += piv > 0
        neg += piv < 0
    return pos - neg


def signature_of(b):
    V = seifert_matrix(b)
    return symmetric_signature(V + V.T)


def determinant_of(b):
    V = seifert_matrix(b)
    d = exact_det(V + V.T)
    assert d.denominator == 1
    return abs(int(d))
