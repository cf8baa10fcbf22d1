import random

import numpy as np
import pytest
import sympy

from caslin.braid import (BraidError, BraidWord, T, alexander_at, alexander_polynomial,
                          free_reduce, is_knot, markov_conjugate, markov_stabilize, parse_braid)
from caslin.signature import (determinant_of, exact_det, seifert_matrix, signature_of,
                              symmetric_signature)


def random_knot(rng, n, extra):
    # a knot closure needs at least n - 1 letters; parity of the length varies
    while True:
        length = n - 1 + rng.randint(0, extra)
        w = BraidWord(n, tuple(rng.choice([-1, 1]) * rng.randint(1, n - 1) for _ in range(length)))
        if is_knot(w):
            return w


def eig_signature(M):
    ev = np.linalg.eigvalsh(np.asarray(M, dtype=float))
    return int(np.sum(ev > 1e-9) - np.sum(ev < -1e-9))


def test_trefoil_matrix():
    V = seifert_matrix(parse_braid("2: 1 1 1"))
    np.testing.assert_array_equal(V, [[-1, 1], [0, -1]])
    assert signature_of(parse_braid("2: 1 1 1")) == -2
    assert determinant_of(parse_braid("2: 1 1 1")) == 3


def test_unknot_matrix_is_empty():
    assert seifert_matrix(parse_braid("2: 1")).shape == (0, 0)
    assert signature_of(parse_braid("2: 1")) == 0
    assert determinant_of(parse_braid("2: 1")) == 1


def test_figure_eight():
    b = parse_braid("3: 1 -2 1 -2")
    assert seifert_matrix(b).shape == (2, 2)
    assert signature_of(b) == 0
    assert determinant_of(b) == 5


def test_links_rejected():
    with pytest.raises(BraidError):
        seifert_matrix(parse_braid("2: 1 1"))


@pytest.mark.parametrize("q", [1, 3, 5, 7, 9, 11])
def test_torus_series(q):
    b = parse_braid("2: " + " ".join(["1"] * q))
    assert signature_of(b) == -(q - 1)
    assert determinant_of(b) == q


def test_exact_helpers():
    assert exact_det(np.array([[2, 1], [1, 2]])) == 3
    assert exact_det(np.array([[0, 1], [1, 0]])) == -1
    assert symmetric_signature(np.array([[0, 1], [1, 0]])) == 0
    assert symmetric_signature(np.array([[0, 0], [0, -3]])) == -1
    assert symmetric_signature(np.diag([2, 3, -1])) == 1


def test_signature_matches_eigenvalues():
    rng = random.Random(4)
    for _ in range(40):
        M = np.array([[rng.randint(-3, 3) for _ in range(5)] for _ in range(5)])
        M = M + M.T
        assert symmetric_signature(M) == eig_signature(M)
        assert abs(exact_det(M) - round(np.linalg.det(M))) < 1e-6


def test_alexander_from_seifert_matches_burau():
    rng = random.Random(8)
    for _ in range(15):
        b = random_knot(rng, rng.randint(2, 4), rng.randint(2, 6))
        V = sympy.Matrix(seifert_matrix(b).tolist())
        if V.shape[0] == 0:
            seif = sympy.Integer(1)
        else:
            seif = sympy.expand((V - T * V.T).det())
        ratio = sympy.cancel(seif / alexander_polynomial(b))
        # the ratio must be a unit +-t^k
        num, den = sympy.fraction(ratio)
        assert len(sympy.Poly(num, T).terms()) == 1 and len(sympy.Poly(den, T).terms()) == 1
        assert abs(sympy.Poly(num, T).LC()) == abs(sympy.Poly(den, T).LC())


def test_determinant_matches_alexander():
    rng = random.Random(9)
    for _ in range(20):
        b = random_knot(rng, rng.randint(2, 5), rng.randint(2, 7))
        d = determinant_of(b)
        assert d == alexander_at(b, -1)
        assert d % 2 == 1


def test_mirror_and_parity():
    rng = random.Random(10)
    for _ in range(30):
        b = random_knot(rng, rng.randint(2, 5), rng.randint(1, 9))
        s = signature_of(b)
        assert s % 2 == 0
        assert signature_of(b.mirror()) == -s
        assert determinant_of(b.mirror()) == determinant_of(b)


def test_markov_invariance():
    rng = random.Random(12)
    for word in ["2: 1 1 1", "3: 1 -2 1 -2", "3: 1 1 1 2 -1 2"]:
        b = parse_braid(word)
        ref = (signature_of(b), determinant_of(b))
        for _ in range(25):
            if rng.random() < 0.3 and b.strands < 6:
                b = markov_stabilize(b, rng.choice([-1, 1]))
            else:
                xi = BraidWord(b.strands, tuple(rng.choice([-1, 1]) * rng.randint(1, b.strands - 1)
                                                for _ in range(rng.randint(1, 5))))
                b = free_reduce(markov_conjugate(b, xi))
            assert (signature_of(b), determinant_of(b)) == ref
