import math

import numpy as np
import pytest

from caslin import fixedpoints as fp
from caslin import repvar as rv
from caslin import su2
from caslin.braid import BraidError, parse_braid
from caslin.fixedpoints import SolverOptions, casson_lin, find_classes, lefschetz_sign

TREFOIL = parse_braid("2: 1 1 1")
FIGURE_EIGHT = parse_braid("3: 1 -2 1 -2")


def test_unknot_has_no_classes():
    assert find_classes(parse_braid("2: 1")) == []
    assert find_classes(parse_braid("2: -1")) == []
    assert casson_lin(parse_braid("2: 1")) == 0


def test_links_rejected():
    with pytest.raises(BraidError):
        find_classes(parse_braid("2: 1 1"))


def test_trefoil_class():
    (c,) = find_classes(TREFOIL)
    assert not c.degenerate
    assert c.residual <= 1e-10
    t1, t2 = c.angles
    assert abs(t1 - 2 * math.pi / 3) <= 1e-6 and abs(t2 - 2 * math.pi / 3) <= 1e-6
    np.testing.assert_array_equal(c.config[1], su2.E3)


@pytest.mark.parametrize("q", [3, 5, 7, 9])
def test_torus_classes(q):
    classes = find_classes(parse_braid("2: " + " ".join(["1"] * q)))
    got = sorted(c.angles[0] for c in classes)
    want = [2 * math.pi * k / q for k in range(1, (q - 1) // 2 + 1)]
    assert len(got) == len(want)
    np.testing.assert_allclose(got, want, atol=1e-6)
    assert len({c.sign for c in classes}) == 1


def test_mirror_trefoil():
    (c,) = find_classes(parse_braid("2: -1 -1 -1"))
    assert abs(c.angles[0] - 2 * math.pi / 3) <= 1e-6
    assert casson_lin(parse_braid("2: -1 -1 -1")) == -casson_lin(TREFOIL)


def test_casson_lin_values():
    # calibrated so that lambda = -signature / 2
    assert casson_lin(TREFOIL) == 1
    assert casson_lin(parse_braid("2: 1 1 1 1 1")) == 2
    assert casson_lin(FIGURE_EIGHT) == 0
    assert casson_lin(parse_braid("3: 1 2 1 2")) == 1


def test_figure_eight_classes():
    classes = find_classes(FIGURE_EIGHT)
    assert len(classes) == 2
    assert sorted(c.sign for c in classes) == [-1, 1]
    for c in classes:
        assert c.residual <= 1e-10
        assert c.min_singular > fp.NONDEGENERATE_TOL


def test_lefschetz_sign_direct():
    X = np.array([su2.from_polar(2 * math.pi / 3), su2.E3])
    assert lefschetz_sign(TREFOIL, X) == find_classes(TREFOIL)[0].sign
    with pytest.raises(ValueError):
        lefschetz_sign(TREFOIL, np.array([su2.from_polar(1.0), su2.E3]))
    with pytest.raises(rv.ReducibleError):
        lefschetz_sign(TREFOIL, np.array([su2.E3, -su2.E3]))


def test_sign_is_conjugation_invariant():
    X = find_classes(FIGURE_EIGHT)[0].config
    rng = np.random.default_rng(5)
    for g in su2.normalize(rng.standard_normal((5, 4))):
        Y = rv.conjugate(g, X)
        assert fp.residual(FIGURE_EIGHT, Y) <= 1e-10
        assert lefschetz_sign(FIGURE_EIGHT, Y) == lefschetz_sign(FIGURE_EIGHT, X)


def test_sign_flips_under_mirror():
    for word in ["2: 1 1 1 1 1", "3: 1 2 1 2", "3: 1 1 1 2 -1 2"]:
        b = parse_braid(word)
        assert casson_lin(b.mirror()) == -casson_lin(b)


def test_degenerate_class_raises():
    c = find_classes(TREFOIL)[0]
    bad = fp.RepClass(c.config, c.residual, 0.0, 0, c.fingerprint)
    with pytest.raises(fp.DegenerateClassError, match="Hamiltonian perturbation"):
        casson_lin(TREFOIL, classes=[bad])


def test_options_validation():
    with pytest.raises(ValueError):
        SolverOptions(seeds=0)
    with pytest.raises(ValueError):
        SolverOptions(tol=0)


def test_deterministic():
    a = find_classes(FIGURE_EIGHT, SolverOptions(rng_seed=3))
    b = find_classes(FIGURE_EIGHT, SolverOptions(rng_seed=3))
    assert len(a) == len(b)
    for x, y in zip(a, b):
        np.testing.assert_array_equal(x.config, y.config)
        assert x.sign == y.sign


def test_seed_independent():
    base = find_classes(FIGURE_EIGHT)
    other = find_classes(FIGURE_EIGHT, SolverOptions(rng_seed=99, dihedral_seeding=False))
    assert len(base) == len(other)
    for x, y in zip(base, other):
        np.testing.assert_allclose(x.config, y.config, atol=1e-8)


@pytest.mark.parametrize("word", [
    "3: 2 1 1 1",
    "4: -1 3 -2 -3 1 -2 1 -3 1",
    "4: -2 -3 1 3 1 1 1 2 -1 2 -1 3 2",
    "3: -1 -2 1 -2 1 1",
    # long conjugate of sigma_1^7, where round-off used to cost a class
    "4: 3 -2 -2 -1 2 2 -1 2 1 1 1 1 1 1 1 1 -2 -2 1 2 2",
])
def test_simplified_search_matches_direct(word):
    b = parse_braid(word)
    fast = find_classes(b)
    slow = find_classes(b, SolverOptions(simplify=False))
    assert len(fast) == len(slow)
    for x, y in zip(fast, slow):
        np.testing.assert_allclose(x.config, y.config, atol=1e-8)
        assert x.sign == y.sign
        assert x.residual <= 1e-10


def test_orbit_kernel_at_classes():
    for b in [TREFOIL, FIGURE_EIGHT, parse_braid("3: 1 1 1 2 -1 2")]:
        for c in find_classes(b):
            _, orbit_res = fp.return_map(b, c.config)
            assert orbit_res <= 1e-8


# -- brute-force oracle ------------------------------------------------------

@pytest.mark.parametrize("q", [3, 5])
def test_brute_force_torus(q):
    b = parse_braid("2: " + " ".join(["1"] * q))
    basins = fp.brute_force_scan(b, 0.005)
    got = sorted(su2.polar_angle(X[0]) for X, _ in basins)
    want = [2 * math.pi * k / q for k in range(1, (q - 1) // 2 + 1)]
    np.testing.assert_allclose(got, want, atol=0.01)


def test_brute_force_unknot():
    assert fp.brute_force_scan(parse_braid("2: 1"), 0.005) == []


def test_brute_force_limit():
    with pytest.raises(ValueError):
        fp.brute_force_scan(parse_braid("4: 1 2 3"))


@pytest.mark.slow
def test_brute_force_figure_eight():
    basins = fp.brute_force_scan(FIGURE_EIGHT, 0.01)
    classes = find_classes(FIGURE_EIGHT)
    assert len(basins) == len(classes) == 2
    for X, _ in basins:
        assert min(np.max(np.linalg.norm(X - c.config, axis=-1)) for c in classes) <= 0.02
