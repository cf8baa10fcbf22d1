import numpy as np
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays

from caslin import su2

finite = st.floats(-10, 10, allow_nan=False)
vec4 = arrays(np.float64, 4, elements=finite).filter(lambda q: np.linalg.norm(q) > 1e-3)
vec3 = arrays(np.float64, 3, elements=finite).filter(lambda v: np.linalg.norm(v) > 1e-3)


def test_quaternion_table():
    np.testing.assert_allclose(su2.mul(su2.I, su2.J), su2.K)
    np.testing.assert_allclose(su2.mul(su2.J, su2.I), -su2.K)
    np.testing.assert_allclose(su2.mul(su2.K, su2.I), su2.J)
    np.testing.assert_allclose(su2.inverse(su2.K), -su2.K)


@given(vec4)
def test_group_law(q):
    q = su2.normalize(q)
    np.testing.assert_allclose(su2.mul(q, su2.inverse(q)), su2.ONE, atol=1e-12)
    assert abs(np.linalg.norm(su2.mul(q, q)) - 1) <= 1e-12


def test_conj_action_examples():
    np.testing.assert_allclose(su2.conj_action(su2.K, su2.E1), -su2.E1, atol=1e-15)
    v = su2.normalize(np.array([0.3, -0.2, 0.9]))
    np.testing.assert_array_equal(su2.conj_action(su2.ONE, v), v)
    g = su2.axis_angle(su2.E3, np.pi / 2)
    np.testing.assert_allclose(su2.conj_action(g, su2.E1), su2.E2, atol=1e-15)
    # independent oracle: the 3x3 rotation matrix
    np.testing.assert_allclose(su2.rotation_matrix(g) @ su2.E1, su2.E2, atol=1e-15)


@settings(max_examples=200)
@given(vec4, vec3)
def test_conj_matches_quaternion_product(g, v):
    g = su2.normalize(g)
    v = su2.normalize(v)
    direct = su2.mul(su2.mul(g, su2.pure(v), False), su2.inverse(g), False)
    out = su2.conj_action(g, v)
    assert abs(direct[0]) <= 1e-12
    np.testing.assert_allclose(out, direct[1:], atol=1e-12)
    np.testing.assert_allclose(out, su2.rotation_matrix(g) @ v, atol=1e-12)


@given(vec4, vec3, vec3)
def test_conj_is_isometry(g, v, w):
    g, v, w = su2.normalize(g), su2.normalize(v), su2.normalize(w)
    gv, gw = su2.conj_action(g, v), su2.conj_action(g, w)
    assert abs(np.linalg.norm(gv) - 1) <= 1e-12
    assert abs(gv @ gw - v @ w) <= 1e-12


@given(vec4, vec4, vec3)
def test_conj_is_an_action(g, h, v):
    g, h, v = su2.normalize(g), su2.normalize(h), su2.normalize(v)
    np.testing.assert_allclose(su2.conj_action(su2.mul(g, h), v),
                               su2.conj_action(g, su2.conj_action(h, v)), atol=1e-12)


def test_from_polar():
    np.testing.assert_array_equal(su2.from_polar(0.0), su2.E3)
    np.testing.assert_allclose(su2.from_polar(np.pi / 2), su2.E1, atol=1e-16)
    np.testing.assert_allclose(su2.from_polar(2 * np.pi / 3), [np.sqrt(3) / 2, 0, -0.5], atol=1e-15)
    assert su2.polar_angle(su2.from_polar(2.0)) == 2.0


def test_trace_free():
    v = su2.pure(su2.from_polar(1.1))
    assert su2.trace(v) == 0.0
    assert su2.trace(su2.ONE) == 2.0


def test_rotation_to_e3():
    for v in [su2.E3, -su2.E3, su2.E1, su2.normalize(np.array([1.0, 2.0, -3.0]))]:
        g = su2.rotation_to_e3(v)
        np.testing.assert_allclose(su2.conj_action(g, v), su2.E3, atol=1e-15)
    np.testing.assert_array_equal(su2.rotation_to_e3(su2.E3), su2.ONE)
