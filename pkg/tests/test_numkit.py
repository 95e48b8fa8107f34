import cmath

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from hurwitz_fuchs import numkit
from hurwitz_fuchs.numkit import circle, integrate_path, segment

cplx = st.complex_numbers(max_magnitude=3, allow_nan=False, allow_infinity=False)


@given(st.lists(cplx, min_size=1, max_size=6), cplx, cplx)
@settings(max_examples=40, deadline=None)
def test_polynomial_integral_matches_antiderivative(coeffs, a, b):
    if abs(a - b) < 1e-6:
        return
    c = np.array(coeffs)
    anti = np.polyint(c)
    got = integrate_path(lambda z: np.polyval(c, z)[..., None], segment(a, b), 1e-13)[0]
    exact = np.polyval(anti, b) - np.polyval(anti, a)
    assert abs(got - exact) <= 1e-11 * max(1.0, np.sum(np.abs(anti)) * 3 ** len(c))


def test_residue_theorem_on_circle():
    got = integrate_path(lambda z: (1 / (z - 0.1j))[..., None], circle(0, 1, 64), 1e-13)[0]
    assert abs(got - 2j * np.pi) < 1e-12


def test_psqrt_branch():
    z = np.array([4, -4 + 1e-300j, -4 - 1e-300j, 1j])
    r = numkit.psqrt(z)
    assert np.allclose(r ** 2, z)
    assert np.all(r.real >= 0)


@given(st.lists(st.tuples(st.floats(-3, 3), st.floats(-3, 3)), min_size=2, max_size=6, unique=True))
@settings(max_examples=30, deadline=None)
def test_roots_reproduce_polynomial(pairs):
    roots = np.array([complex(a, b) for a, b in pairs])
    if min(abs(x - y) for i, x in enumerate(roots) for y in roots[i + 1:]) < 1e-2:
        return
    found = np.array(numkit.roots_poly(np.poly(roots)))
    for r in roots:
        assert np.min(np.abs(found - r)) < 1e-8


def test_ode_continue_exponential():
    a = np.array([[0, 1], [-1, 0]], dtype=complex)
    end = numkit.ode_continue(lambda z: a, segment(0, 2.0), np.eye(2), tol=1e-12)
    c, s = np.cos(2.0), np.sin(2.0)
    assert np.allclose(end, [[c, s], [-s, c]], atol=1e-10)


def test_ode_continue_monodromy_of_sqrt():
    # y' = y / (2 z) continues to -y around the origin
    end = numkit.ode_continue(lambda z: np.array([[0.5 / z]]), circle(0, 1, 64), np.eye(1), tol=1e-12)
    assert abs(end[0, 0] + 1) < 1e-9


def test_ode_refuses_near_pole():
    with pytest.raises(numkit.PoleProximityError):
        numkit.ode_continue(lambda z: np.eye(1), segment(-1, 1), np.eye(1), poles=[0.01j], exclusion=0.1)


def test_singular_matrix_detected():
    with pytest.raises(numkit.SingularMatrixError):
        numkit.linsolve(np.array([[1, 2], [2, 4]], dtype=complex), np.eye(2))


def test_det_and_inv_consistent():
    rng = np.random.default_rng(3)
    m = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    assert abs(numkit.det(m) - np.linalg.det(m)) < 1e-10
    assert np.allclose(numkit.inv(m) @ m, np.eye(4), atol=1e-12)
    assert cmath.isclose(numkit.det(numkit.inv(m)), 1 / numkit.det(m), rel_tol=1e-10)
