import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from hurwitz_fuchs import numkit
from hurwitz_fuchs.covering import new_hyperelliptic, new_rational
from hurwitz_fuchs.fuchsian import (FuchsianError, PhiEngine, build_system, continued_sqrt_product,
                                    degree_two_phi, det_check, numerical_monodromy, q_ladder, residual,
                                    richardson_derivative, system_for)
from hurwitz_fuchs.relhom import build_basis


@pytest.fixture(scope="module")
def degree_two():
    cov = new_hyperelliptic([-1, 1], [-1, -1])
    eng = PhiEngine(cov)
    return cov, eng, system_for(cov, eng.data), build_basis(eng.shadow, "standard")


def test_residues_sum_and_V_antisymmetric():
    gam = np.array([[0, 0.3], [0.3, 0]], dtype=complex)
    system = build_system(gam, [0, 1], q=-0.5)
    assert np.allclose(system.V, -system.V.T)
    assert np.isclose(system.V[0, 1], 0.3 * (1 - 0))
    total = sum(system.residue(j) for j in range(2))
    assert np.allclose(total, -(system.V - 0.5 * np.eye(2)))


def test_build_system_validates():
    with pytest.raises(FuchsianError):
        build_system(np.zeros((2, 3)), [0, 1])
    with pytest.raises(FuchsianError):
        build_system(np.zeros((2, 2)), [0, 0])


@given(st.floats(-1.5, 1.5), st.floats(0.2, 1.5))
@settings(max_examples=20, deadline=None)
def test_degree_two_closed_form(degree_two, x, y):
    cov, eng, _, basis = degree_two
    lam = complex(x, y)
    phi = eng.phi(lam, basis)
    exact = degree_two_phi(cov.branch_values, lam, cov.fiber(lam)[0].value)
    assert np.max(np.abs(phi - exact)) < 1e-10


def test_degree_two_residual(degree_two):
    cov, eng, system, basis = degree_two
    assert residual(system, eng, 0.3 + 0.6j, basis) < 1e-9


def test_richardson_on_entire_function():
    d = richardson_derivative(lambda z: np.array([[np.exp(z)]]), 0.3 + 0.1j, 0.2)
    assert abs(d[0, 0] - np.exp(0.3 + 0.1j)) < 1e-11


def test_continued_sqrt_product_is_continuous():
    lams = np.array([0, 1, 2, 3.7])
    pts = [0.5 + 2j + 0.01 * k * (1 - 1j) for k in range(200)]
    vals = continued_sqrt_product(lams, pts)
    assert np.max(np.abs(np.diff(vals))) < 0.1
    assert np.allclose(vals ** 2, [np.prod(p - lams) for p in pts])


def test_det_constant_genus0_degree2(degree_two):
    cov, eng, system, basis = degree_two
    rep = det_check(system, eng, basis, [0.2 + 0.5j, -0.7 + 0.9j, 1.3 + 0.4j])
    assert rep.cv < 1e-12
    assert abs(rep.abs_mean - 4 * np.pi) < 1e-10


def test_numeric_monodromy_is_reflection(degree_two):
    cov, eng, system, _ = degree_two
    m = numerical_monodromy(system, eng, 1)
    assert m.rounding_residual < 1e-8
    assert abs(numkit.det(m.matrix.astype(complex)) + 1) < 1e-12
    assert np.array_equal(m.matrix @ m.matrix, np.eye(2, dtype=np.int64))


def test_q_ladder_rejects_other_levels(degree_two):
    _, eng, _, basis = degree_two
    with pytest.raises(FuchsianError):
        q_ladder(eng, 0.3 + 0.6j, -0.5, basis)


def test_q_ladder_degree_two(degree_two):
    _, eng, _, basis = degree_two
    for level in (-1.5, -2.5):
        rep = q_ladder(eng, 0.3 + 0.6j, level, basis)
        assert rep.derivative_rel < 1e-8
        assert rep.system_residual < 1e-8


def test_sign_flip_rescales_columns_by_y():
    cov = new_rational([1, 0, -3, 0], [1])
    flipped = cov.with_signs([1, -1])
    a, b = PhiEngine(cov), PhiEngine(flipped)
    lam = -0.5 + 0.8j
    assert np.allclose(b.phi(lam), np.diag([1, -1]) @ a.phi(lam), atol=1e-10)
