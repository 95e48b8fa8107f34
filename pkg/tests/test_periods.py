import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from hurwitz_fuchs.covering import new_hyperelliptic, new_rational
from hurwitz_fuchs.periods import (PeriodsError, check_symplectic, holomorphic_basis, identity_det1,
                                   rauch_check, residue_gamma_squared, rotation_coefficients)


def _agm(a, b):
    for _ in range(64):
        if a == b:
            break
        a, b = (a + b) / 2, math.sqrt(a * b)
    return a


def _K(k):
    return math.pi / (2 * _agm(1.0, math.sqrt(1 - k * k)))


def elliptic_tau(e):
    """Period ratio of y^2 = prod (x - e_i), real e_1 < ... < e_4, from the AGM."""
    e1, e2, e3, e4 = e
    k2 = (e2 - e1) * (e4 - e3) / ((e3 - e1) * (e4 - e2))
    return 1j * _K(math.sqrt(1 - k2)) / _K(math.sqrt(k2))


def test_square_lattice_point():
    assert abs(holomorphic_basis(new_hyperelliptic([0, 1, 2, 3])).B[0, 0] - 1.2792615711710065j) < 1e-10


@given(st.lists(st.floats(-4, 4), min_size=4, max_size=4, unique=True))
@settings(max_examples=15, deadline=None)
def test_period_ratio_matches_agm(vals):
    e = sorted(vals)
    if min(b - a for a, b in zip(e, e[1:])) < 0.05:
        return
    B = holomorphic_basis(new_hyperelliptic(e)).B[0, 0]
    assert abs(B - elliptic_tau(e)) < 1e-9 * abs(B)


@pytest.mark.parametrize("vals", [[0, 1, 2, 3.7], [0, 1, 2, 3, 4, 5.3], [0, 1 + 0.5j, 2.2, 3.1 - 0.4j]])
def test_normalization_and_riemann_relations(vals):
    cov = new_hyperelliptic(vals)
    data = holomorphic_basis(cov)
    g = data.genus
    a_vecs = [data.cycles[f"a{i}"] for i in range(1, g + 1)]
    a_w = np.array([data.contour_w(v) for v in a_vecs])
    assert np.allclose(a_w, np.eye(g), atol=1e-11)
    a_W = np.array([data.contour_W(v)[0] for v in a_vecs])
    assert np.max(np.abs(a_W)) < 1e-10
    assert np.allclose(data.B, data.B.T, atol=1e-11)
    assert np.all(np.linalg.eigvalsh(data.B.imag) > 0)


@pytest.mark.parametrize("cov", [new_hyperelliptic([0, 1, 2, 3.7]), new_rational([1, 0, -3, 0.5, 2], [1])],
                         ids=["hyperelliptic", "quartic"])
def test_rotation_coefficients_symmetric(cov):
    gam = rotation_coefficients(cov).gamma
    assert np.allclose(gam, gam.T, atol=1e-12)
    assert np.allclose(np.diag(gam), 0)


def test_degree_two_models_agree():
    hyp = rotation_coefficients(new_hyperelliptic([-1, 1])).gamma
    rat = rotation_coefficients(new_rational([1, 0, 1], [2, 0])).gamma
    assert abs(abs(hyp[0, 1]) - 0.25) < 1e-14
    assert abs(abs(rat[0, 1]) - 0.25) < 1e-14


def test_sign_flip_conjugates_gamma():
    cov = new_hyperelliptic([0, 1, 2, 3.7])
    gam = rotation_coefficients(cov).gamma
    flipped = rotation_coefficients(cov.with_signs([1, -1, 1, 1])).gamma
    y = np.diag([1, -1, 1, 1])
    assert np.allclose(flipped, y @ gam @ y, atol=1e-12)


@pytest.mark.parametrize("num,den", [([1, 0, -3, 0], [1]), ([1, 0, -3, 0.5, 2], [1]),
                                     ([1, 0, -2, 0.7], [1, 0.5 + 0.2j])])
def test_gamma_squared_is_double_residue(num, den):
    cov = new_rational(num, den)
    gam = rotation_coefficients(cov).gamma
    for j in range(cov.N):
        for k in range(cov.N):
            if j != k:
                r = residue_gamma_squared(cov, j, k)
                assert abs(r - gam[j, k] ** 2) < 1e-12 * abs(gam[j, k]) ** 2


def test_doubled_residue_does_not_reproduce_gamma_squared():
    # the variant with an extra factor 2 in front of the residue is off by 100 %
    cov = new_rational([1, 0, -3, 0], [1])
    gam = rotation_coefficients(cov).gamma
    r = residue_gamma_squared(cov, 0, 1)
    assert abs(2 * r - gam[0, 1] ** 2) > 0.5 * abs(gam[0, 1]) ** 2


def test_rauch_identities_one_point():
    rep = rauch_check(new_hyperelliptic([0, 1 + 0.5j, 2.2, 3.1 - 0.4j]), 2)
    assert rep.passed()


def test_det1_identity_genus2():
    data = holomorphic_basis(new_hyperelliptic([0, 1, 2, 3, 4, 5.3]))
    for lam in (0.3 + 0.2j, -1.0, 7j):
        assert identity_det1(data, lam) < 1e-12


def test_symplectic_guard():
    check_symplectic([[0]], [[-1]], [[1]], [[0]])
    with pytest.raises(PeriodsError):
        check_symplectic([[1]], [[1]], [[1]], [[1]])
