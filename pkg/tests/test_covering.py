import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from hurwitz_fuchs.covering import (CoveringError, clebsch_transpositions, cycle_type, is_transitive,
                                    new_hyperelliptic, new_permutation, new_rational, perm_seq,
                                    transposition)


def test_riemann_hurwitz_genus():
    assert new_permutation(2, [(1, 2)] * 4, (1, 1)).genus == 1
    assert new_permutation(3, clebsch_transpositions(2, 3), (1, 1, 1)).genus == 2
    with pytest.raises(CoveringError):
        new_permutation(3, [(1, 2)], (3,))


def test_infinity_cycle_type_checked():
    with pytest.raises(CoveringError):
        new_permutation(3, [(1, 2), (2, 3)], (1, 1, 1))


@given(st.lists(st.tuples(st.integers(1, 4), st.integers(1, 4)).filter(lambda t: t[0] != t[1]),
                min_size=1, max_size=6))
@settings(max_examples=60, deadline=None)
def test_perm_seq_is_product(pairs):
    perms = [transposition(4, a, b) for a, b in pairs]
    prod = perm_seq(perms, 4)
    # parity of a product of transpositions
    even = sum(c - 1 for c in cycle_type(prod)) % 2 == 0
    assert even == (len(pairs) % 2 == 0)


def test_transitivity():
    assert is_transitive([transposition(3, 1, 2), transposition(3, 2, 3)], 3)
    assert not is_transitive([transposition(3, 1, 2)], 3)


def test_hyperelliptic_fiber_and_loops():
    cov = new_hyperelliptic([0, 1, 2, 3.7])
    lam = 0.4 + 0.9j
    pts = cov.fiber(lam)
    prod = np.prod([lam - v for v in cov.branch_values])
    assert all(abs(p.value ** 2 - prod) < 1e-12 for p in pts)
    assert abs(pts[0].value + pts[1].value) < 1e-12
    for k in range(cov.N):
        _, end = cov.lift_path(cov.geometry.generator_loop(k), 1)
        assert end == 2
    _, end = cov.lift_path(cov.geometry.infinity_loop(), 1)
    assert end == 1


def test_rational_shadow_product_relation():
    cov = new_rational([1, 0, -2, -1], [1, 0, -3])
    shadow = cov.permutation_shadow()
    assert shadow.transpositions == tuple(clebsch_transpositions(0, 3))
    assert cycle_type(perm_seq(shadow.perms(), 3)) == (1, 1, 1)


def test_cubic_polynomial_shadow():
    cov = new_rational([1, 0, -3, 0], [1])
    assert cov.infinity_type == (3,)
    assert cov.permutation_shadow().transpositions == ((1, 2), (2, 3))


def test_sign_choices_flip_frame():
    cov = new_hyperelliptic([0, 1, 2, 3.7])
    flipped = cov.with_signs([1, -1, 1, 1])
    assert abs(flipped.local_frame(1) + cov.local_frame(1)) < 1e-14
    assert abs(flipped.local_frame(0) - cov.local_frame(0)) < 1e-14


@pytest.mark.parametrize("vals", [[1, 1], [0, 1, 2]])
def test_bad_hyperelliptic_rejected(vals):
    with pytest.raises(CoveringError):
        new_hyperelliptic(vals)


def test_ambiguous_angular_order_rejected():
    with pytest.raises(CoveringError):
        new_rational([1, 0.3, -2, 1], [1, 0.5])


def test_degenerate_critical_point_rejected():
    with pytest.raises(CoveringError):
        new_rational([1, 0, 0, 0], [1])
