import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from appendix_a_reference import clebsch, polynomial
from hurwitz_fuchs import relhom
from hurwitz_fuchs.covering import clebsch_transpositions, new_permutation, perm_seq

CLEBSCH_GRID = [(0, 2), (1, 2), (2, 2), (0, 3), (1, 3), (2, 3), (0, 4), (1, 4), (2, 4), (0, 5), (1, 5)]


@pytest.mark.parametrize("g,d", CLEBSCH_GRID)
def test_normal_form_matrices_match_closed_forms(g, d):
    tup = relhom.appendix_a_tuple(g, d)
    mats, minf = clebsch(g, d)
    for k, (got, exp) in enumerate(zip(tup.finite, mats), 1):
        assert np.array_equal(got, exp), f"M_{k}"
    assert np.array_equal(tup.infinity, minf)


@pytest.mark.parametrize("d", [2, 3, 4, 5, 6])
def test_polynomial_matrices_match_closed_forms(d):
    tup = relhom.polynomial_tuple(d)
    mats, minf = polynomial(d)
    assert all(np.array_equal(a, b) for a, b in zip(tup.finite, mats))
    assert np.array_equal(tup.infinity, minf)


@pytest.mark.parametrize("g,d", CLEBSCH_GRID)
@pytest.mark.parametrize("flavor", ["standard", "appendixA", "lasso"])
def test_tuple_relations_every_flavor(g, d, flavor):
    cov = new_permutation(d, clebsch_transpositions(g, d), (1,) * d)
    basis = relhom.build_basis(cov, flavor)
    tup = relhom.monodromy_tuple(cov, basis)
    rep = relhom.verify_tuple(tup, list(cov.transpositions) if basis.top_size else None)
    assert rep["involutions"] == cov.N


def test_verify_tuple_names_offender():
    tup = relhom.appendix_a_tuple(0, 3)
    bad = list(tup.finite)
    bad[1] = bad[1].copy()
    bad[1][0, 0] = 2
    with pytest.raises(relhom.TupleVerificationError, match="M_2"):
        relhom.verify_tuple(relhom.MonodromyTuple(tuple(bad), tup.infinity, tup.top_size))


@pytest.mark.parametrize("g,d", [(0, 3), (1, 3), (0, 4)])
def test_sigma_blocks_compose_to_identity(g, d):
    tup = relhom.appendix_a_tuple(g, d)
    t = tup.top_size
    prod = np.eye(d - 1, dtype=np.int64)
    for m in tup.finite:
        prod = m[t:, t:] @ prod
    assert np.array_equal(tup.infinity[t:, t:] @ prod, np.eye(d - 1, dtype=np.int64))


def _unimodular(draw_ops, n):
    q = np.eye(n, dtype=np.int64)
    for i, j, c in draw_ops:
        i, j = i % n, j % n
        if i != j:
            e = np.eye(n, dtype=np.int64)
            e[i, j] = c
            q = q @ e
    return q


@given(st.lists(st.tuples(st.integers(0, 9), st.integers(0, 9), st.integers(-2, 2)), max_size=6),
       st.sampled_from([(1, 2), (0, 3), (1, 3), (2, 2)]))
@settings(max_examples=50, deadline=None)
def test_basis_change_transforms_S_by_Q_transpose(ops, gd):
    g, d = gd
    cov = new_permutation(d, clebsch_transpositions(g, d), (1,) * d)
    old = relhom.build_basis(cov, "appendixA")
    t = old.top_size
    Q = _unimodular(ops, t)
    C = np.eye(old.N, dtype=np.int64)
    C[:t, :t] = relhom.int_inverse(Q.T)
    new = relhom.ContourBasis(old.names, old.matrix @ C, "changed", cov, t)
    for k in range(1, cov.N + 1):
        mo = relhom.monodromy_action(cov, old, k)
        mn = relhom.monodromy_action(cov, new, k)
        assert np.array_equal(mn.blocks()[1], Q.T @ mo.blocks()[1])
        assert np.array_equal(mn.blocks()[3], mo.blocks()[3])


def test_int_inverse_exact():
    m = np.array([[2, 1], [1, 1]])
    assert np.array_equal(relhom.int_inverse(m) @ m, np.eye(2, dtype=np.int64))
    with pytest.raises(relhom.RelHomError):
        relhom.int_inverse(np.array([[2, 0], [0, 1]]))


# -- braids -----------------------------------------------------------------------

tuples = st.sampled_from([(0, 3), (1, 2), (0, 4), (1, 3)]).map(
    lambda gd: list(relhom.appendix_a_tuple(*gd).finite))


@given(tuples, st.data())
@settings(max_examples=40, deadline=None)
def test_braid_relations_hold_on_tuples(tup, data):
    n = len(tup)
    i = data.draw(st.integers(1, n - 2))
    a = relhom.braid_act(i, relhom.braid_act(i + 1, relhom.braid_act(i, tup)))
    b = relhom.braid_act(i + 1, relhom.braid_act(i, relhom.braid_act(i + 1, tup)))
    assert all(np.array_equal(x, y) for x, y in zip(a, b))
    j = data.draw(st.integers(1, n - 1))
    back = relhom.braid_act(j, relhom.braid_act(j, tup), inverse=True)
    assert all(np.array_equal(x, y) for x, y in zip(back, tup))


@given(tuples, st.lists(st.integers(1, 3), max_size=5))
@settings(max_examples=40, deadline=None)
def test_braid_action_preserves_product(tup, word):
    ref = relhom.tuple_product(tup)
    for i in word:
        if i < len(tup):
            tup = relhom.braid_act(i, tup)
    assert np.array_equal(relhom.tuple_product(tup), ref)


def test_braid_action_preserves_permutation_product():
    cov = new_permutation(3, clebsch_transpositions(0, 3), (1, 1, 1))
    tup = cov.perms()
    for word in itertools.product([1, 2, 3], repeat=3):
        t = tup
        for i in word:
            t = relhom.braid_act(i, t)
        assert perm_seq(t, 3) == perm_seq(tup, 3)


@pytest.mark.parametrize("g,d,profile,count", [(0, 2, (1, 1), 1), (1, 2, (1, 1), 1), (0, 3, (1, 1, 1), 4),
                                               (0, 3, (2, 1), 4), (0, 3, (3,), 1)])
def test_hurwitz_count_equals_orbit_count(g, d, profile, count):
    assert relhom.hurwitz_count(g, d, profile) == count
    assert relhom.braid_orbit_count(g, d, profile) == count


def test_canonical_form_is_conjugation_invariant():
    cov = new_permutation(3, clebsch_transpositions(0, 3), (1, 1, 1))
    tup = cov.perms()
    conj = [tuple({1: 2, 2: 3, 3: 1}[tup_i[{1: 3, 2: 1, 3: 2}[x] - 1]] for x in (1, 2, 3)) for tup_i in tup]
    assert relhom.canonical_form(conj) == relhom.canonical_form(tup)


# -- genus one ---------------------------------------------------------------------

EXPECTED_GENUS1 = {
    "sigma1": [[1, 0, 0, 0], [1, 1, 0, 1], [-1, 0, 1, -1], [0, 0, 0, 1]],
    "theta1": [[1, 0, 0, 0], [1, 1, 2, 1], [-1, 0, -1, -1], [-2, 0, 0, -1]],
    "sigma3": [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, -1], [0, 0, 0, 1]],
    "theta3": [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, -1, -1], [0, 0, 0, -1]],
}


def test_genus1_generators():
    mats = relhom.genus1_braid_generators()
    for name, exp in EXPECTED_GENUS1.items():
        assert mats[name].tolist() == exp
    assert np.array_equal(mats["sigma1"] @ mats["sigma3"], mats["sigma3"] @ mats["sigma1"])


def test_picard_lefschetz_on_genus1_cycles():
    form = relhom.intersection_form(1)
    a, b = np.array([1, 0]), np.array([0, 1])
    assert form[0, 1] == 1
    assert np.array_equal(relhom.picard_lefschetz(b, a, form), b + (b @ form @ a) * a)


# -- group probe --------------------------------------------------------------------

@pytest.mark.parametrize("g,d", [(0, 3), (1, 2), (1, 3), (0, 4)])
def test_group_probe(g, d):
    rep = relhom.group_probe(relhom.appendix_a_tuple(g, d))
    assert rep.symmetric_group and rep.full_rank and rep.spans_root_lattice
    assert rep.lattice_index == d ** (2 * g + d - 1)
