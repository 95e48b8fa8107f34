"""Exact integer side: relative homology bases, monodromy matrices, braid
actions and Hurwitz counting.

Everything is expressed through the *lasso basis* of
H_1(L minus f^{-1}(inf); f^{-1}(lam0)): for generator loop gamma_k with sheet
transposition (a_k b_k), a_k < b_k, the class e_k is the lift of gamma_k
starting on sheet a_k.  Lifting gamma_k from sheet b_k gives -e_k, lifting it
from any other sheet gives a contractible loop.  Transporting the fibre along
gamma_k acts on relative classes by the reflection

    T_k(e_m) = e_m - <d e_m, d e_k> e_k,

where d e = delta_b - delta_a is the boundary in Z^d and <,> the standard dot
product.  Named bases (a, b, l, gamma; or the S-contours) are integer column
vectors over the lasso basis, and matrices in a named basis are obtained by
exact conjugation.  Matrix convention: column m holds the image of basis
element m, so M_inf M_N ... M_1 = I.
"""
from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np
import sympy

from .covering import (PermutationCovering, clebsch_transpositions, new_permutation,
                       perm_identity, perm_inverse, perm_seq, perm_then,
                       polynomial_transpositions, transposition, cycle_type,
                       is_transitive)


class RelHomError(ValueError):
    pass


class TupleVerificationError(RelHomError):
    pass


# -- integer helpers ---------------------------------------------------------

def int_inverse(m: np.ndarray) -> np.ndarray:
    """Inverse of a unimodular integer matrix, computed exactly."""
    s = sympy.Matrix(m.tolist())
    if abs(s.det()) != 1:
        raise RelHomError("matrix is not unimodular")
    return np.array(s.inv().tolist(), dtype=np.int64)


def int_det(m: np.ndarray) -> int:
    return int(sympy.Matrix(np.asarray(m).tolist()).det())


def matprod(mats: Iterable[np.ndarray], n: int) -> np.ndarray:
    out = np.eye(n, dtype=np.int64)
    for m in mats:
        out = m @ out
    return out


# -- lasso basis ----------------------------------------------------------------

def boundary(t: tuple[int, int], d: int) -> np.ndarray:
    v = np.zeros(d, dtype=np.int64)
    v[t[1] - 1] += 1
    v[t[0] - 1] -= 1
    return v


def lasso_monodromies(cov: PermutationCovering) -> list[np.ndarray]:
    bd = [boundary(t, cov.d) for t in cov.transpositions]
    out = []
    for k in range(cov.N):
        m = np.eye(cov.N, dtype=np.int64)
        for j in range(cov.N):
            m[k, j] -= int(bd[j] @ bd[k])
        out.append(m)
    return out


def lift_word(cov: PermutationCovering, word: Sequence[tuple[int, int]],
              sheet: int = 1) -> tuple[np.ndarray, int]:
    """Lasso coordinates of the lift of a loop word from a base sheet.

    ``word`` lists (k, +-1) with k 1-based, traversed left to right.
    """
    v = np.zeros(cov.N, dtype=np.int64)
    s = sheet
    for k, e in word:
        a, b = cov.transpositions[k - 1]
        if s not in (a, b):
            continue
        if e > 0:
            v[k - 1] += 1 if s == a else -1
        else:
            v[k - 1] += -1 if s == b else 1
        s = b if s == a else a
    return v, s


# -- named bases --------------------------------------------------------------

@dataclass(frozen=True)
class ContourBasis:
    names: tuple
    matrix: np.ndarray  # columns: basis elements in lasso coordinates
    flavor: str
    covering: PermutationCovering
    top_size: int  # number of closed-contour elements preceding the gammas

    @property
    def N(self) -> int:
        return len(self.names)

    @property
    def inverse(self) -> np.ndarray:
        return int_inverse(self.matrix)

    def coords(self, lasso_vec) -> "RelHomClass":
        c = self.inverse @ np.asarray(lasso_vec, dtype=np.int64)
        return RelHomClass(tuple(int(x) for x in c), self)

    def element(self, name: str) -> "RelHomClass":
        i = self.names.index(name)
        c = [0] * self.N
        c[i] = 1
        return RelHomClass(tuple(c), self)

    def lasso(self, name: str) -> np.ndarray:
        return self.matrix[:, self.names.index(name)].copy()


@dataclass(frozen=True)
class RelHomClass:
    coefficients: tuple
    basis: ContourBasis

    def lasso(self) -> np.ndarray:
        return self.basis.matrix @ np.array(self.coefficients, dtype=np.int64)

    def __add__(self, other):
        _same_basis(self, other)
        return RelHomClass(tuple(a + b for a, b in zip(self.coefficients, other.coefficients)),
                           self.basis)

    def __sub__(self, other):
        _same_basis(self, other)
        return RelHomClass(tuple(a - b for a, b in zip(self.coefficients, other.coefficients)),
                           self.basis)

    def scaled(self, k: int):
        return RelHomClass(tuple(k * a for a in self.coefficients), self.basis)


def _same_basis(x: RelHomClass, y: RelHomClass):
    if x.basis.names != y.basis.names:
        raise RelHomError("classes are over different bases")


def _unit(n: int, i: int) -> np.ndarray:
    v = np.zeros(n, dtype=np.int64)
    v[i - 1] = 1
    return v


def clebsch_shape(cov: PermutationCovering) -> str | None:
    t = list(cov.transpositions)
    if cov.infinity_type == (1,) * cov.d and t == clebsch_transpositions(cov.genus, cov.d):
        return "clebsch"
    if cov.infinity_type == (cov.d,) and cov.genus == 0 and t == polynomial_transpositions(cov.d):
        return "polynomial"
    return None


def _s_contours(g: int, d: int):
    n = 2 * g + 2 * d - 2
    e = lambda i: _unit(n, i)
    cols, names = [], []
    for j in range(2, 2 * g + 3):
        cols.append(e(1) - e(j))
        names.append(f"S{j}")
    for k in range(2, d):
        cols.append(e(2 * g + 2 * k - 1) - e(2 * g + 2 * k))
        names.append(f"S{2 * g + 2 * k}")
    return cols, names


def _gammas(g: int, d: int, n: int, polynomial: bool):
    cols, names = [], []
    for k in range(1, d):
        if polynomial:
            cols.append(_unit(n, k))
        else:
            cols.append(_unit(n, 1 if k == 1 else 2 * g + 2 * k - 1))
        names.append(f"gamma{k},{k + 1}")
    return cols, names


def build_basis(cov: PermutationCovering, flavor: str = "standard") -> ContourBasis:
    """Named contour basis as integer columns over the lasso basis.

    flavors: ``lasso``, ``standard`` (a, b, l, gamma) and ``appendixA``
    (S-contours then gamma).  Named flavors need Clebsch or polynomial data.
    """
    if flavor == "lasso":
        return ContourBasis(tuple(f"e{k}" for k in range(1, cov.N + 1)),
                            np.eye(cov.N, dtype=np.int64), "lasso", cov, 0)
    shape = clebsch_shape(cov)
    if shape is None:
        raise RelHomError(f"flavor {flavor!r} needs Clebsch or polynomial permutation data")
    g, d, n = cov.genus, cov.d, cov.N
    if shape == "polynomial":
        cols, names = _gammas(0, d, n, True)
        return ContourBasis(tuple(names), np.array(cols).T, flavor, cov, 0)
    gcols, gnames = _gammas(g, d, n, False)
    scols, snames = _s_contours(g, d)
    if flavor == "appendixA":
        cols, names = scols + gcols, snames + gnames
        return ContourBasis(tuple(names), np.array(cols).T, flavor, cov, len(scols))
    if flavor != "standard":
        raise RelHomError(f"unknown flavor {flavor!r}")
    S = dict(zip(snames, scols))
    e = lambda i: _unit(n, i)
    cols, names = [], []
    b_running = np.zeros(n, dtype=np.int64)
    for al in range(1, g + 1):
        b_running = b_running + e(2 * al) - e(2 * al + 1)
        cols += [e(2 * al + 2) - e(2 * al + 1), b_running.copy()]
        names += [f"a{al}", f"b{al}"]
    ls = []
    ls.append(-S[f"S{2 * g + 2}"] + b_running)
    if d >= 3:
        ls.append(-S[f"S{2 * g + 4}"] + S[f"S{2 * g + 2}"] - b_running)
        for k in range(3, d):
            ls.append(S[f"S{2 * g + 2 * k - 2}"] - S[f"S{2 * g + 2 * k}"])
    for s in range(1, d):
        cols.append(ls[s - 1])
        names.append(f"l{s}")
    cols, names = cols + gcols, names + gnames
    mat = np.array(cols).T
    if abs(int_det(mat)) != 1:
        raise RelHomError("standard contours do not form a basis")
    return ContourBasis(tuple(names), mat, flavor, cov, 2 * g + d - 1)


def infinity_contours(cov: PermutationCovering) -> list[np.ndarray]:
    """Lasso coordinates of l_1..l_d (all d contours around the poles)."""
    if clebsch_shape(cov) != "clebsch":
        raise RelHomError("defined for Clebsch data with simple poles")
    b = build_basis(cov, "standard")
    ls = [b.lasso(f"l{s}") for s in range(1, cov.d)]
    return ls + [-sum(ls)]


# -- monodromy --------------------------------------------------------------

@dataclass(frozen=True)
class MonodromyMatrix:
    matrix: np.ndarray
    index: object  # 1..N or "inf"
    top_size: int
    bottom_size: int

    def blocks(self):
        t = self.top_size
        m = self.matrix
        return m[:t, :t], m[:t, t:], m[t:, :t], m[t:, t:]

    def block_certificate(self) -> dict:
        ul, s, ll, sig = self.blocks()
        return {"upper_left_identity": bool(np.array_equal(ul, np.eye(self.top_size, dtype=int))),
                "lower_left_zero": bool(not ll.any()),
                "S": s.tolist(), "Sigma": sig.tolist()}


@dataclass(frozen=True)
class MonodromyTuple:
    finite: tuple  # M_1..M_N as integer arrays (or permutations)
    infinity: object = None
    top_size: int = 0

    def all(self) -> list:
        return list(self.finite) + ([self.infinity] if self.infinity is not None else [])


def sigma_block(t: tuple[int, int], d: int) -> np.ndarray:
    """Action of a transposition on the A_{d-1} root basis delta_{n+1} - delta_n."""
    p = transposition(d, *t)
    out = np.zeros((d - 1, d - 1), dtype=np.int64)
    for n in range(1, d):
        v = np.zeros(d, dtype=np.int64)
        v[p[n] - 1] += 1
        v[p[n - 1] - 1] -= 1
        # coefficient of delta_{j+1} - delta_j is sum_{i > j} v_i
        out[:, n - 1] = [int(v[j:].sum()) for j in range(1, d)]
    return out


def monodromy_action(cov: PermutationCovering, basis: ContourBasis, k) -> MonodromyMatrix:
    lasso = lasso_monodromies(cov)
    if k == "inf" or k == "∞":
        m = int_inverse(matprod(lasso, cov.N))
        idx = "inf"
    else:
        if not 1 <= int(k) <= cov.N:
            raise RelHomError(f"no branch point {k}")
        m = lasso[int(k) - 1]
        idx = int(k)
    r = basis.matrix
    mb = basis.inverse @ m @ r
    return MonodromyMatrix(mb, idx, basis.top_size, cov.d - 1 if basis.flavor != "lasso" else 0)


def monodromy_tuple(cov: PermutationCovering, basis: ContourBasis) -> MonodromyTuple:
    fin = tuple(monodromy_action(cov, basis, k).matrix for k in range(1, cov.N + 1))
    inf = monodromy_action(cov, basis, "inf").matrix
    return MonodromyTuple(fin, inf, basis.top_size)


def verify_tuple(tup: MonodromyTuple, permutations: Sequence[tuple] | None = None) -> dict:
    """Exact checks; raises TupleVerificationError naming offending indices."""
    fails = []
    mats = [np.asarray(m, dtype=np.int64) for m in tup.finite]
    n = mats[0].shape[0] if mats else 0
    if tup.infinity is not None:
        prod = np.asarray(tup.infinity, dtype=np.int64) @ matprod(mats, n)
        if not np.array_equal(prod, np.eye(n, dtype=np.int64)):
            fails.append("product relation M_inf M_N ... M_1 != I")
    t = tup.top_size
    for k, m in enumerate(mats, 1):
        if not np.array_equal(m @ m, np.eye(n, dtype=np.int64)):
            fails.append(f"M_{k} is not an involution")
        if int_det(m) != -1:
            fails.append(f"det M_{k} != -1")
        if t:
            if not np.array_equal(m[:t, :t], np.eye(t, dtype=np.int64)):
                fails.append(f"M_{k} upper-left block is not the identity")
            if m[t:, :t].any():
                fails.append(f"M_{k} lower-left block is not zero")
            if permutations is not None:
                if not np.array_equal(m[t:, t:], sigma_block(permutations[k - 1], n - t + 1)):
                    fails.append(f"M_{k} Sigma block does not match its transposition")
    if t and tup.infinity is not None:
        mi = np.asarray(tup.infinity)
        if not np.array_equal(mi[:t, :t], np.eye(t, dtype=np.int64)) or mi[t:, :t].any():
            fails.append("M_inf block structure")
    if fails:
        raise TupleVerificationError("; ".join(fails))
    return {"product_relation": tup.infinity is not None, "involutions": len(mats),
            "determinants": [-1] * len(mats), "block_structure": bool(t)}


# -- group structure probe ----------------------------------------------------

def cartan_matrix(n: int) -> np.ndarray:
    return 2 * np.eye(n, dtype=np.int64) - np.eye(n, k=1, dtype=np.int64) - np.eye(n, k=-1, dtype=np.int64)


def is_root_row(row) -> bool:
    """Row of weight coordinates of a root of A_{d-1} (Cartan rows are simple roots)."""
    row = np.asarray(row, dtype=np.int64)
    n = row.size
    c = sympy.Matrix(cartan_matrix(n).tolist()).solve(sympy.Matrix(row.tolist()))
    if any(not x.is_integer for x in c):
        return False
    c = np.array([int(x) for x in c])
    if not c.any():
        return False
    c = c if c.max() > 0 else -c
    nz = np.nonzero(c)[0]
    return bool(np.all(c[nz] == 1) and nz[-1] - nz[0] + 1 == nz.size)


@dataclass
class GroupReport:
    sigma_order: int
    symmetric_group: bool
    lattice_rank: int
    lattice_dim: int
    lattice_index: int | None  # index in the integer coordinate lattice
    full_rank: bool
    spans_root_lattice: bool  # index equals det(Cartan)^rows
    root_rows: bool
    status: str
    unipotent_count: int = 0


def group_probe(tup: MonodromyTuple, word_length_cap: int = 12) -> GroupReport:
    """Sigma-image by breadth-first search, kernel via Schreier generators."""
    mats = [np.asarray(m, dtype=np.int64) for m in tup.finite]
    t = tup.top_size
    n = mats[0].shape[0]
    dm1 = n - t
    gens = mats + [int_inverse(m) for m in mats]
    key = lambda m: m[t:, t:].tobytes()
    reps = {key(np.eye(n, dtype=np.int64)): np.eye(n, dtype=np.int64)}
    frontier = [np.eye(n, dtype=np.int64)]
    depth = 0
    closed = False
    while frontier and depth < word_length_cap:
        depth += 1
        nxt = []
        for u in frontier:
            for g in gens:
                w = u @ g
                kk = key(w)
                if kk not in reps:
                    reps[kk] = w
                    nxt.append(w)
        frontier = nxt
    closed = not frontier or all(key(u @ g) in reps for u in frontier for g in gens)
    order = len(reps)
    dfact = 1
    for i in range(2, dm1 + 2):
        dfact *= i
    s_blocks = []
    for u in reps.values():
        for g in gens:
            w = u @ g
            z = w @ int_inverse(reps[key(w)])
            s = z[:t, t:]
            if s.any():
                s_blocks.append(s.ravel())
    dim = t * dm1
    if s_blocks:
        lat = sympy.Matrix(np.array(s_blocks).tolist())
        rank = lat.rank()
        index = None
        if rank == dim:
            from sympy.matrices.normalforms import smith_normal_form
            snf = smith_normal_form(lat, domain=sympy.ZZ)
            diag = [abs(snf[i, i]) for i in range(dim)]
            index = int(np.prod([int(x) for x in diag]))
    else:
        rank, index = 0, None
    roots = all(is_root_row(r) for s in s_blocks for r in s.reshape(t, dm1) if r.any())
    status = "conclusive" if closed else "inconclusive"
    root_index = (dm1 + 1) ** t
    if rank < dim:
        status = "inconclusive"
    return GroupReport(order, closed and order == dfact, rank, dim, index,
                       rank == dim, index == root_index, roots, status, len(s_blocks))


# -- Picard-Lefschetz -----------------------------------------------------------

def intersection_form(g: int) -> np.ndarray:
    """a_i o b_j = delta_ij on the ordered basis (a_1, b_1, ..., a_g, b_g)."""
    j = np.zeros((2 * g, 2 * g), dtype=np.int64)
    for i in range(g):
        j[2 * i, 2 * i + 1] = 1
        j[2 * i + 1, 2 * i] = -1
    return j


def picard_lefschetz(l, v, form: np.ndarray) -> np.ndarray:
    """l -> l + (l o v) v over a common absolute basis."""
    l = np.asarray(l, dtype=np.int64)
    v = np.asarray(v, dtype=np.int64)
    form = np.asarray(form, dtype=np.int64)
    if l.shape != v.shape or form.shape != (l.size, l.size):
        raise RelHomError("mismatched bases")
    return l + int(l @ form @ v) * v


# -- braid actions ---------------------------------------------------------------

def _mul(x, y):
    if isinstance(x, tuple):
        # permutations compose like matrices acting on the left: (x*y) = x after y
        return perm_then(y, x)
    return x @ y


def _inv(x):
    return perm_inverse(x) if isinstance(x, tuple) else int_inverse(x)


def braid_act(k: int, tup: Sequence, inverse: bool = False) -> list:
    """sigma_k (1-based): M_k -> M_k^-1 M_{k+1} M_k, M_{k+1} -> M_k."""
    out = list(tup)
    a, b = out[k - 1], out[k]
    if not inverse:
        out[k - 1] = _mul(_mul(_inv(a), b), a)
        out[k] = a
    else:
        out[k - 1] = b
        out[k] = _mul(_mul(b, a), _inv(b))
    return out


def tuple_product(tup: Sequence):
    """M_N ... M_1 (or the permutation applying sigma_1 first)."""
    acc = None
    for x in tup:
        acc = x if acc is None else _mul(x, acc)
    return acc


def _perm_conj(p, c):
    # c p c^-1 relabelling sheets by c
    return perm_then(perm_then(perm_inverse(c), p), c)


def canonical_form(tup: Sequence, conjugators: Sequence | None = None):
    if tup and isinstance(tup[0], tuple):
        d = len(tup[0])
        best = None
        for c in itertools.permutations(range(1, d + 1)):
            cand = tuple(_perm_conj(p, c) for p in tup)
            if best is None or cand < best:
                best = cand
        return best
    mats = [np.asarray(m, dtype=np.int64) for m in tup]
    conj = conjugators or [np.eye(mats[0].shape[0], dtype=np.int64)]
    best = None
    for c in conj:
        ci = int_inverse(c)
        cand = tuple(tuple((ci @ m @ c).ravel().tolist()) for m in mats)
        if best is None or cand < best:
            best = cand
    return best


def braid_orbit(tup: Sequence, cap: int = 200000, conjugators=None) -> set:
    """Canonical classes reachable from ``tup`` under sigma_k^{+-1}."""
    start = list(tup)
    seen = {canonical_form(start, conjugators)}
    raw_seen = {_rawkey(start)}
    queue = deque([start])
    while queue:
        cur = queue.popleft()
        for k in range(1, len(cur)):
            for inv in (False, True):
                nxt = braid_act(k, cur, inv)
                rk = _rawkey(nxt)
                if rk in raw_seen:
                    continue
                raw_seen.add(rk)
                if len(raw_seen) > cap:
                    raise RelHomError("orbit exceeds cap")
                seen.add(canonical_form(nxt, conjugators))
                queue.append(nxt)
    return seen


def _rawkey(tup):
    if tup and isinstance(tup[0], tuple):
        return tuple(tup)
    return tuple(tuple(np.asarray(m).ravel().tolist()) for m in tup)


def hurwitz_count(g: int, d: int, profile: Sequence[int], cap: int = 2_000_000) -> int:
    """Brute-force count of transitive transposition tuples with the given
    product cycle type, modulo simultaneous conjugation in S_d."""
    prof = tuple(sorted(profile, reverse=True))
    if sum(prof) != d:
        raise RelHomError("profile must partition d")
    n = 2 * g + d + len(prof) - 2
    trans = [transposition(d, a, b) for a in range(1, d + 1) for b in range(a + 1, d + 1)]
    if len(trans) ** n > cap:
        raise RelHomError("enumeration exceeds size cap")
    classes = set()
    for tup in itertools.product(trans, repeat=n):
        prod = perm_seq(tup, d)
        if cycle_type(prod) != prof or not is_transitive(tup, d):
            continue
        classes.add(canonical_form(tup))
    return len(classes)


def seed_tuple(g: int, d: int, profile: Sequence[int]) -> list:
    """One valid transposition tuple found by enumeration (for orbit seeding)."""
    prof = tuple(sorted(profile, reverse=True))
    n = 2 * g + d + len(prof) - 2
    trans = [transposition(d, a, b) for a in range(1, d + 1) for b in range(a + 1, d + 1)]
    for tup in itertools.product(trans, repeat=n):
        if cycle_type(perm_seq(tup, d)) == prof and is_transitive(tup, d):
            return list(tup)
    raise RelHomError("no covering with these data")


def braid_orbit_count(g: int, d: int, profile: Sequence[int]) -> int:
    return len(braid_orbit(seed_tuple(g, d, profile)))


# -- genus one braid monodromy ---------------------------------------------------

def _braid_on_word(i: int, word: list) -> list:
    """Automorphism sigma_i: g_i -> g_{i+1}, g_{i+1} -> g_{i+1}^-1 g_i g_{i+1}."""
    out = []
    for k, e in word:
        if k == i:
            img = [(i + 1, 1)]
        elif k == i + 1:
            img = [(i + 1, -1), (i, 1), (i + 1, 1)]
        else:
            img = [(k, 1)]
        if e < 0:
            img = [(kk, -ee) for kk, ee in reversed(img)]
        out += img
    return out


def apply_braid_word(braid: Sequence[int], word: list) -> list:
    """Apply the automorphisms of a braid word, rightmost generator first."""
    for i in reversed(braid):
        word = _braid_on_word(i, word)
    return word


GENUS1_BRAIDS = {
    "sigma1": [1],
    "sigma3": [3],
    "theta1": [2, 2, 1, 2, 2],
    "theta3": [2, 2, 3, 2, 2],
}

GENUS1_WORDS = {
    "gamma1,2": [(1, 1)],
    "l1": [(4, -1), (3, -1), (2, -1), (1, -1)],
    "a1": [(4, 1), (3, 1)],
    "b1": [(2, 1), (3, 1)],
}


def genus1_basis() -> ContourBasis:
    cov = new_permutation(2, [(1, 2)] * 4, (1, 1))
    order = ["gamma1,2", "l1", "a1", "b1"]
    cols = [lift_word(cov, GENUS1_WORDS[n])[0] for n in order]
    return ContourBasis(tuple(order), np.array(cols).T, "genus1", cov, 3)


def genus1_braid_generators() -> dict[str, np.ndarray]:
    """Braid monodromy matrices on (gamma_12, l_1, a, b), from contour words."""
    basis = genus1_basis()
    cov = basis.covering
    out = {}
    for name, braid in GENUS1_BRAIDS.items():
        cols = []
        for el in basis.names:
            w = apply_braid_word(braid, GENUS1_WORDS[el])
            v, _ = lift_word(cov, w, 1)
            cols.append(basis.inverse @ v)
        out[name] = np.array(cols, dtype=np.int64).T
    return out


def appendix_a_tuple(g: int, d: int) -> MonodromyTuple:
    cov = new_permutation(d, clebsch_transpositions(g, d), (1,) * d)
    return monodromy_tuple(cov, build_basis(cov, "appendixA"))


def polynomial_tuple(d: int) -> MonodromyTuple:
    cov = new_permutation(d, polynomial_transpositions(d), (d,))
    return monodromy_tuple(cov, build_basis(cov, "appendixA"))
