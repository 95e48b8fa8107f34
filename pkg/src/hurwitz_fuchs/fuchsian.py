"""Fuchsian system dPhi/dlam = A(lam) Phi with A = -sum_j E_j (V + qI)/(lam - lam_j),
V = [Gamma, U], and its solution matrix built from period integrals."""
from __future__ import annotations

from dataclasses import dataclass, field
from math import comb, factorial

import numpy as np

from . import numkit
from .covering import HyperellipticCovering, SurfacePoint
from .numkit import segment, ComplexPath, psqrt
from .periods import (PeriodData, RawForms, holomorphic_basis, integrate_lift,
                      rotation_coefficients, fay_transform, W_between_ramification)
from .relhom import build_basis, monodromy_action, boundary, ContourBasis


class FuchsianError(RuntimeError):
    pass


@dataclass(frozen=True)
class FuchsianSystem:
    q: float
    lams: np.ndarray
    gamma: np.ndarray

    @property
    def N(self) -> int:
        return self.lams.size

    @property
    def U(self) -> np.ndarray:
        return np.diag(self.lams)

    @property
    def V(self) -> np.ndarray:
        return self.gamma @ self.U - self.U @ self.gamma

    def residue(self, j: int) -> np.ndarray:
        """A_j = -E_j (V + qI), j 0-based."""
        out = np.zeros((self.N, self.N), dtype=complex)
        out[j] = -(self.V[j] + self.q * np.eye(self.N)[j])
        return out

    def A(self, lam: complex) -> np.ndarray:
        # row j of sum_j A_j/(lam - lam_j) is the only nonzero row of A_j
        m = -(self.V + self.q * np.eye(self.N))
        return m / (lam - self.lams)[:, None]


def build_system(gamma, lams, q: float = -0.5) -> FuchsianSystem:
    g = np.asarray(gamma, dtype=complex)
    lam = np.asarray(lams, dtype=complex)
    if g.shape != (lam.size, lam.size):
        raise FuchsianError("Gamma shape does not match the number of poles")
    if np.max(np.abs(g - g.T)) > 1e-9 * max(1.0, np.max(np.abs(g))) or np.any(np.diag(g) != 0):
        raise FuchsianError("Gamma must be symmetric with zero diagonal")
    gaps = np.abs(lam[:, None] - lam[None, :]) + np.eye(lam.size)
    if np.min(gaps) == 0:
        raise FuchsianError("coincident poles")
    return FuchsianSystem(float(q), lam, g)


# -- solution matrix --------------------------------------------------------------

@dataclass
class PhiMatrix:
    lam: complex
    values: np.ndarray
    names: tuple
    level: int
    signs: np.ndarray


class PhiEngine:
    """Evaluates Phi columns for contours given in lasso coordinates.

    The class at lam is the base-point lasso combination transported along
    the straight segment from the base point to lam on every sheet.
    """

    def __init__(self, cov, data: PeriodData | None = None, tol: float = 1e-12):
        self.cov = cov
        self.tol = tol
        self.data = data or holomorphic_basis(cov, tol)
        self.shadow = cov.permutation_shadow()
        self.base = cov.geometry.base
        self.forms: RawForms = self.data.forms
        # integrals of f^p W over each lasso: (N, P+1, N)
        self.lasso = self.data.combine(self.data.raw)
        self.bd = np.array([boundary(t, self.shadow.d) for t in self.shadow.transpositions])

    def segment_integrals(self, lam: complex) -> np.ndarray:
        """(d, P+1, N): integrals of f^p W over each sheet's lift of [base, lam]."""
        d = self.shadow.d
        if abs(lam - self.base) < 1e-15:
            return np.zeros((d, self.forms.powers + 1, self.cov.N), dtype=complex)
        path = segment(self.base, lam)
        rows = []
        for s in range(1, d + 1):
            lift, _ = self.cov.lift_path(path, s)
            rows.append(integrate_lift(self.cov, lift, self.forms, self.tol))
        return self.data.combine(np.array(rows))

    def columns(self, lam: complex, vecs: np.ndarray, level: int = 1,
                seg: np.ndarray | None = None) -> np.ndarray:
        """Phi at ``level`` (q = 1/2 - level) for lasso vectors (columns of vecs).

        Phi = (1/n!) int_s (lam - f)^n W(., P_j).
        """
        vecs = np.asarray(vecs)
        seg = self.segment_integrals(lam) if seg is None else seg
        n = level
        coef = np.array([comb(n, p) * lam ** (n - p) * (-1) ** p for p in range(n + 1)])
        base_part = np.einsum("p,kpj->kj", coef, self.lasso[:, :n + 1, :])  # (N lassos, N)
        seg_part = np.einsum("p,spj->sj", coef, seg[:, :n + 1, :])  # (d, N)
        out = vecs.T @ base_part + (vecs.T @ self.bd) @ seg_part
        return out.T / factorial(n)

    def phi(self, lam: complex, basis: ContourBasis | None = None, level: int = 1) -> np.ndarray:
        mat = np.eye(self.cov.N, dtype=np.int64) if basis is None else basis.matrix
        return self.columns(lam, mat, level)

    def phi_column(self, lam: complex, vec, level: int = 1) -> np.ndarray:
        return self.columns(lam, np.asarray(vec)[:, None], level)[:, 0]


def system_for(cov, data: PeriodData, q: float = -0.5) -> FuchsianSystem:
    return build_system(rotation_coefficients(cov, data).gamma, cov.branch_values, q)


def phi_column(system: FuchsianSystem, engine: PhiEngine, vec, lam: complex, level: int = 1):
    return engine.phi_column(lam, vec, level)


def phi_matrix(system: FuchsianSystem, engine: PhiEngine, basis: ContourBasis, lam: complex,
               level: int = 1) -> PhiMatrix:
    vals = engine.phi(lam, basis, level)
    return PhiMatrix(lam, vals, basis.names, level, np.array(engine.cov.sign_choices))


def richardson_derivative(fun, lam: complex, h: float, levels: int = 4) -> np.ndarray:
    """Richardson-extrapolated central differences of an analytic function."""
    table = []
    for k in range(levels):
        hk = h / 2 ** k
        table.append((fun(lam + hk) - fun(lam - hk)) / (2 * hk))
    for m in range(1, levels):
        f = 4 ** m
        table = [(f * table[i + 1] - table[i]) / (f - 1) for i in range(len(table) - 1)]
    return table[0]


def _dist(cov, lam) -> float:
    return float(np.min(np.abs(np.asarray(cov.branch_values) - lam)))


def residual(system: FuchsianSystem, engine: PhiEngine, lam: complex, basis=None,
             level: int = 1) -> float:
    h = 0.2 * _dist(engine.cov, lam)
    fun = lambda z: engine.phi(z, basis, level)
    d = richardson_derivative(fun, lam, h)
    phi = fun(lam)
    return float(np.linalg.norm(d - system.A(lam) @ phi) / np.linalg.norm(phi))


# -- determinant law ------------------------------------------------------------------

def continued_sqrt_product(lams, path_points, start_value=None) -> np.ndarray:
    """prod (lam - lam_j)^{1/2} continued along a polyline, values at its vertices.

    The starting branch is the product of principal roots at the first vertex.
    """
    lams = np.asarray(lams, dtype=complex)
    pts = np.asarray(path_points, dtype=complex)

    def raw(z):
        return np.prod(numkit.psqrt(z - lams))

    cur = raw(pts[0]) if start_value is None else start_value
    out = [cur]
    for z0, z1 in zip(pts[:-1], pts[1:]):
        n = max(8, int(np.ceil(abs(z1 - z0) / (0.05 * max(1e-3, min(_mind(lams, z0), _mind(lams, z1)))))))
        for t in np.linspace(0, 1, n + 1)[1:]:
            z = z0 + t * (z1 - z0)
            r = raw(z)
            cur = r if abs(r - cur) < abs(r + cur) else -r
        out.append(cur)
    return np.array(out)


def _mind(lams, z):
    return float(np.min(np.abs(lams - z)))


@dataclass
class DetReport:
    constants: np.ndarray
    mean: complex
    cv: float

    @property
    def abs_mean(self) -> float:
        return abs(self.mean)


def det_check(system, engine: PhiEngine, basis, grid) -> DetReport:
    grid = list(grid)
    # continue along the same segments from the base point that transport Phi
    start = continued_sqrt_product(system.lams, [engine.base])[0]
    roots = [continued_sqrt_product(system.lams, [engine.base, l], start)[1] for l in grid]
    cs = np.array([numkit.det(engine.phi(l, basis)) / r for l, r in zip(grid, roots)])
    mean = cs.mean()
    cv = float(np.std(cs) / abs(mean))
    return DetReport(cs, complex(mean), cv)


def det_stability(cov, grid, perturb: float = 1e-3, flavor: str = "standard",
                  tol: float = 1e-12) -> dict:
    """Fitted det constant before and after moving each lam_j by ``perturb``."""
    def fitted(c):
        eng = PhiEngine(c, tol=tol)
        rep = det_check(system_for(c, eng.data), eng, build_basis(eng.shadow, flavor), grid)
        return rep
    ref = fitted(cov)
    vals = np.array(cov.branch_values, dtype=complex)
    changes = []
    for j in range(vals.size):
        v = vals.copy()
        v[j] += perturb
        moved = fitted(cov.with_branch_values(v))
        changes.append(abs(moved.mean - ref.mean) / abs(ref.mean))
    return {"reference": ref, "rel_changes": changes, "max_rel_change": max(changes)}


def degree_two_phi(lams, lam: complex, y: complex) -> np.ndarray:
    """Closed-form solution for the two-sheeted genus zero covering, columns
    (l_1, gamma_12); ``y`` is the value of sqrt((lam-lam_1)(lam-lam_2)) on
    sheet one.  Matches the engine with sign choices (-1, -1)."""
    l1, l2 = (complex(x) for x in lams)
    r12, r21 = psqrt(l1 - l2), psqrt(l2 - l1)
    log_h = np.log(2 / (l1 - l2) * (lam - (l1 + l2) / 2 + y))
    return np.array([[-np.pi * 1j * r12, -2 / r12 * (y + 0.5 * (l1 - l2) * log_h)],
                     [-np.pi * 1j * r21, -2 / r21 * (y + 0.5 * (l2 - l1) * log_h)]])


# -- monodromy by continuation --------------------------------------------------------

@dataclass
class NumericMonodromy:
    index: object
    real_matrix: np.ndarray
    matrix: np.ndarray
    rounding_residual: float


def numerical_monodromy(system: FuchsianSystem, engine: PhiEngine, k, basis=None,
                        tol: float = 1e-12) -> NumericMonodromy:
    """Continue Phi(base) around the generator loop k (1-based) or 'inf'."""
    cov = engine.cov
    geo = cov.geometry
    path = geo.infinity_loop() if k == "inf" else geo.generator_loop(int(k) - 1)
    phi0 = engine.phi(engine.base, basis)
    end = numkit.ode_continue(system.A, path, phi0, tol=tol, poles=cov.branch_values,
                              exclusion=0.5 * geo.radius, min_steps=128)
    m = numkit.linsolve(phi0, end)
    r = np.rint(m.real).astype(np.int64)
    res = float(np.max(np.abs(m - r)))
    if res > 1e-4:
        raise FuchsianError(f"monodromy around {k} is not integral (residual {res:.2e})")
    return NumericMonodromy(k, m, r, res)


def compare_monodromy(system, engine: PhiEngine, flavor: str = "standard") -> dict:
    """Numeric monodromies in the lasso basis, moved to a named basis by R."""
    basis = build_basis(engine.shadow, flavor)
    R = basis.matrix
    Rinv = basis.inverse
    out = {}
    for k in list(range(1, engine.cov.N + 1)) + ["inf"]:
        nm = numerical_monodromy(system, engine, k)
        conj = Rinv @ nm.matrix @ R
        exact = monodromy_action(engine.shadow, basis, k).matrix
        out[k] = {"numeric": conj, "exact": exact, "residual": nm.rounding_residual,
                  "match": bool(np.array_equal(conj, exact))}
    return out


# -- Schlesinger transformation -----------------------------------------------------

@dataclass
class SchlesingerReport:
    max_error: float
    T_sq: float
    inverse_error: float
    monodromy_equal: bool
    monodromy_residual: float


def schlesinger_check(cov, blocks, grid, R=None, Y=None, tol: float = 1e-12,
                      data: PeriodData | None = None) -> SchlesingerReport:
    """Compare Phi-hat built from the renormalized kernel against Y(1-T) Phi R."""
    A, B, C, D = (np.atleast_2d(np.asarray(x, dtype=np.int64)) for x in blocks)
    data = data or holomorphic_basis(cov, tol)
    g = data.genus
    # new cycles: (b^; a^) = (A B; C D)(b; a), as lasso vectors
    a_old = np.array([data.cycles[f"a{i}"] for i in range(1, g + 1)])
    b_old = np.array([data.cycles[f"b{i}"] for i in range(1, g + 1)])
    b_new = A @ b_old + B @ a_old
    a_new = C @ b_old + D @ a_old
    hat_data = holomorphic_basis(cov, tol, normalization=(a_new, b_new))
    fay = fay_transform(data, A, B, C, D)
    eng = PhiEngine(cov, data, tol)
    hat_eng = PhiEngine(cov, hat_data, tol)
    n = cov.N
    R = np.eye(n, dtype=np.int64) if R is None else np.asarray(R, dtype=np.int64)
    Yd = np.ones(n) if Y is None else np.asarray(Y, float)
    signed_cov = cov if Y is None else cov.with_signs(Yd * np.asarray(cov.sign_choices))
    if Y is not None:
        hat_data = holomorphic_basis(signed_cov, tol, normalization=(a_new, b_new))
        hat_eng = PhiEngine(signed_cov, hat_data, tol)
    err, tsq, inv_err = 0.0, 0.0, 0.0
    for lam in grid:
        seg = eng.segment_integrals(lam)
        phi = eng.columns(lam, np.eye(n, dtype=np.int64), seg=seg)
        T = fay.T(lam)
        side_b = np.diag(Yd) @ (np.eye(n) - T) @ phi @ R
        side_a = hat_eng.columns(lam, R)
        scale = max(1.0, np.max(np.abs(side_b)))
        err = max(err, float(np.max(np.abs(side_a - side_b)) / scale))
        tsq = max(tsq, float(np.max(np.abs(T @ T)) / max(1.0, np.max(np.abs(T)) ** 2)))
        inv_err = max(inv_err, float(np.max(np.abs((np.eye(n) - T) @ (np.eye(n) + T) - np.eye(n)))))
    # monodromy of Phi-hat equals that of Phi when R = I
    mono_eq, mono_res = True, 0.0
    if np.array_equal(R, np.eye(n, dtype=np.int64)):
        sys0 = system_for(cov, data)
        sys1 = build_system(0.5 * _hat_between(hat_data), cov.branch_values, -0.5)
        for k in range(1, n + 1):
            m0 = numerical_monodromy(sys0, eng, k)
            m1 = numerical_monodromy(sys1, hat_eng, k)
            mono_eq &= bool(np.array_equal(m0.matrix, m1.matrix))
            mono_res = max(mono_res, m0.rounding_residual, m1.rounding_residual)
    return SchlesingerReport(err, tsq, inv_err, mono_eq, mono_res)


def _hat_between(hat_data: PeriodData) -> np.ndarray:
    out = W_between_ramification(hat_data)
    np.fill_diagonal(out, 0.0)
    return out


# -- q ladder ----------------------------------------------------------------------

@dataclass
class LadderReport:
    level: float
    derivative_rel: float
    system_residual: float


def q_ladder(engine: PhiEngine, lam: complex, level: float, basis=None) -> LadderReport:
    """Check d/dlam of the level solution against the next level up."""
    n = {-1.5: 2, -2.5: 3}.get(level)
    if n is None:
        raise FuchsianError("level must be -3/2 or -5/2")
    h = 0.2 * _dist(engine.cov, lam)
    fun = lambda z: engine.phi(z, basis, n)
    d = richardson_derivative(fun, lam, h)
    up = engine.phi(lam, basis, n - 1)
    rel = float(np.max(np.abs(d - up)) / np.max(np.abs(up)))
    sysq = system_for(engine.cov, engine.data, q=level)
    res = float(np.linalg.norm(d - sysq.A(lam) @ fun(lam)) / np.linalg.norm(fun(lam)))
    return LadderReport(level, rel, res)


# -- isomonodromy --------------------------------------------------------------------

@dataclass
class IsomonodromyReport:
    maineq_rel: float
    uniteq_abs: float
    eulereq_rel: float
    step: float


def _phi_for(cov, lam, tol, basis_flavor="standard"):
    eng = PhiEngine(cov, None, tol)
    basis = build_basis(eng.shadow, basis_flavor)
    return eng.phi(lam, basis)


def isomonodromy_check(cov, lam: complex, k: int | None = None, step: float = 1e-5,
                       tol: float = 1e-13) -> IsomonodromyReport:
    """Finite-difference checks of d phi_j/d lam_k = Gamma_jk phi_k, and of the
    unit and Euler equations with q = -1/2."""
    n = cov.N
    k = n if k is None else k
    kk = k - 1
    data = holomorphic_basis(cov, tol)
    gam = rotation_coefficients(cov, data).gamma
    phi = _phi_for(cov, lam, tol)
    vals = np.array(cov.branch_values, dtype=complex)

    def moved(delta):
        v = vals.copy()
        v[kk] += delta
        return cov.with_branch_values(v)

    dphi = (_phi_for(moved(step), lam, tol) - _phi_for(moved(-step), lam, tol)) / (2 * step)
    rows = [j for j in range(n) if j != kk]
    pred = gam[rows, kk][:, None] * phi[kk][None, :]
    main_rel = float(np.max(np.abs(dphi[rows] - pred)) / np.max(np.abs(pred)))
    # unit: shift everything (lam included) -> zero derivative
    up = _phi_for(cov.with_branch_values(vals + step), lam + step, tol)
    dn = _phi_for(cov.with_branch_values(vals - step), lam - step, tol)
    unit_abs = float(np.max(np.abs((up - dn) / (2 * step))) / np.max(np.abs(phi)))
    # Euler: scale everything -> derivative 1/2 phi
    up = _phi_for(cov.with_branch_values(vals * (1 + step)), lam * (1 + step), tol)
    dn = _phi_for(cov.with_branch_values(vals * (1 - step)), lam * (1 - step), tol)
    e_rel = float(np.max(np.abs((up - dn) / (2 * step) - 0.5 * phi)) / np.max(np.abs(phi)))
    return IsomonodromyReport(main_rel, unit_abs, e_rel, step)
