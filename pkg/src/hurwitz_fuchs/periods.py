"""Holomorphic differentials, period matrix, the normalized differentials
W(., P_j), rotation coefficients and their variational identities.

All contour integrals are assembled from integrals over the lasso lifts e_k
(see ``relhom``).  For a hyperelliptic covering y^2 = prod (lam - lam_k) the
raw differentials are

    v_i        = lam^i dlam / y                       (i < g)
    omega_k    = c_k dlam / (2 (lam - lam_k) y)        (c_k = local frame at P_k)

and W(., P_k) = omega_k - sum_alpha (oint_{a_alpha} omega_k) w_alpha.  The
frame constant c_k carries the sign eps_k, so omega_k already has principal
part dx_k / x_k^2.  For rational coverings W(., P_k) = c_k dgamma/(gamma-gamma_k)^2.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from . import numkit
from .covering import (CoveringError, HyperellipticCovering, RationalCovering, SurfacePoint,
                       new_hyperelliptic)
from .numkit import psqrt, segment
from .relhom import boundary, build_basis, clebsch_shape


class PeriodsError(ValueError):
    pass


MAX_POWER = 3


# -- raw differentials ------------------------------------------------------

class RawForms:
    """Vectorized integrands f^p * (basic differential), p = 0..MAX_POWER.

    Component layout: index p * nb + i, where i runs over the nb basic
    differentials of the covering (holomorphic first, then one seed per
    ramification point).
    """

    def __init__(self, cov, powers: int = MAX_POWER):
        self.cov = cov
        self.powers = powers
        if isinstance(cov, HyperellipticCovering):
            self.g = cov.genus
            self.frames = np.array([cov.local_frame(j) for j in range(cov.N)])
        else:
            self.g = 0
            self.frames = np.array([cov.local_frame(j) for j in range(cov.N)])
        self.nb = self.g + cov.N

    def basic(self, z, y=None) -> np.ndarray:
        z = np.asarray(z, dtype=complex)
        cov = self.cov
        if isinstance(cov, HyperellipticCovering):
            rows = [z ** i / y for i in range(self.g)]
            rows += [c / (2 * (z - lk) * y) for c, lk in zip(self.frames, cov.branch_values)]
        else:
            rows = [c / (z - gk) ** 2 for c, gk in zip(self.frames, cov.critical_points)]
        return np.array(rows)

    def fvalue(self, z):
        if isinstance(self.cov, HyperellipticCovering):
            return np.asarray(z, dtype=complex)
        return self.cov.f(z)

    def __call__(self, z, y=None) -> np.ndarray:
        b = self.basic(z, y)
        fz = self.fvalue(z)
        out = [b]
        for _ in range(self.powers):
            out.append(out[-1] * fz)
        return np.concatenate(out, axis=0)


def integrate_lift(cov, lift, forms: RawForms, tol: float) -> np.ndarray:
    if isinstance(cov, HyperellipticCovering):
        return lift.integrate(lambda lam, y: forms(lam, y), tol)
    return lift.integrate(lambda g: forms(g), tol)


def lasso_integrals(cov, forms: RawForms, tol: float) -> np.ndarray:
    """Rows: integrals of all raw components over e_1..e_N."""
    shadow = cov.permutation_shadow()
    out = []
    for k, (a, b) in enumerate(shadow.transpositions):
        lift, end = cov.lift_path(cov.geometry.generator_loop(k), a)
        if end != b:
            raise PeriodsError(f"lasso {k + 1} does not end on sheet {b}")
        out.append(integrate_lift(cov, lift, forms, max(tol, 1e-14 * _crude_scale(cov, lift, forms))))
    return np.array(out)


def _crude_scale(cov, lift, forms: RawForms) -> float:
    """max |integrand| times length, sampled at the path vertices."""
    if isinstance(cov, HyperellipticCovering):
        lam = np.array([pc[0] for pc in lift.pieces])
        y = np.array([pc[3](np.array([pc[0]]), pc[2])[0] for pc in lift.pieces])
        vals = forms(lam, y)
        length = lift.base_path.length
    else:
        gam = lift.pieces[0]
        vals = forms(gam)
        length = float(np.sum(np.abs(np.diff(gam))))
    return float(np.max(np.abs(vals)) * length)


# -- period data --------------------------------------------------------------

@dataclass
class PeriodData:
    """Everything derived from the lasso integrals of one covering."""

    covering: object
    tol: float
    raw: np.ndarray  # (N lassos, (P+1) * nb)
    forms: RawForms
    coeffs: np.ndarray  # g x g: w_alpha = sum_i coeffs[alpha, i] v_i
    B: np.ndarray
    a_corr: np.ndarray  # N x g: oint_{a_alpha} omega_k
    cycles: dict  # name -> lasso coordinate vector

    @property
    def genus(self) -> int:
        return self.forms.g

    @property
    def N(self) -> int:
        return self.covering.N

    def combine(self, raw_rows: np.ndarray) -> np.ndarray:
        """Map raw integrals (..., (P+1)*nb) to integrals of f^p W(., P_j).

        Returns shape (..., P+1, N).
        """
        g, nb = self.genus, self.forms.nb
        r = raw_rows.reshape(raw_rows.shape[:-1] + (self.forms.powers + 1, nb))
        hol = r[..., :g]
        seed = r[..., g:]
        if g:
            w = hol @ self.coeffs.T  # integrals of f^p w_alpha
            return seed - w @ self.a_corr.T
        return seed

    def combine_w(self, raw_rows: np.ndarray) -> np.ndarray:
        """Integrals of f^p w_alpha; shape (..., P+1, g)."""
        g, nb = self.genus, self.forms.nb
        r = raw_rows.reshape(raw_rows.shape[:-1] + (self.forms.powers + 1, nb))
        return r[..., :g] @ self.coeffs.T

    def contour_W(self, vec, power: int = 0) -> np.ndarray:
        """oint over a closed lasso combination of f^power W(., P_j), j = 1..N."""
        v = np.asarray(vec)
        return self.combine(v @ self.raw)[power]

    def contour_w(self, vec, power: int = 0) -> np.ndarray:
        v = np.asarray(vec)
        return self.combine_w(v @ self.raw)[power]

    # point evaluations -------------------------------------------------
    def w_at_ramification(self) -> np.ndarray:
        """w_alpha(P_j) in the chart x_j; shape (N, g)."""
        cov = self.covering
        if not self.genus:
            return np.zeros((cov.N, 0), dtype=complex)
        lam = cov.branch_values
        c = self.forms.frames
        powers = np.array([lam ** i for i in range(self.genus)])  # g x N
        return ((self.coeffs @ powers) * (2.0 / c)).T

    def W_at(self, point: SurfacePoint) -> np.ndarray:
        """Coefficients of W(P, P_j) (in dlam, or dgamma for rational) at P."""
        cov = self.covering
        if isinstance(cov, HyperellipticCovering):
            lam, y = point.base, point.value
            if np.min(np.abs(cov.branch_values - lam)) == 0:
                raise PeriodsError("evaluation on top of a ramification point needs the limit formula")
            b = self.forms.basic(np.array([lam]), np.array([y]))[:, 0]
        else:
            g = point.value
            if np.min(np.abs(cov.critical_points - g)) == 0:
                raise PeriodsError("evaluation on top of a ramification point needs the limit formula")
            b = self.forms.basic(np.array([g]))[:, 0]
        gg = self.genus
        if gg:
            w = self.coeffs @ b[:gg]
            return b[gg:] - self.a_corr @ w
        return b

    def w_at(self, point: SurfacePoint) -> np.ndarray:
        lam, y = point.base, point.value
        return self.coeffs @ np.array([lam ** i / y for i in range(self.genus)])


def _std_cycles(cov) -> dict:
    shadow = cov.permutation_shadow()
    basis = build_basis(shadow, "standard")
    return {n: basis.lasso(n) for n in basis.names}, basis


def holomorphic_basis(cov, tol: float = 1e-12, normalization=None) -> PeriodData:
    """Normalized holomorphic differentials and the period matrix.

    ``normalization`` optionally gives (a_vectors, b_vectors): lasso
    coordinates of another canonical basis used to normalize w and W.
    """
    forms = RawForms(cov)
    raw = lasso_integrals(cov, forms, tol)
    g = forms.g
    if g == 0:
        shadow = cov.permutation_shadow()
        cycles = _std_cycles(cov)[0] if clebsch_shape(shadow) else {}
        return PeriodData(cov, tol, raw, forms, np.zeros((0, 0)), np.zeros((0, 0)),
                          np.zeros((cov.N, 0)), cycles)
    cycles, _ = _std_cycles(cov)
    nb = forms.nb
    if normalization is None:
        a_vec = np.array([cycles[f"a{al}"] for al in range(1, g + 1)])
        b_vec = np.array([cycles[f"b{al}"] for al in range(1, g + 1)])
    else:
        a_vec, b_vec = (np.atleast_2d(np.asarray(x, dtype=np.int64)) for x in normalization)
    a_raw = (a_vec @ raw)[:, :nb]
    b_raw = (b_vec @ raw)[:, :nb]
    A = a_raw[:, :g]  # A[beta, i] = oint_{a_beta} v_i
    if numkit.rcond(A) < 1e-13:
        raise PeriodsError("singular a-period matrix")
    coeffs = numkit.inv(A.T)  # coeffs @ A.T = I
    B = (coeffs @ b_raw[:, :g].T).T  # B[alpha, beta] = oint_{b_alpha} w_beta
    a_corr = a_raw[:, g:].T  # a_corr[k, alpha] = oint_{a_alpha} omega_k
    return PeriodData(cov, tol, raw, forms, coeffs, B, a_corr, cycles)


# -- second kind differentials ------------------------------------------------------

@dataclass(frozen=True)
class SecondKindDifferential:
    index: int  # 1-based
    frame: complex
    a_corr: np.ndarray
    data: PeriodData = field(repr=False)

    def __call__(self, point: SurfacePoint) -> complex:
        return complex(self.data.W_at(point)[self.index - 1])

    def a_periods(self) -> np.ndarray:
        return np.array([self.data.contour_W(self.data.cycles[f"a{al}"])[self.index - 1]
                         for al in range(1, self.data.genus + 1)])


def second_kind(cov, data: PeriodData, j: int) -> SecondKindDifferential:
    if not 1 <= j <= cov.N:
        raise IndexError(j)
    corr = data.a_corr[j - 1] if data.genus else np.zeros(0)
    return SecondKindDifferential(j, complex(data.forms.frames[j - 1]), corr, data)


def eval_W_at(data: PeriodData, point: SurfacePoint, j: int) -> complex:
    return complex(data.W_at(point)[j - 1])


def regular_point_W(data: PeriodData, point: SurfacePoint, tol: float | None = None):
    """W(., Q)/dlam(Q) for a regular point Q of a hyperelliptic covering.

    Returns a callable P -> coefficient of dlam at P.
    """
    cov = data.covering
    if not isinstance(cov, HyperellipticCovering):
        raise PeriodsError("regular-point kernel implemented for hyperelliptic coverings")
    lq, yq = point.base, point.value
    dyq = yq * 0.5 * np.sum(1.0 / (lq - cov.branch_values))

    def seed(lam, y):
        t = lam - lq
        return 0.5 / t ** 2 + dyq / (2 * y * t) + yq / (2 * y * t ** 2)

    g = data.genus
    corr = np.zeros(g, dtype=complex)
    if g:
        tol = tol or data.tol
        for al in range(1, g + 1):
            vec = data.cycles[f"a{al}"]
            tot = 0j
            for k, c in enumerate(vec):
                if c == 0:
                    continue
                lift, _ = cov.lift_path(cov.geometry.generator_loop(k), 1)
                tot += c * lift.integrate(lambda lam, y: np.atleast_2d(seed(lam, y)), tol)[0]
            corr[al - 1] = tot

    def W(lam, y):
        w = data.coeffs @ np.array([lam ** i / y for i in range(g)]) if g else 0.0
        return seed(lam, y) - (corr @ w if g else 0.0)

    W.a_corr = corr
    W.seed = seed
    return W


# -- rotation coefficients ------------------------------------------------------

@dataclass(frozen=True)
class RotationMatrix:
    gamma: np.ndarray
    signs: np.ndarray

    def conjugated(self, flips) -> "RotationMatrix":
        y = np.diag(np.asarray(flips, float))
        return RotationMatrix(y @ self.gamma @ y, self.signs * np.asarray(flips))


def W_between_ramification(data: PeriodData) -> np.ndarray:
    """Matrix of W(P_j, P_k) in charts x_j, x_k (limit formulas, j != k)."""
    cov = data.covering
    n = cov.N
    out = np.zeros((n, n), dtype=complex)
    c = data.forms.frames
    if isinstance(cov, HyperellipticCovering):
        lam = cov.branch_values
        wr = data.w_at_ramification()  # (N, g)
        for j in range(n):
            for k in range(n):
                if j == k:
                    continue
                val = c[k] / ((lam[j] - lam[k]) * c[j])
                if data.genus:
                    val -= data.a_corr[k] @ wr[j]
                out[j, k] = val
    else:
        gm = cov.critical_points
        for j in range(n):
            for k in range(n):
                if j != k:
                    out[j, k] = c[j] * c[k] / (gm[j] - gm[k]) ** 2
    return out


def rotation_coefficients(cov, data: PeriodData | None = None) -> RotationMatrix:
    data = data or holomorphic_basis(cov)
    return RotationMatrix(0.5 * W_between_ramification(data), np.array(cov.sign_choices, float))


# -- residue cross-check (rational coverings) ----------------------------------------

def residue_gamma_squared(cov: RationalCovering, j: int, k: int, nodes: int = 256) -> complex:
    """ResRes of W(P,Q)^2 / (df(P) df(Q)) at (P_j, P_k), by nested circle quadrature.

    Works in the gamma coordinate where W = dg dh/(g - h)^2.  The trapezoid rule
    on circles converges geometrically for these analytic integrands.
    """
    crit = np.asarray(cov.critical_points)
    special = np.concatenate([crit, np.asarray(cov.poles, dtype=complex)])

    def radius(c):
        others = special[np.abs(special - c) > 1e-12]
        return 0.25 * float(np.min(np.abs(others - c)))

    gj, gk = crit[j], crit[k]
    rj, rk = radius(gj), radius(gk)
    t = np.exp(2j * np.pi * np.arange(nodes) / nodes)
    g = gj + rj * t  # inner variable around P_j
    h = gk + rk * t  # outer variable around P_k
    inner = 1.0 / ((g[None, :] - h[:, None]) ** 4 * cov.df(g)[None, :])
    res_g = (inner * (rj * t)[None, :]).mean(axis=1)  # (1/2 pi i) oint dg
    return complex(np.mean(res_g / cov.df(h) * rk * t))


# -- Rauch and Gamma identities -----------------------------------------------------

def _moved(cov, j: int, h: complex):
    v = np.array(cov.branch_values, dtype=complex)
    v[j] += h
    return cov.with_branch_values(v)


def _scaled(cov, s: float, shift: complex = 0.0):
    return cov.with_branch_values(np.array(cov.branch_values) * s + shift)


@dataclass
class RauchReport:
    dB_rel: float
    dw_rel: float
    ggg_rel: float
    unit_abs: float
    euler_rel: float
    det1_abs: float
    step: float

    def passed(self, tol: float = 1e-5, det_tol: float = 1e-9) -> bool:
        return max(self.dB_rel, self.dw_rel, self.ggg_rel, self.euler_rel) <= tol and \
            self.unit_abs <= tol and self.det1_abs <= det_tol


def _rel(a, b) -> float:
    a, b = np.asarray(a), np.asarray(b)
    return float(np.max(np.abs(a - b)) / max(np.max(np.abs(b)), 1e-300))


def rauch_check(cov, j: int = None, step: float = 1e-5, tol: float = 1e-13,
                probe: complex | None = None) -> RauchReport:
    """Central differences in lam_j against the Rauch/Gamma identities.

    j is 1-based (default: last branch point).  ``probe`` is a base point for
    the w-derivative check (default: midway between base point and centroid).
    """
    n = cov.N
    j = n if j is None else j
    jj = j - 1
    base = holomorphic_basis(cov, tol)
    gam = rotation_coefficients(cov, base).gamma
    plus = _moved(cov, jj, step)
    minus = _moved(cov, jj, -step)
    dp, dm = holomorphic_basis(plus, tol), holomorphic_basis(minus, tol)
    gp, gm = rotation_coefficients(plus, dp).gamma, rotation_coefficients(minus, dm).gamma
    dgam = (gp - gm) / (2 * step)
    wr = base.w_at_ramification()
    g = base.genus
    if g:
        dB = (dp.B - dm.B) / (2 * step)
        dB_rel = _rel(dB, np.pi * 1j * np.outer(wr[jj], wr[jj]))
    else:
        dB_rel = 0.0
    # dw_alpha at fixed lam: (1/2) w_alpha(P_j) W(P, P_j)
    if g:
        lam_p = probe if probe is not None else 0.5 * (cov.geometry.base + np.mean(cov.branch_values))
        pts = [c.fiber(lam_p)[0] for c in (plus, minus, cov)]
        dw = (dp.w_at(pts[0]) - dm.w_at(pts[1])) / (2 * step)
        dw_rel = _rel(dw, 0.5 * wr[jj] * base.W_at(pts[2])[jj])
    else:
        dw_rel = 0.0
    # (ggg) for i, k distinct from j
    pred, got = [], []
    for i in range(n):
        for k in range(n):
            if len({i, k, jj}) == 3:
                pred.append(gam[i, jj] * gam[k, jj])
                got.append(dgam[i, k])
    ggg_rel = _rel(got, pred) if pred else 0.0
    # unit field: sum_k d/dlam_k, realized by a common shift; Euler by scaling
    sp = holomorphic_basis(cov.with_branch_values(np.array(cov.branch_values) + step), tol)
    sm = holomorphic_basis(cov.with_branch_values(np.array(cov.branch_values) - step), tol)
    e_gam = (rotation_coefficients(sp.covering, sp).gamma - rotation_coefficients(sm.covering, sm).gamma) / (2 * step)
    unit_abs = float(np.max(np.abs(e_gam)) / np.max(np.abs(gam)))
    ep = holomorphic_basis(_scaled(cov, 1 + step), tol)
    em = holomorphic_basis(_scaled(cov, 1 - step), tol)
    E_gam = (rotation_coefficients(ep.covering, ep).gamma - rotation_coefficients(em.covering, em).gamma) / (2 * step)
    euler_rel = _rel(E_gam, -gam)
    det1 = identity_det1(base, lam=0.37 + 0.21j)
    return RauchReport(dB_rel, dw_rel, ggg_rel, unit_abs, euler_rel, det1, step)


def identity_det1(data: PeriodData, lam: complex) -> float:
    """max |sum_j (lam_j - lam) w_a(P_j) w_b(P_j)| relative to the term scale."""
    if not data.genus:
        return 0.0
    wr = data.w_at_ramification()
    lamj = data.covering.branch_values
    terms = (lamj - lam)[:, None, None] * wr[:, :, None] * wr[:, None, :]
    return float(np.max(np.abs(terms.sum(axis=0))) / np.max(np.abs(terms)))


# -- Fay transform and Schlesinger T ----------------------------------------------

def check_symplectic(A, B, C, D):
    A, B, C, D = (np.atleast_2d(np.asarray(x, dtype=np.int64)) for x in (A, B, C, D))
    M = np.block([[A, B], [C, D]])
    g = np.asarray(A).shape[0]
    J = np.block([[np.zeros((g, g), int), np.eye(g, dtype=int)], [-np.eye(g, dtype=int), np.zeros((g, g), int)]])
    if not np.array_equal(M @ J @ M.T, J):
        raise PeriodsError("blocks are not integer symplectic")


@dataclass(frozen=True)
class FayTransform:
    data: PeriodData
    K: np.ndarray  # (C B + D)^-1 C
    blocks: tuple

    def W_hat_at(self, point: SurfacePoint) -> np.ndarray:
        wr = self.data.w_at_ramification()
        return self.data.W_at(point) - 2j * np.pi * (self.data.w_at(point) @ self.K @ wr.T)

    def W_hat_between(self) -> np.ndarray:
        wr = self.data.w_at_ramification()
        out = W_between_ramification(self.data) - 2j * np.pi * wr @ self.K @ wr.T
        np.fill_diagonal(out, 0.0)
        return out

    def gamma_hat(self) -> np.ndarray:
        return 0.5 * self.W_hat_between()

    def T(self, lam: complex) -> np.ndarray:
        wr = self.data.w_at_ramification()
        lamj = self.data.covering.branch_values
        return np.pi * 1j * (wr @ self.K @ wr.T) * (lamj - lam)[None, :]


def fay_transform(data: PeriodData, A, B, C, D) -> FayTransform:
    A, B, C, D = (np.atleast_2d(np.asarray(x, dtype=np.int64)) for x in (A, B, C, D))
    check_symplectic(A, B, C, D)
    M = C @ data.B + D
    if numkit.rcond(M) < 1e-13:
        raise PeriodsError("C B + D is singular")
    return FayTransform(data, numkit.linsolve(M, C.astype(complex)), (A, B, C, D))


def schlesinger_T(fay: FayTransform, lam: complex) -> np.ndarray:
    return fay.T(lam)


# -- degeneration ------------------------------------------------------------------

@dataclass
class DegenerationReport:
    separations: list
    ratios: dict  # name -> list of complex ratios
    errors: dict  # name -> list of |ratio - 1|

    def monotone(self) -> dict:
        return {k: all(b < a for a, b in zip(v[:-1], v[1:])) for k, v in self.errors.items()}

    def passed(self, tol: float = 0.05) -> bool:
        return all(v[-1] <= tol for v in self.errors.values()) and all(self.monotone().values())


def degeneration_check(values_lower, lam0: complex, separations=(1e-1, 1e-2, 1e-3),
                       probe: complex = 0.4 + 1.3j, tol: float = 1e-11,
                       orientation: int = -1) -> DegenerationReport:
    """Ratios of both sides of the degeneration asymptotics as lam_{2g+2} -> lam_0.

    ``values_lower`` are the 2g branch values of the limiting genus g-1 surface;
    lam0 = lam_{2g+1} and lam_{2g+2} = lam0 + separation.  The canonical cycles
    are ``orientation`` times the standard (a, b); the asymptotic formulas hold
    for the reversed pair (orientation -1).
    """
    low = new_hyperelliptic(values_lower)
    dlow = holomorphic_basis(low, tol)
    y0 = complex(low.y_principal(lam0))
    P0 = SurfacePoint(lam0, 1, y0)
    P0s = SurfacePoint(lam0, 2, -y0)
    Wp = regular_point_W(dlow, P0, tol)
    Wm = regular_point_W(dlow, P0s, tol)
    y_low = complex(low.y_principal(probe))
    ratios = {k: [] for k in ("limWPP1", "asaWPP", "aswg", "asbWPP")}
    for s in separations:
        vals = list(values_lower) + [lam0, lam0 + s]
        cov = new_hyperelliptic(vals)
        cyc, _ = _std_cycles(cov)
        g = cov.genus
        a_vec = orientation * np.array([cyc[f"a{i}"] for i in range(1, g + 1)])
        b_vec = orientation * np.array([cyc[f"b{i}"] for i in range(1, g + 1)])
        data = holomorphic_basis(cov, tol, normalization=(a_vec, b_vec))
        n = cov.N
        root = psqrt(complex(s))
        y_hi = complex(cov.y_principal(probe))
        Whi = data.W_at(SurfacePoint(probe, 1, y_hi))[n - 1]
        lo = Wp(probe, y_low) - Wm(probe, y_low)
        ratios["limWPP1"].append(Whi / (0.5 * root * lo))
        a_int = data.contour_W(a_vec[g - 1], 1)[n - 1]
        ratios["asaWPP"].append(a_int / (np.pi * 1j * root))
        wg = data.w_at_ramification()[n - 1, g - 1]
        ratios["aswg"].append(2j * np.pi * wg * root / 2)
        b_int = data.contour_W(b_vec[g - 1], 1)[n - 1]
        ratios["asbWPP"].append(b_int * root / (2 * lam0))
    errors = {k: [abs(r - 1) for r in v] for k, v in ratios.items()}
    return DegenerationReport(list(separations), ratios, errors)
