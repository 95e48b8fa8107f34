"""Complex-arithmetic kernel: polynomial roots, adaptive path quadrature,
ODE continuation along polygonal paths and conditioned dense linear algebra.

Everything here works on plain numpy arrays; ``ComplexPath`` is the only
structured type and is a thin validated wrapper over a vertex array.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
import scipy.linalg as sla
from scipy.linalg import lapack


class NumkitError(RuntimeError):
    pass


class QuadratureError(NumkitError):
    pass


class ConvergenceError(NumkitError):
    pass


class SingularMatrixError(NumkitError):
    pass


class PoleProximityError(NumkitError):
    pass


RCOND_MIN = 1e-13
MAX_SEGMENTS = 2**14


@dataclass(frozen=True)
class ComplexPath:
    vertices: np.ndarray
    closed: bool = False

    def __post_init__(self):
        v = np.asarray(self.vertices, dtype=complex).ravel()
        if v.size < 2 or (self.closed and v.size < 3):
            raise ValueError("path needs at least 2 vertices (3 when closed)")
        if not np.all(np.isfinite(v)):
            raise ValueError("non-finite vertex")
        pts = np.append(v, v[0]) if self.closed else v
        if np.any(np.abs(np.diff(pts)) == 0.0):
            raise ValueError("consecutive vertices must be distinct")
        object.__setattr__(self, "vertices", v)

    @property
    def points(self) -> np.ndarray:
        """Vertex list with the closing vertex appended for closed paths."""
        return np.append(self.vertices, self.vertices[0]) if self.closed else self.vertices

    @property
    def start(self) -> complex:
        return complex(self.vertices[0])

    @property
    def end(self) -> complex:
        return complex(self.points[-1])

    @property
    def length(self) -> float:
        return float(np.sum(np.abs(np.diff(self.points))))

    def reversed(self) -> "ComplexPath":
        return ComplexPath(self.points[::-1].copy(), False)

    def then(self, other: "ComplexPath") -> "ComplexPath":
        a, b = self.points, other.points
        if abs(a[-1] - b[0]) > 1e-12 * max(1.0, abs(a[-1])):
            raise ValueError("paths do not join")
        return ComplexPath(np.concatenate([a, b[1:]]), False)

    def distance_to(self, z: complex) -> float:
        p = self.points
        a, b = p[:-1], p[1:]
        d = b - a
        t = np.clip(np.real((z - a) * np.conj(d)) / np.abs(d) ** 2, 0.0, 1.0)
        return float(np.min(np.abs(a + t * d - z)))


def segment(a: complex, b: complex) -> ComplexPath:
    return ComplexPath(np.array([a, b], dtype=complex))


def circle(center: complex, radius: float, n: int = 128, start_angle: float = 0.0,
           clockwise: bool = False) -> ComplexPath:
    s = -1.0 if clockwise else 1.0
    th = start_angle + s * 2 * np.pi * np.arange(n) / n
    return ComplexPath(center + radius * np.exp(1j * th), closed=True)


def as_matrix(a) -> np.ndarray:
    m = np.atleast_2d(np.asarray(a, dtype=complex))
    if m.ndim != 2 or not np.all(np.isfinite(m)):
        raise ValueError("expected a finite 2-d complex matrix")
    return m


# -- polynomial roots --------------------------------------------------------

def _poly_scale(c: np.ndarray, z) -> np.ndarray:
    # normwise scale; coefficientwise scaling rejects clustered roots near 0
    return np.max(np.abs(c)) * np.maximum(1.0, np.abs(z)) ** (c.size - 1)


def psqrt(z):
    """Principal square root with -0.0 imaginary parts treated as +0.0."""
    return np.sqrt(np.asarray(z, dtype=complex) + 0j)


def roots_poly(coefficients: Sequence[complex], tol: float = 1e-12,
               max_iter: int = 500) -> list[complex]:
    """All roots of sum c_k z^(n-k) (highest degree first), with multiplicity."""
    c = np.trim_zeros(np.asarray(coefficients, dtype=complex), "f")
    if c.size < 2:
        raise ValueError("polynomial of degree 0 has no roots")
    n = c.size - 1
    a = c / c[0]
    if n == 1:
        return [complex(-a[1])]
    radius = 1.0 + np.max(np.abs(a[1:]))
    radius = min(radius, 2 * np.max(np.abs(a[1:]) ** (1.0 / np.arange(1, n + 1))) + 1e-3)
    z = radius * np.exp(1j * (2 * np.pi * np.arange(n) / n + 0.4))
    for _ in range(max_iter):
        diff = z[:, None] - z[None, :]
        np.fill_diagonal(diff, 1.0)
        step = np.polyval(a, z) / np.prod(diff, axis=1)
        z = z - step
        if np.max(np.abs(step)) <= 1e-15 * max(1.0, np.max(np.abs(z))):
            break
    # Newton polishing on the original coefficients
    dc = np.polyder(c)
    for _ in range(3):
        d = np.polyval(dc, z)
        ok = np.abs(d) > 0
        z = np.where(ok, z - np.polyval(c, z) / np.where(ok, d, 1.0), z)
    res = np.abs(np.polyval(c, z))
    if np.any(res > tol * _poly_scale(c, z)):
        raise ConvergenceError("root iteration did not converge")
    return [complex(r) for r in z]


# -- adaptive Gauss-Kronrod quadrature ---------------------------------------

_XGK = np.array([
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0])
_WGK = np.array([
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714])
_WG = np.array([
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327])

# 15 nodes on [-1, 1] and matching Kronrod / embedded Gauss weights
_NODES = np.concatenate([-_XGK[:-1], _XGK[::-1]])
_WK = np.concatenate([_WGK[:-1], _WGK[::-1]])
_WG15 = np.zeros(15)
_WG15[[1, 3, 5, 7, 9, 11, 13]] = np.concatenate([_WG[:3], [_WG[3]], _WG[2::-1]])


def integrate_pieces(pieces: Sequence[Callable[[np.ndarray], np.ndarray]], tol: float,
                     weights: Sequence[float] | None = None,
                     max_segments: int = MAX_SEGMENTS, noise: float = 1.0) -> np.ndarray:
    """Sum of integrals over t in [0,1] of each piece.

    A piece maps an array of parameters t to values of shape (m, len(t)):
    the already-pulled-back integrand (times dz/dt).  The absolute error
    budget ``tol`` is shared out in proportion to ``weights`` (typically
    arclengths) and each interval is bisected until its Kronrod-Gauss
    difference fits its share.  ``noise`` scales the roundoff floor when the
    integrand itself is evaluated with amplified relative error.
    """
    npc = len(pieces)
    w = np.ones(npc) if weights is None else np.asarray(weights, float)
    w = w / w.sum()
    # pending intervals: (piece index, a, b)
    pend = [(i, 0.0, 1.0) for i in range(npc)]
    total = None
    nseg = npc
    while pend:
        idx = np.array([p[0] for p in pend])
        a = np.array([p[1] for p in pend])
        b = np.array([p[2] for p in pend])
        half = 0.5 * (b - a)
        tt = (0.5 * (a + b))[:, None] + half[:, None] * _NODES[None, :]
        vals = []
        for i in np.unique(idx):
            sel = np.nonzero(idx == i)[0]
            v = np.asarray(pieces[i](tt[sel].ravel()))
            v = v.reshape(-1, sel.size, 15)
            vals.append((sel, v))
        m = vals[0][1].shape[0]
        if total is None:
            total = np.zeros(m, dtype=complex)
        k_est = np.empty((m, len(pend)), dtype=complex)
        g_est = np.empty((m, len(pend)), dtype=complex)
        k_abs = np.empty((m, len(pend)))
        for sel, v in vals:
            k_est[:, sel] = (v @ _WK) * half[sel]
            g_est[:, sel] = (v @ _WG15) * half[sel]
            k_abs[:, sel] = (np.abs(v) @ _WK) * half[sel]
        if not np.all(np.isfinite(k_est)):
            raise QuadratureError("non-finite integrand on path")
        err = np.max(np.abs(k_est - g_est), axis=0)
        budget = tol * w[idx] * (b - a)
        # roundoff floor from the integral of |f| over the interval
        floor = 64 * noise * np.finfo(float).eps * np.max(k_abs, axis=0)
        good = err <= np.maximum(budget, floor)
        total += k_est[:, good].sum(axis=1)
        nxt = []
        for j in np.nonzero(~good)[0]:
            mid = 0.5 * (a[j] + b[j])
            nxt.append((idx[j], a[j], mid))
            nxt.append((idx[j], mid, b[j]))
        nseg += len(nxt) // 2
        if nseg > max_segments:
            raise QuadratureError("subdivision limit reached; singularity near path?")
        pend = nxt
    return total


def polyline_pieces(path: ComplexPath, integrand: Callable[[np.ndarray], np.ndarray]):
    pts = path.points
    pieces = []
    for z0, z1 in zip(pts[:-1], pts[1:]):
        def piece(t, z0=z0, z1=z1):
            z = z0 + (z1 - z0) * t
            return np.atleast_2d(integrand(z)) * (z1 - z0)
        pieces.append(piece)
    return pieces, np.abs(np.diff(pts))


def integrate_path(integrand: Callable, path: ComplexPath, tol: float = 1e-12):
    """Integral of a (vectorised) analytic integrand along a polygonal path.

    ``integrand`` takes an array of points and returns either an array of the
    same length or an array of shape (m, len(z)); the result is a complex
    scalar or a length-m vector accordingly.
    """
    probe = np.asarray(integrand(np.array([path.start], dtype=complex)))
    scalar = probe.ndim <= 1
    pieces, lens = polyline_pieces(path, integrand)
    out = integrate_pieces(pieces, tol, lens)
    return complex(out[0]) if scalar else out


# -- ODE continuation --------------------------------------------------------

# Dormand-Prince 5(4) tableau
_C = np.array([0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1, 1])
_A = [
    [],
    [1 / 5],
    [3 / 40, 9 / 40],
    [44 / 45, -56 / 15, 32 / 9],
    [19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729],
    [9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656],
    [35 / 384, 0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84],
]
_B5 = np.array([35 / 384, 0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0])
_B4 = np.array([5179 / 57600, 0, 7571 / 16695, 393 / 640, -92097 / 339200, 187 / 2100, 1 / 40])


def ode_continue(coefficient: Callable[[complex], np.ndarray], path: ComplexPath, initial,
                 tol: float = 1e-12, poles: Sequence[complex] = (), exclusion: float = 0.0,
                 min_steps: int = 1) -> np.ndarray:
    """Transport a solution of dPhi/dlam = A(lam) Phi along a polygonal path.

    Local error per step is kept below ``tol`` times the step's arclength.
    ``min_steps`` caps the step size at path length / min_steps.
    """
    phi = np.array(as_matrix(initial), dtype=complex)
    for p in poles:
        if path.distance_to(p) < exclusion:
            raise PoleProximityError(f"path passes within {exclusion:g} of pole {p}")
    pts = path.points
    hmax = path.length / max(min_steps, 1)
    h = min(hmax, 0.05 * path.length)
    for z0, z1 in zip(pts[:-1], pts[1:]):
        seg_len = abs(z1 - z0)
        u = (z1 - z0) / seg_len

        def rhs(s, y):
            return (coefficient(z0 + u * s) * u) @ y

        s = 0.0
        scale_y = max(1.0, np.max(np.abs(phi)))
        while s < seg_len * (1 - 1e-14):
            h = min(h, hmax, seg_len - s)
            k = [rhs(s, phi)]
            for i in range(1, 7):
                yi = phi + h * sum(a * kk for a, kk in zip(_A[i], k))
                k.append(rhs(s + _C[i] * h, yi))
            y5 = phi + h * sum(b * kk for b, kk in zip(_B5, k))
            e = h * sum((b5 - b4) * kk for b5, b4, kk in zip(_B5, _B4, k))
            scale_y = max(1.0, np.max(np.abs(y5)))
            err = np.max(np.abs(e)) / scale_y
            allowed = tol * h
            if err <= allowed or h < 1e-14 * seg_len:
                s += h
                phi = y5
            fac = 0.9 * (allowed / err) ** 0.2 if err > 0 else 5.0
            h = h * min(5.0, max(0.2, fac))
    return phi


# -- linear algebra ----------------------------------------------------------

def rcond(a) -> float:
    a = as_matrix(a)
    if a.shape[0] != a.shape[1]:
        raise ValueError("square matrix required")
    lu, piv, info = lapack.zgetrf(a)
    if info > 0:
        return 0.0
    anorm = np.max(np.sum(np.abs(a), axis=0))
    rc, info = lapack.zgecon(lu, anorm, norm="1")
    return float(rc)


def linsolve(a, b) -> np.ndarray:
    a = as_matrix(a)
    bb = np.asarray(b, dtype=complex)
    if a.shape[0] != a.shape[1]:
        raise ValueError("square matrix required")
    rc = rcond(a)
    if rc < RCOND_MIN:
        raise SingularMatrixError(f"matrix ill-conditioned (rcond={rc:.3g})")
    return sla.lu_solve(sla.lu_factor(a), bb)


def det(a) -> complex:
    a = as_matrix(a)
    if a.shape[0] != a.shape[1]:
        raise ValueError("square matrix required")
    lu, piv = sla.lu_factor(a, check_finite=True)
    sign = (-1) ** int(np.sum(piv != np.arange(a.shape[0])))
    return complex(sign * np.prod(np.diag(lu)))


def inv(a) -> np.ndarray:
    a = as_matrix(a)
    return linsolve(a, np.eye(a.shape[0], dtype=complex))
