"""Computable branched coverings with sheet tracking.

Three models: hyperelliptic y^2 = prod(lam - lam_k), rational lam = P(gamma)/Q(gamma)
and bare permutation data.  The two analytic models share a loop geometry
(base point, generator loops) built by :func:`loop_geometry`.
"""
from __future__ import annotations

import dataclasses
import itertools
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Sequence

import numpy as np

from .numkit import ComplexPath, integrate_pieces, psqrt, roots_poly, segment


class CoveringError(ValueError):
    pass


# -- permutations (1-based images stored as tuples) -------------------------

Perm = tuple


def perm_identity(d: int) -> Perm:
    return tuple(range(1, d + 1))


def transposition(d: int, a: int, b: int) -> Perm:
    p = list(range(1, d + 1))
    p[a - 1], p[b - 1] = b, a
    return tuple(p)


def perm_then(p: Perm, q: Perm) -> Perm:
    """Apply p first, then q."""
    return tuple(q[p[i] - 1] for i in range(len(p)))


def perm_inverse(p: Perm) -> Perm:
    out = [0] * len(p)
    for i, v in enumerate(p):
        out[v - 1] = i + 1
    return tuple(out)


def perm_seq(perms: Sequence[Perm], d: int) -> Perm:
    """Product of a sequence, applied left to right."""
    out = perm_identity(d)
    for p in perms:
        out = perm_then(out, p)
    return out


def cycle_type(p: Perm) -> tuple:
    seen, lens = set(), []
    for i in range(1, len(p) + 1):
        if i in seen:
            continue
        n, j = 0, i
        while j not in seen:
            seen.add(j)
            j = p[j - 1]
            n += 1
        lens.append(n)
    return tuple(sorted(lens, reverse=True))


def is_transitive(perms: Sequence[Perm], d: int) -> bool:
    reach, todo = {1}, [1]
    while todo:
        i = todo.pop()
        for p in perms:
            for j in (p[i - 1], perm_inverse(p)[i - 1]):
                if j not in reach:
                    reach.add(j)
                    todo.append(j)
    return len(reach) == d


def as_transposition(p: Perm) -> tuple[int, int]:
    moved = [i + 1 for i, v in enumerate(p) if v != i + 1]
    if len(moved) != 2:
        raise CoveringError(f"{p} is not a transposition")
    return moved[0], moved[1]


@dataclass(frozen=True)
class PermutationCovering:
    d: int
    transpositions: tuple  # pairs (a, b), a < b
    infinity_type: tuple
    genus: int

    @property
    def N(self) -> int:
        return len(self.transpositions)

    @property
    def m(self) -> int:
        return len(self.infinity_type)

    def perms(self) -> list[Perm]:
        return [transposition(self.d, a, b) for a, b in self.transpositions]

    def sigma_inf(self) -> Perm:
        return perm_inverse(perm_seq(self.perms(), self.d))


def new_permutation(d: int, transpositions, infinity_type) -> PermutationCovering:
    pairs = []
    for t in transpositions:
        a, b = sorted(int(x) for x in t)
        if not (1 <= a < b <= d):
            raise CoveringError(f"bad transposition {t} for d={d}")
        pairs.append((a, b))
    ktype = tuple(sorted((int(k) for k in infinity_type), reverse=True))
    if sum(ktype) != d or min(ktype) < 1:
        raise CoveringError("infinity type must be a partition of d")
    perms = [transposition(d, a, b) for a, b in pairs]
    if cycle_type(perm_seq(perms, d)) != ktype:
        raise CoveringError("product of transpositions does not match the infinity type")
    if not is_transitive(perms, d):
        raise CoveringError("transpositions do not generate a transitive group")
    twice_g = len(pairs) - d - len(ktype) + 2
    if twice_g < 0 or twice_g % 2:
        raise CoveringError("Riemann-Hurwitz count gives a non-integer genus")
    return PermutationCovering(d, tuple(pairs), ktype, twice_g // 2)


def clebsch_transpositions(g: int, d: int) -> list[tuple[int, int]]:
    """Clebsch normal form for simple poles: (12)^(2g+2), then (n,n+1)^2."""
    out = [(1, 2)] * (2 * g + 2)
    for n in range(2, d):
        out += [(n, n + 1)] * 2
    return out


def polynomial_transpositions(d: int) -> list[tuple[int, int]]:
    return [(k, k + 1) for k in range(1, d)]


# -- loop geometry ------------------------------------------------------------

def sort_values(values) -> np.ndarray:
    v = np.asarray(values, dtype=complex)
    order = sorted(range(v.size), key=lambda i: (v[i].real, v[i].imag))
    return np.array(order, dtype=int)


@dataclass(frozen=True)
class LoopGeometry:
    branch_values: np.ndarray
    base: complex
    radius: float
    clearance: float
    circle_vertices: int = 128

    def touch_point(self, k: int) -> complex:
        lk = self.branch_values[k]
        u = (self.base - lk) / abs(self.base - lk)
        return lk + self.radius * u

    def generator_loop(self, k: int, n: int | None = None) -> ComplexPath:
        """Loop gamma_{k+1}: stem, counterclockwise circle, stem back."""
        n = n or self.circle_vertices
        lk = self.branch_values[k]
        th0 = np.angle(self.base - lk)
        th = th0 + 2 * np.pi * np.arange(n + 1) / n
        ring = lk + self.radius * np.exp(1j * th)
        ring[-1] = ring[0]
        return ComplexPath(np.concatenate([[self.base], ring, [self.base]]))

    def infinity_loop(self, n: int | None = None) -> ComplexPath:
        """Clockwise circle through the base point enclosing every branch value."""
        n = n or 4 * self.circle_vertices
        v = self.branch_values
        x0 = 0.5 * (v.real.min() + v.real.max())
        hw = 0.5 * (v.real.max() - v.real.min())
        h = self.base.imag - v.imag.max()
        depth = max(v.imag.max() - v.imag.min(), hw * hw / h, 1.0)
        c = complex(x0, v.imag.max() - depth)
        rad = abs(self.base - c)
        th0 = np.angle(self.base - c)
        th = th0 - 2 * np.pi * np.arange(n + 1) / n
        pts = c + rad * np.exp(1j * th)
        pts[0] = pts[-1] = self.base
        return ComplexPath(pts)


def loop_geometry(values: np.ndarray) -> LoopGeometry:
    """Base point above the bounding box; see the decisions ledger."""
    v = np.asarray(values, dtype=complex)
    n = v.size
    gaps = [abs(v[i] - v[j]) for i in range(n) for j in range(i + 1, n)]
    min_gap = min(gaps) if gaps else 1.0
    diam = max(gaps) if gaps else 1.0
    x0 = 0.5 * (v.real.min() + v.real.max())
    top = v.imag.max()
    base = complex(x0, top + max(1.0, 0.5 * diam))
    radius = 0.2 * min_gap
    clearance = min(1e-3 * diam, 0.1 * min_gap)
    geo = LoopGeometry(v, base, radius, clearance)
    angles = np.angle(v - base)
    if np.any(np.diff(angles) <= 0):
        raise CoveringError("branch values need an unambiguous left-to-right order "
                            "as seen from the base point")
    for k in range(n):
        stem = segment(base, geo.touch_point(k))
        for j in range(n):
            if j != k and stem.distance_to(v[j]) < 1.5 * radius:
                raise CoveringError("generator stem passes too close to another branch value")
    return geo


# -- surface points and lifted paths -----------------------------------------

@dataclass(frozen=True)
class SurfacePoint:
    base: complex
    sheet: int
    value: complex  # y for hyperelliptic, gamma for rational


def _sqrt_cut(z, u):
    """Square root of z with branch cut along the ray t*u, t >= 0."""
    return psqrt(-z * np.conj(u)) * psqrt(-u)


@dataclass
class LiftedPath:
    covering: object
    base_path: ComplexPath
    start_sheet: int
    end_sheet: int
    pieces: list  # model specific
    start_value: complex
    end_value: complex

    def integrate(self, form: Callable, tol: float) -> np.ndarray:
        """Integrate a form given by its coefficient in the model chart.

        Hyperelliptic: form(lam, y) -> (m, n) coefficient of dlam.
        Rational: form(gamma) -> (m, n) coefficient of dgamma.
        """
        return self.covering._integrate_lift(self, form, tol)


# -- hyperelliptic ------------------------------------------------------------

@dataclass(frozen=True)
class HyperellipticCovering:
    branch_values: np.ndarray
    sign_choices: np.ndarray
    kind: str = field(default="hyperelliptic", init=False)

    @property
    def N(self) -> int:
        return self.branch_values.size

    @property
    def genus(self) -> int:
        return (self.N - 2) // 2

    d = 2
    m = 2
    infinity_type = (1, 1)

    @property
    def cut_pairing(self) -> list[tuple[int, int]]:
        return [(2 * k + 1, 2 * k + 2) for k in range(self.N // 2)]

    @cached_property
    def geometry(self) -> LoopGeometry:
        return loop_geometry(self.branch_values)

    def y_principal(self, lam) -> np.ndarray:
        lam = np.asarray(lam, dtype=complex)
        out = np.ones_like(lam)
        for lk in self.branch_values:
            out = out * psqrt(lam - lk)
        return out

    def base_fiber(self) -> list[SurfacePoint]:
        b = self.geometry.base
        y = complex(self.y_principal(b))
        return [SurfacePoint(b, 1, y), SurfacePoint(b, 2, -y)]

    def sqrt_pi(self, j: int) -> complex:
        """prod_{k != j} sqrt(lam_j - lam_k), principal branch per factor (j 0-based)."""
        lj = self.branch_values[j]
        out = 1.0 + 0j
        for k, lk in enumerate(self.branch_values):
            if k != j:
                out *= psqrt(lj - lk)
        return complex(out)

    def local_frame(self, j: int) -> complex:
        """Constant c with y = c * x_j + O(x_j^3) near P_j (j 0-based)."""
        if not 0 <= j < self.N:
            raise IndexError(j)
        return self.sign_choices[j] * self.sqrt_pi(j)

    def _segment_piece(self, z0, z1, y0):
        d = z1 - z0
        us = []
        for lk in self.branch_values:
            t = np.clip(np.real((lk - z0) * np.conj(d)) / abs(d) ** 2, 0.0, 1.0)
            p = z0 + t * d
            w = lk - p
            if abs(w) == 0:
                raise CoveringError("path hits a branch value")
            us.append(w / abs(w))
        us = np.array(us)

        def yfun(lam, s=1.0):
            out = s * np.ones_like(np.asarray(lam, dtype=complex))
            for lk, u in zip(self.branch_values, us):
                out = out * _sqrt_cut(lam - lk, u)
            return out

        ys = complex(yfun(np.array([z0]))[0])
        s = 1.0 if abs(ys - y0) < abs(ys + y0) else -1.0
        return (z0, z1, s, yfun), complex(s * yfun(np.array([z1]))[0])

    def lift_path(self, path: ComplexPath, start) -> tuple[LiftedPath, int]:
        """Lift from a sheet index at the base point, or from a SurfacePoint."""
        delta = self.geometry.clearance
        for lk in self.branch_values:
            if path.distance_to(lk) < delta:
                raise CoveringError(f"path within clearance of branch value {lk}")
        if isinstance(start, SurfacePoint):
            y0, sheet0 = start.value, start.sheet
            if abs(start.base - path.start) > 1e-12 * max(1, abs(path.start)):
                raise CoveringError("start point is not over the path start")
        else:
            sheet0 = int(start)
            if abs(path.start - self.geometry.base) > 1e-12 * max(1, abs(path.start)):
                raise CoveringError("sheet index start requires a path from the base point")
            y0 = self.base_fiber()[sheet0 - 1].value
        pieces, y = self._continue(path, y0)
        end_sheet = self._sheet_of(path.end, y)
        return LiftedPath(self, path, sheet0, end_sheet, pieces, y0, y), end_sheet

    def _continue(self, path: ComplexPath, y0: complex):
        pts = path.points
        pieces, y = [], y0
        for z0, z1 in zip(pts[:-1], pts[1:]):
            pc, y = self._segment_piece(z0, z1, y)
            pieces.append(pc)
        return pieces, y

    def _sheet_of(self, lam, y):
        # away from the base point a sheet is labelled by transport along the
        # straight segment from the base point
        ref = self.base_fiber()[0].value
        if abs(lam - self.geometry.base) > 1e-12 * max(1, abs(lam)):
            ref = self._continue(segment(self.geometry.base, lam), ref)[1]
        return 1 if abs(y - ref) < abs(y + ref) else 2

    def _integrate_lift(self, lift: LiftedPath, form, tol):
        fns, lens = [], []
        for z0, z1, s, yfun in lift.pieces:
            def piece(t, z0=z0, z1=z1, s=s, yfun=yfun):
                lam = z0 + (z1 - z0) * t
                return np.atleast_2d(form(lam, yfun(lam, s))) * (z1 - z0)
            fns.append(piece)
            lens.append(abs(z1 - z0))
        return integrate_pieces(fns, tol, lens, noise=_noise(lift.base_path.points, self.branch_values))

    def fiber(self, lam: complex) -> list[SurfacePoint]:
        if np.min(np.abs(self.branch_values - lam)) == 0:
            raise CoveringError("fiber over a branch value")
        if abs(lam - self.geometry.base) < 1e-14:
            return self.base_fiber()
        y = self._continue(segment(self.geometry.base, lam), self.base_fiber()[0].value)[1]
        return [SurfacePoint(lam, 1, y), SurfacePoint(lam, 2, -y)]

    def with_branch_values(self, values) -> "HyperellipticCovering":
        """Same labelling and signs, moved branch values (small moves only)."""
        v = np.asarray(values, dtype=complex)
        if np.any(sort_values(v) != np.arange(v.size)):
            raise CoveringError("move changes the branch value ordering")
        return HyperellipticCovering(v, self.sign_choices.copy())

    def with_signs(self, signs) -> "HyperellipticCovering":
        return new_hyperelliptic(self.branch_values, signs)

    def permutation_shadow(self) -> PermutationCovering:
        return _shadow(self)


def new_hyperelliptic(branch_values, sign_choices=None) -> HyperellipticCovering:
    v = np.asarray(branch_values, dtype=complex).ravel()
    if v.size < 2 or v.size % 2:
        raise CoveringError("need an even number (>= 2) of branch values")
    if min(abs(v[i] - v[j]) for i in range(v.size) for j in range(i)) == 0:
        raise CoveringError("repeated branch value")
    order = sort_values(v)
    eps = np.ones(v.size) if sign_choices is None else np.asarray(sign_choices, float).ravel()
    if eps.size != v.size or np.any(np.abs(eps) != 1):
        raise CoveringError("sign choices must be +-1, one per branch value")
    cov = HyperellipticCovering(v[order], eps[order])
    _ = cov.geometry
    return cov


# -- rational -------------------------------------------------------------------

@dataclass(frozen=True)
class RationalCovering:
    numerator: np.ndarray
    denominator: np.ndarray
    critical_points: np.ndarray
    critical_values: np.ndarray
    second_derivatives: np.ndarray
    sign_choices: np.ndarray
    infinity_type: tuple
    poles: tuple  # finite poles (with multiplicity)
    d: int
    kind: str = field(default="rational", init=False)
    genus = 0

    @property
    def branch_values(self) -> np.ndarray:
        return self.critical_values

    @property
    def N(self) -> int:
        return self.critical_values.size

    @property
    def m(self) -> int:
        return len(self.infinity_type)

    def f(self, gamma):
        return np.polyval(self.numerator, gamma) / np.polyval(self.denominator, gamma)

    def df(self, gamma):
        p, q = self.numerator, self.denominator
        num = np.polysub(np.polymul(np.polyder(p), q), np.polymul(p, np.polyder(q)))
        return np.polyval(num, gamma) / np.polyval(q, gamma) ** 2

    @cached_property
    def geometry(self) -> LoopGeometry:
        return loop_geometry(self.critical_values)

    def frame_root(self, j: int) -> complex:
        return complex(psqrt(2.0 / self.second_derivatives[j]))

    def local_frame(self, j: int) -> complex:
        """d gamma / d x_j at P_j including the sign eps_j (j 0-based)."""
        if not 0 <= j < self.N:
            raise IndexError(j)
        return self.sign_choices[j] * self.frame_root(j)

    def _fiber_raw(self, lam: complex) -> np.ndarray:
        c = np.polysub(self.numerator, lam * np.asarray(self.denominator))
        return np.array(roots_poly(c, 1e-9))

    @cached_property
    def _base_labels(self) -> np.ndarray:
        raw = self._fiber_raw(self.geometry.base)
        order = sorted(range(raw.size), key=lambda i: (round(raw[i].real, 12), raw[i].imag))
        pts = raw[order]
        # relabel so generator loops reproduce the normal form when possible
        perms = [self._loop_perm(pts, k) for k in range(self.N)]
        target = self._target_tuple()
        if target is not None:
            for relabel in itertools.permutations(range(self.d)):
                # relabel[i] = new label (0-based) of old sheet i
                ok = True
                for p, t in zip(perms, target):
                    q = [0] * self.d
                    for i in range(self.d):
                        q[relabel[i]] = relabel[p[i] - 1] + 1
                    if tuple(q) != transposition(self.d, *t):
                        ok = False
                        break
                if ok:
                    newpts = np.empty_like(pts)
                    for i in range(self.d):
                        newpts[relabel[i]] = pts[i]
                    return newpts
        return pts

    def _target_tuple(self):
        if self.infinity_type == (self.d,) and self.N == self.d - 1:
            return polynomial_transpositions(self.d)
        if self.infinity_type == (1,) * self.d:
            return clebsch_transpositions(0, self.d)
        return None

    def _loop_perm(self, pts, k) -> Perm:
        loop = self.geometry.generator_loop(k)
        out = []
        for g0 in pts:
            gam = self._track(loop, g0)
            out.append(int(np.argmin(np.abs(pts - gam[-1]))) + 1)
        return tuple(out)

    def base_fiber(self) -> list[SurfacePoint]:
        b = self.geometry.base
        return [SurfacePoint(b, i + 1, complex(g)) for i, g in enumerate(self._base_labels)]

    def _newton(self, g, lam, iters=30):
        p, q = self.numerator, self.denominator
        c = np.polysub(p, lam * np.asarray(q))
        dc = np.polyder(c)
        for _ in range(iters):
            step = np.polyval(c, g) / np.polyval(dc, g)
            g = g - step
            if abs(step) < 1e-15 * max(1, abs(g)):
                break
        return g

    def _track(self, path: ComplexPath, g0: complex) -> np.ndarray:
        """Follow one fiber point along the base path; returns the gamma polyline."""
        sing = np.concatenate([self.critical_points, np.asarray(self.poles, complex)])
        pts = path.points
        out = [complex(g0)]
        g = complex(g0)
        for z0, z1 in zip(pts[:-1], pts[1:]):
            t, h = 0.0, 1.0
            while t < 1.0 - 1e-15:
                h = min(h, 1.0 - t)
                lam = z0 + (z1 - z0) * (t + h)
                fib = self._fiber_near(lam)
                gap = _min_gap(fib)
                # predictor via df, corrector via Newton
                g_new = self._newton(g + (z1 - z0) * h / self.df(g), lam)
                move = abs(g_new - g)
                dist = np.min(np.abs(sing - g)) if sing.size else np.inf
                if move <= 0.1 * min(gap, dist) and np.isfinite(g_new):
                    t += h
                    g = g_new
                    out.append(g)
                    h *= 1.5
                else:
                    h *= 0.5
                    if h < 1e-12:
                        raise CoveringError("fiber tracking failed to resolve sheets")
        return np.array(out)

    def _fiber_near(self, lam):
        return self._fiber_raw(lam)

    def lift_path(self, path: ComplexPath, start) -> tuple[LiftedPath, int]:
        delta = self.geometry.clearance
        for lk in self.critical_values:
            if path.distance_to(lk) < delta:
                raise CoveringError(f"path within clearance of branch value {lk}")
        if isinstance(start, SurfacePoint):
            g0, sheet0 = start.value, start.sheet
        else:
            sheet0 = int(start)
            g0 = self.base_fiber()[sheet0 - 1].value
        gam = self._track(path, g0)
        end = gam[-1]
        if abs(path.end - self.geometry.base) < 1e-12 * max(1, abs(path.end)):
            ref = self._base_labels
        else:
            ref = np.array([p.value for p in self.fiber(path.end)])
        end_sheet = int(np.argmin(np.abs(ref - end))) + 1
        return LiftedPath(self, path, sheet0, end_sheet, [gam], complex(g0), complex(end)), end_sheet

    def _integrate_lift(self, lift: LiftedPath, form, tol):
        gam = lift.pieces[0]
        fns, lens = [], []
        for z0, z1 in zip(gam[:-1], gam[1:]):
            if z0 == z1:
                continue
            def piece(t, z0=z0, z1=z1):
                g = z0 + (z1 - z0) * t
                return np.atleast_2d(form(g)) * (z1 - z0)
            fns.append(piece)
            lens.append(abs(z1 - z0))
        return integrate_pieces(fns, tol, lens, noise=_noise(gam, self.critical_points))

    def fiber(self, lam: complex) -> list[SurfacePoint]:
        if np.min(np.abs(self.critical_values - lam)) == 0:
            raise CoveringError("fiber over a branch value")
        base = self.base_fiber()
        if abs(lam - self.geometry.base) < 1e-14:
            return base
        path = segment(self.geometry.base, lam)
        return [SurfacePoint(lam, p.sheet, complex(self._track(path, p.value)[-1])) for p in base]

    def with_branch_values(self, values) -> "RationalCovering":
        """Cubic family gamma^3 - 3c^2 gamma + m parameterised by its critical values."""
        if self.d != 3 or self.infinity_type != (3,):
            raise CoveringError("free branch values supported for the cubic family only")
        l1, l2 = np.asarray(values, dtype=complex)
        c3 = (l2 - l1) / 4
        c0 = self.critical_points[0]
        roots = c3 ** (1 / 3) * np.exp(2j * np.pi * np.arange(3) / 3)
        c = roots[np.argmin(np.abs(roots - c0))]
        mm = (l1 + l2) / 2
        cov = new_rational([1, 0, -3 * c * c, mm], [1], self.sign_choices)
        if not np.allclose(cov.critical_values, [l1, l2], atol=1e-9 * (1 + abs(l1) + abs(l2))):
            raise CoveringError("cubic family reparameterisation failed")
        return cov

    def with_signs(self, signs) -> "RationalCovering":
        return dataclasses.replace(self, sign_choices=np.asarray(signs, float).copy())

    def permutation_shadow(self) -> PermutationCovering:
        return _shadow(self)


def _noise(points, singular) -> float:
    """Relative error amplification of (z - s) differences along a path."""
    pts = np.asarray(points)
    sing = np.asarray(singular)
    dist = np.min(np.abs(pts[:, None] - sing[None, :]))
    return float(max(1.0, np.max(np.abs(pts)) / max(dist, 1e-300)))


def _min_gap(pts) -> float:
    pts = np.asarray(pts)
    if pts.size < 2:
        return np.inf
    d = np.abs(pts[:, None] - pts[None, :])
    np.fill_diagonal(d, np.inf)
    return float(d.min())


def new_rational(numerator, denominator, sign_choices=None) -> RationalCovering:
    p = np.trim_zeros(np.asarray(numerator, dtype=complex), "f")
    q = np.trim_zeros(np.asarray(denominator, dtype=complex), "f")
    if q.size == 0:
        raise CoveringError("zero denominator")
    d = max(p.size, q.size) - 1
    if d < 1:
        raise CoveringError("constant function")
    crit_poly = np.trim_zeros(np.polysub(np.polymul(np.polyder(p), q),
                                         np.polymul(p, np.polyder(q))), "f")
    if crit_poly.size == 0:
        raise CoveringError("constant function")
    finite_poles = tuple(roots_poly(q, 1e-9)) if q.size > 1 else ()
    ptype = {}
    for r in finite_poles:
        key = next((k for k in ptype if abs(k - r) < 1e-6), r)
        ptype[key] = ptype.get(key, 0) + 1
    kinf = p.size - q.size
    ktype = list(ptype.values()) + ([kinf] if kinf > 0 else [])
    ktype = tuple(sorted(ktype, reverse=True))
    if p.size > 1 and q.size > 1:
        if np.min(np.abs(np.polyval(q, roots_poly(p, 1e-9)))) < 1e-10 * np.max(np.abs(q)):
            raise CoveringError("numerator and denominator share a root")
    cands = roots_poly(crit_poly, 1e-8) if crit_poly.size > 1 else []
    crit = [c for c in cands if min([abs(c - r) for r in finite_poles] + [np.inf]) > 1e-6]
    dcrit = np.polyder(crit_poly)
    f2 = []
    for c in crit:
        f2.append(np.polyval(dcrit, c) / np.polyval(q, c) ** 2)
    f2 = np.array(f2, dtype=complex)
    scale = max(1.0, np.max(np.abs(crit_poly)))
    if len(crit) == 0:
        raise CoveringError("no finite critical points")
    if np.any(np.abs(f2) < 1e-8 * scale) or _min_gap(np.array(crit)) < 1e-6:
        raise CoveringError("degenerate (non-simple) critical point")
    expected = d + len(ktype) - 2
    if len(crit) != expected:
        raise CoveringError("critical point at infinity is not supported")
    crit = np.array(crit)
    vals = np.polyval(p, crit) / np.polyval(q, crit)
    if _min_gap(vals) < 1e-9 * max(1.0, np.max(np.abs(vals))):
        raise CoveringError("coincident critical values")
    order = sort_values(vals)
    eps = np.ones(len(crit)) if sign_choices is None else np.asarray(sign_choices, float).ravel()
    if eps.size != len(crit) or np.any(np.abs(eps) != 1):
        raise CoveringError("sign choices must be +-1, one per critical point")
    cov = RationalCovering(p, q, crit[order], vals[order], f2[order], eps,
                           ktype, finite_poles, d)
    _ = cov.geometry
    return cov


def _shadow(cov) -> PermutationCovering:
    pts = [p.value for p in cov.base_fiber()]
    pairs = []
    for k in range(cov.N):
        loop = cov.geometry.generator_loop(k)
        image = tuple(cov.lift_path(loop, s)[1] for s in range(1, cov.d + 1))
        pairs.append(as_transposition(image))
    return new_permutation(cov.d, pairs, cov.infinity_type)


def lift_path(covering, base_path: ComplexPath, start_sheet):
    return covering.lift_path(base_path, start_sheet)


def fiber(covering, lam: complex):
    return covering.fiber(lam)


def local_frame(covering, j: int) -> complex:
    return covering.local_frame(j)
