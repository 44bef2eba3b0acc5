"""Free energies and surface tensions.

The torus free energy of a spectral curve is the average of log|P| over a
product of circles,

    f(H, V) = mean over (phi, psi) of log|P(e^(H + i phi), e^(V + i psi))|.

The default evaluator integrates the inner circle exactly by factoring the
fiber polynomial (Jensen's formula) and the outer circle by the periodic
trapezoid rule with resolution doubling; a plain two-dimensional trapezoid
grid is kept as an independent cross-check.  Gradients of f use the exact
root-counting form of d/dH with bisection-located crossings.

Closed forms: the homogeneous hexagonal tension (Lobachevsky function) and
the free-fermion tension at spectral parameter u (inverse hyperbolic sine
gradient map).  Both Hessians have determinant pi^2, which is what makes
the commuting-Hamiltonian certificate in the flow module tick.

Sign conventions: f is convex, sigma = f* is convex, and the variational
problem is treated uniformly as minimization of the convex integrand.
The partial Legendre transform tau(p, xi) = max_nu (p nu - sigma(nu, xi))
satisfies d11 tau = 1 / d11 sigma and d22 tau / d11 tau = -det Hess sigma;
the minus sign is forced by convexity (tau is concave in its second slot)
and is what the commutation certificate consumes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numpy.polynomial import chebyshev as _cheb

from .dimers import SpectralCurve
from .errors import (DomainBoundary, NonConvergence, OutOfRange,
                     SingularLocus, Unbounded)
from .special import dilog, lobachevsky

_TWO_PI = 2.0 * np.pi


# ---------------------------------------------------------------------------
# fast vectorized Lobachevsky (Chebyshev fit of the smooth part)
# ---------------------------------------------------------------------------

def _build_lob_cheb():
    # L(x) - x + x log(2x) is analytic on [0, pi/2]
    nodes = 0.25 * np.pi * (1.0 + np.cos(np.pi * (np.arange(33) + 0.5) / 33))
    vals = []
    for x in nodes:
        smooth = lobachevsky(x) - x + x * math.log(2.0 * x) if x > 0 else 0.0
        vals.append(smooth)
    return _cheb.Chebyshev.fit(nodes, np.array(vals), deg=24, domain=[0.0, np.pi / 2])


_LOB_CHEB = _build_lob_cheb()


def lobachevsky_fast(x):
    """Vectorized L(x); agrees with the dilogarithm route to ~1e-13."""
    x = np.asarray(x, dtype=float)
    r = x - np.pi * np.floor(x / np.pi)
    flip = r > np.pi / 2
    r = np.where(flip, np.pi - r, r)
    r_safe = np.where(r > 0, r, 1.0)
    smooth = _LOB_CHEB(r)
    core = smooth + r - r * np.log(2.0 * r_safe)
    core = np.where(r > 0, core, 0.0)
    return np.where(flip, -core, core)


# ---------------------------------------------------------------------------
# free energy of a spectral curve
# ---------------------------------------------------------------------------

def _fiber_coeffs(curve: SpectralCurve, w: np.ndarray):
    """Coefficients of P(., w) as a z-polynomial for each w on the fiber."""
    d = curve.as_dict()
    i_all = sorted({i for (i, _) in d})
    i_min, i_max = i_all[0], i_all[-1]
    deg = i_max - i_min
    coeffs = np.zeros((deg + 1, w.size), dtype=complex)
    for (i, j), c in d.items():
        coeffs[i - i_min] += c * w ** j
    return i_min, coeffs


def _fiber_roots(coeffs: np.ndarray):
    """Roots of each column polynomial (lowest degree first layout)."""
    deg = coeffs.shape[0] - 1
    n = coeffs.shape[1]
    if deg == 0:
        return np.zeros((n, 0), dtype=complex), coeffs[0]
    lead = coeffs[-1]
    scale = np.max(np.abs(coeffs), axis=0)
    bad = np.abs(lead) < 1e-13 * np.maximum(scale, 1e-300)
    roots = np.full((n, deg), np.nan, dtype=complex)
    good = ~bad
    if np.any(good):
        comp = np.zeros((int(good.sum()), deg, deg), dtype=complex)
        comp[:, 1:, :-1] = np.eye(deg - 1)
        comp[:, 0, :] = (-coeffs[deg - 1::-1, good] / lead[good]).T
        roots[good] = np.linalg.eigvals(comp)
    if np.any(bad):
        for k in np.nonzero(bad)[0]:
            col = coeffs[:, k]
            nz = np.nonzero(np.abs(col) > 1e-13 * max(np.max(np.abs(col)), 1e-300))[0]
            if nz.size == 0:
                raise SingularLocus("fiber polynomial vanished identically")
            top = nz[-1]
            rts = np.roots(col[top::-1]) if top > 0 else np.zeros(0, dtype=complex)
            roots[k, :top] = rts
            roots[k, top:] = np.inf
            # escaped roots: treat via the reduced leading coefficient
    return roots, lead


def _jensen_mean(curve: SpectralCurve, H: float, V: float, n: int) -> float:
    """Outer trapezoid of the exact inner-circle integral."""
    psi = (np.arange(n) + 0.5) * (_TWO_PI / n)
    w = np.exp(V + 1j * psi)
    i_min, coeffs = _fiber_coeffs(curve, w)
    deg = coeffs.shape[0] - 1
    if deg == 0:
        vals = np.log(np.abs(coeffs[0]))
        return i_min * H + float(np.mean(vals))
    roots, lead = _fiber_roots(coeffs)
    finite = np.isfinite(roots)
    logmod = np.where(finite,
                      np.log(np.maximum(np.abs(np.where(finite, roots, 1.0)), 1e-300)),
                      0.0)
    inner = np.log(np.abs(lead)) + np.sum(np.maximum(H, logmod), axis=1)
    # fibers whose degree dropped: redo them with the trimmed polynomial
    for k in np.nonzero(np.any(~finite, axis=1))[0]:
        col = coeffs[:, k]
        nz = np.nonzero(np.abs(col) > 1e-13 * max(float(np.max(np.abs(col))), 1e-300))[0]
        if nz.size == 0:
            raise SingularLocus("fiber polynomial vanished identically")
        top = nz[-1]
        rts = np.roots(col[top::-1]) if top > 0 else np.zeros(0, dtype=complex)
        inner[k] = math.log(abs(col[top])) + float(
            np.sum(np.maximum(H, np.log(np.maximum(np.abs(rts), 1e-300)))))
    return i_min * H + float(np.mean(inner))


def _grid_mean(curve: SpectralCurve, H: float, V: float, n: int) -> float:
    phi = (np.arange(n) + 0.5) * (_TWO_PI / n)
    psi = (np.arange(n) + 0.5) * (_TWO_PI / n)
    z = np.exp(H + 1j * phi)[:, None]
    w = np.exp(V + 1j * psi)[None, :]
    vals = np.abs(curve(z, w))
    scale = max(abs(c) for _, c in curve.coeffs)
    if np.min(vals) < 1e-14 * scale:
        raise SingularLocus("spectral curve vanished on a quadrature node")
    return float(np.mean(np.log(vals)))


def free_energy(curve: SpectralCurve, H: float, V: float, tol: float = 1e-8,
                n0: int = 256, n_max: int = 16384, method: str = "jensen",
                return_info: bool = False):
    """Torus free energy, converged by resolution doubling.

    ``method`` is "jensen" (exact inner circle, default) or "grid" (plain
    two-dimensional trapezoid; independent cross-check path).
    """
    if n0 < 64:
        raise OutOfRange("resolution parameter must be at least 64")
    evaluate = _jensen_mean if method == "jensen" else _grid_mean
    n = n0
    prev = evaluate(curve, H, V, n)
    est = math.inf
    while n < n_max:
        n *= 2
        cur = evaluate(curve, H, V, n)
        est = abs(cur - prev)
        prev = cur
        if est <= tol:
            break
    if return_info:
        return prev, {"n": n, "estimate": est}
    return prev


def _count_inside(curve: SpectralCurve, H: float, psis: np.ndarray, V: float):
    w = np.exp(V + 1j * np.atleast_1d(psis))
    i_min, coeffs = _fiber_coeffs(curve, w)
    deg = coeffs.shape[0] - 1
    if deg == 0:
        return np.zeros(w.size, dtype=int), i_min
    roots, _ = _fiber_roots(coeffs)
    inside = np.isfinite(roots) & (np.abs(roots) < math.exp(H))
    return inside.sum(axis=1), i_min


def grad_free_energy(curve: SpectralCurve, H: float, V: float,
                     n: int = 2048) -> tuple[float, float]:
    """(d/dH, d/dV) of the free energy via exact root counting.

    The H-derivative equals i_min plus the fraction of the outer circle on
    which roots of the fiber polynomial sit inside radius e^H; jump
    positions are located by bisection, so the result is accurate to the
    bisection tolerance rather than the grid spacing.
    """

    def one_direction(cv, hh, vv):
        psis = np.arange(n) * (_TWO_PI / n)
        counts, i_min = _count_inside(cv, hh, psis, vv)
        total = 0.0
        for k in range(n):
            c0 = counts[k]
            c1 = counts[(k + 1) % n]
            a = psis[k]
            b = psis[k] + _TWO_PI / n
            if c0 == c1:
                total += c0 * (b - a)
                continue
            lo, hi = a, b
            for _ in range(46):
                mid = 0.5 * (lo + hi)
                cm, _ = _count_inside(cv, hh, np.array([mid]), vv)
                if cm[0] == c0:
                    lo = mid
                else:
                    hi = mid
            total += c0 * (lo - a) + c1 * (b - hi) + 0.5 * (c0 + c1) * (hi - lo)
        return i_min + total / _TWO_PI

    swapped = curve.transformed(swap=True)
    return one_direction(curve, H, V), one_direction(swapped, V, H)


@dataclass
class FreeEnergyField:
    """Evaluator bundle (value, gradient) for a curve's free energy."""

    curve: SpectralCurve
    tol: float = 1e-8
    warm_start: object = None   # optional callable (s, t) -> (H, V)

    def value(self, H: float, V: float) -> float:
        return free_energy(self.curve, H, V, tol=self.tol)

    def grad(self, H: float, V: float) -> tuple[float, float]:
        return grad_free_energy(self.curve, H, V)


def _newton_polygon_contains(curve: SpectralCurve, s: float, t: float,
                             margin: float = 1e-9) -> bool:
    pts = np.array([k for k, _ in curve.coeffs], dtype=float)
    # strict interior test by margin-shrunk support function over directions
    if pts.shape[0] < 3:
        return False
    center = pts.mean(axis=0)
    p = np.array([s, t])
    for a, b in ((1, 0), (0, 1), (-1, 0), (0, -1), (1, 1), (-1, -1), (1, -1), (-1, 1)):
        d = np.array([a, b], dtype=float)
        if p @ d > np.max(pts @ d) - margin:
            return False
    return True


def legendre_sigma(fef: FreeEnergyField, s: float, t: float,
                   tol: float = 1e-9, max_iter: int = 60):
    """sigma(s, t) = max over (H, V) of sH + tV - f(H, V).

    Solved as the root of grad f = (s, t) by a guarded Newton iteration
    with finite-difference Jacobian; returns (sigma, (H, V)).
    """
    if not _newton_polygon_contains(fef.curve, s, t, margin=1e-7):
        raise DomainBoundary(f"slope ({s}, {t}) not strictly inside the Newton polygon")
    if fef.warm_start is not None:
        H, V = fef.warm_start(s, t)
    else:
        H, V = 0.0, 0.0

    def residual(H, V):
        gh, gv = fef.grad(H, V)
        return np.array([gh - s, gv - t])

    r = residual(H, V)
    step = 1e-4
    prev = None
    for _ in range(max_iter):
        if np.max(np.abs(r)) <= tol:
            sigma = s * H + t * V - fef.value(H, V)
            return sigma, (H, V)
        rph = residual(H + step, V)
        rpv = residual(H, V + step)
        jac = np.column_stack([(rph - r) / step, (rpv - r) / step])
        if abs(np.linalg.det(jac)) < 1e-14:
            # stepped onto a facet of the gradient map; back toward the
            # last liquid point (or probe inward from the start)
            if prev is None:
                raise NonConvergence("gradient map flat at the start point",
                                     best=(H, V))
            H, V = 0.5 * (H + prev[0]), 0.5 * (V + prev[1])
            r = residual(H, V)
            continue
        delta = np.linalg.solve(jac, -r)
        cap = 0.5
        norm = float(np.max(np.abs(delta)))
        if norm > cap:
            delta *= cap / norm
        scale = 1.0
        base = np.max(np.abs(r))
        accepted = False
        for _ in range(30):
            rn = residual(H + scale * delta[0], V + scale * delta[1])
            if np.max(np.abs(rn)) < base:
                accepted = True
                break
            scale *= 0.5
        if not accepted:
            raise NonConvergence("line search stalled in the Legendre solve",
                                 best=(H, V), diagnostics={"residual": float(base)})
        prev = (H, V)
        H += scale * delta[0]
        V += scale * delta[1]
        r = rn
    raise NonConvergence("Legendre solve did not reach tolerance",
                         best=(H, V), diagnostics={"residual": float(np.max(np.abs(r)))})


# ---------------------------------------------------------------------------
# closed-form tensions
# ---------------------------------------------------------------------------

def _check_hex_domain(s, t):
    s = np.asarray(s, dtype=float)
    t = np.asarray(t, dtype=float)
    if np.any(s <= 0) or np.any(t <= 0) or np.any(s + t >= 1):
        raise DomainBoundary("hexagonal tension needs s, t > 0 and s + t < 1")
    return s, t


def sigma_hex(s, t):
    """-(1/pi) (L(pi s) + L(pi t) + L(pi (1 - s - t)))."""
    s, t = _check_hex_domain(s, t)
    return -(lobachevsky_fast(np.pi * s) + lobachevsky_fast(np.pi * t)
             + lobachevsky_fast(np.pi * (1.0 - s - t))) / np.pi


def grad_sigma_hex(s, t):
    s, t = _check_hex_domain(s, t)
    gs = np.log(np.sin(np.pi * s) / np.sin(np.pi * (s + t)))
    gt = np.log(np.sin(np.pi * t) / np.sin(np.pi * (s + t)))
    return gs, gt


def hess_sigma_hex(s, t):
    s, t = _check_hex_domain(s, t)
    cst = 1.0 / np.tan(np.pi * (s + t))
    h11 = np.pi * (1.0 / np.tan(np.pi * s) - cst)
    h22 = np.pi * (1.0 / np.tan(np.pi * t) - cst)
    h12 = -np.pi * cst
    return h11, h12, h22


def _check_ff_domain(s, t, u):
    s = np.asarray(s, dtype=float)
    t = np.asarray(t, dtype=float)
    if not 0.0 < u < np.pi / 2:
        raise OutOfRange("spectral parameter u must lie in (0, pi/2)")
    if np.any(s <= 0) or np.any(s >= 1) or np.any(t <= 0) or np.any(t >= 1):
        raise DomainBoundary("free-fermion tension needs s, t in (0, 1)")
    return s, t


def _ff_q(s, t, u):
    return (np.sin(np.pi * t) / np.tan(np.pi * s)
            - np.cos(2 * u) * np.cos(np.pi * t)) / np.sin(2 * u)


def grad_sigma_ff(s, t, u):
    """The two -asinh formulas of the free-fermion gradient map.

    The second component is the s <-> t mirror of the first; together they
    invert the closed-form free-energy gradient exactly.
    """
    s, t = _check_ff_domain(s, t, u)
    return -np.arcsinh(_ff_q(s, t, u)), -np.arcsinh(_ff_q(t, s, u))


def hess_sigma_ff(s, t, u):
    s, t = _check_ff_domain(s, t, u)
    s2u = np.sin(2 * u)
    c2u = np.cos(2 * u)
    q = _ff_q(s, t, u)
    r = _ff_q(t, s, u)
    rootq = np.sqrt(1.0 + q * q)
    rootr = np.sqrt(1.0 + r * r)
    h11 = np.pi * np.sin(np.pi * t) / (s2u * np.sin(np.pi * s) ** 2 * rootq)
    h22 = np.pi * np.sin(np.pi * s) / (s2u * np.sin(np.pi * t) ** 2 * rootr)
    h12 = -np.pi * (np.cos(np.pi * t) / np.tan(np.pi * s)
                    + c2u * np.sin(np.pi * t)) / (s2u * rootq)
    return h11, h12, h22


def grad_free_energy_ff(H, V, u, clamp_tol: float = 1e-12):
    """Closed-form (df/dH, df/dV) of the free-fermion free energy."""
    if not 0.0 < u < np.pi / 2:
        raise OutOfRange("spectral parameter u must lie in (0, pi/2)")
    tu, cu = math.tan(u), 1.0 / math.tan(u)

    def clamped_acos(x):
        if abs(x) > 1.0 + clamp_tol:
            raise OutOfRange(f"arccos argument {x} out of range")
        return math.acos(min(1.0, max(-1.0, x)))

    arg_h = (math.sinh(V - H) * tu - math.sinh(V + H) * cu) / (2.0 * math.cosh(H))
    arg_v = (math.sinh(H - V) * tu - math.sinh(V + H) * cu) / (2.0 * math.cosh(V))
    return clamped_acos(arg_h) / np.pi, clamped_acos(arg_v) / np.pi


def ff_curve(u: float) -> SpectralCurve:
    cu, su = math.cos(u), math.sin(u)
    return SpectralCurve.from_dict({(1, 1): cu, (0, 0): -cu, (1, 0): su, (0, 1): su})


def hex_curve() -> SpectralCurve:
    return SpectralCurve.from_dict({(0, 0): 1.0, (1, 0): -1.0, (0, 1): -1.0})


class _FFValueCache:
    """sigma_ff values via the exact gradient map plus one quadrature."""

    def __init__(self, u: float, tol: float = 1e-9):
        self.u = u
        self.curve = ff_curve(u)
        self.tol = tol
        self._cache: dict = {}

    def __call__(self, s: float, t: float) -> float:
        key = (round(float(s), 14), round(float(t), 14))
        if key not in self._cache:
            H, V = (float(x) for x in grad_sigma_ff(s, t, self.u))
            f = free_energy(self.curve, H, V, tol=self.tol)
            self._cache[key] = s * H + t * V - f
        return self._cache[key]


@dataclass
class SurfaceTension:
    """Evaluator bundle (value, gradient, Hessian) on a slope box."""

    variant: str
    lo: float
    hi: float
    value: object
    grad: object
    hess: object
    feasible: object

    def inset_box(self, eps: float = 1e-6) -> tuple[float, float]:
        return self.lo + eps, self.hi - eps


def hex_tension() -> SurfaceTension:
    def feasible(s, t, margin=0.0):
        s = np.asarray(s)
        t = np.asarray(t)
        return bool(np.all(s > margin) and np.all(t > margin)
                    and np.all(s + t < 1.0 - margin))

    return SurfaceTension("HexClosed", 0.0, 1.0, sigma_hex, grad_sigma_hex,
                          hess_sigma_hex, feasible)


def ff_tension(u: float) -> SurfaceTension:
    values = _FFValueCache(u)

    def value(s, t):
        s_arr = np.asarray(s, dtype=float)
        t_arr = np.asarray(t, dtype=float)
        if s_arr.ndim == 0:
            return values(float(s_arr), float(t_arr))
        out = np.empty(np.broadcast(s_arr, t_arr).shape)
        sb, tb = np.broadcast_arrays(s_arr, t_arr)
        for idx in np.ndindex(out.shape):
            out[idx] = values(float(sb[idx]), float(tb[idx]))
        return out

    def feasible(s, t, margin=0.0):
        s = np.asarray(s)
        t = np.asarray(t)
        return bool(np.all(s > margin) and np.all(t > margin)
                    and np.all(s < 1.0 - margin) and np.all(t < 1.0 - margin))

    return SurfaceTension(f"FFClosed(u={u})", 0.0, 1.0, value,
                          lambda s, t: grad_sigma_ff(s, t, u),
                          lambda s, t: hess_sigma_ff(s, t, u), feasible)


def quadratic_tension(qa: float, qb: float, qc: float,
                      box: float = 10.0) -> SurfaceTension:
    """sigma = (qa s^2 + 2 qb s t + qc t^2) / 2; exact Legendre oracle."""
    if qa <= 0 or qa * qc - qb * qb <= 0:
        raise OutOfRange("quadratic tension must be positive definite")

    def value(s, t):
        s = np.asarray(s, dtype=float)
        t = np.asarray(t, dtype=float)
        return 0.5 * (qa * s * s + 2 * qb * s * t + qc * t * t)

    def grad(s, t):
        s = np.asarray(s, dtype=float)
        t = np.asarray(t, dtype=float)
        return qa * s + qb * t, qb * s + qc * t

    def hess(s, t):
        shape = np.broadcast(np.asarray(s), np.asarray(t)).shape
        return (np.full(shape, qa), np.full(shape, qb), np.full(shape, qc))

    return SurfaceTension(f"Quadratic({qa},{qb},{qc})", -box, box, value,
                          grad, hess, lambda s, t, margin=0.0: True)


def numeric_tension(curve: SpectralCurve, warm_start=None,
                    tol: float = 1e-9) -> SurfaceTension:
    """Quadrature plus Legendre tension for an arbitrary curve."""
    fef = FreeEnergyField(curve, warm_start=warm_start)

    def value(s, t):
        return legendre_sigma(fef, float(s), float(t), tol=tol)[0]

    def grad(s, t):
        _, hv = legendre_sigma(fef, float(s), float(t), tol=tol)
        return hv

    def hess(s, t, step=1e-5):
        g0s, g0t = grad(s - step, t)
        g1s, g1t = grad(s + step, t)
        h11 = (g1s - g0s) / (2 * step)
        g2s, g2t = grad(s, t - step)
        g3s, g3t = grad(s, t + step)
        h22 = (g3t - g2t) / (2 * step)
        h12 = (g3s - g2s) / (2 * step)
        return h11, h12, h22

    def feasible(s, t, margin=0.0):
        return _newton_polygon_contains(curve, float(s), float(t),
                                        margin=max(margin, 1e-9))

    return SurfaceTension("NumericLegendre", 0.0, 1.0, value, grad, hess, feasible)


# ---------------------------------------------------------------------------
# partial Legendre transform
# ---------------------------------------------------------------------------

@dataclass
class PartialLegendre:
    """tau(p, xi) with its maximizer and closed second partials."""

    tau: float
    nu_star: float
    d1: float      # = nu_star
    d2: float      # = -d2 sigma at (nu_star, xi)
    d11: float     # = 1 / d11 sigma
    d12: float     # = -d12 sigma / d11 sigma
    d22: float     # = (d12 sigma)^2/d11 sigma - d22 sigma = -det/d11


def partial_legendre(sigma: SurfaceTension, p: float, xi: float,
                     eps: float = 1e-9, tol: float = 1e-12) -> PartialLegendre:
    """Legendre transform of sigma in its first slot at fixed xi."""
    lo, hi = sigma.lo + eps, sigma.hi - eps

    def g(nu):
        if not sigma.feasible(nu, xi, margin=0.0):
            return None
        return float(sigma.grad(nu, xi)[0]) - p

    # bracket the root of d1 sigma = p on the feasible slice
    grid = np.linspace(lo, hi, 65)
    vals = []
    for nu in grid:
        try:
            vals.append(g(nu))
        except DomainBoundary:
            vals.append(None)
    pts = [(nu, v) for nu, v in zip(grid, vals) if v is not None]
    if len(pts) < 2:
        raise DomainBoundary(f"xi={xi} leaves no feasible slice")
    bracket = None
    for (n0, v0), (n1, v1) in zip(pts, pts[1:]):
        if v0 == 0.0:
            bracket = (n0, n0)
            break
        if v0 * v1 < 0:
            bracket = (n0, n1)
            break
    if bracket is None:
        if all(v < 0 for _, v in pts) or all(v > 0 for _, v in pts):
            raise Unbounded(f"p={p} outside the closure of the gradient range")
        raise NonConvergence("no bracket found for the partial transform")
    a, b = bracket
    for _ in range(200):
        if b - a < tol:
            break
        mid = 0.5 * (a + b)
        vm = g(mid)
        va = g(a)
        if va == 0:
            b = a
            break
        if (va < 0) == (vm < 0):
            a = mid
        else:
            b = mid
    nu = 0.5 * (a + b)
    h11, h12, h22 = (float(x) for x in sigma.hess(nu, xi))
    if h11 <= 0:
        raise NonConvergence("second derivative not positive at the maximizer")
    tau = p * nu - float(sigma.value(nu, xi))
    d2 = -float(sigma.grad(nu, xi)[1])
    det = h11 * h22 - h12 * h12
    return PartialLegendre(tau=tau, nu_star=nu, d1=nu, d2=d2,
                           d11=1.0 / h11, d12=-h12 / h11, d22=-det / h11)


def hess_spectral_independence(s: float, t: float, u_list) -> float:
    """Max pairwise spread of det Hess sigma_ff over the spectral list."""
    dets = []
    for u in u_list:
        h11, h12, h22 = hess_sigma_ff(s, t, u)
        dets.append(float(h11 * h22 - h12 * h12))
    return max(dets) - min(dets) if len(dets) > 1 else 0.0
