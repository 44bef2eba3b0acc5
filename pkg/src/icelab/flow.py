"""Hamiltonian picture of the limit shape on a cylinder.

State: periodic samples of the momentum p(y) and the slope t(y) = dh/dy,
combined into l(y) = p + i pi t.  The evolution in the cylinder axis x is
generated by H = int tau(p, dh/dy) dy with tau the partial Legendre
transform of the surface tension; the equations of motion read

    dp/dx = d/dy[ d2 tau(p, t) ],    dt/dx = d/dy[ d1 tau(p, t) ].

For the closed-form densities both tau-gradients assemble into a single
complex field Phi(l) = d2 tau + i pi d1 tau, with Phi'(l) = F(e^l) the
rational function of the spectral curve, so dl/dx = F(e^l) dl/dy.  Two
independent integrators are provided: classical 4th-order method of lines
with spectral y-derivatives, and the implicit complex-characteristic
solver of the Burgers form (values transported along straight lines whose
complex foot point is found by Newton continuation).

Normalization notes pinned by the analytic cross-checks in the tests:
the closed-form densities obey d^2 H / d l^2 = F(e^l) / (2 pi i), and the
characteristic transport uses the sign of the holomorphic equation of
motion (the reconstructed height satisfies the elliptic limit-shape
equation only with the sign used here).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

from .dimers import SpectralCurve
from .errors import (BranchAmbiguous, DomainBoundary, OutOfRange,
                     ShockDetected, SingularBranch, StepFailure)
from .special import dilog
from .tension import (SurfaceTension, partial_legendre, sigma_hex,
                      grad_sigma_ff, hess_sigma_ff, hess_sigma_hex,
                      _FFValueCache)

TWO_PI_I = 2.0j * np.pi
SHOCK_DELTA = 1e-3


# ---------------------------------------------------------------------------
# state
# ---------------------------------------------------------------------------

@dataclass
class FlowState:
    """Periodic samples of momentum and slope on [0, L)."""

    L: float
    p: np.ndarray
    t: np.ndarray

    def __post_init__(self):
        self.p = np.asarray(self.p, dtype=float)
        self.t = np.asarray(self.t, dtype=float)
        if self.p.shape != self.t.shape or self.p.ndim != 1:
            raise OutOfRange("p and t must be equal-length vectors")
        if not (np.all(np.isfinite(self.p)) and np.all(np.isfinite(self.t))):
            raise StepFailure("non-finite state")

    @property
    def ny(self) -> int:
        return self.p.size

    @property
    def ys(self) -> np.ndarray:
        return np.arange(self.ny) * (self.L / self.ny)

    @property
    def l(self) -> np.ndarray:
        return self.p + 1j * np.pi * self.t

    @staticmethod
    def from_l(L: float, l: np.ndarray) -> "FlowState":
        l = np.asarray(l, dtype=complex)
        return FlowState(L, l.real, l.imag / np.pi)


def spectral_dy(arr: np.ndarray, L: float) -> np.ndarray:
    """Spectral periodic derivative."""
    n = arr.shape[-1]
    k = np.fft.fftfreq(n, d=L / (2 * np.pi * n))
    out = np.fft.ifft(1j * k * np.fft.fft(arr))
    return out.real if np.isrealobj(arr) else out


def spectral_antideriv(arr: np.ndarray, L: float) -> np.ndarray:
    """Periodic antiderivative of (arr - mean), anchored at y = 0."""
    n = arr.size
    k = np.fft.fftfreq(n, d=L / (2 * np.pi * n))
    hat = np.fft.fft(arr)
    hat0 = hat[0]
    with np.errstate(divide="ignore", invalid="ignore"):
        anti = np.where(k != 0, hat / (1j * k), 0.0)
    out = np.fft.ifft(anti)
    out = out.real if np.isrealobj(arr) else out
    return out - out[0] + 0.0 * hat0.real


def spectral_shift(arr: np.ndarray, delta: float, L: float) -> np.ndarray:
    """Evaluate the trigonometric interpolant at y + delta."""
    n = arr.size
    k = np.fft.fftfreq(n, d=L / (2 * np.pi * n))
    out = np.fft.ifft(np.fft.fft(arr) * np.exp(1j * k * delta))
    return out.real if np.isrealobj(arr) else out


# ---------------------------------------------------------------------------
# Burgers functions
# ---------------------------------------------------------------------------

@dataclass
class BurgersFunction:
    """Characteristic-velocity function F(z) with derivative and tag."""

    f: object
    df: object
    tag: str

    def __call__(self, z):
        return self.f(z)


def hex_burgers() -> BurgersFunction:
    return BurgersFunction(lambda z: z / (1.0 - z),
                           lambda z: 1.0 / (1.0 - z) ** 2, "Hex")


def ff_burgers(u: float) -> BurgersFunction:
    cu, su = math.cos(u), math.sin(u)

    def den(z):
        return (cu - z * su) * (z * cu + su)

    def dden(z):
        return cu * cu - su * su - 2.0 * z * su * cu

    return BurgersFunction(lambda z: z / den(z),
                           lambda z: (den(z) - z * dden(z)) / den(z) ** 2,
                           f"FF(u={u})")


def _curve_partials(curve: SpectralCurve, z, w):
    pz = sum(c * i * z ** (i - 1) * w ** j for (i, j), c in curve.coeffs if i)
    pw = sum(c * j * z ** i * w ** (j - 1) for (i, j), c in curve.coeffs if j)
    return pz, pw


def burgers_from_curve(curve: SpectralCurve, probe: tuple[complex, complex]) -> BurgersFunction:
    """F(z) = (z / w) dP/dz / dP/dw on the branch through the probe point.

    The branch of w(z) is selected per evaluation as the root of P(z, .)
    nearest to the probe value; evaluation is meant near the probe (track
    continuity by re-probing for excursions).
    """
    z0, w0 = complex(probe[0]), complex(probe[1])
    d = curve.as_dict()
    j_all = sorted({j for (_, j) in d})
    j_min = j_all[0]

    def branch_w(z):
        coeffs = {}
        for (i, j), c in d.items():
            coeffs[j - j_min] = coeffs.get(j - j_min, 0.0) + c * z ** i
        deg = max(coeffs)
        poly = np.array([coeffs.get(k, 0.0) for k in range(deg, -1, -1)],
                        dtype=complex)
        roots = np.roots(poly)
        if roots.size == 0:
            raise SingularBranch("fiber polynomial has no roots")
        dist = np.abs(roots - w0)
        order = np.argsort(dist)
        if roots.size > 1 and dist[order[1]] - dist[order[0]] < 1e-9 * (1 + dist[order[0]]):
            raise BranchAmbiguous(f"two branches equally near the probe at z={z}")
        return roots[order[0]]

    def f(z):
        arr = np.asarray(z, dtype=complex)
        flat = arr.reshape(-1)
        out = np.empty(flat.shape, dtype=complex)
        for idx, zz in enumerate(flat):
            w = branch_w(zz)
            pz, pw = _curve_partials(curve, zz, w)
            if abs(pw) < 1e-13:
                raise SingularBranch(f"dP/dw vanished at z={zz}")
            out[idx] = (zz / w) * pz / pw
        return out.reshape(arr.shape) if arr.ndim else complex(out[0])

    def df(z, h=1e-6):
        return (f(z + h) - f(z - h)) / (2 * h)

    return BurgersFunction(f, df, "FromCurve")


# ---------------------------------------------------------------------------
# Hamiltonian densities
# ---------------------------------------------------------------------------

@dataclass
class HamiltonianDensity:
    """tau(p, xi) with first and second partials, vectorized over arrays."""

    tag: str
    nu_star: object
    value: object
    d2: object
    sigma: SurfaceTension | None = None
    burgers: BurgersFunction | None = None

    def d1(self, p, t):
        return self.nu_star(p, t)

    def second_partials(self, p, t):
        """(d11, d12, d22) via the Legendre relations at the maximizer."""
        nu = self.nu_star(p, t)
        h11, h12, h22 = self.sigma.hess(nu, t)
        det = h11 * h22 - h12 * h12
        return 1.0 / h11, -h12 / h11, -det / h11


def hex_density() -> HamiltonianDensity:
    from .tension import hex_tension

    def nu_star(p, t):
        p = np.asarray(p, dtype=float)
        t = np.asarray(t, dtype=float)
        ep = np.exp(p)
        return np.arctan2(ep * np.sin(np.pi * t), 1.0 - ep * np.cos(np.pi * t)) / np.pi

    def value(p, t):
        s = nu_star(p, t)
        return p * s - sigma_hex(s, t)

    def d2(p, t):
        l = np.asarray(p, dtype=float) + 1j * np.pi * np.asarray(t, dtype=float)
        return -np.log(np.abs(1.0 - np.exp(l)))

    return HamiltonianDensity("Hex", nu_star, value, d2,
                              sigma=hex_tension(), burgers=hex_burgers())


def ff_density(u: float) -> HamiltonianDensity:
    from .tension import ff_tension

    values = _FFValueCache(u)
    c2u, s2u = math.cos(2 * u), math.sin(2 * u)

    def nu_star(p, t):
        p = np.asarray(p, dtype=float)
        t = np.asarray(t, dtype=float)
        return np.arctan2(np.sin(np.pi * t),
                          c2u * np.cos(np.pi * t) - s2u * np.sinh(p)) / np.pi

    def value(p, t):
        p_arr = np.asarray(p, dtype=float)
        t_arr = np.asarray(t, dtype=float)
        s = nu_star(p_arr, t_arr)
        if p_arr.ndim == 0:
            return float(p_arr) * float(s) - values(float(s), float(t_arr))
        out = np.empty(np.broadcast(p_arr, t_arr).shape)
        pb, tb, sb = np.broadcast_arrays(p_arr, t_arr, s)
        for idx in np.ndindex(out.shape):
            out[idx] = pb[idx] * sb[idx] - values(float(sb[idx]), float(tb[idx]))
        return out

    def d2(p, t):
        s = nu_star(p, t)
        return -grad_sigma_ff(s, t, u)[1]

    return HamiltonianDensity(f"FF(u={u})", nu_star, value, d2,
                              sigma=ff_tension(u), burgers=ff_burgers(u))


def density_from_tension(sigma: SurfaceTension, tag: str | None = None) -> HamiltonianDensity:
    """Generic density via pointwise partial Legendre transforms."""

    def scalarized(fn):
        def wrapped(p, t):
            p_arr = np.asarray(p, dtype=float)
            t_arr = np.asarray(t, dtype=float)
            if p_arr.ndim == 0:
                return fn(float(p_arr), float(t_arr))
            out = np.empty(np.broadcast(p_arr, t_arr).shape)
            pb, tb = np.broadcast_arrays(p_arr, t_arr)
            for idx in np.ndindex(out.shape):
                out[idx] = fn(float(pb[idx]), float(tb[idx]))
            return out
        return wrapped

    return HamiltonianDensity(
        tag or f"Legendre[{sigma.variant}]",
        scalarized(lambda p, t: partial_legendre(sigma, p, t).nu_star),
        scalarized(lambda p, t: partial_legendre(sigma, p, t).tau),
        scalarized(lambda p, t: partial_legendre(sigma, p, t).d2),
        sigma=sigma)


def hamiltonian(state: FlowState, dens: HamiltonianDensity, V: float = 0.0) -> float:
    """Periodic-trapezoid value of int tau(p + V, dh/dy) dy."""
    if dens.sigma is not None and not dens.sigma.feasible(
            dens.nu_star(state.p + V, state.t), state.t, margin=0.0):
        raise DomainBoundary("state leaves the tension domain")
    vals = dens.value(state.p + V, state.t)
    return float(np.mean(vals)) * state.L


# ---------------------------------------------------------------------------
# conserved quantities
# ---------------------------------------------------------------------------

def conserved_In(state: FlowState, n: int) -> complex:
    """I_n = int l(y)^n dy by the periodic trapezoid rule."""
    if n < 0:
        raise OutOfRange("moment order must be nonnegative")
    return complex(np.mean(state.l ** n) * state.L)


def conserved_In_bar(state: FlowState, n: int) -> complex:
    return complex(np.mean(np.conj(state.l) ** n) * state.L)


# ---------------------------------------------------------------------------
# shock diagnostics
# ---------------------------------------------------------------------------

def shock_indicator(state: FlowState, F: BurgersFunction, x: float) -> float:
    """min over y of |1 - x dG/dy| with G = F(e^l); shocks at 0."""
    g = F(np.exp(state.l))
    gprime = spectral_dy(g, state.L)
    return float(np.min(np.abs(1.0 - x * gprime)))


# ---------------------------------------------------------------------------
# method-of-lines Hamiltonian evolution
# ---------------------------------------------------------------------------

@dataclass
class Trajectory:
    xs: np.ndarray
    states: list
    heights: list  # h(y) samples per x, anchored h(0, 0) = 0

    def state_at(self, k: int) -> FlowState:
        return self.states[k]


def _mode_filter(ny: int, keep: int) -> np.ndarray:
    k = np.abs(np.fft.fftfreq(ny, d=1.0 / ny))
    return (k <= keep).astype(float)


def hamilton_evolve(state: FlowState, dens: HamiltonianDensity,
                    x_span: tuple[float, float], steps: int,
                    keep_every: int = 1, filter_modes: int | None = None) -> Trajectory:
    """Classical 4th-order method-of-lines integration of the flow.

    Evolves (p, t, h) with spectral periodic y-derivatives; h rides along
    so cross-sections integrate exactly into height fields.  The x
    evolution of the elliptic limit-shape system amplifies the k-th mode
    like exp(c k x), so roundoff in high modes must be kept out: after
    every step the fields are projected onto |k| <= filter_modes (default
    ny/4), which is far above the mode content of analytic initial data
    on any pre-shock horizon.  Raises ShockDetected once the
    characteristic-map indicator of the initial data drops below the
    shock threshold, StepFailure on blow-up.
    """
    x0, x1 = x_span
    if steps < 1:
        raise OutOfRange("need at least one step")
    dx = (x1 - x0) / steps
    L = state.L
    ny = state.ny
    if filter_modes is None:
        filter_modes = max(2, ny // 4)
    mask = _mode_filter(ny, filter_modes)

    def smooth(arr):
        return np.fft.ifft(np.fft.fft(arr) * mask).real

    p = smooth(state.p.copy())
    t = smooth(state.t.copy())
    h = spectral_antideriv(t, L) + np.mean(t) * state.ys

    def rhs(p, t):
        d1 = np.asarray(dens.d1(p, t))
        d2 = np.asarray(dens.d2(p, t))
        if not (np.all(np.isfinite(d1)) and np.all(np.isfinite(d2))):
            raise StepFailure("density partials blew up")
        if dens.sigma is not None and not dens.sigma.feasible(d1, t, margin=0.0):
            raise StepFailure("state left the tension domain")
        return spectral_dy(d2, L), spectral_dy(d1, L), d1

    F = dens.burgers
    gprime0 = None
    if F is not None:
        gprime0 = spectral_dy(F(np.exp(state.l)), L)

    xs = [x0]
    states = [FlowState(L, p.copy(), t.copy())]
    heights = [h.copy()]
    for k in range(steps):
        x = x0 + k * dx
        if gprime0 is not None:
            ind = float(np.min(np.abs(1.0 - (x + dx - x0) * gprime0)))
            if ind < SHOCK_DELTA:
                raise ShockDetected("characteristic map about to fold",
                                    x=x, diagnostics={"indicator": ind})
        k1 = rhs(p, t)
        k2 = rhs(p + 0.5 * dx * k1[0], t + 0.5 * dx * k1[1])
        k3 = rhs(p + 0.5 * dx * k2[0], t + 0.5 * dx * k2[1])
        k4 = rhs(p + dx * k3[0], t + dx * k3[1])
        p = smooth(p + dx / 6.0 * (k1[0] + 2 * k2[0] + 2 * k3[0] + k4[0]))
        t = smooth(t + dx / 6.0 * (k1[1] + 2 * k2[1] + 2 * k3[1] + k4[1]))
        h = h + dx / 6.0 * (k1[2] + 2 * k2[2] + 2 * k3[2] + k4[2])
        if not np.all(np.isfinite(p)) or not np.all(np.isfinite(t)):
            raise StepFailure(f"non-finite state at x={x + dx}")
        if (k + 1) % keep_every == 0 or k == steps - 1:
            xs.append(x + dx)
            states.append(FlowState(L, p.copy(), t.copy()))
            heights.append(h.copy())
    return Trajectory(np.array(xs), states, heights)


# ---------------------------------------------------------------------------
# complex-characteristic Burgers solver
# ---------------------------------------------------------------------------

class _TrigInterp:
    """Entire trigonometric interpolant of periodic complex samples.

    Modes below the relative threshold are dropped: their coefficients
    carry only roundoff, which the factor exp(2 pi |k| Im zeta) of the
    analytic continuation would amplify catastrophically off the axis.
    """

    def __init__(self, samples: np.ndarray, L: float, rel_tol: float = 1e-13):
        n = samples.size
        self.L = L
        c = np.fft.fft(samples) / n
        k = np.fft.fftfreq(n, d=1.0 / n) * (2 * np.pi / L)
        keep = np.abs(c) > rel_tol * max(float(np.max(np.abs(c))), 1e-300)
        self.c = c[keep]
        self.k = k[keep]

    def __call__(self, zeta):
        zeta = np.asarray(zeta, dtype=complex)
        phase = np.exp(1j * np.outer(zeta.ravel(), self.k))
        out = phase @ self.c
        return out.reshape(zeta.shape)

    def deriv(self, zeta):
        zeta = np.asarray(zeta, dtype=complex)
        phase = np.exp(1j * np.outer(zeta.ravel(), self.k)) * (1j * self.k)
        out = phase @ self.c
        return out.reshape(zeta.shape)


def burgers_evolve(state: FlowState, F: BurgersFunction, x: float,
                   sign: int = +1, substeps: int | None = None,
                   newton_tol: float = 1e-13) -> FlowState:
    """Transport l along straight characteristics to axis position x.

    The value at (x, y) is l0(zeta) with the complex foot point solving
    zeta = y + sign * x F(e^(l0(zeta))).  The foot-point field is tracked
    along its branch by integrating d zeta / dx = F / (1 - x dG/dzeta)
    (G = F o exp o l0) with classical 4th-order steps, then polished by
    Newton to the requested tolerance.  The default sign is the one under
    which the reconstructed height satisfies the elliptic limit-shape
    equation.  Raises ShockDetected when the characteristic Jacobian
    degenerates or the foot points stop increasing across the period.
    """
    interp = _TrigInterp(state.l, state.L)
    ys = state.ys.astype(complex)
    zeta = ys.copy()
    if substeps is None:
        substeps = max(16, int(math.ceil(abs(x) / 0.005)))
    hy = state.L / state.ny
    dx = x / substeps

    speed_cap = 1e3 * state.L

    def gprime(z):
        lz = interp(z)
        return F.df(np.exp(lz)) * np.exp(lz) * interp.deriv(z)

    def velocity(z, xk):
        jac = 1.0 - sign * xk * gprime(z)
        if np.min(np.abs(jac)) < SHOCK_DELTA:
            raise ShockDetected("characteristic Jacobian degenerated",
                                x=xk, diagnostics={"min_jac": float(np.min(np.abs(jac)))})
        fz = F(np.exp(interp(z)))
        if np.max(np.abs(fz)) > speed_cap:
            raise StepFailure("characteristic passed near a pole of the velocity")
        return sign * fz / jac

    for k in range(substeps):
        xk = k * dx
        k1 = velocity(zeta, xk)
        k2 = velocity(zeta + 0.5 * dx * k1, xk + 0.5 * dx)
        k3 = velocity(zeta + 0.5 * dx * k2, xk + 0.5 * dx)
        k4 = velocity(zeta + dx * k3, xk + dx)
        zeta = zeta + dx / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4)
        if not np.all(np.isfinite(zeta)):
            raise StepFailure(f"foot points blew up at x={xk + dx}")

    # Newton polish on g(zeta) = zeta - sign*x*F(e^(l0(zeta))) - y
    for _ in range(30):
        g = zeta - sign * x * F(np.exp(interp(zeta))) - ys
        if np.max(np.abs(g)) < newton_tol:
            break
        jac = 1.0 - sign * x * gprime(zeta)
        if np.min(np.abs(jac)) < SHOCK_DELTA:
            raise ShockDetected("characteristic Jacobian degenerated", x=x)
        zeta = zeta - g / jac
    else:
        raise StepFailure(f"characteristic Newton failed to polish at x={x}")
    incr = np.diff(np.concatenate([zeta.real, [zeta.real[0] + state.L]]))
    if np.min(incr) < SHOCK_DELTA * hy:
        raise ShockDetected("characteristic foot points stopped increasing",
                            x=x, diagnostics={"min_increment": float(np.min(incr))})
    return FlowState.from_l(state.L, interp(zeta))


def burgers_trajectory(state: FlowState, F: BurgersFunction, xs,
                       sign: int = +1) -> Trajectory:
    """Characteristic solution sampled on a list of axis positions."""
    xs = np.asarray(xs, dtype=float)
    states = [state]
    dens_h = spectral_antideriv(state.t, state.L) + np.mean(state.t) * state.ys
    heights = [dens_h]
    for x in xs[1:]:
        st = burgers_evolve(state, F, float(x), sign=sign)
        states.append(st)
        heights.append(None)
    return Trajectory(xs, states, heights)


# ---------------------------------------------------------------------------
# Poisson commutation certificate
# ---------------------------------------------------------------------------

def _as_density(obj) -> HamiltonianDensity:
    if isinstance(obj, HamiltonianDensity):
        return obj
    if isinstance(obj, SurfaceTension):
        return density_from_tension(obj)
    raise OutOfRange("expected a SurfaceTension or HamiltonianDensity")


def poisson_bracket_residual(sig_u, sig_v, p_grid, xi_grid,
                             fd_step: float = 2e-3) -> float:
    """sup |d2 A - d1 B| over the (p, xi) grid by five-point differences.

    A = d11 tau_u d2 tau_v - d11 tau_v d2 tau_u and B the mixed-partial
    analogue; the sup vanishing is the closing step of the commuting-
    Hamiltonian argument.
    """
    du = _as_density(sig_u)
    dv = _as_density(sig_v)

    def a_fn(p, t):
        d11u, _, _ = du.second_partials(p, t)
        d11v, _, _ = dv.second_partials(p, t)
        return d11u * dv.d2(p, t) - d11v * du.d2(p, t)

    def b_fn(p, t):
        _, d12u, _ = du.second_partials(p, t)
        _, d12v, _ = dv.second_partials(p, t)
        return d12u * dv.d2(p, t) - d12v * du.d2(p, t)

    pg = np.asarray(p_grid, dtype=float)
    xg = np.asarray(xi_grid, dtype=float)
    pm, xm = np.meshgrid(pg, xg, indexing="ij")
    h = fd_step

    def d5(fn, wrt):
        if wrt == "xi":
            vals = [fn(pm, xm + k * h) for k in (-2, -1, 1, 2)]
        else:
            vals = [fn(pm + k * h, xm) for k in (-2, -1, 1, 2)]
        return (vals[0] - 8 * vals[1] + 8 * vals[2] - vals[3]) / (12 * h)

    resid = d5(a_fn, "xi") - d5(b_fn, "p")
    return float(np.max(np.abs(resid)))


def factored_poisson_residual(sig_u, sig_v, p_grid, xi_grid) -> float:
    """sup |d11 tau_u d11 tau_v (det Hess_v - det Hess_u)| on the grid."""
    du = _as_density(sig_u)
    dv = _as_density(sig_v)
    pg, xg = np.meshgrid(np.asarray(p_grid, float), np.asarray(xi_grid, float),
                         indexing="ij")
    d11u, _, d22u = du.second_partials(pg, xg)
    d11v, _, d22v = dv.second_partials(pg, xg)
    det_u = -d22u / d11u
    det_v = -d22v / d11v
    return float(np.max(np.abs(d11u * d11v * (det_v - det_u))))


# ---------------------------------------------------------------------------
# closed-form Hamiltonian densities in the holomorphic variable
# ---------------------------------------------------------------------------

def hamiltonian_hex(l, lbar=None):
    """(1/2 pi i)(Li2(e^l) - Li2(e^lbar)); lbar defaults to conj(l)."""
    l = complex(l)
    lb = complex(np.conj(l)) if lbar is None else complex(lbar)
    return (dilog(cmath.exp(l)) - dilog(cmath.exp(lb))) / TWO_PI_I


def hamiltonian_ff(l, u: float, lbar=None):
    """Four-dilogarithm free-fermion density; lbar defaults to conj(l)."""
    if not 0.0 < u < np.pi / 2:
        raise OutOfRange("spectral parameter u must lie in (0, pi/2)")
    l = complex(l)
    lb = complex(np.conj(l)) if lbar is None else complex(lbar)
    tu = math.tan(u)
    cu = 1.0 / tu

    def hol(w):
        return dilog(cmath.exp(w) * tu) - dilog(-cmath.exp(w) * cu)

    return (hol(l) - hol(lb)) / TWO_PI_I


def hex_phi(l):
    """Phi(l) = d2 tau + i pi d1 tau = -Log(1 - e^l) for the hexagonal case."""
    return -np.log(1.0 - np.exp(np.asarray(l, dtype=complex)))


def ff_phi(l, u: float):
    """The free-fermion Phi, normalized so Im Phi / pi is the slope."""
    z = np.exp(np.asarray(l, dtype=complex))
    tu = math.tan(u)
    return -np.log(1.0 - z * tu) + np.log(1.0 + z / tu) + math.log(tu)
