"""Discrete variational solver for limit shapes on a cylinder.

The height field lives on an (nx, ny) node grid over [0, T] x [0, L) with
the y direction periodic; a field may carry a y-monodromy kappa, so the
wrapped difference is h(x, 0) + kappa - h(x, L - hy).  The action is the
midpoint-cell discretization of the convex integrand

    sigma(dh/dx, dh/dy) + V dh/dx,

which keeps the discrete problem convex in the node values.  Neumann data
(tangential derivatives at both ends) pins the shapes of the two end
columns; their relative offset stays a degree of freedom, and the global
constant is fixed by h(0, 0) = 0.

The minimizer is found by quasi-Newton descent over the free node values.
Every accepted iterate is feasible: trial points whose cell slopes leave
the inset slope box (or the tension's own domain) are rejected by the
line search, which is what makes the gradient blow-up of the tension at
the domain boundary act as a natural barrier.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import Inconsistent, NonConvergence, SlopeOutOfDomain
from .tension import SurfaceTension


@dataclass(frozen=True)
class CylinderGrid:
    """Node grid on the cylinder [0, T] x R / LZ."""

    T: float
    L: float
    nx: int
    ny: int

    def __post_init__(self):
        if self.T <= 0 or self.L <= 0:
            raise Inconsistent("cylinder dimensions must be positive")
        if self.nx < 2 or self.ny < 2:
            raise Inconsistent("need at least two nodes per direction")

    @property
    def hx(self) -> float:
        return self.T / (self.nx - 1)

    @property
    def hy(self) -> float:
        return self.L / self.ny

    def xs(self) -> np.ndarray:
        return np.linspace(0.0, self.T, self.nx)

    def ys(self) -> np.ndarray:
        return np.arange(self.ny) * self.hy


@dataclass
class HeightField:
    """Node values plus slope box and y-monodromy."""

    grid: CylinderGrid
    values: np.ndarray
    lo: float = -0.5
    hi: float = 0.5
    kappa: float = 0.0

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        if self.values.shape != (self.grid.nx, self.grid.ny):
            raise Inconsistent(f"values must have shape {(self.grid.nx, self.grid.ny)}")

    def wrapped(self) -> np.ndarray:
        """Values extended by one periodic row: h(x, L) = h(x, 0) + kappa."""
        return np.concatenate([self.values, self.values[:, :1] + self.kappa], axis=1)

    def cell_slopes(self) -> tuple[np.ndarray, np.ndarray]:
        """Average midpoint slopes on the (nx-1, ny) cells."""
        h = self.wrapped()
        g = self.grid
        sx = (h[1:, :-1] + h[1:, 1:] - h[:-1, :-1] - h[:-1, 1:]) / (2 * g.hx)
        sy = (h[:-1, 1:] + h[1:, 1:] - h[:-1, :-1] - h[1:, :-1]) / (2 * g.hy)
        return sx, sy

    def edge_slopes(self):
        """Forward differences on the four edges of each (nx-1, ny) cell.

        Returns (bottom-x, top-x, left-y, right-y) difference fields; the
        slope box constrains them directly and no checkerboard mode can
        hide from them.
        """
        h = self.wrapped()
        g = self.grid
        dxb = (h[1:, :-1] - h[:-1, :-1]) / g.hx
        dxt = (h[1:, 1:] - h[:-1, 1:]) / g.hx
        dyl = (h[:-1, 1:] - h[:-1, :-1]) / g.hy
        dyr = (h[1:, 1:] - h[1:, :-1]) / g.hy
        return dxb, dxt, dyl, dyr

    def node_slopes(self) -> tuple[np.ndarray, np.ndarray]:
        """Centered slopes on interior-x nodes (nx-2, ny)."""
        h = self.values
        g = self.grid
        sx = (h[2:, :] - h[:-2, :]) / (2 * g.hx)
        up = np.roll(h, -1, axis=1).copy()
        dn = np.roll(h, 1, axis=1).copy()
        up[:, -1] += self.kappa
        dn[:, 0] -= self.kappa
        sy = (up - dn) / (2 * g.hy)
        return sx, sy[1:-1, :]


@dataclass
class BoundaryData:
    """Periodic tangential-derivative profiles at the two cylinder ends."""

    t_left: np.ndarray
    t_right: np.ndarray

    def __post_init__(self):
        self.t_left = np.asarray(self.t_left, dtype=float)
        self.t_right = np.asarray(self.t_right, dtype=float)
        if self.t_left.shape != self.t_right.shape or self.t_left.ndim != 1:
            raise Inconsistent("boundary profiles must be equal-length vectors")

    def monodromy(self, hy: float) -> float:
        k1 = float(np.sum(self.t_left)) * hy
        k2 = float(np.sum(self.t_right)) * hy
        if abs(k1 - k2) > 1e-9 * max(1.0, abs(k1)):
            raise Inconsistent(
                f"boundary profiles carry different monodromies ({k1} vs {k2})")
        return k1

    def profiles(self, hy: float) -> tuple[np.ndarray, np.ndarray]:
        """Cumulative height profiles of the two end columns (anchored at 0)."""
        x1 = np.concatenate([[0.0], np.cumsum(self.t_left[:-1])]) * hy
        x2 = np.concatenate([[0.0], np.cumsum(self.t_right[:-1])]) * hy
        return x1, x2


def prolong(hf: HeightField, grid: CylinderGrid) -> np.ndarray:
    """Interpolate a field onto a finer grid (linear in x, periodic in y)."""
    src = hf.grid
    h = hf.wrapped()   # (nx, ny + 1) with the monodromy applied
    xs_src = src.xs()
    ys_src = np.arange(src.ny + 1) * src.hy
    out = np.empty((grid.nx, grid.ny))
    ramp = hf.kappa / src.L
    for j, y in enumerate(np.arange(grid.ny) * grid.hy):
        yy = y % src.L
        col = np.array([np.interp(yy, ys_src, h[i, :] - ramp * ys_src)
                        for i in range(src.nx)]) + ramp * yy
        out[:, j] = np.interp(np.linspace(0, src.T, grid.nx), xs_src, col)
    return out


def resample_profile(ys: np.ndarray, vals: np.ndarray, ny: int, L: float) -> np.ndarray:
    """Periodic linear interpolation of samples (y, value) onto the grid."""
    ys = np.asarray(ys, dtype=float)
    vals = np.asarray(vals, dtype=float)
    order = np.argsort(ys)
    ys, vals = ys[order], vals[order]
    ys_ext = np.concatenate([ys, [ys[0] + L]])
    vals_ext = np.concatenate([vals, [vals[0]]])
    target = np.arange(ny) * (L / ny)
    shifted = np.mod(target - ys[0], L) + ys[0]
    return np.interp(shifted, ys_ext, vals_ext)


_CELL_COMBOS = ((0, 0), (1, 1), (0, 1), (1, 0))   # (x-edge, y-edge) pairings


def _feasible_slopes(slope_fields, sigma: SurfaceTension, lo, hi) -> bool:
    for s in slope_fields:
        if np.min(s) <= lo or np.max(s) >= hi:
            return False
    dxb, dxt, dyl, dyr = slope_fields
    xs = (dxb, dxt)
    ys = (dyl, dyr)
    return all(sigma.feasible(xs[a], ys[b], margin=0.0) for a, b in _CELL_COMBOS)


def _raw_action(hf: HeightField, sigma: SurfaceTension, V: float) -> float:
    dxb, dxt, dyl, dyr = hf.edge_slopes()
    g = hf.grid
    quarter = 0.25 * g.hx * g.hy
    xs = (dxb, dxt)
    ys = (dyl, dyr)
    total = 0.0
    for a, b in _CELL_COMBOS:
        total += float(np.sum(sigma.value(xs[a], ys[b]) + V * xs[a]))
    return total * quarter


def action(hf: HeightField, sigma: SurfaceTension, V: float = 0.0,
           eps: float = 1e-6) -> float:
    """Symmetrized triangle-split discretization of the action.

    Each cell is split along both diagonals and the two splits averaged:
    four constant-gradient triangle terms of weight hx hy / 4, built from
    the four forward edge differences.  Convex in the node values, exact
    on affine fields, and symmetric under both grid reflections.
    """
    slopes = hf.edge_slopes()
    lo, hi = sigma.inset_box(eps)
    if not _feasible_slopes(slopes, sigma, lo - eps / 2, hi + eps / 2):
        raise SlopeOutOfDomain("cell edge slopes leave the admissible box")
    return _raw_action(hf, sigma, V)


def action_gradient(hf: HeightField, sigma: SurfaceTension, V: float = 0.0) -> np.ndarray:
    """d action / d h at every node (monodromy held fixed)."""
    dxb, dxt, dyl, dyr = hf.edge_slopes()
    g = hf.grid
    wx = g.hy / 4.0   # (hx hy / 4) / hx
    wy = g.hx / 4.0
    xs = (dxb, dxt)
    ys = (dyl, dyr)
    gx = [np.zeros_like(dxb), np.zeros_like(dxb)]
    gy = [np.zeros_like(dxb), np.zeros_like(dxb)]
    for a, b in _CELL_COMBOS:
        ga, gb = sigma.grad(xs[a], ys[b])
        gx[a] = gx[a] + np.asarray(ga) + V
        gy[b] = gy[b] + np.asarray(gb)
    out = np.zeros((g.nx, g.ny))

    def add(di, dj, contrib):
        block = out[di:g.nx - 1 + di, :]
        if dj == 0:
            block += contrib
        else:
            block[:, 1:] += contrib[:, :-1]
            block[:, 0] += contrib[:, -1]

    add(1, 0, gx[0] * wx)    # bottom-x: h[i+1, j] - h[i, j]
    add(0, 0, -gx[0] * wx)
    add(1, 1, gx[1] * wx)    # top-x: h[i+1, j+1] - h[i, j+1]
    add(0, 1, -gx[1] * wx)
    add(0, 1, gy[0] * wy)    # left-y: h[i, j+1] - h[i, j]
    add(0, 0, -gy[0] * wy)
    add(1, 1, gy[1] * wy)    # right-y: h[i+1, j+1] - h[i+1, j]
    add(1, 0, -gy[1] * wy)
    return out


def el_residual(hf: HeightField, sigma: SurfaceTension) -> np.ndarray:
    """d11 s h_xx + 2 d12 s h_xy + d22 s h_yy on interior-x nodes.

    The cross term carries the factor two of the expanded divergence form
    d/dx(d1 sigma) + d/dy(d2 sigma).
    """
    g = hf.grid
    h = hf.values
    up = np.roll(h, -1, axis=1).copy()
    dn = np.roll(h, 1, axis=1).copy()
    up[:, -1] += hf.kappa
    dn[:, 0] -= hf.kappa
    hxx = (h[2:, :] - 2 * h[1:-1, :] + h[:-2, :]) / g.hx ** 2
    hyy = (up[1:-1, :] - 2 * h[1:-1, :] + dn[1:-1, :]) / g.hy ** 2
    hxy = ((up[2:, :] - dn[2:, :]) - (up[:-2, :] - dn[:-2, :])) / (4 * g.hx * g.hy)
    sx, sy = hf.node_slopes()
    if not sigma.feasible(sx, sy, margin=0.0):
        raise SlopeOutOfDomain("interior slopes leave the tension domain")
    h11, h12, h22 = sigma.hess(sx, sy)
    return h11 * hxx + 2.0 * h12 * hxy + h22 * hyy


def hex_el_residual(hf: HeightField) -> np.ndarray:
    """The hexagonal elliptic form with ratio-of-sines coefficients."""
    g = hf.grid
    h = hf.values
    up = np.roll(h, -1, axis=1).copy()
    dn = np.roll(h, 1, axis=1).copy()
    up[:, -1] += hf.kappa
    dn[:, 0] -= hf.kappa
    hxx = (h[2:, :] - 2 * h[1:-1, :] + h[:-2, :]) / g.hx ** 2
    hyy = (up[1:-1, :] - 2 * h[1:-1, :] + dn[1:-1, :]) / g.hy ** 2
    hxy = ((up[2:, :] - dn[2:, :]) - (up[:-2, :] - dn[:-2, :])) / (4 * g.hx * g.hy)
    sx, sy = hf.node_slopes()
    ss, st = np.sin(np.pi * sx), np.sin(np.pi * sy)
    return hxx * st / ss - 2.0 * hxy * np.cos(np.pi * (sx + sy)) + hyy * ss / st


def ff_el_residual(hf: HeightField, u: float) -> np.ndarray:
    """Free-fermion elliptic form; at u = pi/2 it coincides with the
    hexagonal form."""
    g = hf.grid
    h = hf.values
    up = np.roll(h, -1, axis=1).copy()
    dn = np.roll(h, 1, axis=1).copy()
    up[:, -1] += hf.kappa
    dn[:, 0] -= hf.kappa
    hxx = (h[2:, :] - 2 * h[1:-1, :] + h[:-2, :]) / g.hx ** 2
    hyy = (up[1:-1, :] - 2 * h[1:-1, :] + dn[1:-1, :]) / g.hy ** 2
    hxy = ((up[2:, :] - dn[2:, :]) - (up[:-2, :] - dn[:-2, :])) / (4 * g.hx * g.hy)
    sx, sy = hf.node_slopes()
    if np.any(sx <= 0) or np.any(sx >= 1) or np.any(sy <= 0) or np.any(sy >= 1):
        raise SlopeOutOfDomain("free-fermion form needs slopes in (0, 1)")
    ss, st = np.sin(np.pi * sx), np.sin(np.pi * sy)
    mid = np.cos(np.pi * sx) * np.cos(np.pi * sy) \
        + math.cos(2 * u) * np.sin(np.pi * sx) * np.sin(np.pi * sy)
    return hxx * st / ss - 2.0 * hxy * mid + hyy * ss / st


def facet_mask(hf: HeightField, eps: float = 1e-6, tol: float = 1e-9) -> np.ndarray:
    """Cells whose slopes sit on the inset box after convergence."""
    lo, hi = hf.lo + eps, hf.hi - eps
    fields = hf.edge_slopes()
    on = np.zeros(fields[0].shape, dtype=bool)
    for s in fields:
        on |= (np.abs(s - lo) <= tol) | (np.abs(s - hi) <= tol)
    return on


@dataclass
class SolveInfo:
    iterations: int
    grad_norm: float
    actions: list = field(default_factory=list)
    converged: bool = True


def _assemble(grid, x1, x2, interior, c_t):
    h = np.empty((grid.nx, grid.ny))
    h[0, :] = x1
    h[-1, :] = x2 + c_t
    h[1:-1, :] = interior
    return h


def minimize_action(grid: CylinderGrid, sigma: SurfaceTension,
                    boundary: BoundaryData, V: float = 0.0,
                    tol: float = 1e-9, max_iter: int = 20000,
                    eps: float = 1e-6, start: np.ndarray | None = None,
                    lo: float | None = None, hi: float | None = None):
    """Constrained minimizer of the discrete action.

    Returns (HeightField, SolveInfo).  Boundary tangential derivatives are
    matched exactly by construction; the interior nodes and the offset of
    the right end column are the free variables.  Raises NonConvergence
    (carrying the best iterate) if the gradient criterion is not met.
    """
    if boundary.t_left.size != grid.ny:
        raise Inconsistent("boundary profiles must match the grid")
    lo = sigma.lo if lo is None else lo
    hi = sigma.hi if hi is None else hi
    box_lo, box_hi = lo + eps, hi - eps
    kappa = boundary.monodromy(grid.hy)
    x1, x2 = boundary.profiles(grid.hy)

    if start is None:
        frac = np.linspace(0.0, 1.0, grid.nx)[:, None]
        s_mid = 0.5 * (box_lo + box_hi)
        guess_ct = grid.T * s_mid
        h0 = (1 - frac) * x1[None, :] + frac * (x2[None, :] + guess_ct)
    else:
        h0 = np.asarray(start, dtype=float).copy()
        if h0.shape != (grid.nx, grid.ny):
            raise Inconsistent("start field has the wrong shape")
        # project the start onto the boundary constraints
        h0 = h0 - h0[0, 0]
        h0[0, :] = x1
        h0[-1, :] = x2 + (np.mean(h0[-1, :]) - np.mean(x2))

    def split(vec):
        interior = vec[:-1].reshape(grid.nx - 2, grid.ny)
        return interior, vec[-1]

    def pack(h):
        return np.concatenate([h[1:-1, :].ravel(), [h[-1, 0] - x2[0]]])

    evals = {"n": 0}
    actions: list[float] = []

    def objective(vec):
        interior, c_t = split(vec)
        h = _assemble(grid, x1, x2, interior, c_t)
        hf = HeightField(grid, h, lo, hi, kappa)
        evals["n"] += 1
        if not _feasible_slopes(hf.edge_slopes(), sigma, box_lo, box_hi):
            return np.inf, np.zeros_like(vec)
        val = _raw_action(hf, sigma, V)
        gfull = action_gradient(hf, sigma, V)
        gvec = np.concatenate([gfull[1:-1, :].ravel(), [float(np.sum(gfull[-1, :]))]])
        return val, gvec

    v0 = pack(h0)
    f0, g0 = objective(v0)
    if not np.isfinite(f0):
        raise SlopeOutOfDomain("starting field is infeasible")

    # stage 1: monotone Barzilai-Borwein descent; backtracking rejects any
    # trial whose slopes leave the box, so accepted iterates stay feasible
    v, f, gvec = v0, f0, g0
    alpha = 1.0 / max(float(np.max(np.abs(g0))), 1.0)
    n_iter = 0
    bb_budget = min(max_iter, 300)
    for n_iter in range(1, bb_budget + 1):
        gnorm = float(np.max(np.abs(gvec)))
        if gnorm <= tol:
            break
        step = alpha
        accepted = False
        for _ in range(60):
            cand = v - step * gvec
            fc, gc = objective(cand)
            if np.isfinite(fc) and fc < f - 1e-4 * step * float(gvec @ gvec):
                accepted = True
                break
            step *= 0.5
        if not accepted:
            break   # f-decrease below roundoff; hand over to the polish
        dv = cand - v
        dg = gc - gvec
        v, f, gvec = cand, fc, gc
        actions.append(f)
        denom = float(dv @ dg)
        alpha = float(dv @ dv) / denom if denom > 0 else step * 2.0
        alpha = min(max(alpha, 1e-12), 1e12)

    # stage 2: Hessian-free Newton polish.  Once f-differences sit at the
    # roundoff floor the analytic gradient still has full precision, so we
    # drive its norm down with curvature products from gradient differences.
    def hess_vec(vc, gc, w):
        nw = float(np.linalg.norm(w))
        if nw == 0.0:
            return np.zeros_like(w)
        h = 1e-7 * max(1.0, float(np.linalg.norm(vc))) / nw
        _, gp = objective(vc + h * w)
        if not np.all(np.isfinite(gp)):
            return None
        return (gp - gc) / h

    cg_cap = min(600, v.size)
    for _ in range(40):
        gnorm = float(np.max(np.abs(gvec)))
        if gnorm <= tol:
            break
        # conjugate gradients on H d = -g
        d = np.zeros_like(v)
        r = -gvec.copy()
        p = r.copy()
        rr = float(r @ r)
        for _ in range(cg_cap):
            hp = hess_vec(v, gvec, p)
            if hp is None:
                break
            ph = float(p @ hp)
            if ph <= 0:
                break
            a_cg = rr / ph
            d += a_cg * p
            r -= a_cg * hp
            rr_new = float(r @ r)
            if rr_new <= 1e-8 * rr:
                break
            p = r + (rr_new / rr) * p
            rr = rr_new
        if not np.any(d):
            break
        scale2 = 1.0
        improved = False
        for _ in range(40):
            cand = v + scale2 * d
            fc, gc = objective(cand)
            if np.isfinite(fc) and np.max(np.abs(gc)) < gnorm:
                improved = True
                break
            scale2 *= 0.5
        if not improved:
            break
        v, f, gvec = cand, fc, gc
        actions.append(f)

    interior, c_t = split(v)
    h = _assemble(grid, x1, x2, interior, c_t)
    hf = HeightField(grid, h, lo, hi, kappa)
    gnorm = float(np.max(np.abs(gvec)))
    info = SolveInfo(iterations=n_iter, grad_norm=gnorm,
                     actions=actions, converged=gnorm <= tol)
    if not info.converged:
        raise NonConvergence("projected gradient criterion not met",
                             best=hf, diagnostics={"grad_norm": gnorm,
                                                   "iterations": n_iter})
    return hf, info
