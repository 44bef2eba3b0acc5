import math

import numpy as np
import pytest

from icelab import shapes as sh
from icelab import tension as tn
from icelab.errors import Inconsistent, NonConvergence, SlopeOutOfDomain

HEX = tn.hex_tension()


def affine_field(grid, s0, t0, lo=0.0, hi=1.0):
    xs, ys = np.meshgrid(grid.xs(), grid.ys(), indexing="ij")
    return sh.HeightField(grid, s0 * xs + t0 * ys, lo, hi, kappa=t0 * grid.L)


# ---------------------------------------------------------------------------
# action
# ---------------------------------------------------------------------------

def test_action_affine_exact():
    grid = sh.CylinderGrid(1.0, 1.0, 9, 8)
    hf = affine_field(grid, 0.3, 0.35)
    a = sh.action(hf, HEX)
    assert abs(a - grid.T * grid.L * float(tn.sigma_hex(0.3, 0.35))) < 1e-12


def test_action_constant_shift_invariance():
    grid = sh.CylinderGrid(1.0, 1.0, 9, 8)
    hf = affine_field(grid, 0.3, 0.35)
    hf2 = sh.HeightField(grid, hf.values + 3.7, 0.0, 1.0, kappa=hf.kappa)
    assert sh.action(hf2, HEX) == sh.action(hf, HEX)


def test_action_v_term_telescopes():
    grid = sh.CylinderGrid(1.0, 1.0, 9, 8)
    rng = np.random.default_rng(5)
    vals = 0.3 * np.meshgrid(grid.xs(), grid.ys(), indexing="ij")[0] \
        + 0.35 * np.meshgrid(grid.xs(), grid.ys(), indexing="ij")[1] \
        + 0.004 * rng.standard_normal((9, 8))
    hf = sh.HeightField(grid, vals, 0.0, 1.0, kappa=0.35 * grid.L)
    V = 0.7
    lhs = sh.action(hf, HEX, V) - sh.action(hf, HEX, 0.0)
    rhs = V * grid.L * (np.mean(vals[-1, :]) - np.mean(vals[0, :]))
    assert abs(lhs - rhs) < 1e-12


def test_action_gradient_matches_finite_differences():
    grid = sh.CylinderGrid(1.0, 1.0, 7, 6)
    rng = np.random.default_rng(6)
    base = affine_field(grid, 0.3, 0.35).values + 0.004 * rng.standard_normal((7, 6))
    hf = sh.HeightField(grid, base, 0.0, 1.0, kappa=0.35)
    g = sh.action_gradient(hf, HEX, 0.4)
    d = 1e-6
    for (i, j) in [(0, 0), (3, 2), (6, 5), (2, 0)]:
        hp = base.copy()
        hp[i, j] += d
        hm = base.copy()
        hm[i, j] -= d
        fd = (sh.action(sh.HeightField(grid, hp, 0, 1, kappa=0.35), HEX, 0.4)
              - sh.action(sh.HeightField(grid, hm, 0, 1, kappa=0.35), HEX, 0.4)) / (2 * d)
        assert abs(fd - g[i, j]) < 1e-9


def test_action_slope_out_of_domain():
    grid = sh.CylinderGrid(1.0, 1.0, 5, 4)
    hf = affine_field(grid, 0.9, 0.3)   # s + t > 1 leaves the hex triangle
    with pytest.raises(SlopeOutOfDomain):
        sh.action(hf, HEX)


# ---------------------------------------------------------------------------
# boundary data
# ---------------------------------------------------------------------------

def test_boundary_monodromy_mismatch():
    bd = sh.BoundaryData(np.full(8, 0.25), np.full(8, 0.3))
    with pytest.raises(Inconsistent):
        bd.monodromy(1.0 / 8)


def test_resample_profile_periodic():
    ys = np.array([0.0, 0.25, 0.5, 0.75])
    vals = np.sin(2 * np.pi * ys)
    out = sh.resample_profile(ys, vals, 8, 1.0)
    assert abs(out[0] - 0.0) < 1e-14
    assert abs(out[2] - 1.0) < 1e-14
    # linear interpolation at the midpoint between samples
    assert abs(out[1] - 0.5) < 1e-14


# ---------------------------------------------------------------------------
# minimization
# ---------------------------------------------------------------------------

def test_minimize_affine_recovery():
    t0 = 1.0 / 3.0
    grid = sh.CylinderGrid(1.0, 1.0, 17, 16)
    bd = sh.BoundaryData(np.full(16, t0), np.full(16, t0))
    hf, info = sh.minimize_action(grid, HEX, bd, tol=1e-10)
    xs, ys = np.meshgrid(grid.xs(), grid.ys(), indexing="ij")
    diff = hf.values - (xs / 3.0 + t0 * ys)
    diff -= diff[0, 0]
    assert np.max(np.abs(diff)) < 1e-8
    assert info.grad_norm <= 1e-10
    # analytic optimizer solves d1 sigma(s, t0) = 0
    pl = tn.partial_legendre(HEX, 0.0, t0)
    assert abs(pl.nu_star - 1.0 / 3.0) < 1e-9


def test_minimize_actions_monotone():
    grid = sh.CylinderGrid(1.0, 1.0, 13, 12)
    yj = grid.ys() + grid.hy / 2
    bd = sh.BoundaryData(1 / 3 + 0.05 * np.sin(2 * np.pi * yj),
                         1 / 3 - 0.05 * np.sin(2 * np.pi * yj))
    _, info = sh.minimize_action(grid, HEX, bd, tol=1e-9)
    assert all(b <= a + 1e-12 for a, b in zip(info.actions, info.actions[1:]))


def test_minimize_two_start_uniqueness():
    grid = sh.CylinderGrid(1.0, 1.0, 17, 16)
    bd = sh.BoundaryData(np.full(16, 1 / 3), np.full(16, 1 / 3))
    hf, _ = sh.minimize_action(grid, HEX, bd, tol=1e-10)
    pert = 0.01 * np.sin(2 * np.pi * np.arange(16) / 16)[None, :] \
        * np.sin(np.pi * np.linspace(0, 1, 17))[:, None]
    hf2, _ = sh.minimize_action(grid, HEX, bd, tol=1e-10, start=hf.values + pert)
    assert np.max(np.abs(hf.values - hf2.values)) < 1e-8


def test_minimize_nonconvergence_carries_best():
    grid = sh.CylinderGrid(1.0, 1.0, 17, 16)
    yj = grid.ys() + grid.hy / 2
    bd = sh.BoundaryData(1 / 3 + 0.05 * np.sin(2 * np.pi * yj),
                         1 / 3 - 0.05 * np.sin(2 * np.pi * yj))
    with pytest.raises(NonConvergence) as err:
        sh.minimize_action(grid, HEX, bd, tol=1e-30, max_iter=3)
    assert isinstance(err.value.best, sh.HeightField)
    assert "grad_norm" in err.value.diagnostics


def test_facet_mask_flags_box_slopes():
    grid = sh.CylinderGrid(1.0, 1.0, 5, 4)
    eps = 1e-6
    xs, _ = np.meshgrid(grid.xs(), grid.ys(), indexing="ij")
    hf = sh.HeightField(grid, (1.0 - eps) * xs, 0.0, 1.0, kappa=0.0)
    assert np.all(sh.facet_mask(hf, eps=eps))
    smooth = affine_field(grid, 0.4, 0.3)
    assert not np.any(sh.facet_mask(smooth))


# ---------------------------------------------------------------------------
# Euler-Lagrange residuals
# ---------------------------------------------------------------------------

def test_el_residual_affine_zero():
    grid = sh.CylinderGrid(1.0, 1.0, 9, 8)
    hf = affine_field(grid, 0.3, 0.35)
    assert np.max(np.abs(sh.el_residual(hf, HEX))) < 1e-11
    assert np.max(np.abs(sh.hex_el_residual(hf))) < 1e-11
    assert np.max(np.abs(sh.ff_el_residual(hf, 0.8))) < 1e-11


def _wavy_field(grid, amp=0.03):
    xs, ys = np.meshgrid(grid.xs(), grid.ys(), indexing="ij")
    vals = xs / 3 + ys / 3 + amp * np.sin(2 * np.pi * ys) * np.sin(np.pi * xs)
    return sh.HeightField(grid, vals, 0.0, 1.0, kappa=grid.L / 3)


def test_hex_form_matches_generic_el():
    grid = sh.CylinderGrid(1.0, 1.0, 17, 16)
    hf = _wavy_field(grid)
    sx, sy = hf.node_slopes()
    generic = sh.el_residual(hf, HEX) * np.sin(np.pi * (sx + sy)) / np.pi
    assert np.max(np.abs(generic - sh.hex_el_residual(hf))) < 1e-10


def test_ff_form_matches_generic_el():
    grid = sh.CylinderGrid(1.0, 1.0, 17, 16)
    hf = _wavy_field(grid)
    u = 0.7
    sx, sy = hf.node_slopes()
    generic = sh.el_residual(hf, tn.ff_tension(u))
    q = tn._ff_q(sx, sy, u)
    scale = np.pi / (np.sin(2 * u) * np.sin(np.pi * sx) * np.sqrt(1 + q * q))
    assert np.max(np.abs(generic - scale * sh.ff_el_residual(hf, u))) < 1e-8


def test_ff_form_reduces_to_hex_at_right_angle():
    grid = sh.CylinderGrid(1.0, 1.0, 17, 16)
    hf = _wavy_field(grid)
    hexform = sh.hex_el_residual(hf)
    assert np.max(np.abs(sh.ff_el_residual(hf, math.pi / 2) - hexform)) < 1e-12
    assert np.max(np.abs(sh.ff_el_residual(hf, math.pi / 2 - 1e-5) - hexform)) < 1e-8


def test_mesh_refinement_order():
    residuals = {}
    prev = None
    for n in (16, 32, 64):
        grid = sh.CylinderGrid(0.7, 1.0, n + 1, n)
        yj = grid.ys() + grid.hy / 2
        bd = sh.BoundaryData(1 / 3 + 0.06 * np.sin(2 * np.pi * yj),
                             1 / 3 - 0.04 * np.sin(2 * np.pi * yj + 0.7))
        start = sh.prolong(prev, grid) if prev is not None else None
        prev, _ = sh.minimize_action(grid, HEX, bd, tol=1e-9, max_iter=60000,
                                     start=start)
        residuals[n] = np.max(np.abs(sh.el_residual(prev, HEX)))
    assert residuals[16] > residuals[32] > residuals[64]
    # physical-interior residual converges at second order
    assert residuals[32] / residuals[64] > 2.5


def test_prolong_preserves_affine():
    coarse = sh.CylinderGrid(1.0, 1.0, 9, 8)
    fine = sh.CylinderGrid(1.0, 1.0, 17, 16)
    hf = affine_field(coarse, 0.25, 0.4)
    out = sh.prolong(hf, fine)
    xs, ys = np.meshgrid(fine.xs(), fine.ys(), indexing="ij")
    assert np.max(np.abs(out - (0.25 * xs + 0.4 * ys))) < 1e-12
