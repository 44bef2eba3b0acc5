"""Command-line front door.

Commands
--------
verify   run verification suites, write a JSON report (exit 2 on failure)
tension  tabulate a surface tension on a slope grid (CSV)
solve    variational limit-shape solve on a cylinder (CSV grid + SVG)
flow     Hamiltonian / characteristic evolution (trajectory CSV + JSON)
dimer    dimer utilities: matchings, curves, height checks
sixv     six-vertex utilities: weights, R-matrices, partitions

Common flags: --out DIR, --config FILE, --tol X, --seed N.  Flag values
override config-file values; every resolved value is echoed into the
report.  Exit codes: 0 pass, 1 configuration error, 2 verification
failure, 3 solver non-convergence, 4 shock before the requested horizon.

Boundary and initial profiles are CSV files with a header row followed by
``y,value`` lines; they are resampled onto the grid by periodic linear
interpolation.

Graph files for ``dimer --graph`` are plain-text adjacency listings, one
vertex per line::

    # vertex  color  [@x,y]  neighbor:weight ...
    b0 black @0,0 w0:1.5 w1:0.7
    w0 white @1,0
    w1 white @0,1

Coordinates are optional and only needed for height-function checks.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import tempfile

import numpy as np

from . import __version__
from . import dimers as dm
from . import flow as fl
from . import shapes as sh
from . import sixvertex as sv
from . import tension as tn
from .errors import IceLabError, NonConvergence, ShockDetected
from .suites import SUITES, run_suite

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_VERIFY = 2
EXIT_NONCONVERGENCE = 3
EXIT_SHOCK = 4


def _fmt(x) -> str:
    return f"{float(x):.17g}"


def _atomic_write(path: str, text: str) -> None:
    d = os.path.dirname(os.path.abspath(path)) or "."
    os.makedirs(d, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".icelab-")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _write_csv(path: str, header: list, rows) -> None:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(_fmt(v) if isinstance(v, (int, float, np.floating))
                              else str(v) for v in row))
    _atomic_write(path, "\n".join(lines) + "\n")


def _write_json(path: str, payload: dict) -> None:
    _atomic_write(path, json.dumps(payload, indent=2, sort_keys=True) + "\n")


def _read_profile(path: str):
    ys, vals = [], []
    with open(path) as fh:
        next(fh)  # header
        for line in fh:
            line = line.strip()
            if not line:
                continue
            a, b = line.split(",")[:2]
            ys.append(float(a))
            vals.append(float(b))
    return np.array(ys), np.array(vals)


def _svg_heatmap(path: str, values: np.ndarray) -> None:
    """Fixed-palette filled-cell rendering; a convenience view only."""
    nx, ny = values.shape
    lo, hi = float(np.min(values)), float(np.max(values))
    span = hi - lo if hi > lo else 1.0
    palette = ["#30123b", "#3b5cc4", "#28a8e0", "#30f199", "#a6fc3d",
               "#f3c63a", "#f36315", "#ba2208"]
    cell = 6
    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{nx * cell}" '
           f'height="{ny * cell}">']
    for i in range(nx):
        for j in range(ny):
            k = int((values[i, j] - lo) / span * (len(palette) - 1) + 0.5)
            out.append(f'<rect x="{i * cell}" y="{(ny - 1 - j) * cell}" '
                       f'width="{cell}" height="{cell}" fill="{palette[k]}"/>')
    out.append("</svg>")
    _atomic_write(path, "\n".join(out) + "\n")


def _load_config(path: str | None) -> dict:
    if not path:
        return {}
    with open(path) as fh:
        cfg = json.load(fh)
    if not isinstance(cfg, dict):
        raise ValueError("config file must hold a JSON object")
    return cfg


def _resolve(args: argparse.Namespace, cfg: dict, names: list) -> dict:
    """Flag > config-file > parser default; echoes the resolved values."""
    resolved = {}
    for name in names:
        val = getattr(args, name)
        if val is None and name in cfg:
            val = cfg[name]
        resolved[name] = val
    return resolved


def _tension_bundle(variant: str, u: float | None):
    if variant == "hex":
        return tn.hex_tension()
    if variant == "ff":
        if u is None:
            raise ValueError("variant ff needs --u")
        return tn.ff_tension(float(u))
    if variant == "numeric":
        return tn.numeric_tension(tn.hex_curve())
    raise ValueError(f"unknown tension variant {variant!r}")


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def cmd_verify(args, cfg) -> int:
    opts = _resolve(args, cfg, ["suite", "out", "seed", "fast"])
    names = list(SUITES) if opts["suite"] in (None, "all") else [opts["suite"]]
    for name in names:
        if name not in SUITES:
            print(f"unknown suite {name!r}; available: {', '.join(SUITES)}",
                  file=sys.stderr)
            return EXIT_CONFIG
    seed = int(opts["seed"] if opts["seed"] is not None else 1234)
    all_checks = []
    for name in names:
        checks = run_suite(name, seed=seed, fast=bool(opts["fast"]))
        all_checks.extend(checks)
        for c in checks:
            status = "pass" if c.passed else "FAIL"
            print(f"[{status}] {c.name}: value={c.value:.6g} tol={c.tol:.3g}")
    passed = all(c.passed for c in all_checks)
    report = {
        "version": __version__,
        "command": "verify",
        "seed": seed,
        "suites": names,
        "checks": [
            {"name": c.name, "value": c.value, "tol": c.tol, "pass": c.passed,
             "inputs": {k: v for k, v in c.info.items()
                        if k not in ("suite_seconds",)}}
            for c in all_checks
        ],
        "passed": passed,
    }
    out = opts["out"] or "."
    _write_json(os.path.join(out, "verify_report.json"), report)
    print(f"verify: {'PASS' if passed else 'FAIL'} "
          f"({sum(c.passed for c in all_checks)}/{len(all_checks)} checks)")
    return EXIT_OK if passed else EXIT_VERIFY


def cmd_tension(args, cfg) -> int:
    opts = _resolve(args, cfg, ["variant", "u", "lo", "hi", "n", "out"])
    variant = opts["variant"] or "hex"
    lo = float(opts["lo"] if opts["lo"] is not None else 0.15)
    hi = float(opts["hi"] if opts["hi"] is not None else 0.45)
    n = int(opts["n"] if opts["n"] is not None else 5)
    us = [float(x) for x in (opts["u"] or [])] if variant == "ff" else [None]
    out = opts["out"] or "."
    grid = np.linspace(lo, hi, n)
    for u in us or [None]:
        sigma = _tension_bundle(variant, u)
        rows = []
        for s in grid:
            for t in grid:
                if not sigma.feasible(s, t, margin=1e-9):
                    continue
                val = float(sigma.value(s, t))
                gs, gt = (float(x) for x in sigma.grad(s, t))
                h11, h12, h22 = (float(x) for x in sigma.hess(s, t))
                rows.append((s, t, val, gs, gt, h11 * h22 - h12 * h12))
        tag = variant if u is None else f"{variant}-u{u:.6g}"
        _write_csv(os.path.join(out, f"tension-{tag}.csv"),
                   ["s", "t", "sigma", "dsds", "dsdt", "detHess"], rows)
        print(f"tension-{tag}.csv: {len(rows)} rows")
    return EXIT_OK


def cmd_solve(args, cfg) -> int:
    names = ["T", "L", "nx", "ny", "tension", "u", "V", "tol", "left_csv",
             "right_csv", "t_left", "t_right", "out", "mesh_study", "svg"]
    opts = _resolve(args, cfg, names)
    T = float(opts["T"] if opts["T"] is not None else 1.0)
    L = float(opts["L"] if opts["L"] is not None else 1.0)
    nx = int(opts["nx"] if opts["nx"] is not None else 33)
    ny = int(opts["ny"] if opts["ny"] is not None else 32)
    tol = float(opts["tol"] if opts["tol"] is not None else 1e-9)
    V = float(opts["V"] if opts["V"] is not None else 0.0)
    out = opts["out"] or "."
    sigma = _tension_bundle(opts["tension"] or "hex",
                            opts["u"][0] if opts["u"] else None)
    grid = sh.CylinderGrid(T, L, nx, ny)

    def profile(csv_path, const):
        if csv_path:
            ys, vals = _read_profile(csv_path)
            return sh.resample_profile(ys, vals, ny, L)
        c = float(const if const is not None else 1.0 / 3.0)
        return np.full(ny, c)

    t_left = profile(opts["left_csv"], opts["t_left"])
    t_right = profile(opts["right_csv"], opts["t_right"])
    bd = sh.BoundaryData(t_left, t_right)

    log = {"version": __version__, "command": "solve",
           "resolved": {k: opts[k] for k in names},
           "grid": {"T": T, "L": L, "nx": nx, "ny": ny}}
    code = EXIT_OK
    try:
        hf, info = sh.minimize_action(grid, sigma, bd, V=V, tol=tol,
                                      max_iter=60000)
        log["converged"] = True
        log["iterations"] = info.iterations
        log["grad_norm"] = info.grad_norm
    except NonConvergence as err:
        hf = err.best
        log["converged"] = False
        log["diagnostics"] = {k: float(v) for k, v in err.diagnostics.items()}
        code = EXIT_NONCONVERGENCE

    const_left = float(np.max(t_left) - np.min(t_left)) < 1e-14
    const_right = float(np.max(t_right) - np.min(t_right)) < 1e-14
    if const_left and const_right and abs(t_left[0] - t_right[0]) < 1e-14 \
            and log.get("converged"):
        t0 = float(t_left[0])
        pl = tn.partial_legendre(sigma, -V, t0)
        xs, ys_g = np.meshgrid(grid.xs(), grid.ys(), indexing="ij")
        affine = pl.nu_star * xs + t0 * ys_g
        gap = float(np.max(np.abs(hf.values - affine - hf.values[0, 0])))
        log["analytic-match"] = bool(gap < 1e-6)
        log["affine_gap"] = gap

    rows = []
    for i, x in enumerate(grid.xs()):
        for j, y in enumerate(grid.ys()):
            rows.append((x, y, hf.values[i, j]))
    _write_csv(os.path.join(out, "height.csv"), ["x", "y", "h"], rows)
    res = sh.el_residual(hf, sigma)
    rows = []
    for i in range(res.shape[0]):
        for j in range(res.shape[1]):
            rows.append((grid.xs()[i + 1], grid.ys()[j], res[i, j]))
    _write_csv(os.path.join(out, "el_residual.csv"), ["x", "y", "residual"], rows)
    mask = sh.facet_mask(hf)
    _write_csv(os.path.join(out, "facets.csv"), ["i", "j", "facet"],
               [(i, j, int(mask[i, j])) for i in range(mask.shape[0])
                for j in range(mask.shape[1])])
    log["max_el_residual"] = float(np.max(np.abs(res)))
    log["facet_cells"] = int(np.sum(mask))

    if opts["mesh_study"]:
        residuals = {}
        prev = None
        for nref in (ny, 2 * ny):
            g2 = sh.CylinderGrid(T, L, nref + 1, nref)
            b2 = sh.BoundaryData(sh.resample_profile(grid.ys(), t_left, nref, L),
                                 sh.resample_profile(grid.ys(), t_right, nref, L))
            start = sh.prolong(prev, g2) if prev is not None else None
            prev, _ = sh.minimize_action(g2, sigma, b2, V=V, tol=max(tol, 1e-8),
                                         max_iter=60000, start=start)
            residuals[nref] = float(np.max(np.abs(sh.el_residual(prev, sigma))))
        order = math.log2(residuals[ny] / residuals[2 * ny])
        log["mesh_study"] = {"residuals": {str(k): v for k, v in residuals.items()},
                             "order": order}
        print(f"mesh study: order {order:.3f}")

    if opts["svg"]:
        _svg_heatmap(os.path.join(out, "height.svg"), hf.values)
    _write_json(os.path.join(out, "solve_log.json"), log)
    print(f"solve: {'converged' if log.get('converged') else 'NOT CONVERGED'}, "
          f"max EL residual {log['max_el_residual']:.3e}")
    return code


def cmd_flow(args, cfg) -> int:
    names = ["variant", "u", "L", "ny", "horizon", "steps", "t0_csv", "p0_csv",
             "tbar", "pbar", "amp", "mode", "method", "compare_variational",
             "out", "tol"]
    opts = _resolve(args, cfg, names)
    variant = opts["variant"] or "hex"
    L = float(opts["L"] if opts["L"] is not None else 1.0)
    ny = int(opts["ny"] if opts["ny"] is not None else 128)
    horizon = float(opts["horizon"] if opts["horizon"] is not None else 0.25)
    steps = int(opts["steps"] if opts["steps"] is not None else 128)
    out = opts["out"] or "."
    uval = float(opts["u"][0]) if opts["u"] else 1.1
    if variant == "hex":
        dens, F = fl.hex_density(), fl.hex_burgers()
    elif variant == "ff":
        dens, F = fl.ff_density(uval), fl.ff_burgers(uval)
    else:
        raise ValueError(f"unknown flow variant {variant!r}")

    ys = np.arange(ny) * (L / ny)
    if opts["t0_csv"]:
        yy, vv = _read_profile(opts["t0_csv"])
        t0 = sh.resample_profile(yy, vv, ny, L)
    else:
        tbar = float(opts["tbar"] if opts["tbar"] is not None else
                     (0.6 if variant == "hex" else 0.5))
        amp = float(opts["amp"] if opts["amp"] is not None else 0.03)
        mode = int(opts["mode"] if opts["mode"] is not None else 1)
        t0 = tbar + amp * np.sin(2 * np.pi * mode * ys / L)
    if opts["p0_csv"]:
        yy, vv = _read_profile(opts["p0_csv"])
        p0 = sh.resample_profile(yy, vv, ny, L)
    else:
        p0 = np.full(ny, float(opts["pbar"] if opts["pbar"] is not None else 0.0))
    state = fl.FlowState(L, p0, t0)
    method = opts["method"] or "both"

    report = {"version": __version__, "command": "flow",
              "resolved": {k: opts[k] for k in names}}
    code = EXIT_OK
    xs_out = np.linspace(0.0, horizon, 9)
    try:
        series = {}
        if method in ("hamilton", "both"):
            traj = fl.hamilton_evolve(state, dens, (0.0, horizon), steps,
                                      keep_every=max(1, steps // 8))
            states, xs_traj = traj.states, traj.xs
        else:
            states = [state] + [fl.burgers_evolve(state, F, float(x))
                                for x in xs_out[1:]]
            xs_traj = xs_out
        rows = []
        for x, st in zip(xs_traj, states):
            for y, p, t, lc in zip(st.ys, st.p, st.t, st.l):
                rows.append((x, y, p, t, lc.real, lc.imag))
        _write_csv(os.path.join(out, "trajectory.csv"),
                   ["x", "y", "p", "t", "re_l", "im_l"], rows)
        for n in range(1, 5):
            vals = [fl.conserved_In(st, n) for st in states]
            base = vals[0]
            series[f"I{n}"] = {
                "x": [float(x) for x in xs_traj],
                "re": [v.real for v in vals],
                "im": [v.imag for v in vals],
                "max_rel_drift": max(abs(v - base) / max(abs(base), 1e-30)
                                     for v in vals),
            }
        if method == "both":
            endB = fl.burgers_evolve(state, F, horizon)
            series["hamilton_vs_burgers_sup"] = float(
                np.max(np.abs(states[-1].l - endB.l)))
        report["conservation"] = series
        report["drift_tol"] = 1e-6
    except ShockDetected as err:
        report["shock"] = {"x": err.x, "detail": str(err)}
        code = EXIT_SHOCK

    if opts["compare_variational"] and code == EXIT_OK and variant == "hex":
        n = min(64, ny)
        st_n = fl.FlowState(L, sh.resample_profile(ys, p0, n, L),
                            sh.resample_profile(ys, t0, n, L))
        traj_n = fl.hamilton_evolve(st_n, dens, (0.0, horizon), 2 * (n - 1),
                                    keep_every=2)
        grid = sh.CylinderGrid(horizon, L, n, n)
        bd = sh.BoundaryData(fl.spectral_shift(st_n.t, grid.hy / 2, L),
                             fl.spectral_shift(traj_n.states[-1].t, grid.hy / 2, L))
        h_flow = np.array(traj_n.heights)
        hf, _ = sh.minimize_action(grid, tn.hex_tension(), bd, tol=1e-8,
                                   max_iter=40000, start=h_flow)
        diff = hf.values - h_flow
        diff -= diff[0, 0]
        report["compare_variational"] = {"sup": float(np.max(np.abs(diff))),
                                         "tol": 1e-3, "grid": n}
        print(f"variational cross-check sup: {report['compare_variational']['sup']:.3e}")

    _write_json(os.path.join(out, "conservation.json"), report)
    if code == EXIT_SHOCK:
        print("flow: shock detected before the horizon")
    else:
        worst = max(report["conservation"][f"I{n}"]["max_rel_drift"]
                    for n in range(1, 5))
        print(f"flow: done, worst I_n drift {worst:.3e}")
    return code


def cmd_dimer(args, cfg) -> int:
    opts = _resolve(args, cfg, ["graph", "cell", "weights", "out", "check"])
    out = opts["out"] or "."
    if opts["cell"]:
        w = [float(x) for x in (opts["weights"] or "1").split(",")]
        if opts["cell"] == "hex":
            vals = (w + [1.0, 1.0, 1.0])[:3]
            fd = dm.hexagonal_cell(*vals)
        elif opts["cell"] == "city":
            vals = (w + [1.0] * 7)[:7]
            fd = dm.dimer_city_cell(*vals)
        else:
            raise ValueError(f"unknown cell {opts['cell']!r}")
        curve = dm.characteristic_polynomial(fd)
        _write_csv(os.path.join(out, "curve.csv"), ["i", "j", "coeff"],
                   [(i, j, c) for (i, j), c in curve.coeffs])
        print("characteristic polynomial:",
              " + ".join(f"({_fmt(c)}) z^{i} w^{j}" for (i, j), c in curve.coeffs))
        return EXIT_OK
    if not opts["graph"]:
        print("dimer needs --graph FILE or --cell NAME", file=sys.stderr)
        return EXIT_CONFIG
    with open(opts["graph"]) as fh:
        g = dm.parse_graph_text(fh.read())
    matchings = dm.enumerate_matchings(g)
    rows = [(k, len(d), dm.config_weight(g, d),
             ";".join(str(e) for e in sorted(d))) for k, d in enumerate(matchings)]
    _write_csv(os.path.join(out, "matchings.csv"),
               ["index", "dimers", "weight", "edges"], rows)
    print(f"{len(matchings)} matchings on {len(g.edges)} edges")
    if opts["check"]:
        worst = 0.0
        for d in matchings:
            theta = dm.trivalent_height(g, d)
            worst = max(worst, abs(dm.weight_from_height(theta, g)
                                   - dm.config_weight(g, d)))
        print(f"height-weight identity residual: {worst:.3e}")
        return EXIT_OK if worst < 1e-10 else EXIT_VERIFY
    return EXIT_OK


def cmd_sixv(args, cfg) -> int:
    names = ["regime", "u", "gamma", "r", "H", "V", "ybe_v", "transfer",
             "torus", "cylinder", "eta1", "eta2", "out"]
    opts = _resolve(args, cfg, names)
    out = opts["out"] or "."
    H = float(opts["H"] or 0.0)
    V = float(opts["V"] or 0.0)
    payload = {"version": __version__, "command": "sixv",
               "resolved": {k: opts[k] for k in names}}
    if opts["regime"]:
        par = sv.BaxterParam(opts["regime"], float(opts["u"][0]),
                             float(opts["gamma"]), float(opts["r"] or 1.0))
        w = sv.weights_from_baxter(par, H, V)
        payload["weights"] = {"a": w.a, "b": w.b, "c": w.c, "H": H, "V": V}
        payload["delta"] = sv.anisotropy_delta(w)
        print(f"(a, b, c) = ({w.a:.12g}, {w.b:.12g}, {w.c:.12g}), "
              f"Delta = {payload['delta']:.12g}")
        if opts["ybe_v"] is not None:
            res = sv.yang_baxter_residual(float(opts["u"][0]),
                                          float(opts["ybe_v"]),
                                          opts["regime"], float(opts["gamma"]))
            payload["ybe_residual"] = res
            print(f"Yang-Baxter residual: {res:.3e}")
    else:
        w = sv.VertexWeights(1.0, 1.0, 1.0, H, V)
    if opts["transfer"]:
        n = int(opts["transfer"])
        op = sv.transfer(n, w)
        _write_csv(os.path.join(out, "transfer.csv"),
                   [f"c{k}" for k in range(op.dim)], op.matrix)
        payload["transfer_rows"] = op.dim
    if opts["torus"]:
        m, n = (int(x) for x in opts["torus"].split(","))
        payload["torus_partition"] = sv.torus_partition(m, n, w)
        print(f"Z_torus({m},{n}) = {payload['torus_partition']:.12g}")
    if opts["cylinder"]:
        m, n = (int(x) for x in opts["cylinder"].split(","))
        e1 = sv.BoundaryWord(tuple(int(c) for c in (opts["eta1"] or "0" * n)))
        e2 = sv.BoundaryWord(tuple(int(c) for c in (opts["eta2"] or "0" * n)))
        payload["cylinder_partition"] = sv.cylinder_partition(m, n, w, e1, e2)
        print(f"Z_cyl({m},{n}) = {payload['cylinder_partition']:.12g}")
    _write_json(os.path.join(out, "sixv.json"), payload)
    return EXIT_OK


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------

def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="icelab",
                                 description="six-vertex / dimer limit-shape laboratory")
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--out", default=None, help="output directory")
        p.add_argument("--config", default=None, help="JSON config file")
        p.add_argument("--tol", type=float, default=None)
        p.add_argument("--seed", type=int, default=None,
                       help="seed for randomized test-point selection")

    p = sub.add_parser("verify", help="run verification suites")
    common(p)
    p.add_argument("--suite", default=None,
                   help=f"suite name or 'all' ({', '.join(SUITES)})")
    p.add_argument("--fast", action="store_const", const=True, default=None,
                   help="reduced grid sizes for the heavy suites")

    p = sub.add_parser("tension", help="tabulate a surface tension")
    common(p)
    p.add_argument("--variant", choices=["hex", "ff", "numeric"], default=None)
    p.add_argument("--u", action="append", default=None,
                   help="spectral parameter (repeatable for ff)")
    p.add_argument("--lo", type=float, default=None)
    p.add_argument("--hi", type=float, default=None)
    p.add_argument("--n", type=int, default=None)

    p = sub.add_parser("solve", help="variational limit-shape solve")
    common(p)
    p.add_argument("--T", type=float, default=None)
    p.add_argument("--L", type=float, default=None)
    p.add_argument("--nx", type=int, default=None)
    p.add_argument("--ny", type=int, default=None)
    p.add_argument("--tension", choices=["hex", "ff"], default=None)
    p.add_argument("--u", action="append", default=None)
    p.add_argument("--V", type=float, default=None)
    p.add_argument("--left-csv", dest="left_csv", default=None)
    p.add_argument("--right-csv", dest="right_csv", default=None)
    p.add_argument("--t-left", dest="t_left", type=float, default=None)
    p.add_argument("--t-right", dest="t_right", type=float, default=None)
    p.add_argument("--mesh-study", dest="mesh_study", action="store_const",
                   const=True, default=None)
    p.add_argument("--svg", action="store_const", const=True, default=None)

    p = sub.add_parser("flow", help="evolve the Hamiltonian flow")
    common(p)
    p.add_argument("--variant", choices=["hex", "ff"], default=None)
    p.add_argument("--u", action="append", default=None)
    p.add_argument("--L", type=float, default=None)
    p.add_argument("--ny", type=int, default=None)
    p.add_argument("--horizon", type=float, default=None)
    p.add_argument("--steps", type=int, default=None)
    p.add_argument("--t0-csv", dest="t0_csv", default=None)
    p.add_argument("--p0-csv", dest="p0_csv", default=None)
    p.add_argument("--tbar", type=float, default=None)
    p.add_argument("--pbar", type=float, default=None)
    p.add_argument("--amp", type=float, default=None)
    p.add_argument("--mode", type=int, default=None)
    p.add_argument("--method", choices=["hamilton", "burgers", "both"], default=None)
    p.add_argument("--compare-variational", dest="compare_variational",
                   action="store_const", const=True, default=None)

    p = sub.add_parser("dimer", help="dimer utilities")
    common(p)
    p.add_argument("--graph", default=None, help="adjacency-listing file")
    p.add_argument("--cell", choices=["hex", "city"], default=None)
    p.add_argument("--weights", default=None, help="comma-separated cell weights")
    p.add_argument("--check", action="store_const", const=True, default=None,
                   help="verify the height-weight identity on the graph")

    p = sub.add_parser("sixv", help="six-vertex utilities")
    common(p)
    p.add_argument("--regime", choices=list(sv.REGIMES), default=None)
    p.add_argument("--u", action="append", default=None)
    p.add_argument("--gamma", type=float, default=None)
    p.add_argument("--r", type=float, default=None)
    p.add_argument("--H", type=float, default=None)
    p.add_argument("--V", type=float, default=None)
    p.add_argument("--ybe-v", dest="ybe_v", type=float, default=None)
    p.add_argument("--transfer", type=int, default=None)
    p.add_argument("--torus", default=None, help="M,N")
    p.add_argument("--cylinder", default=None, help="M,N")
    p.add_argument("--eta1", default=None, help="bit string, row 0 first")
    p.add_argument("--eta2", default=None)
    return ap


_COMMANDS = {
    "verify": cmd_verify,
    "tension": cmd_tension,
    "solve": cmd_solve,
    "flow": cmd_flow,
    "dimer": cmd_dimer,
    "sixv": cmd_sixv,
}


def main(argv=None) -> int:
    np.seterr(over="ignore", invalid="ignore", divide="ignore")
    ap = _build_parser()
    args = ap.parse_args(argv)
    try:
        cfg = _load_config(args.config)
    except (OSError, ValueError, json.JSONDecodeError) as err:
        print(f"config error: {err}", file=sys.stderr)
        return EXIT_CONFIG
    handler = _COMMANDS[args.command]
    try:
        return handler(args, cfg)
    except ShockDetected as err:
        print(f"shock detected: {err}", file=sys.stderr)
        return EXIT_SHOCK
    except NonConvergence as err:
        print(f"solver did not converge: {err}", file=sys.stderr)
        return EXIT_NONCONVERGENCE
    except (IceLabError, ValueError, OSError) as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
