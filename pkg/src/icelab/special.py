"""Complex dilogarithm and the Lobachevsky function.

Li2 is taken on the principal branch with the cut along the real ray
[1, inf).  The Lobachevsky function is

    L(x) = -int_0^x log(2 sin t) dt = Im(Li2(exp(2ix))) / 2,

pi-periodic and odd.
"""

from __future__ import annotations

import math

import numpy as np
from scipy.special import bernoulli

from .errors import BranchCut

PI2_6 = np.pi ** 2 / 6.0

# Bernoulli numbers B_0..B_48; odd ones beyond B_1 vanish.
_BERN = bernoulli(48)
_FACT = np.array([float(math.factorial(k + 1)) for k in range(49)])


def _dilog_series(z):
    # plain power series, |z| <= 0.4
    total = 0.0 + 0.0j
    term = complex(z)
    for k in range(1, 40):
        total += term / (k * k)
        term *= z
        if abs(term) < 1e-18:
            break
    return total


def _dilog_bernoulli(z):
    # series in u = -log(1-z); converges for |u| < 2*pi
    u = -np.log(1.0 - z)
    total = 0.0 + 0.0j
    upow = u
    for k in range(0, 49):
        total += _BERN[k] * upow / _FACT[k]
        upow *= u
        if abs(upow) / _FACT[min(k + 1, 48)] < 1e-19:
            break
    return total


def _dilog_scalar(z: complex) -> complex:
    z = complex(z)
    if z.imag == 0.0 and z.real >= 1.0:
        raise BranchCut(f"dilog evaluated on the cut [1, inf): z={z.real}")
    if z == 0:
        return 0.0 + 0.0j
    if abs(z) > 1.0:
        # inversion: Li2(z) + Li2(1/z) = -pi^2/6 - log(-z)^2 / 2
        return -_dilog_scalar(1.0 / z) - PI2_6 - 0.5 * np.log(-z) ** 2
    if abs(z) <= 0.4:
        return _dilog_series(z)
    if abs(1.0 - z) <= 0.25:
        # reflection: Li2(z) = pi^2/6 - log(z) log(1-z) - Li2(1-z)
        w = 1.0 - z
        return PI2_6 - np.log(z) * np.log(w) - _dilog_series(w)
    return _dilog_bernoulli(z)


def dilog(z):
    """Principal-branch Li2(z); raises BranchCut on the real ray z >= 1."""
    if np.isscalar(z) or np.ndim(z) == 0:
        return _dilog_scalar(complex(z))
    arr = np.asarray(z, dtype=complex)
    out = np.empty(arr.shape, dtype=complex)
    flat = arr.reshape(-1)
    res = out.reshape(-1)
    for i, val in enumerate(flat):
        res[i] = _dilog_scalar(val)
    return out


def lobachevsky(x):
    """L(x) = -int_0^x log(2 sin t) dt, computed via the dilogarithm."""
    if not (np.isscalar(x) or np.ndim(x) == 0):
        arr = np.asarray(x, dtype=float)
        return np.array([lobachevsky(v) for v in arr.reshape(-1)]).reshape(arr.shape)
    x = float(x)
    # pi-periodic and odd; reduce to [0, pi)
    r = x - np.pi * np.floor(x / np.pi)
    if r == 0.0 or abs(np.sin(r)) < 1e-300:
        return 0.0
    return 0.5 * _dilog_scalar(np.exp(2j * r)).imag
