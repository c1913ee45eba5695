"""Named verification suites; each returns a list of :class:`Check` records."""

from dataclasses import dataclass
import math

import numpy as np

from . import exponents as ex
from .exponents import SleParams
from .pde import (
    DYADIC_LADDER,
    ansatz_scaling,
    chordal_operator_residual,
    loglog_slope,
    subsupersolution_sign,
)
from .special import boundary_ode_residual, boundary_solutions

RESIDUAL_TOL = 1e-8
G3_AT_4_TOL = 1e-5
SLOPE_MIN = 0.9


@dataclass(frozen=True)
class Check:
    check: str
    kappa: float
    t: float
    location: str
    value: float
    passed: bool


def series_limit_at_4(sol, ks=(3, 4, 5, 6)):
    """Richardson extrapolation of ``g3(4 - 10^-k)`` to ``x = 4``.

    Near 4 the solution is ``g3(4) + c (4 - x) + O((4 - x)^(3/2))``, so each
    pass removes the linear term of the previous one.
    """
    vals = [sol.g3(4 - 10.0**-k, order=0)[0] for k in ks]
    while len(vals) > 1:
        vals = [(10 * b - a) / 9 for a, b in zip(vals, vals[1:])]
    return vals[0]


def hypergeometric_suite(kappa, t, n_interior=200, n_positive=400):
    p = SleParams(kappa, t)
    sol = boundary_solutions(p)
    out = []
    xs = np.linspace(0, 4, n_interior + 2)[1:-1]
    worst = max(abs(boundary_ode_residual(sol, float(x))) for x in xs)
    out.append(Check("ode_residual", kappa, t, f"{n_interior} points in (0,4)", worst, worst < RESIDUAL_TOL))
    g0 = sol.g3(0.0, order=0)[0]
    out.append(Check("g3_at_0", kappa, t, "x=0", g0, abs(g0 - 1) < 1e-10))
    lim = series_limit_at_4(sol)
    diff = abs(lim - sol.g3_at_4)
    out.append(Check("g3_limit_at_4", kappa, t, "x->4", diff, diff < G3_AT_4_TOL))
    gmin = min(sol(float(x)) for x in np.linspace(0, 3.99, n_positive))
    out.append(Check("g3_positive", kappa, t, "[0,3.99]", gmin, gmin > 0))
    return out


def chordal_suite(kappa, t, n=10):
    p = SleParams(kappa, t)
    xs = np.linspace(-2, 2, n)
    ys = np.linspace(0.2, 2, n)
    worst = max(abs(chordal_operator_residual(p, float(x), float(y))) for x in xs for y in ys)
    out = [Check("chordal_residual", kappa, t, f"{n}x{n} grid", worst, worst < RESIDUAL_TOL)]
    ctrl = abs(chordal_operator_residual(p, 1.0, 1.0, beta=ex.beta_exponent(p) + 0.1))
    out.append(Check("chordal_negative_control", kappa, t, "x=1 y=1", ctrl, ctrl > 1e-3))
    return out


def ansatz_suite(kappa, t, theta=math.pi / 2, h_list=(1e-2, 1e-3, 1e-4, 1e-5)):
    p = SleParams(kappa, t)
    samples = ansatz_scaling(p, theta, h_list)
    ratios = [s.ratio for s in samples]
    if all(r == 0 for r in ratios):
        # t = 0: the ansatz is constant and the operator vanishes identically
        return [Check("ansatz_slope", kappa, t, f"theta={theta:.6g}", 0.0, True)]
    slope = loglog_slope(h_list, ratios)
    return [Check("ansatz_slope", kappa, t, f"theta={theta:.6g}", slope, slope >= SLOPE_MIN)]


def subsuper_suite(kappa, t, theta=math.pi / 2, deltas=(1.0, -1.0, 0.5, -0.5)):
    p = SleParams(kappa, t)
    out = []
    for d in deltas:
        c = subsupersolution_sign(p, d, theta, DYADIC_LADDER)
        h0 = c.h0 if c.h0 is not None else math.nan
        out.append(Check(f"sign_delta={d:g}", kappa, t, f"theta={theta:.6g}", h0, c.passed))
    return out


def exponents_suite(kappa, t, fd_step=1e-5):
    """Branch continuity at both thresholds, unit slope at the upper one, and the value at ``t``."""
    out = []
    tt, ts = ex.t_tip(kappa), ex.t_star(kappa)
    p_tip = SleParams(kappa, tt)
    g = ex.gamma_exponent(p_tip)
    tip = -ex.beta_exponent(p_tip) - 2 * g - 1
    jump = abs(tip - ex.analytic_spectrum(p_tip))
    out.append(Check("continuity_tip", kappa, t, f"t={tt:.17g}", jump, jump < 1e-9))
    lin = ts - (4 + kappa) ** 2 / (16 * kappa)
    jump = abs(lin - ex.analytic_spectrum(SleParams(kappa, ts)))
    out.append(Check("continuity_star", kappa, t, f"t={ts:.17g}", jump, jump < 1e-9))
    d = (
        ex.analytic_spectrum(SleParams(kappa, ts + fd_step))
        - ex.analytic_spectrum(SleParams(kappa, ts - fd_step))
    ) / (2 * fd_step)
    out.append(Check("slope_at_star", kappa, t, f"t={ts:.17g}", d, abs(d - 1) < 1e-6))
    v, _ = ex.average_spectrum(SleParams(kappa, t))
    out.append(Check("value", kappa, t, f"t={t:.17g}", v, math.isfinite(v)))
    return out


SUITES = {
    "hypergeometric": hypergeometric_suite,
    "chordal": chordal_suite,
    "ansatz": ansatz_suite,
    "subsuper": subsuper_suite,
    "exponents": exponents_suite,
}


def run_suite(name, kappa, t):
    return SUITES[name](kappa, t)
