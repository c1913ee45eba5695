"""Closed-form exponents and spectra of SLE harmonic measure.

Conventions: ``kappa > 0`` is the SLE speed and ``t`` the moment order.
``gamma_exponent`` and ``beta_exponent`` are the local exponents in

    E|f'(r e^{i theta})|^t  ~  (r - 1)^beta ((r - 1)^2 + theta^2)^gamma,

and ``-beta`` is the analytic part of the average integral means spectrum.
"""

from dataclasses import dataclass
from enum import Enum
import math

import numpy as np
from scipy import optimize

from .errors import DomainError, OptimizationError

KAPPA4_TOL = 1e-12


class Branch(str, Enum):
    TIP = "Tip"
    ANALYTIC = "Analytic"
    LINEAR = "Linear"
    CLIPPED = "Clipped"


class Variant(str, Enum):
    WHOLE = "WholeSle"
    BULK = "Bulk"
    CONJECTURED = "ConjecturedAlmostSure"
    F = "DuplantierF"
    F_PLUS = "DuplantierFPlus"


@dataclass(frozen=True)
class SleParams:
    kappa: float
    t: float

    def __post_init__(self):
        if not self.kappa > 0:
            raise DomainError(f"kappa must be positive, got {self.kappa}")

    @property
    def analytic(self):
        """True when the square root in ``gamma`` is real."""
        return self.t <= analytic_limit(self.kappa)


@dataclass(frozen=True)
class Thresholds:
    t_tip: float
    t_star: float


@dataclass(frozen=True)
class Exponents:
    gamma: float
    beta: float
    branch: Branch
    thresholds: Thresholds


def analytic_limit(kappa):
    return (4 + kappa) ** 2 / (8 * kappa)


def t_tip(kappa):
    """Moment order below which the tip dominates (``gamma <= -1/2``)."""
    return -1 - 3 * kappa / 8


def t_star(kappa):
    """Moment order where the analytic branch reaches slope one."""
    return 3 * (4 + kappa) ** 2 / (32 * kappa)


def mu(kappa):
    return (4 + kappa) ** 2 / (4 * kappa)


def gamma_exponent(p):
    disc = (4 + p.kappa) ** 2 - 8 * p.t * p.kappa
    if disc < 0:
        raise DomainError(
            f"t={p.t} exceeds (4+kappa)^2/(8 kappa)={analytic_limit(p.kappa)}"
        )
    return (4 + p.kappa - math.sqrt(disc)) / (2 * p.kappa)


def beta_exponent(p):
    return p.t - (4 + p.kappa) * gamma_exponent(p) / 2


def analytic_spectrum(p):
    """Analytic part of the spectrum, ``-beta``; defined up to the analytic limit."""
    return -beta_exponent(p)


def exponents(p):
    """Both exponents together with the whole-SLE branch classification."""
    th = Thresholds(t_tip(p.kappa), t_star(p.kappa))
    if p.t <= th.t_tip:
        branch = Branch.TIP
    elif p.t <= th.t_star:
        branch = Branch.ANALYTIC
    else:
        branch = Branch.LINEAR
    g = gamma_exponent(p)
    return Exponents(g, p.t - (4 + p.kappa) * g / 2, branch, th)


def average_spectrum(p, variant=Variant.WHOLE):
    """Average integral means spectrum of whole SLE or of its bulk.

    Returns ``(value, branch)``.  At a threshold the lower branch is reported.
    """
    variant = Variant(variant)
    if variant not in (Variant.WHOLE, Variant.BULK):
        raise DomainError(f"average_spectrum has no variant {variant.value}")
    k, t = p.kappa, p.t
    if t > t_star(k):
        return t - (4 + k) ** 2 / (16 * k), Branch.LINEAR
    if variant is Variant.WHOLE and t <= t_tip(k):
        g = gamma_exponent(p)
        return -(t - (4 + k) * g / 2) - 2 * g - 1, Branch.TIP
    return -beta_exponent(p), Branch.ANALYTIC


def holder_exponent(kappa):
    if not kappa > 0:
        raise DomainError("kappa must be positive")
    m = mu(kappa)
    return 1 - 1 / m - math.sqrt(1 / m**2 + 2 / m)


def boundary_dimension_bound(kappa):
    if kappa < 4:
        raise DomainError(f"the bound needs kappa >= 4, got {kappa}")
    return 1 + 2 / kappa


def central_charge(kappa):
    if not kappa > 0:
        raise DomainError("kappa must be positive")
    return (6 - kappa) * (6 - 16 / kappa) / 4


def duplantier_f(alpha, kappa):
    """Multifractal spectrum ``f(alpha)``; negative values are allowed."""
    alpha = np.asarray(alpha, dtype=float)
    if np.any(alpha <= 0.5):
        raise DomainError("duplantier_f needs alpha > 1/2")
    c = central_charge(kappa)
    out = alpha - (25 - c) * (alpha - 1) ** 2 / (12 * (2 * alpha - 1))
    return out if out.ndim else float(out)


def duplantier_f_plus(alpha, kappa):
    return np.maximum(duplantier_f(alpha, kappa), 0.0)


def alpha_extremes(kappa):
    """Endpoints ``(alpha_min, alpha_max)`` of the support of ``f+``."""
    if abs(kappa - 4) < KAPPA4_TOL:
        return 2 / 3, math.inf
    root = 2 * math.sqrt(2) * math.sqrt(16 * kappa + 10 * kappa**2 + kappa**3)
    den = (4 - kappa) ** 2
    base = 16 + 4 * kappa + kappa**2
    return (base - root) / den, (base + root) / den


def t_extremes(kappa):
    """Phase transitions ``(t_min, t_max)`` of the conjectured a.s. spectrum."""
    m = mu(kappa)
    s = (1 + m) * math.sqrt(1 + 2 * m)
    return (-1 - 2 * m - s) / m, (-1 - 2 * m + s) / m


def tangent_slope_alpha(alpha):
    """Slope of a tangent piece written through its alpha endpoint."""
    return 1 - 1 / alpha


def tangent_slope_t(t_c, kappa):
    """Slope of a tangent piece written through its critical moment."""
    return 1 / math.sqrt(1 - 2 * t_c / mu(kappa)) - 1


def conjectured_as_spectrum(p, form="alpha"):
    """Legendre transform of ``f+``: analytic between the transitions, tangent lines outside.

    ``form`` selects how the tangent slopes are computed: from the alpha
    endpoints (``"alpha"``) or from the critical moments (``"t"``).
    """
    k, t = p.kappa, p.t
    t_min, t_max = t_extremes(k)
    if t_min < t < t_max:
        return -beta_exponent(p)
    lo = t <= t_min
    if form == "alpha":
        a_min, a_max = alpha_extremes(k)
        slope = tangent_slope_alpha(a_min if lo else a_max)
    elif form == "t":
        slope = tangent_slope_t(t_min if lo else t_max, k)
    else:
        raise ValueError(f"unknown form {form!r}")
    return t * slope - 1


def conjectured_branch(p):
    t_min, t_max = t_extremes(p.kappa)
    return Branch.ANALYTIC if t_min < p.t < t_max else Branch.LINEAR


def legendre_check(kappa, t, n_grid=4000, alpha_cap=1e4):
    """Numerical ``sup_alpha (f(alpha) - t)/alpha`` over ``(1/2, A]``.

    A log-spaced grid locates the maximum, then golden-section search
    refines it inside the neighbouring grid cells.
    """
    a_max = alpha_extremes(kappa)[1]
    hi = min(a_max, alpha_cap)
    lo = 0.5 + 1e-6
    grid = lo + np.geomspace(1e-6, hi - lo, n_grid)
    grid[-1] = hi

    def objective(a):
        return (duplantier_f(a, kappa) - t) / a

    vals = objective(grid)
    i = int(np.argmax(vals))
    if i == 0 or i == n_grid - 1:
        # maximum on the boundary of the search domain
        if i == n_grid - 1 and math.isfinite(a_max) and hi == a_max:
            return float(vals[i])
        raise OptimizationError(f"no interior maximum for kappa={kappa}, t={t}")
    res = optimize.minimize_scalar(
        lambda a: -objective(a),
        bracket=(grid[i - 1], grid[i], grid[i + 1]),
        method="golden",
        options={"xtol": 1e-12},
    )
    if not res.success:
        raise OptimizationError(res.message)
    return float(-res.fun)


_EVALUATORS = {
    Variant.WHOLE: lambda k, t: average_spectrum(SleParams(k, t), Variant.WHOLE),
    Variant.BULK: lambda k, t: average_spectrum(SleParams(k, t), Variant.BULK),
    Variant.CONJECTURED: lambda k, t: (
        conjectured_as_spectrum(SleParams(k, t)),
        conjectured_branch(SleParams(k, t)),
    ),
    Variant.F: lambda k, a: (duplantier_f(a, k), Branch.ANALYTIC),
    Variant.F_PLUS: lambda k, a: (
        (duplantier_f(a, k), Branch.ANALYTIC)
        if duplantier_f(a, k) >= 0
        else (0.0, Branch.CLIPPED)
    ),
}


@dataclass(frozen=True)
class SpectrumCurve:
    """Sampled spectrum; for the two ``f`` variants the abscissa is alpha."""

    kappa: float
    variant: Variant
    samples: tuple

    @property
    def t(self):
        return np.array([s[0] for s in self.samples])

    @property
    def values(self):
        return np.array([s[1] for s in self.samples])

    @property
    def branches(self):
        return [s[2] for s in self.samples]


def spectrum_table(kappa, t_grid, variant=Variant.WHOLE):
    variant = Variant(variant)
    grid = [float(x) for x in t_grid]
    if any(not math.isfinite(x) for x in grid):
        raise DomainError("grid must be finite")
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise DomainError("grid must be strictly increasing")
    fn = _EVALUATORS[variant]
    samples = []
    for x in grid:
        v, br = fn(kappa, x)
        samples.append((x, float(v) + 0.0, br))  # no signed zeros in tables
    return SpectrumCurve(float(kappa), variant, tuple(samples))
