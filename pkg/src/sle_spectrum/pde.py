"""Residual checks of the stationary radial operator and its chordal limit.

The radial operator acting on ``F(r, theta)`` is

    L F = t (A - 1) F + b_r F_r - b_theta F_theta + (kappa/2) F_theta_theta

with ``A``, ``b_r = dr`` and ``b_theta = -dtheta`` the drifts of the flow (see
:func:`sle_spectrum.loewner.drift_terms`).  Fields are passed as callables
returning ``(F, F_r, F_theta, F_theta_theta)``; every field defined here
differentiates in closed form, using the differentiated hypergeometric series
for the boundary factor.
"""

from dataclasses import dataclass
import math

import numpy as np

from .errors import DomainError
from .exponents import beta_exponent, gamma_exponent
from .loewner import drift_terms
from .special import boundary_solutions

#: Ladder of ``r - 1`` values searched for the onset of the sign pattern.
DYADIC_LADDER = tuple(2.0**-k for k in range(6, 21))


@dataclass(frozen=True)
class OperatorSample:
    """Operator value at one point, with the leading-order factor divided out."""

    location: tuple
    residual: float
    normalizer: float

    @property
    def ratio(self):
        return self.residual / self.normalizer


def radial_operator(field, r, theta, p):
    """Apply the radial operator to ``field`` at ``(r, theta)``."""
    F, Fr, Ft, Ftt = field(r, theta)
    a, br, dth = drift_terms(r, theta)
    return p.t * (a - 1) * F + br * Fr + dth * Ft + 0.5 * p.kappa * Ftt


def constant_field(c=1.0):
    return lambda r, theta: (c, 0.0, 0.0, 0.0)


def _boundary_factor(p, g):
    if g is not None:
        return g
    sol = boundary_solutions(p)
    return sol.g3


def _ansatz_logderivs(p, r, theta, g, delta=0.0):
    # F = (r-1)^beta D^gamma g(D) (-log(r-1))^delta, returned as F / (normalizer) and
    # the logarithmic derivatives of F
    beta, gam = beta_exponent(p), gamma_exponent(p)
    c, s = math.cos(theta), math.sin(theta)
    D = r * r - 2 * r * c + 1
    Dr, Dt, Dtt = 2 * r - 2 * c, 2 * r * s, 2 * r * c
    G, G1, G2 = g(D)
    u = gam / D + G1 / G
    du = -gam / D**2 + G2 / G - (G1 / G) ** 2
    lr = beta / (r - 1) + u * Dr
    if delta:
        lr -= delta / ((r - 1) * -math.log(r - 1))
    lt = u * Dt
    ltt = lt * lt + du * Dt * Dt + u * Dtt
    norm = (r - 1) ** beta * D**gam
    if delta:
        norm *= (-math.log(r - 1)) ** delta
    return norm, G, lr, lt, ltt


def ansatz_field(p, g=None, delta=0.0):
    """``(r-1)^beta D^gamma g(D) (-log(r-1))^delta`` with ``D = |r e^{i theta} - 1|^2``.

    ``g`` maps ``D`` to ``[g, g', g'']`` and defaults to the regular boundary
    solution ``g3``.
    """
    g = _boundary_factor(p, g)

    def field(r, theta):
        norm, G, lr, lt, ltt = _ansatz_logderivs(p, r, theta, g, delta)
        F = norm * G
        return F, F * lr, F * lt, F * ltt

    return field


def chordal_field_radial(p):
    """``(r-1)^beta ((r-1)^2 + theta^2)^gamma``: the chordal solution in radial coordinates."""
    beta, gam = beta_exponent(p), gamma_exponent(p)

    def field(r, theta):
        y = r - 1
        R = y * y + theta * theta
        F = y**beta * R**gam
        lr = beta / y + 2 * gam * y / R
        lt = 2 * gam * theta / R
        ltt = lt * lt + 2 * gam / R - 4 * gam * theta**2 / R**2
        return F, F * lr, F * lt, F * ltt

    return field


def ansatz_sample(p, theta, h, g=None, delta=0.0):
    """Radial operator on the ansatz at ``r = 1 + h``, normalised by its leading factor."""
    g = _boundary_factor(p, g)
    r = 1.0 + h
    norm = _ansatz_logderivs(p, r, theta, g, delta)[0]
    val = radial_operator(ansatz_field(p, g, delta), r, theta, p)
    return OperatorSample((r, theta), val, norm)


def ansatz_scaling(p, theta, h_list, g=None):
    """Ansatz samples at ``r = 1 + h`` for each ``h``; the ratios vanish like ``h``."""
    if theta == 0:
        raise DomainError("theta must be nonzero")
    g = _boundary_factor(p, g)
    return [ansatz_sample(p, theta, h, g) for h in h_list]


def loglog_slope(h_list, values):
    """Least-squares slope of ``log|values|`` against ``log h``."""
    x = np.log(np.asarray(h_list, dtype=float))
    y = np.log(np.abs(np.asarray(values, dtype=float)))
    return float(np.polyfit(x, y, 1)[0])


def chordal_operator(p, x, y, F, Fx, Fy, Fxx):
    R = x * x + y * y
    return (
        2 * p.t * (x * x - y * y) / R**2 * F
        - 2 * x / R * Fx
        + 2 * y / R * Fy
        + 0.5 * p.kappa * Fxx
    )


def chordal_operator_residual(p, x, y, beta=None, gamma=None):
    """Chordal operator on ``y^beta (x^2 + y^2)^gamma`` divided by ``|F|``.

    The exponents default to the closed forms, for which the result is pure
    roundoff; other values serve as negative controls.
    """
    if not y > 0:
        raise DomainError("y must be positive")
    beta = beta_exponent(p) if beta is None else beta
    gam = gamma_exponent(p) if gamma is None else gamma
    R = x * x + y * y
    lx = 2 * gam * x / R
    ly = beta / y + 2 * gam * y / R
    lxx = lx * lx + 2 * gam / R - 4 * gam * x * x / R**2
    # F = 1 after dividing by |F|
    return chordal_operator(p, x, y, 1.0, lx, ly, lxx)


def tangency_samples(p, x0, y0, scales):
    """Radial operator on the chordal solution at ``(r, theta) = (1 + l y0, l x0)``.

    Near ``r = 1, theta = 0`` the chordal operator is the leading, order
    ``l^-2``, part of the radial one.  The sample normalizer is that order,
    ``1 / (x^2 + y^2)``, so the ratios vanish like ``l``.
    """
    field = chordal_field_radial(p)
    out = []
    for lam in scales:
        y, x = lam * y0, lam * x0
        F = field(1 + y, x)[0]
        val = radial_operator(field, 1 + y, x, p) / F
        out.append(OperatorSample((1 + y, x), val, 1 / (x * x + y * y)))
    return out


@dataclass(frozen=True)
class SignCheck:
    """Signs of the operator on the log-corrected ansatz along a ladder of ``h``.

    ``h0`` is the largest ladder value below which every sample has the sign
    ``-sign(delta)``; ``None`` when the last sample already fails.
    """

    delta: float
    theta: float
    samples: tuple
    h0: float

    @property
    def passed(self):
        return self.h0 is not None


def subsupersolution_sign(p, delta, theta, h_list=DYADIC_LADDER, g=None):
    """Operator on ``f (-log(r-1))^delta`` for each ``h`` in decreasing order."""
    if delta == 0:
        raise DomainError("delta must be nonzero")
    if theta == 0:
        raise DomainError("theta must be nonzero")
    g = _boundary_factor(p, g)
    hs = sorted(h_list, reverse=True)
    samples = tuple(ansatz_sample(p, theta, h, g, delta) for h in hs)
    want = -math.copysign(1.0, delta)
    h0 = None
    for h, s in zip(reversed(hs), reversed(samples)):
        if math.copysign(1.0, s.ratio) != want or s.ratio == 0:
            break
        h0 = h
    return SignCheck(float(delta), float(theta), samples, h0)
