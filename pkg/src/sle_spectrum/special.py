"""Complex log-Gamma, Gauss hypergeometric function, and the boundary ODE.

The boundary ODE in ``x = 2 - 2 cos(theta) in [0, 4]``,

    gamma (2 + kappa) g + (8 - 2x + kappa (x - 2) + 2 gamma kappa (x - 4)) g'
        + kappa (x - 4) x g'' = 0,

is hypergeometric in ``x / 4``.  :func:`boundary_solutions` builds its two
Frobenius solutions at ``x = 0`` and the combination ``g3`` that is regular at
``x = 4``.
"""

from dataclasses import dataclass
import cmath
import math

import numpy as np

from .errors import ConditionError, ConvergenceError, PoleError
from .exponents import SleParams, gamma_exponent, t_star

# Lanczos approximation with g = 7, n = 9.  Coefficients as tabulated by
# P. Godfrey (2001) and reproduced in Press et al. and the Wikipedia article
# "Lanczos approximation"; relative error of Gamma about 1e-15 for Re z >= 1/2.
LANCZOS_G = 7.0
LANCZOS_COEF = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)
_HALF_LOG_2PI = 0.5 * math.log(2 * math.pi)
_LOG_PI = math.log(math.pi)
_LOG2 = math.log(2)
MAX_TERMS = 1_000_000


def _is_pole(z, tol=0.0):
    return z.imag == 0 and z.real <= 0 and abs(z.real - round(z.real)) <= tol


def _lanczos(z):
    # log Gamma(z) for Re z >= 1/2
    z = z - 1
    x = LANCZOS_COEF[0]
    for i in range(1, len(LANCZOS_COEF)):
        x += LANCZOS_COEF[i] / (z + i)
    t = z + LANCZOS_G + 0.5
    return _HALF_LOG_2PI + (z + 0.5) * cmath.log(t) - t + cmath.log(x)


def _log_sin_pi(z):
    # log of sin(pi z) modulo 2 pi i, stable near the integers and for large |Im z|
    n = round(z.real)
    z = complex(z.real - n, z.imag)  # exact; sin(pi z) changes by (-1)^n
    shift = 1j * math.pi if n % 2 else 0.0
    y = z.imag
    if abs(z) < 1e-8:
        # sin(pi z) = pi z to double precision; pi z itself may round if z is subnormal
        return _LOG_PI + cmath.log(z) + shift
    if abs(y) < 20:
        return cmath.log(cmath.sin(math.pi * z)) + shift
    # sin(pi z) = exp(-i pi z) (1 - exp(2 i pi z)) / (-2i) for y > 0; mirror for y < 0
    if y > 0:
        val = -1j * math.pi * z + _log1m(cmath.exp(2j * math.pi * z)) - _LOG2 + 0.5j * math.pi
    else:
        val = 1j * math.pi * z + _log1m(cmath.exp(-2j * math.pi * z)) - _LOG2 - 0.5j * math.pi
    return val + shift


def _log1m(w):
    # log(1 - w) for tiny |w|
    return -w if abs(w) < 1e-17 else cmath.log(1 - w)


def log_gamma(z):
    """Principal branch of ``log Gamma(z)`` for complex ``z``.

    Lanczos approximation for ``Re z >= 1/2``; the reflection formula
    otherwise.  Reflection fixes the value only modulo ``2 pi i``; the branch
    is then chosen to match the argument accumulated by the upward recurrence
    ``Gamma(z) = Gamma(z + n) / (z (z + 1) ... (z + n - 1))``, which is the
    analytic continuation from the positive real axis.  On the negative real
    axis the imaginary part is ``-pi * ceil(-x)`` whatever the sign of zero.
    Raises :class:`PoleError` at nonpositive integers.
    """
    # adding 0j turns a negative zero imaginary part into +0
    z = complex(z) + 0j
    if _is_pole(z):
        raise PoleError(f"log_gamma pole at z={z.real:g}")
    if z.real >= 0.5:
        return _lanczos(z)
    if abs(z) < 1e-3:
        # sin(pi z) loses relative accuracy for tiny and subnormal z
        return _lanczos(1 + z) - cmath.log(z)
    val = _LOG_PI - _log_sin_pi(z) - _lanczos(1 - z)
    n = math.ceil(0.5 - z.real)
    arg = _lanczos(z + n).imag - sum(cmath.phase(z + k) for k in range(n))
    if z.imag == 0:
        arg = -math.pi * math.ceil(-z.real)
    k = round((arg - val.imag) / (2 * math.pi))
    return complex(val.real, val.imag + 2 * math.pi * k)


def gamma(z):
    return cmath.exp(log_gamma(z))


def rgamma(z):
    """``1 / Gamma(z)``; zero at the poles."""
    z = complex(z)
    if _is_pole(z):
        return 0j
    return cmath.exp(-log_gamma(z))


def _series(a, b, c, z, tol=1e-17):
    term = 1 + 0j
    total = 1 + 0j
    n = 0
    while True:
        term *= (a + n) * (b + n) / ((c + n) * (n + 1)) * z
        total += term
        n += 1
        if term == 0 or (abs(term) <= tol * abs(total) and n > 2):
            return total
        if n >= MAX_TERMS:
            raise ConvergenceError(f"2F1 series not converged after {MAX_TERMS} terms")


def hyp2f1(a, b, c, z):
    """Gauss hypergeometric function ``2F1(a, b; c; z)`` for real ``z`` in (-1, 1).

    The Gauss series is summed for ``z <= 1/2``.  Above that the argument is
    mapped to ``1 - z`` with the standard connection formula, except when
    ``c - a - b`` is within ``1e-8`` of an integer (logarithmic case), where the
    series in ``z`` is summed directly.
    """
    a, b, c = complex(a), complex(b), complex(c)
    z = float(z)
    if _is_pole(c):
        raise PoleError(f"2F1 parameter c={c.real:g} is a nonpositive integer")
    if not -1 < z < 1:
        raise ValueError("hyp2f1 needs -1 < z < 1")
    if z == 0:
        return 1 + 0j
    s = c - a - b
    degenerate = abs(s.imag) < 1e-8 and abs(s.real - round(s.real)) < 1e-8
    if z <= 0.5 or degenerate:
        return _series(a, b, c, z)
    w = 1 - z
    lg_c = log_gamma(c)
    first = _connection_coef(lg_c, [s], [c - a, c - b])
    second = _connection_coef(lg_c, [-s], [a, b])
    out = 0j
    if first != 0:
        out += first * _series(a, b, 1 - s, w)
    if second != 0:
        out += second * w**s * _series(c - a, c - b, 1 + s, w)
    return out


def _connection_coef(lg_c, num, den):
    # Gamma(c) prod Gamma(num) / prod Gamma(den), zero when a denominator hits a pole
    if any(_is_pole(complex(d)) for d in den):
        return 0j
    return cmath.exp(lg_c + sum(log_gamma(x) for x in num) - sum(log_gamma(x) for x in den))


def hyp2f1_derivatives(a, b, c, z, order=2):
    """``[F, F', F'', ...]`` with respect to ``z`` via ``F' = (ab/c) 2F1(a+1, b+1; c+1; z)``."""
    out = [hyp2f1(a, b, c, z)]
    coef = 1 + 0j
    for k in range(order):
        coef *= (a + k) * (b + k) / (c + k)
        out.append(coef * hyp2f1(a + k + 1, b + k + 1, c + k + 1, z))
    return out


@dataclass(frozen=True)
class HypParams:
    a: complex
    b: complex
    kappa: float
    t: float
    gamma: float

    @property
    def p(self):
        """Exponent ``1/2 - a - b`` of the second Frobenius solution at 0."""
        return (0.5 - self.a - self.b).real


def hyp_params(p):
    g = gamma_exponent(p)
    root = cmath.sqrt(1 - 2 * p.t * p.kappa)
    a = g - 1 / p.kappa - root / p.kappa
    b = g - 1 / p.kappa + root / p.kappa
    return HypParams(a, b, p.kappa, p.t, g)


def _check_gamma_args(*args):
    for z in args:
        if _is_pole(complex(z), tol=1e-13):
            raise PoleError(f"Gamma argument {complex(z)} is a nonpositive integer")


@dataclass(frozen=True)
class HypSolution:
    """Boundary solutions ``g1``, ``g2`` and the regular combination ``g3 = g1 - C g2``.

    Evaluators return ``[g, g', g'']`` in ``x``; ``g3`` is real, with the
    imaginary residue of the complex arithmetic dropped.  ``g3`` is also the
    solution regular at ``x = 4``, ``g3(4) 2F1(a, b; 1/2; 1 - x/4)``; that form
    is used on ``[2, 4]`` and beyond, where ``g1 - C g2`` cancels badly.
    """

    params: HypParams
    C: float
    g3_at_4: float

    def g1(self, x, order=2):
        a, b = self.params.a, self.params.b
        f = hyp2f1_derivatives(a, b, 0.5 + a + b, x / 4, order)
        return [fk / 4**k for k, fk in enumerate(f)]

    def g2(self, x, order=2):
        a, b = self.params.a, self.params.b
        p = 0.5 - a - b
        f = hyp2f1_derivatives(0.5 - a, 0.5 - b, 1.5 - a - b, x / 4, order)
        f = [fk / 4**k for k, fk in enumerate(f)]
        if x == 0:
            if order == 0:
                return [1 + 0j if p == 0 else 0j]
            raise ValueError("g2 derivatives are singular at x = 0")
        xp = x**p
        out = [xp * f[0]]
        if order >= 1:
            out.append(p * x ** (p - 1) * f[0] + xp * f[1])
        if order >= 2:
            out.append(p * (p - 1) * x ** (p - 2) * f[0] + 2 * p * x ** (p - 1) * f[1] + xp * f[2])
        return out

    def _g3_regular(self, x, order):
        # g3(x) = g3(4) 2F1(a, b; 1/2; 1 - x/4)
        a, b = self.params.a, self.params.b
        f = hyp2f1_derivatives(a, b, 0.5, 1 - x / 4, order)
        return [(self.g3_at_4 * fk * (-0.25) ** k).real for k, fk in enumerate(f)]

    def g3(self, x, order=2):
        """``[g3, g3', g3'']`` at ``x``; ``x`` may slightly exceed 4."""
        x = float(x)
        if x >= 4 or (x >= 2 and self.g3_at_4 != 0):
            return self._g3_regular(x, order)
        if x == 0:
            if order:
                raise ValueError("g3 derivatives are singular at x = 0")
            return [1.0]
        u = self.g1(x, order)
        v = self.g2(x, order)
        return [(uk - self.C * vk).real for uk, vk in zip(u, v)]

    def __call__(self, x):
        return self.g3(x, order=0)[0]


def mixing_constant(hp):
    """``C = G(1/2+a+b) G(1/2-a) G(1/2-b) / (2^(1-2a-2b) G(a) G(b) G(3/2-a-b))``.

    Poles in the numerator raise :class:`PoleError`.  A pole in the
    denominator is not regularised: ``1/Gamma`` vanishes there exactly and so
    does ``C`` (this happens at ``t = 0``, where ``b = 0`` and ``g3 = 1``).
    """
    a, b = hp.a, hp.b
    _check_gamma_args(0.5 + a + b, 0.5 - a, 0.5 - b)
    log_num = (
        log_gamma(0.5 + a + b) + log_gamma(0.5 - a) + log_gamma(0.5 - b)
        - (1 - 2 * a - 2 * b) * math.log(2)
    )
    val = cmath.exp(log_num) * rgamma(a) * rgamma(b) * rgamma(1.5 - a - b)
    return _real_or_raise(val, "C")


def g3_at_4_closed_form(p):
    """``pi^(-3/2) G(1/2+a+b) cos(pi(a+b)) G(1/2-a) G(1/2-b)``; positive under the condition."""
    _require_condition(p)
    hp = hyp_params(p)
    a, b = hp.a, hp.b
    _check_gamma_args(0.5 + a + b, 0.5 - a, 0.5 - b)
    s = (a + b).real
    c = math.cos(math.pi * s)
    if c == 0 or abs(s - 0.5) < 1e-15:
        return 0.0
    val = cmath.exp(log_gamma(0.5 + a + b) + log_gamma(0.5 - a) + log_gamma(0.5 - b)) * c
    return _real_or_raise(val * math.pi**-1.5, "g3(4)")


def _real_or_raise(val, name, tol=1e-10):
    if abs(val.imag) > tol * max(1.0, abs(val.real)):
        raise ArithmeticError(f"{name} has imaginary part {val.imag:.3e}")
    return val.real


def _require_condition(p):
    if p.t > t_star(p.kappa):
        raise ConditionError(
            f"t={p.t} > 3(4+kappa)^2/(32 kappa)={t_star(p.kappa)}: "
            "no bounded positive boundary solution"
        )


def positivity_limit(kappa):
    """Smallest ``t`` at which ``1/2 - b >= 0``, namely ``-(4+kappa)^2 (8+kappa) / 128``.

    For real ``a, b`` (``t <= 1/(2 kappa)``) the factor ``Gamma(1/2 - b)`` in
    ``g3(4)`` is positive only above this value; below it ``g3(4) < 0`` and
    ``g3`` changes sign.  The limit lies below ``t_tip(kappa)`` for every
    ``kappa > 0``.
    """
    return -((4 + kappa) ** 2) * (8 + kappa) / 128


def boundary_solutions(p):
    _require_condition(p)
    hp = hyp_params(p)
    return HypSolution(hp, mixing_constant(hp), g3_at_4_closed_form(p))


def boundary_operator(kappa, gamma_, x, g, dg, d2g):
    """Left side of the boundary ODE for given values ``g, g', g''`` at ``x``."""
    return (
        gamma_ * (2 + kappa) * g
        + (8 - 2 * x + kappa * (x - 2) + 2 * gamma_ * kappa * (x - 4)) * dg
        + kappa * (x - 4) * x * d2g
    )


def boundary_ode_residual(sol, x):
    """Boundary ODE applied to ``g3`` at interior ``x``, divided by ``max(|g3|, 1)``."""
    if not 0 < x < 4:
        raise ValueError("x must lie strictly inside (0, 4)")
    g, dg, d2g = sol.g3(x)
    hp = sol.params
    res = boundary_operator(hp.kappa, hp.gamma, x, g, dg, d2g)
    return res / max(abs(g), 1.0)
