"""Monte Carlo moments of ``|f'|`` and log-log slope fits.

Each trajectory yields the compensated value ``X = log|f_s'(z0)| - s``, whose
law approximates that of ``log|F'(z0)|`` for the stationary whole-plane map.
Moments ``E exp(t X)`` are accumulated in log space.

Common random numbers are used throughout: path ``i`` draws from substream
``i`` at every angle and every scale, so differences between angles and
scales are much less noisy than the estimates themselves.
"""

from dataclasses import dataclass
import math

import numpy as np

from .errors import DomainError, MomentOverflowError, OverflowDominatedError, ScalesError
from .loewner import HORIZON, simulate_paths

#: Largest ``t * X`` kept for negative ``t``; larger values are capped and counted.
CAP = 30.0
#: Largest fraction of capped evaluations tolerated before an estimate is rejected.
MAX_CAPPED_FRACTION = 0.01
_EXP_LIMIT = 700.0


@dataclass(frozen=True)
class PointMoment:
    theta: float

    name = "point"


@dataclass(frozen=True)
class WholeIntegral:
    name = "whole"


@dataclass(frozen=True)
class BulkIntegral:
    theta_min: float = math.pi / 4

    name = "bulk"


def parse_variant(name, theta=None, theta_min=math.pi / 4):
    """Variant object from its name (``"point"``, ``"whole"`` or ``"bulk"``)."""
    if name == "point":
        if theta is None:
            raise DomainError("point variant needs theta")
        return PointMoment(float(theta))
    if name == "whole":
        return WholeIntegral()
    if name == "bulk":
        return BulkIntegral(float(theta_min))
    raise DomainError(f"unknown variant {name!r}")


class LogMeanAccumulator:
    """Running ``sum exp(x)`` and ``sum exp(2x)`` kept as ``exp(m) * s``.

    ``m`` is the largest value seen so far; ``s1, s2`` are the sums of
    ``exp(x - m)`` and ``exp(2(x - m))``.  Values are consumed in the order
    given, so the result is a deterministic function of that order.
    """

    def __init__(self):
        self.m = -math.inf
        self.s1 = 0.0
        self.s2 = 0.0
        self.n = 0

    def add(self, x):
        x = np.asarray(x, dtype=float).ravel()
        if x.size == 0:
            return self
        if not np.all(np.isfinite(x)):
            raise DomainError("log values must be finite")
        m = max(self.m, float(x.max()))
        if m > self.m and self.n:
            scale = math.exp(self.m - m)
            self.s1 *= scale
            self.s2 *= scale * scale
        self.m = m
        e = np.exp(x - m)
        self.s1 += float(np.sum(e))
        self.s2 += float(np.sum(e * e))
        self.n += x.size
        return self

    @property
    def log_mean(self):
        return self.m + math.log(self.s1 / self.n)

    def mean_and_stderr(self):
        """Sample mean of ``exp(x)`` and its standard error."""
        if self.n < 2:
            raise DomainError("need at least two samples")
        if self.log_mean > _EXP_LIMIT:
            raise MomentOverflowError(f"log of the mean is {self.log_mean:.1f}")
        a = self.s1 / self.n
        var = max(self.s2 / self.n - a * a, 0.0) * self.n / (self.n - 1)
        scale = math.exp(self.m)
        return scale * a, scale * math.sqrt(var / self.n)


@dataclass(frozen=True)
class MomentEstimate:
    """Monte Carlo estimate of ``E|f'|^t`` at one point or integrated over angle.

    ``n_paths`` counts independent samples; for integrated variants each
    sample is one path's weighted sum over all angle nodes.
    """

    r: float
    t: float
    mean: float
    stderr: float
    n_paths: int
    variant: object
    n_capped: int = 0
    n_horizon: int = 0
    n_evaluations: int = 0

    def __post_init__(self):
        if not self.stderr >= 0:
            raise DomainError("stderr must be nonnegative")
        if not math.isfinite(self.mean):
            raise DomainError("mean must be finite")
        if self.n_paths < 2:
            raise DomainError("an estimate needs at least two paths")

    @property
    def capped_fraction(self):
        return self.n_capped / max(self.n_evaluations, 1)


def _log_weights(t, comp):
    x = t * comp
    capped = np.zeros(x.shape, dtype=bool)
    if t < 0:
        capped = x > CAP
        x = np.where(capped, CAP, x)
    return x, capped


def _simulate(r, thetas, n, cfg, mirror=False):
    # all angles share path indices 0..n-1
    k = len(thetas)
    z0 = (r * np.exp(1j * np.asarray(thetas, dtype=float)))[:, None] * np.ones(n)
    idx = np.tile(np.arange(n), k)
    out = simulate_paths(z0.ravel(), cfg, idx, mirror=np.full(k * n, mirror))
    return out.compensated.reshape(k, n), int(np.sum(out.status == HORIZON))


def _check_capped(n_capped, n_eval, max_capped):
    if n_eval and n_capped / n_eval > max_capped:
        raise OverflowDominatedError(
            f"{n_capped} of {n_eval} evaluations capped at t*X={CAP}"
        )


def point_moment(p, r, theta, cfg, *, mirror=False, max_capped=MAX_CAPPED_FRACTION):
    """``E exp(t X)`` for trajectories launched at ``r e^{i theta}``.

    ``mirror=True`` flips the sign of every driver increment, which maps the
    trajectory from ``theta`` onto the reflection of the one from ``-theta``.
    """
    if not r > 1:
        raise DomainError("r must exceed 1")
    n = cfg.n_paths
    if n < 2:
        raise DomainError("need at least two paths")
    variant = PointMoment(float(theta))
    if p.t == 0:
        return MomentEstimate(r, 0.0, 1.0, 0.0, n, variant)
    comp, n_hor = _simulate(r, [theta], n, cfg, mirror)
    x, capped = _log_weights(p.t, comp[0])
    _check_capped(int(capped.sum()), n, max_capped)
    mean, se = LogMeanAccumulator().add(x).mean_and_stderr()
    return MomentEstimate(r, p.t, mean, se, n, variant, int(capped.sum()), n_hor, n)


def theta_grid(r, variant, density=1):
    """Angle nodes on ``[0, pi]`` and trapezoid weights for the integrated variants.

    The whole-circle grid starts at 0, grows geometrically from ``r - 1`` by
    factors ``2^(1/(2 density))`` up to ``pi/4``, then continues uniformly to
    ``pi``.  The bulk grid is uniform on ``[theta_min, pi]``.  Weights sum to
    the length of the interval; doubling ``density`` roughly doubles the
    number of nodes.
    """
    n_uniform = 12 * density + 1
    if isinstance(variant, WholeIntegral):
        h = r - 1
        top = math.pi / 4
        if h < top:
            k = math.floor(2 * density * math.log2(top / h))
            geo = h * 2.0 ** (np.arange(k + 1) / (2 * density))
            geo = geo[geo < top * (1 - 1e-9)]
        else:
            geo = np.empty(0)
        nodes = np.concatenate([[0.0], geo, np.linspace(top, math.pi, n_uniform)])
    elif isinstance(variant, BulkIntegral):
        if not 0 < variant.theta_min < math.pi:
            raise DomainError("theta_min must lie in (0, pi)")
        nodes = np.linspace(variant.theta_min, math.pi, n_uniform)
    else:
        raise DomainError(f"no grid for variant {variant!r}")
    gaps = np.diff(nodes)
    w = np.zeros_like(nodes)
    w[:-1] += gaps / 2
    w[1:] += gaps / 2
    return nodes, w


def integrated_moment(p, r, variant, cfg, *, density=1, max_capped=MAX_CAPPED_FRACTION):
    """``E int |f'(r e^{i theta})|^t d theta`` over the circle or its bulk.

    The integrand is even in ``theta`` in distribution, so the integral over
    ``[0, pi]`` is doubled.  ``cfg.n_paths`` is the total budget; each node gets
    ``n_paths // n_nodes`` paths and path ``i`` carries the same substream at
    every node.
    """
    if not r > 1:
        raise DomainError("r must exceed 1")
    nodes, w = theta_grid(r, variant, density)
    w = 2 * w
    n = cfg.n_paths // len(nodes)
    if n < 2:
        raise DomainError(f"n_paths={cfg.n_paths} too small for {len(nodes)} angle nodes")
    if p.t == 0:
        return MomentEstimate(r, 0.0, float(np.sum(w)), 0.0, n, variant)
    comp, n_hor = _simulate(r, nodes, n, cfg)
    x, capped = _log_weights(p.t, comp)
    _check_capped(int(capped.sum()), capped.size, max_capped)
    # per-path integral in log space: log sum_j w_j exp(x_ij)
    y = x + np.log(w)[:, None]
    top = y.max(axis=0)
    per_path = top + np.log(np.sum(np.exp(y - top), axis=0))
    mean, se = LogMeanAccumulator().add(per_path).mean_and_stderr()
    return MomentEstimate(r, p.t, mean, se, n, variant, int(capped.sum()), n_hor, capped.size)


@dataclass(frozen=True)
class SlopeFit:
    """Weighted least-squares slope of ``log mean`` against ``-log(r - 1)``."""

    scales: tuple
    estimates: tuple
    slope: float
    slope_stderr: float
    intercept: float

    def __post_init__(self):
        if len(self.scales) < 3:
            raise ScalesError("a slope fit needs at least three scales")
        if any(b >= a for a, b in zip(self.scales, self.scales[1:])):
            raise ScalesError("scales must be strictly decreasing")


def weighted_slope(x, y, sigma):
    """Slope, its standard error and the intercept of a weighted linear fit.

    ``sigma`` are per-point standard deviations of ``y``.  When any of them is
    zero the fit is unweighted and the slope error comes from the residuals.
    """
    x, y, sigma = (np.asarray(v, dtype=float) for v in (x, y, sigma))
    if np.all(sigma > 0):
        w = 1 / sigma**2
    else:
        w = np.ones_like(x)
    sw = w.sum()
    xm = (w * x).sum() / sw
    ym = (w * y).sum() / sw
    sxx = (w * (x - xm) ** 2).sum()
    slope = (w * (x - xm) * (y - ym)).sum() / sxx
    intercept = ym - slope * xm
    if np.all(sigma > 0):
        err = math.sqrt(1 / sxx)
    else:
        res = y - intercept - slope * x
        dof = max(len(x) - 2, 1)
        err = math.sqrt((res**2).sum() / dof / sxx)
    return float(slope), float(err), float(intercept)


def fit_spectrum_slope(p, variant, scales, cfg, *, density=1):
    """Empirical spectrum: slope of ``log E int |f'|^t`` against ``-log(r - 1)``.

    ``scales`` are values of ``r - 1``, strictly decreasing, at least three.
    Point variants fit the point moment instead of the integral.
    """
    scales = tuple(float(h) for h in scales)
    if len(scales) < 3:
        raise ScalesError("a slope fit needs at least three scales")
    if any(b >= a for a, b in zip(scales, scales[1:])) or min(scales) <= 0:
        raise ScalesError("scales must be positive and strictly decreasing")
    est = []
    for h in scales:
        if isinstance(variant, PointMoment):
            est.append(point_moment(p, 1 + h, variant.theta, cfg))
        else:
            est.append(integrated_moment(p, 1 + h, variant, cfg, density=density))
    x = -np.log(scales)
    y = np.log([e.mean for e in est])
    sigma = np.array([e.stderr / e.mean for e in est])
    slope, err, icpt = weighted_slope(x, y, sigma)
    return SlopeFit(scales, tuple(est), slope, err, icpt)


def dyadic_scales(k_first, k_last):
    """``r - 1 = 2^-k`` for ``k = k_first..k_last``."""
    if k_last < k_first:
        raise ScalesError("empty scale range")
    return [2.0**-k for k in range(k_first, k_last + 1)]
