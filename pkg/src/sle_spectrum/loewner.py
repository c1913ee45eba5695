"""Reverse radial Loewner flow and the SDE for ``(r, theta, log|f'|)``.

Coordinates follow the driver: a point is tracked as ``z = f_s(z0) / xi_s``
so the driving point always sits at ``z = 1`` (``theta = 0``).  In these
coordinates the state obeys

    d log|f'| = A(r, theta) ds
    dr        = r (r^2 - 1) / D ds
    dtheta    = -2 r sin(theta) / D ds - sqrt(kappa) dB

with ``D = r^2 - 2 r cos(theta) + 1 = |z - 1|^2``.

Two integrators are provided.  ``"exact"`` freezes the driver over each step
and applies the closed-form flow of the frozen-driver ODE, which is the
Loewner chain of a piecewise-constant driver; it has no stiffness near the
driving point.  ``"euler"`` is the Euler-Maruyama discretisation of the system
above.  Both refine the step near the driving point, where the drift varies
on the length scale ``sqrt(D)``.
"""

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
import warnings

import numpy as np

from . import rng
from .errors import BlowUpError, DomainError, HorizonWarning, StepSizeError

RUNNING, STOPPED, HORIZON = 0, 1, 2


@dataclass(frozen=True)
class DriverSpec:
    """Driving process on the unit circle, as an angle process.

    kind is ``"brownian"`` (speed ``sqrt(kappa)``), ``"stable"`` (symmetric
    ``index``-stable with the given ``scale``) or ``"deterministic"``
    (constant angle).
    """

    kind: str
    kappa: float = 0.0
    index: float = 2.0
    scale: float = 1.0
    angle: float = 0.0

    def __post_init__(self):
        if self.kind not in ("brownian", "stable", "deterministic"):
            raise DomainError(f"unknown driver kind {self.kind!r}")
        if self.kind == "brownian" and not self.kappa > 0:
            raise DomainError("Brownian driver needs kappa > 0")
        if self.kind == "stable" and not 0 < self.index < 2:
            raise DomainError("stable index must lie in (0, 2)")

    @classmethod
    def brownian(cls, kappa):
        return cls("brownian", kappa=float(kappa))

    @classmethod
    def stable(cls, index, scale=1.0):
        return cls("stable", index=float(index), scale=float(scale))

    @classmethod
    def deterministic(cls, angle=0.0):
        return cls("deterministic", angle=float(angle))


@dataclass(frozen=True)
class McConfig:
    """Monte Carlo and integrator settings.

    ``dt`` is the largest step; it is rounded down to a power of two so that
    all steps live on one dyadic time grid.  Near the driving point the step
    is further limited to ``refine * |z - 1|^2``.
    """

    driver: DriverSpec
    dt: float = 2.0**-5
    n_paths: int = 10_000
    master_seed: int = 0
    r_stop: float = 50.0
    s_max: float = 10.0
    scheme: str = "exact"
    refine: float = 0.02
    chunk_size: int = 16384
    workers: int = 1

    def __post_init__(self):
        if not self.dt > 0:
            raise DomainError("dt must be positive")
        if self.n_paths < 1:
            raise DomainError("n_paths must be at least 1")
        if not self.r_stop > 2:
            raise DomainError("r_stop must exceed 2")
        if not self.s_max >= 0:
            raise DomainError("s_max must be nonnegative")
        if self.scheme not in ("exact", "euler"):
            raise DomainError(f"unknown scheme {self.scheme!r}")
        if not self.refine > 0:
            raise DomainError("refine must be positive")

    @property
    def base_level(self):
        return max(0, math.ceil(-math.log2(self.dt)))

    def with_(self, **kw):
        return replace(self, **kw)


@dataclass
class PathState:
    """One trajectory in driver coordinates."""

    s: float
    r: float
    theta: float
    logd: float = 0.0


def wrap_angle(theta):
    """Map angles to (-pi, pi]."""
    out = np.pi - np.mod(np.pi - np.asarray(theta, dtype=float), 2 * np.pi)
    return out if np.ndim(out) else float(out)


def drift_terms(r, theta):
    """Drifts ``(dlogd, dr, dtheta)`` of the flow at ``r e^{i theta}``, ``r > 1``."""
    c = np.cos(theta)
    d = r * r - 2 * r * c + 1
    dlogd = (r**4 + 4 * r * r * (1 - r * c) - 1) / (d * d)
    dr = r * (r * r - 1) / d
    dtheta = -2 * r * np.sin(theta) / d
    return dlogd, dr, dtheta


def step(state, cfg, noise, dt=None):
    """One Euler-Maruyama step of the ``(r, theta, log|f'|)`` system.

    ``noise`` is the angle increment contributed by the driver (for the
    Brownian driver, ``-sqrt(kappa) * N(0, 1) * sqrt(dt)``).
    """
    h = cfg.dt if dt is None else dt
    if h == 0:
        return PathState(state.s, state.r, state.theta, state.logd)
    dlogd, dr, dth = drift_terms(state.r, state.theta)
    r = state.r + dr * h
    if not r > 1:
        raise StepSizeError(f"step left the exterior of the disc (r={r})")
    theta = wrap_angle(state.theta + dth * h + noise)
    return PathState(state.s + h, float(r), float(theta), state.logd + dlogd * h)


def frozen_flow(z, dt):
    """Exact flow of ``dz/ds = z (z + 1)/(z - 1)`` over time ``dt``.

    Uses the first integral ``(z + 1)^2 / z = const * e^s``.  Returns the new
    point and the increment of ``log|dz_s/dz_0|``.
    """
    w = z - 1.0
    km4 = np.exp(dt) * (w * w) / z + 4.0 * np.expm1(dt)
    k = km4 + 4.0
    root = np.sqrt(km4 * k)
    # pick the root outside the unit disc
    flip = (np.conj(k - 2.0) * root).real < 0
    root = np.where(flip, -root, root)
    w1 = 0.5 * (km4 + root)
    z1 = 1.0 + w1
    dlog = (
        dt
        + np.log(np.abs(w)) + np.log(np.abs(z + 1.0)) - 2.0 * np.log(np.abs(z))
        - np.log(np.abs(w1)) - np.log(np.abs(z1 + 1.0)) + 2.0 * np.log(np.abs(z1))
    )
    return z1, dlog


def _euler_flow(z, dt):
    r = np.abs(z)
    th = np.angle(z)
    dlogd, dr, dth = drift_terms(r, th)
    r1 = r + dr * dt
    if np.any(r1 <= 1):
        raise StepSizeError("Euler step left the exterior of the disc")
    return r1 * np.exp(1j * (th + dth * dt)), dlogd * dt


def _stable_noise(keys, level, ticks, driver):
    a = driver.index
    idx = ticks >> (rng.MAX_LEVEL - level)
    v = np.pi * (rng.uniforms(keys, level, idx, 3) - 0.5)
    e = -np.log(rng.uniforms(keys, level, idx, 4))
    x = np.sin(a * v) / np.cos(v) ** (1 / a) * (np.cos((1 - a) * v) / e) ** ((1 - a) / a)
    return driver.scale * np.exp2(-level / a) * x


@dataclass
class PathBatch:
    """Final states of a batch of trajectories."""

    z: np.ndarray
    logd: np.ndarray
    s: np.ndarray
    status: np.ndarray
    n_steps: np.ndarray
    trace: list = field(default_factory=list)

    @property
    def compensated(self):
        return self.logd - self.s


def _run_chunk(z0, keys, sign, cfg, s_max, r_stop, record):
    n = z0.shape[0]
    z = z0.astype(complex)
    logd = np.zeros(n)
    ticks = np.zeros(n, dtype=np.int64)
    status = np.zeros(n, dtype=np.int8)
    n_steps = np.zeros(n, dtype=np.int64)
    L = rng.MAX_LEVEL
    t_max = int(round(s_max * 2.0**L))
    base = cfg.base_level
    kind = cfg.driver.kind
    sqk = math.sqrt(cfg.driver.kappa) if kind == "brownian" else 0.0
    flow = frozen_flow if cfg.scheme == "exact" else _euler_flow

    done = np.abs(z) >= r_stop
    status[done] = STOPPED
    if t_max == 0:
        status[~done] = HORIZON
        done[:] = True
    act = np.flatnonzero(~done)
    zc, lc, tc, sg = z[act], logd[act], ticks[act], sign[act]
    nc = np.zeros(act.size, dtype=np.int64)
    bm = rng.DyadicBrownian(keys[act]) if kind == "brownian" else None
    kc = keys[act]
    trace = []
    while act.size:
        d = np.abs(zc - 1.0) ** 2
        want = np.minimum(cfg.dt, cfg.refine * d)
        lev = np.ceil(-np.log2(want)).astype(np.int64)
        lev = np.clip(lev, base, L - 1)
        rem = t_max - tc
        lev = np.maximum(lev, L - np.floor(np.log2(rem.astype(float))).astype(np.int64))
        lev = np.maximum(lev, rng.alignment_level(tc))
        h = np.exp2(-lev.astype(float))
        if kind == "brownian" and cfg.scheme == "exact":
            # symmetric split: half the driver increment on each side of the flow
            zc = zc * np.exp(-1j * sqk * sg * bm.advance(lev + 1))
            zc, dl = flow(zc, h)
            noise = -sqk * bm.advance(lev + 1)
        else:
            zc, dl = flow(zc, h)
            if kind == "brownian":
                noise = -sqk * bm.advance(lev)
            elif kind == "stable":
                noise = -_stable_noise(kc, lev, tc, cfg.driver)
            else:
                noise = None
        lc = lc + dl
        if noise is not None:
            zc = zc * np.exp(1j * (sg * noise))
        tc = tc + (np.int64(1) << (L - lev))
        nc += 1
        if record:
            trace.append((act.copy(), tc * 2.0**-L, np.abs(zc), np.angle(zc), lc.copy()))
        stop = np.abs(zc) >= r_stop
        horizon = tc >= t_max
        fin = stop | horizon
        if np.any(fin):
            idx = act[fin]
            z[idx], logd[idx], ticks[idx], n_steps[idx] = zc[fin], lc[fin], tc[fin], nc[fin]
            status[idx] = np.where(stop[fin], STOPPED, HORIZON)
            keep = ~fin
            act = act[keep]
            zc, lc, tc, sg, nc, kc = zc[keep], lc[keep], tc[keep], sg[keep], nc[keep], kc[keep]
            if bm is not None:
                bm.take(np.flatnonzero(keep))
    return PathBatch(z, logd, ticks * 2.0**-L, status, n_steps, trace)


def simulate_paths(z0, cfg, path_index, *, mirror=None, s_max=None, r_stop=None, record=False):
    """Integrate trajectories from driver-frame starting points ``z0``.

    ``path_index[i]`` selects the random substream of trajectory ``i``;
    ``mirror[i]`` flips the sign of its driver noise.  Work is split into
    fixed-size chunks that are processed independently, so results do not
    depend on ``cfg.workers``.
    """
    z0 = np.atleast_1d(np.asarray(z0, dtype=complex))
    if np.any(np.abs(z0) <= 1):
        raise DomainError("starting points must lie outside the unit disc")
    keys = rng.path_keys(cfg.master_seed, np.broadcast_to(path_index, z0.shape))
    sign = np.ones(z0.shape)
    if mirror is not None:
        sign = np.where(np.broadcast_to(mirror, z0.shape), -1.0, 1.0)
    s_max = cfg.s_max if s_max is None else s_max
    r_stop = cfg.r_stop if r_stop is None else r_stop
    size = max(1, cfg.chunk_size)
    bounds = [(i, min(i + size, z0.size)) for i in range(0, z0.size, size)]

    def work(b):
        lo, hi = b
        return _run_chunk(z0[lo:hi], keys[lo:hi], sign[lo:hi], cfg, s_max, r_stop, record)

    if cfg.workers > 1 and len(bounds) > 1:
        with ThreadPoolExecutor(cfg.workers) as pool:
            parts = list(pool.map(work, bounds))
    else:
        parts = [work(b) for b in bounds]
    trace = []
    for (lo, _), p in zip(bounds, parts):
        trace.extend((rows + lo, *rest) for rows, *rest in p.trace)
    return PathBatch(
        np.concatenate([p.z for p in parts]),
        np.concatenate([p.logd for p in parts]),
        np.concatenate([p.s for p in parts]),
        np.concatenate([p.status for p in parts]),
        np.concatenate([p.n_steps for p in parts]),
        trace,
    )


def simulate_compensated_path(z0, cfg, substream=0):
    """Compensated value ``log|f_s'(z0)| - s`` for one trajectory.

    ``z0 = (r0, theta0)`` in driver coordinates.  The trajectory stops when
    ``r >= cfg.r_stop`` (the remaining drift of ``log|f'| - s`` is
    ``O(r^-2)``) or at ``s = cfg.s_max``; the latter raises a
    :class:`HorizonWarning` because the value then carries a larger bias.
    """
    r0, th0 = z0
    if not r0 > 1:
        raise DomainError("r0 must exceed 1")
    out = simulate_paths(np.array([r0 * np.exp(1j * th0)]), cfg, [substream])
    if out.status[0] == HORIZON and cfg.s_max > 0:
        warnings.warn(f"horizon s_max={cfg.s_max} reached with r={abs(out.z[0]):.3g}", HorizonWarning)
    return float(out.compensated[0])


def hull_point_cloud(cfg, T, n_boundary, eps):
    """Snapshot of the reverse flow ``f_T`` on the circle ``|z| = 1 + eps``.

    All points share one driving path (substream 0 of ``cfg.master_seed``);
    steps are fixed at ``cfg.dt`` rounded to a power of two, with a shorter
    final step to land on ``T``.  Returns ``(points, absorbed)`` where
    ``absorbed`` flags trajectories that came within ``1e-9`` of the driving
    point; their entries are NaN.
    """
    if not eps > 0:
        raise DomainError("eps must be positive")
    if not T >= 0:
        raise DomainError("T must be nonnegative")
    theta = 2 * np.pi * np.arange(n_boundary) / n_boundary
    f = (1 + eps) * np.exp(1j * theta)
    absorbed = np.zeros(n_boundary, dtype=bool)
    drv = cfg.driver
    angle = drv.angle if drv.kind == "deterministic" else 0.0
    L = rng.MAX_LEVEL
    t_max = int(round(T * 2.0**L))
    ticks = 0
    base = cfg.base_level
    keys = rng.path_keys(cfg.master_seed, [0])
    bm = rng.DyadicBrownian(keys)
    sqk = math.sqrt(drv.kappa) if drv.kind == "brownian" else 0.0
    while ticks < t_max:
        lev = max(base, L - int(math.floor(math.log2(t_max - ticks))), int(rng.alignment_level(ticks)))
        h = 2.0**-lev
        xi = np.exp(1j * angle)
        live = ~absorbed
        u = f[live] / xi
        near = np.abs(u - 1.0) < 1e-9
        if np.any(near):
            idx = np.flatnonzero(live)[near]
            absorbed[idx] = True
            f[idx] = np.nan
            live = ~absorbed
            u = f[live] / xi
        u1, _ = frozen_flow(u, h)
        f[live] = u1 * xi
        if drv.kind == "brownian":
            angle += sqk * float(bm.advance(np.array([lev]))[0])
        elif drv.kind == "stable":
            angle += float(_stable_noise(keys, np.array([lev]), np.array([ticks]), drv)[0])
        ticks += 1 << (L - lev)
    if absorbed.mean() > 0.1:
        raise BlowUpError(f"{absorbed.sum()} of {n_boundary} points absorbed")
    return f, absorbed
