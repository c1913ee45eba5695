"""Counter-based random numbers and a time-indexed Brownian driver.

Every random number is a pure function of ``(master_seed, path_index, level,
interval_index, lane)``.  Nothing is drawn from a sequential stream, so the
result of a simulation does not depend on the order in which paths are
processed, on how they are chunked, or on the number of worker threads.

The hash is the SplitMix64 finalizer (Steele, Lea & Flood, "Fast splittable
pseudorandom number generators", OOPSLA 2014) applied twice per draw.

Brownian increments are produced by the Levy bridge construction on dyadic
intervals: the increment over ``[k 2^-m, (k+1) 2^-m]`` is derived from its
parent interval's increment plus one fresh normal.  The driving path is thus a
fixed function of time; refining the step size refines the same path.
"""

import numpy as np

_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_MUL1 = np.uint64(0xBF58476D1CE4E5B9)
_MUL2 = np.uint64(0x94D049BB133111EB)
_LEVEL_MUL = np.uint64(0xD1B54A32D192ED03)
_LANE_MUL = np.uint64(0x8CB92BA72F3D8DD7)
_S30 = np.uint64(30)
_S27 = np.uint64(27)
_S31 = np.uint64(31)
_S11 = np.uint64(11)

#: Finest dyadic level; one tick of simulated time is ``2**-MAX_LEVEL``.
MAX_LEVEL = 40

_TWO_PI = 2.0 * np.pi


def mix64(x):
    """SplitMix64 finalizer; a bijection on uint64 (array in, array out)."""
    x = np.asarray(x, dtype=np.uint64)
    with np.errstate(over="ignore"):
        z = x + _GOLDEN
        z = (z ^ (z >> _S30)) * _MUL1
        z = (z ^ (z >> _S27)) * _MUL2
    return z ^ (z >> _S31)


def path_keys(master_seed, path_index):
    """Per-path substream keys derived from ``(master_seed, path_index)``."""
    seed = np.asarray([int(master_seed) & 0xFFFFFFFFFFFFFFFF], dtype=np.uint64)
    idx = np.asarray(path_index, dtype=np.uint64)
    with np.errstate(over="ignore"):
        return mix64(mix64(seed) + idx * _GOLDEN)


def _bits(keys, level, index, lane):
    with np.errstate(over="ignore"):
        lv = np.asarray(level, dtype=np.uint64)
        head = mix64(keys + lv * _LEVEL_MUL + np.uint64(lane) * _LANE_MUL)
        return mix64(head + np.asarray(index, dtype=np.uint64) * _GOLDEN)


def uniforms(keys, level, index, lane=0):
    """Uniform variates on the open interval (0, 1), 53 bits of resolution."""
    b = _bits(keys, level, index, lane) >> _S11
    return (b.astype(np.float64) + 0.5) * 2.0**-53


def normals(keys, level, index):
    """Standard normal variates by the Box-Muller transform (cosine branch)."""
    u1 = uniforms(keys, level, index, 0)
    u2 = uniforms(keys, level, index, 1)
    return np.sqrt(-2.0 * np.log(u1)) * np.cos(_TWO_PI * u2)


def exponentials(keys, level, index, lane=2):
    """Unit-rate exponential variates by inversion."""
    return -np.log(uniforms(keys, level, index, lane))


def alignment_level(ticks):
    """Coarsest dyadic level at which each tick count is a grid point.

    ``ticks == 0`` is aligned at level 0.
    """
    ticks = np.asarray(ticks, dtype=np.int64)
    low = ticks & -ticks
    out = np.zeros(ticks.shape, dtype=np.int64)
    nz = low != 0
    out[nz] = MAX_LEVEL - np.log2(low[nz].astype(np.float64)).astype(np.int64)
    return np.maximum(out, 0)


class DyadicBrownian:
    """Standard Brownian paths, one per key, sampled on dyadic intervals.

    The caller advances each path by one interval at a time with
    :meth:`advance`, choosing a level ``m`` per path; the interval is
    ``[s, s + 2**-m]`` where ``s`` is the path's current time.  ``s`` must be
    a grid point of level ``m`` (guaranteed when ``m >= alignment_level(s)``).

    Internally each path keeps the increments of every ancestor interval of
    the interval it last consumed, so an advance costs one fresh normal per
    level that actually changes.
    """

    def __init__(self, keys):
        self.keys = np.asarray(keys, dtype=np.uint64).copy()
        n = self.keys.shape[0]
        self.ticks = np.zeros(n, dtype=np.int64)
        self.inc = np.zeros((n, MAX_LEVEL + 1), dtype=np.float64)

    def __len__(self):
        return self.keys.shape[0]

    def take(self, rows):
        """Keep only the given rows (used to compact finished paths)."""
        self.keys = self.keys[rows]
        self.ticks = self.ticks[rows]
        self.inc = self.inc[rows]

    def advance(self, level):
        """Advance every path by ``2**-level[i]``; return the increments."""
        level = np.asarray(level, dtype=np.int64)
        start = self.ticks
        n = start.shape[0]
        align = alignment_level(start)
        if np.any(level < align) or np.any(level > MAX_LEVEL):
            raise ValueError("interval not aligned with the dyadic grid")
        rows = np.arange(n)
        inc = self.inc
        first = align
        # level `align` is either a new unit interval or a right sibling
        fresh = first == 0
        if np.any(fresh):
            r = rows[fresh]
            inc[r, 0] = normals(self.keys[r], 0, start[r] >> MAX_LEVEL)
        sib = ~fresh
        if np.any(sib):
            r = rows[sib]
            a = first[r]
            inc[r, a] = inc[r, a - 1] - inc[r, a]
        # deeper levels are left children of the level above
        active = rows[level > first]
        depth = 1
        while active.size:
            lv = first[active] + depth
            parent = inc[active, lv - 1]
            sd = 0.5 * np.exp2(-0.5 * (lv - 1))
            z = normals(self.keys[active], lv, start[active] >> (MAX_LEVEL - lv))
            inc[active, lv] = 0.5 * parent + sd * z
            depth += 1
            active = active[level[active] >= first[active] + depth]
        self.ticks = start + (np.int64(1) << (MAX_LEVEL - level))
        return inc[rows, level]

