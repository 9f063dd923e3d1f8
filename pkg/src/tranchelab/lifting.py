"""Infinite-depth lifts of an oscillatory arc.

The landing map's increasing laps are rescaled onto [0, 1] by affine
charts; pulling interval families back through chart-composed copies of
the map yields a nested table of parameter intervals, and over each
interval the arc parametrization acquires one more (geometrically
damped) coordinate built from a composite of truncated maps.  The lifted
arcs converge uniformly, their closures form a tower of circles whose
oscillation limit is the half-scaled right shift of the previous stage,
and the union with scaled shift copies stays arcwise connected.

Interval endpoints and chart data are computed with high-precision
arithmetic (float mirrors drive the samplers), because the chart
composites are strongly expansive: n nested inversions followed by n
forward evaluations amplify roundoff by the product of lap slopes.
"""

from __future__ import annotations

from bisect import bisect_right
from dataclasses import dataclass
from functools import lru_cache

import mpmath as mp
import numpy as np

from . import curves
from .hilbert import (
    Cloud,
    ConstructionError,
    DomainError,
    weights,
)

_DPS = 30
DOMAIN_TOL = 1e-8


def _f_mp(t):
    if t <= 0 or t > 1:
        raise DomainError("map defined on (0, 1]")
    if t <= mp.mpf(1) / 2:
        return (mp.sin(mp.pi / t) + 1 + 3 * t) / 4
    return mp.mpf(5) / 4 * (1 - t)


def _df_mp(t):
    if t <= mp.mpf(1) / 2:
        return (-mp.pi * mp.cos(mp.pi / t) / t**2 + 3) / 4
    return -mp.mpf(5) / 4


@dataclass(frozen=True)
class Entry:
    """One materialized parameter interval of the pullback table."""

    seq: tuple[int, ...]
    lo: float
    hi: float


class DepthModel:
    """Materialized lift data up to index i_max and depth n_max.

    Exposes the lap charts h_i, the pullback interval table P^n (seqs
    are nonincreasing index tuples of length n+1 with entries <= i_max),
    the composite maps g_seq, and lifted-arc evaluation.
    """

    def __init__(self, i_max: int = 12, n_max: int = 4):
        if i_max < 1 or n_max < 0:
            raise ConstructionError("i_max >= 1, n_max >= 0 required")
        self.i_max = i_max
        self.n_max = n_max
        old = mp.mp.dps
        mp.mp.dps = _DPS
        try:
            table = curves.find_extrema(i_max + 1)
            self._y = [mp.mpf(v) for v in table.minima]  # y(1)=1 at index 0
            self._z = [mp.mpf(v) for v in table.maxima]
            # polish extrema to working precision via derivative bisection
            for k in range(len(self._z)):
                self._z[k] = self._polish(self._z[k])
            for k in range(1, len(self._y)):
                self._y[k] = self._polish(self._y[k])
            self.extrema = table
            # chart ranges: f on [y(i+1), z(i)] increases from c_i to d_i
            self._c = {}
            self._d = {}
            for i in range(1, i_max + 1):
                self._c[i] = _f_mp(self._y[i])
                self._d[i] = _f_mp(self._z[i - 1])
            self._entries: dict[tuple[int, ...], tuple[mp.mpf, mp.mpf]] = {}
            self._build_table()
        finally:
            mp.mp.dps = old
        # float mirrors, grouped by sequence length for interval lookup
        self.levels: list[list[Entry]] = []
        for ln in range(1, n_max + 2):
            lev = [
                Entry(seq, float(v[0]), float(v[1]))
                for seq, v in self._entries.items()
                if len(seq) == ln
            ]
            lev.sort(key=lambda e: e.lo)
            self.levels.append(lev)

    # -- high-precision scaffolding ------------------------------------

    def _polish(self, e):
        h = mp.mpf(10) ** (-(_DPS - 8))
        a, b = e - mp.mpf("1e-9"), e + mp.mpf("1e-9")
        da = _df_mp(a)
        for _ in range(120):
            if b - a < mp.mpf(10) ** (-(_DPS - 4)):
                break
            m = (a + b) / 2
            dm = _df_mp(m)
            if mp.sign(dm) == mp.sign(da):
                a, da = m, dm
            else:
                b = m
        del h
        return (a + b) / 2

    def y_mp(self, n: int):
        """1-based n-th minimum (high precision)."""
        return self._y[n - 1]

    def z_mp(self, n: int):
        return self._z[n - 1]

    def lap_mp(self, i: int):
        """Increasing lap [y(i+1), z(i)] of the landing map."""
        return self._y[i], self._z[i - 1]

    def h_mp(self, i: int, v):
        return (v - self._c[i]) / (self._d[i] - self._c[i])

    def h_inv_mp(self, i: int, u):
        return self._c[i] + u * (self._d[i] - self._c[i])

    def f_tr_mp(self, i: int, t):
        """Truncated map with cut at y(i+1): identity chord below."""
        yc = self._y[i]
        if t >= yc:
            return _f_mp(t)
        return _f_mp(yc) / yc * t

    def _invert_on_lap(self, i: int, v):
        """Solve f(x) = v on the increasing lap i (Newton + bisection)."""
        lo, hi = self.lap_mp(i)
        a, b = lo, hi
        fa, fb = _f_mp(a), _f_mp(b)
        if v < fa - mp.mpf("1e-25") or v > fb + mp.mpf("1e-25"):
            raise DomainError("target outside lap range")
        v = min(max(v, fa), fb)
        x = (a + b) / 2
        for _ in range(200):
            fx = _f_mp(x)
            if fx < v:
                a = x
            else:
                b = x
            dfx = _df_mp(x)
            step_ok = False
            if dfx != 0:
                xn = x - (fx - v) / dfx
                if a < xn < b:
                    x, step_ok = xn, True
            if not step_ok:
                x = (a + b) / 2
            if b - a < mp.mpf(10) ** (-(_DPS - 4)):
                break
        return x

    def _build_table(self):
        # depth-first enumeration of nonincreasing index tuples
        for i in range(1, self.i_max + 1):
            self._entries[(i,)] = (self._y[i], self._z[i - 1])
        level = [(i,) for i in range(1, self.i_max + 1)]
        for _ in range(self.n_max):
            nxt = []
            for seq in level:
                tlo, thi = self._entries[seq]
                for i0 in range(seq[0], self.i_max + 1):
                    # pull [tlo, thi] back through h_{i0} o f on lap i0
                    vlo = self.h_inv_mp(i0, tlo)
                    vhi = self.h_inv_mp(i0, thi)
                    plo = self._invert_on_lap(i0, vlo)
                    phi = self._invert_on_lap(i0, vhi)
                    new = (i0,) + seq
                    self._entries[new] = (plo, phi)
                    nxt.append(new)
            level = nxt

    # -- public interval/table access ----------------------------------

    def entry(self, seq: tuple[int, ...]) -> tuple[float, float]:
        if seq not in self._entries:
            raise DomainError(f"sequence {seq} not materialized")
        lo, hi = self._entries[seq]
        return float(lo), float(hi)

    def entry_mp(self, seq: tuple[int, ...]):
        return self._entries[seq]

    def sequences(self, length: int | None = None):
        if length is None:
            return list(self._entries)
        return [s for s in self._entries if len(s) == length]

    def containing(self, level: int, t: float) -> Entry | None:
        """Materialized level-`level` entry (seq length level+1) at t."""
        lev = self.levels[level]
        k = bisect_right([e.lo for e in lev], t) - 1
        if 0 <= k < len(lev) and lev[k].lo <= t <= lev[k].hi:
            return lev[k]
        return None

    # -- composite maps -------------------------------------------------

    def g_eval(self, seq: tuple[int, ...], t: float, precise: bool = False):
        """Composite f_{i_n} o h_{i_n} o ... o f_{i_0} o h_{i_0} o f at t.

        Requires t in the materialized interval of `seq` (tolerance
        DOMAIN_TOL) and checks every intermediate chart domain to the
        same tolerance.  precise=True runs the whole chain in
        high-precision arithmetic.
        """
        if seq not in self._entries:
            raise DomainError(f"sequence {seq} not materialized")
        lo, hi = self.entry(seq)
        if not (lo - DOMAIN_TOL <= t <= hi + DOMAIN_TOL):
            raise DomainError("parameter outside the sequence interval")
        if precise:
            old = mp.mp.dps
            mp.mp.dps = _DPS
            try:
                # keep full precision if the caller passed an mp endpoint;
                # float inputs limit accuracy to eps times the slope product
                tm = t if isinstance(t, mp.mpf) else mp.mpf(t)
                u = _f_mp(tm if tm > 0 else mp.mpf("1e-30"))
                for k, i in enumerate(seq):
                    c, d = self._c[i], self._d[i]
                    if u < c - DOMAIN_TOL or u > d + DOMAIN_TOL:
                        raise DomainError("chart domain violated in composite")
                    u = self.h_mp(i, min(max(u, c), d))
                    u = self.f_tr_mp(i, min(max(u, mp.mpf(0)), mp.mpf(1)))
                    del k
                return float(u)
            finally:
                mp.mp.dps = old
        # the chain expands by roughly 1/width, so a float parameter is
        # only good to eps/width inside the charts; scale the check
        ftol = min(1e-2, DOMAIN_TOL + 8.0 * np.finfo(float).eps / max(hi - lo, 1e-300))
        u = curves.depth_f(min(max(t, 1e-300), 1.0))
        for i in seq:
            c, d = float(self._c[i]), float(self._d[i])
            if u < c - ftol or u > d + ftol:
                raise DomainError("chart domain violated in composite")
            u = (min(max(u, c), d) - c) / (d - c)
            yc = float(self._y[i])
            u = curves.depth_f(u) if u >= yc else curves.depth_f(yc) / yc * u
        return u

    def g_values(self, seq: tuple[int, ...], ts) -> np.ndarray:
        """Vectorized float composite over a batch of parameters.

        Sampling path: clamps into chart domains instead of checking
        them (clamping error is below plot/mesh resolution; use g_eval
        for verified values)."""
        u = curves.depth_f(np.clip(np.asarray(ts, float), 1e-300, 1.0))
        for i in seq:
            c, d = float(self._c[i]), float(self._d[i])
            u = (np.clip(u, c, d) - c) / (d - c)
            yc = float(self._y[i])
            u = np.clip(u, 0.0, 1.0)
            upper = curves.depth_f(np.maximum(u, yc))
            u = np.where(u >= yc, upper, curves.depth_f(yc) / yc * u)
        return u

    # -- lifted arcs ------------------------------------------------------

    def phi(self, n: int, t: float) -> np.ndarray:
        """Stage-n lift: (t, f(t), c_1, ..., c_n, 0) with the coordinate
        c_k = 2**-k * g_seq(t) over the level k-1 entry containing t."""
        if not (0.0 < t <= 1.0):
            raise DomainError("lift parameter must lie in (0, 1]")
        if n > self.n_max + 1:
            raise DomainError("stage exceeds materialized depth")
        out = np.zeros(n + 2)
        out[0] = t
        out[1] = curves.depth_f(t)
        for k in range(1, n + 1):
            e = self.containing(k - 1, t)
            if e is not None:
                out[k + 1] = 2.0**-k * self.g_eval(e.seq, t)
        return out

    def phi_curve(self, n: int, grid) -> np.ndarray:
        """Stage-n lift over a whole parameter grid (vectorized)."""
        grid = np.asarray(grid, float)
        out = np.zeros((grid.size, n + 2))
        out[:, 0] = grid
        out[:, 1] = curves.depth_f(np.clip(grid, 1e-300, 1.0))
        for k in range(1, n + 1):
            for e in self.levels[k - 1]:
                mask = (grid >= e.lo) & (grid <= e.hi)
                if mask.any():
                    out[mask, k + 1] = 2.0**-k * self.g_values(e.seq, grid[mask])
        return out

    def phi_grid(self, n: int, lo: float = 0.0, hi: float = 1.0, base: int = 2000) -> np.ndarray:
        """Deterministic parameter grid refined inside table intervals.

        Uniform-in-1/t backbone plus >= 16 points per materialized
        entry of every level up to n-1, restricted to (lo, hi]."""
        t_cut = max(1e-4, float(self._y[-1]) / 4.0, lo)
        u = np.arange(1.0, 1.0 / t_cut, np.pi / 32.0)
        parts = [np.linspace(t_cut, 1.0, base), 1.0 / u]
        for k in range(min(n, self.n_max + 1)):
            for e in self.levels[k]:
                parts.append(np.linspace(e.lo, e.hi, 16))
        grid = np.unique(np.concatenate(parts))
        return grid[(grid > max(lo, 0.0)) & (grid <= hi)]


@lru_cache(maxsize=4)
def default_model(i_max: int = 12, n_max: int = 4) -> DepthModel:
    return DepthModel(i_max, n_max)


def build_phi(n: int, model: DepthModel | None = None):
    """Stage-n lift as a callable t -> point array."""
    m = model or default_model()
    return lambda t: m.phi(n, t)


def _g_cloud(dim: int, samples: int) -> np.ndarray:
    pts = np.zeros((samples, dim))
    pts[:, 0] = np.linspace(0.0, 1.0, samples)
    return pts


def build_Xinf(
    n: int,
    samples: int = 1200,
    model: DepthModel | None = None,
    label: str | None = None,
) -> Cloud:
    """Cloud of the stage-n tower: base segment, lifted arc, and the
    half-scaled right shift of the previous stage as oscillation limit.

    aux 'q' is a circle parameter with the limit set at q = 0 (and 1),
    aux 'tag' marks base graph 0, lifted arc 1, limit copies 2.
    """
    if n < 0:
        raise ConstructionError("n >= 0 required")
    m = model or default_model()
    grid = m.phi_grid(n, base=samples)
    curve = m.phi_curve(n, grid)
    dim = n + 2
    g = _g_cloud(dim, max(64, samples // 2))
    t_cut = grid[0]
    mesh = max(1.0 / samples, t_cut, np.pi / 32.0 * t_cut**2 + 1.0 / samples)
    pts = [curve, g]
    q = [0.5 * grid, 1.0 - 0.5 * g[:, 0]]
    tag = [np.ones(len(curve)), np.zeros(len(g))]
    if n == 0:
        lim = np.zeros((65, dim))
        lim[:, 1] = np.linspace(0.0, 0.5, 65)
        pts.append(lim)
        q.append(np.zeros(65))
        tag.append(np.full(65, 2.0))
    else:
        sub = build_Xinf(n - 1, max(128, samples // 2), model=m)
        half = np.hstack([np.zeros((len(sub), 1)), 0.5 * sub.points])
        pts.append(half)
        q.append(np.zeros(len(sub)))
        tag.append(np.full(len(sub), 2.0))
        mesh = max(mesh, t_cut / 2.0 + sub.mesh / 2.0)
    cloud = Cloud(
        np.vstack(pts),
        mesh,
        label or f"Xinf_{n}",
        {"q": np.concatenate(q), "tag": np.concatenate(tag)},
    )
    return cloud


def omega_tail(
    n: int,
    t_cut: float | None = None,
    samples: int = 1200,
    model: DepthModel | None = None,
) -> Cloud:
    """Tail piece of the stage-n lifted arc over (0, t_cut].

    The default cut is the top of the deepest fully materialized lap,
    so the deep coordinates stay live over the whole window.  The cloud
    mesh records the window radius: every tail point sits within t_cut/2
    of the limit hyperplane in the leading coordinate."""
    m = model or default_model()
    if t_cut is None:
        t_cut = float(m.z_mp(m.i_max))
    grid = m.phi_grid(n, hi=t_cut, base=samples)
    if grid.size == 0:
        raise DomainError("tail cut below materialized resolution")
    curve = m.phi_curve(n, grid)
    return Cloud(curve, max(1.0 / samples, t_cut / 2.0), f"tail_{n}")


def half_shift_cloud(cloud: Cloud) -> Cloud:
    half = np.hstack([np.zeros((len(cloud), 1)), 0.5 * cloud.points])
    return Cloud(half, cloud.mesh / 2.0, f"half_shift({cloud.label})")


def arcwise_witness(x, n: int, model: DepthModel | None = None, step: float = 1e-2) -> np.ndarray:
    """Polyline inside the stage-n tower from x to the anchor (1, 0, ...).

    Classifies x by its leading zero block: x is either on the base
    segment, on the lifted arc, or inside a scaled shift copy; the route
    runs through the copy's base segment to the origin, then along the
    top base segment to the anchor.  Returns an (N, dim) array whose
    consecutive points are within `step` plus the lift's oscillation
    resolution of each other.
    """
    m = model or default_model()
    x = np.asarray(x, dtype=float)
    dim = x.size
    k = 0
    while k < dim and x[k] == 0.0:
        k += 1
    if k >= dim:
        k = dim  # the origin itself
        z0 = 0.0
    else:
        z0 = x[k] * 2.0**k

    def seg(a, b):
        """Straight segment between points, subdivided to `step`."""
        a, b = np.asarray(a, float), np.asarray(b, float)
        npts = max(2, int(np.ceil(np.abs(a - b).max() / step)) + 1)
        return np.linspace(a, b, npts)

    def scaled(pts, k):
        out = np.hstack([np.zeros((pts.shape[0], k)), pts * 2.0**-k])
        return out[:, :dim] if out.shape[1] >= dim else np.hstack(
            [out, np.zeros((pts.shape[0], dim - out.shape[1]))]
        )

    pieces = []
    stage = max(0, min(n - k, m.n_max + 1))
    on_base = k >= dim or np.all(np.abs(x[k + 1 :]) <= 1e-9)
    if not on_base and z0 > 0.0:
        # walk the lifted arc of the copy from z0 out to its anchor
        grid = m.phi_grid(stage, lo=z0, base=512)
        grid = np.unique(np.concatenate([[z0], grid[grid > z0], [1.0]]))
        pieces.append(scaled(m.phi_curve(stage, grid), k))
    # base segment of the copy: from its anchor (or from x itself) to 0
    anchor = np.zeros(dim)
    if k < dim:
        anchor[k] = 2.0**-k
    start = anchor if (not on_base and z0 > 0.0) else x
    pieces.append(seg(start, np.zeros(dim)))
    # top base segment out to the global anchor
    top = np.zeros(dim)
    top[0] = 1.0
    pieces.append(seg(np.zeros(dim), top))
    return np.vstack(pieces)
