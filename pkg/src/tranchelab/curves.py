"""One-dimensional generators of oscillatory continua.

Two sin(1/t)-type maps on (0, 1] (one landing at 1, one at 0), the
extrema bookkeeping needed to truncate and rescale their laps, and a
countable family of tent maps over a fixed interval decomposition of
[0, 1] whose graph closure is the two-sided oscillation relation used by
the product-space builders.  Interval endpoints of the tent family are
exact rationals so that preimage computations stay symbolic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import mpmath as mp
import numpy as np

from .hilbert import ConstructionError, DomainError, ResolutionError

_BREAK = 0.7  # oscillation/affine break of the unit-landing map


def warsaw_f(t):
    """0.5*((1-t)*sin(1/t)+1) on (0, 0.7], affine to f(1)=1 on [0.7, 1].

    Oscillates over (0, 1) with full-amplitude limit set as t -> 0+ and
    is bounded below by t/2, so it never returns 0 on (0, 1].
    """
    arr = np.asarray(t, dtype=float)
    if np.any(arr <= 0.0) or np.any(arr > 1.0):
        raise DomainError("warsaw_f is defined on (0, 1]")
    v07 = 0.5 * ((1.0 - _BREAK) * math.sin(1.0 / _BREAK) + 1.0)
    osc = 0.5 * ((1.0 - arr) * np.sin(1.0 / np.where(arr > 0, arr, 1.0)) + 1.0)
    lin = v07 + (1.0 - v07) * (arr - _BREAK) / (1.0 - _BREAK)
    out = np.where(arr <= _BREAK, osc, lin)
    return float(out) if np.isscalar(t) or np.ndim(t) == 0 else out


def depth_f(t):
    """(sin(pi/t)+1+3t)/4 on (0, 1/2], affine (5/4)(1-t) on [1/2, 1].

    Landing map: f(1) = 0, f(1/2) = 5/8; oscillation amplitude tends to
    [0, 1/2] as t -> 0+.
    """
    arr = np.asarray(t, dtype=float)
    if np.any(arr <= 0.0) or np.any(arr > 1.0):
        raise DomainError("depth_f is defined on (0, 1]")
    osc = 0.25 * (np.sin(np.pi / np.where(arr > 0, arr, 1.0)) + 1.0 + 3.0 * arr)
    lin = 1.25 * (1.0 - arr)
    out = np.where(arr <= 0.5, osc, lin)
    return float(out) if np.isscalar(t) or np.ndim(t) == 0 else out


def _depth_f_mp(t: mp.mpf) -> mp.mpf:
    if t <= 0 or t > 1:
        raise DomainError("depth_f is defined on (0, 1]")
    if t <= mp.mpf(1) / 2:
        return (mp.sin(mp.pi / t) + 1 + 3 * t) / 4
    return mp.mpf(5) / 4 * (1 - t)


def _depth_df_cent(t: mp.mpf, h: mp.mpf) -> mp.mpf:
    return (_depth_f_mp(t + h) - _depth_f_mp(t - h)) / (2 * h)


@dataclass(frozen=True)
class ExtremaTable:
    """Interior extrema of depth_f, ordered from the right.

    maxima[i] is the (i+1)-th local maximum parameter counting down from
    t = 1; minima[i] the (i+1)-th local minimum, with minima[0] = 1 by
    convention (the landing point f(1) = 0).  Parameters interleave:
    minima[n] < maxima[n-1] < minima[n-1].  Values are float mirrors of a
    high-precision bisection refined to 1e-10 in parameter.
    """

    maxima: np.ndarray
    minima: np.ndarray
    f_maxima: np.ndarray
    f_minima: np.ndarray

    @property
    def count(self) -> int:
        return len(self.maxima)

    def z(self, n: int) -> float:
        """1-based n-th maximum parameter."""
        return float(self.maxima[n - 1])

    def y(self, n: int) -> float:
        """1-based n-th minimum parameter (y(1) = 1)."""
        return float(self.minima[n - 1])

    def lap(self, i: int) -> tuple[float, float]:
        """Closed interval [y(i+1), z(i)] on which depth_f is increasing."""
        return self.y(i + 1), self.z(i)

    def to_csv(self, path) -> None:
        rows = np.column_stack(
            [
                np.arange(1, self.count + 1, dtype=float),
                self.maxima,
                self.f_maxima,
                self.minima[: self.count],
                self.f_minima[: self.count],
            ]
        )
        np.savetxt(
            path,
            rows,
            delimiter=",",
            header="n,z_n,f_z_n,y_n,f_y_n",
            comments="",
        )


@lru_cache(maxsize=8)
def find_extrema(count: int, grid: float = 1e-5) -> ExtremaTable:
    """Locate the first `count` maxima (and count+1 minima) of depth_f.

    Scans a grid uniform in 1/t for discrete extrema, then refines each
    by bisection on a central-difference derivative until the bracket is
    below 1e-10.  Raises ResolutionError when the requested extrema are
    too close together for the scan grid.
    """
    if count < 1:
        raise ConstructionError("count >= 1 required")
    # extrema accumulate at 0 with spacing ~ t^2; the u = 1/t scan grid
    # resolves them as long as the u-step stays below ~pi/2
    u_hi = 4.0 * (count + 3)
    n_scan = int(u_hi / min(grid * u_hi * u_hi, 1.2)) + 64
    u = np.linspace(1.0, u_hi, n_scan)
    t = 1.0 / u[::-1]
    f = depth_f(t)
    sgn = np.sign(np.diff(f))
    turn = np.nonzero(np.diff(sgn) != 0)[0] + 1
    if len(turn) < 2 * count + 1:
        raise ResolutionError("scan grid too coarse for requested extrema count")
    turn = turn[::-1]  # largest parameters first

    old = mp.mp.dps
    mp.mp.dps = 40
    try:
        h = mp.mpf("1e-20")
        maxima, minima = [], [mp.mpf(1)]
        fmax, fmin = [], [mp.mpf(0)]
        for i in turn:
            a, b = mp.mpf(t[i - 1]), mp.mpf(t[i + 1])
            da = _depth_df_cent(a, h)
            for _ in range(80):
                if b - a < mp.mpf("1e-12"):
                    break
                m = (a + b) / 2
                dm = _depth_df_cent(m, h)
                if mp.sign(dm) == mp.sign(da):
                    a, da = m, dm
                else:
                    b = m
            e = (a + b) / 2
            fe = _depth_f_mp(e)
            if fe > _depth_f_mp(e - mp.mpf("1e-9")):
                maxima.append(e)
                fmax.append(fe)
            else:
                minima.append(e)
                fmin.append(fe)
            if len(maxima) >= count and len(minima) >= count + 1:
                break
        if len(maxima) < count or len(minima) < count + 1:
            raise ResolutionError("not enough extrema resolved")
        maxima = maxima[:count]
        minima = minima[: count + 1]
        table = ExtremaTable(
            np.array([float(v) for v in maxima]),
            np.array([float(v) for v in minima]),
            np.array([float(v) for v in fmax[:count]]),
            np.array([float(v) for v in fmin[: count + 1]]),
        )
    finally:
        mp.mp.dps = old
    # interleaving sanity: minima[n] < maxima[n-1] < minima[n-1]
    for n in range(1, count + 1):
        if not (table.minima[n] < table.maxima[n - 1] < table.minima[n - 1]):
            raise ConstructionError("extrema interleaving violated")
    return table


def truncated_f(N: int, t, table: ExtremaTable | None = None):
    """depth_f flattened below its N-th minimum.

    Equals depth_f on [y(N), 1] and the chord (f(y(N))/y(N)) * t on
    [0, y(N)]; in particular it is 0 at 0 and agrees with depth_f on
    every increasing lap [y(j+1), z(j)] with j <= N - 1.
    """
    if N < 1:
        raise ConstructionError("N >= 1 required")
    if table is None:
        table = find_extrema(max(N, 2))
    yN = table.y(N)
    fyN = depth_f(yN)
    arr = np.asarray(t, dtype=float)
    if np.any(arr < 0.0) or np.any(arr > 1.0):
        raise DomainError("truncated_f is defined on [0, 1]")
    low = (fyN / yN) * arr
    high = depth_f(np.maximum(arr, yN / 2.0))
    out = np.where(arr >= yN, high, low)
    return float(out) if np.isscalar(t) or np.ndim(t) == 0 else out


# ---------------------------------------------------------------------------
# tent family over the interval decomposition of [0, 1]


def tent_endpoint(n: int) -> Fraction:
    """Exact endpoint a_n of the interval decomposition.

    a_0 = 1/4, a_{-k} = 1/(k+2)^2 for k >= 1, a_k = 1 - 1/(k+1)^2 for
    k >= 1; the middle interval [1/4, 3/4] is the unique one of length
    1/2, all others are strictly shorter, and lengths tend to 0 at both
    ends of [0, 1].
    """
    if n == 0:
        return Fraction(1, 4)
    if n < 0:
        return Fraction(1, (2 - n) ** 2)
    return 1 - Fraction(1, (n + 1) ** 2)


def interval_index_of(x: float) -> int:
    """Index n with x in [a_n, a_{n+1}), for x in (0, 1)."""
    if not (0.0 < x < 1.0):
        raise DomainError("interior point expected")
    if x >= 0.25:
        if x < 0.75:
            return 0
        # a_k = 1 - 1/(k+1)^2 <= x  <=>  k >= 1/sqrt(1-x) - 1
        k = max(1, math.ceil(1.0 / math.sqrt(1.0 - x) - 1.0 - 1e-12))
        while tent_endpoint(k + 1) <= x:
            k += 1
        while tent_endpoint(k) > x:
            k -= 1
        return k
    # a_{-k} = 1/(k+2)^2 <= x  <=>  k >= 1/sqrt(x) - 2
    k = max(1, math.ceil(1.0 / math.sqrt(x) - 2.0 - 1e-12))
    while tent_endpoint(-k) > x:
        k += 1
    while k > 1 and tent_endpoint(-(k - 1)) <= x:
        k -= 1
    return -k


def tent_interval(n: int) -> tuple[Fraction, Fraction, Fraction]:
    """(a_n, a_{n+1}, slope) with slope = 2/length >= 4 (== 4 iff n=0)."""
    lo, hi = tent_endpoint(n), tent_endpoint(n + 1)
    return lo, hi, 2 / (hi - lo)


def tent_value(x: float) -> float:
    """Tent height over x in (0, 1): 0 at endpoints, 1 at midpoints.

    The tent over [a_n, a_{n+1}] rises linearly with slope 2/length to 1
    at the midpoint and back down; endpoint/midpoint hits are detected
    exactly so orbit propagation can branch there.
    """
    n = interval_index_of(x)
    lo, hi, lam = tent_interval(n)
    flo, fhi, flam = float(lo), float(hi), float(lam)
    mid = 0.5 * (flo + fhi)
    if x == flo or x == fhi:
        return 0.0
    if x == mid:
        return 1.0
    v = flam * (x - flo) if x <= mid else flam * (fhi - x)
    return min(max(v, 0.0), 1.0)


def tent_relation(x: float, y: float, tol: float = 1e-9) -> bool:
    """Membership in the closed two-sided oscillation relation.

    (x, y) is admissible when x is 0 or 1 (full vertical segment), or y
    matches the tent height over x within tol.
    """
    if not (0.0 <= x <= 1.0 and 0.0 <= y <= 1.0):
        raise DomainError("relation arguments must lie in [0, 1]")
    if x == 0.0 or x == 1.0:
        return True
    return abs(y - tent_value(x)) <= tol


@dataclass(frozen=True)
class TentFamily:
    """Materialized finite slice of the tent family.

    Keeps intervals with length >= min_len (plus everything between);
    used by cloud builders, while relation queries and symbolic preimage
    walks use the exact index formulas directly.
    """

    min_len: float = 1.0 / 400.0

    @property
    def index_range(self) -> tuple[int, int]:
        k = 1
        while float(tent_endpoint(-k + 1) - tent_endpoint(-k)) >= self.min_len:
            k += 1
        lo = -k + 1
        k = 0
        while float(tent_endpoint(k + 1) - tent_endpoint(k)) >= self.min_len:
            k += 1
        return lo, k - 1

    def intervals(self) -> list[tuple[int, Fraction, Fraction, Fraction]]:
        lo, hi = self.index_range
        return [(n, *tent_interval(n)) for n in range(lo, hi + 1)]

    def endpoints(self) -> list[Fraction]:
        lo, hi = self.index_range
        return [tent_endpoint(n) for n in range(lo, hi + 2)]

    def laps(self):
        """Monotone tent laps as (lo, hi, slope, +1/-1), exact rationals."""
        out = []
        for n, lo, hi, lam in self.intervals():
            mid = (lo + hi) / 2
            out.append((lo, mid, lam, +1))
            out.append((mid, hi, lam, -1))
        return out


def lap_invert(fn, lo: float, hi: float, v: float, tol: float = 1e-12) -> float:
    """Solve fn(t) = v on a monotone lap [lo, hi] by bisection.

    Raises DomainError when v is outside the lap's value range (with the
    tolerance applied at the ends).
    """
    flo, fhi = fn(lo), fn(hi)
    inc = fhi >= flo
    vmin, vmax = (flo, fhi) if inc else (fhi, flo)
    if v < vmin - 1e-9 or v > vmax + 1e-9:
        raise DomainError("value outside lap range")
    v = min(max(v, vmin), vmax)
    a, b = lo, hi
    for _ in range(200):
        if b - a < tol:
            break
        m = 0.5 * (a + b)
        fm = fn(m)
        if (fm < v) == inc:
            a = m
        else:
            b = m
    return 0.5 * (a + b)


# ---------------------------------------------------------------------------
# symbolic tranche bases of the tent relation


def tranche_bases(level: int, index_bound: int = 24) -> list[Fraction]:
    """Exact base points with nondegenerate product-space fiber.

    Level 1 bases are {0, 1}; level L+1 adds every preimage of a level-L
    base under the materialized tent laps (|interval index| <=
    index_bound).  Point counts multiply by the lap count per level, so
    levels above 3 are guarded.
    """
    if level < 1:
        raise ConstructionError("level >= 1 required")
    if level > 3:
        raise ResolutionError(
            "pointwise bases explode combinatorially above level 3; "
            "use longest_tranche_gap for deep levels"
        )
    laps = []
    for n in range(-index_bound, index_bound + 1):
        lo, hi, lam = tent_interval(n)
        mid = (lo + hi) / 2
        laps.append((lo, mid, lam, +1))
        laps.append((mid, hi, lam, -1))
    bases = {Fraction(0), Fraction(1)}
    for _ in range(level - 1):
        new = {Fraction(0), Fraction(1)}
        for b in bases:
            for lo, hi, lam, sgn in laps:
                new.add(lo + b / lam if sgn > 0 else hi - b / lam)
        bases = new
    return sorted(bases)


def longest_tranche_gap(level: int) -> Fraction:
    """Exact length of the longest base-free interval at a given level.

    Evolves the maximal gap intervals: a gap at level L+1 is the
    preimage of a level-L gap inside one monotone lap, with length
    divided by that lap's slope (>= 4, == 4 only over the middle
    interval).  Only maximizers are retained; everything pruned has all
    descendants strictly shorter.  Unmaterialized end intervals are
    checked to be shorter than the running maximum.
    """
    if level < 1:
        raise ConstructionError("level >= 1 required")
    index_bound = max(8, 2 ** min(level, 16))
    laps = []
    for n in range(-index_bound, index_bound + 1):
        lo, hi, lam = tent_interval(n)
        mid = (lo + hi) / 2
        laps.append((lo, mid, lam, +1))
        laps.append((mid, hi, lam, -1))
    gaps = [(Fraction(0), Fraction(1))]
    for _ in range(level - 1):
        best = Fraction(0)
        keep: list[tuple[Fraction, Fraction]] = []
        for glo, ghi in gaps:
            for lo, hi, lam, sgn in laps:
                plo = lo + glo / lam if sgn > 0 else hi - ghi / lam
                phi = lo + ghi / lam if sgn > 0 else hi - glo / lam
                ln = phi - plo
                if ln > best:
                    best, keep = ln, [(plo, phi)]
                elif ln == best:
                    keep.append((plo, phi))
        gaps = keep
        # anything hiding beyond the materialized slice fits inside an
        # interval shorter than the current maximum
        edge = tent_endpoint(-index_bound)
        if edge >= best:
            raise ResolutionError("index bound too small for requested level")
    return gaps[0][1] - gaps[0][0]
