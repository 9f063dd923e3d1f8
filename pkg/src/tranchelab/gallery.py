"""Sampled models of named oscillatory continua in the plane and in
low-dimensional slices of the cube.

Each builder returns a Cloud whose aux channels follow one convention:
``tag`` marks base-graph points 0, quasi-arc points 1, limit-set points
2, and ``q`` is the arc/quotient parameter (limit sets sit at q = 0).
Companion helpers expose, per example, the candidate target sets Y0 and
the finite window family searched by the approximation test; window
endpoints refer to the q values of quasi-arc points.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .curves import warsaw_f
from .hilbert import Cloud, ConstructionError, weights

TAG_BASE, TAG_ARC, TAG_LIMIT = 0.0, 1.0, 2.0


@dataclass(frozen=True)
class ArcFamily:
    """Finite family of parameter windows [a, b] over a quasi-arc.

    `boundaries` induce the generic grid family (every pair i < j);
    `extra` lists analytically chosen windows appended verbatim."""

    boundaries: np.ndarray
    extra: tuple[tuple[float, float], ...] = ()

    def __post_init__(self):
        b = np.asarray(self.boundaries, float)
        if b.ndim != 1 or b.size < 2 or np.any(np.diff(b) <= 0):
            raise ConstructionError("boundaries must be increasing, size >= 2")
        object.__setattr__(self, "boundaries", b)

    def refined(self) -> "ArcFamily":
        """Same span with doubled grid density (drift checks)."""
        b = self.boundaries
        mid = (b[:-1] + b[1:]) / 2.0
        return ArcFamily(np.sort(np.concatenate([b, mid])), self.extra)


def _polyline(points: np.ndarray, step: float) -> np.ndarray:
    """Resample a polyline so consecutive vertices are ~step apart
    (Euclidean in the raw coordinates)."""
    pts = [points[:1]]
    for a, b in zip(points[:-1], points[1:]):
        n = max(1, int(np.ceil(np.linalg.norm(b - a) / step)))
        pts.append(np.linspace(a, b, n + 1)[1:])
    return np.vstack(pts)


def _mesh_of(points: np.ndarray, breaks=()) -> float:
    """Max weighted step between consecutive samples, skipping the
    indices in `breaks` (joints between unrelated pieces)."""
    w = weights(points.shape[1])
    steps = np.abs(np.diff(points, axis=0)).dot(w)
    keep = np.ones(steps.size, bool)
    for i in breaks:
        if 0 < i <= steps.size:
            keep[i - 1] = False
    return float(steps[keep].max()) if keep.any() else 0.0


# ---------------------------------------------------------------------------
# Warsaw circle


def warsaw_circle(samples: int = 2000) -> Cloud:
    """Oscillatory arc, its limit segment, and a return path forming a
    circle-like continuum in [0,1]^2 with exactly one tranche (q = 0)."""
    # uniform where the curve is tame, phase-uniform inside the spring
    u = np.linspace(10.0, 60.0 * np.pi, (3 * samples) // 4)
    t = np.unique(np.concatenate([1.0 / u, np.linspace(0.1, 1.0, samples // 4)]))
    arc = np.column_stack([t, warsaw_f(t)])
    limit = np.column_stack([np.zeros(161), np.linspace(0.0, 1.0, 161)])
    ret = _polyline(
        np.array([[1.0, 1.0], [1.0, 0.0], [0.0, 0.0]]), 4.0 / samples
    )
    pts = np.vstack([arc, ret, limit])
    q = np.concatenate(
        [0.5 * t, 0.5 + 0.5 * np.linspace(0.0, 1.0, len(ret)), np.zeros(161)]
    )
    tag = np.concatenate(
        [np.full(len(arc), TAG_ARC), np.full(len(ret), TAG_BASE), np.full(161, TAG_LIMIT)]
    )
    mesh = max(
        _mesh_of(arc), _mesh_of(ret), _mesh_of(limit), 0.5 * float(t[0])
    )
    return Cloud(pts, mesh, "warsaw", {"q": q, "tag": tag})


def warsaw_Y0(samples: int = 161) -> Cloud:
    """Vertical target segment {0} x [0.2, 0.6] inside the limit set."""
    pts = np.column_stack([np.zeros(samples), np.linspace(0.2, 0.6, samples)])
    return Cloud(pts, 0.4 / (samples - 1) / 4.0, "warsaw_Y0")


def warsaw_family(samples: int = 2000) -> ArcFamily:
    """Grid windows plus exact one-lap preimages of the value band
    [0.2, 0.6] (solved on monotone phase intervals near the limit)."""
    u_hi = 60.0 * np.pi
    bounds = 0.5 / np.linspace(1.0, u_hi, 120)[::-1]
    extra = []
    g = lambda u: float(warsaw_f(1.0 / u))
    k0 = int(np.ceil(40.0 / np.pi))
    for k in range(k0, int(u_hi / np.pi) - 1):
        # one monotone branch of the oscillation: between critical phases
        lo_u, hi_u = k * np.pi - np.pi / 2 + 0.05, k * np.pi + np.pi / 2 - 0.05
        try:
            if g(lo_u) < g(hi_u):
                ua = brentq(lambda u: g(u) - 0.2, lo_u, hi_u)
                ub = brentq(lambda u: g(u) - 0.6, lo_u, hi_u)
            else:
                ua = brentq(lambda u: g(u) - 0.6, lo_u, hi_u)
                ub = brentq(lambda u: g(u) - 0.2, lo_u, hi_u)
        except ValueError:
            continue
        a, b = sorted((0.5 / ua, 0.5 / ub))
        extra.append((a, b))
    del samples
    return ArcFamily(bounds, tuple(extra))


# ---------------------------------------------------------------------------
# 4-star examples (planar star plus a height coordinate)

_TIPS = np.array([[1.0, 1.0], [0.0, 1.0], [0.0, 0.0], [1.0, 0.0]])
_CENTER = np.array([0.5, 0.5])


def _star_points(step: float) -> np.ndarray:
    return np.vstack([_polyline(np.array([_CENTER, tip]), step) for tip in _TIPS])


def star_edges(indices, samples: int = 200) -> Cloud:
    """Union of the chosen center-to-tip edges at height zero."""
    step = 1.0 / samples
    pts = np.vstack(
        [_polyline(np.array([_CENTER, _TIPS[i]]), step) for i in indices]
    )
    pts3 = np.hstack([pts, np.zeros((len(pts), 1))])
    return Cloud(pts3, _mesh_of(pts3, breaks=()) or step, f"star_edges{tuple(indices)}")


def star4_route(samples: int = 150, order=(0, 1, 2, 3), blocks: int = 36) -> Cloud:
    """Quasi-arc whose every oscillation visits the four tips in one
    fixed order; its closure tail is the 4-star at height zero.

    Interleaved default order forces every window covering two opposite
    edges to pass an off-target tip — the approximation failure."""
    if sorted(order) != [0, 1, 2, 3]:
        raise ConstructionError("order must be a permutation of the 4 edges")
    step = 1.0 / samples
    vertices = []
    for k in range(blocks):
        for o in order:
            vertices += [_CENTER, _TIPS[o]]
        vertices += [_CENTER]
    plane = _polyline(np.array(vertices), step)
    # height decreases harmonically, linear in cumulative length
    cum = np.concatenate([[0.0], np.cumsum(np.linalg.norm(np.diff(plane, axis=0), axis=1))])
    frac = cum / cum[-1] * blocks
    h = 1.0 / (frac + 2.0)
    arc = np.column_stack([plane, h])
    star = _star_points(step)
    limit = np.hstack([star, np.zeros((len(star), 1))])
    pts = np.vstack([arc, limit])
    q = np.concatenate([frac / blocks, np.zeros(len(limit))])
    tag = np.concatenate([np.full(len(arc), TAG_ARC), np.full(len(limit), TAG_LIMIT)])
    mesh = max(_mesh_of(arc), step)
    return Cloud(pts, mesh, "star4_route", {"q": q, "tag": tag})


def star4_route_family(blocks: int = 36, order=(0, 1, 2, 3)) -> ArcFamily:
    """Windows aligned with leg boundaries of the route blocks."""
    legs_per_block = 2 * len(order) + 1 - 1  # visits + final return legs
    n = blocks * (2 * len(order))
    del legs_per_block
    return ArcFamily(np.linspace(0.0, 1.0, n + 1))


def _star_net(k: int = 8):
    """1/k-net of subcontinua: sub-edges on the k-grid plus symmetric
    center-stars; each element is a vertex list for traversal."""
    net = []
    for e in range(4):
        d = _TIPS[e] - _CENTER
        for i in range(k):
            for j in range(i + 1, k + 1):
                net.append(("edge", [_CENTER + i / k * d, _CENTER + j / k * d]))
    for l in range(1, k + 1):
        walk = []
        for e in range(4):
            d = _TIPS[e] - _CENTER
            walk += [_CENTER, _CENTER + l / k * d, _CENTER]
        net.append(("star", walk))
    return net


def star_net_element(index: int, samples: int = 200, k: int = 8) -> Cloud:
    """Sampled net element (at height zero) as an approximation target."""
    kind, walk = _star_net(k)[index]
    pts = _polyline(np.array(walk), 1.0 / samples)
    pts3 = np.hstack([pts, np.zeros((len(pts), 1))])
    return Cloud(pts3, 1.0 / samples, f"star_net[{index}]({kind})")


def star4_good(samples: int = 100, k: int = 8, cycles: int = 2):
    """Quasi-arc whose blocks enumerate the 1/k-net of the star; every
    net element is revisited at ever smaller heights, so all of them are
    approximable.  Returns (cloud, family) with the family's extra
    windows marking the clean traversal of each element in the final
    cycle (approach/return runs excluded)."""
    net = _star_net(k)
    step = 1.0 / samples
    pieces, qb, clean = [], [0.0], {}
    total = cycles * len(net)
    block = 0
    for c in range(cycles):
        for idx, (kind, walk) in enumerate(net):
            start, end = np.asarray(walk[0]), np.asarray(walk[-1])
            approach = _polyline(np.array([_CENTER, start]), step)
            body = _polyline(np.array(walk), step)
            ret = _polyline(np.array([end, _CENTER]), step)
            h0, h1 = 1.0 / (block + 2.0) ** 2, 1.0 / (block + 3.0) ** 2
            seg2 = np.vstack([approach[:-1], body, ret[1:]])
            cum = np.concatenate(
                [[0.0], np.cumsum(np.linalg.norm(np.diff(seg2, axis=0), axis=1))]
            )
            cum = cum / max(cum[-1], 1e-12)
            h = h0 + (h1 - h0) * cum
            q0 = block / total
            q = (block + cum) / total
            pieces.append((np.column_stack([seg2, h]), q))
            a = (block + cum[len(approach) - 1]) / total
            b = (block + cum[len(approach) - 1 + len(body) - 1]) / total
            if c == cycles - 1:
                clean[idx] = (a, b)
            qb.append(q0)
            block += 1
    arc = np.vstack([p for p, _ in pieces])
    q = np.concatenate([qq for _, qq in pieces])
    star = _star_points(step)
    limit = np.hstack([star, np.zeros((len(star), 1))])
    pts = np.vstack([arc, limit])
    qa = np.concatenate([q, np.zeros(len(limit))])
    tag = np.concatenate([np.full(len(arc), TAG_ARC), np.full(len(limit), TAG_LIMIT)])
    mesh = max(_mesh_of(arc, breaks=np.cumsum([len(p) for p, _ in pieces])), step)
    cloud = Cloud(pts, mesh, "star4_good", {"q": qa, "tag": tag})
    del qb
    family = ArcFamily(
        np.arange(total + 1) / total, tuple(clean[i] for i in sorted(clean))
    )
    return cloud, family


# ---------------------------------------------------------------------------
# Spiral onto a circle


_SP_CENTER = np.array([0.5, 0.5])
_SP_SCALE = 0.25


def _spiral_xy(t):
    r = 1.0 + 1.0 / (1.0 + np.asarray(t, float))
    return _SP_CENTER + _SP_SCALE * np.column_stack([r * np.cos(t), r * np.sin(t)])


def circle_spiral(samples: int = 6000, turns: int = 30) -> Cloud:
    """Planar spiral r = 1 + 1/(1+t) accumulating on a circle, plus a
    radial connecting arc; one tranche (the circle, q = 0)."""
    T = 2.0 * np.pi * turns
    t = np.linspace(0.0, T, samples)
    arc = _spiral_xy(t)
    th = np.linspace(0.0, 2.0 * np.pi, 720, endpoint=False)
    circle = _SP_CENTER + _SP_SCALE * np.column_stack([np.cos(th), np.sin(th)])
    join = _polyline(
        np.array([_SP_CENTER + [_SP_SCALE, 0.0], arc[0]]), 1.0 / samples
    )
    pts = np.vstack([arc, join, circle])
    q = np.concatenate([t / T, np.full(len(join), 1.0), np.zeros(len(circle))])
    tag = np.concatenate(
        [np.full(len(arc), TAG_ARC), np.full(len(join), TAG_BASE), np.full(len(circle), TAG_LIMIT)]
    )
    mesh = max(_mesh_of(arc), _mesh_of(circle), _SP_SCALE / (1.0 + T))
    return Cloud(pts, mesh, "circle_spiral", {"q": q, "tag": tag})


def circle_arc_Y0(frac: float = 0.25, samples: int = 400) -> Cloud:
    """Target sub-arc of the limit circle spanning `frac` of a turn."""
    th = np.linspace(0.0, 2.0 * np.pi * frac, samples)
    pts = _SP_CENTER + _SP_SCALE * np.column_stack([np.cos(th), np.sin(th)])
    return Cloud(pts, _mesh_of(pts), f"circle_arc({frac})")


def spiral_family(turns: int = 30, grid: int = 60) -> ArcFamily:
    """Coarse uniform q-grid plus the aligned full-turn windows."""
    T = 2.0 * np.pi * turns
    extra = tuple(
        (2.0 * np.pi * m / T, 2.0 * np.pi * (m + 1) / T) for m in range(turns)
    )
    return ArcFamily(np.linspace(0.0, 1.0, grid + 1), extra)


# ---------------------------------------------------------------------------
# Comb pair

# plane windows: x in [-1, 0], y in [-1.5, 1.5] mapped onto [0, 1]^2


def _comb_map(xy):
    xy = np.atleast_2d(np.asarray(xy, float))
    return np.column_stack([xy[:, 0] + 1.0, (xy[:, 1] + 1.5) / 3.0])


def _phi_arm(s, sign):
    """Quasi-arc parametrization: x = -1/(1+s); the oscillation is
    smooth in s (the sine phase is pi*s up to sign)."""
    s = np.asarray(s, float)
    x = -1.0 / (1.0 + s)
    y = 0.5 * np.sin(-np.pi / x) * (1.0 + x) + sign
    return np.column_stack([x, y])


def comb_pair(samples: int = 16, cycles: int = 48):
    """Comb continuum X1 = G ∪ L1 ∪ L2 and its suspension X built from
    six-piece cycles sweeping both arms under a decaying height.

    `samples` is the sampling density per unit of arm parameter."""
    S = float(cycles)
    ds = 1.0 / (8 * samples)
    # --- X1 ---
    g_parts = [
        _polyline(np.array([[-1.0, -0.5], [-1.0, 1.0]]), 1.0 / 64),
        _polyline(np.array([[-1.0, 1.0], [0.0, 1.0]]), 1.0 / 64),
        _polyline(np.array([[0.0, -1.0], [0.0, 1.0]]), 1.0 / 64),
    ]
    s_grid = np.arange(0.0, S, ds)
    arms = [_phi_arm(s_grid, 1.0), _phi_arm(s_grid, -1.0)]
    pts1 = _comb_map(np.vstack(g_parts + arms))
    q1 = np.concatenate(
        [np.zeros(sum(map(len, g_parts)))]
        + [1.0 / (1.0 + s_grid)] * 2
    )
    tag1 = np.concatenate(
        [np.full(sum(map(len, g_parts)), TAG_BASE)]
        + [np.full(len(s_grid), TAG_ARC)] * 2
    )
    mesh1 = max(
        _mesh_of(_comb_map(arms[0])), _mesh_of(_comb_map(g_parts[0])), 1.0 / (1.0 + S)
    )
    x1 = Cloud(pts1, mesh1, "comb_X1", {"q": q1, "tag": tag1})
    # --- X ---
    pieces = []
    ds_k = 1.0 / (2 * samples)  # coarser along the sweep, still sub-mesh
    for n in range(1, cycles + 1):
        sn = np.arange(0.0, n, ds_k)
        up, dn = _phi_arm(sn, 1.0), _phi_arm(sn, -1.0)
        cross = np.linspace(up[-1], dn[-1], max(2, 2 * samples))
        pieces += [up, cross, dn[::-1], dn, cross[::-1], up[::-1]]
    plane = np.vstack(pieces)
    cum = np.concatenate(
        [[0.0], np.cumsum(np.linalg.norm(np.diff(plane, axis=0), axis=1))]
    )
    # parameter proportional to swept length; one cycle ~ unit speed
    tpar = cum / cum[-1] * (6.0 * cycles)
    k_pts = np.column_stack([_comb_map(plane), 1.0 / (1.0 + tpar)])
    base = np.column_stack([pts1, np.zeros(len(pts1))])
    a_arc = np.column_stack(
        [np.tile(_comb_map([[-1.0, 1.0]]), (65, 1)), np.linspace(0.0, 1.0, 65)]
    )
    pts = np.vstack([k_pts, base, a_arc])
    q = np.concatenate([1.0 / (1.0 + tpar), np.zeros(len(base)), np.full(65, 1.0)])
    tag = np.concatenate(
        [np.full(len(k_pts), TAG_ARC), np.full(len(base), TAG_LIMIT), np.full(65, TAG_BASE)]
    )
    mesh = max(mesh1, _mesh_of(k_pts), 1.0 / (1.0 + tpar[-1]) / 8.0)
    x = Cloud(pts, mesh, "comb_X", {"q": q, "tag": tag})
    return x1, x


def comb_arm_tail(which: int, s_min: float, s_max: float, samples: int = 4000) -> Cloud:
    """Tail sample of one comb arm over parameter [s_min, s_max]."""
    s = np.linspace(s_min, s_max, samples)
    pts = _comb_map(_phi_arm(s, 1.0 if which == 1 else -1.0))
    return Cloud(pts, _mesh_of(pts), f"comb_L{which}_tail")
