"""Monotone-decomposition analysis of sampled continua.

Quotient graphs are plain combinatorial objects; the metric side reads
a Cloud together with a projection (a coordinate index or an aux
channel) and studies its fibers: diameter profiles, detection of
nondegenerate fibers, degenerate-fiber density, and the window-search
approximation test against a declared target subcontinuum.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .gallery import ArcFamily
from .hilbert import (
    Cloud,
    DomainError,
    ResolutionError,
    _pair_block,
    weights,
)


# ---------------------------------------------------------------------------
# combinatorial graphs


@dataclass(frozen=True)
class TopoGraph:
    """Topological graph: vertex labels plus unordered edges with
    multiplicity (loops allowed)."""

    vertices: tuple
    edges: tuple  # pairs of vertex labels

    def __post_init__(self):
        vs = set(self.vertices)
        if not vs:
            raise DomainError("graph needs at least one vertex")
        for u, v in self.edges:
            if u not in vs or v not in vs:
                raise DomainError(f"edge ({u}, {v}) references unknown vertex")

    def valence(self, v) -> int:
        n = 0
        for a, b in self.edges:
            n += (a == v) + (b == v)
        return n

    def endpoints(self) -> tuple:
        return tuple(v for v in self.vertices if self.valence(v) == 1)

    def branching_points(self) -> tuple:
        return tuple(v for v in self.vertices if self.valence(v) >= 3)

    def is_connected(self) -> bool:
        if len(self.vertices) == 1:
            return True
        parent = {v: v for v in self.vertices}

        def find(v):
            while parent[v] != v:
                parent[v] = parent[parent[v]]
                v = parent[v]
            return v

        for u, v in self.edges:
            parent[find(u)] = find(v)
        roots = {find(v) for v in self.vertices}
        return len(roots) == 1


def betti1(g: TopoGraph) -> int:
    """First Betti number E - V + 1 of a connected graph."""
    if not g.is_connected():
        raise DomainError("betti1 requires a connected graph")
    if any(g.valence(v) == 0 for v in g.vertices) and len(g.vertices) > 1:
        raise DomainError("isolated vertices are not allowed")
    return len(g.edges) - len(g.vertices) + 1


# ---------------------------------------------------------------------------
# fiber analysis

DEGENERACY_LADDER = tuple(2.0**-k for k in range(3, 9))


@dataclass(frozen=True)
class FiberProfile:
    grid: np.ndarray
    diameters: np.ndarray
    tranche_bases: tuple
    degenerate_fraction: dict = field(default_factory=dict)
    threshold: float = 0.0

    def to_json(self) -> dict:
        return {
            "grid": self.grid.tolist(),
            "diameters": self.diameters.tolist(),
            "tranches": list(self.tranche_bases),
            "degenerateFraction": {repr(k): v for k, v in self.degenerate_fraction.items()},
            "threshold": self.threshold,
        }


def _projection_values(cloud: Cloud, projection) -> np.ndarray:
    if isinstance(projection, str):
        if projection.startswith("aux:"):
            projection = projection[4:]
        if projection not in cloud.aux:
            raise DomainError(f"cloud has no aux channel {projection!r}")
        return np.asarray(cloud.aux[projection], float)
    k = int(projection)
    if not 0 <= k < cloud.dim:
        raise DomainError("projection coordinate out of range")
    return cloud.points[:, k]


def _fiber_diameter(pts: np.ndarray) -> float:
    """Weighted diameter: exact pairwise for small fibers, weighted
    bounding-box sum (an upper bound within x2) for large ones."""
    if len(pts) < 2:
        return 0.0
    w = weights(pts.shape[1])
    if len(pts) <= 512:
        u = pts * w
        return float(_pair_block(u, u).max())
    return float((pts.max(axis=0) - pts.min(axis=0)) @ w)


def fiber_profile(cloud: Cloud, projection="aux:q", grid: int = 64) -> FiberProfile:
    """Fiber diameters of the projection over a uniform base grid.

    Detected tranche bases are the per-plateau argmax cells whose
    diameter exceeds 10 * (grid step + mesh)."""
    vals = _projection_values(cloud, projection)
    lo, hi = float(vals.min()), float(vals.max())
    span = max(hi - lo, 1e-12)
    step = span / grid
    if step < cloud.mesh:
        raise ResolutionError("base grid finer than the cloud mesh")
    centers = lo + (np.arange(grid) + 0.5) * step
    half = step / 2.0 + cloud.mesh
    order = np.argsort(vals)
    sv = vals[order]
    diam = np.zeros(grid)
    for i, c in enumerate(centers):
        a, b = np.searchsorted(sv, [c - half, c + half])
        diam[i] = _fiber_diameter(cloud.points[order[a:b]])
    thr = 10.0 * (step + cloud.mesh)
    above = diam > thr
    groups = []
    i = 0
    while i < grid:
        if above[i]:
            j = i
            while j + 1 < grid and above[j + 1]:
                j += 1
            groups.append([i, j])
            i = j + 1
        else:
            i += 1
    # hysteresis: a dip of <= 2 cells that stays above half threshold is
    # sampling noise at an oscillation fringe, not a new fiber
    merged = []
    for g in groups:
        if merged:
            lo = merged[-1][1] + 1
            if g[0] - lo <= 2 and np.all(diam[lo : g[0]] > thr / 2.0):
                merged[-1][1] = g[1]
                continue
        merged.append(g)
    bases = [
        float(centers[i + int(np.argmax(diam[i : j + 1]))]) for i, j in merged
    ]
    frac = {
        eps: float(np.mean(diam < eps)) for eps in DEGENERACY_LADDER
    }
    return FiberProfile(centers, diam, tuple(bases), frac, thr)


# ---------------------------------------------------------------------------
# approximation test


@dataclass(frozen=True)
class ApproxResult:
    minimum: float
    window: tuple
    success: bool
    eps: float
    per_extra: tuple = ()

    def to_json(self) -> dict:
        return {
            "min": self.minimum,
            "witness": list(self.window),
            "success": self.success,
            "eps": self.eps,
        }


def _arc_points(cloud: Cloud) -> tuple[np.ndarray, np.ndarray]:
    """Quasi-arc points (tag 1 if tagged) sorted by their q parameter."""
    if "q" not in cloud.aux:
        raise DomainError("approximation test needs an aux 'q' channel")
    q = np.asarray(cloud.aux["q"], float)
    pts = cloud.points
    if "tag" in cloud.aux:
        m = np.asarray(cloud.aux["tag"], float) == 1.0
        pts, q = pts[m], q[m]
    order = np.argsort(q, kind="stable")
    return pts[order], q[order]


def approximation_test(
    cloud: Cloud, Y0: Cloud, family: ArcFamily, eps: float
) -> ApproxResult:
    """Best Hausdorff distance between Y0 and a parameter window of the
    cloud's quasi-arc, over the finite declared family.

    Grid windows are scanned with running segment minima/maxima (cost
    O(m^2 |Y0|)); extra windows are evaluated directly."""
    if family is None or (len(family.boundaries) < 2 and not family.extra):
        raise DomainError("empty arc family")
    pts, q = _arc_points(cloud)
    d = max(pts.shape[1], Y0.dim)
    w = weights(d)

    def lift(a):
        if a.shape[1] < d:
            a = np.hstack([a, np.zeros((len(a), d - a.shape[1]))])
        return a * w

    ua = lift(pts)
    uy = lift(Y0.points)
    m = len(family.boundaries) - 1
    starts = np.searchsorted(q, family.boundaries)
    seg_min = np.full((len(uy), m), np.inf)  # per-Y0-point min over segment
    seg_max = np.full(m, -np.inf)  # max over segment of dist to Y0
    for j in range(m):
        a, b = starts[j], starts[j + 1]
        if a == b:
            continue
        block = _pair_block(uy, ua[a:b])
        seg_min[:, j] = block.min(axis=1)
        seg_max[j] = block.min(axis=0).max()
    best, window = np.inf, (0.0, 0.0)
    for i in range(m):
        if not np.isfinite(seg_max[i]):
            continue
        cur = seg_min[:, i].copy()
        curmax = seg_max[i]
        for j in range(i, m):
            if j > i:
                if not np.isfinite(seg_max[j]):
                    continue
                np.minimum(cur, seg_min[:, j], out=cur)
                curmax = max(curmax, seg_max[j])
            dh = max(float(cur.max()), curmax)
            if dh < best:
                best, window = dh, (
                    float(family.boundaries[i]),
                    float(family.boundaries[j + 1]),
                )
    per_extra = []
    for a, b in family.extra:
        ia, ib = np.searchsorted(q, [a, b])
        if ib <= ia:
            continue
        block = _pair_block(uy, ua[ia:ib])
        dh = max(float(block.min(axis=1).max()), float(block.min(axis=0).max()))
        per_extra.append(((a, b), dh))
        if dh < best:
            best, window = dh, (float(a), float(b))
    if not np.isfinite(best):
        raise DomainError("arc family produced no populated window")
    return ApproxResult(best, window, best < eps, eps, tuple(per_extra))


def tranche_bound_check(
    cloud: Cloud, quotient: TopoGraph, projection="aux:q", grid: int = 64
) -> dict:
    """Detected tranche count against the quotient's first Betti number."""
    prof = fiber_profile(cloud, projection, grid)
    b = betti1(quotient)
    return {
        "tranches": len(prof.tranche_bases),
        "bases": list(prof.tranche_bases),
        "betti1": b,
        "ok": len(prof.tranche_bases) <= b,
    }
