"""Geometry of the truncated Hilbert cube.

Points live in [0,1]^dim, thought of as the leading block of a sequence
space in which coordinate k carries weight 2**-(k+1).  The distance
between two sequences is the weighted l1 sum of coordinate gaps, so the
tail beyond dimension D can never contribute more than 2**-D.  All set
operations in this package (Hausdorff distance, shifts, fibers) are on
finite point clouds in this metric.
"""

from __future__ import annotations

import json
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy.spatial.distance import cdist

DEFAULT_DIM = 12
COORD_TOL = 1e-12

THREADS_ENV = "TRANCHE_LAB_THREADS"


class DomainError(ValueError):
    """A coordinate or parameter left its admissible domain."""


class ResolutionError(ValueError):
    """A request exceeded what the configured resolution can resolve."""


class ConstructionError(ValueError):
    """A builder received arguments that cannot produce a valid object."""


def thread_count() -> int:
    """Parallelism cap, controlled by the TRANCHE_LAB_THREADS env var."""
    raw = os.environ.get(THREADS_ENV, "1")
    try:
        n = int(raw)
    except ValueError:
        return 1
    return max(1, n)


def weights(dim: int) -> np.ndarray:
    """Coordinate weights 2**-(k+1) for k = 0..dim-1."""
    return 2.0 ** -(np.arange(dim, dtype=float) + 1.0)


def as_point(x, dim: int | None = None) -> np.ndarray:
    """Validate and zero-pad a coordinate sequence to a point array."""
    p = np.asarray(x, dtype=float)
    if p.ndim != 1:
        raise DomainError("a point must be a 1-d coordinate sequence")
    if p.size == 0:
        raise DomainError("a point needs at least one coordinate")
    if np.any(p < -COORD_TOL) or np.any(p > 1.0 + COORD_TOL):
        raise DomainError("coordinates must lie in [0, 1]")
    p = np.clip(p, 0.0, 1.0)
    if dim is not None:
        if p.size > dim:
            if np.any(p[dim:] != 0.0):
                raise DomainError("nonzero coordinates beyond requested dimension")
            p = p[:dim]
        elif p.size < dim:
            p = np.concatenate([p, np.zeros(dim - p.size)])
    return p


def product_metric(x, y) -> float:
    """Weighted l1 distance; zero-padding never changes the value."""
    px = as_point(x)
    py = as_point(y)
    d = max(px.size, py.size)
    px = as_point(px, d)
    py = as_point(py, d)
    return float(np.abs(px - py) @ weights(d))


def right_shift(x) -> np.ndarray:
    """Prepend a zero coordinate; contracts distances by exactly 1/2."""
    p = as_point(x)
    return np.concatenate([[0.0], p])


def half_shift(x) -> np.ndarray:
    """Prepend a zero and halve every coordinate."""
    p = as_point(x)
    return np.concatenate([[0.0], 0.5 * p])


def left_shift(x) -> np.ndarray:
    """Drop the first coordinate (inverse of right_shift on its image)."""
    p = as_point(x)
    if p.size == 1:
        return np.zeros(1)
    return p[1:].copy()


@dataclass(frozen=True)
class Cloud:
    """A finite sample of a compact subset of the truncated cube.

    mesh is the declared sampling fineness: the builder's guarantee (an
    engineering estimate for oscillatory sets) that every intended point
    of the modeled set lies within mesh of some sample.  aux holds
    per-point metadata columns (quotient parameters, color tags, ...)
    aligned with the rows of points.
    """

    points: np.ndarray
    mesh: float
    label: str = ""
    aux: dict = field(default_factory=dict)

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=float)
        if pts.ndim == 1:
            pts = pts[None, :]
        if pts.ndim != 2 or pts.shape[0] == 0:
            raise ConstructionError("a cloud needs a nonempty (N, dim) array")
        if np.any(pts < -COORD_TOL) or np.any(pts > 1.0 + COORD_TOL):
            raise DomainError("cloud coordinates must lie in [0, 1]")
        pts = np.clip(pts, 0.0, 1.0)
        if not (self.mesh > 0.0):
            raise ConstructionError("mesh must be positive")
        aux = dict(self.aux)
        for k, v in aux.items():
            arr = np.asarray(v)
            if arr.shape[0] != pts.shape[0]:
                raise ConstructionError(f"aux column {k!r} has wrong length")
            aux[k] = arr
        pts.setflags(write=False)
        for v in aux.values():
            v.setflags(write=False)
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "aux", aux)

    def __len__(self) -> int:
        return self.points.shape[0]

    @property
    def dim(self) -> int:
        return self.points.shape[1]

    def scaled(self) -> np.ndarray:
        """Points with coordinates premultiplied by the metric weights."""
        return self.points * weights(self.dim)

    def pad(self, dim: int) -> "Cloud":
        if dim == self.dim:
            return self
        if dim < self.dim:
            if np.any(self.points[:, dim:] != 0.0):
                raise DomainError("cannot truncate nonzero coordinates")
            return Cloud(self.points[:, :dim], self.mesh, self.label, self.aux)
        ext = np.zeros((len(self), dim - self.dim))
        return Cloud(np.hstack([self.points, ext]), self.mesh, self.label, self.aux)

    def unique(self) -> "Cloud":
        """Deduplicated copy (drops aux columns if rows collapse)."""
        pts, idx = np.unique(self.points, axis=0, return_index=True)
        aux = {k: v[idx] for k, v in self.aux.items()}
        return Cloud(pts, self.mesh, self.label, aux)

    def to_json(self) -> str:
        payload = {
            "label": self.label,
            "mesh": self.mesh,
            "dim": self.dim,
            "points": self.points.tolist(),
            "aux": {k: np.asarray(v).tolist() for k, v in self.aux.items()},
        }
        return json.dumps(payload, sort_keys=True)

    @staticmethod
    def from_json(text: str) -> "Cloud":
        payload = json.loads(text)
        return Cloud(
            np.asarray(payload["points"], dtype=float),
            payload["mesh"],
            payload.get("label", ""),
            {k: np.asarray(v) for k, v in payload.get("aux", {}).items()},
        )

    def to_csv(self, path, columns: int | None = None) -> None:
        """Write the leading coordinate columns (and aux) as CSV."""
        cols = self.dim if columns is None else min(columns, self.dim)
        names = [f"x{i}" for i in range(cols)] + list(self.aux)
        data = [self.points[:, :cols]] + [
            np.asarray(self.aux[k], dtype=float)[:, None] for k in self.aux
        ]
        mat = np.hstack(data)
        header = ",".join(names)
        np.savetxt(path, mat, delimiter=",", header=header, comments="")


def cloud_from_points(points, mesh, label="", aux=None) -> Cloud:
    return Cloud(np.asarray(points, dtype=float), mesh, label, aux or {})


def shift_cloud(cloud: Cloud, kind: str) -> Cloud:
    """Apply a coordinate shift to every point of a cloud.

    kind: 'right' prepends 0, 'half' prepends 0 and halves, 'left' drops
    the leading coordinate.
    """
    pts = cloud.points
    if kind == "right":
        out = np.hstack([np.zeros((len(cloud), 1)), pts])
    elif kind == "half":
        out = np.hstack([np.zeros((len(cloud), 1)), 0.5 * pts])
    elif kind == "left":
        out = pts[:, 1:] if cloud.dim > 1 else np.zeros((len(cloud), 1))
        if out.shape[1] == 0:
            out = np.zeros((len(cloud), 1))
    else:
        raise ConstructionError(f"unknown shift kind {kind!r}")
    return Cloud(out, cloud.mesh, cloud.label, cloud.aux)


def prepend_cloud(cloud: Cloud, value: float) -> Cloud:
    """Prepend a constant coordinate (embeds a cloud into a fiber)."""
    col = np.full((len(cloud), 1), float(value))
    return Cloud(np.hstack([col, cloud.points]), cloud.mesh, cloud.label, cloud.aux)


def _pair_block(ua: np.ndarray, ub: np.ndarray) -> np.ndarray:
    """Shared distance kernel: both Hausdorff paths call exactly this."""
    return cdist(ua, ub, metric="cityblock")


def _directed_brute(ua: np.ndarray, ub: np.ndarray) -> float:
    """sup over rows of min over columns, computed from the full matrix."""
    n = ua.shape[0]
    chunk = max(1, min(n, int(4.0e7 // max(1, ub.shape[0]))))
    threads = thread_count()

    def one(i):
        block = _pair_block(ua[i : i + chunk], ub)
        return float(block.min(axis=1).max())

    starts = range(0, n, chunk)
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as ex:
            vals = list(ex.map(one, starts))
    else:
        vals = [one(i) for i in starts]
    return max(vals)


def _directed_fast(a: np.ndarray, ua: np.ndarray, b: np.ndarray, ub: np.ndarray) -> float:
    """Grid-bucketed directed distance, bit-identical to the brute loop.

    Buckets B on its first two raw coordinates; for each bucket of A it
    expands square rings of cells until the remaining cells' lower bound
    (each further cell is at least one full cell away in coordinate 0 or
    1, whose weights are 1/2 and 1/4) cannot beat the minima already
    found.  Minima are computed by the same kernel as the brute path, so
    the exact argmin pair is always examined and the value is identical.
    """
    nb = b.shape[0]
    # exact-row pre-pass: points present in B verbatim have min 0 and
    # never need a distance block
    av = np.ascontiguousarray(a).view([("", a.dtype)] * a.shape[1]).ravel()
    bv = np.ascontiguousarray(b).view([("", b.dtype)] * b.shape[1]).ravel()
    matched = np.isin(av, bv)
    if matched.all():
        return 0.0
    keep = np.nonzero(~matched)[0]
    a, ua = a[keep], ua[keep]
    # coarse cells keep the python-level ring loop short; correctness
    # does not depend on the cell size, only the stopping bound does
    cell = 1.0 / max(2.0, min(8.0, np.sqrt(nb) / 8.0))
    kb = np.floor(b[:, :2] / cell).astype(np.int64) if b.shape[1] >= 2 else None
    if kb is None or b.shape[1] < 2:
        return _directed_brute(ua, ub)
    # bucket index maps
    bkeys, binv = np.unique(kb, axis=0, return_inverse=True)
    border = np.argsort(binv, kind="stable")
    bstarts = np.searchsorted(binv[border], np.arange(bkeys.shape[0] + 1))
    bucket_of = {(int(k[0]), int(k[1])): i for i, k in enumerate(bkeys)}
    ka = np.floor(a[:, :2] / cell).astype(np.int64)
    akeys, ainv = np.unique(ka, axis=0, return_inverse=True)
    max_ring = int(np.ceil(1.0 / cell)) + 2
    worst = 0.0
    for gi, key in enumerate(akeys):
        rows = np.nonzero(ainv == gi)[0]
        pts = ua[rows]
        best = np.full(rows.size, np.inf)
        active = np.arange(rows.size)
        kx, ky = int(key[0]), int(key[1])
        for r in range(0, max_ring + 1):
            # cells of ring r can contain points no closer than this
            lb = 0.25 * cell * max(0, r - 1)
            if active.size == 0 or lb >= best[active].max():
                break
            idxs = []
            if r == 0:
                cand_cells = [(kx, ky)]
            else:
                cand_cells = []
                for dx in range(-r, r + 1):
                    for dy in (-r, r):
                        cand_cells.append((kx + dx, ky + dy))
                for dy in range(-r + 1, r):
                    for dx in (-r, r):
                        cand_cells.append((kx + dx, ky + dy))
            for c in cand_cells:
                j = bucket_of.get(c)
                if j is not None:
                    idxs.append(border[bstarts[j] : bstarts[j + 1]])
            if idxs:
                cand = np.concatenate(idxs)
                ubc = ub[cand]
                seg_pts = pts[active]
                step = max(1, int(2.0e7 // max(1, ubc.shape[0])))
                for i0 in range(0, seg_pts.shape[0], step):
                    seg = seg_pts[i0 : i0 + step]
                    cstep = max(1, int(2.0e7 // max(1, seg.shape[0])))
                    got = np.full(seg.shape[0], np.inf)
                    for j0 in range(0, ubc.shape[0], cstep):
                        block = _pair_block(seg, ubc[j0 : j0 + cstep])
                        got = np.minimum(got, block.min(axis=1))
                    sel = active[i0 : i0 + step]
                    best[sel] = np.minimum(best[sel], got)
                # a point whose minimum beats the next ring's lower bound
                # is final: further rings cannot change it
                nxt = 0.25 * cell * r
                active = active[best[active] > nxt]
        worst = max(worst, float(best.max()))
    return worst


def hausdorff(A: Cloud, B: Cloud, method: str = "fast") -> float:
    """Hausdorff distance between clouds (zero-padded to a common dim)."""
    d = max(A.dim, B.dim)
    A = A.pad(d)
    B = B.pad(d)
    ua, ub = A.scaled(), B.scaled()
    if method == "brute":
        return max(_directed_brute(ua, ub), _directed_brute(ub, ua))
    if method == "fast":
        return max(
            _directed_fast(A.points, ua, B.points, ub),
            _directed_fast(B.points, ub, A.points, ua),
        )
    raise ConstructionError(f"unknown hausdorff method {method!r}")


def dist_to_cloud(x, cloud: Cloud) -> float:
    """Distance from a point to the nearest cloud sample."""
    p = as_point(x, cloud.dim)
    u = p * weights(cloud.dim)
    return float(_pair_block(u[None, :], cloud.scaled()).min())


def diameter(cloud: Cloud, cap: int = 2048, seed: int = 0) -> float:
    """Metric diameter of a cloud (exact up to cap points, else sampled
    with deterministic subsampling plus a weighted bounding-box upper
    refinement term is NOT added: the value is a lower bound then)."""
    pts = cloud.scaled()
    n = pts.shape[0]
    if n > cap:
        rng = np.random.default_rng(seed)
        keep = rng.choice(n, size=cap, replace=False)
        keep.sort()
        pts = pts[keep]
    block = _pair_block(pts, pts)
    return float(block.max())


@dataclass(frozen=True)
class Tranche:
    """A nondegenerate fiber of a monotone projection.

    base_point is the projection value; fiber_sample a cloud of the
    fiber; level the recursion depth at which the fiber appears.
    """

    base_point: float
    fiber_sample: Cloud
    level: int

    def __post_init__(self):
        if diameter(self.fiber_sample) <= 0.0:
            raise ConstructionError("a tranche fiber must be nondegenerate")
