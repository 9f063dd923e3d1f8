"""Shift-invariant product-space samplers.

Two families of clouds: orbit closures of the unit-landing oscillatory
map (a nested union of right-shifted copies accumulating at the origin),
and admissible-tuple spaces of the tent relation, where an orbit
coordinate hitting 0 or 1 opens a full vertical segment and the set of
continuations branches.  Both builders are recursive and reuse the same
parameter grids level to level, so consecutive clouds differ only in
their deepest coordinate block.
"""

from __future__ import annotations

import numpy as np

from . import curves
from .hilbert import (
    Cloud,
    ConstructionError,
    DomainError,
    hausdorff,
    prepend_cloud,
    shift_cloud,
    weights,
)

_MIN_SAMPLES = 64


def _warsaw_grid(samples: int) -> np.ndarray:
    """Deterministic parameter grid for the unit-landing map.

    Union of a uniform grid on [t_cut, 1] and a grid uniform in 1/t with
    16 points per half-oscillation, cut off at t_cut ~ 1/samples where
    the curve tail is replaced by its shifted limit copy.
    """
    t_cut = max(1e-4, 4.0 / samples)
    uni = np.linspace(t_cut, 1.0, samples)
    u = np.arange(1.0, 1.0 / t_cut, np.pi / 16.0)
    osc = 1.0 / u[u >= 1.0]
    grid = np.unique(np.concatenate([uni, osc, [t_cut, 1.0]]))
    return grid[(grid >= t_cut) & (grid <= 1.0)]


def build_A_n(n: int, samples: int = 2000, label: str | None = None) -> Cloud:
    """Cloud of the n-th orbit-prefix space of the unit-landing map.

    Level n is the orbit curve {(t, f(t), ..., f^n(t))} over a fixed
    grid, united with the right-shifted level n-1 cloud and the origin.
    Level -1 would be empty; level 0 is the base segment with its
    oscillation limit handled by the shifted copies at higher levels.
    """
    if n < 0:
        raise ConstructionError("n >= 0 required")
    if samples < _MIN_SAMPLES:
        samples = _MIN_SAMPLES
    t = _warsaw_grid(samples)
    t_cut = t[0]
    cols = [t]
    cur = t
    for _ in range(n):
        cur = curves.warsaw_f(cur)
        cols.append(cur)
    curve = np.column_stack(cols)
    mesh = max(1.0 / samples, t_cut)
    pts = [curve, np.zeros((1, n + 1))]
    if n > 0:
        sub = build_A_n(n - 1, max(_MIN_SAMPLES, samples // 2))
        shifted = shift_cloud(sub, "right").pad(n + 1)
        pts.append(shifted.points)
        mesh = max(mesh, t_cut / 2.0 + sub.mesh / 2.0)
    cloud = Cloud(np.vstack(pts), mesh, label or f"A_{n}")
    return cloud


def build_A(dim: int = 12, samples: int = 2000) -> Cloud:
    """Truncation of the full orbit closure to the leading dim block.

    Coincides with the level dim-1 prefix space up to the tail weight
    2**-dim, which is below the declared mesh for default parameters.
    """
    if dim < 1:
        raise ConstructionError("dim >= 1 required")
    return build_A_n(dim - 1, samples, label="A")


# ---------------------------------------------------------------------------
# admissible tuples of the tent relation


def _branch_values(budget: int) -> np.ndarray:
    """Subsample of a full vertical segment, endpoints included."""
    return np.linspace(0.0, 1.0, max(2, budget))


def _continuations(x: float, depth: int, budget: int) -> list[list[float]]:
    """Sampled forward continuations of length `depth` from x.

    Branch budgets decay geometrically with nesting; an exhausted budget
    continues with the all-zero tail, which is always admissible (0
    opens a full vertical segment containing 0).  Deep branches sit at
    coordinate weights far below the declared mesh.
    """
    if depth == 0:
        return [[]]
    if x == 0.0 or x == 1.0:
        if budget < 2:
            return [[0.0] * depth]
        out = []
        for v in _branch_values(budget):
            for rest in _continuations(float(v), depth - 1, budget // 8):
                out.append([float(v)] + rest)
        return out
    v = curves.tent_value(x)
    # Orbits launched from exact rational base points accumulate rounding
    # of order slope**depth * eps; snap near-hits of {0, 1} so their
    # vertical fibers still materialize.
    if abs(v) < 1e-11:
        v = 0.0
    elif abs(v - 1.0) < 1e-11:
        v = 1.0
    return [[v] + rest for rest in _continuations(v, depth - 1, budget)]


def build_X_n(
    n: int,
    samples: int = 1500,
    budget: int = 64,
    label: str | None = None,
) -> Cloud:
    """Admissible (n+1)-tuples of the tent relation as a cloud.

    A first-coordinate grid (uniform points plus the exact interval
    endpoints and midpoints, where orbits hit 0 or 1 and branch) is
    propagated forward; each hit of {0, 1} opens a vertical segment
    subsampled to a geometrically decaying budget.  The fibers over the
    base points 0 and 1 are included as exactly prepended copies of the
    level n-1 cloud, which realizes the self-similarity of the space
    under the left shift.
    """
    if n < 0:
        raise ConstructionError("n >= 0 required")
    if samples < _MIN_SAMPLES:
        samples = _MIN_SAMPLES
    fam = curves.TentFamily()
    special = [0.0, 1.0]
    for _, lo, hi, _lam in fam.intervals():
        special.append(float(lo))
        special.append(float(hi))
        special.append(float((lo + hi) / 2))
    if n >= 2:
        # depth-2 base points: their orbit hits {0, 1} one step later, so
        # the vertical fiber only appears when they are on the grid exactly
        special.extend(float(b) for b in curves.tranche_bases(2))
    grid = np.unique(np.concatenate([np.linspace(0.0, 1.0, samples), special]))
    rows: list[list[float]] = []
    for x0 in grid:
        if n > 0 and (x0 == 0.0 or x0 == 1.0):
            continue  # these fibers are the exact prepended copies below
        for cont in _continuations(float(x0), n, budget):
            rows.append([float(x0)] + cont)
    pts = [np.asarray(rows, dtype=float).reshape(len(rows), n + 1)]
    mesh = max(1.0 / samples, 0.25 / max(2, budget))
    if n > 0:
        sub = build_X_n(n - 1, max(_MIN_SAMPLES, samples // 2), budget)
        for base in (0.0, 1.0):
            pts.append(prepend_cloud(sub, base).points)
        mesh = max(mesh, sub.mesh / 2.0)
    cloud = Cloud(np.vstack(pts), mesh, label or f"X_{n}")
    return cloud


def build_Xhat(dim: int = 12, samples: int = 1500, budget: int = 64) -> Cloud:
    """Depth-dim truncation of the full admissible-sequence space."""
    if dim < 1:
        raise ConstructionError("dim >= 1 required")
    return build_X_n(dim - 1, samples, budget, label="Xhat")


def fiber(cloud: Cloud, base: float, delta: float | None = None) -> Cloud:
    """Slab fiber of the first-coordinate projection.

    Returns the sub-cloud with |x0 - base| <= delta (default: the
    cloud's mesh).  Raises DomainError when the slab is empty.
    """
    if delta is None:
        delta = cloud.mesh
    mask = np.abs(cloud.points[:, 0] - base) <= delta
    if not np.any(mask):
        raise DomainError("empty fiber slab")
    aux = {k: v[mask] for k, v in cloud.aux.items()}
    return Cloud(cloud.points[mask], cloud.mesh, f"{cloud.label}|x0={base:g}", aux)


def convergence_profile(max_n: int, samples: int = 2000) -> list[tuple[int, float]]:
    """Hausdorff gaps between consecutive orbit-prefix clouds."""
    out = []
    prev = build_A_n(0, samples)
    for n in range(1, max_n + 1):
        cur = build_A_n(n, samples)
        out.append((n - 1, hausdorff(prev.pad(cur.dim), cur)))
        prev = cur
    return out


def coordinate_rigidity_check(cloud: Cloud, pairs: int = 2000, seed: int = 0) -> float:
    """Max violation of the relation along consecutive coordinates.

    For sampled tuples that never branched, consecutive coordinates must
    satisfy the tent relation; returns the largest residual found over a
    random subsample (0.0 means fully rigid).
    """
    rng = np.random.default_rng(seed)
    idx = rng.choice(len(cloud), size=min(pairs, len(cloud)), replace=False)
    worst = 0.0
    for i in idx:
        row = cloud.points[i]
        for k in range(cloud.dim - 1):
            x, y = float(row[k]), float(row[k + 1])
            if x == 0.0 or x == 1.0:
                break  # branched: any continuation is admissible
            worst = max(worst, abs(y - curves.tent_value(x)))
    return worst
