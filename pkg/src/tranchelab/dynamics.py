"""Shift dynamics on the truncated Mahavier product.

The shift drops the leading coordinate; admissibility of a point means
every consecutive coordinate pair satisfies the tent relation.  The two
vertical relation segments over 0 and 1 make every binary word
realizable as a point, which yields the constructive log 2 entropy
bound; exactness is witnessed through the fiber self-similarity of the
product (the shift of a full fiber is a whole lower-level copy).
"""

from __future__ import annotations

import math

import numpy as np

from .curves import tent_relation, tent_value
from .hilbert import Cloud, DomainError, product_metric, weights
from .mahavier import build_X_n


def is_admissible(x, tol: float = 1e-9) -> bool:
    x = np.asarray(x, float)
    return all(tent_relation(x[i], x[i + 1], tol) for i in range(x.size - 1))


def sigma(x) -> np.ndarray:
    """Left shift: drop the leading coordinate."""
    x = np.asarray(x, float)
    if x.size < 2:
        raise DomainError("cannot shift a point with fewer than 2 coordinates")
    return x[1:].copy()


def sigma_orbit(x, n: int, tol: float = 1e-9) -> list:
    """(x, sigma x, ..., sigma^n x); raises if x is not admissible or
    dries out of coordinates."""
    x = np.asarray(x, float)
    if n >= x.size:
        raise DomainError("orbit longer than the available coordinates")
    if not is_admissible(x, tol):
        raise DomainError("point violates the tent relation")
    orbit = [x.copy()]
    for _ in range(n):
        orbit.append(sigma(orbit[-1]))
    return orbit


def realize_itinerary(word, D: int = 12) -> np.ndarray:
    """Point whose i-th coordinate is the i-th symbol of the binary
    word (zero-padded): admissible because the relation contains the
    full vertical segments over both 0 and 1."""
    word = [int(b) for b in word]
    if len(word) > D:
        raise DomainError("word longer than the coordinate budget")
    if any(b not in (0, 1) for b in word):
        raise DomainError("itinerary symbols must be 0 or 1")
    x = np.zeros(D)
    x[: len(word)] = word
    return x


def orbit_separation(x, y, n: int) -> float:
    """Dynamical distance max_{0<=i<=n} d(sigma^i x, sigma^i y) on the
    coordinates both orbits retain."""
    x, y = np.asarray(x, float), np.asarray(y, float)
    if n >= min(x.size, y.size):
        raise DomainError("orbit segment exceeds coordinates")
    best = 0.0
    for i in range(n + 1):
        a, b = x[i:], y[i:]
        d = min(a.size, b.size)
        best = max(best, product_metric(a[:d], b[:d]))
    return best


def entropy_lower_bound(
    n: int, eps: float, budget: int = 4096, D: int = 12, seed: int = 0
) -> float:
    """(1/n) log of a greedy (n, eps)-separated set.

    Candidates are the 2^min(n+1, D) itinerary points in lexicographic
    order followed by seeded deterministic orbits; greedy insertion
    keeps the result reproducible."""
    if n < 1 or n >= D:
        raise DomainError("need 1 <= n < D")
    kbits = min(n + 1, D)
    cands = []
    for m in range(min(2**kbits, budget)):
        bits = [(m >> (kbits - 1 - j)) & 1 for j in range(kbits)]
        cands.append(realize_itinerary(bits, D))
    rng = np.random.default_rng(seed)
    tries = 0
    while len(cands) < budget and tries < 4 * budget:
        tries += 1
        x = np.empty(D)
        x[0] = rng.random()
        for i in range(1, D):
            x[i] = tent_value(x[i - 1])
        if is_admissible(x):
            cands.append(x)
    w = weights(D)
    sel: list = []
    for c in cands:
        if sel:
            diff = np.abs(np.asarray(sel) - c)
            worst = np.zeros(len(sel))
            for i in range(n + 1):
                np.maximum(worst, diff[:, i:] @ w[: D - i], out=worst)
            if worst.min() < eps:
                continue
        sel.append(c)
    if len(sel) <= 1:
        return 0.0
    return math.log(len(sel)) / n


def itinerary_separation_floor(D: int = 12) -> float:
    """Worst-case separation of distinct itinerary points: the first
    disagreeing coordinate carries weight 1/2, minus the tail that the
    truncation can cancel."""
    return 0.5 - 2.0 ** -(D + 1)


def exactness_witness(U: Cloud, maxN: int, samples: int = 1500, budget: int = 64):
    """Smallest n <= maxN with d_H(sigma^n(U), lower-level product) <=
    3 * mesh; returns the failure report otherwise.

    sigma^n of a cloud drops n leading coordinates; the reference at
    step n is the product built at the correspondingly reduced sampling
    rate, mirroring the fiber self-similarity."""
    from .hilbert import hausdorff

    best = (None, np.inf)
    pts = U.points
    for n in range(1, maxN + 1):
        if pts.shape[1] <= n:
            break
        shifted = Cloud(np.unique(pts[:, n:], axis=0), U.mesh, f"sigma^{n}(U)")
        ref = build_X_n(
            pts.shape[1] - n - 1, max(64, samples // 2**n), budget=budget
        )
        tol = 3.0 * max(U.mesh, ref.mesh)
        # first-coordinate mismatch alone lower-bounds d_H at weight 1/2
        a = np.unique(shifted.points[:, 0])
        b = np.unique(ref.points[:, 0])
        ia = np.clip(np.searchsorted(b, a), 1, b.size - 1)
        ib = np.clip(np.searchsorted(a, b), 1, a.size - 1)
        lb = 0.5 * max(
            np.minimum(np.abs(a - b[ia - 1]), np.abs(a - b[ia])).max(),
            np.minimum(np.abs(b - a[ib - 1]), np.abs(b - a[ib])).max(),
        )
        if lb > tol:
            if lb < best[1]:
                best = (n, float(lb))
            continue
        d = hausdorff(shifted, ref)
        if d <= tol:
            return n
        if d < best[1]:
            best = (n, d)
    return {"failed": True, "best_n": best[0], "best_dH": best[1], "maxN": maxN}


def tranche_fiber(level: int, dim: int = 12, samples: int = 1500, budget: int = 64) -> Cloud:
    """Sample of the fiber over the level-`level` base point 0 (a full
    tranche): the level-fold zero-prefixed copy of the lower product."""
    if level < 1 or level >= dim:
        raise DomainError("need 1 <= level < dim")
    core = build_X_n(dim - level - 1, max(64, samples // 2**level), budget=budget)
    pts = np.hstack([np.zeros((len(core), level)), core.points])
    return Cloud(pts, core.mesh, f"tranche_fiber[{level}]")
