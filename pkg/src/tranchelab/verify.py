"""Named verification suites with machine-readable reports.

Each suite re-checks a group of module invariants at CLI-friendly
resolutions and returns a plain dict: suite name, overall flag, and one
entry per check with the measured value, its bound, and the direction
of the comparison.  The heavyweight acceptance runs live in the test
suite; these are the quick self-diagnosis versions of the same checks.
"""

from __future__ import annotations

import math

import numpy as np

from . import curves, decomposition, dynamics, gallery, lifting, mahavier, symbolic
from .hilbert import Cloud, hausdorff, shift_cloud, weights


def _check(name: str, value: float, bound: float, op: str = "<=") -> dict:
    if op == "<=":
        ok = value <= bound
    elif op == ">=":
        ok = value >= bound
    elif op == "==":
        ok = value == bound
    else:
        raise ValueError(f"unknown comparison {op!r}")
    return {
        "name": name,
        "value": value,
        "bound": bound,
        "op": op,
        "passed": bool(ok),
    }


def _report(suite: str, checks: list[dict]) -> dict:
    return {
        "suite": suite,
        "passed": all(c["passed"] for c in checks),
        "checks": checks,
    }


def _pairwise_metric(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    w = weights(A.shape[1])
    return np.abs(A[:, None, :] - B[None, :, :]) @ w


def verify_metric(seed: int = 0) -> dict:
    rng = np.random.default_rng(seed)
    checks = []

    D = 12
    X = rng.random((10_000, D))
    Y = rng.random((10_000, D))
    w = weights(D)
    wt = weights(D + 1)
    theta = lambda P: np.hstack([np.zeros((len(P), 1)), P])
    d = np.abs(X - Y) @ w
    d_theta = np.abs(theta(X) - theta(Y)) @ wt
    checks.append(
        _check("theta-halves-distance", float(np.max(np.abs(d_theta - d / 2.0))), 1e-12)
    )
    back = theta(X)[:, 1:]
    checks.append(_check("sigma-theta-identity", float(np.max(np.abs(back - X))), 0.0))

    worst = 0.0
    for _ in range(25):
        nA, nB = rng.integers(50, 600, size=2)
        dim = int(rng.integers(2, 10))
        A = Cloud(rng.random((nA, dim)), 1e-3)
        B = Cloud(rng.random((nB, dim)), 1e-3)
        worst = max(worst, abs(hausdorff(A, B, "fast") - hausdorff(A, B, "brute")))
    checks.append(_check("fast-equals-brute", worst, 0.0))
    return _report("metric", checks)


def verify_mahavier(samples: int = 1200, budget: int = 64) -> dict:
    checks = []
    prev = mahavier.build_A_n(0, samples)
    for n in range(6):
        nxt = mahavier.build_A_n(n + 1, samples)
        bound = 2.0 ** -(n + 2) + max(prev.mesh, nxt.mesh)
        checks.append(
            _check(f"A_{n}-to-A_{n + 1}", hausdorff(prev.pad(n + 2), nxt), bound)
        )
        prev = nxt

    D = 6
    full = mahavier.build_Xhat(D, samples, budget)
    fib = mahavier.fiber(full, 0.0, delta=0.0)
    reduced = mahavier.build_X_n(D - 2, max(64, samples // 2), budget)
    dH = hausdorff(shift_cloud(fib, "left"), reduced)
    checks.append(_check("fiber-self-similar-D6", dH, 2.0 * full.mesh))
    return _report("mahavier", checks)


def verify_depth(entries: int = 300, seed: int = 0) -> dict:
    m = lifting.default_model()
    rng = np.random.default_rng(seed)
    checks = []

    flat = [(k, j) for k in range(1, m.n_max + 1) for j in range(len(m.sequences(k)))]
    take = min(entries, len(flat))
    idx = rng.choice(len(flat), size=take, replace=False)
    worst_end = 0.0
    worst_fwd = 0.0
    old = lifting.mp.mp.dps
    lifting.mp.mp.dps = 30
    try:
        for i in idx:
            k, j = flat[i]
            seq = m.sequences(k)[j]
            lo, hi = m.entry_mp(seq)
            for t in (lo, hi):
                worst_end = max(worst_end, abs(float(m.g_eval(seq, t, precise=True))))
            if k > 1:
                mid = (lo + hi) / 2
                img = m.g_eval(seq, mid, precise=True)
                via = m.g_eval(
                    seq[1:], m.h_mp(seq[0], lifting._f_mp(mid)), precise=True
                )
                worst_fwd = max(worst_fwd, abs(float(img - via)))
    finally:
        lifting.mp.mp.dps = old
    checks.append(_check("endpoint-vanishing", worst_end, 1e-9))
    checks.append(_check("forward-image-identity", worst_fwd, 1e-9))

    grid = m.phi_grid(2, base=1200)
    prev = m.phi_curve(0, grid)
    for n in (1, 2):
        cur = m.phi_curve(n, grid)
        pad = np.hstack([prev, np.zeros((len(prev), cur.shape[1] - prev.shape[1]))])
        sup = float(np.max(np.abs(cur - pad) @ weights(cur.shape[1])))
        checks.append(_check(f"phi-sup-step-{n}", sup, 2.0 ** -(n + 1)))
        prev = cur

    tail = lifting.omega_tail(1, samples=1200, model=m)
    ref = lifting.half_shift_cloud(lifting.build_Xinf(0, samples=1200, model=m))
    checks.append(
        _check("omega-tail-1", hausdorff(tail, ref.pad(tail.dim)), 5.0 * tail.mesh)
    )
    return _report("depth", checks)


def verify_gallery() -> dict:
    checks = []
    wc = gallery.warsaw_circle(4000)
    res = decomposition.approximation_test(
        wc, gallery.warsaw_Y0(), gallery.warsaw_family(4000), eps=3.0 * wc.mesh
    )
    checks.append(_check("warsaw-approximation", res.minimum, 3.0 * wc.mesh))

    good, fam = gallery.star4_good()
    y0 = gallery.star_net_element(3)
    res = decomposition.approximation_test(good, y0, fam, eps=3.0 * good.mesh)
    checks.append(_check("star-good-approximation", res.minimum, 3.0 * good.mesh))

    route = gallery.star4_route()
    res = decomposition.approximation_test(
        route, gallery.star_edges((0, 2)), gallery.star4_route_family(), eps=3.0 * route.mesh
    )
    checks.append(_check("star-route-floor", res.minimum, 0.1, op=">="))

    spiral = gallery.circle_spiral()
    res = decomposition.approximation_test(
        spiral, gallery.circle_arc_Y0(0.25), gallery.spiral_family(), eps=3.0 * spiral.mesh
    )
    checks.append(_check("spiral-quarter-floor", res.minimum, 0.1, op=">="))

    fine = gallery.warsaw_circle(8000)
    prof = decomposition.fiber_profile(fine, projection="aux:q", grid=128)
    checks.append(_check("warsaw-tranche-count", float(len(prof.tranche_bases)), 1.0, op="=="))
    return _report("gallery", checks)


def verify_decomposition() -> dict:
    from fractions import Fraction

    checks = []
    worst = 0.0
    for lvl in range(1, 6):
        gap = curves.longest_tranche_gap(lvl)
        worst = max(worst, abs(float(gap - Fraction(1, 4 ** (lvl - 1)))))
    checks.append(_check("gap-law-levels-1-5", worst, 0.0))

    cloud = mahavier.build_X_n(2, samples=4000, budget=512)
    prof = decomposition.fiber_profile(cloud, projection=0, grid=1000)
    g = np.asarray(prof.grid)
    flagged = g[np.asarray(prof.diameters) > prof.threshold]
    step = float(g[1] - g[0])
    worst = max(
        float(np.min(np.abs(flagged - float(b)))) for b in curves.tranche_bases(2)
    )
    checks.append(_check("level2-base-detection", worst, step))
    return _report("decomposition", checks)


def verify_symbolic() -> dict:
    checks = []
    for name, spec, depth_expect in (
        ("warsaw", symbolic.warsaw_spec(), 1),
        ("chain2", symbolic.chain_spec(2), 2),
        ("comb", symbolic.comb_spec(), 2),
    ):
        v = symbolic.validate(spec)
        checks.append(_check(f"{name}-valid", float(len(v)), 0.0, op="=="))
        _, depth = symbolic.order_and_depth(spec)
        checks.append(_check(f"{name}-depth", float(depth), float(depth_expect), op="=="))

    base = symbolic.chain_spec(2)
    final, records = symbolic.removal_order(base)
    rebuilt = symbolic.replay(final, records)
    checks.append(
        _check("replay-round-trip", float(rebuilt.to_json() == base.to_json()), 1.0, op="==")
    )

    stage = base
    bound_ok = True
    while True:
        b = decomposition.betti1(symbolic.quotient(stage))
        bound_ok = bound_ok and symbolic.tranche_count(stage) <= b
        if not stage.arcs:
            break
        stage, _ = symbolic.remove_outermost(stage)
    checks.append(_check("betti-tranche-bound", float(bound_ok), 1.0, op="=="))

    bad = symbolic.QuasiGraphSpec(
        decomposition.TopoGraph(("u", "v"), (("u", "v"),)),
        (
            symbolic.ArcSpec("L", "u", (0,), (symbolic.LimitRef("L"),)),
        ),
    )
    checks.append(_check("self-limit-rejected", float(len(symbolic.validate(bad)) > 0), 1.0, op="=="))
    return _report("symbolic", checks)


def verify_dynamics() -> dict:
    checks = []
    h = dynamics.entropy_lower_bound(8, 0.4)
    checks.append(_check("entropy-n8", h, math.log(2.0) - 0.05, op=">="))

    U = dynamics.tranche_fiber(1, dim=8)
    n = dynamics.exactness_witness(U, maxN=4)
    checks.append(
        _check("exactness-level-1", float(n) if isinstance(n, int) else -1.0, 1.0, op="==")
    )
    return _report("dynamics", checks)


SUITES = {
    "metric": verify_metric,
    "mahavier": verify_mahavier,
    "depth": verify_depth,
    "gallery": verify_gallery,
    "decomposition": verify_decomposition,
    "symbolic": verify_symbolic,
    "dynamics": verify_dynamics,
}
