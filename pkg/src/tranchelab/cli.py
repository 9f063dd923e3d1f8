"""Command-line front end: build spaces, verify invariants, export
figure data, and analyze quasi-graph spec files.

All outputs are deterministic functions of the arguments plus the
``--seed`` value, so repeated runs produce byte-identical files.  A
key=value config file can preset common options; explicit flags win.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import decomposition, gallery, lifting, mahavier, symbolic, verify
from .hilbert import Cloud, DomainError

_CONFIG_KEYS = {"dim", "samples", "budget", "seed", "grid"}


def _load_config(path: str | None) -> dict:
    """Parse a key=value config file (# comments, blank lines ignored)."""
    if path is None:
        return {}
    out = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"{path}:{lineno}: expected key=value, got {raw!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        if key not in _CONFIG_KEYS:
            raise ValueError(f"{path}:{lineno}: unknown key {key!r}")
        out[key] = int(value)
    return out


def _setting(args, config: dict, key: str, default: int) -> int:
    val = getattr(args, key, None)
    if val is not None:
        return val
    return config.get(key, default)


def _write(path: str | None, text: str) -> None:
    if path is None:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")
    else:
        Path(path).write_text(text if text.endswith("\n") else text + "\n")


# ---------------------------------------------------------------------------
# build


def _build_space(name: str, dim: int, samples: int, budget: int) -> Cloud:
    if name == "warsaw":
        return gallery.warsaw_circle(samples)
    if name == "A":
        return mahavier.build_A(dim, samples)
    if name == "Xhat":
        return mahavier.build_Xhat(dim, samples, budget)
    if name == "X":
        return mahavier.build_X_n(dim - 1, samples, budget)
    if name == "Xinf":
        return lifting.build_Xinf(min(dim, 4), samples)
    raise KeyError(name)


_SPACES = ("warsaw", "A", "Xhat", "X", "Xinf")
# declared tranche counts where the gallery fixes them by construction
_TRANCHES = {"warsaw": 1}


def _cmd_build(args, config) -> int:
    dim = _setting(args, config, "dim", 12)
    samples = _setting(args, config, "samples", 2000)
    budget = _setting(args, config, "budget", 64)
    cloud = _build_space(args.space, dim, samples, budget)
    payload = json.loads(cloud.to_json())
    if args.space in _TRANCHES:
        payload["tranches"] = _TRANCHES[args.space]
    _write(args.out, json.dumps(payload, sort_keys=True))
    return 0


def _cmd_hausdorff(args, config) -> int:
    A = Cloud.from_json(Path(args.a).read_text())
    B = Cloud.from_json(Path(args.b).read_text())
    from .hilbert import hausdorff

    d = max(A.dim, B.dim)
    print(repr(hausdorff(A.pad(d), B.pad(d))))
    return 0


def _cmd_verify(args, config) -> int:
    suite = verify.SUITES[args.suite]
    kwargs = {}
    if args.suite == "metric":
        kwargs["seed"] = _setting(args, config, "seed", 0)
    report = suite(**kwargs)
    _write(args.out, json.dumps(report, sort_keys=True, indent=2))
    return 0 if report["passed"] else 1


# ---------------------------------------------------------------------------
# figure data export


def _tagged_csv(cloud: Cloud, path: Path, columns: int, tag=None) -> None:
    if tag is not None:
        cloud = Cloud(cloud.points, cloud.mesh, cloud.label, {**cloud.aux, "tag": tag})
    cloud.to_csv(path, columns=columns)


def _figure_files(name: str, samples: int, outdir: Path) -> list[Path]:
    import numpy as np

    files = []
    if name == "warsaw":
        cloud = gallery.warsaw_circle(max(samples, 400))
        p = outdir / "warsaw.csv"
        cloud.to_csv(p)
        files.append(p)
    elif name == "A-projections":
        for n in range(3):
            cloud = mahavier.build_A_n(n, max(samples, 300)).pad(3)
            tag = np.where(cloud.points[:, 0] == 0.0, 2.0, 1.0)
            p = outdir / f"A_{n}.csv"
            _tagged_csv(cloud, p, columns=3, tag=tag)
            files.append(p)
    elif name == "X2-projection":
        cloud = mahavier.build_X_n(2, max(samples, 300))
        tag = np.where(np.isin(cloud.points[:, 0], (0.0, 1.0)), 2.0, 1.0)
        p = outdir / "X_2.csv"
        _tagged_csv(cloud, p, columns=3, tag=tag)
        files.append(p)
    elif name == "X1-depth":
        cloud = lifting.build_Xinf(1, max(samples, 300))
        p = outdir / "X1_depth.csv"
        cloud.to_csv(p, columns=3)
        files.append(p)
    elif name == "comb":
        # density per unit of arm parameter and cycle count both scale
        # with the requested sample budget
        x1, x = gallery.comb_pair(
            samples=max(2, samples // 250), cycles=max(8, samples // 40)
        )
        for cloud, stem in ((x1, "comb_X1"), (x, "comb_X")):
            p = outdir / f"{stem}.csv"
            cloud.to_csv(p)
            files.append(p)
    else:
        raise KeyError(name)
    return files


_FIGURES = ("warsaw", "A-projections", "X2-projection", "X1-depth", "comb")


def _cmd_figure(args, config) -> int:
    samples = _setting(args, config, "samples", 2000)
    outdir = Path(args.outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    for p in _figure_files(args.name, samples, outdir):
        print(p)
    return 0


# ---------------------------------------------------------------------------
# symbolic spec files


def _cmd_spec(args, config) -> int:
    spec = symbolic.QuasiGraphSpec.from_json(json.loads(Path(args.file).read_text()))
    if args.action == "validate":
        violations = symbolic.validate(spec)
        report = {
            "valid": not violations,
            "violations": [
                {"condition": v.condition, "arc": v.arc, "detail": v.detail}
                for v in violations
            ],
        }
        _write(args.out, json.dumps(report, sort_keys=True, indent=2))
        return 0 if report["valid"] else 1
    if args.action == "quotient":
        g = symbolic.quotient(spec)
        report = {
            "vertices": list(g.vertices),
            "edges": [list(e) for e in g.edges],
            "betti1": decomposition.betti1(g),
        }
        _write(args.out, json.dumps(report, sort_keys=True, indent=2))
        return 0
    if args.action == "depth":
        orders, depth = symbolic.order_and_depth(spec)
        report = {"orders": orders, "depth": depth}
        _write(args.out, json.dumps(report, sort_keys=True, indent=2))
        return 0
    if args.action == "reduce":
        final, records = symbolic.removal_order(spec)
        report = {
            "final": final.to_json(),
            "removals": [
                {"arc": r.arc.id, "stubVertex": r.stub_vertex, "stubEdge": r.stub_edge}
                for r in records
            ],
        }
        _write(args.out, json.dumps(report, sort_keys=True, indent=2))
        return 0
    raise KeyError(args.action)


# ---------------------------------------------------------------------------


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="tranchelab",
        description="Sampled continua of tranched graphs: builders, "
        "verification suites, figure data, and quasi-graph spec analysis.",
    )
    p.add_argument("--config", help="key=value config file (flags override)")
    sub = p.add_subparsers(dest="command", required=True)

    b = sub.add_parser("build", help="sample a space and write its cloud JSON")
    b.add_argument("space", choices=_SPACES)
    b.add_argument("--dim", type=int)
    b.add_argument("--samples", type=int)
    b.add_argument("--budget", type=int)
    b.add_argument("--out", help="output file (default stdout)")

    h = sub.add_parser("hausdorff", help="distance between two cloud JSON files")
    h.add_argument("a")
    h.add_argument("b")

    v = sub.add_parser("verify", help="run a named verification suite")
    v.add_argument("suite", choices=sorted(verify.SUITES))
    v.add_argument("--seed", type=int)
    v.add_argument("--out", help="report file (default stdout)")

    f = sub.add_parser("figure", help="export figure data as CSV")
    f.add_argument("name", choices=_FIGURES)
    f.add_argument("--samples", type=int)
    f.add_argument("--outdir", default=".")

    s = sub.add_parser("spec", help="analyze a quasi-graph spec JSON file")
    s.add_argument("action", choices=("validate", "quotient", "depth", "reduce"))
    s.add_argument("file")
    s.add_argument("--out", help="report file (default stdout)")

    return p


_COMMANDS = {
    "build": _cmd_build,
    "hausdorff": _cmd_hausdorff,
    "verify": _cmd_verify,
    "figure": _cmd_figure,
    "spec": _cmd_spec,
}


def main(argv=None) -> int:
    parser = _parser()
    args = parser.parse_args(argv)
    try:
        config = _load_config(args.config)
    except (OSError, ValueError) as exc:
        parser.error(str(exc))  # exits 2
    try:
        return _COMMANDS[args.command](args, config)
    except (DomainError, FileNotFoundError, json.JSONDecodeError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
