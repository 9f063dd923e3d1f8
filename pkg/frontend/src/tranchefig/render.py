"""Render tranchelab cloud exports (CSV or JSON) as figures.

Inputs follow the exporter's schema: CSV files with leading coordinate
columns ``x0, x1[, x2, ...]`` and optional ``q``/``tag`` metadata
columns, or cloud JSON objects with ``points`` and per-point ``aux``
columns.  Points tagged 1 (oscillatory arcs) render in blue, tagged 2
(limit sets) in red, tagged 0 (base graph) in dark gray; inputs with no
tag column render monochrome with a warning.

Output is deterministic: the SVG hash salt is fixed by the style file
and no timestamps are embedded, so re-rendering the same inputs yields
byte-identical files.
"""

from __future__ import annotations

import json
import warnings
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

TAG_BASE, TAG_ARC, TAG_LIMIT = 0.0, 1.0, 2.0


class SchemaError(ValueError):
    """Input does not conform to the cloud export schema."""


@dataclass(frozen=True)
class CloudData:
    """Parsed export: coordinate block plus optional metadata columns."""

    coords: np.ndarray
    q: np.ndarray | None
    tag: np.ndarray | None
    source: str


def load_style(path: str | Path | None = None) -> dict:
    if path is None:
        text = resources.files("tranchefig").joinpath("styles/default.json").read_text()
    else:
        text = Path(path).read_text()
    style = json.loads(text)
    missing = {"colors", "point_size", "camera", "svg_hashsalt"} - set(style)
    if missing:
        raise SchemaError(f"style file missing keys: {sorted(missing)}")
    return style


def load_cloud(path: str | Path) -> CloudData:
    """Read a CSV or JSON cloud export."""
    path = Path(path)
    if path.suffix == ".json":
        data = json.loads(path.read_text())
        if "points" not in data:
            raise SchemaError(f"{path}: cloud JSON must contain 'points'")
        coords = np.asarray(data["points"], dtype=float)
        aux = data.get("aux", {})
        q = np.asarray(aux["q"], dtype=float) if "q" in aux else None
        tag = np.asarray(aux["tag"], dtype=float) if "tag" in aux else None
        return CloudData(coords, q, tag, str(path))
    header = path.read_text().splitlines()[0].split(",")
    mat = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
    if mat.shape[1] != len(header):
        raise SchemaError(f"{path}: header/data column mismatch")
    coord_names = [h for h in header if h.startswith("x") and h[1:].isdigit()]
    if not coord_names or header[: len(coord_names)] != coord_names:
        raise SchemaError(
            f"{path}: expected leading coordinate columns x0, x1, ..., got {header}"
        )
    cols = {name: mat[:, k] for k, name in enumerate(header)}
    coords = np.column_stack([cols[n] for n in coord_names])
    return CloudData(coords, cols.get("q"), cols.get("tag"), str(path))


def _split_by_tag(cloud: CloudData, style: dict):
    """(points, color, z-order) groups honoring the tag convention."""
    colors = style["colors"]
    if cloud.tag is None:
        warnings.warn(
            f"{cloud.source}: no tag column; rendering monochrome", stacklevel=2
        )
        return [(cloud.coords, colors["mono"], 1)]
    groups = []
    for value, key, z in (
        (TAG_BASE, "base", 1),
        (TAG_ARC, "arc", 2),
        (TAG_LIMIT, "limit", 3),
    ):
        pts = cloud.coords[cloud.tag == value]
        if len(pts):
            groups.append((pts, colors[key], z))
    return groups


def _panel_2d(ax, cloud: CloudData, style: dict) -> None:
    for pts, color, z in _split_by_tag(cloud, style):
        ax.scatter(pts[:, 0], pts[:, 1], s=style["point_size"], c=color, zorder=z)
    ax.set_xlabel("x0")
    ax.set_ylabel("x1")
    ax.set_aspect("equal", adjustable="datalim")


def _panel_3d(ax, cloud: CloudData, style: dict) -> None:
    if cloud.coords.shape[1] < 3:
        raise SchemaError(f"{cloud.source}: 3D panel needs three coordinate columns")
    for pts, color, z in _split_by_tag(cloud, style):
        ax.scatter(
            pts[:, 0], pts[:, 1], pts[:, 2], s=style["point_size"], c=color, zorder=z
        )
    cam = style["camera"]
    ax.view_init(elev=cam["elev"], azim=cam["azim"])
    ax.set_xlabel("x0")
    ax.set_ylabel("x1")
    ax.set_zlabel("x2")


def _panel_quotient(ax, cloud: CloudData, style: dict) -> None:
    """Quotient circle: points at angle 2*pi*q; limit fibers collapse."""
    if cloud.q is None:
        raise SchemaError(f"{cloud.source}: quotient panel needs a q column")
    ang = 2.0 * np.pi * cloud.q
    pts = np.column_stack([np.cos(ang), np.sin(ang)])
    shim = CloudData(pts, cloud.q, cloud.tag, cloud.source)
    for block, color, z in _split_by_tag(shim, style):
        ax.scatter(block[:, 0], block[:, 1], s=style["point_size"], c=color, zorder=z)
    ax.set_aspect("equal", adjustable="datalim")
    ax.set_xlabel("cos 2πq")
    ax.set_ylabel("sin 2πq")


# layout name -> list of (expected file stem, panel kind)
LAYOUTS = {
    "warsaw": [("warsaw", "2d"), ("warsaw", "quotient")],
    "A-projections": [("A_0", "3d"), ("A_1", "3d"), ("A_2", "3d")],
    "X2-projection": [("X_2", "3d")],
    "X1-depth": [("X1_depth", "3d")],
    "comb": [("comb_X1", "2d"), ("comb_X", "3d")],
}


def render(layout: str, inputs: list[str | Path], out: str | Path, style=None) -> Path:
    """Render a named layout from export files to `out` (.svg or .png)."""
    if layout not in LAYOUTS:
        raise SchemaError(f"unknown layout {layout!r}; known: {sorted(LAYOUTS)}")
    panels = LAYOUTS[layout]
    if isinstance(style, (str, Path)) or style is None:
        style = load_style(style)
    # panels may reuse one input (warsaw space + quotient)
    stems = list(dict.fromkeys(stem for stem, _ in panels))
    if len(inputs) != len(stems):
        raise SchemaError(
            f"layout {layout!r} needs {len(stems)} input(s) for {stems}, "
            f"got {len(inputs)}"
        )
    clouds = {stem: load_cloud(p) for stem, p in zip(stems, inputs)}

    with plt.rc_context({"svg.hashsalt": style["svg_hashsalt"]}):
        w, h = style["panel_size"]
        fig = plt.figure(figsize=(w * len(panels), h), dpi=style["figure_dpi"])
        for k, (stem, kind) in enumerate(panels, 1):
            if kind == "3d":
                ax = fig.add_subplot(1, len(panels), k, projection="3d")
                _panel_3d(ax, clouds[stem], style)
            else:
                ax = fig.add_subplot(1, len(panels), k)
                if kind == "quotient":
                    _panel_quotient(ax, clouds[stem], style)
                else:
                    _panel_2d(ax, clouds[stem], style)
            ax.set_title(f"{stem}")
        fig.tight_layout()
        out = Path(out)
        fig.savefig(out, metadata=_no_date_metadata(out.suffix))
        plt.close(fig)
    return out


def _no_date_metadata(suffix: str) -> dict:
    if suffix == ".svg":
        return {"Date": None}
    if suffix == ".png":
        return {"Software": "tranchefig"}
    return {}
