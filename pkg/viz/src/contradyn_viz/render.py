"""Render exported tables to static figures.

Four plot kinds cover the shapes the simulator emits:

* ``attractor3d``    point cloud from any table with ``y_<k>`` columns
  (an attractor sample, a limit state, or a trajectory, which is cut to
  its final time step first),
* ``orbit-overlay``  one agent's path drawn over an attractor cloud,
* ``discrepancy``    empirical box discrepancy and its analytic bound
  against t on log-log axes,
* ``spectrum-disk``  eigenvalues in the complex unit disk with the
  subdominant set highlighted.

Every figure uses a fixed size, resolution, palette and (for the 3-D
kinds) a fixed orthographic viewpoint, and the PNG writer is told to
drop its producer tag, so rendering the same inputs twice yields
byte-identical files.
"""

from __future__ import annotations

import argparse
import csv
import re
import sys
from dataclasses import dataclass

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

__all__ = ["KINDS", "PlotSpec", "SchemaError", "load_table", "main", "render"]

DPI = 160
ELEV = 18.0
AZIM = -63.0

# fixed palette so output bytes never depend on rc state
_POINT = "#1f77b4"
_LINE = "#d62728"
_CLOUD = "#b0b8c4"
_MARK = "#2ca02c"

_YCOL = re.compile(r"y_(\d+)")


class SchemaError(Exception):
    """An input file is missing, empty, or shaped wrong for the plot."""


@dataclass(frozen=True)
class PlotSpec:
    """One render job: which files, which plot kind, where to write.

    ``axes`` picks the coordinate triple (1-based ``y_<k>`` suffixes)
    shown by the 3-D kinds when the data has more than three value
    columns; it is ignored otherwise.
    """

    kind: str
    inputs: tuple[str, ...]
    out: str
    axes: tuple[int, int, int] = (1, 2, 3)


def load_table(path: str) -> tuple[list[str], np.ndarray]:
    """Read a numeric CSV with a header row into (columns, float matrix)."""
    try:
        fh = open(path, newline="")
    except OSError as exc:
        raise SchemaError(f"{path}: {exc.strerror or 'cannot open'}") from None
    with fh:
        rows = [row for row in csv.reader(fh) if row]
    if not rows:
        raise SchemaError(f"{path}: empty file, expected a header row")
    header = [cell.strip() for cell in rows[0]]
    body = rows[1:]
    if not body:
        raise SchemaError(f"{path}: no data rows under header {header}")
    for lineno, row in enumerate(body, start=2):
        if len(row) != len(header):
            raise SchemaError(
                f"{path}: line {lineno} has {len(row)} cells, header has {len(header)}"
            )
    try:
        data = np.array([[float(cell) for cell in row] for row in body], dtype=float)
    except ValueError:
        raise SchemaError(f"{path}: non-numeric cell; every column must parse as float") from None
    return header, data


def _require(header: list[str], needed: list[str], path: str, kind: str) -> None:
    missing = [col for col in needed if col not in header]
    if missing:
        raise SchemaError(
            f"{path}: header does not match the {kind} schema; "
            f"missing {missing}, found {header}"
        )


def _value_points(
    header: list[str],
    data: np.ndarray,
    axes: tuple[int, int, int],
    path: str,
    latest_only: bool,
) -> tuple[np.ndarray, np.ndarray, np.ndarray, list[str]]:
    """Project the y_<k> columns of a table onto a coordinate triple.

    Tables with a ``t`` column are trajectories; for clouds only the
    final snapshot is kept.  Fewer than three value columns are padded
    with zeros, more than three are cut down by ``axes``.
    """
    ycols = sorted(
        (int(match.group(1)), idx)
        for idx, col in enumerate(header)
        if (match := _YCOL.fullmatch(col))
    )
    if not ycols:
        raise SchemaError(f"{path}: no y_<k> value columns, found {header}")
    pts = data[:, [idx for _, idx in ycols]]
    if latest_only and "t" in header:
        t = data[:, header.index("t")]
        pts = pts[t == t.max()]
    d = pts.shape[1]
    if d < 3:
        pts = np.hstack([pts, np.zeros((pts.shape[0], 3 - d))])
        names = [f"y_{k}" for k, _ in ycols] + ["0"] * (3 - d)
        return pts[:, 0], pts[:, 1], pts[:, 2], names
    for a in axes:
        if not 1 <= a <= d:
            raise SchemaError(f"{path}: projection axis {a} outside 1..{d}")
    sel = [a - 1 for a in axes]
    return pts[:, sel[0]], pts[:, sel[1]], pts[:, sel[2]], [f"y_{a}" for a in axes]


def _fig3d() -> tuple[plt.Figure, plt.Axes]:
    fig = plt.figure(figsize=(6.4, 5.6), dpi=DPI)
    ax = fig.add_subplot(projection="3d")
    ax.set_proj_type("ortho")
    ax.view_init(elev=ELEV, azim=AZIM)
    return fig, ax


def _label3d(ax: plt.Axes, names: list[str]) -> None:
    ax.set_xlabel(names[0])
    ax.set_ylabel(names[1])
    ax.set_zlabel(names[2])


def _attractor3d(spec: PlotSpec) -> plt.Figure:
    path = spec.inputs[0]
    header, data = load_table(path)
    x, y, z, names = _value_points(header, data, spec.axes, path, latest_only=True)
    fig, ax = _fig3d()
    ax.scatter(x, y, z, s=6.0, c=_POINT, depthshade=False, linewidths=0.0)
    _label3d(ax, names)
    ax.set_title(f"limit cloud, {x.size} points")
    return fig


def _orbit_overlay(spec: PlotSpec) -> plt.Figure:
    orbit_path, cloud_path = spec.inputs
    oheader, odata = load_table(orbit_path)
    _require(oheader, ["t"], orbit_path, "orbit-overlay")
    odata = odata[np.argsort(odata[:, oheader.index("t")], kind="stable")]
    ox, oy, oz, names = _value_points(oheader, odata, spec.axes, orbit_path, latest_only=False)
    cheader, cdata = load_table(cloud_path)
    cx, cy, cz, _ = _value_points(cheader, cdata, spec.axes, cloud_path, latest_only=True)
    fig, ax = _fig3d()
    ax.scatter(cx, cy, cz, s=2.0, c=_CLOUD, depthshade=False, linewidths=0.0)
    ax.plot(ox, oy, oz, color=_LINE, linewidth=1.1)
    ax.scatter(ox[:1], oy[:1], oz[:1], s=26.0, c=_MARK, depthshade=False, linewidths=0.0)
    _label3d(ax, names)
    ax.set_title(f"orbit over {cx.size} attractor points")
    return fig


def _discrepancy(spec: PlotSpec) -> plt.Figure:
    path = spec.inputs[0]
    header, data = load_table(path)
    _require(header, ["t", "empirical_D", "etk_bound"], path, "discrepancy")
    data = data[np.argsort(data[:, header.index("t")], kind="stable")]
    t = data[:, header.index("t")]
    fig, ax = plt.subplots(figsize=(6.4, 4.2), dpi=DPI)
    ax.loglog(t, data[:, header.index("empirical_D")], marker="o", color=_POINT,
              label="empirical")
    ax.loglog(t, data[:, header.index("etk_bound")], marker="s", linestyle="--",
              color=_LINE, label="bound")
    ax.set_xlabel("t")
    ax.set_ylabel("box discrepancy")
    ax.grid(True, which="both", linewidth=0.3, alpha=0.5)
    ax.legend()
    return fig


def _spectrum_disk(spec: PlotSpec) -> plt.Figure:
    path = spec.inputs[0]
    header, data = load_table(path)
    _require(header, ["re", "im", "modulus", "in_W"], path, "spectrum-disk")
    re_part = data[:, header.index("re")]
    im_part = data[:, header.index("im")]
    modulus = data[:, header.index("modulus")]
    in_w = data[:, header.index("in_W")] > 0.5
    fig, ax = plt.subplots(figsize=(5.2, 5.2), dpi=DPI)
    ring = np.linspace(0.0, 2.0 * np.pi, 361)
    ax.plot(np.cos(ring), np.sin(ring), color="#888888", linewidth=0.8)
    if in_w.any():
        lam = modulus[in_w].max()
        ax.plot(lam * np.cos(ring), lam * np.sin(ring), color=_MARK,
                linestyle="--", linewidth=0.7)
    ax.scatter(re_part[~in_w], im_part[~in_w], s=8.0, c=_POINT, linewidths=0.0)
    ax.scatter(re_part[in_w], im_part[in_w], s=26.0, c=_LINE, linewidths=0.0)
    ax.set_aspect("equal")
    ax.set_xlabel("Re")
    ax.set_ylabel("Im")
    ax.set_title(f"{in_w.sum()} subdominant of {in_w.size} eigenvalues")
    return fig


KINDS = {
    "attractor3d": _attractor3d,
    "orbit-overlay": _orbit_overlay,
    "discrepancy": _discrepancy,
    "spectrum-disk": _spectrum_disk,
}

_INPUT_COUNT = {"orbit-overlay": 2}


def render(spec: PlotSpec) -> None:
    """Build the figure for ``spec`` and write it to ``spec.out``."""
    if spec.kind not in KINDS:
        raise SchemaError(f"unknown plot kind {spec.kind!r}, have {sorted(KINDS)}")
    expected = _INPUT_COUNT.get(spec.kind, 1)
    if len(spec.inputs) != expected:
        raise SchemaError(
            f"{spec.kind} takes {expected} input file(s), got {len(spec.inputs)}"
        )
    fig = KINDS[spec.kind](spec)
    # drop the producer tag so bytes do not vary with the library version
    save_args = {"metadata": {"Software": None}} if spec.out.endswith(".png") else {}
    fig.savefig(spec.out, **save_args)
    plt.close(fig)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="contradyn-render",
        description="render simulator CSV/JSON exports to static figures",
    )
    parser.add_argument("--kind", required=True, choices=sorted(KINDS))
    parser.add_argument(
        "--in", dest="inputs", nargs="+", required=True, metavar="CSV",
        help="input table(s); orbit-overlay takes the orbit then the cloud",
    )
    parser.add_argument("--out", required=True, help="output image path")
    parser.add_argument(
        "--axes", default="1,2,3",
        help="comma triple of y_<k> suffixes to project onto when d > 3",
    )
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        axes = tuple(int(part) for part in str(args.axes).split(","))
    except ValueError:
        axes = ()
    if len(axes) != 3:
        print(f"error: --axes needs three integers, got {args.axes!r}", file=sys.stderr)
        return 2
    spec = PlotSpec(kind=args.kind, inputs=tuple(args.inputs), out=args.out, axes=axes)
    try:
        render(spec)
    except SchemaError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(spec.out)
    return 0


if __name__ == "__main__":
    sys.exit(main())
