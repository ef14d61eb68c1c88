"""Render figure analogs from lpncsim experiment CSVs.

Each figure id names a fixed layout bound to one CSV schema.  Rendering is
deterministic: fixed style, fixed sizes, no timestamps or tool tags in the
image metadata.  Feasibility axes are log-scaled with a floor of 1e-8 so
zero estimates stay visible as floor markers.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

__all__ = [
    "FIGURE_IDS",
    "FigureSpec",
    "MissingColumnError",
    "EmptyDataError",
    "render",
]

FIGURE_IDS = ("fig2a", "fig2b", "fig4", "fig5c", "fig5d", "fig6")
LOG_FLOOR = 1e-8

_STYLE = {
    "figure.figsize": (6.4, 4.2),
    "figure.dpi": 130,
    "axes.grid": True,
    "grid.alpha": 0.3,
    "font.size": 9,
}


class MissingColumnError(KeyError):
    """The input CSV lacks a column the figure needs."""

    def __init__(self, column: str, path: str):
        super().__init__(column)
        self.column = column
        self.path = path

    def __str__(self) -> str:
        return f"missing column {self.column!r} in {self.path}"


class EmptyDataError(ValueError):
    """The input CSV has a header but no data rows."""


@dataclass(frozen=True)
class FigureSpec:
    figure_id: str
    csv_path: str
    out_path: str

    def __post_init__(self) -> None:
        if self.figure_id not in FIGURE_IDS:
            raise ValueError(
                f"unknown figure id {self.figure_id!r}; choose from {FIGURE_IDS}"
            )


def _load(path: str, required: tuple[str, ...]) -> list[dict]:
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        header = reader.fieldnames or []
        for column in required:
            if column not in header:
                raise MissingColumnError(column, path)
        rows = list(reader)
    if not rows:
        raise EmptyDataError(f"no data rows in {path}")
    return rows


def _floored(values):
    return [max(float(v), LOG_FLOOR) for v in values]


def _series(rows: list[dict], key_fields: tuple[str, ...]):
    """Group rows by the key fields, preserving first-seen order."""
    groups: dict[tuple, list[dict]] = {}
    for row in rows:
        key = tuple(row[f] for f in key_fields)
        groups.setdefault(key, []).append(row)
    return groups


def _render_fig2a(rows: list[dict], ax) -> None:
    for (eta,), pts in _series(rows, ("eta",)).items():
        xs = [int(float(r["depth"])) for r in pts]
        ys = [float(r["subspace_weight"]) for r in pts]
        ax.plot(xs, ys, label=f"eta = {eta}")
    baseline = float(rows[0]["baseline"])
    ax.axhline(baseline, linestyle="--", color="black", linewidth=1.0,
               label=f"mixed state ({baseline:g})")
    ax.set_xlabel("circuit depth d")
    ax.set_ylabel("subspace retention")
    ax.legend()


def _render_fig2b(rows: list[dict], ax) -> None:
    for (kappa,), pts in _series(rows, ("kappa",)).items():
        xs = [float(r["eta"]) for r in pts]
        ys = [float(r["subspace_weight"]) for r in pts]
        ax.plot(xs, ys, label=f"kappa = {kappa}")
    ax.set_xlabel("noise rate eta")
    ax.set_ylabel("subspace retention at fixed depth")
    ax.legend()


def _render_fig4(rows: list[dict], ax) -> None:
    styles = {"xy": {"linewidth": 2.0}}
    for (curve,), pts in _series(rows, ("curve",)).items():
        xs = [float(r["eta"]) for r in pts]
        ys = [float(r["value"]) for r in pts]
        ax.plot(xs, ys, label=curve, **styles.get(curve, {}))
    ax.set_xlabel("noise rate eta")
    ax.set_ylabel("feasible weight after four blocks")
    ax.legend()


def _render_band(ax, pts, label: str) -> None:
    xs = [int(float(r["p_or_d"])) for r in pts]
    ys = [float(r["estimate"]) for r in pts]
    err = [float(r["stderr"]) for r in pts]
    ax.plot(xs, _floored(ys), label=label)
    low = _floored(y - e for y, e in zip(ys, err))
    high = _floored(y + e for y, e in zip(ys, err))
    ax.fill_between(xs, low, high, alpha=0.3)


def _render_fig5c(rows: list[dict], ax) -> None:
    for (variant,), pts in _series(rows, ("variant",)).items():
        _render_band(ax, pts, variant)
    ax.set_yscale("log")
    ax.set_ylim(bottom=LOG_FLOOR)
    ax.set_xlabel("depth before correction")
    ax.set_ylabel("valid-sample probability")
    ax.legend()


def _render_fig5d(rows: list[dict], ax) -> None:
    for (variant, roe), pts in _series(rows, ("variant", "roe")).items():
        _render_band(ax, pts, f"{variant}, roe = {roe}")
    ax.set_yscale("log")
    ax.set_ylim(bottom=LOG_FLOOR)
    ax.set_xlabel("ansatz blocks")
    ax.set_ylabel("valid-sample probability")
    ax.legend(fontsize=7)


def _render_fig6(rows: list[dict], ax) -> None:
    for (encoding,), pts in _series(rows, ("encoding",)).items():
        xs = [int(float(r["blocks"])) for r in pts]
        ys = _floored(float(r["p_feas"]) for r in pts)
        ax.plot(xs, ys, label=encoding)
    ax.set_yscale("log")
    ax.set_ylim(bottom=LOG_FLOOR)
    ax.set_xlabel("ansatz blocks")
    ax.set_ylabel("whole-register retention")
    ax.legend()


_RENDERERS = {
    "fig2a": (_render_fig2a, ("eta", "depth", "subspace_weight", "baseline")),
    "fig2b": (_render_fig2b, ("kappa", "eta", "subspace_weight")),
    "fig4": (_render_fig4, ("curve", "eta", "value")),
    "fig5c": (_render_fig5c, ("variant", "p_or_d", "estimate", "stderr")),
    "fig5d": (_render_fig5d, ("variant", "roe", "p_or_d", "estimate", "stderr")),
    "fig6": (_render_fig6, ("encoding", "blocks", "p_feas")),
}


def render(spec: FigureSpec) -> str:
    """Render the figure and write the image; returns the output path.

    Raises :class:`MissingColumnError` or :class:`EmptyDataError` before any
    file is written when the CSV does not fit the figure.
    """
    renderer, required = _RENDERERS[spec.figure_id]
    rows = _load(spec.csv_path, required)
    with plt.rc_context(_STYLE):
        fig, ax = plt.subplots()
        try:
            renderer(rows, ax)
            fig.savefig(spec.out_path, metadata={"Software": None})
        finally:
            plt.close(fig)
    return spec.out_path
