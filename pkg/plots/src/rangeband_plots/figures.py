"""Figure emission from benchmark result tables.

Reads the result CSV (policy,scale,rescaled_regret,stderr,runtime_s) and
renders a grid of per-family panels: rescaled regret versus payoff scale,
one line per policy, with a mean +- 2*stderr shaded band. The renderer is
read-only over the CSV and is deliberately decoupled from the simulation
package; the file format is the only interface.
"""

from __future__ import annotations

import csv
import math
import warnings
from dataclasses import dataclass, field
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

EXPECTED_COLUMNS = ("policy", "scale", "rescaled_regret", "stderr", "runtime_s")


@dataclass(frozen=True)
class FigureSpec:
    """What to read, where to write, and how to arrange the panels.

    grouping maps a policy family (the label up to the first parenthesis,
    e.g. "ucb" for "ucb(sigma=1)") to a panel name; unmapped families get
    a panel of their own. ylims optionally pins the y-range of a panel.
    """

    csv_path: str | Path
    out_dir: str | Path
    grouping: dict = field(default_factory=dict)
    ylims: dict = field(default_factory=dict)


def family_of(policy: str) -> str:
    return policy.split("(", 1)[0]


def read_table(path) -> list:
    """Parse the result CSV into row dicts, with row/column error context."""
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ValueError(
                f"{path}: empty file, expected header "
                f"{','.join(EXPECTED_COLUMNS)}"
            ) from None
        missing = [c for c in EXPECTED_COLUMNS if c not in header]
        if missing:
            raise ValueError(
                f"{path}: header is missing columns {missing}, got {header}"
            )
        index = {c: header.index(c) for c in EXPECTED_COLUMNS}
        rows = []
        for lineno, raw in enumerate(reader, start=2):
            if not raw:
                continue
            record = {"policy": raw[index["policy"]]}
            for column in EXPECTED_COLUMNS[1:]:
                cell = raw[index[column]]
                try:
                    record[column] = float(cell)
                except ValueError:
                    raise ValueError(
                        f"{path}: row {lineno}, column '{column}': "
                        f"cannot parse {cell!r} as a number"
                    ) from None
            rows.append(record)
    return rows


def panel_points(rows, grouping=None):
    """Group rows into {panel: {policy: (scales, means, stderrs)}}.

    Values are passed through untouched so the plotted points are exactly
    the numbers in the CSV. Within a policy, points are sorted by scale.
    """
    grouping = grouping or {}
    panels: dict = {}
    by_policy: dict = {}
    for row in rows:
        by_policy.setdefault(row["policy"], []).append(row)
    for policy in sorted(by_policy):
        family = family_of(policy)
        panel = grouping.get(family, family)
        entries = sorted(by_policy[policy], key=lambda r: r["scale"])
        scales = tuple(r["scale"] for r in entries)
        means = tuple(r["rescaled_regret"] for r in entries)
        stderrs = tuple(r["stderr"] for r in entries)
        panels.setdefault(panel, {})[policy] = (scales, means, stderrs)
    return panels


def build_figure(rows, grouping=None, ylims=None):
    """Lay the panels out on one grid figure; returns (figure, {panel: ax})."""
    ylims = ylims or {}
    panels = panel_points(rows, grouping)
    names = sorted(panels)
    ncols = min(3, len(names))
    nrows = math.ceil(len(names) / ncols)
    fig, axes = plt.subplots(
        nrows, ncols, figsize=(4.2 * ncols, 3.2 * nrows), squeeze=False
    )
    axis_of = {}
    for i, name in enumerate(names):
        ax = axes[i // ncols][i % ncols]
        axis_of[name] = ax
        for policy, (scales, means, stderrs) in panels[name].items():
            lo = [m - 2 * s for m, s in zip(means, stderrs)]
            hi = [m + 2 * s for m, s in zip(means, stderrs)]
            ax.plot(scales, means, marker="o", label=policy)
            ax.fill_between(scales, lo, hi, alpha=0.25)
        ax.set_xscale("log")
        ax.set_title(name)
        ax.set_xlabel("payoff scale")
        ax.set_ylabel("rescaled regret")
        if name in ylims:
            ax.set_ylim(*ylims[name])
        ax.legend(fontsize="x-small")
    for j in range(len(names), nrows * ncols):
        axes[j // ncols][j % ncols].set_axis_off()
    fig.tight_layout()
    return fig, axis_of


def render_figures(spec: FigureSpec) -> list:
    """Render the panel grid; returns the written paths (possibly empty).

    A CSV with a valid header but no data rows produces a warning and no
    files rather than an empty image.
    """
    rows = read_table(spec.csv_path)
    if not rows:
        warnings.warn(f"{spec.csv_path}: no data rows, nothing to render")
        return []
    fig, _ = build_figure(rows, spec.grouping, spec.ylims)
    out_dir = Path(spec.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    target = out_dir / f"{Path(spec.csv_path).stem}_regret_grid.png"
    fig.savefig(target, dpi=150)
    plt.close(fig)
    return [target]
