"""Figures for reports: stage sizes of a pipeline run and Hasse diagrams."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

_PNG_META = {"Software": None}

# the headline size of each stage
_SIZE_KEYS = {
    "symmetrize": "relators",
    "complexify": "f_vector",
    "rigidify": "f_vector",
    "posetize": "points",
    "minimalize": "points",
    "verify": "order_complex_skeleton",
}


def _headline(stage):
    key = _SIZE_KEYS.get(stage.name)
    value = stage.sizes.get(key) if key else None
    if isinstance(value, list):
        return sum(value), key
    return (value or 0), key


def plot_stage_sizes(report, path):
    """Bar chart (log scale) of the size of each stage's output."""
    names, sizes, labels = [], [], []
    for st in report.stages:
        size, key = _headline(st)
        names.append(st.name)
        sizes.append(max(size, 1))
        labels.append("cells" if key in ("f_vector", "order_complex_skeleton") else key or "")
    fig, ax = plt.subplots(figsize=(7, 3.5))
    bars = ax.bar(names, sizes, color="#4c72b0")
    ax.set_yscale("log")
    ax.set_ylabel("objects in stage output")
    for b, s, lab in zip(bars, sizes, labels):
        ax.annotate(f"{s:,}\n{lab}", (b.get_x() + b.get_width() / 2, s), ha="center", va="bottom", fontsize=7)
    ax.set_ylim(1, max(sizes, default=1) * 20)
    ax.tick_params(axis="x", labelsize=8)
    ax.set_title("Pipeline stage sizes")
    fig.tight_layout()
    fig.savefig(path, metadata=_PNG_META)
    plt.close(fig)


def _layered_positions(X):
    """x by barycentre ordering within each height level, y by height."""
    h = X.heights()
    levels = {}
    for i in X.topo:
        levels.setdefault(h[i], []).append(i)
    pos = {}
    for lvl in sorted(levels):
        members = levels[lvl]
        if lvl > 0:
            key = lambda i: (sum(pos[j][0] for j in X.down[i]) / max(len(X.down[i]), 1), X.points[i])
            members = sorted(members, key=key)
        for k, i in enumerate(members):
            pos[i] = (k - (len(members) - 1) / 2, lvl)
    return pos


def plot_hasse(X, path, coordinates=None, highlight=(), max_points=400):
    """Draw the Hasse diagram of a small poset (larger ones are refused)."""
    if len(X) > max_points:
        raise ValueError(f"poset has {len(X)} points; drawing is limited to {max_points}")
    if coordinates:
        pos = {X.index[p]: tuple(c) for p, c in coordinates.items()}
    else:
        pos = _layered_positions(X)
    fig, ax = plt.subplots(figsize=(5, 5))
    for a, b in X.covers:
        (x0, y0), (x1, y1) = pos[X.index[a]], pos[X.index[b]]
        ax.plot([x0, x1], [y0, y1], color="0.3", lw=1, zorder=1)
    hl = set(highlight)
    for i, p in enumerate(X.points):
        x, y = pos[i]
        ax.scatter([x], [y], s=60, color="#c44e52" if p in hl else "black", zorder=2)
        if len(X) <= 40:
            ax.annotate(p, (x, y), textcoords="offset points", xytext=(5, 3), fontsize=7)
    ax.set_axis_off()
    ax.set_title(f"Hasse diagram ({len(X)} points, {len(X.covers)} covers)")
    fig.tight_layout()
    fig.savefig(path, metadata=_PNG_META)
    plt.close(fig)
