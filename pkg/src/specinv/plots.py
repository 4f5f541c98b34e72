"""Figure rendering for report series: one PNG per series, written next to
the delimited output."""

import os

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .report import find_series  # noqa: E402


def render_series(s, out_png):
    cols = s["columns"]
    rows = s["rows"]
    if not rows:
        return None
    xs = [row[0] for row in rows]
    fig, ax = plt.subplots(figsize=(6.0, 3.8))
    for j, label in enumerate(cols[1:], start=1):
        ys = [row[j] for row in rows]
        ax.plot(xs, ys, marker="o", markersize=3, linewidth=1.2, label=label)
        finite = [y for y in ys if isinstance(y, (int, float)) and y > 0]
        if finite and max(finite) / min(finite) > 1e3:
            ax.set_yscale("log")
    ax.set_xlabel(cols[0])
    ax.set_title(s["name"])
    ax.grid(True, alpha=0.3)
    if len(cols) > 2:
        ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(out_png, dpi=150)
    plt.close(fig)
    return out_png


def render_report(report, outdir, series_name=None):
    os.makedirs(outdir, exist_ok=True)
    names = ([series_name] if series_name
             else [s["name"] for s in report.get("series", [])])
    written = []
    for name in names:
        s = find_series(report, name)
        path = render_series(s, os.path.join(outdir, f"{name}.png"))
        if path:
            written.append(path)
    return written
