"""Boxplot rendering for experiment reports: one panel per class, one box
per phase, drawn from the precomputed phase statistics (never recomputed
from raw samples)."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)

from .feature import ExperimentReport  # noqa: E402

# Fixed hash salt (and no Date metadata) so identical reports render to
# byte-identical SVG files.
_SVG_HASHSALT = "antnet"


def _phase_boxes(phases) -> list[dict]:
    return [
        {
            "med": p.median,
            "q1": p.q1,
            "q3": p.q3,
            "whislo": p.whisker_low,
            "whishi": p.whisker_high,
            "fliers": list(p.outliers),
            "label": str(p.phase_id),
        }
        for p in phases
    ]


def render_report(report: ExperimentReport, out_path) -> None:
    """Write the report's boxplot figure to out_path (format by suffix)."""
    classes = report.class_reports
    ncols = len(classes)
    fig, axes = plt.subplots(
        1, ncols, figsize=(3.2 * ncols + 0.8, 3.6), squeeze=False
    )
    ylabel = "path length" if report.normalize == "none" else "path length per edge"
    for ci, (ax, phases) in enumerate(zip(axes[0], classes)):
        ax.bxp(_phase_boxes(phases), showfliers=True)
        suffix = " (target)" if ci == report.target_class else ""
        ax.set_title(f"class {ci}{suffix}")
        ax.set_xlabel("phase")
        if ci == 0:
            ax.set_ylabel(ylabel)
    fig.suptitle(report.dataset)
    fig.tight_layout()
    try:
        is_svg = str(out_path).lower().endswith(".svg")
        with plt.rc_context({"svg.hashsalt": _SVG_HASHSALT}):
            if is_svg:
                fig.savefig(out_path, metadata={"Date": None})
            else:
                fig.savefig(out_path)
    finally:
        plt.close(fig)
