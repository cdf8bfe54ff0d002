"""Render experiment reports to figure files next to the CSV output.

Grouped bar charts with standard-deviation whiskers, one file per axis of
interest. Rendering is pinned for byte-stable output so reruns of the same
report hash identically.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .evalkit import ExperimentReport

_PNG_METADATA = {"Software": "trajtext"}
_BAR_COLORS = ("#4878a8", "#e49444", "#6a9f58", "#d1615d", "#857aab")


def _save(fig, path: Path) -> Path:
    fig.savefig(path, dpi=120, metadata=_PNG_METADATA)
    plt.close(fig)
    return path


def _grouped_bars(rows_by_group, group_labels, cluster_labels, title, ylabel):
    fig, ax = plt.subplots(figsize=(7.0, 4.2))
    n_groups = len(group_labels)
    n_clusters = len(cluster_labels)
    width = 0.8 / max(1, n_clusters)
    for j, cluster in enumerate(cluster_labels):
        xs = [i + j * width for i in range(n_groups)]
        means = [rows_by_group[g][cluster][0] for g in group_labels]
        stds = [rows_by_group[g][cluster][1] for g in group_labels]
        ax.bar(
            xs,
            means,
            width=width,
            yerr=stds,
            capsize=3,
            label=str(cluster),
            color=_BAR_COLORS[j % len(_BAR_COLORS)],
        )
    ax.set_xticks([i + 0.4 - width / 2 for i in range(n_groups)])
    ax.set_xticklabels([str(g) for g in group_labels])
    ax.set_ylim(0.0, 1.0)
    ax.set_ylabel(ylabel)
    ax.set_title(title)
    ax.legend(fontsize=8)
    fig.tight_layout()
    return fig


def render_report_figures(report: ExperimentReport, outdir: Path) -> list[Path]:
    """Write one chart per varying axis; returns the created file paths."""
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    rows = [r for r in report.rows if r.error is None]
    written: list[Path] = []

    horizons = sorted({r.horizon for r in rows})
    modality_sets = list(dict.fromkeys(r.modalities for r in rows))
    ablations = list(dict.fromkeys(r.ablation for r in rows))
    policies = list(dict.fromkeys(r.missing_policy for r in rows))

    if len(modality_sets) > 1:
        table = {
            m: {
                h: _mean_std(rows, modalities=m, horizon=h)
                for h in horizons
            }
            for m in modality_sets
        }
        fig = _grouped_bars(
            table,
            modality_sets,
            horizons,
            "Accuracy by modality combination (clusters: horizon weeks)",
            "accuracy",
        )
        written.append(_save(fig, outdir / "modalities.png"))

    if len(ablations) > 1:
        table = {
            a: {h: _mean_std(rows, ablation=a, horizon=h) for h in horizons}
            for a in ablations
        }
        fig = _grouped_bars(
            table,
            ablations,
            horizons,
            "Accuracy by randomization mode (clusters: horizon weeks)",
            "accuracy",
        )
        written.append(_save(fig, outdir / "ablation.png"))

    if len(policies) > 1:
        table = {
            p: {h: _mean_std(rows, policy=p, horizon=h) for h in horizons}
            for p in policies
        }
        fig = _grouped_bars(
            table,
            policies,
            horizons,
            "Accuracy by missing-value descriptor (clusters: horizon weeks)",
            "accuracy",
        )
        written.append(_save(fig, outdir / "missing_policy.png"))

    return written


def _mean_std(rows, modalities=None, horizon=None, ablation=None, policy=None):
    picked = [
        r
        for r in rows
        if (modalities is None or r.modalities == modalities)
        and (horizon is None or r.horizon == horizon)
        and (ablation is None or r.ablation == ablation)
        and (policy is None or r.missing_policy == policy)
    ]
    if not picked:
        return (0.0, 0.0)
    mean = sum(r.accuracy_mean for r in picked) / len(picked)
    std = sum(r.accuracy_std for r in picked) / len(picked)
    return (mean, std)
