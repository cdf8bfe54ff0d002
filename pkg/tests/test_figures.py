import hashlib

from trajtext.evalkit import CellResult, ExperimentReport
from trajtext.figures import render_report_figures


def report_fixture():
    rows = []
    for modalities in ("NC", "C", "NC+C+B"):
        for horizon in (2, 4):
            rows.append(
                CellResult(
                    modalities=modalities,
                    horizon=horizon,
                    ablation="none",
                    missing_policy="skipped",
                    seed_count=5,
                    n_test=43,
                    accuracy_mean=0.5 + 0.1 * horizon / 4 + 0.05 * len(modalities) / 6,
                    accuracy_std=0.04,
                )
            )
    for mode in ("none", "partial", "full"):
        rows.append(
            CellResult(
                modalities="NC+C+B",
                horizon=4,
                ablation=mode,
                missing_policy="skipped",
                seed_count=5,
                n_test=43,
                accuracy_mean={"none": 0.9, "partial": 0.7, "full": 0.6}[mode],
                accuracy_std=0.03,
            )
        )
    return ExperimentReport(rows=tuple(rows))


def test_figures_created(tmp_path):
    written = render_report_figures(report_fixture(), tmp_path)
    names = {p.name for p in written}
    assert "modalities.png" in names
    assert "ablation.png" in names
    for path in written:
        assert path.stat().st_size > 0


def test_figures_byte_stable(tmp_path):
    a = tmp_path / "a"
    b = tmp_path / "b"
    digests = {}
    for outdir in (a, b):
        for path in render_report_figures(report_fixture(), outdir):
            digests.setdefault(path.name, []).append(
                hashlib.sha256(path.read_bytes()).hexdigest()
            )
    for name, (first, second) in digests.items():
        assert first == second, name


def test_failed_cells_skipped(tmp_path):
    rows = list(report_fixture().rows)
    rows.append(
        CellResult(
            modalities="B",
            horizon=2,
            ablation="none",
            missing_policy="skipped",
            seed_count=5,
            n_test=0,
            accuracy_mean=0.0,
            accuracy_std=0.0,
            error="boom",
        )
    )
    written = render_report_figures(ExperimentReport(rows=tuple(rows)), tmp_path)
    assert written
