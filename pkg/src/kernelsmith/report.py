"""The per-comparison quality record and its presentation row."""
from __future__ import annotations

import json
from dataclasses import dataclass

from .classeval import ClassEvalResult
from .stats import StatsSummary

REPORT_TAG = "kernelsmith-report/v1"


@dataclass(frozen=True)
class QualityReport:
    dataset: str
    kernel_count: int | None  # G
    build_seconds: float | None  # t
    equal_fraction: float
    stats: StatsSummary
    ari: float
    classes: ClassEvalResult
    parameters: dict

    def to_dict(self) -> dict:
        return {
            "format": REPORT_TAG,
            "dataset": self.dataset,
            "kernel_count": self.kernel_count,
            "build_seconds": self.build_seconds,
            "equal_fraction": self.equal_fraction,
            "stats": self.stats.to_dict(),
            "ari": self.ari,
            "classes": self.classes.to_dict(),
            "parameters": self.parameters,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)


def _fmt(value, pattern: str, scale: float = 1.0) -> str:
    if value is None:
        return "-"
    return pattern.format(value * scale)


def report_row(report: QualityReport) -> str:
    """One human-readable row with the familiar comparison columns."""
    s = report.stats
    c = report.classes
    header = (
        f"{'dataset':<14}{'G':>6}{'t':>7}{'=':>7}{'dMean':>8}{'dStd':>8}"
        f"{'KSp':>6}{'H':>7}{'ARI':>7}{'m1d1':>7}{'m1d2':>7}{'m2d1':>7}{'m2d2':>7}"
    )
    row = (
        f"{report.dataset:<14}"
        f"{report.kernel_count if report.kernel_count is not None else '-':>6}"
        f"{_fmt(report.build_seconds, '{:.1f}'):>7}"
        f"{_fmt(report.equal_fraction, '{:.1f}', 100.0):>7}"
        f"{_fmt(s.delta_mean, '{:+.3f}'):>8}"
        f"{_fmt(s.delta_std, '{:+.3f}'):>8}"
        f"{_fmt(s.ks_reject_pct, '{:.0f}'):>6}"
        f"{_fmt(s.mean_hellinger, '{:.3f}'):>7}"
        f"{report.ari:>7.3f}"
        f"{c.m1d1 * 100:>7.1f}{c.m1d2 * 100:>7.1f}{c.m2d1 * 100:>7.1f}"
        f"{c.m2d2 * 100:>7.1f}"
    )
    return header + "\n" + row
