"""Rank-sum cohort comparison and boxplot data export.

The one-sided Wilcoxon rank-sum test asks whether values drawn from one
cohort tend to exceed values drawn from the other. The normal approximation
with a 0.5 continuity correction and tie-corrected variance is used at all
sample sizes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path
from statistics import median
from typing import IO, Mapping, Sequence

import numpy as np

from .indicators import INDICATOR_FIELDS, IndicatorVector, format_decimal

ALTERNATIVES = ("a_greater", "b_greater", "two_sided")


def _normal_cdf(z: float) -> float:
    return 0.5 * math.erfc(-z / math.sqrt(2.0))


def _normal_sf(z: float) -> float:
    return 0.5 * math.erfc(z / math.sqrt(2.0))


def _average_ranks(values: Sequence[float]) -> list[float]:
    """Ranks starting at 1; tied values share the mean of their positions."""
    order = sorted(range(len(values)), key=values.__getitem__)
    ranks = [0.0] * len(values)
    i = 0
    while i < len(order):
        j = i
        while j + 1 < len(order) and values[order[j + 1]] == values[order[i]]:
            j += 1
        mean_rank = (i + j) / 2.0 + 1.0
        for k in range(i, j + 1):
            ranks[order[k]] = mean_rank
        i = j + 1
    return ranks


def wilcoxon_rank_sum(
    sample_a: Sequence[float],
    sample_b: Sequence[float],
    alternative: str = "a_greater",
) -> tuple[float, float]:
    """Continuity-corrected normal-approximation rank-sum test.

    Returns (W, p) where W is the rank sum of sample_a minus its minimum
    possible value. Ties get average ranks and the variance is reduced by
    the usual tie term. When every pooled value is tied the statistic
    carries no information and p is 0.5 one-sided (1.0 two-sided).
    """
    if alternative not in ALTERNATIVES:
        raise ValueError(f"alternative must be one of {ALTERNATIVES}")
    n_a, n_b = len(sample_a), len(sample_b)
    if n_a == 0 or n_b == 0:
        raise ValueError("both samples must be non-empty")

    pooled = list(sample_a) + list(sample_b)
    ranks = _average_ranks(pooled)
    rank_sum_a = math.fsum(ranks[:n_a])
    w = rank_sum_a - n_a * (n_a + 1) / 2.0

    n = n_a + n_b
    tie_term = 0.0
    seen: dict[float, int] = {}
    for value in pooled:
        seen[value] = seen.get(value, 0) + 1
    for count in seen.values():
        tie_term += count**3 - count
    variance = (n_a * n_b / 12.0) * ((n + 1) - tie_term / (n * (n - 1)))
    if variance <= 0:
        return w, 0.5 if alternative != "two_sided" else 1.0

    sigma = math.sqrt(variance)
    mean = n_a * n_b / 2.0
    delta = w - mean
    if alternative == "a_greater":
        p = _normal_sf((delta - 0.5) / sigma)
    elif alternative == "b_greater":
        p = _normal_cdf((delta + 0.5) / sigma)
    else:
        z = (delta - math.copysign(0.5, delta)) / sigma if delta != 0 else 0.0
        p = 2.0 * min(_normal_cdf(z), _normal_sf(z))
    return w, min(max(p, 0.0), 1.0)


@dataclass(frozen=True)
class ComparisonRow:
    indicator: str
    median_stars: float
    median_control: float
    p: float
    rank: int


@dataclass(frozen=True)
class ComparisonTable:
    """Per-indicator cohort medians, one-sided p, and rank by ascending p."""

    rows: tuple[ComparisonRow, ...]

    def row(self, indicator: str) -> ComparisonRow:
        for row in self.rows:
            if row.indicator == indicator:
                return row
        raise KeyError(indicator)


def compare_cohorts(
    stars: Sequence[IndicatorVector], control: Sequence[IndicatorVector]
) -> ComparisonTable:
    """Test, for each indicator, whether the stars' values run higher.

    One row per indicator in table order: cohort medians, the one-sided
    p for the stars-greater alternative, and the rank of that p among all
    indicators (ties keep indicator order).
    """
    if not stars or not control:
        raise ValueError("both cohorts must be non-empty")
    medians_s = []
    medians_c = []
    p_values = []
    for name in INDICATOR_FIELDS:
        values_s = [float(getattr(v, name)) for v in stars]
        values_c = [float(getattr(v, name)) for v in control]
        medians_s.append(median(values_s))
        medians_c.append(median(values_c))
        _, p = wilcoxon_rank_sum(values_s, values_c, alternative="a_greater")
        p_values.append(p)

    order = sorted(range(len(INDICATOR_FIELDS)), key=lambda i: (p_values[i], i))
    ranks = [0] * len(INDICATOR_FIELDS)
    for position, index in enumerate(order, start=1):
        ranks[index] = position

    rows = tuple(
        ComparisonRow(
            indicator=name,
            median_stars=medians_s[i],
            median_control=medians_c[i],
            p=p_values[i],
            rank=ranks[i],
        )
        for i, name in enumerate(INDICATOR_FIELDS)
    )
    return ComparisonTable(rows=rows)


def render_comparison_table(
    table: ComparisonTable, precision: int | None = None
) -> str:
    lines = ["indicator\tmedian_stars\tmedian_control\tp\trank"]
    for row in table.rows:
        lines.append(
            "\t".join(
                [
                    row.indicator,
                    format_decimal(row.median_stars, precision),
                    format_decimal(row.median_control, precision),
                    format_decimal(row.p, precision),
                    str(row.rank),
                ]
            )
        )
    return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class BoxplotSummary:
    """Five-number boxplot summary of log10(x + 1) transformed values.

    Whiskers sit at the most extreme transformed values within 1.5 IQR of
    the quartiles; values beyond are listed as outliers.
    """

    cohort: str
    indicator: str
    median: float
    q1: float
    q3: float
    whisker_low: float
    whisker_high: float
    outliers: tuple[float, ...]


def _boxplot_of(values: Sequence[float], whis: float = 1.5) -> tuple[
    float, float, float, float, float, tuple[float, ...]
]:
    data = np.asarray(values, dtype=float)
    q1, med, q3 = (float(q) for q in np.percentile(data, [25.0, 50.0, 75.0]))
    iqr = q3 - q1
    fence_low = q1 - whis * iqr
    fence_high = q3 + whis * iqr
    inside = data[(data >= fence_low) & (data <= fence_high)]
    whisker_low = float(inside.min())
    whisker_high = float(inside.max())
    outliers = tuple(
        sorted(float(v) for v in data[(data < fence_low) | (data > fence_high)])
    )
    return med, q1, q3, whisker_low, whisker_high, outliers


def boxplot_export(
    cohorts: Mapping[str, Sequence[IndicatorVector]], indicator: str
) -> list[BoxplotSummary]:
    """Boxplot summary of one indicator per cohort, on a log10(x+1) scale.

    Indicator distributions are heavily skewed and zero-valued for uncited
    authors, so values are transformed to log10(x + 1) before summarizing.
    """
    if indicator not in INDICATOR_FIELDS:
        raise ValueError(f"unknown indicator {indicator!r}")
    summaries = []
    for cohort_name, vectors in cohorts.items():
        if not vectors:
            raise ValueError(f"cohort {cohort_name!r} is empty")
        transformed = [
            math.log10(float(getattr(v, indicator)) + 1.0) for v in vectors
        ]
        med, q1, q3, lo, hi, outliers = _boxplot_of(transformed)
        summaries.append(
            BoxplotSummary(
                cohort=cohort_name,
                indicator=indicator,
                median=med,
                q1=q1,
                q3=q3,
                whisker_low=lo,
                whisker_high=hi,
                outliers=outliers,
            )
        )
    return summaries


def render_boxplot_table(
    summaries: Sequence[BoxplotSummary], precision: int | None = None
) -> str:
    lines = [
        "cohort\tindicator\tmedian\tq1\tq3\twhisker_low\twhisker_high\toutliers"
    ]
    for s in summaries:
        outliers = ",".join(format_decimal(v, precision) for v in s.outliers)
        lines.append(
            "\t".join(
                [
                    s.cohort,
                    s.indicator,
                    format_decimal(s.median, precision),
                    format_decimal(s.q1, precision),
                    format_decimal(s.q3, precision),
                    format_decimal(s.whisker_low, precision),
                    format_decimal(s.whisker_high, precision),
                    outliers,
                ]
            )
        )
    return "\n".join(lines) + "\n"


def parse_comparison_table(source: str | Path | IO[str]) -> ComparisonTable:
    """Read a table written by render_comparison_table."""
    if isinstance(source, (str, Path)):
        text = Path(source).read_text(encoding="utf-8")
    else:
        text = source.read()
    lines = [line for line in text.splitlines() if line.strip()]
    if not lines or lines[0] != "indicator\tmedian_stars\tmedian_control\tp\trank":
        raise ValueError("unexpected comparison table header")
    rows = []
    for line in lines[1:]:
        name, med_s, med_c, p, rank = line.split("\t")
        rows.append(
            ComparisonRow(
                indicator=name,
                median_stars=float(med_s),
                median_control=float(med_c),
                p=float(p),
                rank=int(rank),
            )
        )
    return ComparisonTable(rows=tuple(rows))
