"""Expected citation counts by publication year and citation-window length.

Citation behaviour drifts over time, so a paper's raw citation count is not
comparable across publication years. The model here fits one ordinary
least-squares line per window length w: cumulative citations within the
first w calendar years of a paper (publication year counted as year one)
against the publication year, over individual papers. The fitted line,
clamped from below, serves as the expected citation count E(c) used to
normalize observed counts.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .corpus import Corpus


class InsufficientDataError(ValueError):
    """Raised when a window series has too few qualifying years to fit."""


@dataclass(frozen=True)
class WindowFit:
    """Least-squares line for one citation-window length."""

    slope: float
    intercept: float
    n_points: int

    def predict(self, pub_year: int) -> float:
        return self.slope * pub_year + self.intercept


@dataclass(frozen=True)
class ExpectationModel:
    """Per-window linear fits giving expected citations by publication year.

    Evaluation outside fit_year_range extrapolates the fitted line; the
    result is never below ``floor``.
    """

    window_fits: dict[int, WindowFit]
    fit_year_range: tuple[int, int]
    floor: float = 1.0

    def __post_init__(self) -> None:
        if self.floor <= 0:
            raise ValueError("floor must be positive")
        windows = sorted(self.window_fits)
        if not windows or windows != list(range(1, len(windows) + 1)):
            raise ValueError("window_fits must cover every w in 1..W")

    @property
    def window_count(self) -> int:
        return len(self.window_fits)

    def expected_citations(self, pub_year: int, window_w: int) -> float:
        """E(c) for a paper of the given publication year and window length."""
        fit = self.window_fits.get(window_w)
        if fit is None:
            raise ValueError(
                f"window {window_w} out of range 1..{self.window_count}"
            )
        return max(fit.predict(pub_year), self.floor)

    def to_json(self) -> str:
        payload = {
            "fit_year_range": list(self.fit_year_range),
            "floor": self.floor,
            "window_fits": {
                str(w): {
                    "slope": fit.slope,
                    "intercept": fit.intercept,
                    "n_points": fit.n_points,
                }
                for w, fit in sorted(self.window_fits.items())
            },
        }
        return json.dumps(payload, indent=2) + "\n"

    @classmethod
    def from_json(cls, text: str) -> ExpectationModel:
        payload = json.loads(text)
        fits = {
            int(w): WindowFit(
                slope=entry["slope"],
                intercept=entry["intercept"],
                n_points=entry["n_points"],
            )
            for w, entry in payload["window_fits"].items()
        }
        year_min, year_max = payload["fit_year_range"]
        return cls(
            window_fits=fits,
            fit_year_range=(year_min, year_max),
            floor=payload["floor"],
        )

    def save(self, path: str | Path) -> None:
        Path(path).write_text(self.to_json(), encoding="utf-8")

    @classmethod
    def load(cls, path: str | Path) -> ExpectationModel:
        return cls.from_json(Path(path).read_text(encoding="utf-8"))


def collect_window_points(
    corpus: Corpus, window_count: int = 5, max_authors: int | None = None
) -> list[tuple[int, tuple[int, ...]]]:
    """Per-paper fit points: (pub_year, cumulative citations for w=1..W).

    The w-year count includes citing years from the publication year through
    w-1 years later. Papers with more than max_authors authors are skipped
    when the cap is given.
    """
    points = []
    for paper in corpus.papers.values():
        if max_authors is not None and paper.author_count > max_authors:
            continue
        counts = tuple(
            paper.citations_through(paper.pub_year + w - 1)
            for w in range(1, window_count + 1)
        )
        points.append((paper.pub_year, counts))
    return points


def _ols_line(x: np.ndarray, y: np.ndarray) -> tuple[float, float]:
    x_centered = x - x.mean()
    denom = float(x_centered @ x_centered)
    slope = float(x_centered @ (y - y.mean())) / denom
    intercept = float(y.mean()) - slope * float(x.mean())
    return slope, intercept


def fit_expectation_model(
    papers: Iterable[tuple[int, Sequence[int]]],
    window_count: int = 5,
    min_papers_per_year: int = 100,
    year_range: tuple[int, int] | None = None,
    floor: float = 1.0,
) -> ExpectationModel:
    """Fit one least-squares line per window over individual papers.

    ``papers`` yields (pub_year, cumulative citation counts for w=1..W).
    Publication years outside ``year_range`` or with fewer than
    ``min_papers_per_year`` papers are left out of the fit; at least two
    distinct years must remain.
    """
    points = [(year, tuple(counts)) for year, counts in papers]
    for year, counts in points:
        if len(counts) < window_count:
            raise ValueError(
                f"paper in year {year} has {len(counts)} window counts, "
                f"need {window_count}"
            )

    year_counts: dict[int, int] = {}
    for year, _ in points:
        year_counts[year] = year_counts.get(year, 0) + 1
    qualifying = {
        year
        for year, count in year_counts.items()
        if count >= min_papers_per_year
        and (year_range is None or year_range[0] <= year <= year_range[1])
    }
    if len(qualifying) < 2:
        raise InsufficientDataError(
            f"insufficient data: {len(qualifying)} qualifying publication "
            f"years (need at least 2 with >= {min_papers_per_year} papers)"
        )

    kept = [(year, counts) for year, counts in points if year in qualifying]
    x = np.array([year for year, _ in kept], dtype=float)
    fits = {}
    for w in range(1, window_count + 1):
        y = np.array([counts[w - 1] for _, counts in kept], dtype=float)
        slope, intercept = _ols_line(x, y)
        fits[w] = WindowFit(slope=slope, intercept=intercept, n_points=len(kept))

    return ExpectationModel(
        window_fits=fits,
        fit_year_range=(min(qualifying), max(qualifying)),
        floor=floor,
    )


def geometric_mean_baseline(citation_counts: Sequence[int]) -> float:
    """Geometric-mean expected count: exp(mean(ln(c + 1))) - 1.

    The +1 shift makes zero-cited papers admissible (publishing the paper
    counts as its first citation).
    """
    if len(citation_counts) == 0:
        raise ValueError("citation_counts must be non-empty")
    if any(c < 0 for c in citation_counts):
        raise ValueError("citation counts must be >= 0")
    log_mean = math.fsum(math.log(c + 1) for c in citation_counts) / len(
        citation_counts
    )
    return math.exp(log_mean) - 1.0
