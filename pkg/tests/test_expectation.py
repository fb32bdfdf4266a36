import math

import numpy as np
import pytest

from biblio_bench.corpus import ingest_corpus
from biblio_bench.expectation import (
    ExpectationModel,
    InsufficientDataError,
    WindowFit,
    collect_window_points,
    fit_expectation_model,
    geometric_mean_baseline,
)
from oracles import ols_closed_form


def test_window_fit_predict():
    fit = WindowFit(slope=2.0, intercept=-3988.0, n_points=10)
    assert fit.predict(1995) == 2.0
    assert fit.predict(2000) == 12.0


def make_model(slopes, intercepts, floor=1.0):
    fits = {
        w + 1: WindowFit(slope=s, intercept=b, n_points=5)
        for w, (s, b) in enumerate(zip(slopes, intercepts))
    }
    return ExpectationModel(window_fits=fits, fit_year_range=(1995, 2004), floor=floor)


def test_model_requires_contiguous_windows():
    fits = {
        1: WindowFit(slope=0.0, intercept=1.0, n_points=5),
        3: WindowFit(slope=0.0, intercept=1.0, n_points=5),
    }
    with pytest.raises(ValueError):
        ExpectationModel(window_fits=fits, fit_year_range=(1995, 2004), floor=1.0)
    with pytest.raises(ValueError):
        ExpectationModel(window_fits={}, fit_year_range=(1995, 2004), floor=1.0)


def test_model_floor_must_be_positive():
    fits = {1: WindowFit(slope=0.0, intercept=1.0, n_points=5)}
    with pytest.raises(ValueError):
        ExpectationModel(window_fits=fits, fit_year_range=(1995, 2004), floor=0.0)


def test_expected_citations_applies_floor():
    model = make_model([0.5], [-996.0], floor=1.0)
    # line value at 1996: 0.5*1996 - 996 = 2.0
    assert model.expected_citations(1996, 1) == 2.0
    # line value at 1990 is -1.0, clamped to the floor
    assert model.expected_citations(1990, 1) == 1.0


def test_expected_citations_extrapolates_beyond_fit_years():
    model = make_model([1.0], [-1990.0])
    assert model.expected_citations(2030, 1) == 40.0


def test_expected_citations_rejects_unknown_window():
    model = make_model([0.0, 0.0], [2.0, 3.0])
    with pytest.raises(ValueError, match="window"):
        model.expected_citations(1996, 3)
    with pytest.raises(ValueError, match="window"):
        model.expected_citations(1996, 0)


def test_model_json_round_trip(tmp_path):
    model = make_model([0.1234567890123, -0.5], [3.0, 4.25], floor=0.75)
    again = ExpectationModel.from_json(model.to_json())
    assert again == model
    path = tmp_path / "model.json"
    model.save(path)
    assert ExpectationModel.load(path) == model
    assert ExpectationModel.load(path).to_json() == model.to_json()


def test_collect_window_points():
    corpus = ingest_corpus([
        '{"paper_id": "p1", "pub_year": 2000, "author_count": 2,'
        ' "citing_years": [2000, 2001, 2001, 2003, 2004, 2007]}',
        '{"paper_id": "p2", "pub_year": 2001, "author_count": 9,'
        ' "citing_years": [2002]}',
    ])
    points = dict(collect_window_points(corpus, window_count=5))
    # cumulative counts for windows 1..5: pub year alone, then one more year each
    assert points[2000] == (1, 3, 3, 4, 5)
    assert points[2001] == (0, 1, 1, 1, 1)
    capped = collect_window_points(corpus, window_count=5, max_authors=5)
    assert [year for year, _ in capped] == [2000]


def years_points(year_to_counts, copies=1):
    points = []
    for year, counts in year_to_counts.items():
        points.extend([(year, counts)] * copies)
    return points


def test_fit_recovers_noiseless_lines_exactly():
    # counts grow linearly: window w count is w*(year-1994)
    data = {
        year: tuple(w * (year - 1994) for w in range(1, 6))
        for year in range(1995, 2005)
    }
    model = fit_expectation_model(
        years_points(data, copies=120), min_papers_per_year=100
    )
    assert model.fit_year_range == (1995, 2004)
    for w in range(1, 6):
        fit = model.window_fits[w]
        assert fit.slope == float(w)
        assert fit.intercept == float(-1994 * w)
        assert fit.n_points == 1200


def test_fit_matches_closed_form_on_noisy_data():
    rng = np.random.default_rng(20240117)
    for _ in range(25):
        years = rng.choice(np.arange(1990, 2010), size=8, replace=False)
        points = []
        for year in years:
            for _ in range(3):
                counts = tuple(int(c) for c in rng.integers(0, 400, size=2))
                points.append((int(year), counts))
        model = fit_expectation_model(points, window_count=2, min_papers_per_year=1)
        xs = [year for year, _ in points]
        for w in (1, 2):
            ys = [counts[w - 1] for _, counts in points]
            slope, intercept = ols_closed_form(xs, ys)
            assert math.isclose(model.window_fits[w].slope, slope, rel_tol=1e-9)
            assert math.isclose(
                model.window_fits[w].intercept, intercept, rel_tol=1e-9
            )


def test_fit_min_papers_filters_years():
    data = {1995: (1, 2), 1996: (2, 3), 1997: (3, 4)}
    points = years_points(data, copies=10) + [(1998, (9, 9))]
    model = fit_expectation_model(points, window_count=2, min_papers_per_year=5)
    assert model.fit_year_range == (1995, 1997)
    # the lone 1998 paper stays out of the fit
    assert model.window_fits[1].n_points == 30


def test_fit_year_range_filters_years():
    data = {year: (year - 1990, 0) for year in range(1990, 2000)}
    model = fit_expectation_model(
        years_points(data, copies=5),
        window_count=2,
        min_papers_per_year=1,
        year_range=(1993, 1996),
    )
    assert model.fit_year_range == (1993, 1996)
    assert model.window_fits[1].n_points == 20


def test_fit_insufficient_years_raises():
    points = years_points({1995: (1, 1)}, copies=200)
    with pytest.raises(InsufficientDataError, match="insufficient data"):
        fit_expectation_model(points, window_count=2, min_papers_per_year=100)
    spread = years_points({1995: (1, 1), 1996: (2, 2)}, copies=99)
    with pytest.raises(InsufficientDataError):
        fit_expectation_model(spread, window_count=2, min_papers_per_year=100)


def test_fit_rejects_short_count_tuples():
    with pytest.raises(ValueError, match="window counts"):
        fit_expectation_model([(1995, (1, 2)), (1996, (1,))], window_count=2,
                              min_papers_per_year=1)


def test_geometric_mean_baseline():
    assert geometric_mean_baseline([0, 0, 0]) == 0.0
    assert geometric_mean_baseline([7]) == pytest.approx(7.0)
    expected = math.exp((math.log(2.0) + math.log(4.0)) / 2.0) - 1.0
    assert geometric_mean_baseline([1, 3]) == pytest.approx(expected)
    with pytest.raises(ValueError):
        geometric_mean_baseline([])
    with pytest.raises(ValueError):
        geometric_mean_baseline([3, -1])
