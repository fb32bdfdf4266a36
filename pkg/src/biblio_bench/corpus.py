"""Publication corpus: JSONL ingestion, per-author records, cohort filters.

A corpus is a set of papers, each carrying its publication year, its author
list (or just an author count), and one citing year per citation event.
Author records restrict a researcher's papers and citations to the first
``window_years`` calendar years of their publishing career.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import IO, Iterable, Iterator


class CorpusFormatError(ValueError):
    """Raised for malformed or inconsistent corpus input lines."""


class UnknownAuthorError(LookupError):
    """Raised when an author id is not present in the corpus."""


@dataclass(frozen=True)
class Paper:
    """One publication with its citation events (one citing year per event)."""

    paper_id: str
    pub_year: int
    author_count: int
    citing_years: tuple[int, ...]
    author_ids: tuple[str, ...] | None = None

    def __post_init__(self) -> None:
        if self.author_count < 1:
            raise ValueError(f"paper {self.paper_id}: author_count must be >= 1")
        if self.author_ids is not None and len(self.author_ids) != self.author_count:
            raise ValueError(
                f"paper {self.paper_id}: author_count {self.author_count} does not "
                f"match {len(self.author_ids)} author ids"
            )
        for year in self.citing_years:
            if year < self.pub_year:
                raise ValueError(
                    f"paper {self.paper_id}: citing year {year} precedes "
                    f"publication year {self.pub_year}"
                )
        # Canonical event order, so equal multisets compare equal.
        object.__setattr__(self, "citing_years", tuple(sorted(self.citing_years)))

    def citations_through(self, last_year: int) -> int:
        """Number of citation events with citing year <= last_year."""
        return sum(1 for y in self.citing_years if y <= last_year)


@dataclass(frozen=True)
class RecordPaper:
    """A paper as seen inside an author record: windowed citation count c."""

    paper_id: str
    pub_year: int
    author_count: int
    citations: int


@dataclass(frozen=True)
class AuthorRecord:
    """An author's papers and citations within their first publishing years."""

    author_id: str
    first_year: int
    papers: tuple[RecordPaper, ...]
    window_years: int = 5

    def __post_init__(self) -> None:
        if not self.papers:
            raise ValueError(f"author {self.author_id}: record has no papers")
        last = self.first_year + self.window_years - 1
        for p in self.papers:
            if not self.first_year <= p.pub_year <= last:
                raise ValueError(
                    f"author {self.author_id}: paper {p.paper_id} published "
                    f"{p.pub_year}, outside {self.first_year}..{last}"
                )

    @property
    def mean_coauthors(self) -> float:
        """Mean number of co-authors per paper, mean(a_i - 1)."""
        return sum(p.author_count - 1 for p in self.papers) / len(self.papers)


@dataclass(frozen=True)
class FilterSpec:
    """Cohort eligibility bounds. Co-author bounds are strict inequalities."""

    mean_coauthors_min: float = 1.0
    mean_coauthors_max: float = 4.0
    max_start_year: int | None = None
    hard_mean_coauthor_cap: float | None = None

    def __post_init__(self) -> None:
        if self.mean_coauthors_min >= self.mean_coauthors_max:
            raise ValueError(
                "mean_coauthors_min must be less than mean_coauthors_max"
            )

    def admits(self, record: AuthorRecord) -> bool:
        mean = record.mean_coauthors
        if not self.mean_coauthors_min < mean < self.mean_coauthors_max:
            return False
        if self.max_start_year is not None and record.first_year > self.max_start_year:
            return False
        if self.hard_mean_coauthor_cap is not None and mean >= self.hard_mean_coauthor_cap:
            return False
        return True


@dataclass
class Corpus:
    """All papers, indexed by paper id and by author id."""

    papers: dict[str, Paper] = field(default_factory=dict)
    author_index: dict[str, list[str]] = field(default_factory=dict)

    @classmethod
    def from_papers(cls, papers: Iterable[Paper]) -> Corpus:
        corpus = cls()
        for paper in papers:
            corpus._add(paper)
        return corpus

    def _add(self, paper: Paper) -> None:
        if paper.paper_id in self.papers:
            raise CorpusFormatError(f"duplicate paper_id {paper.paper_id!r}")
        self.papers[paper.paper_id] = paper
        for author_id in paper.author_ids or ():
            self.author_index.setdefault(author_id, []).append(paper.paper_id)

    def __len__(self) -> int:
        return len(self.papers)


_LineSource = str | Path | IO[str] | Iterable[str | bytes]


def _iter_lines(source: _LineSource) -> Iterator[str]:
    if isinstance(source, (str, Path)):
        with open(source, "r", encoding="utf-8") as handle:
            yield from handle
    else:
        for line in source:
            yield line.decode("utf-8") if isinstance(line, bytes) else line


def _parse_line(text: str, lineno: int) -> Paper:
    def fail(message: str) -> CorpusFormatError:
        return CorpusFormatError(f"line {lineno}: {message}")

    try:
        record = json.loads(text)
    except json.JSONDecodeError as exc:
        raise fail(f"invalid JSON ({exc.msg})") from exc
    if not isinstance(record, dict):
        raise fail("record is not an object")

    for key in ("paper_id", "pub_year"):
        if key not in record:
            raise fail(f"missing field {key!r}")
    paper_id = record["paper_id"]
    if not isinstance(paper_id, str) or not paper_id:
        raise fail("paper_id must be a non-empty string")
    pub_year = record["pub_year"]
    if not isinstance(pub_year, int):
        raise fail("pub_year must be an integer")

    author_ids = record.get("author_ids")
    author_count = record.get("author_count")
    if author_ids is None and author_count is None:
        raise fail("one of author_ids or author_count is required")
    if author_ids is not None:
        if not isinstance(author_ids, list) or not all(
            isinstance(a, str) and a for a in author_ids
        ):
            raise fail("author_ids must be a list of non-empty strings")
        if author_count is not None and author_count != len(author_ids):
            raise fail(
                f"author_count {author_count} does not match "
                f"{len(author_ids)} author ids"
            )
        author_count = len(author_ids)
    if not isinstance(author_count, int) or author_count < 1:
        raise fail("author_count must be an integer >= 1")

    citing_years = record.get("citing_years", [])
    if not isinstance(citing_years, list) or not all(
        isinstance(y, int) for y in citing_years
    ):
        raise fail("citing_years must be a list of integers")
    for year in citing_years:
        if year < pub_year:
            raise fail(
                f"citing year {year} precedes publication year {pub_year}"
            )

    return Paper(
        paper_id=paper_id,
        pub_year=pub_year,
        author_count=author_count,
        citing_years=tuple(citing_years),
        author_ids=tuple(author_ids) if author_ids is not None else None,
    )


def ingest_corpus(source: _LineSource) -> Corpus:
    """Parse line-delimited JSON paper records into a Corpus.

    Each non-empty line is one record with paper_id, pub_year, citing_years,
    and exactly one of author_ids / author_count (when both, they must
    agree). Errors report the 1-based line number.
    """
    corpus = Corpus()
    for lineno, raw in enumerate(_iter_lines(source), start=1):
        line = raw.strip()
        if not line:
            continue
        paper = _parse_line(line, lineno)
        if paper.paper_id in corpus.papers:
            raise CorpusFormatError(
                f"line {lineno}: duplicate paper_id {paper.paper_id!r}"
            )
        corpus._add(paper)
    return corpus


def render_paper_line(paper: Paper) -> str:
    """Serialize one paper in the ingestion line format."""
    record: dict[str, object] = {
        "paper_id": paper.paper_id,
        "pub_year": paper.pub_year,
    }
    if paper.author_ids is not None:
        record["author_ids"] = list(paper.author_ids)
    else:
        record["author_count"] = paper.author_count
    record["citing_years"] = list(paper.citing_years)
    return json.dumps(record, ensure_ascii=False)


def render_corpus(corpus: Corpus) -> str:
    """Serialize a corpus as line-delimited JSON, one paper per line."""
    lines = [render_paper_line(p) for p in corpus.papers.values()]
    return "\n".join(lines) + ("\n" if lines else "")


def write_corpus(corpus: Corpus, path: str | Path) -> None:
    Path(path).write_text(render_corpus(corpus), encoding="utf-8")


def build_author_record(
    corpus: Corpus, author_id: str, window_years: int = 5
) -> AuthorRecord:
    """Restrict an author's papers and citations to their first window.

    The window starts with the calendar year of the author's first paper and
    spans window_years years inclusive. Papers published later are dropped;
    citation events after the window's last year are not counted.
    """
    if window_years < 1:
        raise ValueError("window_years must be >= 1")
    paper_ids = corpus.author_index.get(author_id)
    if not paper_ids:
        raise UnknownAuthorError(f"author {author_id!r} not found in corpus")
    papers = [corpus.papers[pid] for pid in paper_ids]
    first_year = min(p.pub_year for p in papers)
    last_year = first_year + window_years - 1
    kept = tuple(
        RecordPaper(
            paper_id=p.paper_id,
            pub_year=p.pub_year,
            author_count=p.author_count,
            citations=p.citations_through(last_year),
        )
        for p in papers
        if p.pub_year <= last_year
    )
    return AuthorRecord(
        author_id=author_id,
        first_year=first_year,
        papers=kept,
        window_years=window_years,
    )


def filter_cohort(
    records: Iterable[AuthorRecord], spec: FilterSpec
) -> list[AuthorRecord]:
    """Keep records admitted by the filter spec, preserving order."""
    return [r for r in records if spec.admits(r)]
