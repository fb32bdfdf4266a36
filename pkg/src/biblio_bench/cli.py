"""Command-line pipeline: generate, fit, indicators, compare.

Every file-writing command also emits a manifest (JSON, same directory)
recording the resolved parameters and sha256 checksums of inputs and
outputs, so a run can be replayed and checked byte for byte. Outputs are
staged and moved into place together; a failing command leaves no partial
files behind.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import logging
import os
import sys
from pathlib import Path
from typing import Sequence

from . import __version__
from .corpus import (
    FilterSpec,
    build_author_record,
    filter_cohort,
    ingest_corpus,
    render_corpus,
)
from .expectation import (
    ExpectationModel,
    collect_window_points,
    fit_expectation_model,
)
from .indicators import (
    INDICATOR_FIELDS,
    indicator_vector,
    parse_vector_table,
    render_vector_table,
)
from .stats import (
    boxplot_export,
    compare_cohorts,
    render_boxplot_table,
    render_comparison_table,
)
from .synth import SynthConfig, generate_corpus

LOG_ENV_VAR = "BIBLIO_BENCH_LOG"
STDOUT_PRECISION = 3

logger = logging.getLogger("biblio_bench")


def _configure_logging() -> None:
    level_name = os.environ.get(LOG_ENV_VAR, "WARNING").upper()
    level = getattr(logging, level_name, None)
    if not isinstance(level, int):
        level = logging.WARNING
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")
    logger.setLevel(level)


def _sidecar(out: Path, tag: str) -> Path:
    """A path next to `out` sharing its stem: corpus.jsonl -> corpus<tag>."""
    stem = out.stem if out.suffix else out.name
    return out.with_name(stem + tag)


def _text_sha256(text: str) -> str:
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


def _file_sha256(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


def _render_manifest(
    command: str,
    parameters: dict,
    inputs: Sequence[Path],
    outputs: dict[Path, str],
    extra: dict | None = None,
) -> str:
    payload = {
        "command": command,
        "tool_version": __version__,
        "parameters": parameters,
        "inputs": [
            {"path": str(path), "sha256": _file_sha256(path)} for path in inputs
        ],
        "outputs": [
            {"path": str(path), "sha256": _text_sha256(text)}
            for path, text in outputs.items()
        ],
    }
    if extra:
        payload.update(extra)
    return json.dumps(payload, indent=2) + "\n"


def _write_outputs(outputs: dict[Path, str]) -> None:
    """Write all outputs or none.

    Each file is staged under a temporary name first; only after every
    stage succeeds are the files moved into place. Any failure removes the
    staged copies and whatever finals were already placed.
    """
    staged: list[tuple[Path, Path]] = []
    placed: list[Path] = []
    try:
        for path, text in outputs.items():
            tmp = path.with_name(path.name + ".tmp")
            tmp.write_text(text, encoding="utf-8")
            staged.append((tmp, path))
        for tmp, path in staged:
            os.replace(tmp, path)
            placed.append(path)
    except BaseException:
        for tmp, _ in staged:
            tmp.unlink(missing_ok=True)
        for path in placed:
            path.unlink(missing_ok=True)
        raise


def cmd_generate(args: argparse.Namespace) -> int:
    config = SynthConfig.from_json(Path(args.seed_config))
    corpus, star_ids, control_ids = generate_corpus(config)
    logger.info(
        "generated %d papers for %d stars and %d controls",
        len(corpus),
        len(star_ids),
        len(control_ids),
    )

    out = Path(args.out)
    outputs = {
        out: render_corpus(corpus),
        _sidecar(out, ".stars.txt"): "".join(f"{a}\n" for a in star_ids),
        _sidecar(out, ".controls.txt"): "".join(f"{a}\n" for a in control_ids),
    }
    manifest = _render_manifest(
        "generate",
        parameters={"seed_config": str(args.seed_config), "out": str(out)},
        inputs=[Path(args.seed_config)],
        outputs=outputs,
        extra={
            "config": json.loads(config.to_json()),
            "star_author_ids": list(star_ids),
            "control_author_ids": list(control_ids),
        },
    )
    outputs[_sidecar(out, ".manifest.json")] = manifest
    _write_outputs(outputs)
    return 0


def cmd_fit(args: argparse.Namespace) -> int:
    corpus_path = Path(args.corpus)
    corpus = ingest_corpus(corpus_path)
    logger.info("read %d papers from %s", len(corpus), corpus_path)

    year_range = None
    if args.year_min is not None or args.year_max is not None:
        low = args.year_min if args.year_min is not None else -(10**9)
        high = args.year_max if args.year_max is not None else 10**9
        year_range = (low, high)
    points = collect_window_points(corpus, window_count=args.windows)
    model = fit_expectation_model(
        points,
        window_count=args.windows,
        min_papers_per_year=args.min_papers,
        year_range=year_range,
    )
    logger.info(
        "fitted %d windows over years %d..%d",
        model.window_count,
        model.fit_year_range[0],
        model.fit_year_range[1],
    )

    out = Path(args.out)
    outputs = {out: model.to_json()}
    manifest = _render_manifest(
        "fit",
        parameters={
            "corpus": str(corpus_path),
            "year_min": args.year_min,
            "year_max": args.year_max,
            "min_papers": args.min_papers,
            "windows": args.windows,
            "out": str(out),
        },
        inputs=[corpus_path],
        outputs=outputs,
    )
    outputs[_sidecar(out, ".manifest.json")] = manifest
    _write_outputs(outputs)
    return 0


def _read_author_list(path: Path) -> list[str]:
    ids = []
    for line in path.read_text(encoding="utf-8").splitlines():
        entry = line.strip()
        if entry and not entry.startswith("#"):
            ids.append(entry)
    return ids


def _parse_max_start_year(raw: str) -> int | None:
    if raw.lower() == "none":
        return None
    try:
        return int(raw)
    except ValueError:
        raise ValueError(
            f"--max-start-year must be an integer or 'none', got {raw!r}"
        ) from None


def cmd_indicators(args: argparse.Namespace) -> int:
    corpus_path = Path(args.corpus)
    model_path = Path(args.model)
    corpus = ingest_corpus(corpus_path)
    model = ExpectationModel.load(model_path)
    if args.windows > model.window_count:
        raise ValueError(
            f"model provides windows 1..{model.window_count} "
            f"but --windows is {args.windows}"
        )

    if args.authors:
        author_ids = _read_author_list(Path(args.authors))
    else:
        author_ids = sorted(corpus.author_index)
    records = [
        build_author_record(corpus, author_id, window_years=args.windows)
        for author_id in author_ids
    ]
    spec = FilterSpec(
        mean_coauthors_min=args.coauthor_min,
        mean_coauthors_max=args.coauthor_max,
        max_start_year=_parse_max_start_year(args.max_start_year),
        hard_mean_coauthor_cap=args.coauthor_hard_cap,
    )
    kept = sorted(filter_cohort(records, spec), key=lambda r: r.author_id)
    logger.info("%d of %d authors passed the cohort filter", len(kept), len(records))
    if not kept:
        print("warning: no authors passed the cohort filter", file=sys.stderr)

    rows = [(record.author_id, indicator_vector(record, model)) for record in kept]

    if args.out is None:
        precision = args.precision if args.precision is not None else STDOUT_PRECISION
        sys.stdout.write(render_vector_table(rows, precision=precision))
        return 0

    out = Path(args.out)
    outputs = {out: render_vector_table(rows, precision=args.precision)}
    manifest = _render_manifest(
        "indicators",
        parameters={
            "corpus": str(corpus_path),
            "model": str(model_path),
            "authors": str(args.authors) if args.authors else None,
            "coauthor_min": args.coauthor_min,
            "coauthor_max": args.coauthor_max,
            "coauthor_hard_cap": args.coauthor_hard_cap,
            "max_start_year": args.max_start_year,
            "windows": args.windows,
            "precision": args.precision,
            "out": str(out),
        },
        inputs=[corpus_path, model_path]
        + ([Path(args.authors)] if args.authors else []),
        outputs=outputs,
    )
    outputs[_sidecar(out, ".manifest.json")] = manifest
    _write_outputs(outputs)
    return 0


def cmd_compare(args: argparse.Namespace) -> int:
    stars_path = Path(args.stars)
    control_path = Path(args.control)
    stars = [vector for _, vector in parse_vector_table(stars_path)]
    control = [vector for _, vector in parse_vector_table(control_path)]
    if not stars:
        raise ValueError(f"stars table {stars_path} has no rows")
    if not control:
        raise ValueError(f"control table {control_path} has no rows")

    table = compare_cohorts(stars, control)
    cohorts = {"stars": stars, "control": control}
    summaries = []
    for indicator in INDICATOR_FIELDS:
        summaries.extend(boxplot_export(cohorts, indicator))

    if args.out is None:
        precision = args.precision if args.precision is not None else STDOUT_PRECISION
        sys.stdout.write(render_comparison_table(table, precision=precision))
        sys.stdout.write("\n")
        sys.stdout.write(render_boxplot_table(summaries, precision=precision))
        return 0

    out = Path(args.out)
    outputs = {
        out: render_comparison_table(table, precision=args.precision),
        _sidecar(out, ".boxplot.tsv"): render_boxplot_table(
            summaries, precision=args.precision
        ),
    }
    manifest = _render_manifest(
        "compare",
        parameters={
            "stars": str(stars_path),
            "control": str(control_path),
            "precision": args.precision,
            "out": str(out),
        },
        inputs=[stars_path, control_path],
        outputs=outputs,
    )
    outputs[_sidecar(out, ".manifest.json")] = manifest
    _write_outputs(outputs)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="biblio-bench",
        description=(
            "Compute author-level citation indicators over early-career "
            "publication records and compare cohorts"
        ),
    )
    parser.add_argument(
        "--version", action="version", version=f"%(prog)s {__version__}"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_gen = sub.add_parser(
        "generate", help="generate a synthetic corpus from a seeded config"
    )
    p_gen.add_argument(
        "--seed-config", required=True, help="JSON config with generator settings"
    )
    p_gen.add_argument("--out", required=True, help="corpus output path (JSONL)")
    p_gen.set_defaults(func=cmd_generate)

    p_fit = sub.add_parser(
        "fit", help="fit per-window expected citation lines to a corpus"
    )
    p_fit.add_argument("--corpus", required=True, help="corpus path (JSONL)")
    p_fit.add_argument(
        "--year-min", type=int, default=None, help="first publication year to fit"
    )
    p_fit.add_argument(
        "--year-max", type=int, default=None, help="last publication year to fit"
    )
    p_fit.add_argument(
        "--min-papers",
        type=int,
        default=100,
        help="minimum papers a year needs to enter the fit (default 100)",
    )
    p_fit.add_argument(
        "--windows", type=int, default=5, help="number of citation windows (default 5)"
    )
    p_fit.add_argument("--out", required=True, help="model output path (JSON)")
    p_fit.set_defaults(func=cmd_fit)

    p_ind = sub.add_parser(
        "indicators", help="compute the 17-indicator vector per qualifying author"
    )
    p_ind.add_argument("--corpus", required=True, help="corpus path (JSONL)")
    p_ind.add_argument("--model", required=True, help="expectation model path (JSON)")
    p_ind.add_argument(
        "--authors",
        default=None,
        help="file with one author id per line; default: every indexed author",
    )
    p_ind.add_argument(
        "--coauthor-min",
        type=float,
        default=1.0,
        help="mean co-author count must exceed this (default 1)",
    )
    p_ind.add_argument(
        "--coauthor-max",
        type=float,
        default=4.0,
        help="mean co-author count must stay below this (default 4)",
    )
    p_ind.add_argument(
        "--coauthor-hard-cap",
        type=float,
        default=None,
        help="drop authors at or above this mean co-author count",
    )
    p_ind.add_argument(
        "--max-start-year",
        default="1998",
        help="latest admissible first-publication year, or 'none' (default 1998)",
    )
    p_ind.add_argument(
        "--windows", type=int, default=5, help="career window length in years"
    )
    p_ind.add_argument(
        "--precision",
        type=int,
        default=None,
        help="round table values to this many decimals (default: full precision)",
    )
    p_ind.add_argument(
        "--out", default=None, help="table output path (default: stdout, 3 decimals)"
    )
    p_ind.set_defaults(func=cmd_indicators)

    p_cmp = sub.add_parser(
        "compare", help="rank-sum comparison of two indicator tables"
    )
    p_cmp.add_argument("--stars", required=True, help="stars vector table path")
    p_cmp.add_argument("--control", required=True, help="control vector table path")
    p_cmp.add_argument(
        "--precision",
        type=int,
        default=None,
        help="round table values to this many decimals (default: full precision)",
    )
    p_cmp.add_argument(
        "--out",
        default=None,
        help=(
            "comparison table output path; boxplot data goes to <stem>.boxplot.tsv "
            "(default: stdout, 3 decimals)"
        ),
    )
    p_cmp.set_defaults(func=cmd_compare)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    _configure_logging()
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, LookupError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
