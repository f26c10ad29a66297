"""``shiftscan`` command line.

Usage::

    shiftscan ingest --wos savedrecs.txt --medline pubmed.nbib --years 1969:1975
    shiftscan rsi    --wos savedrecs.txt --thresholds 15/11,10/8 --gaps 1,2 --out results/
    shiftscan trend  --wos savedrecs.txt --medline pubmed.nbib --term procollagen
    shiftscan terms  --wos savedrecs.txt --windows 1969:1970,1971:1972
    shiftscan report --wos savedrecs.txt --medline pubmed.nbib --out results/

Exit codes: 0 success, 2 I/O or usage, 3 parse failure (``--strict``),
4 insufficient data, 5 bad query.
"""

from __future__ import annotations

import argparse
import logging
import os
import shlex
import sys
from collections.abc import Sequence
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from . import __version__
from .citation import core_sets, series_from_cores
from .errors import (
    BadQuery,
    EmptySlice,
    InsufficientYears,
    InvalidThreshold,
    ParseError,
    WindowOrder,
    WindowOverlap,
)
from .parsers import ParseResult, parse_medline, parse_wos
from .records import Corpus, PaperRecord, Source, ThresholdConfig, slice_by_year
from .tables import Artifact, fixed, manifest, render, rsi_text, write_artifacts
from .text import (
    DEFAULT_MIN_DF,
    DEFAULT_MIN_RATIO,
    StopwordList,
    emerging_terms,
    term_trend,
)

log = logging.getLogger("shiftscan")

EXIT_OK = 0
EXIT_IO = 2
EXIT_PARSE = 3
EXIT_DATA = 4
EXIT_QUERY = 5

DEFAULT_THRESHOLDS = "15/11,15/8,11/9,10/8,10/5"
DEFAULT_GAPS = "1,2"
STOPWORDS_ENV = "SHIFTSCAN_STOPWORDS"


class UsageError(Exception):
    """Bad flag or config value; exits with the I/O code like argparse does."""


class InputError(Exception):
    pass


@dataclass
class RunConfig:
    wos: list[Path] = field(default_factory=list)
    medline: list[Path] = field(default_factory=list)
    years: tuple[int, int] | None = None
    thresholds: list[ThresholdConfig] = field(default_factory=list)
    gaps: list[int] = field(default_factory=lambda: [1, 2])
    stopwords: Path | None = None
    term: str | None = None
    windows: tuple[tuple[int, int], tuple[int, int]] | None = None
    min_df: int = DEFAULT_MIN_DF
    min_ratio: str = str(DEFAULT_MIN_RATIO)
    format: str = "tsv"
    out: Path | None = None
    strict: bool = False

    @property
    def ext(self) -> str:
        return self.format


# -- option parsing -----------------------------------------------------------


def _year_range(text: str) -> tuple[int, int]:
    try:
        lo, hi = (int(p) for p in text.strip().split(":"))
    except ValueError:
        raise UsageError(f"expected a year range A:B, got {text!r}") from None
    if lo > hi:
        raise UsageError(f"empty year range {text!r}")
    return lo, hi


def _thresholds(text: str) -> list[ThresholdConfig]:
    try:
        out = [ThresholdConfig.parse(p) for p in text.split(",") if p.strip()]
    except InvalidThreshold as exc:
        raise UsageError(str(exc)) from None
    if not out:
        raise UsageError("no thresholds given")
    return out


def _gaps(text: str) -> list[int]:
    try:
        gaps = [int(p) for p in text.split(",") if p.strip()]
    except ValueError:
        raise UsageError(f"expected comma-separated gaps, got {text!r}") from None
    if not gaps or any(g < 1 for g in gaps):
        raise UsageError(f"gaps must be positive integers, got {text!r}")
    return gaps


def _windows(text: str):
    parts = [p for p in text.split(",") if p.strip()]
    if len(parts) != 2:
        raise UsageError(f"expected two windows A:B,C:D, got {text!r}")
    return _year_range(parts[0]), _year_range(parts[1])


def _positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise UsageError(f"expected an integer, got {text!r}") from None
    if value < 1:
        raise UsageError(f"expected a positive integer, got {text!r}")
    return value


def _ratio(text: str) -> str:
    try:
        Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"expected a number, got {text!r}") from None
    return text


def _bool(text: str) -> bool:
    value = text.strip().lower()
    if value in {"1", "true", "yes", "on"}:
        return True
    if value in {"0", "false", "no", "off", ""}:
        return False
    raise UsageError(f"expected a boolean, got {text!r}")


def _format(text: str) -> str:
    value = text.strip().lower()
    if value not in ("tsv", "csv"):
        raise UsageError(f"format must be tsv or csv, got {text!r}")
    return value


def _paths(value) -> list[Path]:
    if isinstance(value, str):
        value = shlex.split(value)
    return [Path(v) for v in value]


# key -> converter from config-file text (also applied to flag strings)
_CONVERTERS = {
    "wos": _paths,
    "medline": _paths,
    "years": _year_range,
    "thresholds": _thresholds,
    "gaps": _gaps,
    "stopwords": Path,
    "term": str.strip,
    "windows": _windows,
    "min_df": _positive_int,
    "min_ratio": _ratio,
    "format": _format,
    "out": Path,
    "strict": _bool,
}


def read_config_file(path: Path) -> dict[str, str]:
    """``key = value`` lines; keys are flag names with or without dashes."""
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot read config {path}: {exc.strerror}") from None
    values = {}
    for n, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        key = key.strip().lstrip("-").replace("-", "_")
        if not sep or key not in _CONVERTERS:
            raise UsageError(f"{path}:{n}: unknown config line {line!r}")
        values[key] = value.strip()
    return values


def build_config(args: argparse.Namespace) -> RunConfig:
    file_values = read_config_file(Path(args.config)) if args.config else {}
    cfg = RunConfig(thresholds=_thresholds(DEFAULT_THRESHOLDS))
    for key, convert in _CONVERTERS.items():
        flag = getattr(args, key, None)
        if flag is not None:
            value = flag if isinstance(flag, bool) else convert(flag)
        elif key in file_values:
            value = convert(file_values[key])
        else:
            continue
        setattr(cfg, key, value)
    if cfg.stopwords is None and os.environ.get(STOPWORDS_ENV):
        cfg.stopwords = Path(os.environ[STOPWORDS_ENV])
    if not cfg.wos and not cfg.medline:
        raise UsageError("no input files; pass --wos and/or --medline")
    return cfg


# -- loading ------------------------------------------------------------------


@dataclass
class Loaded:
    corpora: dict[Source, Corpus]

    @property
    def year_range(self) -> tuple[int, int]:
        return next(iter(self.corpora.values())).year_range

    @property
    def combined(self) -> Corpus:
        records = [r for c in self.corpora.values() for r in c.records]
        return Corpus(tuple(records), self.year_range)


def _read_one(path: Path, parse, strict: bool) -> ParseResult:
    try:
        data = path.read_bytes()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    if not data.strip():
        raise InputError(f"{path}: input file is empty")
    return parse(data, strict=strict, name=str(path))


def load_inputs(cfg: RunConfig) -> Loaded:
    by_source: dict[Source, list[PaperRecord]] = {}
    for source, paths, reader in (
        (Source.WOS, cfg.wos, parse_wos),
        (Source.MEDLINE, cfg.medline, parse_medline),
    ):
        if not paths:
            continue
        records: dict[str, PaperRecord] = {}
        for path in paths:
            result = _read_one(path, reader, cfg.strict)
            for err in result.warnings:
                log.warning("%s", err)
            if result.skipped:
                log.warning(
                    "%s: skipped %d of %d record block(s)",
                    path, len(result.skipped), result.blocks,
                )
                for err in result.skipped:
                    log.info("  %s", err)
            for rec in result.records:
                if rec.record_id in records:
                    log.warning("%s: duplicate record %s ignored", path, rec.record_id)
                    continue
                records[rec.record_id] = rec
        by_source[source] = list(records.values())

    all_records = [r for recs in by_source.values() for r in recs]
    if cfg.years is not None:
        lo, hi = cfg.years
        dropped = sum(not lo <= r.pub_year <= hi for r in all_records)
        if dropped:
            log.warning("%d record(s) outside %d:%d dropped", dropped, lo, hi)
        year_range = cfg.years
    elif all_records:
        years = [r.pub_year for r in all_records]
        year_range = (min(years), max(years))
    else:
        raise InsufficientYears("no records could be read from the input files")

    lo, hi = year_range
    corpora = {
        source: Corpus(tuple(r for r in recs if lo <= r.pub_year <= hi), year_range)
        for source, recs in by_source.items()
    }
    return Loaded(corpora)


# -- commands -----------------------------------------------------------------


def cmd_ingest(cfg: RunConfig, data: Loaded) -> Artifact:
    """Per-year paper and distinct-reference counts with an ``all`` row."""
    sources = list(data.corpora)
    per_source = {s: slice_by_year(c) for s, c in data.corpora.items()}
    combined = slice_by_year(data.combined)
    if len(sources) == 1:
        header = ["year", "papers", "distinct_refs"]
    else:
        header = ["year"] + [f"papers_{s.value}" for s in sources] + ["distinct_refs"]

    rows = []
    for i, sl in enumerate(combined):
        papers = [per_source[s][i].n_papers for s in sources]
        rows.append([sl.year, *papers, sl.distinct_refs])
    all_refs = set().union(*(sl.refs for sl in combined))
    rows.append(["all", *(len(data.corpora[s]) for s in sources), len(all_refs)])
    return Artifact(f"summary.{cfg.ext}", render(header, rows, cfg.format))


def cmd_rsi(cfg: RunConfig, data: Loaded) -> list[Artifact]:
    """One table per gap: core-set size per year, then ``shared/RSI`` per interval."""
    lo, hi = data.year_range
    for gap in cfg.gaps:
        if hi - lo < gap:
            raise InsufficientYears(
                f"a gap of {gap} needs at least {gap + 1} years, inputs cover {lo}:{hi}"
            )
    slices = slice_by_year(data.combined)
    cores = {t: core_sets(slices, t) for t in cfg.thresholds}
    years = [s.year for s in slices]

    out = []
    for gap in cfg.gaps:
        intervals = [f"{y}/{y + gap}" for y in years[:-gap]]
        header = ["thresholds", *map(str, years), *intervals]
        rows = []
        for t in cfg.thresholds:
            cells = series_from_cores(cores[t], gap)
            rows.append([t.label, *(len(c) for c in cores[t]), *map(rsi_text, cells)])
        out.append(Artifact(f"rsi_gap{gap}.{cfg.ext}", render(header, rows, cfg.format)))
    return out


def _stopwords(cfg: RunConfig) -> StopwordList:
    if cfg.stopwords is None:
        return StopwordList.default()
    try:
        return StopwordList.load(cfg.stopwords)
    except OSError as exc:
        raise InputError(f"cannot read stopwords {cfg.stopwords}: {exc.strerror}") from None


def cmd_trend(cfg: RunConfig, data: Loaded, term: str | None = None) -> Artifact:
    term = term or cfg.term
    if not term:
        raise BadQuery("trend needs --term")
    stop = _stopwords(cfg)
    rows = []
    token = None
    for source, corpus in data.corpora.items():
        series = term_trend(corpus, term, stop)
        token = series.term
        for p in series.points:
            rows.append([source.value, p.year, p.df, p.n_docs, fixed(p.rel_freq, 6)])
    header = ["source", "year", "df", "n_docs", "rel_freq"]
    return Artifact(f"trend_{token}.{cfg.ext}", render(header, rows, cfg.format))


def default_windows(year_range: tuple[int, int]):
    lo, hi = year_range
    if hi - lo < 3:
        raise InsufficientYears(
            f"default term windows need four years, inputs cover {lo}:{hi}; pass --windows"
        )
    return (lo, lo + 1), (lo + 2, lo + 3)


def cmd_terms(cfg: RunConfig, data: Loaded) -> Artifact:
    window_a, window_b = cfg.windows or default_windows(data.year_range)
    stop = _stopwords(cfg)
    header = ["source", "rank", "term", "df_a", "df_b", "rel_a", "rel_b", "ratio"]
    rows = []
    for source, corpus in data.corpora.items():
        report = emerging_terms(
            corpus, window_a, window_b, stop, min_df=cfg.min_df, min_ratio=cfg.min_ratio
        )
        for rank, row in enumerate(report, start=1):
            rel_a = fixed(Fraction(row.df_a, row.n_a) if row.n_a else 0, 6)
            rel_b = fixed(Fraction(row.df_b, row.n_b), 6)
            ratio = "NEW" if row.ratio is None else fixed(row.ratio, 6)
            rows.append(
                [source.value, rank, row.term, row.df_a, row.df_b, rel_a, rel_b, ratio]
            )
    return Artifact(f"emerging_terms.{cfg.ext}", render(header, rows, cfg.format))


def cmd_report(cfg: RunConfig, data: Loaded) -> list[Artifact]:
    """Every analysis into ``--out`` plus a manifest of content hashes."""
    artifacts = [cmd_ingest(cfg, data), *cmd_rsi(cfg, data), cmd_terms(cfg, data)]
    if cfg.term:
        artifacts.append(cmd_trend(cfg, data))
    artifacts.append(Artifact(f"manifest.{cfg.ext}", manifest(artifacts, cfg.format)))
    return artifacts


def _run_report(cfg, data):
    if cfg.out is None:
        raise UsageError("report needs --out")
    return cmd_report(cfg, data)


COMMANDS = {
    "ingest": (lambda cfg, data: [cmd_ingest(cfg, data)], "per-year corpus summary"),
    "rsi": (cmd_rsi, "reference stability tables, one per gap"),
    "trend": (lambda cfg, data: [cmd_trend(cfg, data)], "title frequency of one word by year"),
    "terms": (lambda cfg, data: [cmd_terms(cfg, data)], "new and growing title words"),
    "report": (_run_report, "all of the above into --out with a hash manifest"),
}


def make_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--wos", nargs="+", metavar="PATH", help="Web of Science export(s)")
    common.add_argument("--medline", nargs="+", metavar="PATH", help="MEDLINE .nbib file(s)")
    common.add_argument("--years", metavar="A:B", help="inclusive publication-year range")
    common.add_argument(
        "--thresholds", metavar="c/k[,c/k...]",
        help=f"citation/co-citation thresholds (default {DEFAULT_THRESHOLDS})",
    )
    common.add_argument("--gaps", metavar="G[,G...]", help=f"year gaps (default {DEFAULT_GAPS})")
    common.add_argument("--stopwords", metavar="PATH", help=f"stopword file (env {STOPWORDS_ENV})")
    common.add_argument("--term", metavar="WORD", help="title word for `trend`")
    common.add_argument(
        "--windows", metavar="A:B,C:D",
        help="year windows compared by `terms` (default: first two years vs next two)",
    )
    common.add_argument("--min-df", dest="min_df", metavar="N")
    common.add_argument("--min-ratio", dest="min_ratio", metavar="R")
    common.add_argument("--format", metavar="tsv|csv")
    common.add_argument("--out", metavar="DIR", help="output directory (default: stdout)")
    common.add_argument("--strict", action="store_true", default=None,
                        help="abort on the first malformed record")
    common.add_argument("--config", metavar="PATH", help="key = value config file")

    parser = argparse.ArgumentParser(
        prog="shiftscan",
        description="Reference stability and title-word trends in bibliographic exports.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, (_, summary) in COMMANDS.items():
        sub.add_parser(name, parents=[common], help=summary)
    return parser


def _emit(cfg: RunConfig, artifacts: Sequence[Artifact]) -> None:
    if cfg.out is not None:
        write_artifacts(cfg.out, artifacts)
        for art in artifacts:
            log.info("wrote %s", cfg.out / art.name)
        return
    for i, art in enumerate(artifacts):
        if len(artifacts) > 1:
            if i:
                sys.stdout.write("\n")
            sys.stdout.write(f"# {art.name}\n")
        sys.stdout.write(art.text)


def _setup_logging(verbose: bool) -> None:
    # own handler rather than basicConfig, which is a no-op once the root
    # logger has handlers (embedding apps, test runners)
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter("shiftscan: %(message)s"))
    log.handlers[:] = [handler]
    log.setLevel(logging.INFO if verbose else logging.WARNING)
    log.propagate = False


def main(argv: Sequence[str] | None = None) -> int:
    parser = make_parser()
    args = parser.parse_args(argv)
    _setup_logging(args.verbose)
    try:
        cfg = build_config(args)
        data = load_inputs(cfg)
        run, _ = COMMANDS[args.command]
        artifacts = run(cfg, data)
        _emit(cfg, artifacts)
    except (UsageError, InputError) as exc:
        log.error("%s", exc)
        return EXIT_IO
    except OSError as exc:
        log.error("%s", exc)
        return EXIT_IO
    except ParseError as exc:
        log.error("parse error: %s", exc)
        return EXIT_PARSE
    except (InsufficientYears, EmptySlice) as exc:
        log.error("%s", exc)
        return EXIT_DATA
    except (BadQuery, WindowOverlap, WindowOrder) as exc:
        log.error("%s", exc)
        return EXIT_QUERY
    except ValueError as exc:
        # window outside the year range and similar argument problems
        log.error("%s", exc)
        return EXIT_QUERY
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
