"""Title-word document frequencies and their change over time."""

from __future__ import annotations

import os
import re
from collections import Counter
from collections.abc import Iterable, Mapping
from dataclasses import dataclass
from fractions import Fraction
from importlib import resources

from .errors import BadQuery, StopwordQuery, WindowOrder, WindowOverlap
from .records import Corpus, YearSlice, slice_by_year

_WORD = re.compile(r"[^\W_]+")
_HYPHENATED = re.compile(r"[^\W_]+(?:-[^\W_]+)*")

DEFAULT_MIN_DF = 3
DEFAULT_MIN_RATIO = Fraction(2)


def tokenize_title(title: str, *, split_hyphens: bool = True) -> list[str]:
    """Lowercase word tokens of a title; numbers are dropped.

    >>> tokenize_title("Type-I procollagen (1971)")
    ['type', 'i', 'procollagen']
    """
    pattern = _WORD if split_hyphens else _HYPHENATED
    tokens = []
    for tok in pattern.findall(title.lower()):
        if all(part.isnumeric() for part in tok.split("-")):
            continue
        tokens.append(tok)
    return tokens


@dataclass(frozen=True)
class StopwordList:
    words: frozenset[str]

    def __post_init__(self):
        object.__setattr__(self, "words", frozenset(w.lower() for w in self.words))

    def __contains__(self, token: object) -> bool:
        return token in self.words

    def __len__(self) -> int:
        return len(self.words)

    @classmethod
    def parse(cls, text: str) -> StopwordList:
        """One token per line; ``#`` starts a comment."""
        words = set()
        for line in text.splitlines():
            word = line.split("#", 1)[0].strip()
            if word:
                words.add(word.lower())
        return cls(frozenset(words))

    @classmethod
    def load(cls, path: str | os.PathLike) -> StopwordList:
        with open(path, encoding="utf-8", errors="replace") as fh:
            return cls.parse(fh.read())

    @classmethod
    def default(cls) -> StopwordList:
        data = resources.files("shiftscan").joinpath("data/stopwords_en.txt")
        return cls.parse(data.read_text(encoding="utf-8"))

    @classmethod
    def empty(cls) -> StopwordList:
        return cls(frozenset())


@dataclass(frozen=True)
class TermTable:
    year: int
    n_docs: int
    df: Mapping[str, int]


@dataclass(frozen=True)
class TrendPoint:
    year: int
    df: int
    n_docs: int

    @property
    def rel_freq(self) -> Fraction:
        # empty slices report 0; check `empty` to tell them apart
        if self.n_docs == 0:
            return Fraction(0)
        return Fraction(self.df, self.n_docs)

    @property
    def empty(self) -> bool:
        return self.n_docs == 0


@dataclass(frozen=True)
class TrendSeries:
    term: str
    points: tuple[TrendPoint, ...]


@dataclass(frozen=True)
class EmergingTerm:
    term: str
    df_a: int
    df_b: int
    n_a: int
    n_b: int

    @property
    def is_new(self) -> bool:
        return self.df_a == 0

    @property
    def ratio(self) -> Fraction | None:
        """Growth of relative frequency from window a to b; None for NEW terms."""
        if self.df_a == 0:
            return None
        return Fraction(self.df_b * self.n_a, self.n_b * self.df_a)

    def sort_key(self):
        ratio = self.ratio
        return (not self.is_new, -(ratio or 0), -self.df_b, self.term)


def _title_terms(title: str, stop: StopwordList, split_hyphens: bool) -> set[str]:
    return {t for t in tokenize_title(title, split_hyphens=split_hyphens) if t not in stop}


def document_frequencies(
    slice_: YearSlice, stop: StopwordList, *, split_hyphens: bool = True
) -> TermTable:
    """Per-term count of records whose title contains the term at least once."""
    df: Counter[str] = Counter()
    for rec in slice_.records:
        df.update(_title_terms(rec.title, stop, split_hyphens))
    return TermTable(slice_.year, slice_.n_papers, dict(df))


def query_term(term: str, stop: StopwordList, *, split_hyphens: bool = True) -> str:
    """Validate a user-supplied term and return it in token form."""
    tokens = tokenize_title(term, split_hyphens=split_hyphens)
    if len(tokens) != 1:
        raise BadQuery(f"{term!r} is not a single title word")
    token = tokens[0]
    if token in stop:
        raise StopwordQuery(f"{token!r} is a stopword")
    return token


def term_trend(
    corpus: Corpus, term: str, stop: StopwordList, *, split_hyphens: bool = True
) -> TrendSeries:
    token = query_term(term, stop, split_hyphens=split_hyphens)
    points = []
    for s in slice_by_year(corpus):
        df = sum(
            token in tokenize_title(rec.title, split_hyphens=split_hyphens)
            for rec in s.records
        )
        points.append(TrendPoint(s.year, df, s.n_papers))
    return TrendSeries(token, tuple(points))


def _check_windows(a: tuple[int, int], b: tuple[int, int], years: range) -> None:
    for lo, hi in (a, b):
        if lo > hi:
            raise WindowOrder(f"window {lo}:{hi} ends before it starts")
        if lo not in years or hi not in years:
            raise ValueError(
                f"window {lo}:{hi} outside corpus range {years.start}:{years.stop - 1}"
            )
    if a[0] <= b[1] and b[0] <= a[1]:
        raise WindowOverlap(f"windows {a[0]}:{a[1]} and {b[0]}:{b[1]} overlap")
    if b[0] < a[0]:
        raise WindowOrder("the second window must come after the first")


def _pool(tables: Iterable[TermTable]) -> tuple[Counter[str], int]:
    df: Counter[str] = Counter()
    n = 0
    for table in tables:
        df.update(table.df)
        n += table.n_docs
    return df, n


def emerging_terms(
    corpus: Corpus,
    window_a: tuple[int, int],
    window_b: tuple[int, int],
    stop: StopwordList,
    min_df: int = DEFAULT_MIN_DF,
    min_ratio: Fraction | float | str = DEFAULT_MIN_RATIO,
    *,
    split_hyphens: bool = True,
) -> list[EmergingTerm]:
    """Title words that are new in, or grew into, the later window.

    Document frequencies are pooled over each inclusive year window and
    compared as fractions of the pooled record counts. A term is reported
    when it reaches ``min_df`` in window b and was either absent from window a
    (NEW) or grew by at least ``min_ratio``. Results are ranked NEW first,
    then by descending ratio, descending ``df_b`` and the term itself.
    """
    _check_windows(window_a, window_b, corpus.years)
    if min_df < 1:
        raise ValueError(f"min_df must be >= 1, got {min_df}")
    if isinstance(min_ratio, float):
        min_ratio = str(min_ratio)
    threshold = Fraction(min_ratio)

    tables = {
        s.year: document_frequencies(s, stop, split_hyphens=split_hyphens)
        for s in slice_by_year(corpus)
    }
    df_a, n_a = _pool(tables[y] for y in range(window_a[0], window_a[1] + 1))
    df_b, n_b = _pool(tables[y] for y in range(window_b[0], window_b[1] + 1))

    report = []
    for term, count_b in df_b.items():
        if count_b < min_df:
            continue
        row = EmergingTerm(term, df_a.get(term, 0), count_b, n_a, n_b)
        if row.is_new or row.ratio >= threshold:
            report.append(row)
    report.sort(key=EmergingTerm.sort_key)
    return report
