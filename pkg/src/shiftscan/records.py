"""In-memory bibliographic data model.

Everything here is immutable once built; the analysis modules only read it.
"""

from __future__ import annotations

import enum
import re
from collections.abc import Iterable
from dataclasses import dataclass, field
from functools import cached_property
from typing import NewType

from .errors import DuplicateRecord, EmptyRef, InvalidThreshold, YearOutOfRange

RefKey = NewType("RefKey", str)

_DOI_SUFFIX = re.compile(r",\s*DOI\b.*$")
_TRAILING = " .,;:"


def normalize_ref(raw: str) -> RefKey:
    """Canonicalize a cited-reference string.

    Uppercases, collapses whitespace, drops a trailing ``, DOI ...`` segment
    and strips trailing punctuation. Idempotent and case-insensitive.

    >>> normalize_ref("  layman dl,  1971, p natl acad sci usa, V68, P454. ")
    'LAYMAN DL, 1971, P NATL ACAD SCI USA, V68, P454'
    """
    # casefold first so that lower(x) and x land on the same key
    text = " ".join(raw.casefold().upper().split())
    text = _DOI_SUFFIX.sub("", text).rstrip(_TRAILING)
    if not text:
        raise EmptyRef(f"empty cited reference: {raw!r}")
    return RefKey(text)


class Source(enum.Enum):
    WOS = "wos"
    MEDLINE = "medline"


@dataclass(frozen=True)
class PaperRecord:
    record_id: str
    pub_year: int
    title: str
    cited_refs: frozenset[RefKey] = frozenset()
    source: Source = Source.WOS
    # MeSH headings, MEDLINE only; kept as metadata
    mesh: tuple[str, ...] = ()

    def __post_init__(self):
        if not isinstance(self.cited_refs, frozenset):
            object.__setattr__(self, "cited_refs", frozenset(self.cited_refs))


@dataclass(frozen=True)
class ThresholdConfig:
    """Citation (``c``) and co-citation (``k``) minimums, written ``c/k``."""

    citation_min: int
    cocitation_min: int

    def __post_init__(self):
        c, k = self.citation_min, self.cocitation_min
        if not (isinstance(c, int) and isinstance(k, int)):
            raise InvalidThreshold(f"thresholds must be integers, got {c!r}/{k!r}")
        if c < 1 or k < 1:
            raise InvalidThreshold(f"thresholds must be positive, got {c}/{k}")
        if k > c:
            raise InvalidThreshold(
                f"co-citation threshold {k} exceeds citation threshold {c}"
            )

    @classmethod
    def parse(cls, text: str) -> ThresholdConfig:
        try:
            c, k = text.strip().split("/")
            return cls(int(c), int(k))
        except ValueError as exc:
            if isinstance(exc, InvalidThreshold):
                raise
            raise InvalidThreshold(f"expected c/k, got {text!r}") from None

    @property
    def label(self) -> str:
        return f"{self.citation_min}/{self.cocitation_min}"

    def __str__(self) -> str:
        return self.label


@dataclass(frozen=True)
class YearSlice:
    year: int
    records: tuple[PaperRecord, ...] = ()

    @property
    def n_papers(self) -> int:
        return len(self.records)

    @cached_property
    def refs(self) -> frozenset[RefKey]:
        """Union of the cited references of every record in the slice."""
        out: set[RefKey] = set()
        for rec in self.records:
            out.update(rec.cited_refs)
        return frozenset(out)

    @property
    def distinct_refs(self) -> int:
        return len(self.refs)


@dataclass(frozen=True)
class Corpus:
    """A set of records over an inclusive ``(min_year, max_year)`` range.

    When ``year_range`` is omitted it is taken from the records themselves.
    Record ids must be unique.
    """

    records: tuple[PaperRecord, ...]
    year_range: tuple[int, int] = field(default=None)  # type: ignore[assignment]

    def __post_init__(self):
        object.__setattr__(self, "records", tuple(self.records))
        seen: set[str] = set()
        for rec in self.records:
            if rec.record_id in seen:
                raise DuplicateRecord(f"duplicate record id {rec.record_id!r}")
            seen.add(rec.record_id)
        if self.year_range is None:
            if not self.records:
                raise ValueError("year_range is required for an empty corpus")
            years = [r.pub_year for r in self.records]
            object.__setattr__(self, "year_range", (min(years), max(years)))
        lo, hi = self.year_range
        if lo > hi:
            raise ValueError(f"empty year range {lo}:{hi}")
        object.__setattr__(self, "year_range", (int(lo), int(hi)))

    def __len__(self) -> int:
        return len(self.records)

    @property
    def years(self) -> range:
        lo, hi = self.year_range
        return range(lo, hi + 1)

    def filter(self, source: Source) -> Corpus:
        return Corpus(
            tuple(r for r in self.records if r.source is source), self.year_range
        )

    @classmethod
    def from_records(
        cls, records: Iterable[PaperRecord], year_range: tuple[int, int] | None = None
    ) -> Corpus:
        return cls(tuple(records), year_range)  # type: ignore[arg-type]


def slice_by_year(corpus: Corpus) -> list[YearSlice]:
    """Partition ``corpus`` into one slice per year of its range, ascending.

    Years with no records get an empty slice. Raises
    :class:`~shiftscan.errors.YearOutOfRange` for a record outside the range.
    """
    lo, hi = corpus.year_range
    buckets: dict[int, list[PaperRecord]] = {y: [] for y in corpus.years}
    for rec in corpus.records:
        if not lo <= rec.pub_year <= hi:
            raise YearOutOfRange(rec.record_id, rec.pub_year, corpus.year_range)
        buckets[rec.pub_year].append(rec)
    return [YearSlice(y, tuple(buckets[y])) for y in corpus.years]
