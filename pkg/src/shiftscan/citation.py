"""Citation and co-citation counting, core references, and reference stability.

Counts are always taken inside a single year slice. A reference is *core*
for a year when it is cited at least ``c`` times that year and is co-cited at
least ``k`` times with some other reference that also passes ``c``.

The reference stability index of two core sets is their Jaccard
coefficient, kept as the exact pair ``(shared, union)``.
"""

from __future__ import annotations

from collections import Counter
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import NamedTuple

from .errors import EmptySlice, InsufficientYears, ThresholdMismatch
from .records import Corpus, RefKey, ThresholdConfig, YearSlice, slice_by_year

Pair = tuple[RefKey, RefKey]


def pair(a: RefKey, b: RefKey) -> Pair:
    """Unordered pair key: the two references in sorted order."""
    return (a, b) if a < b else (b, a)


@dataclass(frozen=True)
class CitationTable:
    year: int
    counts: Mapping[RefKey, int]

    def __getitem__(self, ref: RefKey) -> int:
        return self.counts.get(ref, 0)

    def __len__(self) -> int:
        return len(self.counts)


@dataclass(frozen=True)
class CocitationTable:
    year: int
    counts: Mapping[Pair, int]

    def get(self, a: RefKey, b: RefKey) -> int:
        if a == b:
            return 0
        return self.counts.get(pair(a, b), 0)

    def __len__(self) -> int:
        return len(self.counts)


@dataclass(frozen=True)
class CoreRefSet:
    year: int
    thresholds: ThresholdConfig
    refs: frozenset[RefKey]

    def __len__(self) -> int:
        return len(self.refs)


@dataclass(frozen=True)
class RsiCell:
    year_a: int
    year_b: int
    n_a: int
    n_b: int
    shared: int
    union: int

    @property
    def rsi(self) -> Fraction | None:
        """Exact index, or ``None`` when both core sets are empty."""
        if self.union == 0:
            return None
        return Fraction(self.shared, self.union)

    @property
    def value(self) -> float | None:
        r = self.rsi
        return None if r is None else float(r)

    @property
    def defined(self) -> bool:
        return self.union > 0


class GrowthFactor(NamedTuple):
    papers: Fraction
    # None when the earlier slice has no cited references at all
    refs: Fraction | None


def citation_counts(slice_: YearSlice) -> CitationTable:
    counts: Counter[RefKey] = Counter()
    for rec in slice_.records:
        counts.update(rec.cited_refs)
    return CitationTable(slice_.year, dict(counts))


def cocitation_counts(
    slice_: YearSlice, restrict_to: Iterable[RefKey] | None = None
) -> CocitationTable:
    """Count, per unordered pair, the records citing both references.

    With ``restrict_to`` each record's references are filtered before pairs
    are enumerated, which keeps the per-record quadratic blow-up in check.
    """
    keep = None if restrict_to is None else frozenset(restrict_to)
    counts: Counter[Pair] = Counter()
    for rec in slice_.records:
        refs = rec.cited_refs if keep is None else rec.cited_refs & keep
        if len(refs) > 1:
            counts.update(combinations(sorted(refs), 2))
    return CocitationTable(slice_.year, dict(counts))


def core_references(slice_: YearSlice, t: ThresholdConfig) -> CoreRefSet:
    cites = citation_counts(slice_)
    survivors = {r for r, n in cites.counts.items() if n >= t.citation_min}
    cocites = cocitation_counts(slice_, survivors)
    core: set[RefKey] = set()
    for (a, b), n in cocites.counts.items():
        if n >= t.cocitation_min:
            core.add(a)
            core.add(b)
    return CoreRefSet(slice_.year, t, frozenset(core))


def rsi(a: CoreRefSet, b: CoreRefSet) -> RsiCell:
    if a.thresholds != b.thresholds:
        raise ThresholdMismatch(
            f"cannot compare core sets built at {a.thresholds} and {b.thresholds}"
        )
    shared = len(a.refs & b.refs)
    return RsiCell(
        year_a=a.year,
        year_b=b.year,
        n_a=len(a.refs),
        n_b=len(b.refs),
        shared=shared,
        union=len(a.refs) + len(b.refs) - shared,
    )


def core_sets(slices: Sequence[YearSlice], t: ThresholdConfig) -> list[CoreRefSet]:
    return [core_references(s, t) for s in slices]


def series_from_cores(cores: Sequence[CoreRefSet], gap: int) -> list[RsiCell]:
    """RSI cells for every ``(year, year + gap)`` pair, ascending.

    ``cores`` must hold one set per consecutive year.
    """
    if gap < 1:
        raise ValueError(f"gap must be >= 1, got {gap}")
    if len(cores) < gap + 1:
        span = f"{cores[0].year}:{cores[-1].year}" if cores else "empty range"
        raise InsufficientYears(
            f"a gap of {gap} needs at least {gap + 1} years, corpus covers {span}"
        )
    return [rsi(cores[i], cores[i + gap]) for i in range(len(cores) - gap)]


def rsi_series(corpus: Corpus, t: ThresholdConfig, gap: int) -> list[RsiCell]:
    """Reference stability over year intervals of width ``gap``.

    ``gap=1`` compares consecutive years, ``gap=2`` compares ``y`` with
    ``y + 2``, and so on.
    """
    if gap < 1:
        raise ValueError(f"gap must be >= 1, got {gap}")
    lo, hi = corpus.year_range
    if hi - lo < gap:
        raise InsufficientYears(
            f"a gap of {gap} needs at least {gap + 1} years, corpus covers {lo}:{hi}"
        )
    return series_from_cores(core_sets(slice_by_year(corpus), t), gap)


def growth_factor(corpus: Corpus, from_year: int, to_year: int) -> GrowthFactor:
    lo, hi = corpus.year_range
    for y in (from_year, to_year):
        if not lo <= y <= hi:
            raise ValueError(f"year {y} outside corpus range {lo}:{hi}")
    slices = {s.year: s for s in slice_by_year(corpus)}
    first, last = slices[from_year], slices[to_year]
    if first.n_papers == 0:
        raise EmptySlice(f"no papers in {from_year}")
    refs = None
    if first.distinct_refs:
        refs = Fraction(last.distinct_refs, first.distinct_refs)
    return GrowthFactor(Fraction(last.n_papers, first.n_papers), refs)
