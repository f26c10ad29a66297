"""Reference stability and title-word trend analysis for bibliographic exports."""

__version__ = "0.1.0"

from .citation import (
    CitationTable,
    CocitationTable,
    CoreRefSet,
    GrowthFactor,
    RsiCell,
    citation_counts,
    cocitation_counts,
    core_references,
    growth_factor,
    rsi,
    rsi_series,
)
from .parsers import ParseResult, parse_medline, parse_wos, read_medline, read_wos
from .records import (
    Corpus,
    PaperRecord,
    RefKey,
    Source,
    ThresholdConfig,
    YearSlice,
    normalize_ref,
    slice_by_year,
)
from .text import (
    StopwordList,
    TermTable,
    TrendSeries,
    document_frequencies,
    emerging_terms,
    term_trend,
    tokenize_title,
)

__all__ = [
    "CitationTable", "CocitationTable", "CoreRefSet", "Corpus", "GrowthFactor",
    "PaperRecord", "ParseResult", "RefKey", "RsiCell", "Source", "StopwordList",
    "TermTable", "ThresholdConfig", "TrendSeries", "YearSlice", "citation_counts",
    "cocitation_counts", "core_references", "document_frequencies", "emerging_terms",
    "growth_factor", "normalize_ref", "parse_medline", "parse_wos", "read_medline",
    "read_wos", "rsi", "rsi_series", "slice_by_year", "term_trend", "tokenize_title",
]
