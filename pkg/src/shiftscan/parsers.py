"""Readers and writers for offline bibliographic exports.

Two formats are supported:

* Web of Science field-tagged plain text (``FN``/``VR`` header, two-letter
  tags, indented continuation lines, ``ER`` after each record, ``EF`` at the
  end of the file).
* MEDLINE/PubMed ``.nbib`` (``TAG - value`` lines, blank-line separated
  records, continuation lines indented by six spaces).

Both parsers run in lenient mode by default: a broken record block is skipped
and reported in :attr:`ParseResult.skipped`. With ``strict=True`` the first
problem raises :class:`~shiftscan.errors.ParseError` or
:class:`~shiftscan.errors.MalformedRecord`.
"""

from __future__ import annotations

import os
import re
from collections.abc import Iterable
from dataclasses import dataclass, field
from typing import IO, Union

from .errors import EmptyRef, MalformedRecord, ParseError
from .records import PaperRecord, RefKey, Source, normalize_ref

TextSource = Union[str, bytes, IO[str], IO[bytes]]

_WOS_TAG = re.compile(r"([A-Z][A-Z0-9])(?: (.*))?")
_NBIB_TAG = re.compile(r"([A-Z][A-Z0-9]{0,3}) *- ?(.*)")
_YEAR = re.compile(r"(?<![0-9])([0-9]{4})(?![0-9])")
_WOS_HEADER_TAGS = {"FN", "VR"}
_WOS_RECORD_START = "PT"


@dataclass
class ParseResult:
    records: list[PaperRecord] = field(default_factory=list)
    skipped: list[ParseError] = field(default_factory=list)
    # stray lines outside any record block (lenient mode only)
    warnings: list[ParseError] = field(default_factory=list)
    blocks: int = 0

    def __iter__(self):
        return iter(self.records)

    def __len__(self) -> int:
        return len(self.records)


def _as_text(source: TextSource) -> str:
    data = source if isinstance(source, (str, bytes)) else source.read()
    if isinstance(data, bytes):
        data = data.decode("utf-8", errors="replace")
    if data.startswith("\ufeff"):
        data = data[1:]
    return data


def _lines(text: str) -> list[str]:
    return text.replace("\r\n", "\n").replace("\r", "\n").split("\n")


def _collapse(parts: Iterable[str]) -> str:
    return " ".join(" ".join(parts).split())


def _split_refs(lines: Iterable[str]) -> frozenset[RefKey]:
    refs = set()
    for line in lines:
        for piece in line.split("; "):
            try:
                refs.add(normalize_ref(piece))
            except EmptyRef:
                continue
    return frozenset(refs)


class _Block:
    """Accumulates one record block's fields while scanning."""

    def __init__(self, start: int):
        self.start = start
        self.fields: dict[str, list[str]] = {}
        self.last_tag: str | None = None
        self.error: ParseError | None = None

    def add(self, tag: str, value: str, line_no: int, allow_repeat: bool) -> None:
        if tag in self.fields and not allow_repeat:
            raise ParseError(f"repeated field {tag}", line_no)
        self.fields.setdefault(tag, []).append(value)
        self.last_tag = tag

    def extend(self, value: str, line_no: int) -> None:
        if self.last_tag is None:
            raise ParseError("continuation line before any field", line_no)
        self.fields[self.last_tag].append(value)

    def first(self, tag: str) -> str | None:
        values = self.fields.get(tag)
        if not values:
            return None
        return values[0].strip() or None


class _Collector:
    def __init__(self, strict: bool, source_name: str | None):
        self.strict = strict
        self.name = source_name
        self.result = ParseResult()

    def fail(self, err: ParseError) -> None:
        err.source = self.name
        if self.strict:
            raise err

    def finish(self, block: _Block, build) -> None:
        self.result.blocks += 1
        err = block.error
        if err is None:
            try:
                self.result.records.append(build(block))
                return
            except ParseError as exc:
                err = exc
        self.fail(err)
        self.result.skipped.append(err)

    def stray(self, err: ParseError) -> None:
        self.fail(err)
        self.result.warnings.append(err)


# -- Web of Science -----------------------------------------------------------


def _build_wos(block: _Block) -> PaperRecord:
    ut = block.first("UT")
    if ut is None:
        raise MalformedRecord("record without UT", block.start)
    py = block.first("PY")
    if py is None:
        raise MalformedRecord("record without PY", block.start)
    if not re.fullmatch(r"[0-9]{4}", py):
        raise MalformedRecord(f"unparseable PY {py!r}", block.start)
    return PaperRecord(
        record_id=ut,
        pub_year=int(py),
        title=_collapse(block.fields.get("TI", ())),
        cited_refs=_split_refs(block.fields.get("CR", ())),
        source=Source.WOS,
    )


def parse_wos(
    source: TextSource, *, strict: bool = False, name: str | None = None
) -> ParseResult:
    """Parse a Web of Science field-tagged export.

    ``source`` is the file content (``str`` or ``bytes``) or an open stream.
    Bytes are decoded as UTF-8 with replacement characters; a byte-order
    mark and CRLF line endings are tolerated.
    """
    out = _Collector(strict, name)
    block: _Block | None = None

    for line_no, line in enumerate(_lines(_as_text(source)), start=1):
        if not line.strip():
            continue
        if line[0].isspace():
            if block is None:
                out.stray(ParseError("continuation line outside a record", line_no))
            elif block.error is None:
                try:
                    block.extend(line.strip(), line_no)
                except ParseError as exc:
                    block.error = exc
            continue

        m = _WOS_TAG.fullmatch(line.rstrip())
        if m is None:
            err = ParseError(f"unrecognized line {line[:40]!r}", line_no)
            if block is None:
                out.stray(err)
            elif block.error is None:
                block.error = err
            continue

        tag, value = m.group(1), m.group(2) or ""
        if tag == "EF":
            break
        if block is None:
            if tag in _WOS_HEADER_TAGS:
                continue
            if tag == "ER":
                out.stray(ParseError("ER outside a record", line_no))
                continue
            block = _Block(line_no)
            block.add(tag, value, line_no, allow_repeat=False)
            continue

        if tag == "ER":
            out.finish(block, _build_wos)
            block = None
            continue
        if tag == _WOS_RECORD_START and (
            block.error is not None or _WOS_RECORD_START in block.fields
        ):
            # a new record begins before the previous one was closed
            if block.error is None:
                block.error = ParseError("record not terminated by ER", block.start)
            out.finish(block, _build_wos)
            block = _Block(line_no)
            block.add(tag, value, line_no, allow_repeat=False)
            continue
        if block.error is None:
            try:
                block.add(tag, value, line_no, allow_repeat=False)
            except ParseError as exc:
                block.error = exc

    if block is not None:
        if block.error is None:
            block.error = ParseError("record not terminated by ER", block.start)
        out.finish(block, _build_wos)
    return out.result


def write_wos(records: Iterable[PaperRecord]) -> str:
    """Serialize records to canonical field-tagged text, one CR entry per line."""
    lines = ["FN Clarivate Analytics Web of Science", "VR 1.0"]
    for rec in records:
        lines.append("PT J")
        if rec.title:
            lines.append(f"TI {rec.title}")
        lines.append(f"PY {rec.pub_year}")
        refs = sorted(rec.cited_refs)
        if refs:
            lines.append(f"CR {refs[0]}")
            lines.extend(f"   {ref}" for ref in refs[1:])
        lines.append(f"UT {rec.record_id}")
        lines.append("ER")
        lines.append("")
    lines.append("EF")
    return "\n".join(lines) + "\n"


def read_wos(path: str | os.PathLike, *, strict: bool = False) -> ParseResult:
    with open(path, "rb") as fh:
        return parse_wos(fh.read(), strict=strict, name=os.fspath(path))


# -- MEDLINE ------------------------------------------------------------------


def _build_medline(block: _Block) -> PaperRecord:
    pmid = block.first("PMID")
    if pmid is None:
        raise MalformedRecord("record without PMID", block.start)
    dp = block.first("DP")
    if dp is None:
        raise MalformedRecord("record without DP", block.start)
    m = _YEAR.search(dp)
    if m is None:
        raise MalformedRecord(f"unparseable DP {dp!r}", block.start)
    return PaperRecord(
        record_id=f"PMID:{pmid}",
        pub_year=int(m.group(1)),
        title=_collapse(block.fields.get("TI", ())),
        cited_refs=frozenset(),
        source=Source.MEDLINE,
        mesh=tuple(_collapse([v]) for v in block.fields.get("MH", ())),
    )


def parse_medline(
    source: TextSource, *, strict: bool = False, name: str | None = None
) -> ParseResult:
    """Parse a MEDLINE ``.nbib`` export. MEDLINE records carry no cited refs."""
    out = _Collector(strict, name)
    block: _Block | None = None

    for line_no, line in enumerate(_lines(_as_text(source)), start=1):
        if not line.strip():
            if block is not None:
                out.finish(block, _build_medline)
                block = None
            continue
        if block is None:
            block = _Block(line_no)
        if block.error is not None:
            continue
        try:
            if line[0].isspace():
                block.extend(line.strip(), line_no)
                continue
            m = _NBIB_TAG.fullmatch(line.rstrip())
            if m is None:
                raise ParseError(f"unrecognized line {line[:40]!r}", line_no)
            # authors, MeSH and the like legitimately repeat
            block.add(m.group(1), m.group(2), line_no, allow_repeat=True)
        except ParseError as exc:
            block.error = exc

    if block is not None:
        out.finish(block, _build_medline)
    return out.result


def write_medline(records: Iterable[PaperRecord]) -> str:
    chunks = []
    for rec in records:
        pmid = rec.record_id.removeprefix("PMID:")
        lines = [f"PMID- {pmid}", f"DP  - {rec.pub_year}"]
        if rec.title:
            lines.append(f"TI  - {rec.title}")
        lines.extend(f"MH  - {mh}" for mh in rec.mesh)
        chunks.append("\n".join(lines))
    return "\n\n".join(chunks) + "\n"


def read_medline(path: str | os.PathLike, *, strict: bool = False) -> ParseResult:
    with open(path, "rb") as fh:
        return parse_medline(fh.read(), strict=strict, name=os.fspath(path))
