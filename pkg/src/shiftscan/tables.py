"""Deterministic delimited output: number formatting, atomic writes, manifests."""

from __future__ import annotations

import csv
import hashlib
import io
import os
import tempfile
from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from .citation import RsiCell

FORMATS = {"tsv": "\t", "csv": ","}


def fixed(value: Fraction | int, places: int) -> str:
    """Format an exact rational with ``places`` decimals, rounding half up.

    >>> fixed(Fraction(3, 8), 2)
    '0.38'
    """
    value = Fraction(value)
    scale = 10**places
    sign = "-" if value < 0 else ""
    q = (abs(value) * scale * 2 + 1) // 2  # floor(x * scale + 1/2)
    whole, frac = divmod(int(q), scale)
    if places == 0:
        return f"{sign}{whole}"
    return f"{sign}{whole}.{frac:0{places}d}"


def rsi_text(cell: RsiCell) -> str:
    """``shared/RSI`` with two decimals, or ``NA`` when both sets are empty."""
    if cell.rsi is None:
        return "NA"
    return f"{cell.shared}/{fixed(cell.rsi, 2)}"


def render(header: Sequence[str], rows: Iterable[Sequence[object]], fmt: str = "tsv") -> str:
    buf = io.StringIO()
    writer = csv.writer(
        buf,
        delimiter=FORMATS[fmt],
        lineterminator="\n",
        quoting=csv.QUOTE_MINIMAL,
    )
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


@dataclass(frozen=True)
class Artifact:
    name: str
    text: str

    @property
    def data(self) -> bytes:
        return self.text.encode("utf-8")

    @property
    def sha256(self) -> str:
        return hashlib.sha256(self.data).hexdigest()


def atomic_write(path: Path, data: bytes) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
            fh.flush()
            os.fsync(fh.fileno())
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except FileNotFoundError:
            pass
        raise


def manifest(artifacts: Iterable[Artifact], fmt: str = "tsv") -> str:
    rows = sorted((a.name, a.sha256, len(a.data)) for a in artifacts)
    return render(("file", "sha256", "bytes"), rows, fmt)


def write_artifacts(out_dir: Path, artifacts: Sequence[Artifact]) -> None:
    for art in artifacts:
        atomic_write(out_dir / art.name, art.data)
