"""Data collection: fetch configured sources, parse CSV, validate rows.

The pipeline for one source is fetch -> parse -> validate; fetches for
distinct sources may run concurrently. Decimal commas are accepted here,
at the boundary, and nowhere else.
"""

from __future__ import annotations

import csv
import io
import logging
import re
import threading
import time
from dataclasses import dataclass
from datetime import datetime, timezone
from enum import Enum
from pathlib import Path
from typing import Callable, Iterable, Optional

import httpx

from .config import Adapter, SourceConfig
from .errors import (EmptySource, HeaderMissingColumn, MalformedCsv,
                     SourceUnavailable)

logger = logging.getLogger(__name__)

REGION_RE = re.compile(r"^[A-Z]{2}$")
_NUMBER_RE = re.compile(r"^[+-]?(\d+([.,]\d+)?|[.,]\d+)([eE][+-]?\d+)?$")


@dataclass(frozen=True)
class RawBatch:
    source_id: str
    data: bytes
    retrieved_at: datetime
    content_hint: str = "Csv"


@dataclass(frozen=True)
class SourceRow:
    cells: dict[str, str]
    line_no: int


class RejectReason(str, Enum):
    NON_NUMERIC_VALUE = "NonNumericValue"
    YEAR_OUT_OF_RANGE = "YearOutOfRange"
    UNKNOWN_REGION = "UnknownRegion"
    UNKNOWN_INDICATOR = "UnknownIndicator"
    VALUE_OUT_OF_RANGE = "ValueOutOfRange"
    MISSING_COLUMN = "MissingColumn"


@dataclass(frozen=True)
class RejectedRow:
    row: SourceRow
    reason: RejectReason


def parse_decimal(text: str) -> float:
    """Parse a decimal that may use ',' as its decimal separator.

    Thousands separators are not supported; "1,234" means 1.234.
    """
    text = text.strip()
    if not _NUMBER_RE.match(text):
        raise ValueError(f"not a number: {text!r}")
    return float(text.replace(",", "."))


def fetch_source(source: SourceConfig, now: Optional[datetime] = None,
                 *, timeout: float = 10.0) -> RawBatch:
    """Fetch the raw bytes of a configured source.

    LocalFile locations are resolved as given (relative paths are relative
    to the process working directory unless the config loader resolved
    them). Raises SourceUnavailable or EmptySource.
    """
    if now is None:
        now = datetime.now(timezone.utc)
    if source.adapter is Adapter.LOCAL_FILE:
        path = Path(source.location)
        try:
            data = path.read_bytes()
        except OSError as exc:
            raise SourceUnavailable(source.location, str(exc)) from exc
    elif source.adapter is Adapter.HTTP:
        try:
            response = httpx.get(source.location, timeout=timeout,
                                 follow_redirects=True)
        except httpx.HTTPError as exc:
            raise SourceUnavailable(source.location, str(exc)) from exc
        if response.status_code != 200:
            raise SourceUnavailable(source.location,
                                    f"HTTP {response.status_code}")
        data = response.content
    else:
        raise SourceUnavailable(source.location,
                                f"unsupported adapter {source.adapter}")
    if not data:
        raise EmptySource(f"source {source.id!r} returned no bytes")
    return RawBatch(source_id=source.id, data=data, retrieved_at=now,
                    content_hint=source.format.value)


def parse_batch(batch: RawBatch, source: SourceConfig) -> list[SourceRow]:
    """Parse a CSV batch into rows keyed by the header's column names.

    RFC-4180 quoting; the first line is the header. Raises MalformedCsv for
    rows with more cells than the header or unbalanced quoting, and
    HeaderMissingColumn when a field_map source column is absent.
    """
    text = batch.data.decode("utf-8-sig")
    reader = csv.reader(io.StringIO(text, newline=""))
    try:
        header = next(reader)
    except StopIteration:
        raise EmptySource(f"source {source.id!r} has no header line")
    except csv.Error as exc:
        raise MalformedCsv(1, str(exc)) from exc
    header = [h.strip() for h in header]

    for column, _role in source.field_map:
        if column not in header:
            raise HeaderMissingColumn(column)

    rows = []
    while True:
        try:
            record = next(reader)
        except StopIteration:
            break
        except csv.Error as exc:
            raise MalformedCsv(reader.line_num, str(exc)) from exc
        if not record or all(cell.strip() == "" for cell in record):
            continue
        if len(record) > len(header):
            raise MalformedCsv(reader.line_num,
                               f"{len(record)} cells but header has "
                               f"{len(header)}")
        cells = {header[i]: record[i] for i in range(len(record))}
        rows.append(SourceRow(cells=cells, line_no=reader.line_num))
    return rows


def validate_rows(rows: Iterable[SourceRow], source: SourceConfig,
                  known_indicators: Optional[set[str]] = None,
                  ) -> tuple[list[SourceRow], list[RejectedRow]]:
    """Partition rows into valid and rejected.

    Rules are checked in the RejectReason enumeration order and the first
    violated one wins. A rule whose cell is absent is skipped; absent
    mapped cells are caught by MissingColumn at the end. known_indicators,
    when given, narrows UnknownIndicator to the configured indicator ids
    instead of just the source's indicator_map.
    """
    ind_col = source.column_for("indicator")
    geo_col = source.column_for("region")
    year_col = source.column_for("year")
    value_col = source.column_for("value")
    ind_map = source.indicator_lookup()
    region_map = source.region_lookup()
    vmin = source.validation.value_min
    vmax = source.validation.value_max

    valid: list[SourceRow] = []
    rejects: list[RejectedRow] = []

    for row in rows:
        reason = None
        value = None
        value_cell = row.cells.get(value_col)
        if value_cell is not None:
            try:
                value = parse_decimal(value_cell)
            except ValueError:
                reason = RejectReason.NON_NUMERIC_VALUE

        if reason is None:
            year_cell = row.cells.get(year_col)
            if year_cell is not None:
                try:
                    year = int(year_cell.strip())
                except ValueError:
                    year = None
                if year is None or not (source.validation.year_min <= year
                                        <= source.validation.year_max):
                    reason = RejectReason.YEAR_OUT_OF_RANGE

        if reason is None:
            geo_cell = row.cells.get(geo_col)
            if geo_cell is not None:
                region = region_map.get(geo_cell.strip(), geo_cell.strip())
                if not REGION_RE.match(region):
                    reason = RejectReason.UNKNOWN_REGION

        if reason is None:
            ind_cell = row.cells.get(ind_col)
            if ind_cell is not None:
                label = ind_cell.strip()
                resolved = ind_map.get(label, label if not ind_map else None)
                if resolved is None:
                    reason = RejectReason.UNKNOWN_INDICATOR
                elif known_indicators is not None and \
                        resolved not in known_indicators:
                    reason = RejectReason.UNKNOWN_INDICATOR

        if reason is None and value is not None:
            if (vmin is not None and value < vmin) or \
                    (vmax is not None and value > vmax):
                reason = RejectReason.VALUE_OUT_OF_RANGE

        if reason is None:
            for col in (ind_col, geo_col, year_col, value_col):
                if col not in row.cells:
                    reason = RejectReason.MISSING_COLUMN
                    break

        if reason is None:
            valid.append(row)
        else:
            rejects.append(RejectedRow(row=row, reason=reason))

    return valid, rejects


class IntervalScheduler:
    """Fires a callback for each source on its configured interval.

    Sources with fetch_interval_seconds == 0 are manual-only and never
    scheduled. Failures are logged and retried on the next tick.
    """

    def __init__(self, sources: Iterable[SourceConfig],
                 callback: Callable[[str], None], *, tick: float = 0.25):
        self._intervals = {s.id: s.fetch_interval_seconds
                           for s in sources if s.fetch_interval_seconds > 0}
        self._callback = callback
        self._tick = tick
        self._stop = threading.Event()
        self._thread: Optional[threading.Thread] = None

    def start(self) -> None:
        if self._thread is not None:
            return
        self._thread = threading.Thread(target=self._run, daemon=True,
                                        name="rtimon-scheduler")
        self._thread.start()

    def stop(self) -> None:
        self._stop.set()
        if self._thread is not None:
            self._thread.join(timeout=5.0)
            self._thread = None

    def _run(self) -> None:
        next_due = {sid: time.monotonic() + ivl
                    for sid, ivl in self._intervals.items()}
        while not self._stop.wait(self._tick):
            now = time.monotonic()
            for sid, due in sorted(next_due.items()):
                if now >= due:
                    next_due[sid] = now + self._intervals[sid]
                    try:
                        self._callback(sid)
                    except Exception:
                        logger.exception("scheduled fetch of %s failed", sid)
