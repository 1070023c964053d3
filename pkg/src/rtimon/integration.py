"""Data integration: map validated rows to observations, transform,
deduplicate, and report batch quality."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from datetime import datetime
from typing import Iterable

from .config import Config, SourceConfig
from .errors import NonFiniteResult
from .ingestion import (RawBatch, SourceRow, parse_batch, parse_decimal,
                        validate_rows)


@dataclass(frozen=True)
class Observation:
    """One numeric indicator value for (indicator, region, year)."""

    indicator_id: str
    region: str
    year: int
    value: float
    source_id: str
    retrieved_at: datetime

    @property
    def key(self) -> tuple[str, str, int]:
        return (self.indicator_id, self.region, self.year)


@dataclass
class QualityReport:
    source_id: str
    rows_in: int = 0
    rows_valid: int = 0
    rows_rejected: int = 0
    duplicates_removed: int = 0
    reject_histogram: dict[str, int] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "source_id": self.source_id,
            "rows_in": self.rows_in,
            "rows_valid": self.rows_valid,
            "rows_rejected": self.rows_rejected,
            "duplicates_removed": self.duplicates_removed,
            "reject_histogram": dict(self.reject_histogram),
        }


def map_rows(rows: Iterable[SourceRow], source: SourceConfig,
             retrieved_at: datetime) -> list[Observation]:
    """Apply field_map, indicator_map and region_aliases to validated rows."""
    ind_col = source.column_for("indicator")
    geo_col = source.column_for("region")
    year_col = source.column_for("year")
    value_col = source.column_for("value")
    ind_map = source.indicator_lookup()
    region_map = source.region_lookup()

    out = []
    for row in rows:
        label = row.cells[ind_col].strip()
        geo = row.cells[geo_col].strip()
        out.append(Observation(
            indicator_id=ind_map.get(label, label),
            region=region_map.get(geo, geo),
            year=int(row.cells[year_col].strip()),
            value=parse_decimal(row.cells[value_col]),
            source_id=source.id,
            retrieved_at=retrieved_at,
        ))
    return out


def transform(observations: Iterable[Observation],
              source: SourceConfig) -> list[Observation]:
    """Apply the source's linear transform rules (value*scale + offset),
    in configured order. Raises NonFiniteResult on overflow."""
    out = []
    for obs in observations:
        value = obs.value
        for rule in source.transforms:
            if rule.indicator_id == obs.indicator_id:
                value = value * rule.scale + rule.offset
        if not math.isfinite(value):
            raise NonFiniteResult(obs.indicator_id, obs.region, obs.year)
        if value != obs.value:
            obs = Observation(indicator_id=obs.indicator_id,
                              region=obs.region, year=obs.year, value=value,
                              source_id=obs.source_id,
                              retrieved_at=obs.retrieved_at)
        out.append(obs)
    return out


def dedup(observations: Iterable[Observation],
          all_sources: Iterable[SourceConfig],
          ) -> tuple[list[Observation], int]:
    """Keep one observation per (indicator, region, year) key.

    Winner: highest source priority, then latest retrieved_at, then the
    earliest-seen observation. Kept list preserves first-seen key order.
    """
    priorities = {s.id: s.priority for s in all_sources}
    best: dict[tuple, Observation] = {}
    order: list[tuple] = []
    removed = 0
    for obs in observations:
        key = obs.key
        current = best.get(key)
        if current is None:
            best[key] = obs
            order.append(key)
            continue
        removed += 1
        if _wins(obs, current, priorities):
            best[key] = obs
    return [best[k] for k in order], removed


def _wins(challenger: Observation, incumbent: Observation,
          priorities: dict[str, int]) -> bool:
    cp = priorities.get(challenger.source_id, 0)
    ip = priorities.get(incumbent.source_id, 0)
    if cp != ip:
        return cp > ip
    if challenger.retrieved_at != incumbent.retrieved_at:
        return challenger.retrieved_at > incumbent.retrieved_at
    return False  # stable: first seen stays


def integrate_batch(batch: RawBatch, config: Config,
                    ) -> tuple[list[Observation], QualityReport]:
    """Run parse -> validate -> map -> transform -> dedup for one batch."""
    source = config.source(batch.source_id)
    rows = parse_batch(batch, source)
    known = {ind.id for ind in config.indicators}
    valid, rejects = validate_rows(rows, source, known_indicators=known)

    report = QualityReport(source_id=source.id, rows_in=len(rows),
                           rows_valid=len(valid), rows_rejected=len(rejects))
    for reject in rejects:
        name = reject.reason.value
        report.reject_histogram[name] = \
            report.reject_histogram.get(name, 0) + 1

    observations = map_rows(valid, source, batch.retrieved_at)
    observations = transform(observations, source)
    observations, removed = dedup(observations, config.sources)
    report.duplicates_removed = removed
    return observations, report
