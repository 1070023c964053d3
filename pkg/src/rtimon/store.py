"""Durable observation store: append-log persistence, snapshot reads,
CSV/JSON export, and checksummed backups.

Single-node and file-backed. The full index lives in memory (desk-scale
data), is rebuilt from observations.log at startup, and writers are
serialized behind one lock while readers work on immutable snapshots.
"""

from __future__ import annotations

import hashlib
import io
import json
import csv
import threading
from dataclasses import dataclass, field
from datetime import datetime, timezone
from enum import Enum
from pathlib import Path
from typing import Optional

from .config import Config
from .errors import CorruptBackup, UnknownIndicator
from .integration import Observation, _wins

LOG_NAME = "observations.log"
META_NAME = "meta.json"
EXPORT_HEADER = ["indicator", "geo", "year", "value", "source_id",
                 "retrieved_at"]
CHECKSUM_PREFIX = "#sha256="


class ExportFormat(str, Enum):
    CSV = "Csv"
    STRUCTURED_DOCUMENT = "StructuredDocument"


@dataclass(frozen=True)
class SeriesQuery:
    indicator_id: str
    regions: tuple[str, ...] = ()
    year_from: Optional[int] = None
    year_to: Optional[int] = None


@dataclass(frozen=True)
class StoreSnapshot:
    """Immutable view of the store at one point in time."""

    observations: dict[tuple, Observation] = field(repr=False)
    created_at: datetime = field(
        default_factory=lambda: datetime.now(timezone.utc))

    @property
    def observation_count(self) -> int:
        return len(self.observations)

    def get(self, indicator_id: str, region: str,
            year: int) -> Optional[Observation]:
        return self.observations.get((indicator_id, region, year))

    def value(self, indicator_id: str, region: str,
              year: int) -> Optional[float]:
        obs = self.observations.get((indicator_id, region, year))
        return None if obs is None else obs.value

    def years(self) -> list[int]:
        return sorted({k[2] for k in self.observations})

    def regions_with_data(self, indicator_id: str, year: int) -> list[str]:
        return sorted(k[1] for k in self.observations
                      if k[0] == indicator_id and k[2] == year)

    def series(self, indicator_id: str,
               region: str) -> list[tuple[int, float]]:
        points = [(k[2], o.value) for k, o in self.observations.items()
                  if k[0] == indicator_id and k[1] == region]
        return sorted(points)


class ObservationStore:
    """File-backed store with one winner per (indicator, region, year)."""

    def __init__(self, directory, config: Optional[Config] = None):
        self._dir = Path(directory)
        self._dir.mkdir(parents=True, exist_ok=True)
        self._config = config
        self._lock = threading.Lock()
        self._observations: dict[tuple, Observation] = {}
        self._replay_log()

    @property
    def directory(self) -> Path:
        return self._dir

    def set_config(self, config: Config) -> None:
        with self._lock:
            self._config = config

    def _log_path(self) -> Path:
        return self._dir / LOG_NAME

    def _replay_log(self) -> None:
        path = self._log_path()
        if not path.is_file():
            return
        with path.open(encoding="utf-8") as fh:
            for line in fh:
                line = line.strip()
                if not line:
                    continue
                obs = _obs_from_dict(json.loads(line))
                # the log only ever records accepted winners, so the
                # latest record per key is the current one
                self._observations[obs.key] = obs

    def _append_log(self, observations: list[Observation]) -> None:
        with self._log_path().open("a", encoding="utf-8") as fh:
            for obs in observations:
                fh.write(json.dumps(_obs_to_dict(obs)) + "\n")
        self._write_meta()

    def _write_meta(self) -> None:
        meta = {"observation_count": len(self._observations),
                "last_checkpoint":
                    datetime.now(timezone.utc).isoformat()}
        (self._dir / META_NAME).write_text(json.dumps(meta, indent=2),
                                           encoding="utf-8")

    # --- writes -------------------------------------------------------------

    def upsert_observations(self, batch: list[Observation]) -> dict[str, int]:
        """Insert or replace observations under the dedup winner rule."""
        with self._lock:
            priorities = (self._config.source_priorities()
                          if self._config else {})
            if self._config is not None:
                for obs in batch:
                    if not self._config.has_indicator(obs.indicator_id):
                        raise UnknownIndicator(
                            f"unknown indicator {obs.indicator_id!r}")
            counts = {"inserted": 0, "replaced": 0, "ignored": 0}
            accepted = []
            for obs in batch:
                current = self._observations.get(obs.key)
                if current is None:
                    self._observations[obs.key] = obs
                    accepted.append(obs)
                    counts["inserted"] += 1
                elif _wins(obs, current, priorities):
                    self._observations[obs.key] = obs
                    accepted.append(obs)
                    counts["replaced"] += 1
                else:
                    counts["ignored"] += 1
            if accepted:
                self._append_log(accepted)
            return counts

    # --- reads --------------------------------------------------------------

    def snapshot(self) -> StoreSnapshot:
        with self._lock:
            return StoreSnapshot(observations=dict(self._observations))

    def query_series(self, snap: StoreSnapshot, query: SeriesQuery,
                     ) -> list[tuple[str, list[tuple[int, float]]]]:
        """Stored points for one indicator, sorted by region then year."""
        if self._config is not None and \
                not self._config.has_indicator(query.indicator_id):
            raise UnknownIndicator(
                f"unknown indicator {query.indicator_id!r}")
        wanted = set(query.regions)
        by_region: dict[str, list[tuple[int, float]]] = {}
        for key, obs in snap.observations.items():
            if key[0] != query.indicator_id:
                continue
            if wanted and obs.region not in wanted:
                continue
            if query.year_from is not None and obs.year < query.year_from:
                continue
            if query.year_to is not None and obs.year > query.year_to:
                continue
            by_region.setdefault(obs.region, []).append((obs.year, obs.value))
        return [(region, sorted(points))
                for region, points in sorted(by_region.items())]

    # --- export / backup ------------------------------------------------------

    def export(self, snap: StoreSnapshot, format: ExportFormat,
               sink) -> int:
        """Write the snapshot to sink; returns the observation row count."""
        sink = Path(sink)
        ordered = [snap.observations[k]
                   for k in sorted(snap.observations.keys())]
        if format is ExportFormat.CSV:
            sink.write_text(render_export_csv(ordered), encoding="utf-8")
        else:
            doc = {"observation_count": len(ordered),
                   "observations": [_obs_to_dict(o) for o in ordered]}
            sink.write_text(json.dumps(doc, indent=2) + "\n",
                            encoding="utf-8")
        return len(ordered)

    def backup(self, snap: StoreSnapshot, path) -> int:
        """CSV export plus a sha256 trailer line."""
        path = Path(path)
        ordered = [snap.observations[k]
                   for k in sorted(snap.observations.keys())]
        body = render_export_csv(ordered)
        digest = hashlib.sha256(body.encode("utf-8")).hexdigest()
        path.write_text(body + f"{CHECKSUM_PREFIX}{digest}\n",
                        encoding="utf-8")
        return len(ordered)

    def restore(self, path) -> StoreSnapshot:
        """Replace store content from a backup file, atomically."""
        path = Path(path)
        text = path.read_text(encoding="utf-8")
        lines = text.splitlines(keepends=True)
        if not lines or not lines[-1].startswith(CHECKSUM_PREFIX):
            raise CorruptBackup(f"{path}: missing checksum trailer")
        body = "".join(lines[:-1])
        expected = lines[-1].strip()[len(CHECKSUM_PREFIX):]
        actual = hashlib.sha256(body.encode("utf-8")).hexdigest()
        if actual != expected:
            raise CorruptBackup(f"{path}: checksum mismatch")
        observations = _from_csv(body)
        with self._lock:
            self._observations = {o.key: o for o in observations}
            log_tmp = self._log_path().with_suffix(".tmp")
            with log_tmp.open("w", encoding="utf-8") as fh:
                for obs in self._observations.values():
                    fh.write(json.dumps(_obs_to_dict(obs)) + "\n")
            log_tmp.replace(self._log_path())
            self._write_meta()
            return StoreSnapshot(observations=dict(self._observations))


def _obs_to_dict(obs: Observation) -> dict:
    return {"indicator_id": obs.indicator_id, "region": obs.region,
            "year": obs.year, "value": obs.value,
            "source_id": obs.source_id,
            "retrieved_at": obs.retrieved_at.isoformat()}


def _obs_from_dict(doc: dict) -> Observation:
    return Observation(indicator_id=doc["indicator_id"],
                       region=doc["region"], year=int(doc["year"]),
                       value=float(doc["value"]),
                       source_id=doc["source_id"],
                       retrieved_at=datetime.fromisoformat(
                           doc["retrieved_at"]))


def render_export_csv(observations: list[Observation]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(EXPORT_HEADER)
    for obs in observations:
        writer.writerow([obs.indicator_id, obs.region, obs.year,
                         repr(obs.value), obs.source_id,
                         obs.retrieved_at.isoformat()])
    return buf.getvalue()


def _from_csv(body: str) -> list[Observation]:
    reader = csv.reader(io.StringIO(body))
    try:
        header = next(reader)
    except StopIteration:
        return []
    index = {name: i for i, name in enumerate(header)}
    out = []
    for record in reader:
        if not record:
            continue
        out.append(Observation(
            indicator_id=record[index["indicator"]],
            region=record[index["geo"]],
            year=int(record[index["year"]]),
            value=float(record[index["value"]]),
            source_id=record[index["source_id"]],
            retrieved_at=datetime.fromisoformat(
                record[index["retrieved_at"]])))
    return out
