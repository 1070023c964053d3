"""Notification evaluation and delivery.

Rules watch sub-area bands, goal status, or incoming batches; evaluation
compares two store snapshots and is deterministic, so re-running the same
pair yields the identical event list.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass
from datetime import datetime
from typing import Optional

import httpx

from .analytics import (Band, RefSelector, goal_achievement, metric_history,
                        overall_sub_area, sub_area_cutoff)
from .config import (BandChangedTrigger, Config, FileSinkChannel,
                     GoalStatusChangedTrigger, NewDataArrivedTrigger,
                     NotificationChannel, NotificationRule, StdoutChannel,
                     WebhookChannel)
from .errors import (NoObservation, NoQualifyingYear, NoReferenceData,
                     RtiMonError)
from .integration import QualityReport
from .store import StoreSnapshot

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class NotificationEvent:
    rule_id: str
    fired_at: datetime
    payload: dict

    def to_dict(self) -> dict:
        return {"rule_id": self.rule_id,
                "fired_at": self.fired_at.isoformat(),
                "payload": self.payload}


@dataclass
class DeliveryReceipt:
    rule_id: str
    channel: str
    ok: bool
    detail: str = ""


@dataclass(frozen=True)
class IngestContext:
    """What just got ingested, for NewDataArrived triggers."""

    source_id: str
    report: QualityReport


def evaluate_notifications(old_snap: StoreSnapshot, new_snap: StoreSnapshot,
                           rules: list[NotificationRule], config: Config,
                           ingested: Optional[IngestContext] = None,
                           ) -> list[NotificationEvent]:
    """One event per rule whose trigger condition changed between the
    snapshots, ordered by rule id. fired_at derives from the new snapshot
    so identical inputs produce identical events."""
    events = []
    for rule in sorted(rules, key=lambda r: r.id):
        payload = _evaluate_rule(rule, old_snap, new_snap, config, ingested)
        if payload is not None:
            events.append(NotificationEvent(
                rule_id=rule.id, fired_at=new_snap.created_at,
                payload=payload))
    return events


def _evaluate_rule(rule, old_snap, new_snap, config, ingested):
    trigger = rule.trigger
    if isinstance(trigger, BandChangedTrigger):
        old_band, old_year = _sub_area_band(trigger.sub_area_id, old_snap,
                                            config)
        new_band, new_year = _sub_area_band(trigger.sub_area_id, new_snap,
                                            config)
        if old_band == new_band:
            return None
        return {"trigger": "band_changed",
                "sub_area_id": trigger.sub_area_id,
                "ref": RefSelector.INNOVATION_LEADERS.value,
                "old": {"band": old_band.value, "year": old_year},
                "new": {"band": new_band.value, "year": new_year}}
    if isinstance(trigger, NewDataArrivedTrigger):
        if ingested is None or ingested.source_id != trigger.source_id:
            return None
        return {"trigger": "new_data_arrived",
                "source_id": trigger.source_id,
                "quality_report": ingested.report.to_dict()}
    if isinstance(trigger, GoalStatusChangedTrigger):
        old_status = _goal_state(trigger.goal_id, old_snap, config)
        new_status = _goal_state(trigger.goal_id, new_snap, config)
        if old_status == new_status:
            return None
        return {"trigger": "goal_status_changed",
                "goal_id": trigger.goal_id,
                "old": old_status, "new": new_status}
    return None


def _sub_area_band(sub_area_id: str, snap: StoreSnapshot,
                   config: Config) -> tuple[Band, Optional[int]]:
    try:
        year = sub_area_cutoff(sub_area_id, snap, config)
        score = overall_sub_area(sub_area_id,
                                 config.references.target_region, year,
                                 RefSelector.INNOVATION_LEADERS, snap,
                                 config)
        return score.band, year
    except (NoQualifyingYear, NoReferenceData, NoObservation):
        return Band.INSUFFICIENT_DATA, None


def _goal_state(goal_id: str, snap: StoreSnapshot,
                config: Config) -> Optional[dict]:
    goal = config.goal(goal_id)
    history = metric_history(goal, snap, config)
    if not history:
        return None
    year = history[-1][0]
    try:
        status = goal_achievement(goal, year, snap, config)
    except RtiMonError:
        return None
    return {"year": status.year,
            "achievement_percent": status.achievement_percent,
            "current_value": status.current_value,
            "rank": status.rank}


def deliver(event: NotificationEvent, channel: NotificationChannel,
            *, timeout: float = 5.0) -> DeliveryReceipt:
    """Deliver one event; failures are reported in the receipt, never
    raised."""
    line = json.dumps(event.to_dict(), ensure_ascii=False)
    try:
        if isinstance(channel, StdoutChannel):
            print(line)
            return DeliveryReceipt(event.rule_id, "stdout", ok=True)
        if isinstance(channel, FileSinkChannel):
            with open(channel.path, "a", encoding="utf-8") as fh:
                fh.write(line + "\n")
            return DeliveryReceipt(event.rule_id, "file_sink", ok=True)
        if isinstance(channel, WebhookChannel):
            response = httpx.post(channel.url, json=event.to_dict(),
                                  timeout=timeout)
            if response.status_code >= 400:
                raise RtiMonError(f"HTTP {response.status_code}")
            return DeliveryReceipt(event.rule_id, "webhook", ok=True)
        return DeliveryReceipt(event.rule_id, "unknown", ok=False,
                               detail="unsupported channel")
    except Exception as exc:  # DeliveryFailed is a receipt, not a crash
        logger.warning("delivery for rule %s failed: %s", event.rule_id, exc)
        kind = type(channel).__name__
        return DeliveryReceipt(event.rule_id, kind, ok=False,
                               detail=str(exc))
