"""Presentation-tier backend: the HTTP API consumed by the dashboard,
plus the admin surface (ingest, config reload, quality reports).

All analytics happen server-side; numbers cross the API as raw decimals
and locale formatting is the UI's job. Every request reads from one store
snapshot, so its payload is internally consistent.
"""

from __future__ import annotations

import json
import logging
import os
import threading
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Optional

from fastapi import FastAPI, Header, Query, Request, Response
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse

from . import analytics
from .analytics import Band, RefSelector
from .config import Config, load_config
from .errors import (InsufficientHistory, NoObservation, NoQualifyingYear,
                     NoReferenceData, RtiMonError, YearNotInSeries,
                     ZeroDenominator)
from .ingestion import RawBatch, fetch_source
from .integration import integrate_batch
from .notify import IngestContext, deliver, evaluate_notifications
from .store import ObservationStore, StoreSnapshot, render_export_csv

logger = logging.getLogger(__name__)

ADMIN_TOKEN_ENV = "RTIMON_ADMIN_TOKEN"
ADMIN_TOKEN_HEADER = "X-Admin-Token"

REF_PARAM = {"leaders": RefSelector.INNOVATION_LEADERS,
             "top3": RefSelector.TOP3,
             "eu": RefSelector.EU_AVERAGE}


class ApiError(RtiMonError):
    """Error carrying an HTTP status for the response layer."""

    def __init__(self, status: int, code: str, message: str):
        super().__init__(message)
        self.status = status
        self.api_code = code

    def response(self) -> JSONResponse:
        return JSONResponse(status_code=self.status,
                            content={"status": self.status,
                                     "code": self.api_code,
                                     "message": str(self)})


@dataclass
class AppState:
    config: Config
    store: ObservationStore
    config_dir: Optional[Path] = None
    reports_dir: Optional[Path] = None
    recent_reports: list[dict] = field(default_factory=list)
    admin_lock: threading.Lock = field(default_factory=threading.Lock)

    def swap_config(self, config: Config) -> None:
        self.config = config
        self.store.set_config(config)


# --- payload builders (pure over config + snapshot) --------------------------


def _score_dict(score: analytics.RelativeScore) -> dict:
    return {"percent": score.percent, "band": score.band.value}


def _overall_or_none(config, snap, sub_area_id, ref, year):
    try:
        return analytics.overall_sub_area(
            sub_area_id, config.references.target_region, year, ref, snap,
            config)
    except (NoReferenceData, NoObservation):
        return None


def _default_year(config, snap, sub_area_id) -> Optional[int]:
    try:
        return analytics.sub_area_cutoff(sub_area_id, snap, config)
    except NoQualifyingYear:
        return None


def graph_payload(config: Config, snap: StoreSnapshot, ref: RefSelector,
                  year: Optional[int] = None) -> dict:
    """Level-1 payload: all area and sub-area nodes, edges, goal list."""
    nodes = []
    for area in config.graph.areas:
        nodes.append({"id": area.id, "kind": "area", "name": area.name,
                      "sub_area_ids": list(area.sub_area_ids)})
    for sa in config.graph.sub_areas:
        node_year = year if year is not None \
            else _default_year(config, snap, sa.id)
        entry = {"id": sa.id, "kind": "sub_area", "name": sa.name,
                 "area_id": sa.area_id, "year": node_year,
                 "band": Band.INSUFFICIENT_DATA.value, "percent": None}
        if sa.x is not None:
            entry["x"] = sa.x
        if sa.y is not None:
            entry["y"] = sa.y
        if node_year is not None:
            overall = _overall_or_none(config, snap, sa.id, ref, node_year)
            if overall is not None:
                entry["band"] = overall.band.value
                entry["percent"] = overall.percent
        nodes.append(entry)

    goals = []
    for goal in config.goals:
        status = _goal_status_or_none(config, snap, goal, year)
        goals.append({
            "id": goal.id, "title": goal.title,
            "strategy_id": goal.strategy_id,
            "mapped_sub_areas": list(goal.mapped_sub_areas),
            "achievement_percent":
                None if status is None else status.achievement_percent,
            "year": None if status is None else status.year,
        })
    return {"ref": ref.value, "year": year,
            "locale": config.dashboard.locale,
            "nodes": nodes, "edges": [list(e) for e in config.graph.edges],
            "goals": goals}


def _goal_status_or_none(config, snap, goal, year=None):
    if year is None:
        history = analytics.metric_history(goal, snap, config)
        if not history:
            return None
        year = history[-1][0]
    try:
        return analytics.goal_achievement(goal, year, snap, config)
    except (NoObservation, YearNotInSeries):
        return None


def _indicator_entry(config, snap, ind, ref, year) -> dict:
    entry = {"id": ind.id, "name": ind.name, "unit": ind.unit,
             "description": ind.description,
             "taxonomy": ind.taxonomy.value, "polarity": ind.polarity.value,
             "is_composite": ind.is_composite,
             "source_url": ind.source_url,
             "score": {"percent": None,
                       "band": Band.INSUFFICIENT_DATA.value}}
    try:
        entry["score"] = _score_dict(analytics.score_of(
            ind.id, config.references.target_region, year, ref, snap,
            config))
    except (NoObservation, NoReferenceData, ZeroDenominator):
        pass
    if ind.is_composite:
        entry["children"] = [
            _indicator_entry(config, snap, config.indicator(c.indicator_id),
                             ref, year)
            for c in ind.kind.children]
    return entry


def subarea_payload(config: Config, snap: StoreSnapshot, sub_area_id: str,
                    ref: RefSelector, year: Optional[int] = None) -> dict:
    """Level-2 payload for one sub-area; year defaults to the data cutoff.

    Missing data is signalled per indicator (InsufficientData), never as a
    whole-payload failure.
    """
    sa = config.sub_area(sub_area_id)
    if year is None:
        year = _default_year(config, snap, sub_area_id)

    indicators = []
    overall = None
    if year is not None:
        for ind_id in config.top_level_indicator_ids(sub_area_id):
            indicators.append(_indicator_entry(
                config, snap, config.indicator(ind_id), ref, year))
        overall = _overall_or_none(config, snap, sub_area_id, ref, year)

    history = []
    for hist_year in snap.years():
        score = _overall_or_none(config, snap, sub_area_id, ref, hist_year)
        if score is not None and score.percent is not None:
            history.append({"year": hist_year, "percent": score.percent,
                            "band": score.band.value})

    return {
        "id": sa.id, "name": sa.name, "area_id": sa.area_id,
        "ref": ref.value, "year": year,
        "overall": (_score_dict(overall) if overall is not None
                    else {"percent": None,
                          "band": Band.INSUFFICIENT_DATA.value}),
        "overall_history": history,
        "indicators": indicators,
        "interpretation_text": sa.interpretation_text,
        "goals": [{"id": g.id, "title": g.title}
                  for g in config.goals if sa.id in g.mapped_sub_areas],
        "external_links": [{"title": x.title, "url": x.url}
                           for x in sa.external_links],
        "documents": [{"title": d.title, "kind": d.kind, "url": d.url}
                      for d in sa.document_refs],
        "related_sub_areas": [
            {"id": r, "name": config.sub_area(r).name}
            for r in sa.related_sub_area_ids],
    }


def goal_payload(config: Config, snap: StoreSnapshot, goal_id: str,
                 year: Optional[int] = None) -> dict:
    goal = config.goal(goal_id)
    status = _goal_status_or_none(config, snap, goal, year)
    history = analytics.metric_history(goal, snap, config)
    projection = None
    on_track = None
    try:
        points, on_track = analytics.goal_projection(goal, snap, config)
        projection = [[y, v] for y, v in points]
    except (InsufficientHistory, NoObservation):
        pass
    return {
        "id": goal.id, "title": goal.title, "strategy_id": goal.strategy_id,
        "baseline": {"year": goal.baseline.year,
                     "value": goal.baseline.value},
        "target": {"year": goal.target.year, "value": goal.target.value},
        "mapped_sub_areas": list(goal.mapped_sub_areas),
        "status": (None if status is None else {
            "year": status.year,
            "achievement_percent": status.achievement_percent,
            "current_value": status.current_value,
            "rank": status.rank}),
        "history": [[y, v] for y, v in history],
        "projection": projection,
        "on_track": on_track,
    }


def timeseries_payload(config: Config, snap: StoreSnapshot,
                       indicator_id: str, ref: RefSelector) -> dict:
    ind = config.indicator(indicator_id)
    if not ind.is_composite:
        series = analytics.comparison_timeseries(indicator_id, snap, config)
        return {
            "indicator_id": ind.id, "name": ind.name, "unit": ind.unit,
            "kind": "single",
            "target_region": series.target_region,
            "series": {
                "target": [[y, v] for y, v in series.target],
                "innovation_leaders":
                    [[y, v] for y, v in series.innovation_leaders],
                "top3": [[y, v] for y, v in series.top3],
                "eu_average": [[y, v] for y, v in series.eu_average],
            },
        }
    # composites have no raw values; their series is percent-of-reference
    points = []
    for year in snap.years():
        try:
            score = analytics.composite_score(
                indicator_id, config.references.target_region, year, ref,
                snap, config)
        except (NoReferenceData, NoObservation):
            continue
        if score.percent is not None:
            points.append([year, score.percent])
    return {"indicator_id": ind.id, "name": ind.name, "kind": "composite",
            "ref": ref.value,
            "target_region": config.references.target_region,
            "series": {"target_percent": points}}


# --- the application ---------------------------------------------------------


def _parse_ref(value: Optional[str]) -> RefSelector:
    if value is None:
        return RefSelector.INNOVATION_LEADERS
    try:
        return REF_PARAM[value]
    except KeyError:
        raise ApiError(400, "bad_ref",
                       f"ref must be one of {sorted(REF_PARAM)}, "
                       f"got {value!r}")


def _require_admin(token: Optional[str]) -> None:
    expected = os.environ.get(ADMIN_TOKEN_ENV)
    if not expected:
        raise ApiError(401, "unauthorized",
                       f"{ADMIN_TOKEN_ENV} is not configured")
    if token != expected:
        raise ApiError(401, "unauthorized", "missing or wrong admin token")


def create_app(state: AppState) -> FastAPI:
    app = FastAPI(title="rtimon", version="0.1.0")
    app.state.rtimon = state
    # the dashboard is a static-asset SPA, usually on another origin
    app.add_middleware(CORSMiddleware, allow_origins=["*"],
                       allow_methods=["GET", "POST"],
                       allow_headers=[ADMIN_TOKEN_HEADER])

    @app.exception_handler(ApiError)
    async def _api_error(_request: Request, exc: ApiError):
        return exc.response()

    @app.exception_handler(RtiMonError)
    async def _domain_error(_request: Request, exc: RtiMonError):
        return _to_api_error(exc).response()

    @app.get("/api/v1/graph")
    def get_graph(ref: Optional[str] = None,
                  year: Optional[int] = Query(default=None)):
        snap = state.store.snapshot()
        return graph_payload(state.config, snap, _parse_ref(ref), year)

    @app.get("/api/v1/subareas/{sub_area_id}")
    def get_subarea(sub_area_id: str, ref: Optional[str] = None,
                    year: Optional[int] = Query(default=None)):
        snap = state.store.snapshot()
        return subarea_payload(state.config, snap, sub_area_id,
                               _parse_ref(ref), year)

    @app.get("/api/v1/indicators/{indicator_id}/timeseries")
    def get_timeseries(indicator_id: str, ref: Optional[str] = None):
        snap = state.store.snapshot()
        return timeseries_payload(state.config, snap, indicator_id,
                                  _parse_ref(ref))

    @app.get("/api/v1/indicators/{indicator_id}/score")
    def get_score(indicator_id: str, ref: Optional[str] = None,
                  year: Optional[int] = Query(default=None)):
        snap = state.store.snapshot()
        config = state.config
        ind = config.indicator(indicator_id)
        if year is None:
            year = _default_year(config, snap, ind.sub_area_id)
            if year is None:
                raise ApiError(404, "no_qualifying_year",
                               f"no data cutoff for {indicator_id!r}")
        score = analytics.score_of(indicator_id,
                                   config.references.target_region, year,
                                   _parse_ref(ref), snap, config)
        return {"indicator_id": indicator_id, "region":
                config.references.target_region, "year": year,
                "ref": _parse_ref(ref).value, **_score_dict(score)}

    @app.get("/api/v1/goals")
    def get_goals():
        snap = state.store.snapshot()
        config = state.config  # one config for the whole response
        return {"goals": [goal_payload(config, snap, g.id)
                          for g in config.goals]}

    @app.get("/api/v1/goals/{goal_id}")
    def get_goal(goal_id: str, year: Optional[int] = Query(default=None)):
        snap = state.store.snapshot()
        return goal_payload(state.config, snap, goal_id, year)

    @app.get("/api/v1/export.csv")
    def get_export():
        snap = state.store.snapshot()
        ordered = [snap.observations[k]
                   for k in sorted(snap.observations.keys())]
        return Response(content=render_export_csv(ordered),
                        media_type="text/csv; charset=utf-8")

    @app.post("/api/v1/admin/ingest")
    async def admin_ingest(request: Request, source: str,
                           x_admin_token: Optional[str] = Header(
                               default=None)):
        _require_admin(x_admin_token)
        body = await request.body()
        with state.admin_lock:
            result = run_ingest(state, source, inline=body or None)
        return result

    @app.post("/api/v1/admin/reload")
    def admin_reload(x_admin_token: Optional[str] = Header(default=None)):
        _require_admin(x_admin_token)
        if state.config_dir is None:
            raise ApiError(409, "no_config_dir",
                           "service was started without a config directory")
        with state.admin_lock:
            config = load_config(state.config_dir)
            state.swap_config(config)
        return {"ok": True, "indicators": len(config.indicators),
                "sub_areas": len(config.graph.sub_areas),
                "goals": len(config.goals)}

    @app.get("/api/v1/admin/reports")
    def admin_reports(x_admin_token: Optional[str] = Header(default=None)):
        _require_admin(x_admin_token)
        return {"reports": list(state.recent_reports)}

    return app


def _to_api_error(exc: RtiMonError) -> ApiError:
    status_by_code = {
        "unknown_id": 404, "unknown_indicator": 404, "no_observation": 404,
        "year_not_in_series": 404, "no_qualifying_year": 404,
        "no_reference_data": 404, "zero_denominator": 422,
        "coverage_mismatch": 409, "insufficient_history": 404,
        "unauthorized": 401, "source_unavailable": 502,
        "empty_source": 502, "malformed_csv": 400,
        "header_missing_column": 400, "invalid_config": 400,
        "parse_error": 400, "missing_document": 400,
    }
    status = status_by_code.get(exc.code, 500)
    return ApiError(status, exc.code, str(exc))


def run_ingest(state: AppState, source_id: str,
               inline: Optional[bytes] = None) -> dict:
    """Full pipeline for one source: fetch (or inline bytes), integrate,
    upsert, evaluate notifications, persist the quality report."""
    config = state.config
    source = config.source(source_id)
    if inline is not None:
        batch = RawBatch(source_id=source_id, data=inline,
                         retrieved_at=datetime.now(timezone.utc))
    else:
        batch = fetch_source(source)
    observations, report = integrate_batch(batch, config)

    old_snap = state.store.snapshot()
    counts = state.store.upsert_observations(observations)
    new_snap = state.store.snapshot()

    events = evaluate_notifications(
        old_snap, new_snap, list(config.notifications), config,
        ingested=IngestContext(source_id=source_id, report=report))
    receipts = []
    rules = {r.id: r for r in config.notifications}
    for event in events:
        receipts.append(deliver(event, rules[event.rule_id].channel))

    report_doc = {
        "report": report.to_dict(),
        "upsert": counts,
        "retrieved_at": batch.retrieved_at.isoformat(),
        "events": [e.to_dict() for e in events],
    }
    _persist_report(state, report_doc)
    logger.info("ingested %s: %s rows in, %s observations upserted",
                source_id, report.rows_in, len(observations))
    return report_doc


def _persist_report(state: AppState, report_doc: dict) -> None:
    state.recent_reports.insert(0, report_doc)
    del state.recent_reports[50:]
    if state.reports_dir is None:
        return
    state.reports_dir.mkdir(parents=True, exist_ok=True)
    stamp = report_doc["retrieved_at"].replace(":", "").replace("+", "Z")
    name = f"{report_doc['report']['source_id']}_{stamp}.json"
    (state.reports_dir / name).write_text(
        json.dumps(report_doc, indent=2), encoding="utf-8")


def build_state(config_dir, store_dir) -> AppState:
    """Wire a served application from its two directories."""
    config = load_config(config_dir)
    store = ObservationStore(store_dir, config=config)
    return AppState(config=config, store=store,
                    config_dir=Path(config_dir),
                    reports_dir=Path(store_dir) / "reports")
