"""Small builders for hand-crafted configs and snapshots in tests."""

from __future__ import annotations

from datetime import datetime, timezone

from rtimon.config import (Area, AreaGraph, BandThresholds, CompositeChild,
                           CompositeKind, Config, DashboardConfig,
                           IndicatorDef, Polarity, ReferenceSets,
                           RowValidation, SingleKind, SourceConfig, SubArea,
                           Taxonomy)
from rtimon.integration import Observation
from rtimon.store import StoreSnapshot

T0 = datetime(2024, 1, 1, tzinfo=timezone.utc)

IDENTITY_FIELD_MAP = (("indicator", "indicator"), ("geo", "region"),
                      ("year", "year"), ("value", "value"))


def make_source(source_id="src", priority=0, **kwargs) -> SourceConfig:
    defaults = dict(
        id=source_id, name=source_id, adapter="LocalFile", location="/dev/null",
        field_map=IDENTITY_FIELD_MAP, priority=priority,
        validation=RowValidation(year_min=1900, year_max=2100))
    defaults.update(kwargs)
    from rtimon.config import Adapter
    defaults["adapter"] = Adapter(defaults["adapter"])
    return SourceConfig(**defaults)


def make_indicator(ind_id, sub_area_id="s1", polarity="HigherIsBetter",
                   taxonomy="Output", children=None,
                   source_id="src") -> IndicatorDef:
    if children is None:
        kind = SingleKind(source_id=source_id)
    else:
        kind = CompositeKind(children=tuple(
            CompositeChild(indicator_id=c, weight=w) for c, w in children))
    return IndicatorDef(id=ind_id, name=ind_id, description="", unit="",
                        taxonomy=Taxonomy(taxonomy),
                        polarity=Polarity(polarity), kind=kind,
                        sub_area_id=sub_area_id, source_url="")


def mini_config(indicators, *, leaders=("L1",), target="AT",
                eu_average="EU", thresholds=None, goals=(),
                sources=None) -> Config:
    """One-area config wrapping the given indicators, grouped by their
    sub_area_id."""
    if thresholds is None:
        thresholds = BandThresholds()
    if sources is None:
        sources = (make_source("src", priority=1),)
    sub_area_ids = []
    for ind in indicators:
        if ind.sub_area_id not in sub_area_ids:
            sub_area_ids.append(ind.sub_area_id)
    sub_areas = tuple(
        SubArea(id=sa, name=sa, area_id="a1",
                indicator_ids=tuple(i.id for i in indicators
                                    if i.sub_area_id == sa))
        for sa in sub_area_ids)
    graph = AreaGraph(
        areas=(Area(id="a1", name="a1", sub_area_ids=tuple(sub_area_ids)),),
        sub_areas=sub_areas, edges=())
    if isinstance(eu_average, (list, tuple)):
        eu_average = tuple(eu_average)
    return Config(sources=tuple(sources), indicators=tuple(indicators),
                  graph=graph, goals=tuple(goals), thresholds=thresholds,
                  references=ReferenceSets(
                      innovation_leaders=tuple(leaders),
                      eu_average=eu_average, target_region=target),
                  dashboard=DashboardConfig(), notifications=())


def snap_of(values: dict, source_id="src", retrieved_at=T0) -> StoreSnapshot:
    """Snapshot from {(indicator, region, year): value}."""
    observations = {}
    for (ind, region, year), value in values.items():
        observations[(ind, region, year)] = Observation(
            indicator_id=ind, region=region, year=year, value=float(value),
            source_id=source_id, retrieved_at=retrieved_at)
    return StoreSnapshot(observations=observations, created_at=retrieved_at)


def obs(ind, region, year, value, source_id="src",
        retrieved_at=T0) -> Observation:
    return Observation(indicator_id=ind, region=region, year=year,
                       value=float(value), source_id=source_id,
                       retrieved_at=retrieved_at)
