"""Declarative configuration: domain types, loading, validation, serialization.

The config root is a directory of UTF-8 JSON documents (sources.json,
indicators.json, structure.json, goals.json, thresholds.json,
references.json, dashboard.json, notifications.json). A loaded Config is
immutable; reloads replace the whole object.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Optional, Union

from .errors import ConfigParseError, InvalidConfig, MissingDocument, UnknownId

SLUG_RE = re.compile(r"^[a-z0-9_-]+$")
REGION_RE = re.compile(r"^[A-Z]{2}$")

DOCUMENTS = (
    "sources.json",
    "indicators.json",
    "structure.json",
    "goals.json",
    "thresholds.json",
    "references.json",
    "dashboard.json",
    "notifications.json",
)


class Taxonomy(str, Enum):
    INPUT = "Input"
    OUTPUT = "Output"


class Polarity(str, Enum):
    HIGHER_IS_BETTER = "HigherIsBetter"
    LOWER_IS_BETTER = "LowerIsBetter"


class Adapter(str, Enum):
    LOCAL_FILE = "LocalFile"
    HTTP = "Http"


class SourceFormat(str, Enum):
    CSV = "Csv"


class PageTemplate(str, Enum):
    LEVEL1_GRAPH = "Level1Graph"
    SUB_AREA_DETAIL = "SubAreaDetail"
    GOAL_DETAIL = "GoalDetail"


# --- indicators -------------------------------------------------------------

@dataclass(frozen=True)
class SingleKind:
    source_id: str


@dataclass(frozen=True)
class CompositeChild:
    indicator_id: str
    weight: float


@dataclass(frozen=True)
class CompositeKind:
    children: tuple[CompositeChild, ...]


IndicatorKind = Union[SingleKind, CompositeKind]


@dataclass(frozen=True)
class IndicatorDef:
    id: str
    name: str
    description: str
    unit: str
    taxonomy: Taxonomy
    polarity: Polarity
    kind: IndicatorKind
    sub_area_id: str
    source_url: str

    @property
    def is_composite(self) -> bool:
        return isinstance(self.kind, CompositeKind)


# --- area graph -------------------------------------------------------------

@dataclass(frozen=True)
class DocumentRef:
    title: str
    kind: str
    url: str


@dataclass(frozen=True)
class ExternalLink:
    title: str
    url: str


@dataclass(frozen=True)
class Area:
    id: str
    name: str
    sub_area_ids: tuple[str, ...]


@dataclass(frozen=True)
class SubArea:
    id: str
    name: str
    area_id: str
    indicator_ids: tuple[str, ...]
    interpretation_text: str = ""
    related_sub_area_ids: tuple[str, ...] = ()
    document_refs: tuple[DocumentRef, ...] = ()
    external_links: tuple[ExternalLink, ...] = ()
    x: Optional[float] = None
    y: Optional[float] = None


@dataclass(frozen=True)
class AreaGraph:
    areas: tuple[Area, ...]
    sub_areas: tuple[SubArea, ...]
    edges: tuple[tuple[str, str], ...]


# --- goals ------------------------------------------------------------------

@dataclass(frozen=True)
class YearValue:
    year: int
    value: float


@dataclass(frozen=True)
class IndicatorValueMetric:
    indicator_id: str


@dataclass(frozen=True)
class RankMetric:
    indicator_id: str
    universe: tuple[str, ...]


@dataclass(frozen=True)
class SeriesPoint:
    year: int
    percent: float


@dataclass(frozen=True)
class StoredSeriesMetric:
    series: tuple[SeriesPoint, ...]


GoalMetric = Union[IndicatorValueMetric, RankMetric, StoredSeriesMetric]


@dataclass(frozen=True)
class StrategicGoal:
    id: str
    title: str
    strategy_id: str
    metric: GoalMetric
    baseline: YearValue
    target: YearValue
    mapped_sub_areas: tuple[str, ...]


# --- thresholds / references / sources / dashboard --------------------------

@dataclass(frozen=True)
class BandThresholds:
    green_min: float = 105.0
    light_green_min: float = 95.0
    yellow_min: float = 85.0
    orange_min: float = 70.0
    min_coverage: float = 0.5


@dataclass(frozen=True)
class ReferenceSets:
    innovation_leaders: tuple[str, ...]
    eu_average: Union[str, tuple[str, ...]]
    target_region: str


@dataclass(frozen=True)
class TransformRule:
    indicator_id: str
    scale: float = 1.0
    offset: float = 0.0


@dataclass(frozen=True)
class RowValidation:
    year_min: int = 1900
    year_max: int = 2100
    value_min: Optional[float] = None
    value_max: Optional[float] = None


@dataclass(frozen=True)
class SourceConfig:
    id: str
    name: str
    adapter: Adapter
    location: str
    format: SourceFormat = SourceFormat.CSV
    field_map: tuple[tuple[str, str], ...] = ()  # (source column, role)
    indicator_map: tuple[tuple[str, str], ...] = ()
    region_aliases: tuple[tuple[str, str], ...] = ()
    transforms: tuple[TransformRule, ...] = ()
    priority: int = 0
    validation: RowValidation = field(default_factory=RowValidation)
    fetch_interval_seconds: int = 0  # 0 = manual fetch only

    def column_for(self, role: str) -> Optional[str]:
        """Source column mapped to one of indicator/region/year/value."""
        for column, r in self.field_map:
            if r == role:
                return column
        return None

    def indicator_lookup(self) -> dict[str, str]:
        return dict(self.indicator_map)

    def region_lookup(self) -> dict[str, str]:
        return dict(self.region_aliases)


@dataclass(frozen=True)
class DashboardPage:
    page_id: str
    template: PageTemplate
    bindings: tuple[tuple[str, str], ...] = ()

    def binding(self, slot: str) -> Optional[str]:
        for key, value in self.bindings:
            if key == slot:
                return value
        return None


@dataclass(frozen=True)
class DashboardConfig:
    pages: tuple[DashboardPage, ...] = ()
    locale: str = "de-AT"


# --- notifications ----------------------------------------------------------

@dataclass(frozen=True)
class BandChangedTrigger:
    sub_area_id: str


@dataclass(frozen=True)
class NewDataArrivedTrigger:
    source_id: str


@dataclass(frozen=True)
class GoalStatusChangedTrigger:
    goal_id: str


NotificationTrigger = Union[
    BandChangedTrigger, NewDataArrivedTrigger, GoalStatusChangedTrigger]


@dataclass(frozen=True)
class StdoutChannel:
    pass


@dataclass(frozen=True)
class WebhookChannel:
    url: str


@dataclass(frozen=True)
class FileSinkChannel:
    path: str


NotificationChannel = Union[StdoutChannel, WebhookChannel, FileSinkChannel]


@dataclass(frozen=True)
class NotificationRule:
    id: str
    trigger: NotificationTrigger
    channel: NotificationChannel


# --- the whole configuration -------------------------------------------------

@dataclass(frozen=True)
class Config:
    sources: tuple[SourceConfig, ...]
    indicators: tuple[IndicatorDef, ...]
    graph: AreaGraph
    goals: tuple[StrategicGoal, ...]
    thresholds: BandThresholds
    references: ReferenceSets
    dashboard: DashboardConfig
    notifications: tuple[NotificationRule, ...]

    def indicator(self, indicator_id: str) -> IndicatorDef:
        for ind in self.indicators:
            if ind.id == indicator_id:
                return ind
        raise UnknownId(f"unknown indicator {indicator_id!r}")

    def has_indicator(self, indicator_id: str) -> bool:
        return any(ind.id == indicator_id for ind in self.indicators)

    def sub_area(self, sub_area_id: str) -> SubArea:
        for sa in self.graph.sub_areas:
            if sa.id == sub_area_id:
                return sa
        raise UnknownId(f"unknown sub-area {sub_area_id!r}")

    def area(self, area_id: str) -> Area:
        for area in self.graph.areas:
            if area.id == area_id:
                return area
        raise UnknownId(f"unknown area {area_id!r}")

    def goal(self, goal_id: str) -> StrategicGoal:
        for goal in self.goals:
            if goal.id == goal_id:
                return goal
        raise UnknownId(f"unknown goal {goal_id!r}")

    def source(self, source_id: str) -> SourceConfig:
        for source in self.sources:
            if source.id == source_id:
                return source
        raise UnknownId(f"unknown source {source_id!r}")

    def source_priorities(self) -> dict[str, int]:
        return {s.id: s.priority for s in self.sources}

    def single_indicator_ids(self) -> list[str]:
        return [ind.id for ind in self.indicators if not ind.is_composite]

    def top_level_indicator_ids(self, sub_area_id: str) -> list[str]:
        """Indicators of a sub-area that are not children of one of its
        composites. Composites count as one entry each."""
        sa = self.sub_area(sub_area_id)
        child_ids = set()
        for ind_id in sa.indicator_ids:
            ind = self.indicator(ind_id)
            if ind.is_composite:
                child_ids.update(c.indicator_id for c in ind.kind.children)
        return [i for i in sa.indicator_ids if i not in child_ids]


@dataclass(frozen=True)
class ValidationError:
    code: str
    message: str
    subject: str = ""

    def __str__(self) -> str:
        if self.subject:
            return f"{self.code}({self.subject}): {self.message}"
        return f"{self.code}: {self.message}"


# --- bidirectional goal mapping ----------------------------------------------

def goal_to_sub_areas(config: Config, goal_id: str) -> list[str]:
    """Sub-areas a strategic goal is mapped to."""
    return list(config.goal(goal_id).mapped_sub_areas)


def sub_area_to_goals(config: Config, sub_area_id: str) -> list[str]:
    """Goals mapped to a sub-area (inverse of goal_to_sub_areas)."""
    config.sub_area(sub_area_id)  # raises UnknownId
    return [g.id for g in config.goals if sub_area_id in g.mapped_sub_areas]


# --- loading -----------------------------------------------------------------

def load_config(root_path) -> Config:
    """Load and validate the configuration documents under root_path.

    Raises MissingDocument, ConfigParseError or InvalidConfig; never returns
    a partially built Config.
    """
    root = Path(root_path)
    raw = {}
    for name in DOCUMENTS:
        path = root / name
        if not path.is_file():
            raise MissingDocument(f"missing config document {name} in {root}")
        try:
            raw[name] = json.loads(path.read_text(encoding="utf-8"))
        except json.JSONDecodeError as exc:
            raise ConfigParseError(name, f"line {exc.lineno} col {exc.colno}",
                                   exc.msg) from exc

    config = _build_config(raw)
    errors = validate_config(config)
    if errors:
        raise InvalidConfig(errors)
    return config


def _build_config(raw: dict) -> Config:
    def build(name, fn, doc):
        try:
            return fn(doc)
        except (KeyError, TypeError, ValueError, AttributeError) as exc:
            raise ConfigParseError(name, "document body",
                                   f"{type(exc).__name__}: {exc}") from exc

    sources = build("sources.json", _parse_sources, raw["sources.json"])
    indicators = build("indicators.json", _parse_indicators,
                       raw["indicators.json"])
    graph = build("structure.json", _parse_graph, raw["structure.json"])
    goals = build("goals.json", _parse_goals, raw["goals.json"])
    thresholds = build("thresholds.json", _parse_thresholds,
                       raw["thresholds.json"])
    references = build("references.json", _parse_references,
                       raw["references.json"])
    dashboard = build("dashboard.json", _parse_dashboard, raw["dashboard.json"])
    notifications = build("notifications.json", _parse_notifications,
                          raw["notifications.json"])
    return Config(sources=sources, indicators=indicators, graph=graph,
                  goals=goals, thresholds=thresholds, references=references,
                  dashboard=dashboard, notifications=notifications)


def _pairs(obj: dict) -> tuple[tuple[str, str], ...]:
    return tuple((str(k), str(v)) for k, v in obj.items())


def _parse_sources(doc) -> tuple[SourceConfig, ...]:
    out = []
    for item in doc:
        validation = item.get("validation", {})
        out.append(SourceConfig(
            id=item["id"],
            name=item.get("name", item["id"]),
            adapter=Adapter(item["adapter"]),
            location=item["location"],
            format=SourceFormat(item.get("format", "Csv")),
            field_map=_pairs(item.get("field_map", {})),
            indicator_map=_pairs(item.get("indicator_map", {})),
            region_aliases=_pairs(item.get("region_aliases", {})),
            transforms=tuple(
                TransformRule(indicator_id=t["indicator_id"],
                              scale=float(t.get("scale", 1.0)),
                              offset=float(t.get("offset", 0.0)))
                for t in item.get("transforms", [])),
            priority=int(item.get("priority", 0)),
            validation=RowValidation(
                year_min=int(validation.get("year_min", 1900)),
                year_max=int(validation.get("year_max", 2100)),
                value_min=(None if validation.get("value_min") is None
                           else float(validation["value_min"])),
                value_max=(None if validation.get("value_max") is None
                           else float(validation["value_max"]))),
            fetch_interval_seconds=int(item.get("fetch_interval_seconds", 0)),
        ))
    return tuple(out)


def _parse_indicators(doc) -> tuple[IndicatorDef, ...]:
    out = []
    for item in doc:
        kind_doc = item["kind"]
        if "single" in kind_doc:
            kind = SingleKind(source_id=kind_doc["single"]["source_id"])
        elif "composite" in kind_doc:
            kind = CompositeKind(children=tuple(
                CompositeChild(indicator_id=c["indicator_id"],
                               weight=float(c["weight"]))
                for c in kind_doc["composite"]["children"]))
        else:
            raise ValueError(f"indicator {item.get('id')}: unknown kind")
        out.append(IndicatorDef(
            id=item["id"],
            name=item["name"],
            description=item.get("description", ""),
            unit=item.get("unit", ""),
            taxonomy=Taxonomy(item["taxonomy"]),
            polarity=Polarity(item["polarity"]),
            kind=kind,
            sub_area_id=item["sub_area_id"],
            source_url=item.get("source_url", ""),
        ))
    return tuple(out)


def _parse_graph(doc) -> AreaGraph:
    areas = tuple(
        Area(id=a["id"], name=a["name"],
             sub_area_ids=tuple(a["sub_area_ids"]))
        for a in doc["areas"])
    edges = tuple((e[0], e[1]) for e in doc.get("edges", []))

    sub_areas = []
    for s in doc["sub_areas"]:
        related = s.get("related_sub_area_ids")
        if related is None:
            # derive from the edge set when the document omits the field
            related = sorted({b for a, b in edges if a == s["id"]}
                             | {a for a, b in edges if b == s["id"]})
        sub_areas.append(SubArea(
            id=s["id"],
            name=s["name"],
            area_id=s["area_id"],
            indicator_ids=tuple(s.get("indicator_ids", [])),
            interpretation_text=s.get("interpretation_text", ""),
            related_sub_area_ids=tuple(related),
            document_refs=tuple(
                DocumentRef(title=d["title"], kind=d["kind"], url=d["url"])
                for d in s.get("document_refs", [])),
            external_links=tuple(
                ExternalLink(title=x["title"], url=x["url"])
                for x in s.get("external_links", [])),
            x=s.get("x"),
            y=s.get("y"),
        ))
    return AreaGraph(areas=areas, sub_areas=tuple(sub_areas), edges=edges)


def _parse_goals(doc) -> tuple[StrategicGoal, ...]:
    out = []
    for item in doc:
        metric_doc = item["metric"]
        if "indicator_value" in metric_doc:
            metric = IndicatorValueMetric(
                indicator_id=metric_doc["indicator_value"]["indicator_id"])
        elif "rank" in metric_doc:
            metric = RankMetric(
                indicator_id=metric_doc["rank"]["indicator_id"],
                universe=tuple(metric_doc["rank"]["universe"]))
        elif "stored_series" in metric_doc:
            metric = StoredSeriesMetric(series=tuple(
                SeriesPoint(year=int(p["year"]), percent=float(p["percent"]))
                for p in metric_doc["stored_series"]["series"]))
        else:
            raise ValueError(f"goal {item.get('id')}: unknown metric")
        out.append(StrategicGoal(
            id=item["id"],
            title=item["title"],
            strategy_id=item["strategy_id"],
            metric=metric,
            baseline=YearValue(year=int(item["baseline"]["year"]),
                               value=float(item["baseline"]["value"])),
            target=YearValue(year=int(item["target"]["year"]),
                             value=float(item["target"]["value"])),
            mapped_sub_areas=tuple(item["mapped_sub_areas"]),
        ))
    return tuple(out)


def _parse_thresholds(doc) -> BandThresholds:
    return BandThresholds(
        green_min=float(doc.get("green_min", 105.0)),
        light_green_min=float(doc.get("light_green_min", 95.0)),
        yellow_min=float(doc.get("yellow_min", 85.0)),
        orange_min=float(doc.get("orange_min", 70.0)),
        min_coverage=float(doc.get("min_coverage", 0.5)),
    )


def _parse_references(doc) -> ReferenceSets:
    eu = doc["eu_average"]
    if isinstance(eu, list):
        eu = tuple(eu)
    return ReferenceSets(
        innovation_leaders=tuple(doc["innovation_leaders"]),
        eu_average=eu,
        target_region=doc["target_region"],
    )


def _parse_dashboard(doc) -> DashboardConfig:
    return DashboardConfig(
        pages=tuple(
            DashboardPage(page_id=p["page_id"],
                          template=PageTemplate(p["template"]),
                          bindings=_pairs(p.get("bindings", {})))
            for p in doc.get("pages", [])),
        locale=doc.get("locale", "de-AT"),
    )


def _parse_notifications(doc) -> tuple[NotificationRule, ...]:
    out = []
    for item in doc:
        trig_doc = item["trigger"]
        if "band_changed" in trig_doc:
            trigger = BandChangedTrigger(
                sub_area_id=trig_doc["band_changed"]["sub_area_id"])
        elif "new_data_arrived" in trig_doc:
            trigger = NewDataArrivedTrigger(
                source_id=trig_doc["new_data_arrived"]["source_id"])
        elif "goal_status_changed" in trig_doc:
            trigger = GoalStatusChangedTrigger(
                goal_id=trig_doc["goal_status_changed"]["goal_id"])
        else:
            raise ValueError(f"rule {item.get('id')}: unknown trigger")
        chan_doc = item["channel"]
        if "stdout" in chan_doc:
            channel = StdoutChannel()
        elif "webhook_url" in chan_doc:
            channel = WebhookChannel(url=chan_doc["webhook_url"]["url"])
        elif "file_sink" in chan_doc:
            channel = FileSinkChannel(path=chan_doc["file_sink"]["path"])
        else:
            raise ValueError(f"rule {item.get('id')}: unknown channel")
        out.append(NotificationRule(id=item["id"], trigger=trigger,
                                    channel=channel))
    return tuple(out)


# --- validation --------------------------------------------------------------

def validate_config(config: Config) -> list[ValidationError]:
    """Check every config invariant; returns a deterministic error list."""
    errors: list[ValidationError] = []

    def err(code, message, subject=""):
        errors.append(ValidationError(code, message, subject))

    indicator_ids = [i.id for i in config.indicators]
    indicator_set = set(indicator_ids)
    sub_area_ids = [s.id for s in config.graph.sub_areas]
    sub_area_set = set(sub_area_ids)
    goal_ids = {g.id for g in config.goals}
    source_ids = [s.id for s in config.sources]

    def check_slug(value, subject):
        if not SLUG_RE.match(value or ""):
            err("BadSlug", f"{value!r} is not a valid slug", subject)

    def check_region(code, subject):
        if not REGION_RE.match(code or ""):
            err("BadRegionCode", f"{code!r} is not a 2-letter region code",
                subject)

    # sources
    seen_priorities = {}
    for source in config.sources:
        check_slug(source.id, source.id)
        if source_ids.count(source.id) > 1:
            err("DuplicateId", f"source id {source.id!r} repeated", source.id)
        if source.priority in seen_priorities:
            err("DuplicatePriority",
                f"priority {source.priority} shared with "
                f"{seen_priorities[source.priority]!r}", source.id)
        else:
            seen_priorities[source.priority] = source.id
        roles = [r for _, r in source.field_map]
        for role in ("indicator", "region", "year", "value"):
            if roles.count(role) != 1:
                err("FieldMapIncomplete",
                    f"field_map must map exactly one column to {role!r}",
                    source.id)
        for _, ind_id in source.indicator_map:
            if ind_id not in indicator_set:
                err("DanglingReference",
                    f"indicator_map target {ind_id!r} unknown", source.id)
        for _, region in source.region_aliases:
            check_region(region, source.id)
        for rule in source.transforms:
            if rule.indicator_id not in indicator_set:
                err("DanglingReference",
                    f"transform references unknown indicator "
                    f"{rule.indicator_id!r}", source.id)
        if source.validation.year_min > source.validation.year_max:
            err("BadYearRange", "year_min exceeds year_max", source.id)

    # indicators
    for ind in config.indicators:
        check_slug(ind.id, ind.id)
        if indicator_ids.count(ind.id) > 1:
            err("DuplicateId", f"indicator id {ind.id!r} repeated", ind.id)
        if ind.sub_area_id not in sub_area_set:
            err("DanglingReference",
                f"sub_area_id {ind.sub_area_id!r} unknown", ind.id)
        else:
            sa = config.sub_area(ind.sub_area_id)
            if ind.id not in sa.indicator_ids:
                err("AreaMembership",
                    f"sub-area {sa.id!r} does not list indicator", ind.id)
        if isinstance(ind.kind, SingleKind):
            if ind.kind.source_id not in source_ids:
                err("DanglingReference",
                    f"source {ind.kind.source_id!r} unknown", ind.id)
        else:
            for child in ind.kind.children:
                if child.weight <= 0:
                    err("BadWeight",
                        f"child {child.indicator_id!r} weight must be "
                        f"positive", ind.id)
                if child.indicator_id not in indicator_set:
                    err("DanglingReference",
                        f"composite child {child.indicator_id!r} unknown",
                        ind.id)
                else:
                    child_def = config.indicator(child.indicator_id)
                    if child_def.sub_area_id != ind.sub_area_id:
                        err("CrossSubAreaComposite",
                            f"child {child.indicator_id!r} belongs to "
                            f"{child_def.sub_area_id!r}", ind.id)
    errors.extend(_composite_cycles(config))

    # area graph
    for sa_id in sub_area_ids:
        owners = [a.id for a in config.graph.areas
                  if sa_id in a.sub_area_ids]
        if len(owners) != 1:
            err("AreaMembership",
                f"sub-area must appear in exactly one area, found "
                f"{len(owners)}", sa_id)
    for area in config.graph.areas:
        for sa_id in area.sub_area_ids:
            if sa_id not in sub_area_set:
                err("DanglingReference",
                    f"area lists unknown sub-area {sa_id!r}", area.id)
    for sa in config.graph.sub_areas:
        if sa.area_id not in {a.id for a in config.graph.areas}:
            err("DanglingReference", f"area {sa.area_id!r} unknown", sa.id)
        elif sa.id not in config.area(sa.area_id).sub_area_ids:
            err("AreaMembership",
                f"area {sa.area_id!r} does not list sub-area", sa.id)
        for ind_id in sa.indicator_ids:
            if ind_id not in indicator_set:
                err("DanglingReference",
                    f"sub-area lists unknown indicator {ind_id!r}", sa.id)
    edge_pairs = set()
    for a, b in config.graph.edges:
        for node in (a, b):
            if node not in sub_area_set:
                err("DanglingReference",
                    f"edge endpoint {node!r} unknown", f"{a}-{b}")
        edge_pairs.add(frozenset((a, b)))
    for sa in config.graph.sub_areas:
        for rel in sa.related_sub_area_ids:
            if frozenset((sa.id, rel)) not in edge_pairs:
                err("EdgeSymmetry",
                    f"related sub-area {rel!r} has no edge", sa.id)
    for pair in config.graph.edges:
        a, b = pair
        if a in sub_area_set and b in sub_area_set:
            if b not in config.sub_area(a).related_sub_area_ids:
                err("EdgeSymmetry",
                    f"edge {a}-{b} not in related_sub_area_ids of {a!r}", a)
            if a not in config.sub_area(b).related_sub_area_ids:
                err("EdgeSymmetry",
                    f"edge {a}-{b} not in related_sub_area_ids of {b!r}", b)

    # goals
    for goal in config.goals:
        check_slug(goal.id, goal.id)
        if not goal.mapped_sub_areas:
            err("DanglingReference", "mapped_sub_areas is empty", goal.id)
        for sa_id in goal.mapped_sub_areas:
            if sa_id not in sub_area_set:
                err("DanglingReference",
                    f"mapped sub-area {sa_id!r} unknown", goal.id)
        if goal.baseline.year >= goal.target.year:
            err("BadYearOrder",
                f"baseline year {goal.baseline.year} not before target "
                f"year {goal.target.year}", goal.id)
        metric = goal.metric
        if isinstance(metric, (IndicatorValueMetric, RankMetric)):
            if metric.indicator_id not in indicator_set:
                err("DanglingReference",
                    f"metric indicator {metric.indicator_id!r} unknown",
                    goal.id)
        if isinstance(metric, RankMetric):
            for code in metric.universe:
                check_region(code, goal.id)
        if isinstance(metric, StoredSeriesMetric):
            for point in metric.series:
                if not 0.0 <= point.percent <= 100.0:
                    err("BadSeriesPercent",
                        f"percent {point.percent} at {point.year} outside "
                        f"[0, 100]", goal.id)

    # thresholds
    t = config.thresholds
    cuts = [t.green_min, t.light_green_min, t.yellow_min, t.orange_min]
    if not all(a > b for a, b in zip(cuts, cuts[1:])) or cuts[-1] <= 0:
        err("ThresholdOrder",
            f"cut points must be strictly descending and positive, got "
            f"{cuts}", "thresholds")
    if not 0.0 < t.min_coverage <= 1.0:
        err("BadCoverage",
            f"min_coverage {t.min_coverage} outside (0, 1]", "thresholds")

    # references
    refs = config.references
    check_region(refs.target_region, "references")
    for code in refs.innovation_leaders:
        check_region(code, "references")
    if refs.target_region in refs.innovation_leaders:
        err("TargetInLeaders",
            f"target region {refs.target_region!r} listed as leader",
            "references")
    if isinstance(refs.eu_average, tuple):
        for code in refs.eu_average:
            check_region(code, "references")
    elif refs.eu_average != "EU":
        err("BadRegionCode",
            f"eu_average must be \"EU\" or a member list, got "
            f"{refs.eu_average!r}", "references")

    # dashboard
    for page in config.dashboard.pages:
        if page.template is PageTemplate.SUB_AREA_DETAIL:
            bound = page.binding("sub_area")
            if bound not in sub_area_set:
                err("DanglingReference",
                    f"page binds unknown sub-area {bound!r}", page.page_id)
        elif page.template is PageTemplate.GOAL_DETAIL:
            bound = page.binding("goal")
            if bound not in goal_ids:
                err("DanglingReference",
                    f"page binds unknown goal {bound!r}", page.page_id)

    # notification rules
    for rule in config.notifications:
        trig = rule.trigger
        if isinstance(trig, BandChangedTrigger) and \
                trig.sub_area_id not in sub_area_set:
            err("DanglingReference",
                f"rule watches unknown sub-area {trig.sub_area_id!r}",
                rule.id)
        if isinstance(trig, NewDataArrivedTrigger) and \
                trig.source_id not in source_ids:
            err("DanglingReference",
                f"rule watches unknown source {trig.source_id!r}", rule.id)
        if isinstance(trig, GoalStatusChangedTrigger) and \
                trig.goal_id not in goal_ids:
            err("DanglingReference",
                f"rule watches unknown goal {trig.goal_id!r}", rule.id)

    return errors


def _composite_cycles(config: Config) -> list[ValidationError]:
    """Detect cycles in the composite children graph (DFS, 3-color)."""
    children = {}
    for ind in config.indicators:
        if isinstance(ind.kind, CompositeKind):
            children[ind.id] = [c.indicator_id for c in ind.kind.children
                                if config.has_indicator(c.indicator_id)]
    WHITE, GREY, BLACK = 0, 1, 2
    color = {i: WHITE for i in children}
    errors = []

    def visit(node, trail):
        color[node] = GREY
        for nxt in children.get(node, ()):
            if color.get(nxt, BLACK) == GREY:
                cycle = trail[trail.index(nxt):] + [nxt] if nxt in trail \
                    else [node, nxt]
                errors.append(ValidationError(
                    "CyclicComposite",
                    "composite cycle " + " -> ".join(cycle), node))
            elif color.get(nxt) == WHITE:
                visit(nxt, trail + [nxt])
        color[node] = BLACK

    for node in sorted(children):
        if color[node] == WHITE:
            visit(node, [node])
    return errors


# --- serialization -----------------------------------------------------------

def dump_config(config: Config, root_path) -> None:
    """Write a Config back out as the eight JSON documents.

    load_config(dump_config(c)) == c for any valid c.
    """
    root = Path(root_path)
    root.mkdir(parents=True, exist_ok=True)
    docs = {
        "sources.json": [_dump_source(s) for s in config.sources],
        "indicators.json": [_dump_indicator(i) for i in config.indicators],
        "structure.json": _dump_graph(config.graph),
        "goals.json": [_dump_goal(g) for g in config.goals],
        "thresholds.json": {
            "green_min": config.thresholds.green_min,
            "light_green_min": config.thresholds.light_green_min,
            "yellow_min": config.thresholds.yellow_min,
            "orange_min": config.thresholds.orange_min,
            "min_coverage": config.thresholds.min_coverage,
        },
        "references.json": {
            "innovation_leaders": list(config.references.innovation_leaders),
            "eu_average": (config.references.eu_average
                           if isinstance(config.references.eu_average, str)
                           else list(config.references.eu_average)),
            "target_region": config.references.target_region,
        },
        "dashboard.json": {
            "pages": [{"page_id": p.page_id, "template": p.template.value,
                       "bindings": dict(p.bindings)}
                      for p in config.dashboard.pages],
            "locale": config.dashboard.locale,
        },
        "notifications.json": [_dump_rule(r) for r in config.notifications],
    }
    for name, doc in docs.items():
        (root / name).write_text(
            json.dumps(doc, indent=2, ensure_ascii=False) + "\n",
            encoding="utf-8")


def _dump_source(s: SourceConfig) -> dict:
    doc = {
        "id": s.id, "name": s.name, "adapter": s.adapter.value,
        "location": s.location, "format": s.format.value,
        "field_map": dict(s.field_map),
        "indicator_map": dict(s.indicator_map),
        "region_aliases": dict(s.region_aliases),
        "transforms": [{"indicator_id": t.indicator_id, "scale": t.scale,
                        "offset": t.offset} for t in s.transforms],
        "priority": s.priority,
        "validation": {"year_min": s.validation.year_min,
                       "year_max": s.validation.year_max},
        "fetch_interval_seconds": s.fetch_interval_seconds,
    }
    if s.validation.value_min is not None:
        doc["validation"]["value_min"] = s.validation.value_min
    if s.validation.value_max is not None:
        doc["validation"]["value_max"] = s.validation.value_max
    return doc


def _dump_indicator(i: IndicatorDef) -> dict:
    if isinstance(i.kind, SingleKind):
        kind = {"single": {"source_id": i.kind.source_id}}
    else:
        kind = {"composite": {"children": [
            {"indicator_id": c.indicator_id, "weight": c.weight}
            for c in i.kind.children]}}
    return {"id": i.id, "name": i.name, "description": i.description,
            "unit": i.unit, "taxonomy": i.taxonomy.value,
            "polarity": i.polarity.value, "kind": kind,
            "sub_area_id": i.sub_area_id, "source_url": i.source_url}


def _dump_graph(g: AreaGraph) -> dict:
    sub_areas = []
    for s in g.sub_areas:
        doc = {"id": s.id, "name": s.name, "area_id": s.area_id,
               "indicator_ids": list(s.indicator_ids),
               "interpretation_text": s.interpretation_text,
               "related_sub_area_ids": list(s.related_sub_area_ids),
               "document_refs": [{"title": d.title, "kind": d.kind,
                                  "url": d.url} for d in s.document_refs],
               "external_links": [{"title": x.title, "url": x.url}
                                  for x in s.external_links]}
        if s.x is not None:
            doc["x"] = s.x
        if s.y is not None:
            doc["y"] = s.y
        sub_areas.append(doc)
    return {"areas": [{"id": a.id, "name": a.name,
                       "sub_area_ids": list(a.sub_area_ids)}
                      for a in g.areas],
            "sub_areas": sub_areas,
            "edges": [list(e) for e in g.edges]}


def _dump_goal(g: StrategicGoal) -> dict:
    if isinstance(g.metric, IndicatorValueMetric):
        metric = {"indicator_value": {"indicator_id": g.metric.indicator_id}}
    elif isinstance(g.metric, RankMetric):
        metric = {"rank": {"indicator_id": g.metric.indicator_id,
                           "universe": list(g.metric.universe)}}
    else:
        metric = {"stored_series": {"series": [
            {"year": p.year, "percent": p.percent} for p in g.metric.series]}}
    return {"id": g.id, "title": g.title, "strategy_id": g.strategy_id,
            "metric": metric,
            "baseline": {"year": g.baseline.year, "value": g.baseline.value},
            "target": {"year": g.target.year, "value": g.target.value},
            "mapped_sub_areas": list(g.mapped_sub_areas)}


def _dump_rule(r: NotificationRule) -> dict:
    if isinstance(r.trigger, BandChangedTrigger):
        trigger = {"band_changed": {"sub_area_id": r.trigger.sub_area_id}}
    elif isinstance(r.trigger, NewDataArrivedTrigger):
        trigger = {"new_data_arrived": {"source_id": r.trigger.source_id}}
    else:
        trigger = {"goal_status_changed": {"goal_id": r.trigger.goal_id}}
    if isinstance(r.channel, StdoutChannel):
        channel = {"stdout": {}}
    elif isinstance(r.channel, WebhookChannel):
        channel = {"webhook_url": {"url": r.channel.url}}
    else:
        channel = {"file_sink": {"path": r.channel.path}}
    return {"id": r.id, "trigger": trigger, "channel": channel}
