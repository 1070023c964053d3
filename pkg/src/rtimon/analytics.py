"""Benchmark analytics: relative scores against reference region sets,
traffic-light bands, composite and sub-area aggregation, change
contributions, ranks, goal achievement and least-squares outlooks.

Everything here is a pure function over a StoreSnapshot and a Config;
composites and sub-area overalls aggregate in percent-of-reference space
because their children carry incomparable units.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Optional

from .config import (BandThresholds, CompositeKind, Config, IndicatorDef,
                     Polarity, RankMetric, StoredSeriesMetric,
                     StrategicGoal)
from .errors import (CoverageMismatch, InsufficientHistory, NoObservation,
                     NoQualifyingYear, NoReferenceData, UnknownIndicator,
                     YearNotInSeries, ZeroDenominator)
from .store import StoreSnapshot

EU_AGGREGATE = "EU"


class RefSelector(str, Enum):
    INNOVATION_LEADERS = "InnovationLeaders"
    TOP3 = "Top3"
    EU_AVERAGE = "EuAverage"


class Band(str, Enum):
    GREEN = "Green"
    LIGHT_GREEN = "LightGreen"
    YELLOW = "Yellow"
    ORANGE = "Orange"
    RED = "Red"
    INSUFFICIENT_DATA = "InsufficientData"


@dataclass(frozen=True)
class RelativeScore:
    indicator_id: str
    region: str
    year: int
    ref: RefSelector
    percent: Optional[float]
    band: Band


@dataclass
class GoalStatus:
    goal_id: str
    year: int
    achievement_percent: float
    current_value: Optional[float] = None
    rank: Optional[int] = None
    on_track: Optional[bool] = None
    projection: Optional[list[tuple[int, float]]] = None


def band_of(percent: float, thresholds: BandThresholds) -> Band:
    """Traffic-light band for a percent-of-reference score.

    Boundaries are inclusive upward: exactly light_green_min is LightGreen.
    """
    if percent >= thresholds.green_min:
        return Band.GREEN
    if percent >= thresholds.light_green_min:
        return Band.LIGHT_GREEN
    if percent >= thresholds.yellow_min:
        return Band.YELLOW
    if percent >= thresholds.orange_min:
        return Band.ORANGE
    return Band.RED


def _single(config: Config, indicator_id: str) -> IndicatorDef:
    ind = config.indicator(indicator_id)
    if ind.is_composite:
        raise UnknownIndicator(
            f"{indicator_id!r} is a composite; this operation applies to "
            f"single indicators")
    return ind


def reference_aggregate(indicator_id: str, year: int, ref: RefSelector,
                        snap: StoreSnapshot, config: Config) -> float:
    """Aggregate value of the selected reference set for one single
    indicator and year.

    InnovationLeaders: unweighted mean over configured leaders with data.
    EuAverage: the stored "EU" aggregate row if present, else the mean over
    the configured member list. Top3: mean of the up-to-3 best values
    (direction-aware) among all regions with data, excluding the target
    region and the synthetic EU aggregate.
    """
    ind = _single(config, indicator_id)
    refs = config.references

    if ref is RefSelector.INNOVATION_LEADERS:
        values = [snap.value(indicator_id, r, year)
                  for r in refs.innovation_leaders]
        values = [v for v in values if v is not None]
        if not values:
            raise NoReferenceData(
                f"no innovation leader has {indicator_id!r} data for {year}")
        return sum(values) / len(values)

    if ref is RefSelector.EU_AVERAGE:
        stored = snap.value(indicator_id, EU_AGGREGATE, year)
        if stored is not None:
            return stored
        if isinstance(refs.eu_average, tuple):
            values = [snap.value(indicator_id, r, year)
                      for r in refs.eu_average]
            values = [v for v in values if v is not None]
            if values:
                return sum(values) / len(values)
        raise NoReferenceData(
            f"no EU aggregate available for {indicator_id!r} in {year}")

    # Top3
    candidates = []
    for region in snap.regions_with_data(indicator_id, year):
        if region in (refs.target_region, EU_AGGREGATE):
            continue
        candidates.append(snap.value(indicator_id, region, year))
    if not candidates:
        raise NoReferenceData(
            f"no candidate region has {indicator_id!r} data for {year}")
    best_first = sorted(
        candidates, reverse=ind.polarity is Polarity.HIGHER_IS_BETTER)
    top = best_first[:3]
    return sum(top) / len(top)


def relative_score(indicator_id: str, region: str, year: int,
                   ref: RefSelector, snap: StoreSnapshot,
                   config: Config) -> RelativeScore:
    """Percent-of-reference score for a single indicator, with band."""
    ind = _single(config, indicator_id)
    value = snap.value(indicator_id, region, year)
    if value is None:
        raise NoObservation(
            f"no value for {indicator_id!r}/{region}/{year}")
    agg = reference_aggregate(indicator_id, year, ref, snap, config)
    if ind.polarity is Polarity.HIGHER_IS_BETTER:
        if agg == 0:
            raise ZeroDenominator(
                f"reference aggregate is zero for {indicator_id!r}/{year}")
        percent = 100.0 * value / agg
    else:
        if value == 0:
            raise ZeroDenominator(
                f"value is zero for {indicator_id!r}/{region}/{year}")
        percent = 100.0 * agg / value
    return RelativeScore(indicator_id=indicator_id, region=region, year=year,
                         ref=ref, percent=percent,
                         band=band_of(percent, config.thresholds))


def composite_score(indicator_id: str, region: str, year: int,
                    ref: RefSelector, snap: StoreSnapshot,
                    config: Config) -> RelativeScore:
    """Weighted mean of the children's relative scores (recursive).

    Children without data are dropped; when the available weight fraction
    falls below min_coverage the result is InsufficientData with no
    percent. NoReferenceData propagates only when every child fails
    with it.
    """
    ind = config.indicator(indicator_id)
    if not isinstance(ind.kind, CompositeKind):
        raise UnknownIndicator(f"{indicator_id!r} is not a composite")

    total_weight = sum(c.weight for c in ind.kind.children)
    covered_weight = 0.0
    weighted_sum = 0.0
    failures = []
    for child in ind.kind.children:
        percent = _percent_or_none(child.indicator_id, region, year, ref,
                                   snap, config, failures)
        if percent is not None:
            covered_weight += child.weight
            weighted_sum += child.weight * percent

    if covered_weight == 0.0 and failures and \
            all(isinstance(f, NoReferenceData) for f in failures):
        raise NoReferenceData(
            f"no reference data for any child of {indicator_id!r} in {year}")
    if total_weight == 0 or \
            covered_weight / total_weight < config.thresholds.min_coverage:
        return RelativeScore(indicator_id=indicator_id, region=region,
                             year=year, ref=ref, percent=None,
                             band=Band.INSUFFICIENT_DATA)
    percent = weighted_sum / covered_weight
    return RelativeScore(indicator_id=indicator_id, region=region, year=year,
                         ref=ref, percent=percent,
                         band=band_of(percent, config.thresholds))


def score_of(indicator_id: str, region: str, year: int, ref: RefSelector,
             snap: StoreSnapshot, config: Config) -> RelativeScore:
    """Dispatch to relative_score or composite_score by indicator kind."""
    if config.indicator(indicator_id).is_composite:
        return composite_score(indicator_id, region, year, ref, snap, config)
    return relative_score(indicator_id, region, year, ref, snap, config)


def _percent_or_none(indicator_id, region, year, ref, snap, config,
                     failures: list) -> Optional[float]:
    try:
        score = score_of(indicator_id, region, year, ref, snap, config)
    except (NoObservation, ZeroDenominator, NoReferenceData) as exc:
        failures.append(exc)
        return None
    if score.percent is None:
        failures.append(NoObservation(f"{indicator_id!r} has no percent"))
        return None
    return score.percent


def overall_sub_area(sub_area_id: str, region: str, year: int,
                     ref: RefSelector, snap: StoreSnapshot,
                     config: Config) -> RelativeScore:
    """Unweighted mean over the sub-area's top-level indicator percents.

    Composites count once; their children are excluded to avoid double
    counting. Same coverage gate as composites. The returned score carries
    the sub-area id in the indicator_id slot.
    """
    top_level = config.top_level_indicator_ids(sub_area_id)
    failures: list = []
    percents = []
    for ind_id in top_level:
        percent = _percent_or_none(ind_id, region, year, ref, snap, config,
                                   failures)
        if percent is not None:
            percents.append(percent)

    if not percents and failures and \
            all(isinstance(f, NoReferenceData) for f in failures):
        raise NoReferenceData(
            f"no reference data for sub-area {sub_area_id!r} in {year}")
    if not top_level or \
            len(percents) / len(top_level) < config.thresholds.min_coverage:
        return RelativeScore(indicator_id=sub_area_id, region=region,
                             year=year, ref=ref, percent=None,
                             band=Band.INSUFFICIENT_DATA)
    percent = sum(percents) / len(percents)
    return RelativeScore(indicator_id=sub_area_id, region=region, year=year,
                         ref=ref, percent=percent,
                         band=band_of(percent, config.thresholds))


def change_contributions(sub_area_id: str, region: str, year: int,
                         ref: RefSelector, snap: StoreSnapshot,
                         config: Config) -> list[tuple[str, float]]:
    """Per-indicator contribution to the overall's change since year-1.

    delta_i = (percent_i(year) - percent_i(year-1)) / N over the N
    top-level indicators scored in both years; the deltas sum to
    overall(year) - overall(year-1). Raises CoverageMismatch when the two
    years cover different indicator sets.
    """
    top_level = config.top_level_indicator_ids(sub_area_id)
    now: dict[str, float] = {}
    prev: dict[str, float] = {}
    for ind_id in top_level:
        p_now = _percent_or_none(ind_id, region, year, ref, snap, config, [])
        p_prev = _percent_or_none(ind_id, region, year - 1, ref, snap,
                                  config, [])
        if p_now is not None:
            now[ind_id] = p_now
        if p_prev is not None:
            prev[ind_id] = p_prev

    if set(now) != set(prev):
        raise CoverageMismatch(
            f"indicator coverage differs between {year - 1} and {year} for "
            f"sub-area {sub_area_id!r}: {sorted(set(now) ^ set(prev))}")
    for label, y in ((year, now), (year - 1, prev)):
        covered = len(y) / len(top_level) if top_level else 0.0
        if not top_level or covered < config.thresholds.min_coverage:
            raise CoverageMismatch(
                f"overall not computable at {label} for {sub_area_id!r}")

    n = len(now)
    return [(ind_id, (now[ind_id] - prev[ind_id]) / n)
            for ind_id in top_level if ind_id in now]


def rank_of(indicator_id: str, region: str, year: int,
            universe: tuple[str, ...], snap: StoreSnapshot,
            config: Config) -> int:
    """Competition rank ("1224") of region within the universe.

    Rank 1 is best, direction-aware by polarity; regions without data for
    the year are not ranked.
    """
    ind = config.indicator(indicator_id)
    values = {}
    for r in universe:
        v = snap.value(indicator_id, r, year)
        if v is not None:
            values[r] = v
    if region not in values:
        raise NoObservation(
            f"no value for {indicator_id!r}/{region}/{year}")
    mine = values[region]
    if ind.polarity is Polarity.HIGHER_IS_BETTER:
        better = sum(1 for v in values.values() if v > mine)
    else:
        better = sum(1 for v in values.values() if v < mine)
    return better + 1


def goal_achievement(goal: StrategicGoal, year: int, snap: StoreSnapshot,
                     config: Config) -> GoalStatus:
    """Degree of target achievement at a year, clamped to [0, 100].

    Value and rank metrics interpolate linearly from baseline to target;
    stored-series goals return their published percent for the year.
    """
    metric = goal.metric
    rank = None
    if isinstance(metric, StoredSeriesMetric):
        for point in metric.series:
            if point.year == year:
                return GoalStatus(goal_id=goal.id, year=year,
                                  achievement_percent=_clamp(point.percent),
                                  current_value=point.percent)
        raise YearNotInSeries(
            f"goal {goal.id!r} has no stored percent for {year}")

    if isinstance(metric, RankMetric):
        rank = rank_of(metric.indicator_id, config.references.target_region,
                       year, metric.universe, snap, config)
        current = float(rank)
    else:
        value = snap.value(metric.indicator_id,
                           config.references.target_region, year)
        if value is None:
            raise NoObservation(
                f"no value for goal {goal.id!r} metric in {year}")
        current = value

    span = goal.baseline.value - goal.target.value
    if span == 0:
        achievement = 100.0 if current == goal.target.value else 0.0
    else:
        achievement = _clamp(100.0 * (goal.baseline.value - current) / span)
    return GoalStatus(goal_id=goal.id, year=year,
                      achievement_percent=achievement, current_value=current,
                      rank=rank)


def _clamp(percent: float) -> float:
    return min(100.0, max(0.0, percent))


def metric_history(goal: StrategicGoal, snap: StoreSnapshot,
                   config: Config) -> list[tuple[int, float]]:
    """Observed (year, value) points of the goal's metric, year-ascending."""
    metric = goal.metric
    if isinstance(metric, StoredSeriesMetric):
        return sorted((p.year, p.percent) for p in metric.series)
    if isinstance(metric, RankMetric):
        points = []
        target = config.references.target_region
        for year, _v in snap.series(metric.indicator_id, target):
            points.append((year, float(rank_of(
                metric.indicator_id, target, year, metric.universe, snap,
                config))))
        return points
    return snap.series(metric.indicator_id, config.references.target_region)


def goal_projection(goal: StrategicGoal, snap: StoreSnapshot, config: Config,
                    window: int = 5,
                    ) -> tuple[list[tuple[int, float]], bool]:
    """Least-squares outlook over the last `window` observed metric points.

    Returns the projected (year, value) points for the years after the last
    observation through the target year, and whether the projected value at
    the target year meets or beats the target (direction from
    baseline -> target).
    """
    history = metric_history(goal, snap, config)[-window:]
    if len(history) < 2:
        raise InsufficientHistory(
            f"goal {goal.id!r} has {len(history)} metric point(s), "
            f"need at least 2")
    slope, intercept = _ols(history)
    last_year = history[-1][0]
    projection = [(year, intercept + slope * year)
                  for year in range(last_year + 1, goal.target.year + 1)]
    at_target = intercept + slope * goal.target.year
    if goal.target.value >= goal.baseline.value:
        on_track = at_target >= goal.target.value
    else:
        on_track = at_target <= goal.target.value
    return projection, on_track


def _ols(points: list[tuple[int, float]]) -> tuple[float, float]:
    n = len(points)
    mean_x = sum(x for x, _ in points) / n
    mean_y = sum(y for _, y in points) / n
    sxx = sum((x - mean_x) ** 2 for x, _ in points)
    sxy = sum((x - mean_x) * (y - mean_y) for x, y in points)
    slope = sxy / sxx if sxx else 0.0
    return slope, mean_y - slope * mean_x


def data_cutoff(indicator_ids: list[str], ref_regions: list[str],
                snap: StoreSnapshot, coverage: float = 0.6) -> int:
    """Latest year where at least `coverage` of the indicator x region
    pairs have stored values."""
    total = len(indicator_ids) * len(ref_regions)
    if total == 0:
        raise NoQualifyingYear("no indicator/region pairs to inspect")
    for year in reversed(snap.years()):
        have = sum(1 for i in indicator_ids for r in ref_regions
                   if snap.value(i, r, year) is not None)
        if have >= coverage * total:
            return year
    raise NoQualifyingYear(
        f"no year reaches {coverage:.0%} coverage for {indicator_ids}")


def sub_area_singles(config: Config, sub_area_id: str) -> list[str]:
    """Single indicators of a sub-area (composite children included)."""
    sa = config.sub_area(sub_area_id)
    return [i for i in sa.indicator_ids
            if not config.indicator(i).is_composite]


def sub_area_cutoff(sub_area_id: str, snap: StoreSnapshot, config: Config,
                    coverage: float = 0.6) -> int:
    """Default display year for a sub-area: data cutoff over its single
    indicators and the target region plus the innovation leaders."""
    regions = [config.references.target_region]
    regions += [r for r in config.references.innovation_leaders
                if r not in regions]
    return data_cutoff(sub_area_singles(config, sub_area_id), regions, snap,
                       coverage)


@dataclass(frozen=True)
class ComparisonSeries:
    """The four benchmark series of one single indicator."""

    indicator_id: str
    target_region: str
    target: tuple[tuple[int, float], ...]
    innovation_leaders: tuple[tuple[int, float], ...]
    top3: tuple[tuple[int, float], ...]
    eu_average: tuple[tuple[int, float], ...]


def comparison_timeseries(indicator_id: str, snap: StoreSnapshot,
                          config: Config) -> ComparisonSeries:
    """Raw target-region series plus the three reference aggregates per
    year; years where an aggregate is undefined are omitted from that
    series."""
    _single(config, indicator_id)
    target = config.references.target_region
    years = sorted({k[2] for k in snap.observations
                    if k[0] == indicator_id})

    aggregates = {RefSelector.INNOVATION_LEADERS: [],
                  RefSelector.TOP3: [], RefSelector.EU_AVERAGE: []}
    for ref, series in aggregates.items():
        for year in years:
            try:
                series.append((year, reference_aggregate(
                    indicator_id, year, ref, snap, config)))
            except NoReferenceData:
                continue
    return ComparisonSeries(
        indicator_id=indicator_id,
        target_region=target,
        target=tuple(snap.series(indicator_id, target)),
        innovation_leaders=tuple(aggregates[RefSelector.INNOVATION_LEADERS]),
        top3=tuple(aggregates[RefSelector.TOP3]),
        eu_average=tuple(aggregates[RefSelector.EU_AVERAGE]),
    )
