"""Acceptance suite: one test per release criterion, at desk scale.

Each test's docstring first line is the criterion label printed in the
terminal summary (see conftest). Tolerances are pinned here and nowhere
else.
"""

import random
from dataclasses import replace
from datetime import datetime, timezone
from fractions import Fraction

import pytest
from fastapi.testclient import TestClient

from rtimon import analytics
from rtimon.analytics import Band, RefSelector
from rtimon.config import (RankMetric, StrategicGoal, YearValue,
                           goal_to_sub_areas, load_config, sub_area_to_goals)
from rtimon.errors import CoverageMismatch
from rtimon.ingestion import RawBatch
from rtimon.integration import dedup, integrate_batch
from rtimon.notify import evaluate_notifications
from rtimon.service import AppState, create_app, run_ingest
from rtimon.store import ExportFormat, ObservationStore, StoreSnapshot

import corpus
from genconfig import random_config
from helpers import (make_indicator, make_source, mini_config, obs, snap_of)
from test_notify import yellow_digitization

LEADERS = RefSelector.INNOVATION_LEADERS

AREA_NAMES = {"Framework Conditions for RTI", "Core RTI System",
              "RTI Cross-cutting Issues", "Impact"}
SUB_AREA_NAMES = {
    "Regulation", "Financing and Taxes", "Education",
    "International Interdependence", "Tertiary Education",
    "Academic Research", "Corporate RTI", "Start-ups and Financing",
    "Digitization", "Environment and Climate", "Circular Economy",
    "Location Attractiveness", "Gender Equality",
    "Technological Sovereignty", "Effectiveness", "Efficiency",
}


def test_structure_fidelity(config, client):
    """Structure fidelity: 4 areas / 16 sub-areas, 20 graph nodes"""
    assert len(config.graph.areas) == 4
    assert len(config.graph.sub_areas) == 16
    assert {a.name for a in config.graph.areas} == AREA_NAMES
    assert {s.name for s in config.graph.sub_areas} == SUB_AREA_NAMES
    payload = client.get("/api/v1/graph").json()
    assert len(payload["nodes"]) == 20


def test_bidirectional_mapping(config):
    """Bidirectional mapping: DESI anchor + symmetry over 200 configs"""
    assert set(goal_to_sub_areas(config, "desi_ranking")) == {
        "education", "tertiary_education", "digitization"}
    for sub_area in ("education", "tertiary_education", "digitization"):
        assert "desi_ranking" in sub_area_to_goals(config, sub_area)

    rng = random.Random(20240501)
    for _ in range(200):
        cfg = random_config(rng)
        for goal in cfg.goals:
            for sa in goal_to_sub_areas(cfg, goal.id):
                assert goal.id in sub_area_to_goals(cfg, sa)
        for sa in cfg.graph.sub_areas:
            for goal_id in sub_area_to_goals(cfg, sa.id):
                assert sa.id in goal_to_sub_areas(cfg, goal_id)


def test_relative_score_suite(config, snapshot):
    """Relative scores: identity exact, scale invariance, duality <= 1e-9"""
    # identity: value equal to the reference mean scores exactly 100
    cfg = mini_config([make_indicator("ind")], leaders=("SE", "DK"),
                      target="AT")
    snap = snap_of({("ind", "AT", 2020): 5.0, ("ind", "SE", 2020): 4.0,
                    ("ind", "DK", 2020): 6.0})
    assert analytics.relative_score("ind", "AT", 2020, LEADERS, snap,
                                    cfg).percent == 100.0

    # scale invariance on the fixture store, all three reference sets
    for indicator_id, year in (("egov_users", 2020),
                               ("broadband_gap", 2018),
                               ("gii_score", 2022)):
        baseline = {
            ref: analytics.relative_score(indicator_id, "AT", year, ref,
                                          snapshot, config).percent
            for ref in RefSelector}
        for c in (0.001, 3.0, 1e6):
            observations = dict(snapshot.observations)
            for key, o in snapshot.observations.items():
                if key[0] == indicator_id and key[2] == year:
                    observations[key] = replace(o, value=o.value * c)
            scaled = StoreSnapshot(observations=observations,
                                   created_at=snapshot.created_at)
            for ref in RefSelector:
                percent = analytics.relative_score(
                    indicator_id, "AT", year, ref, scaled, config).percent
                assert abs(percent - baseline[ref]) <= 1e-9

    # polarity duality (exact for singleton references; see notes)
    rng = random.Random(77)
    up_cfg = mini_config([make_indicator("ind")], leaders=("SE",),
                         target="AT")
    down_cfg = mini_config([make_indicator("ind",
                                           polarity="LowerIsBetter")],
                           leaders=("SE",), target="AT")
    for _ in range(200):
        value = rng.uniform(0.05, 80.0)
        ref_value = rng.uniform(0.05, 80.0)
        p_up = analytics.relative_score(
            "ind", "AT", 2020, LEADERS,
            snap_of({("ind", "AT", 2020): value,
                     ("ind", "SE", 2020): ref_value}), up_cfg).percent
        p_down = analytics.relative_score(
            "ind", "AT", 2020, LEADERS,
            snap_of({("ind", "AT", 2020): 1.0 / value,
                     ("ind", "SE", 2020): 1.0 / ref_value}),
            down_cfg).percent
        assert abs(p_up - p_down) <= 1e-9


def _composite_instance(rng):
    n_children = rng.randint(1, 6)
    n_loose = rng.randint(0, 3)
    weights = [rng.uniform(0.1, 5.0) for _ in range(n_children)]
    leaders = ["L1", "L2"][: rng.randint(1, 2)]
    indicators = [make_indicator(f"c{i}") for i in range(n_children)]
    indicators += [make_indicator(f"s{i}") for i in range(n_loose)]
    indicators.append(make_indicator(
        "comp", children=[(f"c{i}", w) for i, w in enumerate(weights)]))
    cfg = mini_config(indicators, leaders=leaders, target="AT")
    data = {}
    refs = {}
    values = {}
    for ind in [f"c{i}" for i in range(n_children)] + \
               [f"s{i}" for i in range(n_loose)]:
        values[ind] = rng.uniform(5.0, 150.0)
        refs[ind] = [rng.uniform(20.0, 120.0) for _ in leaders]
        data[(ind, "AT", 2020)] = values[ind]
        for leader, ref_value in zip(leaders, refs[ind]):
            data[(ind, leader, 2020)] = ref_value
    return cfg, snap_of(data), values, refs, weights, n_loose


def _oracle_percent(value, ref_values):
    mean = sum(Fraction(v) for v in ref_values) / len(ref_values)
    return 100 * Fraction(value) / mean


def test_composite_overall_oracle():
    """Composite/overall vs weighted-mean oracle, 500 instances <= 1e-9"""
    rng = random.Random(424242)
    for _ in range(500):
        cfg, snap, values, refs, weights, n_loose = _composite_instance(rng)
        child_percents = {
            f"c{i}": _oracle_percent(values[f"c{i}"], refs[f"c{i}"])
            for i in range(len(weights))}
        oracle_comp = (
            sum(Fraction(w) * child_percents[f"c{i}"]
                for i, w in enumerate(weights))
            / sum(Fraction(w) for w in weights))
        comp = analytics.composite_score("comp", "AT", 2020, LEADERS, snap,
                                         cfg)
        assert abs(comp.percent - float(oracle_comp)) <= 1e-9
        floats = [float(p) for p in child_percents.values()]
        assert min(floats) - 1e-9 <= comp.percent <= max(floats) + 1e-9

        top_percents = [oracle_comp] + [
            _oracle_percent(values[f"s{i}"], refs[f"s{i}"])
            for i in range(n_loose)]
        oracle_overall = sum(top_percents) / len(top_percents)
        overall = analytics.overall_sub_area("s1", "AT", 2020, LEADERS,
                                             snap, cfg)
        assert abs(overall.percent - float(oracle_overall)) <= 1e-9
        tops = [float(p) for p in top_percents]
        assert min(tops) - 1e-9 <= overall.percent <= max(tops) + 1e-9


def test_change_contributions():
    """Change contributions sum to the overall delta, 500 instances"""
    rng = random.Random(31337)
    for i in range(500):
        n = rng.randint(1, 6)
        indicators = [make_indicator(f"i{k}") for k in range(n)]
        cfg = mini_config(indicators, leaders=("L1",), target="AT")
        data = {}
        for k in range(n):
            for year in (2019, 2020):
                data[(f"i{k}", "AT", year)] = rng.uniform(5.0, 150.0)
                data[(f"i{k}", "L1", year)] = rng.uniform(20.0, 120.0)
        snap = snap_of(data)
        deltas = analytics.change_contributions("s1", "AT", 2020, LEADERS,
                                                snap, cfg)
        overall_new = analytics.overall_sub_area("s1", "AT", 2020, LEADERS,
                                                 snap, cfg).percent
        overall_old = analytics.overall_sub_area("s1", "AT", 2019, LEADERS,
                                                 snap, cfg).percent
        assert abs(sum(d for _, d in deltas) -
                   (overall_new - overall_old)) <= 1e-9

        # dropping any indicator's old-year data must raise
        victim = f"i{rng.randrange(n)}"
        broken = {k: v for k, v in data.items()
                  if k != (victim, "AT", 2019)}
        with pytest.raises(CoverageMismatch):
            analytics.change_contributions("s1", "AT", 2020, LEADERS,
                                           snap_of(broken), cfg)


def test_goal_math(config, snapshot):
    """Goal math: rank interpolation, stored series, clamps, OLS oracle"""
    # linear rank goal 19 -> 10 at current rank 18 (fixture-anchored)
    status = analytics.goal_achievement(config.goal("gii_rank"), 2023,
                                        snapshot, config)
    assert status.rank == 18
    assert status.achievement_percent == pytest.approx(100.0 / 9.0,
                                                       abs=1e-6)

    # published stored series returns exactly its value
    stored = analytics.goal_achievement(config.goal("gii_achievement"),
                                        2023, snapshot, config)
    assert stored.achievement_percent == 56.0

    # clamping at both ends
    cfg = mini_config([make_indicator("v")], target="AT")
    goal = StrategicGoal(id="g", title="g", strategy_id="s",
                         metric=RankMetric(indicator_id="v",
                                           universe=("AT",)),
                         baseline=YearValue(2015, 19.0),
                         target=YearValue(2030, 10.0),
                         mapped_sub_areas=("s1",))
    from rtimon.config import IndicatorValueMetric
    value_goal = replace(goal, metric=IndicatorValueMetric(
        indicator_id="v"), baseline=YearValue(2015, 10.0),
        target=YearValue(2030, 20.0))
    at_target = snap_of({("v", "AT", 2024): 25.0})
    assert analytics.goal_achievement(value_goal, 2024, at_target,
                                      cfg).achievement_percent == 100.0
    regressed = snap_of({("v", "AT", 2024): 3.0})
    assert analytics.goal_achievement(value_goal, 2024, regressed,
                                      cfg).achievement_percent == 0.0

    # OLS projection equals the closed-form least-squares line
    rng = random.Random(987)
    for _ in range(100):
        points = [(2014 + i, rng.uniform(1.0, 60.0)) for i in range(5)]
        snap = snap_of({("v", "AT", year): value for year, value in points})
        projection, _ = analytics.goal_projection(value_goal, snap, cfg)
        n = len(points)
        sx = sum(Fraction(x) for x, _ in points)
        sy = sum(Fraction(y) for _, y in points)
        sxy = sum(Fraction(x) * Fraction(y) for x, y in points)
        sxx = sum(Fraction(x) ** 2 for x, _ in points)
        slope = (n * sxy - sx * sy) / (n * sxx - sx * sx)
        intercept = (sy - slope * sx) / n
        for year, value in projection:
            assert abs(value - float(intercept + slope * year)) <= 1e-9

    # the exact descending line reaches its target
    down_cfg = mini_config([make_indicator("v", polarity="LowerIsBetter")],
                           target="AT")
    down_goal = replace(value_goal, baseline=YearValue(2015, 10.0),
                        target=YearValue(2030, 5.0))
    line = snap_of({("v", "AT", 2015): 10.0, ("v", "AT", 2016): 9.0,
                    ("v", "AT", 2017): 8.0})
    _, on_track = analytics.goal_projection(down_goal, line, down_cfg)
    assert on_track is True


def test_rank_oracle():
    """Competition ranking vs sort oracle, 500 universes with ties"""
    rng = random.Random(56789)
    codes = [f"{chr(65 + i // 26)}{chr(65 + i % 26)}" for i in range(30)]
    for _ in range(500):
        n = rng.randint(1, 30)
        universe = tuple(rng.sample(codes, n))
        # a small value pool forces plenty of ties
        values = {r: float(rng.randint(0, max(1, n // 2)))
                  for r in universe}
        higher = rng.random() < 0.5
        polarity = "HigherIsBetter" if higher else "LowerIsBetter"
        cfg = mini_config([make_indicator("ind", polarity=polarity)],
                          leaders=("L1",), target="AT")
        snap = snap_of({("ind", r, 2020): v for r, v in values.items()})

        ordered = sorted(values.values(), reverse=higher)
        for region in universe:
            expected = ordered.index(values[region]) + 1
            assert analytics.rank_of("ind", region, 2020, universe, snap,
                                     cfg) == expected


def test_pipeline_round_trip(corpus_paths, tmp_path):
    """Pipeline: ingest -> export -> re-ingest identity, dedup, counters"""
    config = load_config(corpus_paths.config_dir)
    state = AppState(config=config,
                     store=ObservationStore(tmp_path / "store",
                                            config=config),
                     config_dir=corpus_paths.config_dir,
                     reports_dir=tmp_path / "reports")
    main_result = run_ingest(state, corpus.MAIN_SOURCE)
    aux_result = run_ingest(state, corpus.AUX_SOURCE)
    for result in (main_result, aux_result):
        report = result["report"]
        assert report["rows_in"] == report["rows_valid"] + \
            report["rows_rejected"]

    # priority rule: the higher-priority main batch keeps its value
    snap = state.store.snapshot()
    assert snap.value("ict_specialists", "AT", 2018) == 4.5
    assert snap.get("ict_specialists", "AT", 2018).source_id == \
        corpus.MAIN_SOURCE
    # aux contributed its genuinely new keys
    assert snap.value("broadband_gap", "BE", 2023) == 2.5
    assert snap.value("material_reuse", "BE", 2023) == 12.0
    # while its lower-priority duplicate of an existing key lost
    assert snap.get("recycling_rate", "AT", 2023).source_id == \
        corpus.MAIN_SOURCE

    # dedup idempotence on the stored winners
    kept, removed = dedup(list(snap.observations.values()),
                          list(config.sources))
    assert removed == 0
    assert len(kept) == snap.observation_count

    # re-ingesting the aux batch leaves every winner in place
    # (retrieved_at refreshes under the latest-retrieval tiebreak)
    def winners(s):
        return {k: (o.value, o.source_id)
                for k, o in s.observations.items()}

    before = winners(state.store.snapshot())
    run_ingest(state, corpus.AUX_SOURCE)
    assert winners(state.store.snapshot()) == before

    # export -> re-ingest reproduces the observation set exactly
    out = tmp_path / "export.csv"
    state.store.export(snap, ExportFormat.CSV, out)
    batch = RawBatch(source_id=corpus.MAIN_SOURCE, data=out.read_bytes(),
                     retrieved_at=datetime.now(timezone.utc))
    observations, report = integrate_batch(batch, config)
    assert report.rows_rejected == 0
    original = {(o.indicator_id, o.region, o.year, o.value)
                for o in snap.observations.values()}
    reimported = {(o.indicator_id, o.region, o.year, o.value)
                  for o in observations}
    assert reimported == original


def test_api_consistency(client, populated_state, admin_token):
    """API: graph/detail band agreement, byte-stable GETs, admin 401"""
    for ref in ("leaders", "top3", "eu"):
        graph = client.get(f"/api/v1/graph?ref={ref}").json()
        for node in graph["nodes"]:
            if node["kind"] != "sub_area":
                continue
            detail = client.get(
                f"/api/v1/subareas/{node['id']}?ref={ref}").json()
            assert detail["overall"]["band"] == node["band"]
            assert detail["year"] == node["year"]

    for url in ("/api/v1/graph", "/api/v1/subareas/digitization",
                "/api/v1/goals", "/api/v1/goals/gii_rank",
                "/api/v1/indicators/ict_specialists/timeseries",
                "/api/v1/export.csv"):
        assert client.get(url).content == client.get(url).content

    assert client.post(
        "/api/v1/admin/ingest?source=aux_batch").status_code == 401
    assert client.post("/api/v1/admin/reload").status_code == 401
    assert client.post("/api/v1/admin/reload",
                       headers={"X-Admin-Token": "wrong"}).status_code == 401


def test_notification_criterion(config, snapshot):
    """Notification: one Yellow->Orange event, identical re-evaluation"""
    old = yellow_digitization(snapshot)
    events = evaluate_notifications(old, snapshot,
                                    list(config.notifications), config)
    assert len(events) == 1
    [event] = events
    assert event.rule_id == "band_watch_digitization"
    assert event.payload["old"]["band"] == "Yellow"
    assert event.payload["new"]["band"] == "Orange"
    again = evaluate_notifications(old, snapshot,
                                   list(config.notifications), config)
    assert again == events
