import csv
import io
import random
from datetime import datetime, timedelta, timezone
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from rtimon.config import TransformRule
from rtimon.errors import NonFiniteResult
from rtimon.ingestion import RawBatch, SourceRow
from rtimon.integration import (Observation, dedup, integrate_batch,
                                map_rows, transform)

import corpus
from helpers import T0, make_source, obs

NOW = datetime(2024, 5, 1, tzinfo=timezone.utc)


def source_row(**cells):
    base = {"indicator": "ind_a", "geo": "AT", "year": "2020",
            "value": "1.5"}
    base.update(cells)
    return SourceRow(cells=base, line_no=2)


class TestMapRows:
    def test_decimal_comma_and_indicator_map(self):
        source = make_source(indicator_map=(("ict_spec", "ict_specialists"),))
        row = source_row(indicator="ict_spec", geo="AT", year="2018",
                         value="4,50")
        [observation] = map_rows([row], source, NOW)
        assert observation == Observation(
            indicator_id="ict_specialists", region="AT", year=2018,
            value=4.5, source_id="src", retrieved_at=NOW)

    def test_region_alias(self):
        source = make_source(region_aliases=(("EL", "GR"),))
        [observation] = map_rows([source_row(geo="EL")], source, NOW)
        assert observation.region == "GR"

    def test_identity_field_map_copies_cells(self):
        [observation] = map_rows([source_row()], make_source(), NOW)
        assert (observation.indicator_id, observation.region,
                observation.year, observation.value) == ("ind_a", "AT",
                                                         2020, 1.5)

    def test_renamed_columns(self):
        source = make_source(field_map=(
            ("metric", "indicator"), ("country", "region"),
            ("period", "year"), ("obs_value", "value")))
        row = SourceRow(cells={"metric": "x", "country": "SE",
                               "period": "2019", "obs_value": "2"},
                        line_no=2)
        [observation] = map_rows([row], source, NOW)
        assert (observation.indicator_id, observation.region,
                observation.year, observation.value) == ("x", "SE", 2019,
                                                         2.0)


class TestTransform:
    def test_scale(self):
        source = make_source(transforms=(
            TransformRule(indicator_id="ind_a", scale=0.001),))
        [out] = transform([obs("ind_a", "AT", 2020, 4500.0)], source)
        assert out.value == 4.5

    def test_no_rule_identity(self):
        [out] = transform([obs("ind_a", "AT", 2020, 4500.0)], make_source())
        assert out.value == 4500.0

    def test_overflow_raises(self):
        source = make_source(transforms=(
            TransformRule(indicator_id="ind_a", scale=1e308),))
        with pytest.raises(NonFiniteResult):
            transform([obs("ind_a", "AT", 2020, 1e308)], source)

    def test_rules_apply_in_order(self):
        source = make_source(transforms=(
            TransformRule(indicator_id="ind_a", scale=2.0, offset=1.0),
            TransformRule(indicator_id="ind_a", scale=10.0, offset=0.0)))
        [out] = transform([obs("ind_a", "AT", 2020, 3.0)], source)
        assert out.value == (3.0 * 2.0 + 1.0) * 10.0

    def test_linearity_against_fraction_oracle(self):
        rng = random.Random(42)
        for _ in range(300):
            value = rng.uniform(-1e4, 1e4)
            scale = rng.uniform(-100, 100)
            offset = rng.uniform(-100, 100)
            source = make_source(transforms=(
                TransformRule(indicator_id="ind_a", scale=scale,
                              offset=offset),))
            [out] = transform([obs("ind_a", "AT", 2020, value)], source)
            exact = Fraction(value) * Fraction(scale) + Fraction(offset)
            if exact == 0:
                assert abs(out.value) < 1e-12
            else:
                rel = abs((Fraction(out.value) - exact) / exact)
                assert rel <= Fraction(1, 10 ** 12)


class TestDedup:
    def sources(self):
        return [make_source("low", priority=1), make_source("high",
                                                            priority=5)]

    def test_priority_wins(self):
        observations = [obs("a", "AT", 2020, 1.0, source_id="low"),
                        obs("a", "AT", 2020, 2.0, source_id="high")]
        kept, removed = dedup(observations, self.sources())
        assert removed == 1
        assert kept[0].value == 2.0

    def test_latest_retrieval_breaks_priority_tie(self):
        t1, t2 = T0, T0 + timedelta(hours=1)
        observations = [
            obs("a", "AT", 2020, 1.0, source_id="low", retrieved_at=t2),
            obs("a", "AT", 2020, 2.0, source_id="low", retrieved_at=t1)]
        kept, removed = dedup(observations, self.sources())
        assert removed == 1
        assert kept[0].retrieved_at == t2

    def test_full_tie_keeps_first_seen(self):
        observations = [obs("a", "AT", 2020, 1.0, source_id="low"),
                        obs("a", "AT", 2020, 2.0, source_id="low")]
        kept, _ = dedup(observations, self.sources())
        assert kept[0].value == 1.0

    def test_disjoint_keys_identity(self):
        observations = [obs("a", "AT", 2020, 1.0),
                        obs("a", "AT", 2021, 2.0),
                        obs("b", "AT", 2020, 3.0)]
        kept, removed = dedup(observations, [make_source()])
        assert removed == 0
        assert kept == observations

    def test_idempotent(self):
        observations = [obs("a", "AT", 2020, 1.0, source_id="low"),
                        obs("a", "AT", 2020, 2.0, source_id="high"),
                        obs("b", "AT", 2020, 3.0, source_id="low")]
        kept, _ = dedup(observations, self.sources())
        again, removed = dedup(kept, self.sources())
        assert removed == 0
        assert again == kept

    @given(st.lists(st.tuples(st.sampled_from(["a", "b"]),
                              st.sampled_from(["AT", "SE"]),
                              st.sampled_from([2020, 2021]),
                              st.sampled_from(["low", "high"]),
                              st.integers(0, 3)), max_size=12),
           st.randoms())
    def test_kept_set_is_permutation_invariant(self, spec, rnd):
        def build(items):
            return [obs(i, r, y, hash((i, r, y, s, dt)) % 97,
                        source_id=s,
                        retrieved_at=T0 + timedelta(hours=dt))
                    for i, r, y, s, dt in items]

        kept_a, _ = dedup(build(spec), self.sources())
        shuffled = list(spec)
        rnd.shuffle(shuffled)
        kept_b, _ = dedup(build(shuffled), self.sources())
        assert set(kept_a) == set(kept_b)


class TestIntegrateBatch:
    def test_aux_fixture_counts(self, config, corpus_paths):
        batch = RawBatch(source_id=corpus.AUX_SOURCE,
                         data=corpus_paths.aux_csv.read_bytes(),
                         retrieved_at=NOW)
        observations, report = integrate_batch(batch, config)
        assert report.rows_in == 10
        assert report.rows_valid == 8
        assert report.rows_rejected == 2
        assert report.duplicates_removed == 1
        assert len(observations) == 7
        assert report.reject_histogram == {"YearOutOfRange": 1,
                                           "NonNumericValue": 1}

    def test_counters_add_up(self, config, corpus_paths):
        batch = RawBatch(source_id=corpus.MAIN_SOURCE,
                         data=corpus_paths.main_csv.read_bytes(),
                         retrieved_at=NOW)
        _, report = integrate_batch(batch, config)
        assert report.rows_in == report.rows_valid + report.rows_rejected

    def test_idempotent_for_same_batch(self, config, corpus_paths):
        batch = RawBatch(source_id=corpus.AUX_SOURCE,
                         data=corpus_paths.aux_csv.read_bytes(),
                         retrieved_at=NOW)
        first, _ = integrate_batch(batch, config)
        second, _ = integrate_batch(batch, config)
        assert first == second

    def test_all_rejected_leaves_zero_counters(self, config):
        data = ("indicator,geo,year,value\n"
                "no_such_indicator,AT,2020,1\n"
                "also_missing,SE,2020,2\n").encode()
        batch = RawBatch(source_id=corpus.MAIN_SOURCE, data=data,
                         retrieved_at=NOW)
        observations, report = integrate_batch(batch, config)
        assert observations == []
        assert report.rows_in == 2
        assert report.rows_valid == 0
        assert report.rows_rejected == 2
        assert report.duplicates_removed == 0

    def test_random_batches_satisfy_counter_invariant(self, config):
        rng = random.Random(7)
        cells = {
            "indicator": ["gii_score", "material_reuse", "bogus"],
            "geo": ["AT", "SE", "??"],
            "year": ["2020", "1850", "x"],
            "value": ["1.5", "abc", "2,5"],
        }
        for _ in range(25):
            buf = io.StringIO()
            writer = csv.writer(buf, lineterminator="\n")
            writer.writerow(["indicator", "geo", "year", "value"])
            for _ in range(rng.randint(0, 20)):
                writer.writerow([rng.choice(cells[c]) for c in
                                 ("indicator", "geo", "year", "value")])
            batch = RawBatch(source_id=corpus.MAIN_SOURCE,
                             data=buf.getvalue().encode(),
                             retrieved_at=NOW)
            observations, report = integrate_batch(batch, config)
            assert report.rows_in == report.rows_valid + \
                report.rows_rejected
            assert len(observations) == report.rows_valid - \
                report.duplicates_removed
