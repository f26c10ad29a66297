import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracles
import synth
from shiftscan.citation import (
    citation_counts,
    cocitation_counts,
    core_references,
    growth_factor,
    rsi,
    rsi_series,
)
from shiftscan.citation import CoreRefSet
from shiftscan.errors import EmptySlice, InsufficientYears, ThresholdMismatch
from shiftscan.parsers import parse_wos
from shiftscan.records import Corpus, PaperRecord, ThresholdConfig, YearSlice, slice_by_year

LADDER = [ThresholdConfig.parse(t) for t in ("10/5", "10/8", "11/9", "15/8", "15/11")]
T_10_8 = ThresholdConfig(10, 8)
T_15_11 = ThresholdConfig(15, 11)


def make_slice(ref_lists, year=1970):
    return YearSlice(
        year,
        tuple(PaperRecord(f"p{i}", year, "", frozenset(refs)) for i, refs in enumerate(ref_lists)),
    )


def core(refs, t=T_10_8, year=1970):
    return CoreRefSet(year, t, frozenset(refs))


@pytest.fixture(scope="module")
def replication_corpus(replication):
    return Corpus.from_records(parse_wos(replication.wos_text).records)


class TestCounts:
    def test_citation_example(self):
        table = citation_counts(make_slice([{"A", "B"}, {"A"}, {"C"}]))
        assert dict(table.counts) == {"A": 2, "B": 1, "C": 1}
        assert table["Z"] == 0

    def test_empty_slice(self):
        assert len(citation_counts(make_slice([]))) == 0
        assert len(cocitation_counts(make_slice([]))) == 0

    def test_cocitation_example(self):
        table = cocitation_counts(make_slice([{"A", "B", "C"}, {"A", "B"}]))
        assert dict(table.counts) == {("A", "B"): 2, ("A", "C"): 1, ("B", "C"): 1}
        assert table.get("B", "A") == table.get("A", "B") == 2
        assert table.get("A", "A") == 0

    def test_single_ref_has_no_pairs(self):
        assert len(cocitation_counts(make_slice([{"A"}, {"B"}]))) == 0

    def test_restriction_filters_before_pairing(self):
        s = make_slice([{"A", "B", "C"}, {"A", "C"}, {"B", "C", "D"}])
        table = cocitation_counts(s, restrict_to={"A", "C"})
        assert dict(table.counts) == {("A", "C"): 2}

    @pytest.mark.parametrize("seed", range(15))
    def test_match_oracle(self, seed):
        corpus = synth.random_corpus(random.Random(seed))
        for s in slice_by_year(corpus):
            assert dict(citation_counts(s).counts) == oracles.citation_counts(s.records)
            assert dict(cocitation_counts(s).counts) == oracles.cocitation_counts(s.records)

    @pytest.mark.parametrize("seed", range(5))
    def test_restricted_equals_filtered_full_table(self, seed):
        rng = random.Random(seed)
        corpus = synth.random_corpus(rng)
        for s in slice_by_year(corpus):
            keep = {r for r in s.refs if rng.random() < 0.3}
            full = oracles.cocitation_counts(s.records)
            expected = {p: n for p, n in full.items() if p[0] in keep and p[1] in keep}
            assert dict(cocitation_counts(s, keep).counts) == expected


class TestCoreReferences:
    # A and B cited 15 times each, co-cited 11 times
    BOUNDARY = [{"A", "B"}] * 11 + [{"A"}] * 4 + [{"B"}] * 4

    def test_boundary_case(self):
        assert core_references(make_slice(self.BOUNDARY), T_15_11).refs == {"A", "B"}

    def test_cocitation_threshold_is_inclusive_and_strict_above(self):
        assert core_references(make_slice(self.BOUNDARY), ThresholdConfig(15, 12)).refs == set()

    def test_partner_must_pass_citation_threshold(self):
        # C is co-cited with A 12 times but cited only 12 times itself
        slice_ = make_slice([{"A", "C"}] * 12 + [{"A"}] * 3)
        assert core_references(slice_, T_15_11).refs == set()
        assert core_references(slice_, ThresholdConfig(12, 11)).refs == {"A", "C"}

    def test_single_highly_cited_ref_is_not_core(self):
        assert core_references(make_slice([{"A"}] * 30), T_15_11).refs == set()

    @pytest.mark.parametrize("seed", range(15))
    def test_match_oracle(self, seed):
        corpus = synth.random_corpus(random.Random(100 + seed))
        for s in slice_by_year(corpus):
            for t in LADDER:
                expected = oracles.core_references(s.records, t.citation_min, t.cocitation_min)
                assert core_references(s, t).refs == expected

    def test_replication_core_sets(self, replication, replication_corpus):
        from shiftscan.records import normalize_ref

        m = replication.manifest
        for s in slice_by_year(replication_corpus):
            for key, t in (("core_15_11", T_15_11), ("core_10_8", T_10_8)):
                expected = {normalize_ref(r) for r in m[key][s.year]}
                assert core_references(s, t).refs == expected


class TestRsi:
    def test_worked_example(self):
        # 18 and 16 core references, 7 shared -> 27 unique, RSI 0.26
        a = core({f"R{i}" for i in range(18)})
        b = core({f"R{i}" for i in range(11, 27)}, year=1971)
        cell = rsi(a, b)
        assert (cell.n_a, cell.n_b, cell.shared, cell.union) == (18, 16, 7, 27)
        assert cell.rsi == Fraction(7, 27)
        assert round(cell.value, 2) == 0.26

    def test_identical(self):
        cell = rsi(core({"A", "B"}), core({"A", "B"}, year=1971))
        assert cell.rsi == 1

    def test_disjoint(self):
        cell = rsi(core({"A"}), core({"B"}, year=1971))
        assert cell.rsi == 0 and cell.defined

    def test_both_empty_is_undefined(self):
        cell = rsi(core(()), core((), year=1971))
        assert cell.rsi is None and cell.value is None and not cell.defined

    def test_one_empty(self):
        assert rsi(core(()), core({"A"})).rsi == 0

    def test_threshold_mismatch(self):
        with pytest.raises(ThresholdMismatch):
            rsi(core({"A"}, T_10_8), core({"A"}, T_15_11))

    @given(st.frozensets(st.integers(0, 30)), st.frozensets(st.integers(0, 30)))
    def test_properties(self, a, b):
        ca, cb = core(a), core(b, year=1971)
        ab, ba = rsi(ca, cb), rsi(cb, ca)
        assert ab.rsi == ba.rsi
        assert ab.shared <= min(ab.n_a, ab.n_b)
        assert (ab.shared, ab.union) == oracles.rsi(a, b)
        if ab.defined:
            assert 0 <= ab.rsi <= 1
        if a:
            assert rsi(ca, core(a, year=1971)).rsi == 1


class TestSeries:
    def test_two_year_intervals(self, replication_corpus):
        cells = rsi_series(replication_corpus, T_10_8, 1)
        assert [(c.year_a, c.year_b) for c in cells] == [(y, y + 1) for y in range(1969, 1975)]

    def test_three_year_intervals(self, replication_corpus):
        cells = rsi_series(replication_corpus, T_10_8, 2)
        assert [(c.year_a, c.year_b) for c in cells] == [(y, y + 2) for y in range(1969, 1974)]

    def test_replication_rows(self, replication_corpus):
        for t, row in ((T_15_11, synth.ROW_15_11), (T_10_8, synth.ROW_10_8)):
            for gap in (1, 2):
                cells = rsi_series(replication_corpus, t, gap)
                assert tuple(c.shared for c in cells) == row[f"gap{gap}"]
                assert tuple(c.n_a for c in cells) == row["sizes"][:-gap]
                assert tuple(c.n_b for c in cells) == row["sizes"][gap:]

    def test_insufficient_years(self):
        corpus = Corpus((PaperRecord("a", 1970, ""),), (1970, 1971))
        with pytest.raises(InsufficientYears):
            rsi_series(corpus, T_10_8, 2)
        assert len(rsi_series(corpus, T_10_8, 1)) == 1

    def test_bad_gap(self):
        with pytest.raises(ValueError):
            rsi_series(Corpus((), (1970, 1975)), T_10_8, 0)


class TestGrowthFactor:
    def test_first_to_last_year_factors(self, replication_corpus):
        g = growth_factor(replication_corpus, 1969, 1975)
        assert g.papers == Fraction(800, 499)
        assert g.refs == Fraction(15704, 9700)
        assert abs(float(g.papers) - 1.60) <= 0.01
        assert abs(float(g.refs) - 1.62) <= 0.01

    def test_same_year(self, replication_corpus):
        assert growth_factor(replication_corpus, 1972, 1972) == (1, 1)

    def test_empty_from_year(self):
        corpus = Corpus((PaperRecord("a", 1971, ""),), (1969, 1971))
        with pytest.raises(EmptySlice):
            growth_factor(corpus, 1969, 1971)
        with pytest.raises(ZeroDivisionError):
            growth_factor(corpus, 1969, 1971)

    def test_no_refs_gives_none(self):
        corpus = Corpus((PaperRecord("a", 1969, ""), PaperRecord("b", 1971, "")))
        assert growth_factor(corpus, 1969, 1971) == (1, None)

    def test_year_outside_range(self):
        with pytest.raises(ValueError):
            growth_factor(Corpus((PaperRecord("a", 1969, ""),)), 1969, 1980)


def comparable(t1, t2):
    return t1.citation_min <= t2.citation_min and t1.cocitation_min <= t2.cocitation_min


@pytest.mark.parametrize("seed", range(10))
def test_monotone_and_bounded(seed):
    corpus = synth.random_corpus(random.Random(200 + seed))
    for s in slice_by_year(corpus):
        sets = {t: core_references(s, t).refs for t in LADDER}
        for lo in LADDER:
            for hi in LADDER:
                if comparable(lo, hi):
                    assert sets[hi] <= sets[lo]
        cit = citation_counts(s)
        for (a, b), n in cocitation_counts(s).counts.items():
            assert n <= min(cit[a], cit[b])


def test_ladder_is_only_a_partial_order():
    # 15/8 and 11/9 are not comparable: this slice has a 15/8 core pair that
    # fails 11/9 because the pair is co-cited only 8 times.
    slice_ = make_slice([{"A", "B"}] * 8 + [{"A"}] * 7 + [{"B"}] * 7)
    assert core_references(slice_, ThresholdConfig(15, 8)).refs == {"A", "B"}
    assert core_references(slice_, ThresholdConfig(11, 9)).refs == set()
