import math
from collections import Counter
from itertools import combinations

import numpy as np
import pytest

from rankforge import _kernels
from rankforge.enumerator import (
    CountTable,
    EnumerationCeilingError,
    colex_ranges,
    enumerate_inclusive,
    enumerate_showdown,
    nothing_count,
    resolve_threads,
    sweep,
)
from rankforge.hands import CLASSES, Card, HandClass as H, HandSet, Ranking, classify_by_subsets
from rankforge.ranking import frequency_ranking

SHOWDOWN_R9 = {
    H.SF: 10_560, H.X4: 44_640, H.FL: 175_560, H.HC: 233_100, H.X3: 607_200,
    H.FH: 633_024, H.ST: 1_169_940, H.P1: 2_316_600, H.P2: 3_157_056,
}

# containment: every hand holding the second class also holds the first
DOMINANCE = [
    (H.P1, H.P2), (H.P1, H.X3),
    (H.P2, H.FH), (H.P2, H.X4), (H.X3, H.FH), (H.X3, H.X4),
    (H.ST, H.SF), (H.FL, H.SF),
]


@pytest.fixture(scope="module")
def brute_force_r5():
    """Inclusive counts at r=5 from the 5-subset definition, no kernels involved."""
    counts = Counter()
    for combo in combinations(range(20), 7):
        counts.update(classify_by_subsets(HandSet(Card.from_index(i) for i in combo), 5).present)
    return counts


class TestInclusive:
    def test_brute_force_r5(self, brute_force_r5):
        table = enumerate_inclusive(5)
        assert table.counts == {h: brute_force_r5[h] for h in CLASSES}

    def test_high_card_is_total(self):
        table = enumerate_inclusive(9)
        assert table.counts[H.HC] == table.total == math.comb(36, 7)
        assert sum(table.counts.values()) > table.total

    def test_r5_flush_equals_straight_flush(self):
        c = enumerate_inclusive(5).counts
        assert c[H.FL] == c[H.SF]

    @pytest.mark.slow
    def test_standard_deck(self):
        c = enumerate_inclusive(13).counts
        assert c[H.X4] == 224_848
        assert c[H.HC] == 133_784_560
        assert c[H.FL] == 4_089_228

    @pytest.mark.parametrize("r", range(5, 15))
    def test_dominance(self, r):
        c = enumerate_inclusive(r).counts
        for a, b in DOMINANCE:
            assert c[b] <= c[a], (r, a, b)

    @pytest.mark.parametrize("r", range(5, 11))
    def test_quads_and_straight_flush_disjoint(self, r):
        hist = _kernels_hist(r)
        both = (1 << H.X4.index) | (1 << H.SF.index)
        assert all(hist[b] == 0 for b in range(512) if b & both == both)


def _kernels_hist(r):
    from rankforge.enumerator import profile_histogram

    return profile_histogram(r)


class TestShowdown:
    def test_short_deck_table(self):
        table = enumerate_showdown(9, frequency_ranking(9))
        assert table.counts == SHOWDOWN_R9
        assert sum(table.counts.values()) == 8_347_680
        assert [h for h, _ in table.rows()] == [H.SF, H.X4, H.FL, H.HC, H.X3, H.FH, H.ST, H.P1, H.P2]

    @pytest.mark.parametrize("r", range(5, 12))
    def test_partition(self, r):
        for rk in (frequency_ranking(r), Ranking.canonical(), Ranking.from_order(reversed(CLASSES))):
            assert sum(enumerate_showdown(r, rk).counts.values()) == math.comb(4 * r, 7)

    def test_nothing_count(self):
        assert nothing_count(9) == 233_100
        assert enumerate_showdown(9, Ranking.canonical()).counts[H.HC] == nothing_count(9)
        assert enumerate_showdown(9, frequency_ranking(9)).counts[H.HC] == nothing_count(9)

    def test_tied_ranking_still_partitions(self):
        rk = frequency_ranking(5)
        table = enumerate_showdown(5, rk)
        assert rk.ties
        assert sum(table.counts.values()) == table.total
        assert table.tied_profiles > 0
        # FL and SF select identical hands at r=5; the tie rule declares SF
        assert table.counts[H.FL] == 0

    def test_round_trip(self):
        table = enumerate_showdown(9, frequency_ranking(9))
        assert CountTable.from_dict(table.to_dict()) == table


class TestSweep:
    @pytest.mark.parametrize("threads", [1, 2, 3, 5])
    def test_thread_count_does_not_change_result(self, threads):
        assert np.array_equal(sweep(9, threads=threads), sweep(9, threads=1))

    @pytest.mark.parametrize("r", range(5, 11))
    def test_suit_canonical_matches_plain(self, r):
        assert np.array_equal(sweep(r, suit_canonical=True), sweep(r))

    def test_suit_canonical_thread_independent(self):
        assert np.array_equal(sweep(8, threads=3, suit_canonical=True), sweep(8, threads=1, suit_canonical=True))

    def test_colex_ranges(self):
        rs = colex_ranges(100, 7)
        assert rs[0][0] == 0 and rs[-1][1] == 100
        assert all(a[1] == b[0] for a, b in zip(rs, rs[1:]))
        assert colex_ranges(3, 10) == [(0, 1), (1, 2), (2, 3)]

    def test_unrank_follows_colex_order(self):
        n = 12
        table = _kernels.binom_table(n)
        colex = sorted(combinations(range(n), 7), key=lambda c: c[::-1])
        out = np.empty(7, dtype=np.int64)
        for idx, combo in enumerate(colex):
            _kernels.unrank_colex(idx, table, out)
            assert tuple(out) == combo

    def test_arbitrary_ranges_sum(self):
        r = 6
        total = math.comb(24, 7)
        full = np.zeros(512, dtype=np.int64)
        _kernels.sweep_range(r, 0, total, full)
        parts = np.zeros(512, dtype=np.int64)
        for lo, hi in [(0, 1), (1, 1000), (1000, 1001), (1001, 123_457), (123_457, total)]:
            _kernels.sweep_range(r, lo, hi, parts)
        assert np.array_equal(full, parts)

    def test_ceiling(self):
        with pytest.raises(EnumerationCeilingError, match="long_run"):
            sweep(17)

    def test_small_deck_rejected(self):
        with pytest.raises(ValueError):
            enumerate_inclusive(4)

    def test_progress_goes_to_stderr(self, capsys):
        sweep(7, progress_interval=0.0)
        captured = capsys.readouterr()
        assert captured.out == ""
        assert "r=7" in captured.err

    def test_thread_env(self, monkeypatch):
        monkeypatch.setenv("RANKFORGE_THREADS", "3")
        assert resolve_threads() == 3
        assert resolve_threads(2) == 2
        monkeypatch.setenv("RANKFORGE_THREADS", "x")
        with pytest.raises(ValueError):
            resolve_threads()
