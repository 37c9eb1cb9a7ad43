"""Tests for the periodic pass model."""

import numpy as np
import pytest

from src.orbit import (
    OrbitEphemeris,
    OrbitError,
    is_visible,
    next_window,
    period_from_altitude,
    windows_between,
)

PERIOD = 5_802_000
WINDOW = 300_000
DAY = 86_400_000


def humsat(last_passage: int = 0) -> OrbitEphemeris:
    return OrbitEphemeris('humsat', last_passage, PERIOD, WINDOW)


class TestEphemeris:

    def test_rejects_non_positive_period(self):
        with pytest.raises(OrbitError):
            OrbitEphemeris('sat', 0, 0, 1)

    def test_rejects_window_longer_than_period(self):
        with pytest.raises(OrbitError):
            OrbitEphemeris('sat', 0, 1_000, 1_001)

    def test_rejects_empty_window(self):
        with pytest.raises(OrbitError):
            OrbitEphemeris('sat', 0, 1_000, 0)

    def test_id_defaults_to_satellite(self):
        assert humsat().id == 'humsat'
        assert OrbitEphemeris('sat', 0, PERIOD, WINDOW, 'downlink').id == 'downlink'

    def test_window_equal_to_period_is_always_visible(self):
        eph = OrbitEphemeris('geo', 0, 1_000, 1_000)
        assert all(is_visible(eph, t) for t in (-1, 0, 999, 1_000, 123_456))

    def test_from_altitude_matches_humsat_period(self):
        eph = OrbitEphemeris.from_altitude('humsat', 600, WINDOW)
        assert abs(eph.period - PERIOD) < 10_000

    def test_period_from_altitude_rejects_zero(self):
        with pytest.raises(OrbitError):
            period_from_altitude(0)


class TestVisibility:

    def test_window_is_half_open(self):
        eph = humsat(60_000)
        assert is_visible(eph, 60_000)
        assert is_visible(eph, 359_999)
        assert not is_visible(eph, 360_000)
        assert not is_visible(eph, 59_999)

    def test_periodic(self):
        eph = humsat(60_000)
        assert is_visible(eph, 60_000 + 3 * PERIOD)
        assert not is_visible(eph, 360_000 + 3 * PERIOD)

    def test_before_last_passage_uses_modular_extension(self):
        eph = humsat(PERIOD)
        assert is_visible(eph, 0)
        assert is_visible(eph, -PERIOD + 10)
        assert not is_visible(eph, -1)

    def test_random_times_agree_with_next_window(self):
        rng = np.random.default_rng(7)
        eph = humsat(1_234_567)
        for t in rng.integers(-10 * PERIOD, 10 * PERIOD, size=500):
            t = int(t)
            window = next_window(eph, t)
            assert is_visible(eph, t) == window.contains(t)
            assert window.end > t
            assert window.duration == WINDOW


class TestNextWindow:

    def test_inside_window_returns_it(self):
        window = next_window(humsat(60_000), 100_000)
        assert (window.start, window.end) == (60_000, 360_000)

    def test_at_window_end_returns_the_following_one(self):
        window = next_window(humsat(60_000), 360_000)
        assert window.start == 60_000 + PERIOD

    def test_satellite_id_carried(self):
        assert next_window(humsat(), 0).satellite_id == 'humsat'


class TestWindowsBetween:

    def test_one_day_of_humsat(self):
        windows = windows_between(humsat(), 0, DAY)
        assert len(windows) == 15
        assert windows[0].start == 0
        assert windows[-1].start == 14 * PERIOD

    def test_windows_are_disjoint_and_ordered(self):
        windows = windows_between(humsat(777), 0, 3 * DAY)
        for a, b in zip(windows, windows[1:]):
            assert a.end <= b.start
            assert b.start - a.start == PERIOD

    def test_zero_length_range_inside_window(self):
        windows = windows_between(humsat(60_000), 100_000, 100_000)
        assert len(windows) == 1

    def test_zero_length_range_outside_window(self):
        assert windows_between(humsat(60_000), 400_000, 400_000) == []

    def test_range_before_first_passage(self):
        windows = windows_between(humsat(0), -6_000_000, 0)
        assert [w.start for w in windows] == [-PERIOD, 0]

    def test_partial_overlap_counts(self):
        windows = windows_between(humsat(0), 299_999, PERIOD)
        assert [w.start for w in windows] == [0, PERIOD]

    def test_rejects_inverted_range(self):
        with pytest.raises(OrbitError):
            windows_between(humsat(), 10, 0)


class TestWorkedExamples:

    def test_visibility(self):
        eph = OrbitEphemeris('sat', 1_000, 6_000, 300)
        assert is_visible(eph, 1_000)
        assert not is_visible(eph, 1_300)
        assert is_visible(eph, 7_000)
        assert not is_visible(eph, 999)

    @pytest.mark.parametrize('t, expected', [
        (100, (0, 300)),
        (300, (6_000, 6_300)),
        (17_999, (18_000, 18_300)),
    ])
    def test_next_window(self, t, expected):
        window = next_window(OrbitEphemeris('sat', 0, 6_000, 300), t)
        assert (window.start, window.end) == expected

    @pytest.mark.parametrize('t_from, t_to, expected', [
        (0, 12_000, [(0, 300), (6_000, 6_300), (12_000, 12_300)]),
        (400, 5_000, []),
        (250, 260, [(0, 300)]),
    ])
    def test_windows_between(self, t_from, t_to, expected):
        windows = windows_between(OrbitEphemeris('sat', 0, 6_000, 300), t_from, t_to)
        assert [(w.start, w.end) for w in windows] == expected


def random_ephemeris(rng: np.random.Generator) -> OrbitEphemeris:
    period = int(rng.integers(2, 6_001))
    window = int(rng.integers(1, period))
    return OrbitEphemeris('sat', int(rng.integers(-50_000, 50_000)), period, window)


def clipped(windows, lo, hi):
    return [(max(w.start, lo), min(w.end, hi)) for w in windows]


class TestAgainstScan:

    def test_millisecond_scan_matches_windows(self):
        rng = np.random.default_rng(11)
        for _ in range(20):
            eph = random_ephemeris(rng)
            lo = int(rng.integers(-100_000, 100_000))
            hi = lo + 3 * eph.period

            runs = []
            start = None
            for t in range(lo, hi):
                if is_visible(eph, t):
                    if start is None:
                        start = t
                elif start is not None:
                    runs.append((start, t))
                    start = None
            if start is not None:
                runs.append((start, hi))

            assert runs == clipped(windows_between(eph, lo, hi - 1), lo, hi)

    def test_periodicity(self):
        rng = np.random.default_rng(12)
        ephemerides = [random_ephemeris(rng) for _ in range(100)]
        for _ in range(10_000):
            eph = ephemerides[int(rng.integers(0, len(ephemerides)))]
            t = int(rng.integers(-10 ** 9, 10 ** 9))
            k = int(rng.integers(-50, 51))
            assert is_visible(eph, t) == is_visible(eph, t + k * eph.period)

    def test_duty_cycle(self):
        rng = np.random.default_rng(13)
        for _ in range(200):
            eph = random_ephemeris(rng)
            n = int(rng.integers(1, 20))
            lo = int(rng.integers(-10 ** 7, 10 ** 7))
            hi = lo + n * eph.period
            visible = sum(end - start for start, end in clipped(windows_between(eph, lo, hi - 1), lo, hi))
            assert visible == n * eph.window


class TestOrbitalPeriod:

    def test_humsat_altitude(self):
        assert period_from_altitude(600) == pytest.approx(5_801.6, rel=1e-3)

    def test_sun_synchronous_altitude(self):
        assert period_from_altitude(780) == pytest.approx(6_027, rel=5e-3)

    def test_geostationary_altitude(self):
        assert period_from_altitude(35_786) == pytest.approx(86_164, rel=5e-3)
