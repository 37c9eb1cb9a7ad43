"""Tests for radio profiles and link arithmetic."""

import pytest

from src.link import (
    HUMSAT,
    EnergyLedger,
    ProfileError,
    RadioProfile,
    accrue_energy,
    builtin_profiles,
    burst_duration,
    copy_duration,
    delivery_probability,
    feed_time,
    frame_airtime,
    get_profile,
    pass_capacity,
    pass_goodput,
)
from src.sim import make_stream, sample_loss

WINDOW = 300_000


class TestProfiles:

    def test_humsat_preset(self):
        assert HUMSAT.frame_bytes == 32
        assert HUMSAT.air_rate_bps == 1200
        assert HUMSAT.redundancy == 4
        assert HUMSAT.payload_capacity == 26

    def test_lookup_is_case_insensitive(self):
        assert get_profile('humsat') is HUMSAT

    def test_unknown_profile(self):
        with pytest.raises(ProfileError):
            get_profile('carrier_pigeon')

    def test_builtins_include_comparison_presets(self):
        assert {'HUMSAT', 'IRIDIUM_SBD', 'ARGOS', 'INMARSAT_M2M'} <= set(builtin_profiles())

    @pytest.mark.parametrize('fields', [
        {'frame_bytes': 6},
        {'air_rate_bps': 0},
        {'redundancy': 0},
        {'per_copy_loss': 1.5},
        {'tx_power_w': -1.0},
    ])
    def test_invalid_fields(self, fields):
        with pytest.raises(ProfileError):
            HUMSAT.with_overrides(**fields)

    def test_from_dict_rejects_unknown_fields(self):
        with pytest.raises(ProfileError):
            RadioProfile.from_dict('custom', {'frame_bytes': 32, 'air_rate_bps': 1200, 'bogus': 1})

    def test_from_dict_names_the_profile(self):
        profile = RadioProfile.from_dict('fast', {'frame_bytes': 64, 'air_rate_bps': 9600})
        assert profile.name == 'fast'
        assert profile.payload_capacity == 58


class TestAirtime:

    def test_humsat_copy_and_burst(self):
        assert frame_airtime(HUMSAT) == 214
        assert feed_time(HUMSAT) == 27
        assert copy_duration(HUMSAT) == 214
        assert burst_duration(HUMSAT) == 856

    def test_feed_limited_radio(self):
        fast = HUMSAT.with_overrides(air_rate_bps=19_200)
        assert frame_airtime(fast) == 14
        assert copy_duration(fast) == feed_time(fast) == 27


class TestCapacity:

    def test_humsat_pass_capacity(self):
        assert pass_capacity(HUMSAT, WINDOW) == 45_000

    def test_humsat_pass_goodput(self):
        # 350 whole bursts of 26 payload bytes
        assert pass_goodput(HUMSAT, WINDOW, 26) == 9_100

    def test_partial_burst_does_not_count(self):
        assert pass_goodput(HUMSAT, 855, 26) == 0
        assert pass_goodput(HUMSAT, 856, 26) == 26

    def test_goodput_rejects_oversized_payload(self):
        with pytest.raises(ValueError):
            pass_goodput(HUMSAT, WINDOW, 27)

    def test_negative_window(self):
        with pytest.raises(ValueError):
            pass_capacity(HUMSAT, -1)


class TestDeliveryProbability:

    def test_closed_form(self):
        lossy = HUMSAT.with_overrides(per_copy_loss=0.5)
        assert delivery_probability(lossy) == pytest.approx(0.9375)
        assert delivery_probability(HUMSAT) == 1.0

    def test_monte_carlo_agrees(self):
        rng = make_stream(3, 'monte-carlo')
        fragments = 100_000
        delivered = sum(
            not all([sample_loss(rng, 0.5) for _ in range(HUMSAT.redundancy)])
            for _ in range(fragments)
        ) / fragments
        assert delivered == pytest.approx(0.9375, abs=0.005)

    def test_sample_loss_consumes_one_draw(self):
        a = make_stream(1, 'link:uplink')
        b = make_stream(1, 'link:uplink')
        sample_loss(a, 0.0)
        b.random()
        assert a.random() == b.random()

    def test_sample_loss_rejects_bad_probability(self):
        with pytest.raises(ValueError):
            sample_loss(make_stream(0, 'x'), 1.2)


class TestEnergy:

    def test_full_pass_transmitting(self):
        ledger = accrue_energy(EnergyLedger(), HUMSAT, WINDOW, 0)
        assert ledger.joules == pytest.approx(960.0)
        assert ledger.tx_time_ms == WINDOW

    def test_standby(self):
        ledger = accrue_energy(EnergyLedger(), HUMSAT, 0, 1_000)
        assert ledger.joules == pytest.approx(0.14)
        assert ledger.attached_time_ms == 1_000

    def test_zero_time_returns_same_ledger(self):
        ledger = EnergyLedger()
        assert accrue_energy(ledger, HUMSAT, 0, 0) is ledger

    def test_negative_duration(self):
        with pytest.raises(ValueError):
            accrue_energy(EnergyLedger(), HUMSAT, -1, 0)
