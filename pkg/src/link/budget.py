"""
Link arithmetic over radio profiles: airtime, per-pass capacity and
goodput, delivery probability under redundancy, and energy accounting.

Durations are integer milliseconds.
"""

from dataclasses import dataclass

from .profiles import RadioProfile


def _ceil_div(a: int, b: int) -> int:
    return -(-a // b)


def frame_airtime(profile: RadioProfile) -> int:
    """Air time of one copy of one frame, rounded up to whole ms."""
    return _ceil_div(profile.frame_bytes * 8 * 1000, profile.air_rate_bps)


def feed_time(profile: RadioProfile) -> int:
    """Time to push one frame over the host-to-radio serial link."""
    return _ceil_div(profile.frame_bytes * 8 * 1000, profile.feed_rate_bps)


def copy_duration(profile: RadioProfile) -> int:
    """Effective time per copy: the slower of the air and feed paths."""
    return max(frame_airtime(profile), feed_time(profile))


def burst_duration(profile: RadioProfile) -> int:
    """Time to send every redundant copy of one fragment back-to-back."""
    return copy_duration(profile) * profile.redundancy


def pass_capacity(profile: RadioProfile, window_ms: int) -> int:
    """Raw channel bytes that fit in a window, copies included."""
    if window_ms < 0:
        raise ValueError(f"window must be >= 0, got {window_ms}")
    return window_ms * profile.air_rate_bps // 8000


def pass_goodput(profile: RadioProfile, window_ms: int, payload_per_frame: int) -> int:
    """
    User payload bytes one saturated window delivers.

    Only whole bursts count; a burst that would not finish is never started.

    Raises:
        ValueError: If payload_per_frame does not fit a frame
    """
    if not 0 <= payload_per_frame <= profile.payload_capacity:
        raise ValueError(
            f"payload_per_frame must be in [0, {profile.payload_capacity}], "
            f"got {payload_per_frame}"
        )
    if window_ms < 0:
        raise ValueError(f"window must be >= 0, got {window_ms}")
    return (window_ms // burst_duration(profile)) * payload_per_frame


def delivery_probability(profile: RadioProfile) -> float:
    """Probability that at least one redundant copy survives."""
    return 1.0 - profile.per_copy_loss ** profile.redundancy


@dataclass(frozen=True)
class EnergyLedger:
    """Accumulated radio time and energy for one node."""

    tx_time_ms: int = 0
    standby_time_ms: int = 0
    joules: float = 0.0

    @property
    def attached_time_ms(self) -> int:
        return self.tx_time_ms + self.standby_time_ms

    def to_dict(self) -> dict:
        return {
            'tx_time_ms': self.tx_time_ms,
            'standby_time_ms': self.standby_time_ms,
            'joules': self.joules,
        }


def accrue_energy(
    ledger: EnergyLedger,
    profile: RadioProfile,
    tx_ms: int,
    idle_ms: int,
) -> EnergyLedger:
    """
    Advance a ledger by some transmit and idle time.

    Raises:
        ValueError: On negative durations
    """
    if tx_ms < 0 or idle_ms < 0:
        raise ValueError("durations must be >= 0")
    if tx_ms == 0 and idle_ms == 0:
        return ledger
    return EnergyLedger(
        tx_time_ms=ledger.tx_time_ms + tx_ms,
        standby_time_ms=ledger.standby_time_ms + idle_ms,
        joules=ledger.joules
        + profile.tx_power_w * tx_ms / 1000
        + profile.standby_power_w * idle_ms / 1000,
    )
