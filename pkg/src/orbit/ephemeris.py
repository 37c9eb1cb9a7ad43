"""
Periodic satellite visibility from the three-parameter pass model.

A satellite is described only by its last passage, orbital period and
communication window. All arithmetic is exact integer milliseconds and
windows are half-open [start, end).
"""

import math
from dataclasses import dataclass
from typing import List, Optional

R_EARTH_KM = 6378.137
MU_EARTH_KM3_S2 = 398600.4418


class OrbitError(ValueError):
    """Invalid ephemeris or query range."""


@dataclass(frozen=True)
class PassWindow:
    """One communication window, half-open."""

    start: int
    end: int
    satellite_id: str

    @property
    def duration(self) -> int:
        return self.end - self.start

    def contains(self, t: int) -> bool:
        return self.start <= t < self.end

    def to_dict(self) -> dict:
        return {'start': self.start, 'end': self.end, 'satellite_id': self.satellite_id}


@dataclass(frozen=True)
class OrbitEphemeris:
    """
    Reduced ephemeris: (last passage, period, window).

    Attributes:
        satellite_id: Node id of the satellite
        last_passage: Start of a known window, ms since scenario epoch
        period: Orbital period in ms
        window: Window length in ms
        id: Ephemeris id (defaults to satellite_id)
    """

    satellite_id: str
    last_passage: int
    period: int
    window: int
    id: Optional[str] = None

    def __post_init__(self):
        if self.period <= 0:
            raise OrbitError(f"period must be > 0, got {self.period}")
        if not 0 < self.window <= self.period:
            raise OrbitError(
                f"window must be in (0, period], got {self.window} for period {self.period}"
            )
        if self.id is None:
            object.__setattr__(self, 'id', self.satellite_id)

    @classmethod
    def from_altitude(
        cls,
        satellite_id: str,
        altitude_km: float,
        window_ms: int,
        last_passage_ms: int = 0,
        ephemeris_id: Optional[str] = None,
    ) -> 'OrbitEphemeris':
        """Build an ephemeris whose period is the circular-orbit period at altitude."""
        period_ms = round(period_from_altitude(altitude_km) * 1000)
        return cls(satellite_id, last_passage_ms, period_ms, window_ms, ephemeris_id)

    def phase(self, t: int) -> int:
        """Normalized phase of t in [0, period)."""
        # Python's % is non-negative for a positive modulus, which gives the
        # symmetric extension before last_passage.
        return (t - self.last_passage) % self.period

    def with_last_passage(self, last_passage: int) -> 'OrbitEphemeris':
        return OrbitEphemeris(self.satellite_id, last_passage, self.period, self.window, self.id)

    def to_dict(self) -> dict:
        return {
            'id': self.id,
            'satellite_id': self.satellite_id,
            'last_passage_ms': self.last_passage,
            'period_ms': self.period,
            'window_ms': self.window,
        }


def is_visible(eph: OrbitEphemeris, t: int) -> bool:
    """True iff t falls inside a communication window."""
    return eph.phase(t) < eph.window


def next_window(eph: OrbitEphemeris, t: int) -> PassWindow:
    """
    Earliest window whose end is after t.

    If t is inside a window, that window is returned.
    """
    cycle_start = t - eph.phase(t)
    if t < cycle_start + eph.window:
        start = cycle_start
    else:
        start = cycle_start + eph.period
    return PassWindow(start, start + eph.window, eph.satellite_id)


def windows_between(eph: OrbitEphemeris, t_from: int, t_to: int) -> List[PassWindow]:
    """
    All windows overlapping the closed range [t_from, t_to], by start.

    Raises:
        OrbitError: If t_from > t_to
    """
    if t_from > t_to:
        raise OrbitError(f"range start {t_from} is after end {t_to}")

    windows = []
    window = next_window(eph, t_from)
    while window.start <= t_to:
        windows.append(window)
        start = window.start + eph.period
        window = PassWindow(start, start + eph.window, eph.satellite_id)
    return windows


def period_from_altitude(altitude_km: float) -> float:
    """
    Circular-orbit period in seconds at the given altitude.

    Raises:
        OrbitError: If altitude is not positive
    """
    if altitude_km <= 0:
        raise OrbitError(f"altitude must be > 0 km, got {altitude_km}")
    a = R_EARTH_KM + altitude_km
    return 2 * math.pi * math.sqrt(a ** 3 / MU_EARTH_KM3_S2)
