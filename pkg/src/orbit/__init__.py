# Orbit package
from .ephemeris import (
    OrbitEphemeris,
    OrbitError,
    PassWindow,
    is_visible,
    next_window,
    period_from_altitude,
    windows_between,
)

__all__ = [
    'OrbitEphemeris',
    'OrbitError',
    'PassWindow',
    'is_visible',
    'next_window',
    'period_from_altitude',
    'windows_between',
]
