# Link package
from .profiles import (
    FRAGMENT_HEADER_BYTES,
    HUMSAT,
    PROFILE_REGISTRY,
    ProfileError,
    RadioProfile,
    builtin_profiles,
    get_profile,
)
from .budget import (
    EnergyLedger,
    accrue_energy,
    burst_duration,
    copy_duration,
    delivery_probability,
    feed_time,
    frame_airtime,
    pass_capacity,
    pass_goodput,
)

__all__ = [
    'FRAGMENT_HEADER_BYTES',
    'HUMSAT',
    'PROFILE_REGISTRY',
    'ProfileError',
    'RadioProfile',
    'builtin_profiles',
    'get_profile',
    'EnergyLedger',
    'accrue_energy',
    'burst_duration',
    'copy_duration',
    'delivery_probability',
    'feed_time',
    'frame_airtime',
    'pass_capacity',
    'pass_goodput',
]
