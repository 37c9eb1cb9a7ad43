"""
Radio profiles for satellite data services.

HUMSAT is the DTN channel; the other presets exist for the comparison
report. Figures are the top limits quoted for each service.
"""

from dataclasses import asdict, dataclass, field, fields
from typing import Any, Dict, Optional

FRAGMENT_HEADER_BYTES = 6


class ProfileError(ValueError):
    """Invalid radio profile."""


@dataclass(frozen=True)
class RadioProfile:
    """
    Per-system link constants.

    Attributes:
        name: Label
        frame_bytes: Bytes per over-the-air message
        air_rate_bps: Air data rate
        redundancy: Copies sent per fragment
        tx_power_w: Power while transmitting
        standby_power_w: Power while idle
        feed_rate_bps: Host-to-radio serial rate
        per_copy_loss: Probability a single copy is lost
        cost_per_message: Inert pricing metadata
        altitude_km: Inert orbit metadata
        reference_bytes_per_pass: Quoted per-pass volume, if any
        reference_bytes_per_day: Quoted daily volume, if any
    """

    name: str
    frame_bytes: int
    air_rate_bps: int
    redundancy: int = 1
    tx_power_w: float = 1.0
    standby_power_w: float = 0.0
    feed_rate_bps: int = 9600
    per_copy_loss: float = 0.0
    cost_per_message: Optional[float] = None
    altitude_km: Optional[float] = None
    reference_bytes_per_pass: Optional[int] = None
    reference_bytes_per_day: Optional[int] = None
    notes: str = field(default='', compare=False)

    def __post_init__(self):
        if self.frame_bytes < FRAGMENT_HEADER_BYTES + 1:
            raise ProfileError(
                f"{self.name}: frame_bytes must be >= {FRAGMENT_HEADER_BYTES + 1}, "
                f"got {self.frame_bytes}"
            )
        if self.air_rate_bps <= 0:
            raise ProfileError(f"{self.name}: air_rate_bps must be > 0")
        if self.feed_rate_bps <= 0:
            raise ProfileError(f"{self.name}: feed_rate_bps must be > 0")
        if self.redundancy < 1:
            raise ProfileError(f"{self.name}: redundancy must be >= 1")
        if not 0.0 <= self.per_copy_loss <= 1.0:
            raise ProfileError(f"{self.name}: per_copy_loss must be in [0, 1]")
        if self.tx_power_w < 0 or self.standby_power_w < 0:
            raise ProfileError(f"{self.name}: power figures must be >= 0")

    @property
    def payload_capacity(self) -> int:
        """Payload bytes per frame after the fragment header."""
        return self.frame_bytes - FRAGMENT_HEADER_BYTES

    def with_overrides(self, **overrides: Any) -> 'RadioProfile':
        """Copy of this profile with some fields replaced."""
        data = asdict(self)
        data.update(overrides)
        return RadioProfile(**data)

    def to_dict(self) -> Dict[str, Any]:
        data = asdict(self)
        data.pop('notes')
        return data

    @classmethod
    def from_dict(cls, name: str, data: Dict[str, Any]) -> 'RadioProfile':
        """
        Build a profile from a config mapping.

        Raises:
            ProfileError: On unknown fields or broken invariants
        """
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ProfileError(f"{name}: unknown profile fields {sorted(unknown)}")
        return cls(**{**data, 'name': name})


HUMSAT = RadioProfile(
    name='HUMSAT',
    frame_bytes=32,
    air_rate_bps=1200,
    redundancy=4,
    tx_power_w=3.2,
    standby_power_w=0.14,
    feed_rate_bps=9600,
    altitude_km=600,
    notes='GMSK UHF terminal; 3.2 W at 30 dBm, UART feed 9.6 kbit/s',
)

IRIDIUM_SBD = RadioProfile(
    name='IRIDIUM_SBD',
    frame_bytes=50,
    air_rate_bps=2400,
    redundancy=1,
    tx_power_w=1.0,
    cost_per_message=0.14,
    altitude_km=780,
    notes='short burst data; 50 B treated as the whole message',
)

ARGOS = RadioProfile(
    name='ARGOS',
    frame_bytes=31,
    air_rate_bps=400,
    redundancy=1,
    tx_power_w=1.0,
    altitude_km=800,
    reference_bytes_per_pass=3100,
    reference_bytes_per_day=10000,
    notes='400 bit/s average terminal rate',
)

INMARSAT_M2M = RadioProfile(
    name='INMARSAT_M2M',
    frame_bytes=6400,
    air_rate_bps=2400,
    redundancy=1,
    tx_power_w=9.0,
    altitude_km=35800,
    notes='data rate not published; 2400 bit/s placeholder',
)

PROFILE_REGISTRY: Dict[str, RadioProfile] = {
    p.name: p for p in (HUMSAT, IRIDIUM_SBD, ARGOS, INMARSAT_M2M)
}


def builtin_profiles() -> Dict[str, RadioProfile]:
    """Name → preset for every built-in profile."""
    return dict(PROFILE_REGISTRY)


def get_profile(name: str) -> RadioProfile:
    """Get a built-in profile by name."""
    profile = PROFILE_REGISTRY.get(name.upper())
    if profile:
        return profile
    raise ProfileError(f"Unknown radio profile: {name}")
