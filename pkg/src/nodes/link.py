"""
Directed links between nodes.
"""

from dataclasses import dataclass, field
from typing import Optional, Tuple

from ..orbit import OrbitEphemeris, is_visible


@dataclass
class Link:
    """
    Runtime state of one directed link.

    The epoch increases each time the link goes down, so a copy launched
    under an older epoch is known to have been cut off.
    """

    id: str
    src: str
    dst: str
    latency_ms: int
    per_copy_loss: float = 0.0
    up: bool = True
    gate: Optional[OrbitEphemeris] = None
    max_range_m: Optional[float] = None
    schedule: Tuple[Tuple[int, bool], ...] = field(default_factory=tuple)
    epoch: int = 0

    def available(self, now: int) -> bool:
        """Up and, if gated by an ephemeris, inside a window."""
        if not self.up:
            return False
        return self.gate is None or is_visible(self.gate, now)

    def set_up(self, up: bool) -> bool:
        """Change state; returns True if it changed."""
        if up == self.up:
            return False
        self.up = up
        if not up:
            self.epoch += 1
        return True
