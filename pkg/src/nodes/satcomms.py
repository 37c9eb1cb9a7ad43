"""
SatComms task: gates the vehicle radio on satellite visibility and feeds
it one fragment burst at a time.
"""

from dataclasses import dataclass
from typing import TYPE_CHECKING, FrozenSet, List, Optional, Protocol, Tuple

from ..link import burst_duration, copy_duration
from ..orbit import OrbitEphemeris, PassWindow, is_visible, next_window
from .base_node import Envelope
from .link import Link
from .scheduler import Slot

if TYPE_CHECKING:
    from .vehicle import VehicleNode


@dataclass(frozen=True)
class SatCommsConfig:
    """
    Attributes:
        destination: Node the data is addressed to
        target_ephemeris: Ephemeris id gating transmission (None = always)
        transmit_when_possible: Send option at start-up
        accepted_kinds: Datum kinds accepted (None = all)
        queue_capacity_bytes: Store queue limit
        retransmit_timeout_ms: Blind resend delay after a datum is fully sent
        max_retransmissions: Resends per datum
    """

    destination: str
    target_ephemeris: Optional[str] = None
    transmit_when_possible: bool = True
    accepted_kinds: Optional[FrozenSet[str]] = None
    queue_capacity_bytes: int = 65536
    retransmit_timeout_ms: Optional[int] = None
    max_retransmissions: int = 0

    def accepts(self, kind: str) -> bool:
        return self.accepted_kinds is None or kind in self.accepted_kinds


@dataclass(frozen=True)
class Burst:
    """All redundant copies of one fragment, sent back-to-back."""

    node_id: str
    datum_id: int
    key: Tuple[int, int]
    frag_index: int
    payload_len: int
    envelope: Envelope
    link_id: str
    next_hop: str
    start: int
    copy_ms: int
    copies: int
    datum_done: bool

    @property
    def end(self) -> int:
        return self.start + self.copy_ms * self.copies

    def copy_windows(self) -> List[Tuple[int, int]]:
        return [
            (self.start + k * self.copy_ms, self.start + (k + 1) * self.copy_ms)
            for k in range(self.copies)
        ]


@dataclass(frozen=True)
class TickResult:
    status: str
    burst: Optional[Burst] = None
    next_tick: Optional[int] = None


class SatCommsView(Protocol):
    run_end: int
    tick_ms: int

    def ephemeris(self, eph_id: str) -> OrbitEphemeris:
        ...

    def slot_for(self, node_id: str, eph_id: str, window: PassWindow) -> Optional[Slot]:
        ...

    def link_between(self, src: str, dst: str) -> Optional[Link]:
        ...


def satcomms_tick(node: 'VehicleNode', now: int, view: SatCommsView) -> TickResult:
    """
    One SatComms poll.

    Starts a burst only if every copy finishes before the window, the slot
    and the run all end.
    """
    satcomms = node.satcomms
    if not node.online or satcomms is None:
        return TickResult('inactive')
    if not node.transmit_enabled:
        return TickResult('disabled')
    if not node.satellite_configured:
        return TickResult('unconfigured')
    if node.queue.is_empty():
        return TickResult('idle')
    if now < node.busy_until:
        return TickResult('busy', next_tick=node.busy_until)

    horizon = view.run_end
    if satcomms.target_ephemeris is not None:
        eph = view.ephemeris(satcomms.target_ephemeris)
        if not is_visible(eph, now):
            return TickResult('not_visible')
        window = next_window(eph, now)
        horizon = min(horizon, window.end)

        slot = view.slot_for(node.id, eph.id, window)
        if slot is None:
            return TickResult('no_slot')
        if now < slot.start:
            return TickResult('waiting_slot', next_tick=slot.start)
        if now >= slot.end:
            return TickResult('slot_over')
        horizon = min(horizon, slot.end)

    # Untargeted vehicles are woken by the engine instead of polling.
    next_poll = None
    if satcomms.target_ephemeris is not None and now + view.tick_ms < horizon:
        next_poll = now + view.tick_ms

    route = node.routes.lookup(satcomms.destination)
    if not route:
        return TickResult('no_route', next_tick=next_poll)
    link = view.link_between(node.id, route.next_hop)
    if link is None or not link.available(now):
        return TickResult('link_down', next_tick=next_poll)

    length = burst_duration(node.radio)
    if now + length > horizon:
        return TickResult('window_short')
    if not node.can_power(length, now):
        return TickResult('battery_depleted')

    datum, fragment, wire = node.queue.pop_fragment()
    envelope = Envelope(
        wire=wire,
        origin=node.id,
        destination=satcomms.destination,
        sent_at=now,
        frame_bytes=node.radio.frame_bytes,
        hops=1,
    )
    burst = Burst(
        node_id=node.id,
        datum_id=datum.datum_id,
        key=fragment.key,
        frag_index=fragment.index,
        payload_len=fragment.header.payload_len,
        envelope=envelope,
        link_id=link.id,
        next_hop=route.next_hop,
        start=now,
        copy_ms=copy_duration(node.radio),
        copies=node.radio.redundancy,
        datum_done=not datum.pending,
    )
    node.begin_burst(burst, datum, fragment, wire)
    return TickResult('sent', burst=burst, next_tick=burst.end)
