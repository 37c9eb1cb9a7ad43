"""
Vehicle node: SatComms store queue, radio state and flight state.
"""

import logging
from dataclasses import replace
from typing import TYPE_CHECKING, Any, Dict, List, Optional, Sequence

from ..link import EnergyLedger, RadioProfile, accrue_energy, burst_duration
from ..protocol import MSG_ID_MODULUS, Fragment, encode_frame, fragment_datum
from .base_node import BaseNode, Drop, Effect, Envelope, NetworkView, NodeKind
from .queue import KindFiltered, NodeError, Priority, QueueFull, QueuedDatum, StoreQueue
from .routing import RoutingTable
from .satcomms import Burst, SatCommsConfig, SatCommsView, TickResult, satcomms_tick

if TYPE_CHECKING:
    from ..sim.kinematics import AirframeLimits, VehicleState

logger = logging.getLogger(__name__)


class VehicleNode(BaseNode):
    """UAV with a SatComms task; optionally relays frames for others."""

    KIND = NodeKind.VEHICLE

    def __init__(
        self,
        node_id: str,
        address: int,
        radio: RadioProfile,
        satcomms: Optional[SatCommsConfig] = None,
        routes: Optional[RoutingTable] = None,
        listen_ports: Sequence[int] = (),
        online: bool = True,
        relay: bool = False,
        satellite_configured: bool = True,
        motion: Optional['VehicleState'] = None,
        airframe: Optional['AirframeLimits'] = None,
        store_capacity_frames: Optional[int] = None,
    ):
        super().__init__(node_id, address, routes, listen_ports, online, store_capacity_frames)
        self.radio = radio
        self.satcomms = satcomms
        self.relay = relay
        self.queue = StoreQueue(satcomms.queue_capacity_bytes if satcomms else 1)
        self.transmit_enabled = bool(satcomms and satcomms.transmit_when_possible)
        self.satellite_configured = satellite_configured
        self.busy_until = 0
        self.ledger = EnergyLedger()
        self.online_since: Optional[int] = 0 if online else None
        self.pending_tick: Optional[int] = None
        self.current: Optional[tuple] = None
        self.motion = motion
        self.airframe = airframe
        self.plan_synced = False
        self.landed = False
        self.endurance_violation_at: Optional[int] = None
        self.battery_depleted_at: Optional[int] = None
        self._next_msg_id = 0

    @property
    def queued_bytes(self) -> int:
        return self.queue.stored_bytes

    @property
    def quantum_ms(self) -> int:
        return burst_duration(self.radio)

    def power_up(self, now: int):
        if not self.online:
            self.online = True
            self.online_since = now

    def allocate_msg_id(self) -> int:
        msg_id = self._next_msg_id
        self._next_msg_id = (self._next_msg_id + 1) % MSG_ID_MODULUS
        return msg_id

    def enqueue(
        self,
        datum_id: int,
        kind: str,
        data: bytes,
        priority: Priority,
        now: int,
    ) -> QueuedDatum:
        """
        Fragment a datum and append it to the store queue.

        Raises:
            NodeError: If the vehicle has no SatComms task
            KindFiltered: If the kind is not accepted
            QueueFull: If the datum does not fit
            DatumTooLarge: If the datum needs more than 255 fragments
        """
        if self.satcomms is None:
            raise NodeError(f"{self.id} has no SatComms task")
        if not self.satcomms.accepts(kind):
            raise KindFiltered(f"{self.id} does not accept {kind!r}")
        if not self.queue.can_accept(len(data)):
            raise QueueFull(
                f"{self.id}: datum {datum_id} needs {len(data)} B, "
                f"{self.queue.capacity_bytes - self.queue.stored_bytes} B free"
            )

        msg_id = self.allocate_msg_id()
        fragments = fragment_datum(self.address, msg_id, data, self.radio.frame_bytes)
        datum = QueuedDatum(datum_id, kind, priority, now, msg_id, len(data))
        for fragment in fragments:
            datum.pending.append((fragment, encode_frame(fragment, self.radio.frame_bytes)))
        self.queue.push(datum)
        return datum

    def satcomms_tick(self, now: int, view: SatCommsView) -> TickResult:
        return satcomms_tick(self, now, view)

    def begin_burst(self, burst: Burst, datum: QueuedDatum, fragment: Fragment, wire: bytes):
        self.busy_until = burst.end
        self.ledger = accrue_energy(self.ledger, self.radio, burst.end - burst.start, 0)
        self.drain_battery(self.radio.tx_power_w * (burst.end - burst.start) / 1000)
        self.current = (burst, datum, fragment, wire)

    @property
    def battery_j(self) -> Optional[float]:
        return self.motion.battery_j if self.motion is not None else None

    def can_power(self, tx_ms: int, now: int) -> bool:
        """
        Whether the battery covers tx_ms of transmission.

        Untracked batteries always do. The first refusal is recorded.
        """
        battery = self.battery_j
        if battery is None or battery >= self.radio.tx_power_w * tx_ms / 1000:
            return True
        if self.battery_depleted_at is None:
            self.battery_depleted_at = now
            logger.warning("%s: battery depleted at t=%d (%.1f J left)", self.id, now, battery)
        return False

    def drain_battery(self, joules: float):
        battery = self.battery_j
        if battery is not None:
            self.motion = replace(self.motion, battery_j=max(0.0, battery - joules))

    def interrupt_burst(self, link_id: str, now: int) -> Optional[Burst]:
        """
        Return the fragment of a burst cut off by its link going down to the
        head of the queue. The radio stays busy until the burst would have ended.
        """
        if self.current is None:
            return None
        burst, datum, fragment, wire = self.current
        if burst.link_id != link_id or burst.end <= now:
            return None
        self.queue.requeue(datum, fragment, wire)
        self.current = None
        logger.debug("%s: burst for %s interrupted at t=%d", self.id, burst.key, now)
        return burst

    def finalize_energy(self, run_end: int):
        """Book all non-transmitting attached time as standby."""
        if self.online_since is None:
            return
        idle = max(0, run_end - self.online_since - self.ledger.attached_time_ms)
        self.ledger = accrue_energy(self.ledger, self.radio, 0, idle)

    def on_receive(self, envelope: Envelope, now: int, view: NetworkView) -> List[Effect]:
        if not self.relay:
            return [Drop(envelope, 'not_relay')]
        if self.validate(envelope) is None:
            return [Drop(envelope, 'decode_error')]
        return [self.route_envelope(envelope, now, view)]

    def status(self) -> dict:
        data: Dict[str, Any] = {
            'online': self.online,
            'queued_fragments': self.queue.fragment_count,
            'queued_bytes': self.queue.stored_bytes,
        }
        if self.motion is not None:
            data['position'] = [round(c, 3) for c in self.motion.position]
            data['airborne'] = self.motion.airborne
        return data


def enqueue_datum(
    node: VehicleNode,
    datum_id: int,
    kind: str,
    data: bytes,
    priority: Priority = Priority.NORMAL,
    now: int = 0,
) -> int:
    """Queue a datum on a vehicle; returns its id."""
    node.enqueue(datum_id, kind, data, priority, now)
    return datum_id
