"""
Base node class for the DTN.
All node kinds inherit from this class.
"""

import logging
from abc import ABC, abstractmethod
from dataclasses import dataclass, replace
from enum import Enum
from typing import List, Optional, Protocol, Sequence, Tuple, Union

from ..protocol import Fragment, IngestResult, ProtocolError, decode_frame
from .link import Link
from .routing import Route, RoutingTable

logger = logging.getLogger(__name__)

MAX_HOPS = 16


class NodeKind(str, Enum):
    VEHICLE = 'Vehicle'
    SATELLITE = 'Satellite'
    GATEWAY = 'Gateway'
    SERVER = 'Server'
    WORKSTATION = 'Workstation'


@dataclass(frozen=True)
class Envelope:
    """
    One frame copy in transit.

    Relays route on `destination` and never look inside `wire`
    except to validate it.
    """

    wire: bytes
    origin: str
    destination: str
    sent_at: int
    frame_bytes: int
    hops: int = 0

    def hopped(self) -> 'Envelope':
        return replace(self, hops=self.hops + 1)


@dataclass(frozen=True)
class Forward:
    envelope: Envelope
    link_id: str
    next_hop: str


@dataclass(frozen=True)
class Store:
    envelope: Envelope
    reason: str


@dataclass(frozen=True)
class Drop:
    envelope: Envelope
    reason: str


@dataclass(frozen=True)
class Ingest:
    envelope: Envelope
    fragment: Fragment
    result: IngestResult


Effect = Union[Forward, Store, Drop, Ingest]


class NetworkView(Protocol):
    """What a node may ask about the rest of the network."""

    def link_between(self, src: str, dst: str) -> Optional[Link]:
        ...

    def get_node(self, node_id: str) -> Optional['BaseNode']:
        ...


class BaseNode(ABC):
    """Abstract base class for DTN nodes."""

    # Node metadata - override in subclasses
    KIND: NodeKind = None

    def __init__(
        self,
        node_id: str,
        address: int,
        routes: Optional[RoutingTable] = None,
        listen_ports: Sequence[int] = (),
        online: bool = True,
        store_capacity_frames: Optional[int] = None,
    ):
        self.id = node_id
        self.address = address
        self.routes = routes if routes is not None else RoutingTable()
        self.listen_ports = tuple(listen_ports)
        self.online = online
        self.store_capacity_frames = store_capacity_frames
        self.store: List[Tuple[Envelope, int]] = []

    def __repr__(self):
        return f"{type(self).__name__}({self.id!r})"

    def listens_on(self, port: Optional[int]) -> bool:
        """Nodes without declared ports accept any port."""
        return port is None or not self.listen_ports or port in self.listen_ports

    @abstractmethod
    def on_receive(self, envelope: Envelope, now: int, view: NetworkView) -> List[Effect]:
        """
        Handle one arriving copy.

        Returns:
            Effects for the engine to apply
        """
        pass

    def validate(self, envelope: Envelope) -> Optional[Fragment]:
        """Decode for validation only; None if the frame is malformed."""
        try:
            return decode_frame(envelope.wire, envelope.frame_bytes)
        except ProtocolError as e:
            logger.debug("%s: bad frame from %s: %s", self.id, envelope.origin, e)
            return None

    def resolve(self, envelope: Envelope, now: int, view: NetworkView) -> Union[Forward, Drop, str]:
        """
        Decide what to do with a transit frame.

        Returns:
            Forward or Drop, or a reason string when the frame should be held
        """
        if envelope.hops >= MAX_HOPS:
            return Drop(envelope, 'ttl_expired')

        route = self.routes.lookup(envelope.destination)
        if not route:
            return 'no_route'

        next_node = view.get_node(route.next_hop)
        if next_node is None:
            return 'no_route'
        if not next_node.listens_on(route.port):
            return Drop(envelope, 'port_unreachable')

        link = view.link_between(self.id, route.next_hop)
        if link is None or not link.available(now):
            return 'link_unavailable'
        return Forward(envelope.hopped(), link.id, route.next_hop)

    def route_envelope(self, envelope: Envelope, now: int, view: NetworkView) -> Effect:
        """Forward a transit frame, or hold it in the local store."""
        outcome = self.resolve(envelope, now, view)
        if isinstance(outcome, str):
            return self.hold(envelope, now, outcome)
        return outcome

    def hold(self, envelope: Envelope, now: int, reason: str) -> Effect:
        if self.store_capacity_frames is not None and len(self.store) >= self.store_capacity_frames:
            return Drop(envelope, 'store_full')
        self.store.append((envelope, now))
        return Store(envelope, reason)

    def flush_store(self, now: int, view: NetworkView, max_age: int) -> List[Effect]:
        """
        Retry every held frame in arrival order.

        Frames held longer than max_age are dropped.
        """
        effects: List[Effect] = []
        kept = []
        for envelope, stored_at in self.store:
            if now - stored_at > max_age:
                effects.append(Drop(envelope, 'store_evicted'))
                continue
            outcome = self.resolve(envelope, now, view)
            if isinstance(outcome, str):
                kept.append((envelope, stored_at))
            else:
                effects.append(outcome)
        self.store = kept
        return effects

    def evict_store(self, now: int, max_age: int) -> List[Effect]:
        kept = [(e, t) for e, t in self.store if now - t <= max_age]
        dropped = [Drop(e, 'store_evicted') for e, t in self.store if now - t > max_age]
        self.store = kept
        return dropped

    def set_route(self, route: Route):
        self.routes.set(route)
