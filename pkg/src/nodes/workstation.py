"""
Workstation node: the command-and-control sink that reassembles datums.
"""

from typing import List, Optional, Sequence, Tuple

from ..protocol import IngestOutcome, ReassemblyStore
from .base_node import BaseNode, Drop, Effect, Envelope, Ingest, NetworkView, NodeKind
from .routing import RoutingTable


class WorkstationNode(BaseNode):
    """Reassembles frames addressed to it; relays anything else."""

    KIND = NodeKind.WORKSTATION

    def __init__(
        self,
        node_id: str,
        address: int,
        routes: Optional[RoutingTable] = None,
        listen_ports: Sequence[int] = (),
        online: bool = True,
        store_capacity_frames: Optional[int] = None,
    ):
        super().__init__(node_id, address, routes, listen_ports, online, store_capacity_frames)
        self.reassembly = ReassemblyStore()
        self.completed: List[Tuple[Tuple[int, int], bytes, int]] = []

    def on_receive(self, envelope: Envelope, now: int, view: NetworkView) -> List[Effect]:
        if envelope.destination != self.id:
            if self.validate(envelope) is None:
                return [Drop(envelope, 'decode_error')]
            return [self.route_envelope(envelope, now, view)]

        fragment = self.validate(envelope)
        if fragment is None:
            return [Drop(envelope, 'decode_error')]

        result = self.reassembly.ingest(fragment, now)
        if result.outcome == IngestOutcome.COMPLETED:
            self.completed.append((result.key, result.data, now))
        return [Ingest(envelope, fragment, result)]

    def evict(self, now: int, max_age: int) -> List[Tuple[int, int]]:
        return self.reassembly.evict_stale(now, max_age)
