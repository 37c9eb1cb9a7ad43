"""
Bent-pipe relays: satellite, gateway and server.

A relay validates each frame, then forwards it toward its destination or
holds it until a route and link are available.
"""

from typing import List

from .base_node import BaseNode, Drop, Effect, Envelope, NetworkView, NodeKind


class RelayNode(BaseNode):
    """Decode-validate-forward node with a store."""

    KIND = NodeKind.GATEWAY

    def on_receive(self, envelope: Envelope, now: int, view: NetworkView) -> List[Effect]:
        if self.validate(envelope) is None:
            return [Drop(envelope, 'decode_error')]
        return [self.route_envelope(envelope, now, view)]


class SatelliteNode(RelayNode):
    KIND = NodeKind.SATELLITE


class GatewayNode(RelayNode):
    KIND = NodeKind.GATEWAY


class ServerNode(RelayNode):
    KIND = NodeKind.SERVER
