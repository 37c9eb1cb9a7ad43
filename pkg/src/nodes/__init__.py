# Nodes package
from .base_node import (
    MAX_HOPS,
    BaseNode,
    Drop,
    Effect,
    Envelope,
    Forward,
    Ingest,
    NetworkView,
    NodeKind,
    Store,
)
from .link import Link
from .queue import KindFiltered, NodeError, Priority, QueuedDatum, QueueFull, StoreQueue
from .routing import (
    NO_ROUTE,
    Route,
    RoutingTable,
    find_routing_loops,
    route_next_hop,
    walk_path,
)
from .scheduler import Slot, SlotDemand, schedule_multi_vehicle, slots_disjoint
from .satcomms import Burst, SatCommsConfig, SatCommsView, TickResult, satcomms_tick
from .vehicle import VehicleNode, enqueue_datum
from .relay import GatewayNode, RelayNode, SatelliteNode, ServerNode
from .workstation import WorkstationNode

__all__ = [
    'MAX_HOPS',
    'BaseNode',
    'Drop',
    'Effect',
    'Envelope',
    'Forward',
    'Ingest',
    'NetworkView',
    'NodeKind',
    'Store',
    'Link',
    'KindFiltered',
    'NodeError',
    'Priority',
    'QueuedDatum',
    'QueueFull',
    'StoreQueue',
    'NO_ROUTE',
    'Route',
    'RoutingTable',
    'find_routing_loops',
    'route_next_hop',
    'walk_path',
    'Slot',
    'SlotDemand',
    'schedule_multi_vehicle',
    'slots_disjoint',
    'Burst',
    'SatCommsConfig',
    'SatCommsView',
    'TickResult',
    'satcomms_tick',
    'VehicleNode',
    'enqueue_datum',
    'GatewayNode',
    'RelayNode',
    'SatelliteNode',
    'ServerNode',
    'WorkstationNode',
    'NODE_REGISTRY',
    'get_node_class',
]

# Registry of node classes by kind
NODE_REGISTRY = {
    NodeKind.VEHICLE.value: VehicleNode,
    NodeKind.SATELLITE.value: SatelliteNode,
    NodeKind.GATEWAY.value: GatewayNode,
    NodeKind.SERVER.value: ServerNode,
    NodeKind.WORKSTATION.value: WorkstationNode,
}


def get_node_class(kind: str):
    """Get the node class for a kind name."""
    node_class = NODE_REGISTRY.get(kind)
    if node_class:
        return node_class
    raise ValueError(f"Unknown node kind: {kind}")
