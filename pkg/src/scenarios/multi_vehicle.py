"""
Several vehicles sharing one satellite uplink, optionally through a relay
vehicle emulating the satellite.
"""

from ..sim import ScenarioConfig
from .assertions import ScriptAssertion, expect
from .field_trial import build_field_trial
from .topology import (
    GATEWAY_A,
    GROUND_LATENCY_MS,
    SATELLITE,
    UPLINK_LATENCY_MS,
    WORKSTATION,
    ground_segment,
    humsat,
    link,
    node,
    route,
    vehicle,
)

PART_BYTES = 2_000
FRAME_QUANTUM_BYTES = 26
WINDOW_START_MS = 60_000
RELAY = 'uav1'
RELAY_EPHEMERIS = 'uav1-relay'


def build_multi_vehicle(n: int, relay: bool = False, satellite_enabled: bool = True) -> ScenarioConfig:
    """
    n vehicles contribute equal parts of one large blob during a shared pass.

    With relay, uav1 stops transmitting itself and stores and forwards for
    the others over an emulated pass with the same timing, with its own
    side link into the ground chain. satellite_enabled=False powers the
    satellite simulator off.

    Raises:
        ValueError: If n < 1, or relay is asked for with fewer than 2 vehicles
    """
    if n < 1:
        raise ValueError(f"need at least one vehicle, got {n}")
    if n == 1 and not relay:
        return build_field_trial()
    if relay and n < 2:
        raise ValueError("a relay needs at least one other vehicle")

    ids = [f"uav{i}" for i in range(1, n + 1)]
    sources = ids[1:] if relay else ids
    target = RELAY_EPHEMERIS if relay else 'humsat'

    ground_nodes, ground_links = ground_segment(satellite_online=satellite_enabled, wired=True)
    ephemerides = [humsat(WINDOW_START_MS)]
    nodes = []
    links = []

    if relay:
        ephemerides.append(humsat(WINDOW_START_MS, RELAY_EPHEMERIS, RELAY))
        nodes.append(node(RELAY, 'Vehicle', relay=True, routes=[route(WORKSTATION, GATEWAY_A)]))
        links.append(link('relay-side', RELAY, GATEWAY_A, latency_ms=GROUND_LATENCY_MS))

    for vehicle_id in sources:
        next_hop = RELAY if relay else SATELLITE
        nodes.append(vehicle(vehicle_id, target, next_hop=next_hop))
        links.append(link(f"uplink-{vehicle_id}", vehicle_id, next_hop, latency_ms=UPLINK_LATENCY_MS))

    window_end = WINDOW_START_MS + 300_000
    steps = [
        ScriptAssertion(
            'Slots disjoint', WINDOW_START_MS + 1_000,
            expect('slots_disjoint', ephemeris=target),
        ),
        ScriptAssertion(
            'Blob reconstruction', window_end + 5_000,
            expect('blob_reconstructed', blob='mosaic'),
        ),
        ScriptAssertion(
            'Goodput balanced', window_end + 6_000,
            expect('goodput_balanced', nodes=list(sources), tolerance=FRAME_QUANTUM_BYTES),
        ),
    ]

    suffix = '_relay' if relay else ''
    doc = {
        'name': f"multi_vehicle_{n}{suffix}",
        'description': 'vehicles sharing one pass through slot scheduling',
        'duration_ms': window_end + 10_000,
        'seed': 1,
        'ephemerides': ephemerides,
        'nodes': nodes + ground_nodes,
        'links': links + ground_links,
        'blobs': [{
            'id': 'mosaic',
            'size': PART_BYTES * len(sources),
            'kind': 'Image',
            'contributors': list(sources),
            'at_ms': 10_000,
        }],
        'script': [step.to_dict() for step in steps],
    }
    return ScenarioConfig.from_dict(doc)
