"""
Shared pieces of the canned topologies: the ground segment from the
satellite simulator to the workstation, and the setup rows that wire it.
"""

from typing import Any, Dict, List, Optional, Tuple

from .assertions import ScriptAssertion, action, expect

HUMSAT_PERIOD_MS = 5_802_000
HUMSAT_WINDOW_MS = 300_000
UPLINK_LATENCY_MS = 5
GROUND_LATENCY_MS = 50
GATEWAY_B_PORT = 6001
MISROUTE_PORT = 6002

SATELLITE = 'sat_sim'
GATEWAY_A = 'gateway_a'
SERVER = 'server'
GATEWAY_B = 'gateway_b'
WORKSTATION = 'workstation'


def node(node_id: str, kind: str, **fields) -> Dict[str, Any]:
    return {'id': node_id, 'kind': kind, **fields}


def route(dest: str, next_hop: str, port: Optional[int] = None) -> Dict[str, Any]:
    data = {'dest': dest, 'next_hop': next_hop}
    if port is not None:
        data['port'] = port
    return data


def link(link_id: str, src: str, dst: str, **fields) -> Dict[str, Any]:
    return {'id': link_id, 'src': src, 'dst': dst, **fields}


def humsat(last_passage_ms: int, ephemeris_id: str = 'humsat', satellite_id: str = SATELLITE) -> Dict[str, Any]:
    return {
        'id': ephemeris_id,
        'satellite_id': satellite_id,
        'last_passage_ms': last_passage_ms,
        'period_ms': HUMSAT_PERIOD_MS,
        'window_ms': HUMSAT_WINDOW_MS,
    }


def vehicle(
    node_id: str,
    target: Optional[str],
    online: bool = True,
    transmit: bool = True,
    configured: bool = True,
    next_hop: str = SATELLITE,
    **fields,
) -> Dict[str, Any]:
    return node(
        node_id,
        'Vehicle',
        online=online,
        satellite_configured=configured,
        routes=[route(WORKSTATION, next_hop)],
        satcomms={
            'destination': WORKSTATION,
            'target_ephemeris': target,
            'transmit_when_possible': transmit,
        },
        **fields,
    )


def ground_segment(
    satellite_online: bool = True,
    wired: bool = False,
    server_port: int = GATEWAY_B_PORT,
) -> Tuple[List[dict], List[dict]]:
    """
    Satellite simulator → gateway A → server → gateway B → workstation.

    Unwired, only gateway A has its route and every hop but the last is
    down; the setup rows bring the rest up.
    """
    nodes = [
        node(SATELLITE, 'Satellite', online=satellite_online,
             routes=[route(WORKSTATION, GATEWAY_A)] if wired else []),
        node(GATEWAY_A, 'Gateway', routes=[route(WORKSTATION, SERVER)]),
        node(SERVER, 'Server', routes=[route(WORKSTATION, GATEWAY_B, server_port)] if wired else []),
        node(GATEWAY_B, 'Gateway', listen_ports=[GATEWAY_B_PORT],
             routes=[route(WORKSTATION, WORKSTATION)] if wired else []),
        node(WORKSTATION, 'Workstation'),
    ]
    links = [
        link('sim-gateway', SATELLITE, GATEWAY_A, latency_ms=GROUND_LATENCY_MS, up=wired),
        link('internet-a', GATEWAY_A, SERVER, latency_ms=GROUND_LATENCY_MS, up=wired),
        link('internet-b', SERVER, GATEWAY_B, latency_ms=GROUND_LATENCY_MS, up=wired),
        link('gsm', GATEWAY_B, WORKSTATION, latency_ms=GROUND_LATENCY_MS, up=True),
    ]
    return nodes, links


def setup_steps(server_route: bool = True, server_port: int = GATEWAY_B_PORT) -> List[ScriptAssertion]:
    """The five network setup rows, one second apart from t=1 s."""
    server_action = (
        action('set_route', node=SERVER, dest=WORKSTATION, next_hop=GATEWAY_B, port=server_port)
        if server_route else action('noop', note='server firewall left unconfigured')
    )
    return [
        ScriptAssertion(
            'Configure simulator network interface', 1_000,
            expect('link_up', link='sim-gateway'),
            actions=(action('set_link', link='sim-gateway', up=True),),
            row='setup 1',
        ),
        ScriptAssertion(
            'Configure simulator connections', 2_000,
            expect('route_present', node=SATELLITE, dest=WORKSTATION),
            actions=(action('set_route', node=SATELLITE, dest=WORKSTATION, next_hop=GATEWAY_A),),
            row='setup 2',
        ),
        ScriptAssertion(
            'Connect gateways to the internet', 3_000,
            expect('reaches', src=GATEWAY_A, dest=WORKSTATION, via=SERVER),
            actions=(
                action('set_link', link='internet-a', up=True),
                action('set_link', link='internet-b', up=True),
            ),
            row='setup 3',
        ),
        ScriptAssertion(
            'Route incoming communication (client)', 4_000,
            expect('route_present', node=GATEWAY_B, dest=WORKSTATION),
            actions=(action('set_route', node=GATEWAY_B, dest=WORKSTATION, next_hop=WORKSTATION),),
            row='setup 4',
        ),
        ScriptAssertion(
            'Route incoming communication (server)', 5_000,
            expect('reaches', src=SERVER, dest=WORKSTATION),
            actions=(server_action,),
            expected='pass' if server_route else 'fail',
            row='setup 5',
        ),
    ]
