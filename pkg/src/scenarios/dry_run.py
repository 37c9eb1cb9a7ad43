"""
Communication dry run: testbed vehicle on the bench, satellite simulator,
and the full ground chain to the workstation.
"""

from ..sim import ScenarioConfig
from .assertions import ScriptAssertion, action, expect
from .topology import (
    GATEWAY_B,
    GATEWAY_B_PORT,
    MISROUTE_PORT,
    SATELLITE,
    SERVER,
    UPLINK_LATENCY_MS,
    WORKSTATION,
    ground_segment,
    humsat,
    link,
    setup_steps,
    vehicle,
)

TESTBED = 'testbed'
LAST_PASSAGE_MS = 60_000


def build_dry_run(retry_after_misroute: bool = True, server_route: bool = True) -> ScenarioConfig:
    """
    The thirteen dry-run rows.

    The server first routes to a port gateway B does not listen on, so
    starting the simulator crashes it. With retry_after_misroute the port
    is corrected and the start retried; without it the start and every
    reception row fail. server_route=False leaves the server without a
    route, so data piles up in its store.
    """
    if not retry_after_misroute:
        name = 'dry_run_misroute'
    elif not server_route:
        name = 'dry_run_no_server_route'
    else:
        name = 'dry_run'
    delivers = retry_after_misroute and server_route

    ground_nodes, ground_links = ground_segment(satellite_online=False, server_port=MISROUTE_PORT)
    testbed = vehicle(TESTBED, 'humsat', online=False, transmit=False, configured=False)
    uplink = link('uplink', TESTBED, SATELLITE, latency_ms=UPLINK_LATENCY_MS)

    recover = (
        (action('set_route', node=SERVER, dest=WORKSTATION, next_hop=GATEWAY_B, port=GATEWAY_B_PORT),)
        if retry_after_misroute else ()
    )

    steps = setup_steps(server_route=server_route, server_port=MISROUTE_PORT) + [
        ScriptAssertion(
            'Testbed power up', 6_000,
            expect('satcomms_active', node=TESTBED),
            actions=(action('power_up', node=TESTBED),),
            row='dry-run 6',
        ),
        ScriptAssertion(
            'Start simulator', 7_000,
            expect('node_online', node=SATELLITE),
            actions=(action('start_node', node=SATELLITE),),
            on_fail=recover,
            expected='pass' if retry_after_misroute else 'fail',
            row='dry-run 7',
        ),
        ScriptAssertion(
            'Configure satellite', 8_000,
            expect('satellite_configured', node=TESTBED),
            actions=(action('configure_satellite', node=TESTBED, last_passage_ms=LAST_PASSAGE_MS),),
            row='dry-run 8',
        ),
        ScriptAssertion(
            'Start transmission', 9_000,
            expect('transmit_enabled', node=TESTBED),
            actions=(action('enable_transmission', node=TESTBED),),
            row='dry-run 9',
        ),
        ScriptAssertion(
            'Check transmission', 70_000,
            expect('counter_at_least', node=TESTBED, counter='copies_sent', value=1),
            row='dry-run 10',
        ),
        ScriptAssertion(
            'Check simulator reception', 71_000,
            expect('counter_at_least', node=SATELLITE, counter='frames_received', value=1),
            expected='pass' if retry_after_misroute else 'fail',
            row='dry-run 11',
        ),
        ScriptAssertion(
            'Check workstation reception', 72_000,
            expect('counter_at_least', node=WORKSTATION, counter='frames_received', value=1),
            expected='pass' if delivers else 'fail',
            row='dry-run 12',
        ),
        ScriptAssertion(
            'Check message reconstruction', 365_000,
            expect('all_delivered', node=TESTBED),
            expected='pass' if delivers else 'fail',
            row='dry-run 13',
        ),
    ]

    doc = {
        'name': name,
        'description': 'bench vehicle through the satellite simulator and ground chain',
        'duration_ms': 370_000,
        'seed': 1,
        'ephemerides': [humsat(LAST_PASSAGE_MS)],
        'nodes': [testbed] + ground_nodes,
        'links': [uplink] + ground_links,
        'traffic': [{
            'node': TESTBED,
            'kind': 'EstimatedState',
            'size': 45,
            'start_ms': 30_000,
            'period_ms': 60_000,
            'count': 5,
        }],
        'script': [step.to_dict() for step in steps],
    }
    return ScenarioConfig.from_dict(doc)
