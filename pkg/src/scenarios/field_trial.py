"""
Field trial: the real airframe flying a survey plan during one HumSat pass.
"""

from typing import Optional, Sequence

from ..sim import ScenarioConfig
from .assertions import ScriptAssertion, action, expect
from .topology import (
    SATELLITE,
    UPLINK_LATENCY_MS,
    WORKSTATION,
    ground_segment,
    humsat,
    link,
    setup_steps,
    vehicle,
)

UAV = 'uav'
WINDOW_START_MS = 600_000
LAUNCH_ALTITUDE_M = 100.0
UPLINK_RANGE_M = 5_000
RANGE_CHECK_M = 2_000

DEFAULT_SURVEY = (
    (500.0, 0.0, 120.0),
    (500.0, 500.0, 120.0),
    (0.0, 500.0, 120.0),
    (0.0, 1000.0, 120.0),
    (500.0, 1000.0, 120.0),
)

# 2 + 255 + 93 fragments: 350 bursts of 4 × 32 B fill one pass
PASS_TRAFFIC = (
    ('EstimatedState', 45, 'High'),
    ('SurveyLog', 6_630, 'Normal'),
    ('SurveyLog', 2_418, 'Normal'),
)
EXPECTED_RAW_BYTES = 45_000
RAW_TOLERANCE = 256

OUTAGE_START_MS = 720_000
OUTAGE_END_MS = 960_000
SECOND_WINDOW_MS = WINDOW_START_MS + 5_802_000


def build_field_trial(
    wind_outage: bool = False,
    waypoints: Optional[Sequence[Sequence[float]]] = None,
) -> ScenarioConfig:
    """
    The field mission script.

    wind_outage drops the uplink mid-pass: reconstruction fails on the
    first pass and completes on the next one from the vehicle's queue.

    Raises:
        ConfigError: If the survey plan is empty or out of bounds
    """
    plan = [list(wp) for wp in (DEFAULT_SURVEY if waypoints is None else waypoints)]

    ground_nodes, ground_links = ground_segment(satellite_online=True)
    uav = vehicle(UAV, 'humsat', online=False, transmit=False, configured=False)
    uplink = link('uplink', UAV, SATELLITE, latency_ms=UPLINK_LATENCY_MS, max_range_m=UPLINK_RANGE_M)
    if wind_outage:
        uplink['schedule'] = [
            {'at_ms': OUTAGE_START_MS, 'up': False},
            {'at_ms': OUTAGE_END_MS, 'up': True},
        ]

    steps = setup_steps() + [
        ScriptAssertion(
            'Power up UAV', 10_000,
            expect('node_online', node=UAV),
            actions=(action('power_up', node=UAV),),
            row='pre-flight 1',
        ),
        ScriptAssertion(
            'Check SDR communication', 11_000,
            expect('satcomms_active', node=UAV),
            row='pre-flight 2',
        ),
        ScriptAssertion(
            'Check SDR range', 12_000,
            expect('link_range', link='uplink', distance_m=RANGE_CHECK_M),
            row='pre-flight 3',
        ),
        ScriptAssertion(
            'UAV takeoff', 60_000,
            expect('airborne', node=UAV),
            actions=(action('launch', node=UAV, altitude_m=LAUNCH_ALTITUDE_M),),
            row='pre-flight 4',
        ),
        ScriptAssertion(
            'Survey plan upload', 65_000,
            expect('plan_synced', node=UAV),
            actions=(action('upload_plan', node=UAV, waypoints=plan),),
            row='flight 1',
        ),
        ScriptAssertion(
            'Configure satellite', 70_000,
            expect('satellite_configured', node=UAV),
            actions=(action('configure_satellite', node=UAV, last_passage_ms=WINDOW_START_MS),),
            row='flight 2',
        ),
        ScriptAssertion(
            'Start transmission', 75_000,
            expect('transmit_enabled', node=UAV),
            actions=(action('enable_transmission', node=UAV),),
            row='flight 3',
        ),
        ScriptAssertion(
            'Survey plan execution', 80_000,
            expect('plan_executing', node=UAV),
            actions=(action('start_plan', node=UAV),),
            row='flight 4',
        ),
        ScriptAssertion(
            'Check transmission', 610_000,
            expect('counter_at_least', node=UAV, counter='copies_sent', value=1),
            row='flight 5',
        ),
        ScriptAssertion(
            'Check simulator reception', 611_000,
            expect('counter_at_least', node=SATELLITE, counter='frames_received', value=1),
            row='flight 6',
        ),
        ScriptAssertion(
            'Check workstation reception', 612_000,
            expect('counter_at_least', node=WORKSTATION, counter='frames_received', value=1),
            row='flight 7',
        ),
        ScriptAssertion(
            'Wait for end of transmission', 850_000,
            expect('loiter_transmitting', node=UAV),
            row='flight 9',
        ),
        ScriptAssertion(
            'Check message reconstruction', 905_000,
            expect('all_delivered', node=UAV),
            expected='fail' if wind_outage else 'pass',
            row='flight 8',
        ),
        ScriptAssertion(
            'UAV land', 910_000,
            expect('landed', node=UAV),
            actions=(action('land', node=UAV),),
            row='flight 10',
        ),
    ]

    if wind_outage:
        second_end = SECOND_WINDOW_MS + 300_000
        steps += [
            ScriptAssertion(
                'Second takeoff', second_end - 402_000,
                expect('airborne', node=UAV),
                actions=(action('launch', node=UAV, altitude_m=LAUNCH_ALTITUDE_M),),
                row='flight 8 (second flight)',
            ),
            ScriptAssertion(
                'Check message reconstruction on the next pass', second_end + 3_000,
                expect('all_delivered', node=UAV),
                row='flight 8 (second flight)',
            ),
            ScriptAssertion(
                'Second landing', second_end + 8_000,
                expect('landed', node=UAV),
                actions=(action('land', node=UAV),),
                row='flight 10 (second flight)',
            ),
        ]
        duration = second_end + 18_000
    else:
        steps.append(ScriptAssertion(
            'Raw bytes sent over the pass', 906_000,
            expect('pass_raw_bytes', node=UAV, expected=EXPECTED_RAW_BYTES, tolerance=RAW_TOLERANCE),
        ))
        duration = 920_000

    doc = {
        'name': 'field_trial_wind' if wind_outage else 'field_trial',
        'description': 'survey flight with SatComms transmitting through one pass',
        'duration_ms': duration,
        'seed': 1,
        'ephemerides': [humsat(WINDOW_START_MS)],
        'nodes': [uav] + ground_nodes,
        'links': [uplink] + ground_links,
        'traffic': [
            {'node': UAV, 'kind': kind, 'size': size, 'start_ms': 90_000, 'priority': priority}
            for kind, size, priority in PASS_TRAFFIC
        ],
        'script': [step.to_dict() for step in steps],
    }
    return ScenarioConfig.from_dict(doc)
