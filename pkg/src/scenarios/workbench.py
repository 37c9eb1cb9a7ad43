"""
Workbench: one vehicle, a satellite and a workstation on lossless,
always-on links.
"""

from ..sim import ScenarioConfig
from .assertions import ScriptAssertion, expect
from .topology import GROUND_LATENCY_MS, UPLINK_LATENCY_MS, WORKSTATION, link, node, route, vehicle

# 45 B → 2 fragments, 500 B → 20 fragments
EXPECTED_FRAMES = 22
REDUNDANCY = 4


def build_workbench(per_copy_loss: float = 0.0) -> ScenarioConfig:
    """
    Bench check of fragmentation, transmission, reconstruction and
    duplicate suppression.

    per_copy_loss=1.0 is the negative control: reconstruction fails.
    """
    doc = {
        'name': 'workbench' if per_copy_loss == 0 else f"workbench_loss_{per_copy_loss:g}",
        'description': 'SatComms task against a bench satellite, no visibility gating',
        'duration_ms': 30_000,
        'seed': 1,
        'nodes': [
            vehicle('uav', None, next_hop='sat'),
            node('sat', 'Satellite', routes=[route(WORKSTATION, WORKSTATION)]),
            node(WORKSTATION, 'Workstation'),
        ],
        'links': [
            link('uplink', 'uav', 'sat', latency_ms=UPLINK_LATENCY_MS, per_copy_loss=per_copy_loss),
            link('downlink', 'sat', WORKSTATION, latency_ms=GROUND_LATENCY_MS, per_copy_loss=0.0),
        ],
        'traffic': [
            {'node': 'uav', 'kind': 'EstimatedState', 'size': 45, 'start_ms': 1_000},
            {'node': 'uav', 'kind': 'SurveyLog', 'size': 500, 'start_ms': 2_000},
        ],
        'script': [
            ScriptAssertion(
                'Fragmentation', 28_000,
                expect('counter_at_least', node='uav', counter='frames_sent', value=EXPECTED_FRAMES),
                row='workbench: fragmentation',
            ).to_dict(),
            ScriptAssertion(
                'Transmission', 28_001,
                expect('counter_at_least', node='uav', counter='copies_sent',
                       value=REDUNDANCY * EXPECTED_FRAMES),
                row='workbench: transmission',
            ).to_dict(),
            ScriptAssertion(
                'Reconstruction', 28_002,
                expect('all_delivered', node='uav'),
                row='workbench: reconstruction',
            ).to_dict(),
            ScriptAssertion(
                'Duplicate handling', 28_003,
                expect('counter_at_least', node=WORKSTATION, counter='duplicates',
                       value=(REDUNDANCY - 1) * EXPECTED_FRAMES),
                row='workbench: duplicates',
            ).to_dict(),
        ],
    }
    return ScenarioConfig.from_dict(doc)
