# Scenarios package
from .assertions import ScriptAssertion, action, expect
from .workbench import build_workbench
from .dry_run import build_dry_run
from .field_trial import build_field_trial
from .multi_vehicle import build_multi_vehicle

__all__ = [
    'ScriptAssertion',
    'action',
    'expect',
    'build_workbench',
    'build_dry_run',
    'build_field_trial',
    'build_multi_vehicle',
    'SCENARIO_REGISTRY',
    'get_scenario',
    'list_scenarios',
]

# Registry of canned scenarios
SCENARIO_REGISTRY = {
    'workbench': lambda: build_workbench(),
    'dry_run': lambda: build_dry_run(),
    'dry_run_misroute': lambda: build_dry_run(retry_after_misroute=False),
    'dry_run_no_server_route': lambda: build_dry_run(server_route=False),
    'field_trial': lambda: build_field_trial(),
    'field_trial_wind': lambda: build_field_trial(wind_outage=True),
    'multi_vehicle_2': lambda: build_multi_vehicle(2),
    'multi_vehicle_3': lambda: build_multi_vehicle(3),
    'multi_vehicle_4': lambda: build_multi_vehicle(4),
    'multi_vehicle_relay': lambda: build_multi_vehicle(4, relay=True, satellite_enabled=False),
}


def get_scenario(name: str):
    """Build a canned scenario by name."""
    builder = SCENARIO_REGISTRY.get(name)
    if builder:
        return builder()
    raise ValueError(f"Unknown scenario: {name}")


def list_scenarios():
    """List canned scenarios as (name, description) pairs."""
    return [(name, builder().document.get('description', '')) for name, builder in SCENARIO_REGISTRY.items()]
