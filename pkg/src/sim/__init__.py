# Simulation package
from .events import Event, EventKind
from .eventlog import (
    SCHEMA_VERSION,
    EventLog,
    EventLogError,
    Record,
    SimulationAborted,
    canonical_json,
    make_record,
    parse_log,
    read_log,
    write_records,
)
from .kinematics import X8, AirframeLimits, VehicleState, flight_time, step_vehicle
from .rng import ALGORITHM, make_stream, random_payload, sample_loss, stream_key
from .ledger import DatumEntry, DatumLedger
from .metrics import COUNTERS, Metrics, NodeCounters, PassRow, reduce_records
from .script import ACTION_PARAMS, PREDICATE_PARAMS, run_step
from .scenario import ConfigError, ScenarioConfig, load_config
from .engine import Engine, frame_key, run

__all__ = [
    'Event',
    'EventKind',
    'SCHEMA_VERSION',
    'EventLog',
    'EventLogError',
    'Record',
    'SimulationAborted',
    'canonical_json',
    'make_record',
    'parse_log',
    'read_log',
    'write_records',
    'X8',
    'AirframeLimits',
    'VehicleState',
    'flight_time',
    'step_vehicle',
    'ALGORITHM',
    'make_stream',
    'random_payload',
    'sample_loss',
    'stream_key',
    'DatumEntry',
    'DatumLedger',
    'COUNTERS',
    'Metrics',
    'NodeCounters',
    'PassRow',
    'reduce_records',
    'ACTION_PARAMS',
    'PREDICATE_PARAMS',
    'run_step',
    'ConfigError',
    'ScenarioConfig',
    'load_config',
    'Engine',
    'frame_key',
    'run',
]
