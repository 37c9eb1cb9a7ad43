"""
Scenario documents: loading, schema validation, cross-reference checks and
default resolution.

A scenario is one JSON document. Validation runs in two passes: the JSON
schema in docs/scenario.schema.json, then reference and range checks that a
schema cannot express. The first problem found is raised as ConfigError
with a dotted path to the offending field.
"""

import copy
import hashlib
import json
import logging
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple, Union

from jsonschema import Draft202012Validator

from ..link import PROFILE_REGISTRY, ProfileError, RadioProfile
from ..nodes import (
    NODE_REGISTRY,
    Route,
    RoutingTable,
    find_routing_loops,
)
from ..orbit import OrbitEphemeris, OrbitError
from ..utils.config import Config
from .kinematics import AirframeLimits
from .metrics import COUNTERS
from .script import ACTION_PARAMS, PREDICATE_PARAMS, VEHICLE_ONLY

logger = logging.getLogger(__name__)

SCHEMA_PATH = Path(__file__).resolve().parent.parent.parent / 'docs' / 'scenario.schema.json'

DEFAULT_PERIOD_MS = 5_802_000


class ConfigError(ValueError):
    """Invalid scenario document; `path` names the offending field."""

    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}" if path else message)
        self.path = path
        self.message = message


@lru_cache(maxsize=1)
def _validator() -> Draft202012Validator:
    schema = json.loads(SCHEMA_PATH.read_text(encoding='utf-8'))
    Draft202012Validator.check_schema(schema)
    return Draft202012Validator(schema)


def format_path(parts) -> str:
    """['nodes', 2, 'kind'] → 'nodes[2].kind'."""
    path = ''
    for part in parts:
        if isinstance(part, int):
            path += f"[{part}]"
        else:
            path += f".{part}" if path else str(part)
    return path


def _canonical(doc: Dict[str, Any]) -> str:
    return json.dumps(doc, sort_keys=True, separators=(',', ':'))


@dataclass(frozen=True)
class ScenarioConfig:
    """
    A validated scenario with every default filled in.

    The document is held as canonical JSON so the config cannot be mutated;
    `document` returns a fresh copy.
    """

    _json: str

    @property
    def document(self) -> Dict[str, Any]:
        return json.loads(self._json)

    @property
    def config_hash(self) -> str:
        return hashlib.sha256(self._json.encode()).hexdigest()

    @property
    def name(self) -> str:
        return self.document['name']

    @property
    def seed(self) -> int:
        return self.document['seed']

    @property
    def duration_ms(self) -> int:
        return self.document['duration_ms']

    def to_dict(self) -> Dict[str, Any]:
        return self.document

    def to_json(self, indent: Optional[int] = 2) -> str:
        return json.dumps(self.document, sort_keys=True, indent=indent)

    def with_overrides(self, seed: Optional[int] = None, duration_ms: Optional[int] = None) -> 'ScenarioConfig':
        doc = self.document
        if seed is not None:
            doc['seed'] = seed
        if duration_ms is not None:
            doc['duration_ms'] = duration_ms
        return ScenarioConfig.from_dict(doc)

    @classmethod
    def from_dict(cls, doc: Dict[str, Any]) -> 'ScenarioConfig':
        """
        Validate and normalize a scenario document.

        Raises:
            ConfigError: On the first schema or cross-reference problem
        """
        doc = copy.deepcopy(doc)
        errors = sorted(_validator().iter_errors(doc), key=lambda e: list(e.absolute_path))
        if errors:
            first = errors[0]
            raise ConfigError(format_path(first.absolute_path) or '(root)', first.message)

        _apply_defaults(doc)
        _check_references(doc)
        return cls(_canonical(doc))

    # Typed views

    def profiles(self) -> Dict[str, RadioProfile]:
        return resolve_profiles(self.document)

    def ephemerides(self) -> List[OrbitEphemeris]:
        return [_ephemeris(e) for e in self.document['ephemerides']]

    def airframe(self, node_id: str) -> AirframeLimits:
        for item in self.document['nodes']:
            if item['id'] == node_id:
                return AirframeLimits(**item.get('airframe', {}))
        raise KeyError(node_id)


def load_config(path: Union[str, Path]) -> ScenarioConfig:
    """
    Read a scenario file.

    Raises:
        ConfigError: If the file is unreadable, not JSON, or invalid
    """
    try:
        text = Path(path).read_text(encoding='utf-8')
    except OSError as e:
        raise ConfigError('', f"cannot read {path}: {e.strerror or e}") from e
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise ConfigError('', f"{path} line {e.lineno}: {e.msg}") from e
    if not isinstance(doc, dict):
        raise ConfigError('(root)', "scenario must be a JSON object")
    return ScenarioConfig.from_dict(doc)


def resolve_profiles(doc: Dict[str, Any]) -> Dict[str, RadioProfile]:
    profiles = dict(PROFILE_REGISTRY)
    for name, fields in doc.get('profiles', {}).items():
        try:
            profiles[name] = RadioProfile.from_dict(name, fields)
        except (ProfileError, TypeError) as e:
            raise ConfigError(f"profiles.{name}", str(e)) from e
    return profiles


def _ephemeris(item: Dict[str, Any]) -> OrbitEphemeris:
    return OrbitEphemeris(
        satellite_id=item['satellite_id'],
        last_passage=item['last_passage_ms'],
        period=item['period_ms'],
        window=item['window_ms'],
        id=item.get('id'),
    )


def _apply_defaults(doc: Dict[str, Any]):
    """Fill every optional field, taking process defaults from Config."""
    config = Config()

    doc.setdefault('description', '')
    doc.setdefault('epoch', '2017-04-01T00:00:00Z')
    doc.setdefault('seed', 0)
    doc.setdefault('tick_ms', config.tick_ms)
    doc.setdefault('capture_radius_m', config.capture_radius_m)
    doc.setdefault('profiles', {})
    for key in ('ephemerides', 'nodes', 'links', 'traffic', 'blobs', 'script'):
        doc.setdefault(key, [])

    for eph in doc['ephemerides']:
        eph.setdefault('id', eph['satellite_id'])

    if 'eviction_age_ms' not in doc:
        periods = [e['period_ms'] for e in doc['ephemerides']] or [DEFAULT_PERIOD_MS]
        doc['eviction_age_ms'] = config.eviction_periods * max(periods)

    profiles = resolve_profiles(doc)
    used = {n.get('address') for n in doc['nodes'] if 'address' in n}
    next_address = 1
    for node in doc['nodes']:
        if 'address' not in node:
            while next_address in used:
                next_address += 1
            node['address'] = next_address
            used.add(next_address)
        node.setdefault('online', True)
        node.setdefault('listen_ports', [])
        node.setdefault('routes', [])
        if node['kind'] == 'Vehicle':
            node.setdefault('radio_profile', config.default_profile)
            node.setdefault('relay', False)
            node.setdefault('satellite_configured', True)
            airframe = AirframeLimits(**node.get('airframe', {}))
            node['airframe'] = airframe.to_dict()
            vehicle = node.setdefault('vehicle', {})
            vehicle.setdefault('position', [0.0, 0.0, 0.0])
            vehicle.setdefault('speed', airframe.cruise_speed)
            vehicle.setdefault('waypoints', [])
            satcomms = node.get('satcomms')
            if satcomms is not None:
                satcomms.setdefault('target_ephemeris', None)
                satcomms.setdefault('transmit_when_possible', True)
                satcomms.setdefault('accepted_kinds', None)
                satcomms.setdefault('queue_capacity_bytes', config.queue_capacity_bytes)
                satcomms.setdefault('retransmit_timeout_ms', None)
                satcomms.setdefault('max_retransmissions', 0)

    by_id = {n['id']: n for n in doc['nodes']}
    for link in doc['links']:
        link.setdefault('latency_ms', config.hop_latency_ms)
        link.setdefault('up', True)
        link.setdefault('schedule', [])
        link.setdefault('ephemeris', None)
        link.setdefault('max_range_m', None)
        if 'per_copy_loss' not in link:
            src = by_id.get(link['src'], {})
            profile = profiles.get(src.get('radio_profile', ''))
            link['per_copy_loss'] = profile.per_copy_loss if profile else 0.0

    for gen in doc['traffic']:
        gen.setdefault('count', 1)
        gen.setdefault('period_ms', 0)
        gen.setdefault('priority', 'Normal')
    for blob in doc['blobs']:
        blob.setdefault('priority', 'Normal')
    for step in doc['script']:
        step.setdefault('on_fail', [])
        step.setdefault('expected', 'pass')
        step.setdefault('row', step['name'])


def _check_references(doc: Dict[str, Any]):
    profiles = resolve_profiles(doc)

    eph_ids = set()
    for i, item in enumerate(doc['ephemerides']):
        path = f"ephemerides[{i}]"
        if item['id'] in eph_ids:
            raise ConfigError(f"{path}.id", f"duplicate ephemeris id {item['id']!r}")
        eph_ids.add(item['id'])
        try:
            _ephemeris(item)
        except OrbitError as e:
            raise ConfigError(path, str(e)) from e

    nodes = {}
    addresses = set()
    for i, item in enumerate(doc['nodes']):
        path = f"nodes[{i}]"
        if item['id'] in nodes:
            raise ConfigError(f"{path}.id", f"duplicate node id {item['id']!r}")
        if item['kind'] not in NODE_REGISTRY:
            raise ConfigError(f"{path}.kind", f"unknown node kind {item['kind']!r}")
        if item['address'] in addresses:
            raise ConfigError(f"{path}.address", f"duplicate address {item['address']}")
        addresses.add(item['address'])
        nodes[item['id']] = item

    for i, item in enumerate(doc['nodes']):
        _check_node(item, f"nodes[{i}]", nodes, eph_ids, profiles)

    tables = {
        item['id']: RoutingTable(Route(r['dest'], r['next_hop'], r.get('port')) for r in item['routes'])
        for item in doc['nodes']
    }
    loops = find_routing_loops(tables)
    if loops:
        src, dest = loops[0]
        raise ConfigError('nodes', f"routing loop from {src!r} toward {dest!r}")

    link_ids = set()
    pairs = set()
    for i, link in enumerate(doc['links']):
        path = f"links[{i}]"
        if link['id'] in link_ids:
            raise ConfigError(f"{path}.id", f"duplicate link id {link['id']!r}")
        link_ids.add(link['id'])
        for end in ('src', 'dst'):
            if link[end] not in nodes:
                raise ConfigError(f"{path}.{end}", f"unknown node {link[end]!r}")
        if (link['src'], link['dst']) in pairs:
            raise ConfigError(path, f"second link from {link['src']!r} to {link['dst']!r}")
        pairs.add((link['src'], link['dst']))
        if link['ephemeris'] is not None and link['ephemeris'] not in eph_ids:
            raise ConfigError(f"{path}.ephemeris", f"unknown ephemeris {link['ephemeris']!r}")

    def _satcomms_vehicle(node_id: str, path: str):
        item = nodes.get(node_id)
        if item is None:
            raise ConfigError(path, f"unknown node {node_id!r}")
        if item['kind'] != 'Vehicle' or item.get('satcomms') is None:
            raise ConfigError(path, f"{node_id!r} is not a vehicle with a SatComms task")

    for i, gen in enumerate(doc['traffic']):
        _satcomms_vehicle(gen['node'], f"traffic[{i}].node")
        if gen['count'] > 1 and gen['period_ms'] <= 0:
            raise ConfigError(f"traffic[{i}].period_ms", "period_ms must be > 0 when count > 1")

    blob_ids = set()
    for i, blob in enumerate(doc['blobs']):
        if blob['id'] in blob_ids:
            raise ConfigError(f"blobs[{i}].id", f"duplicate blob id {blob['id']!r}")
        blob_ids.add(blob['id'])
        for j, node_id in enumerate(blob['contributors']):
            _satcomms_vehicle(node_id, f"blobs[{i}].contributors[{j}]")

    refs = {
        'node': set(nodes),
        'vehicle': {n for n, s in nodes.items() if s['kind'] == 'Vehicle'},
        'link': link_ids,
        'ephemeris': eph_ids,
        'blob': blob_ids,
    }
    for i, step in enumerate(doc['script']):
        path = f"script[{i}]"
        for key in ('actions', 'on_fail'):
            for j, action in enumerate(step[key]):
                _check_call(action, 'type', ACTION_PARAMS, f"{path}.{key}[{j}]", refs)
                if action['type'] == 'upload_plan':
                    _check_plan(action, f"{path}.{key}[{j}]", nodes)
                elif action['type'] == 'launch':
                    _check_launch(action, f"{path}.{key}[{j}]", nodes)
        _check_call(step['expect'], 'predicate', PREDICATE_PARAMS, f"{path}.expect", refs)
        expect = step['expect']
        if expect['predicate'] == 'counter_at_least' and expect['counter'] not in COUNTERS:
            raise ConfigError(f"{path}.expect.counter", f"unknown counter {expect['counter']!r}")


def _check_node(item, path, nodes, eph_ids, profiles):
    is_vehicle = item['kind'] == 'Vehicle'

    for field in ('satcomms', 'relay', 'vehicle', 'airframe', 'radio_profile'):
        if field in item and not is_vehicle and item[field] not in (None, False):
            raise ConfigError(f"{path}.{field}", f"only vehicles take {field!r}")

    if is_vehicle and item['radio_profile'] not in profiles:
        raise ConfigError(f"{path}.radio_profile", f"unknown radio profile {item['radio_profile']!r}")

    for j, route in enumerate(item['routes']):
        for end in ('dest', 'next_hop'):
            if route[end] not in nodes:
                raise ConfigError(f"{path}.routes[{j}].{end}", f"unknown node {route[end]!r}")

    if not is_vehicle:
        return

    satcomms = item.get('satcomms')
    if satcomms is not None:
        if satcomms['destination'] not in nodes:
            raise ConfigError(f"{path}.satcomms.destination",
                              f"unknown node {satcomms['destination']!r}")
        target = satcomms['target_ephemeris']
        if target is not None and target not in eph_ids:
            raise ConfigError(f"{path}.satcomms.target_ephemeris", f"unknown ephemeris {target!r}")

    airframe = AirframeLimits(**item['airframe'])
    if not airframe.min_speed <= airframe.cruise_speed <= airframe.max_speed:
        raise ConfigError(f"{path}.airframe", "speeds must satisfy min <= cruise <= max")
    vehicle = item['vehicle']
    if not airframe.min_speed <= vehicle['speed'] <= airframe.max_speed:
        raise ConfigError(
            f"{path}.vehicle.speed",
            f"speed {vehicle['speed']} outside [{airframe.min_speed}, {airframe.max_speed}] m/s",
        )
    points = [('position', vehicle['position'])]
    points += [(f"waypoints[{k}]", wp) for k, wp in enumerate(vehicle['waypoints'])]
    for name, point in points:
        if point[2] > airframe.max_altitude:
            raise ConfigError(
                f"{path}.vehicle.{name}",
                f"altitude {point[2]} above ceiling {airframe.max_altitude} m",
            )


def _check_call(call, key, table, path, refs):
    name = call[key]
    if name not in table:
        raise ConfigError(f"{path}.{key}", f"unknown {key} {name!r}")
    required, optional = table[name]
    for param in required:
        if param not in call:
            raise ConfigError(path, f"{name} requires {param!r}")
    for param, ref in {**required, **optional}.items():
        if param not in call or ref is None:
            continue
        values = call[param] if isinstance(call[param], list) else [call[param]]
        for value in values:
            if value not in refs[ref]:
                raise ConfigError(f"{path}.{param}", f"unknown {ref} {value!r}")
    unknown = set(call) - {key} - set(required) - set(optional)
    if unknown:
        raise ConfigError(path, f"{name} does not take {sorted(unknown)}")
    if name in VEHICLE_ONLY and call['node'] not in refs['vehicle']:
        raise ConfigError(f"{path}.node", f"{name} needs a vehicle, got {call['node']!r}")


def _check_plan(action, path, nodes):
    ceiling = nodes[action['node']]['airframe']['max_altitude']
    for k, wp in enumerate(action['waypoints']):
        if wp[2] > ceiling:
            raise ConfigError(f"{path}.waypoints[{k}]", f"altitude {wp[2]} above ceiling {ceiling} m")


def _check_launch(action, path, nodes):
    airframe = nodes[action['node']].get('airframe')
    altitude = action.get('altitude_m')
    if airframe is None or altitude is None:
        return
    ceiling = airframe['max_altitude']
    if not 0 <= altitude <= ceiling:
        raise ConfigError(f"{path}.altitude_m", f"altitude {altitude} outside [0, {ceiling}] m")


def route_table(item: Dict[str, Any]) -> RoutingTable:
    return RoutingTable(Route(r['dest'], r['next_hop'], r.get('port')) for r in item['routes'])


def blob_parts(size: int, contributors: int) -> List[Tuple[int, int]]:
    """Contiguous (offset, length) split, earlier parts one byte longer."""
    base, extra = divmod(size, contributors)
    parts = []
    offset = 0
    for i in range(contributors):
        length = base + (1 if i < extra else 0)
        parts.append((offset, length))
        offset += length
    return parts
