"""
Scripted steps: operator actions and the predicates that check them.

Each step applies its actions, then evaluates one predicate against live
engine state. A step with `on_fail` actions gets one retry after them.
"""

import logging
from dataclasses import replace
from typing import TYPE_CHECKING, Any, Callable, Dict, List, Tuple

from ..nodes import Route, VehicleNode, slots_disjoint, walk_path

if TYPE_CHECKING:
    from .engine import Engine

logger = logging.getLogger(__name__)

# name → (required params, optional params); each param maps to the kind of
# id it references, or None for plain values.
ParamTable = Dict[str, Tuple[Dict[str, Any], Dict[str, Any]]]

ACTION_PARAMS: ParamTable = {
    'set_link': ({'link': 'link', 'up': None}, {}),
    'set_route': ({'node': 'node', 'dest': 'node', 'next_hop': 'node'}, {'port': None}),
    'remove_route': ({'node': 'node', 'dest': 'node'}, {}),
    'power_up': ({'node': 'node'}, {}),
    'start_node': ({'node': 'node'}, {}),
    'configure_satellite': ({'node': 'node'}, {'last_passage_ms': None, 'ephemeris': 'ephemeris'}),
    'enable_transmission': ({'node': 'node'}, {'enabled': None}),
    'launch': ({'node': 'node'}, {'altitude_m': None}),
    'upload_plan': ({'node': 'node', 'waypoints': None}, {}),
    'start_plan': ({'node': 'node'}, {}),
    'land': ({'node': 'node'}, {}),
    'noop': ({}, {'note': None}),
}

PREDICATE_PARAMS: ParamTable = {
    'always': ({}, {}),
    'link_up': ({'link': 'link'}, {}),
    'link_range': ({'link': 'link', 'distance_m': None}, {}),
    'route_present': ({'node': 'node', 'dest': 'node'}, {}),
    'reaches': ({'src': 'node', 'dest': 'node'}, {'via': 'node'}),
    'node_online': ({'node': 'node'}, {}),
    'satcomms_active': ({'node': 'node'}, {}),
    'satellite_configured': ({'node': 'node'}, {}),
    'transmit_enabled': ({'node': 'node'}, {}),
    'counter_at_least': ({'node': 'node', 'counter': None, 'value': None}, {}),
    'all_delivered': ({'node': 'node'}, {}),
    'blob_reconstructed': ({'blob': 'blob'}, {}),
    'airborne': ({'node': 'node'}, {}),
    'landed': ({'node': 'node'}, {}),
    'plan_synced': ({'node': 'node'}, {}),
    'plan_executing': ({'node': 'node'}, {}),
    'loiter_transmitting': ({'node': 'node'}, {}),
    'pass_raw_bytes': ({'node': 'node', 'expected': None, 'tolerance': None}, {'ephemeris': 'ephemeris'}),
    'slots_disjoint': ({'ephemeris': 'ephemeris'}, {}),
    'goodput_balanced': ({'nodes': 'node', 'tolerance': None}, {}),
}

VEHICLE_ONLY = frozenset({
    'configure_satellite',
    'enable_transmission',
    'launch',
    'upload_plan',
    'start_plan',
    'land',
    'satellite_configured',
    'transmit_enabled',
    'all_delivered',
    'airborne',
    'landed',
    'plan_synced',
    'plan_executing',
    'loiter_transmitting',
    'pass_raw_bytes',
})

DEFAULT_LAUNCH_ALTITUDE_M = 100.0


class StepContext:
    """Notes collected while one step runs."""

    def __init__(self, engine: 'Engine'):
        self.engine = engine
        self.notes: List[str] = []

    def note(self, message: str):
        self.notes.append(message)
        logger.info("t=%d %s", self.engine.now, message)


def _vehicle(ctx: StepContext, node_id: str) -> VehicleNode:
    node = ctx.engine.nodes[node_id]
    if not isinstance(node, VehicleNode):
        raise TypeError(f"{node_id} is not a vehicle")
    return node


# Actions: each returns True on success.

def _set_link(ctx, a):
    ctx.engine.change_link(a['link'], a['up'])
    return True


def _set_route(ctx, a):
    node = ctx.engine.nodes[a['node']]
    node.set_route(Route(a['dest'], a['next_hop'], a.get('port')))
    ctx.engine.flush_node(node.id)
    ctx.engine.wake(node.id)
    return True


def _remove_route(ctx, a):
    return ctx.engine.nodes[a['node']].routes.remove(a['dest'])


def _power_up(ctx, a):
    node = ctx.engine.nodes[a['node']]
    if isinstance(node, VehicleNode):
        node.power_up(ctx.engine.now)
    else:
        node.online = True
    ctx.engine.flush_node(node.id)
    ctx.engine.wake(node.id)
    return True


def _start_node(ctx, a):
    """Bring a node online; a forwarding path into a closed port crashes it."""
    engine = ctx.engine
    node = engine.nodes[a['node']]
    tables = {n.id: n.routes for n in engine.nodes.values()}
    for dest in node.routes.destinations():
        hops, _ = walk_path(tables, node.id, dest)
        for at, route in hops:
            nxt = engine.nodes.get(route.next_hop)
            if nxt is not None and not nxt.listens_on(route.port):
                node.online = False
                ctx.note(
                    f"{node.id} crashed on start: {at} routes {dest} to port {route.port}, "
                    f"not open on {nxt.id}"
                )
                return False
    node.online = True
    engine.flush_node(node.id)
    engine.wake(node.id)
    return True


def _configure_satellite(ctx, a):
    node = _vehicle(ctx, a['node'])
    node.satellite_configured = True
    eph_id = a.get('ephemeris') or (node.satcomms.target_ephemeris if node.satcomms else None)
    if 'last_passage_ms' in a and eph_id is not None:
        ctx.engine.reconfigure_ephemeris(eph_id, a['last_passage_ms'])
    if not node.transmit_enabled:
        logger.warning("%s: satellite configured but the send option is off", node.id)
        ctx.note(f"{node.id}: send option is off")
    ctx.engine.wake(node.id)
    return True


def _enable_transmission(ctx, a):
    node = _vehicle(ctx, a['node'])
    node.transmit_enabled = bool(a.get('enabled', True))
    ctx.engine.wake(node.id)
    return True


def _launch(ctx, a):
    node = _vehicle(ctx, a['node'])
    if node.motion.airborne:
        ctx.note(f"{node.id} already airborne")
        return False
    x, y, z = node.motion.position
    default = max(z, DEFAULT_LAUNCH_ALTITUDE_M)
    if node.airframe is not None:
        default = min(default, node.airframe.max_altitude)
    altitude = a.get('altitude_m', default)
    node.motion = replace(
        node.motion,
        position=(x, y, float(altitude)),
        airborne=True,
        airborne_since=ctx.engine.now,
        executing=False,
    )
    node.landed = False
    return True


def _upload_plan(ctx, a):
    node = _vehicle(ctx, a['node'])
    node.motion = node.motion.with_plan(a['waypoints'])
    node.plan_synced = True
    return True


def _start_plan(ctx, a):
    node = _vehicle(ctx, a['node'])
    if not node.plan_synced or not node.motion.airborne:
        ctx.note(f"{node.id}: no synced plan or not airborne")
        return False
    node.motion = replace(node.motion, executing=True)
    return True


def _land(ctx, a):
    node = _vehicle(ctx, a['node'])
    x, y, _ = node.motion.position
    node.motion = replace(
        node.motion, position=(x, y, 0.0), airborne=False, executing=False, airborne_since=None
    )
    node.landed = True
    return True


def _noop(ctx, a):
    if 'note' in a:
        ctx.note(a['note'])
    return True


ACTIONS: Dict[str, Callable[[StepContext, dict], bool]] = {
    'set_link': _set_link,
    'set_route': _set_route,
    'remove_route': _remove_route,
    'power_up': _power_up,
    'start_node': _start_node,
    'configure_satellite': _configure_satellite,
    'enable_transmission': _enable_transmission,
    'launch': _launch,
    'upload_plan': _upload_plan,
    'start_plan': _start_plan,
    'land': _land,
    'noop': _noop,
}


# Predicates

def _reaches(engine, p) -> bool:
    """Route walk over links that are up; ports are not checked."""
    target = p.get('via', p['dest'])
    if p['src'] == target:
        return True
    tables = {n.id: n.routes for n in engine.nodes.values()}
    hops, _ = walk_path(tables, p['src'], p['dest'])
    for at, route in hops:
        link = engine.link_between(at, route.next_hop)
        if link is None or not link.up:
            return False
        if route.next_hop == target:
            return True
    return False


def _link_range(engine, p) -> bool:
    link = engine.links[p['link']]
    return link.up and link.max_range_m is not None and link.max_range_m >= p['distance_m']


def _all_delivered(engine, p) -> bool:
    entries = engine.ledger.entries_for(p['node'])
    return bool(entries) and all(e.delivered and e.match for e in entries)


def _loiter_transmitting(engine, p) -> bool:
    node = engine.nodes[p['node']]
    motion = node.motion
    if not (motion.airborne and motion.plan_complete):
        return False
    if engine.metrics.counter(node.id, 'copies_sent') < 1:
        return False
    target = node.satcomms.target_ephemeris if node.satcomms else None
    if target is None:
        return True
    window = engine.last_windows.get(target)
    return window is not None and window.contains(engine.now)


def _pass_raw_bytes(engine, p) -> bool:
    node = engine.nodes[p['node']]
    eph_id = p.get('ephemeris') or (node.satcomms.target_ephemeris if node.satcomms else None)
    window = engine.last_windows.get(eph_id)
    if window is None:
        return False
    raw = engine.metrics.pass_raw_bytes(eph_id, window.start, node.id)
    return abs(raw - p['expected']) <= p['tolerance']


def _slots_disjoint(engine, p) -> bool:
    assigned = engine.assignments.get(p['ephemeris'])
    window = engine.last_windows.get(p['ephemeris'])
    if assigned is None or window is None or assigned[0] != window.start:
        return False
    slots = list(assigned[1].values())
    return bool(slots) and slots_disjoint(slots, window)


def _goodput_balanced(engine, p) -> bool:
    values = [engine.metrics.counter(n, 'bytes_goodput') for n in p['nodes']]
    return min(values) > 0 and max(values) - min(values) <= p['tolerance']


PREDICATES: Dict[str, Callable[['Engine', dict], bool]] = {
    'always': lambda e, p: True,
    'link_up': lambda e, p: e.links[p['link']].up,
    'link_range': _link_range,
    'route_present': lambda e, p: bool(e.nodes[p['node']].routes.lookup(p['dest'])),
    'reaches': _reaches,
    'node_online': lambda e, p: e.nodes[p['node']].online,
    'satcomms_active': lambda e, p: (
        e.nodes[p['node']].online and getattr(e.nodes[p['node']], 'satcomms', None) is not None
    ),
    'satellite_configured': lambda e, p: bool(getattr(e.nodes[p['node']], 'satellite_configured', False)),
    'transmit_enabled': lambda e, p: bool(getattr(e.nodes[p['node']], 'transmit_enabled', False)),
    'counter_at_least': lambda e, p: e.metrics.counter(p['node'], p['counter']) >= p['value'],
    'all_delivered': _all_delivered,
    'blob_reconstructed': lambda e, p: e.blob_reconstructed(p['blob']),
    'airborne': lambda e, p: e.nodes[p['node']].motion.airborne,
    'landed': lambda e, p: e.nodes[p['node']].landed,
    'plan_synced': lambda e, p: e.nodes[p['node']].plan_synced,
    'plan_executing': lambda e, p: e.nodes[p['node']].motion.executing,
    'loiter_transmitting': _loiter_transmitting,
    'pass_raw_bytes': _pass_raw_bytes,
    'slots_disjoint': _slots_disjoint,
    'goodput_balanced': _goodput_balanced,
}


def apply_actions(ctx: StepContext, actions: List[dict]) -> bool:
    ok = True
    for action in actions:
        params = {k: v for k, v in action.items() if k != 'type'}
        if not ACTIONS[action['type']](ctx, params):
            ok = False
    return ok


def evaluate(engine: 'Engine', expect: dict) -> bool:
    params = {k: v for k, v in expect.items() if k != 'predicate'}
    return bool(PREDICATES[expect['predicate']](engine, params))


def run_step(engine: 'Engine', step: dict) -> dict:
    """
    Execute one scripted step.

    Returns:
        Record detail: name, row, expected, result, ok, attempts, notes
    """
    ctx = StepContext(engine)
    passed = apply_actions(ctx, step['actions']) and evaluate(engine, step['expect'])
    attempts = 1
    if not passed and step['on_fail']:
        ctx.note(f"{step['name']}: retrying")
        apply_actions(ctx, step['on_fail'])
        passed = apply_actions(ctx, step['actions']) and evaluate(engine, step['expect'])
        attempts = 2

    result = 'pass' if passed else 'fail'
    return {
        'name': step['name'],
        'row': step['row'],
        'expected': step['expected'],
        'result': result,
        'ok': result == step['expected'],
        'attempts': attempts,
        'notes': ctx.notes,
    }
