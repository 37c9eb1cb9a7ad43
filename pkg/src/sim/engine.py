"""
Discrete-event engine.

Events run in (time, seq) order on one integer-millisecond clock. Every
processed event becomes one log record, and the metrics fold is applied to
each record as it is emitted.
"""

import heapq
import logging
from dataclasses import replace
from pathlib import Path
from typing import Any, Dict, List, Optional, Set, Tuple, Union

from ..nodes import (
    BaseNode,
    Drop,
    Effect,
    Envelope,
    Forward,
    KindFiltered,
    Link,
    Priority,
    QueueFull,
    SatCommsConfig,
    Slot,
    SlotDemand,
    Store,
    VehicleNode,
    WorkstationNode,
    get_node_class,
    schedule_multi_vehicle,
)
from ..orbit import OrbitEphemeris, PassWindow, next_window
from ..protocol import DatumTooLarge, IngestOutcome, ProtocolError, decode_frame
from .eventlog import SCHEMA_VERSION, EventLog, Record, make_record
from .events import Event, EventKind
from .kinematics import AirframeLimits, VehicleState, flight_time, step_vehicle
from .ledger import DatumLedger, DatumEntry
from .metrics import Metrics
from .rng import ALGORITHM, make_stream, random_payload, sample_loss
from .scenario import ScenarioConfig, blob_parts, route_table
from .script import run_step

logger = logging.getLogger(__name__)

Key = Tuple[int, int]


class Engine:
    """
    One simulation run over a validated scenario.

    Node, link and ledger state is built fresh from the config, so the same
    config always yields the same log.
    """

    def __init__(self, config: ScenarioConfig, log_path: Optional[Union[str, Path]] = None):
        doc = config.document
        self.config = config
        self.doc = doc
        self.seed: int = doc['seed']
        self.run_end: int = doc['duration_ms']
        self.tick_ms: int = doc['tick_ms']
        self.eviction_age: int = doc['eviction_age_ms']
        self.capture_radius: float = doc['capture_radius_m']

        self.now = 0
        self._seq = 0
        self._queue: List[Event] = []
        self._motion_t = 0
        self.log = EventLog(log_path)
        self.metrics = Metrics()
        self.ledger = DatumLedger()

        self.profiles = config.profiles()
        self.ephemerides: Dict[str, OrbitEphemeris] = {e.id: e for e in config.ephemerides()}
        self._eph_gen: Dict[str, int] = {eph_id: 0 for eph_id in self.ephemerides}
        self.nodes: Dict[str, BaseNode] = {item['id']: self._build_node(item) for item in doc['nodes']}

        self.links: Dict[str, Link] = {}
        self._link_index: Dict[Tuple[str, str], Link] = {}
        self._link_rng = {}
        for item in doc['links']:
            link = self._build_link(item)
            self.links[link.id] = link
            self._link_index[(link.src, link.dst)] = link
            self._link_rng[link.id] = make_stream(self.seed, f"link:{link.id}")

        self.assignments: Dict[str, Tuple[int, Dict[str, Slot]]] = {}
        self.last_windows: Dict[str, PassWindow] = {}
        self.blobs: Dict[str, Dict[str, Any]] = {}

        self._handlers = {
            EventKind.FRAME_ARRIVAL: self._on_frame_arrival,
            EventKind.TICK_SATCOMMS: self._on_tick,
            EventKind.WINDOW_OPEN: self._on_window_open,
            EventKind.WINDOW_CLOSE: self._on_window_close,
            EventKind.ENQUEUE_DATUM: self._on_enqueue,
            EventKind.LINK_STATE_CHANGE: self._on_link_change,
            EventKind.SCRIPT_STEP: self._on_script_step,
            EventKind.HOUSEKEEPING: self._on_housekeeping,
        }

    # Construction

    def _build_node(self, item: Dict[str, Any]) -> BaseNode:
        node_class = get_node_class(item['kind'])
        common = dict(
            node_id=item['id'],
            address=item['address'],
            routes=route_table(item),
            listen_ports=item['listen_ports'],
            online=item['online'],
            store_capacity_frames=item.get('store_capacity_frames'),
        )
        if node_class is not VehicleNode:
            return node_class(**common)

        satcomms = None
        sc = item.get('satcomms')
        if sc is not None:
            kinds = sc['accepted_kinds']
            satcomms = SatCommsConfig(
                destination=sc['destination'],
                target_ephemeris=sc['target_ephemeris'],
                transmit_when_possible=sc['transmit_when_possible'],
                accepted_kinds=frozenset(kinds) if kinds is not None else None,
                queue_capacity_bytes=sc['queue_capacity_bytes'],
                retransmit_timeout_ms=sc['retransmit_timeout_ms'],
                max_retransmissions=sc['max_retransmissions'],
            )

        v = item['vehicle']
        airborne = v.get('airborne', False)
        motion = VehicleState(
            position=tuple(float(c) for c in v['position']),
            speed=float(v['speed']),
            battery_j=v.get('battery_j'),
            airborne=airborne,
            airborne_since=0 if airborne else None,
        ).with_plan(v['waypoints'])
        motion = replace(motion, executing=v.get('executing', False))

        node = VehicleNode(
            radio=self.profiles[item['radio_profile']],
            satcomms=satcomms,
            relay=item['relay'],
            satellite_configured=item['satellite_configured'],
            motion=motion,
            airframe=AirframeLimits(**item['airframe']),
            **common,
        )
        node.plan_synced = bool(v['waypoints'])
        return node

    def _build_link(self, item: Dict[str, Any]) -> Link:
        schedule = sorted((s['at_ms'], s['up']) for s in item['schedule'])
        return Link(
            id=item['id'],
            src=item['src'],
            dst=item['dst'],
            latency_ms=item['latency_ms'],
            per_copy_loss=item['per_copy_loss'],
            up=item['up'],
            gate=self.ephemerides[item['ephemeris']] if item['ephemeris'] else None,
            max_range_m=item['max_range_m'],
            schedule=tuple(schedule),
        )

    # Views used by nodes and script predicates

    def link_between(self, src: str, dst: str) -> Optional[Link]:
        return self._link_index.get((src, dst))

    def get_node(self, node_id: str) -> Optional[BaseNode]:
        return self.nodes.get(node_id)

    def ephemeris(self, eph_id: str) -> OrbitEphemeris:
        return self.ephemerides[eph_id]

    def slot_for(self, node_id: str, eph_id: str, window: PassWindow) -> Optional[Slot]:
        assigned = self.assignments.get(eph_id)
        if assigned is not None and assigned[0] == window.start:
            return assigned[1].get(node_id)
        return Slot(node_id, window.start, window.end)

    def vehicles(self) -> List[VehicleNode]:
        return [n for n in self.nodes.values() if isinstance(n, VehicleNode)]

    # Scheduling

    def _next_seq(self) -> int:
        self._seq += 1
        return self._seq

    def schedule(self, time: int, target: Optional[str], kind: EventKind, payload: Dict[str, Any]):
        if time < self.now:
            raise RuntimeError(f"{kind.value} scheduled at t={time} before clock t={self.now}")
        heapq.heappush(self._queue, Event(time, self._next_seq(), target, kind, payload))

    def wake(self, node_id: str, at: Optional[int] = None):
        """Ask for a SatComms tick; an earlier pending tick already covers it."""
        node = self.nodes.get(node_id)
        if not isinstance(node, VehicleNode) or node.satcomms is None:
            return
        t = self.now if at is None else max(at, self.now)
        if t > self.run_end:
            return
        if node.pending_tick is not None and node.pending_tick <= t:
            return
        node.pending_tick = t
        self.schedule(t, node_id, EventKind.TICK_SATCOMMS, {})

    def _schedule_window(self, eph_id: str, t: int):
        eph = self.ephemerides[eph_id]
        window = next_window(eph, t)
        if window.start > self.run_end:
            return
        self.schedule(max(window.start, t), eph.satellite_id, EventKind.WINDOW_OPEN, {
            'ephemeris': eph_id,
            'gen': self._eph_gen[eph_id],
            'start': window.start,
            'end': window.end,
        })

    def _bootstrap(self):
        for eph_id in self.ephemerides:
            self._schedule_window(eph_id, 0)
        if not self.ephemerides and self.eviction_age <= self.run_end:
            self.schedule(self.eviction_age, None, EventKind.HOUSEKEEPING, {})

        for link in self.links.values():
            for at, up in link.schedule:
                if at <= self.run_end:
                    self.schedule(at, link.src, EventKind.LINK_STATE_CHANGE, {'link': link.id, 'up': up})

        for i, gen in enumerate(self.doc['traffic']):
            for k in range(gen['count']):
                t = gen['start_ms'] + k * gen['period_ms']
                if t > self.run_end:
                    break
                self.schedule(t, gen['node'], EventKind.ENQUEUE_DATUM, {'traffic': i, 'index': k})

        for blob in self.doc['blobs']:
            data = random_payload(make_stream(self.seed, f"blob:{blob['id']}"), blob['size'])
            parts = blob_parts(blob['size'], len(blob['contributors']))
            self.blobs[blob['id']] = {
                'data': data,
                'parts': parts,
                'kind': blob['kind'],
                'priority': blob['priority'],
                'datums': {},
            }
            if blob['at_ms'] > self.run_end:
                continue
            for j, node_id in enumerate(blob['contributors']):
                self.schedule(blob['at_ms'], node_id, EventKind.ENQUEUE_DATUM, {'blob': blob['id'], 'part': j})

        for i, step in enumerate(self.doc['script']):
            if step['at_ms'] <= self.run_end:
                self.schedule(step['at_ms'], None, EventKind.SCRIPT_STEP, {'step': i})

        for vehicle in self.vehicles():
            self.wake(vehicle.id)

    # Main loop

    def run(self) -> Tuple[Metrics, EventLog]:
        """
        Execute every event up to the run end, streaming the log.

        Raises:
            SimulationAborted: If the log sink fails
        """
        logger.info("running %s (seed %d, %d ms)", self.doc['name'], self.seed, self.run_end)
        try:
            self._emit(make_record(0, 0, None, 'RunStart', self._header()))
            self._bootstrap()

            while self._queue and self._queue[0].time <= self.run_end:
                event = heapq.heappop(self._queue)
                self._advance_motion(event.time)
                self.now = event.time
                detail = self._handlers[event.kind](event)
                if detail is not None:
                    self._emit(make_record(event.time, event.seq, event.target, event.kind.value, detail))

            self._advance_motion(self.run_end)
            self.now = self.run_end
            self._emit(make_record(self.run_end, self._next_seq(), None, 'RunEnd', self._footer()))
        finally:
            self.log.close()
        return self.metrics, self.log

    def _emit(self, record: Record):
        self.log.append(record)
        self.metrics.apply(record)

    def _advance_motion(self, t: int):
        if t <= self._motion_t:
            return
        dt = t - self._motion_t
        for vehicle in self.vehicles():
            if vehicle.motion is None:
                continue
            vehicle.motion = step_vehicle(vehicle.motion, dt, self.capture_radius)
            if (
                vehicle.endurance_violation_at is None
                and flight_time(vehicle.motion, t) > vehicle.airframe.endurance_ms
            ):
                vehicle.endurance_violation_at = t
                logger.warning("%s: endurance exceeded at t=%d", vehicle.id, t)
        self._motion_t = t

    # Handlers

    def _on_window_open(self, event: Event) -> Optional[dict]:
        p = event.payload
        eph_id = p['ephemeris']
        if p['gen'] != self._eph_gen[eph_id]:
            return None
        eph = self.ephemerides[eph_id]
        window = PassWindow(p['start'], p['end'], eph.satellite_id)
        self.last_windows[eph_id] = window

        self.schedule(window.end, event.target, EventKind.WINDOW_CLOSE, dict(p))
        following = window.start + eph.period
        if following <= self.run_end:
            self.schedule(following, event.target, EventKind.WINDOW_OPEN, {
                'ephemeris': eph_id,
                'gen': p['gen'],
                'start': following,
                'end': following + eph.window,
            })

        slots: Dict[str, Slot] = {}
        vehicles = [
            v for v in self.vehicles()
            if v.satcomms is not None and v.satcomms.target_ephemeris == eph_id
        ]
        if vehicles:
            demands = [SlotDemand(v.id, v.queued_bytes, v.quantum_ms) for v in vehicles]
            slots = schedule_multi_vehicle(demands, window)
            self.assignments[eph_id] = (window.start, slots)
            for vehicle in vehicles:
                slot = slots.get(vehicle.id)
                if slot is not None:
                    self.wake(vehicle.id, slot.start)

        targeted = {v.id for v in vehicles}
        flushed = 0
        for link in self.links.values():
            if link.gate is not None and link.gate.id == eph_id:
                flushed += self.flush_node(link.src)
                if link.src not in targeted:
                    self.wake(link.src)

        return {
            'ephemeris': eph_id,
            'start': window.start,
            'end': window.end,
            'slots': [s.to_dict() for s in slots.values()],
            'flushed': flushed,
        }

    def _on_window_close(self, event: Event) -> Optional[dict]:
        p = event.payload
        if p['gen'] != self._eph_gen[p['ephemeris']]:
            return None
        return {
            'ephemeris': p['ephemeris'],
            'start': p['start'],
            'end': p['end'],
            **self._sweep(),
        }

    def _on_housekeeping(self, event: Event) -> dict:
        following = self.now + self.eviction_age
        if following <= self.run_end:
            self.schedule(following, None, EventKind.HOUSEKEEPING, {})
        return self._sweep()

    def _sweep(self) -> dict:
        """Evict stale reassembly buffers and relay-store frames."""
        evicted = []
        store_evicted = 0
        for node in self.nodes.values():
            if isinstance(node, WorkstationNode):
                for key in node.evict(self.now, self.eviction_age):
                    self.ledger.drop(self.ledger.lookup(key), 'reassembly_evicted')
                    evicted.append(list(key))
            effects = node.evict_store(self.now, self.eviction_age)
            self._apply_effects(node, effects)
            store_evicted += len(effects)
        return {'evicted': evicted, 'store_evicted': store_evicted}

    def _on_tick(self, event: Event) -> Optional[dict]:
        node = self.nodes[event.target]
        if node.pending_tick != event.time:
            return None
        node.pending_tick = None

        result = node.satcomms_tick(self.now, self)
        detail: Dict[str, Any] = {'status': result.status}
        if node.motion is not None:
            detail['position'] = [round(c, 3) for c in node.motion.position]
        if result.burst is not None:
            detail['burst'] = self._launch_burst(node, result.burst)
        if result.next_tick is not None:
            self.wake(node.id, result.next_tick)
        return detail

    def _launch_burst(self, node: VehicleNode, burst) -> dict:
        link = self.links[burst.link_id]
        rng = self._link_rng[link.id]
        lost = []
        for k, (_, copy_end) in enumerate(burst.copy_windows()):
            if sample_loss(rng, link.per_copy_loss):
                lost.append(k)
                continue
            self.schedule(copy_end + link.latency_ms, burst.next_hop, EventKind.FRAME_ARRIVAL, {
                'envelope': burst.envelope,
                'link': link.id,
                'epoch': link.epoch,
                'copy': k,
                'from': node.id,
            })
        if burst.datum_done:
            self._schedule_retransmit(node, burst.datum_id, burst.end)
        return {
            'datum': burst.datum_id,
            'msg_id': burst.key[1],
            'frag_index': burst.frag_index,
            'payload_len': burst.payload_len,
            'start': burst.start,
            'end': burst.end,
            'copy_ms': burst.copy_ms,
            'copies': burst.copies,
            'frame_bytes': burst.envelope.frame_bytes,
            'link': link.id,
            'next_hop': burst.next_hop,
            'lost': lost,
            'frame': burst.envelope.wire.hex(),
        }

    def _schedule_retransmit(self, node: VehicleNode, datum_id: int, sent_at: int):
        sc = node.satcomms
        if sc.retransmit_timeout_ms is None or sc.max_retransmissions <= 0:
            return
        if self.ledger[datum_id].retransmissions >= sc.max_retransmissions:
            return
        t = sent_at + sc.retransmit_timeout_ms
        if t <= self.run_end:
            self.schedule(t, node.id, EventKind.ENQUEUE_DATUM, {'retransmit': datum_id})

    def _on_frame_arrival(self, event: Event) -> dict:
        p = event.payload
        envelope: Envelope = p['envelope']
        link = self.links[p['link']]
        node = self.nodes[event.target]
        detail: Dict[str, Any] = {
            'link': link.id,
            'from': p['from'],
            'copy': p['copy'],
            'origin': envelope.origin,
            'destination': envelope.destination,
            'sent_at': envelope.sent_at,
            'hops': envelope.hops,
            'frame': envelope.wire.hex(),
            'datum': self.ledger.lookup(frame_key(envelope)),
        }

        if link.epoch != p['epoch'] or not link.up:
            detail.update(outcome='lost', reason='link_down')
            return detail
        if not node.online:
            self.ledger.drop(detail['datum'], 'node_offline')
            detail.update(outcome='dropped', reason='node_offline')
            return detail

        for effect in node.on_receive(envelope, self.now, self):
            detail.update(self._apply_effect(node, effect, p['copy']))
        return detail

    def _apply_effect(self, node: BaseNode, effect: Effect, copy: Optional[int] = None) -> dict:
        if isinstance(effect, Forward):
            link = self.links[effect.link_id]
            lost = sample_loss(self._link_rng[link.id], link.per_copy_loss)
            if not lost:
                self.schedule(self.now + link.latency_ms, effect.next_hop, EventKind.FRAME_ARRIVAL, {
                    'envelope': effect.envelope,
                    'link': link.id,
                    'epoch': link.epoch,
                    'copy': copy,
                    'from': node.id,
                })
            return {'outcome': 'forwarded', 'next_hop': effect.next_hop, 'lost': lost}

        if isinstance(effect, Store):
            return {'outcome': 'stored', 'reason': effect.reason}

        if isinstance(effect, Drop):
            self.ledger.drop(self.ledger.lookup(frame_key(effect.envelope)), effect.reason)
            return {'outcome': 'dropped', 'reason': effect.reason}

        result = effect.result
        detail = {
            'outcome': result.outcome.value,
            'frag_index': effect.fragment.index,
            'payload_len': effect.fragment.header.payload_len,
        }
        if result.outcome == IngestOutcome.COMPLETED:
            entry = self.ledger.deliver(result.key, result.data, self.now)
            if entry is not None:
                detail['delivered'] = entry.id
                detail['match'] = entry.match
        return detail

    def _apply_effects(self, node: BaseNode, effects: List[Effect]):
        for effect in effects:
            self._apply_effect(node, effect)

    def _on_enqueue(self, event: Event) -> dict:
        p = event.payload
        node = self.nodes[event.target]

        if 'retransmit' in p:
            entry = self.ledger[p['retransmit']]
            entry.retransmissions += 1
            detail = {
                'datum': entry.id,
                'kind': entry.kind,
                'size': entry.size,
                'priority': entry.priority,
                'retransmit': entry.retransmissions,
            }
            detail.update(self._enqueue_entry(node, entry, retransmit=True))
            return detail

        if 'traffic' in p:
            gen = self.doc['traffic'][p['traffic']]
            stream = make_stream(self.seed, f"traffic:{p['traffic']}:{p['index']}")
            data = random_payload(stream, gen['size'])
            entry = self.ledger.register(node.id, gen['kind'], data, self.now, gen['priority'])
        else:
            blob = self.blobs[p['blob']]
            offset, length = blob['parts'][p['part']]
            data = blob['data'][offset:offset + length]
            entry = self.ledger.register(
                node.id, blob['kind'], data, self.now, blob['priority'], blob=p['blob'], part=p['part'],
            )
            blob['datums'][p['part']] = entry.id

        detail = {'datum': entry.id, 'kind': entry.kind, 'size': entry.size, 'priority': entry.priority}
        detail.update(self._enqueue_entry(node, entry))
        return detail

    def _enqueue_entry(self, node: VehicleNode, entry: DatumEntry, retransmit: bool = False) -> dict:
        try:
            queued = node.enqueue(entry.id, entry.kind, entry.data, Priority(entry.priority), self.now)
        except DatumTooLarge:
            reason = 'too_large'
        except KindFiltered:
            reason = 'kind_filtered'
        except QueueFull:
            reason = 'queue_full'
        else:
            self.ledger.bind(entry.id, (node.address, queued.msg_id))
            self.wake(node.id)
            return {'outcome': 'accepted', 'msg_id': queued.msg_id, 'fragments': len(queued.pending)}

        if not retransmit:
            self.ledger.drop(entry.id, reason)
        logger.debug("%s: datum %d rejected (%s)", node.id, entry.id, reason)
        return {'outcome': 'rejected', 'reason': reason}

    def _on_link_change(self, event: Event) -> dict:
        p = event.payload
        return self.change_link(p['link'], p['up'])

    def _on_script_step(self, event: Event) -> dict:
        return run_step(self, self.doc['script'][event.payload['step']])

    # State changes shared by events and script actions

    def change_link(self, link_id: str, up: bool) -> dict:
        """
        Set a link up or down.

        Down cuts off the sender's burst on that link and puts its fragment
        back at the head of the queue; up flushes the sender's store.
        """
        link = self.links[link_id]
        changed = link.set_up(up)
        requeued = []
        flushed = 0
        if changed and not up:
            src = self.nodes[link.src]
            if isinstance(src, VehicleNode):
                burst = src.interrupt_burst(link.id, self.now)
                if burst is not None:
                    requeued.append([burst.key[0], burst.key[1], burst.frag_index])
        elif changed:
            flushed = self.flush_node(link.src)
            self.wake(link.src)
        return {'link': link_id, 'up': up, 'changed': changed, 'requeued': requeued, 'flushed': flushed}

    def flush_node(self, node_id: str) -> int:
        node = self.nodes[node_id]
        if not node.online or not node.store:
            return 0
        effects = node.flush_store(self.now, self, self.eviction_age)
        self._apply_effects(node, effects)
        return len(effects)

    def reconfigure_ephemeris(self, eph_id: str, last_passage: int) -> bool:
        """Replace an ephemeris' last passage and reschedule its windows."""
        eph = self.ephemerides[eph_id]
        if eph.last_passage == last_passage:
            return False
        updated = eph.with_last_passage(last_passage)
        self.ephemerides[eph_id] = updated
        self._eph_gen[eph_id] += 1
        for link in self.links.values():
            if link.gate is not None and link.gate.id == eph_id:
                link.gate = updated
        self._schedule_window(eph_id, self.now)
        return True

    def blob_reconstructed(self, blob_id: str) -> bool:
        blob = self.blobs.get(blob_id)
        if blob is None or len(blob['datums']) != len(blob['parts']):
            return False
        pieces = []
        for part in range(len(blob['parts'])):
            entry = self.ledger[blob['datums'][part]]
            if not entry.delivered:
                return False
            pieces.append(entry.received)
        return b''.join(pieces) == blob['data']

    # Header and footer

    def _header(self) -> dict:
        vehicles = self.vehicles()
        return {
            'schema_version': SCHEMA_VERSION,
            'scenario': self.doc['name'],
            'seed': self.seed,
            'config_hash': self.config.config_hash,
            'epoch': self.doc['epoch'],
            'duration_ms': self.run_end,
            'tick_ms': self.tick_ms,
            'eviction_age_ms': self.eviction_age,
            'rng': ALGORITHM,
            'nodes': {n.id: n.KIND.value for n in self.nodes.values()},
            'targets': {
                v.id: v.satcomms.target_ephemeris if v.satcomms else None for v in vehicles
            },
            'radios': {v.id: v.radio.to_dict() for v in vehicles},
            'ephemerides': [e.to_dict() for e in self.ephemerides.values()],
        }

    def _traces(self) -> Set[int]:
        """Datums with anything left in a queue, store, buffer or in flight."""
        ids: Set[int] = set()
        keys: List[Key] = []
        for node in self.nodes.values():
            if isinstance(node, VehicleNode):
                ids.update(node.queue.datum_ids())
            if isinstance(node, WorkstationNode):
                keys.extend(node.reassembly.pending_keys())
            keys.extend(k for k in (frame_key(e) for e, _ in node.store) if k is not None)
        for event in self._queue:
            if event.kind == EventKind.FRAME_ARRIVAL:
                key = frame_key(event.payload['envelope'])
                if key is not None:
                    keys.append(key)
            elif event.kind == EventKind.ENQUEUE_DATUM and 'retransmit' in event.payload:
                ids.add(event.payload['retransmit'])
        return ids | self.ledger.keys_to_ids(keys)

    def _footer(self) -> dict:
        vehicles = self.vehicles()
        for vehicle in vehicles:
            vehicle.finalize_energy(self.run_end)
        classified = self.ledger.classify(self._traces())
        return {
            'ledger': classified['summary'],
            'datums': classified['datums'],
            'energy': {v.id: v.ledger.to_dict() for v in vehicles},
            'violations': {
                v.id: v.endurance_violation_at for v in vehicles if v.endurance_violation_at is not None
            },
            'batteries': {
                v.id: {'remaining_j': round(v.battery_j, 6), 'depleted_at': v.battery_depleted_at}
                for v in vehicles if v.battery_j is not None
            },
            'blobs': {b: self.blob_reconstructed(b) for b in self.blobs},
            'pending_events': len(self._queue),
        }


def frame_key(envelope: Envelope) -> Optional[Key]:
    try:
        return decode_frame(envelope.wire, envelope.frame_bytes).key
    except ProtocolError:
        return None


def run(config: ScenarioConfig, log_path: Optional[Union[str, Path]] = None) -> Tuple[Metrics, List[Record]]:
    """
    Run a scenario.

    Returns:
        (metrics, records); records start with RunStart and end with RunEnd
    """
    metrics, log = Engine(config, log_path).run()
    return metrics, log.records
