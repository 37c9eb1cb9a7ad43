"""Tests for nodes, routing, the store queue and slot scheduling."""

import numpy as np
import pytest

from src.link import HUMSAT
from src.nodes import (
    MAX_HOPS,
    NO_ROUTE,
    Drop,
    Envelope,
    Forward,
    Ingest,
    KindFiltered,
    Link,
    NodeError,
    Priority,
    QueueFull,
    QueuedDatum,
    Route,
    RoutingTable,
    SatCommsConfig,
    SatelliteNode,
    Slot,
    SlotDemand,
    Store,
    StoreQueue,
    VehicleNode,
    WorkstationNode,
    find_routing_loops,
    get_node_class,
    schedule_multi_vehicle,
    slots_disjoint,
    walk_path,
)
from src.orbit import OrbitEphemeris, PassWindow
from src.protocol import IngestOutcome, encode_frame, fragment_datum
from src.sim import VehicleState

QUANTUM = 856


class FakeNetwork:
    """Just enough of the engine for nodes to query."""

    def __init__(self, nodes, links=(), ephemerides=(), run_end=10 ** 9, tick_ms=100):
        self.nodes = {n.id: n for n in nodes}
        self.links = {(link.src, link.dst): link for link in links}
        self.ephemerides = {e.id: e for e in ephemerides}
        self.run_end = run_end
        self.tick_ms = tick_ms

    def link_between(self, src, dst):
        return self.links.get((src, dst))

    def get_node(self, node_id):
        return self.nodes.get(node_id)

    def ephemeris(self, eph_id):
        return self.ephemerides[eph_id]

    def slot_for(self, node_id, eph_id, window):
        return Slot(node_id, window.start, window.end)


def envelope(data: bytes = b'hello', destination: str = 'ws', hops: int = 1, wire: bytes = None) -> Envelope:
    if wire is None:
        wire = encode_frame(fragment_datum(1, 0, data)[0])
    return Envelope(wire, 'uav', destination, 0, 32, hops)


def make_vehicle(target=None, routes=(('ws', 'sat'),), **satcomms) -> VehicleNode:
    return VehicleNode(
        'uav', 1, HUMSAT,
        satcomms=SatCommsConfig('ws', target_ephemeris=target, **satcomms),
        routes=RoutingTable(Route(d, n) for d, n in routes),
    )


def demand(node_id: str, queued: int) -> SlotDemand:
    return SlotDemand(node_id, queued, QUANTUM)


class TestRouting:

    def test_lookup_miss_is_falsy_value(self):
        table = RoutingTable([Route('ws', 'gw')])
        assert table.lookup('ws').next_hop == 'gw'
        assert table.lookup('nowhere') is NO_ROUTE
        assert not table.lookup('nowhere')

    def test_set_replaces_and_remove(self):
        table = RoutingTable([Route('ws', 'gw')])
        table.set(Route('ws', 'other', 6001))
        assert table.lookup('ws').port == 6001
        assert table.remove('ws')
        assert not table.remove('ws')

    def test_walk_path(self):
        tables = {
            'a': RoutingTable([Route('d', 'b')]),
            'b': RoutingTable([Route('d', 'c')]),
            'c': RoutingTable([Route('d', 'd')]),
        }
        hops, looped = walk_path(tables, 'a', 'd')
        assert [at for at, _ in hops] == ['a', 'b', 'c']
        assert not looped

    def test_loop_detected(self):
        tables = {
            'a': RoutingTable([Route('d', 'b')]),
            'b': RoutingTable([Route('d', 'a')]),
        }
        assert ('a', 'd') in find_routing_loops(tables)

    def test_no_loops(self):
        tables = {'a': RoutingTable([Route('b', 'b')]), 'b': RoutingTable()}
        assert find_routing_loops(tables) == []


class TestStoreQueue:

    def _datum(self, datum_id, priority, size=10):
        datum = QueuedDatum(datum_id, 'k', priority, 0, datum_id, size)
        for fragment in fragment_datum(1, datum_id, bytes(size)):
            datum.pending.append((fragment, encode_frame(fragment)))
        return datum

    def test_high_priority_drains_first(self):
        queue = StoreQueue(1_000)
        queue.push(self._datum(0, Priority.NORMAL))
        queue.push(self._datum(1, Priority.HIGH))
        queue.push(self._datum(2, Priority.NORMAL))
        order = []
        while not queue.is_empty():
            datum, _, _ = queue.pop_fragment()
            order.append(datum.datum_id)
        assert order == [1, 0, 2]

    def test_capacity_counts_unsent_bytes(self):
        queue = StoreQueue(60)
        queue.push(self._datum(0, Priority.NORMAL, size=52))
        assert not queue.can_accept(9)
        with pytest.raises(QueueFull):
            queue.push(self._datum(1, Priority.NORMAL, size=9))
        queue.pop_fragment()
        assert queue.can_accept(9)

    def test_requeue_puts_fragment_back_at_head(self):
        queue = StoreQueue(1_000)
        queue.push(self._datum(0, Priority.NORMAL, size=60))
        queue.push(self._datum(1, Priority.NORMAL, size=10))
        datum, fragment, wire = queue.pop_fragment()
        queue.requeue(datum, fragment, wire)
        assert queue.pending_keys()[0] == fragment.key
        assert queue.fragment_count == 4

    def test_rejects_zero_capacity(self):
        with pytest.raises(ValueError):
            StoreQueue(0)


class TestSlotScheduling:

    window = PassWindow(60_000, 360_000, 'sat')

    def test_single_vehicle_gets_the_window(self):
        slots = schedule_multi_vehicle([demand('a', 10)], self.window)
        assert slots['a'] == Slot('a', 60_000, 360_000)

    def test_equal_queues(self):
        slots = schedule_multi_vehicle([demand('a', 100), demand('b', 100)], self.window)
        # 350 quanta split 175/175; the 400 ms tail goes to the first of the tied largest
        assert slots['a'] == Slot('a', 60_000, 60_000 + 175 * QUANTUM + 400)
        assert slots['b'].end == 360_000
        assert slots['b'].duration == 175 * QUANTUM

    def test_remainder_goes_by_fraction_then_queue_size(self):
        slots = schedule_multi_vehicle([demand('a', 300), demand('b', 100)], self.window)
        assert slots['a'].duration == 263 * QUANTUM + 400
        assert slots['b'].duration == 87 * QUANTUM

    def test_empty_queue_gets_no_slot(self):
        slots = schedule_multi_vehicle([demand('a', 0), demand('b', 50)], self.window)
        assert set(slots) == {'b'}
        assert slots['b'].duration == self.window.duration

    def test_all_empty_goes_to_first(self):
        slots = schedule_multi_vehicle([demand('a', 0), demand('b', 0)], self.window)
        assert set(slots) == {'a'}

    def test_requires_vehicles(self):
        with pytest.raises(ValueError):
            schedule_multi_vehicle([], self.window)

    def test_random_demands_partition_the_window(self):
        rng = np.random.default_rng(21)
        for _ in range(200):
            n = int(rng.integers(2, 7))
            demands = [demand(f"v{i}", int(rng.integers(0, 20_000))) for i in range(n)]
            slots = schedule_multi_vehicle(demands, self.window)
            assert slots_disjoint(slots.values(), self.window)
            assert sum(s.duration for s in slots.values()) == self.window.duration
            # only the slot carrying the sub-quantum tail is not whole quanta
            assert sum(1 for s in slots.values() if s.duration % QUANTUM) <= 1

    def test_slots_disjoint_detects_overlap(self):
        assert not slots_disjoint([Slot('a', 60_000, 70_000), Slot('b', 69_999, 80_000)], self.window)
        assert not slots_disjoint([Slot('a', 0, 70_000)], self.window)
        assert slots_disjoint([Slot('a', 60_000, 70_000), Slot('b', 70_000, 80_000)], self.window)


class TestVehicle:

    def test_enqueue_fragments_and_binds_msg_id(self):
        uav = make_vehicle()
        queued = uav.enqueue(0, 'EstimatedState', bytes(45), Priority.HIGH, 0)
        assert len(queued.pending) == 2
        assert queued.msg_id == 0
        assert uav.enqueue(1, 'EstimatedState', bytes(45), Priority.HIGH, 0).msg_id == 1
        assert uav.queued_bytes == 90

    def test_msg_id_wraps(self):
        uav = make_vehicle()
        uav._next_msg_id = 65_535
        assert uav.allocate_msg_id() == 65_535
        assert uav.allocate_msg_id() == 0

    def test_kind_filter(self):
        uav = make_vehicle(accepted_kinds=frozenset({'EstimatedState'}))
        with pytest.raises(KindFiltered):
            uav.enqueue(0, 'Image', b'x', Priority.NORMAL, 0)

    def test_queue_capacity(self):
        uav = make_vehicle(queue_capacity_bytes=100)
        uav.enqueue(0, 'k', bytes(80), Priority.NORMAL, 0)
        with pytest.raises(QueueFull):
            uav.enqueue(1, 'k', bytes(21), Priority.NORMAL, 0)

    def test_no_satcomms_task(self):
        uav = VehicleNode('uav', 1, HUMSAT)
        with pytest.raises(NodeError):
            uav.enqueue(0, 'k', b'x', Priority.NORMAL, 0)

    def test_non_relay_vehicle_drops_transit_frames(self):
        uav = make_vehicle()
        (effect,) = uav.on_receive(envelope(), 0, FakeNetwork([uav]))
        assert effect == Drop(envelope(), 'not_relay')


class TestSatCommsTick:

    eph = OrbitEphemeris('sat', 1_000, 100_000, 10_000)

    def _setup(self, **satcomms):
        uav = make_vehicle(target='sat', **satcomms)
        sat = SatelliteNode('sat', 2)
        uplink = Link('uplink', 'uav', 'sat', 5)
        view = FakeNetwork([uav, sat], [uplink], [self.eph])
        return uav, uplink, view

    def test_idle_and_not_visible(self):
        uav, _, view = self._setup()
        assert uav.satcomms_tick(1_000, view).status == 'idle'
        uav.enqueue(0, 'k', bytes(45), Priority.NORMAL, 0)
        assert uav.satcomms_tick(0, view).status == 'not_visible'

    def test_sends_a_burst_inside_the_window(self):
        uav, _, view = self._setup()
        uav.enqueue(0, 'k', bytes(45), Priority.NORMAL, 0)
        result = uav.satcomms_tick(1_000, view)
        assert result.status == 'sent'
        assert (result.burst.start, result.burst.end) == (1_000, 1_000 + QUANTUM)
        assert result.burst.copies == 4
        assert result.next_tick == 1_000 + QUANTUM
        assert not result.burst.datum_done
        assert uav.satcomms_tick(1_100, view).status == 'busy'

    def test_burst_must_fit_the_window(self):
        uav, _, view = self._setup()
        uav.enqueue(0, 'k', bytes(45), Priority.NORMAL, 0)
        assert uav.satcomms_tick(11_000 - QUANTUM + 1, view).status == 'window_short'
        assert uav.satcomms_tick(11_000 - QUANTUM, view).status == 'sent'

    def test_gates(self):
        uav, uplink, view = self._setup(transmit_when_possible=False)
        uav.enqueue(0, 'k', bytes(45), Priority.NORMAL, 0)
        assert uav.satcomms_tick(1_000, view).status == 'disabled'
        uav.transmit_enabled = True
        uav.satellite_configured = False
        assert uav.satcomms_tick(1_000, view).status == 'unconfigured'
        uav.satellite_configured = True
        uplink.set_up(False)
        result = uav.satcomms_tick(1_000, view)
        assert (result.status, result.next_tick) == ('link_down', 1_100)
        uav.online = False
        assert uav.satcomms_tick(1_000, view).status == 'inactive'

    def test_no_route(self):
        uav = make_vehicle(routes=())
        uav.enqueue(0, 'k', b'x', Priority.NORMAL, 0)
        assert uav.satcomms_tick(0, FakeNetwork([uav])).status == 'no_route'

    def test_untargeted_vehicle_does_not_poll_a_down_link(self):
        uav = make_vehicle()
        uplink = Link('uplink', 'uav', 'sat', 5)
        uplink.set_up(False)
        uav.enqueue(0, 'k', b'x', Priority.NORMAL, 0)
        result = uav.satcomms_tick(0, FakeNetwork([uav, SatelliteNode('sat', 2)], [uplink]))
        assert (result.status, result.next_tick) == ('link_down', None)

    def test_battery_refuses_burst_it_cannot_power(self):
        uav = make_vehicle()
        assert uav.battery_j is None
        assert uav.can_power(QUANTUM, 0)

        uav.motion = VehicleState((0.0, 0.0, 0.0), 18.0, battery_j=3.0)
        assert uav.can_power(QUANTUM, 0)
        uav.drain_battery(1.0)
        assert uav.battery_j == pytest.approx(2.0)
        assert not uav.can_power(QUANTUM, 500)
        assert not uav.can_power(QUANTUM, 900)
        assert uav.battery_depleted_at == 500
        uav.drain_battery(10.0)
        assert uav.battery_j == 0.0

    def test_burst_drains_transmit_energy(self):
        uav, _, view = self._setup()
        uav.motion = VehicleState((0.0, 0.0, 0.0), 18.0, battery_j=10.0)
        uav.enqueue(0, 'k', bytes(45), Priority.NORMAL, 0)
        assert uav.satcomms_tick(1_000, view).status == 'sent'
        assert uav.battery_j == pytest.approx(10.0 - 3.2 * QUANTUM / 1000)

    def test_interrupted_burst_requeues_fragment(self):
        uav, _, view = self._setup()
        uav.enqueue(0, 'k', bytes(45), Priority.NORMAL, 0)
        burst = uav.satcomms_tick(1_000, view).burst
        assert uav.queue.fragment_count == 1
        assert uav.interrupt_burst('uplink', 1_200) == burst
        assert uav.queue.fragment_count == 2
        assert uav.interrupt_burst('uplink', 1_300) is None

    def test_energy_booked_for_burst_and_standby(self):
        uav, _, view = self._setup()
        uav.enqueue(0, 'k', b'x', Priority.NORMAL, 0)
        uav.satcomms_tick(1_000, view)
        uav.finalize_energy(10_000)
        assert uav.ledger.tx_time_ms == QUANTUM
        assert uav.ledger.standby_time_ms == 10_000 - QUANTUM
        assert uav.ledger.joules == pytest.approx(3.2 * 0.856 + 0.14 * (10 - 0.856))


class TestRelay:

    def _chain(self, link_up=True, port=None, listen=(), capacity=None):
        sat = SatelliteNode('sat', 2, RoutingTable([Route('ws', 'gw', port)]), store_capacity_frames=capacity)
        gw = get_node_class('Gateway')('gw', 3, RoutingTable([Route('ws', 'ws')]), listen_ports=listen)
        ws = WorkstationNode('ws', 4)
        link = Link('sat-gw', 'sat', 'gw', 50, up=link_up)
        return sat, link, FakeNetwork([sat, gw, ws], [link])

    def test_forwards_on_route(self):
        sat, _, view = self._chain()
        (effect,) = sat.on_receive(envelope(), 0, view)
        assert isinstance(effect, Forward)
        assert (effect.link_id, effect.next_hop, effect.envelope.hops) == ('sat-gw', 'gw', 2)

    def test_holds_when_link_down_then_flushes(self):
        sat, link, view = self._chain(link_up=False)
        (effect,) = sat.on_receive(envelope(), 0, view)
        assert effect == Store(envelope(), 'link_unavailable')
        link.set_up(True)
        (flushed,) = sat.flush_store(10, view, max_age=1_000)
        assert isinstance(flushed, Forward)
        assert sat.store == []

    def test_holds_without_route(self):
        sat, _, view = self._chain()
        sat.routes.remove('ws')
        (effect,) = sat.on_receive(envelope(), 0, view)
        assert effect.reason == 'no_route'

    def test_store_capacity(self):
        sat, _, view = self._chain(link_up=False, capacity=1)
        sat.on_receive(envelope(), 0, view)
        (effect,) = sat.on_receive(envelope(), 0, view)
        assert effect == Drop(envelope(), 'store_full')

    def test_stale_store_entries_evicted(self):
        sat, _, view = self._chain(link_up=False)
        sat.on_receive(envelope(), 0, view)
        assert sat.evict_store(100, max_age=100) == []
        (effect,) = sat.evict_store(101, max_age=100)
        assert effect.reason == 'store_evicted'

    def test_closed_port_is_unreachable(self):
        sat, _, view = self._chain(port=6002, listen=(6001,))
        (effect,) = sat.on_receive(envelope(), 0, view)
        assert effect == Drop(envelope(), 'port_unreachable')

    def test_hop_limit(self):
        sat, _, view = self._chain()
        (effect,) = sat.on_receive(envelope(hops=MAX_HOPS), 0, view)
        assert effect.reason == 'ttl_expired'

    def test_malformed_frame(self):
        sat, _, view = self._chain()
        (effect,) = sat.on_receive(envelope(wire=bytes(31)), 0, view)
        assert effect.reason == 'decode_error'


class TestWorkstation:

    def test_reassembles_frames_addressed_to_it(self):
        ws = WorkstationNode('ws', 4)
        view = FakeNetwork([ws])
        results = []
        for fragment in fragment_datum(1, 0, b'x' * 45):
            wire = encode_frame(fragment)
            (effect,) = ws.on_receive(envelope(wire=wire), 0, view)
            assert isinstance(effect, Ingest)
            results.append(effect.result.outcome)
        assert results == [IngestOutcome.STORED, IngestOutcome.COMPLETED]
        assert ws.completed[0][1] == b'x' * 45

    def test_relays_frames_for_others(self):
        ws = WorkstationNode('ws', 4)
        (effect,) = ws.on_receive(envelope(destination='elsewhere'), 0, FakeNetwork([ws]))
        assert isinstance(effect, Store)


class TestRegistry:

    def test_kinds(self):
        assert get_node_class('Satellite') is SatelliteNode
        assert get_node_class('Vehicle') is VehicleNode

    def test_unknown_kind(self):
        with pytest.raises(ValueError):
            get_node_class('Balloon')
