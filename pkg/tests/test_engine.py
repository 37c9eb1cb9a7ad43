"""Tests for the discrete-event engine, the event log and the metrics fold."""

import json
from dataclasses import replace

import numpy as np
import pytest

from src.sim import (
    Engine,
    EventKind,
    EventLog,
    EventLogError,
    ScenarioConfig,
    SimulationAborted,
    VehicleState,
    make_record,
    parse_log,
    read_log,
    reduce_records,
    run,
    step_vehicle,
    write_records,
)


def bench(**fields) -> dict:
    """One vehicle → satellite → workstation, always in view."""
    doc = {
        'name': 'bench',
        'duration_ms': 10_000,
        'seed': 1,
        'nodes': [
            {'id': 'v', 'kind': 'Vehicle', 'routes': [{'dest': 'ws', 'next_hop': 'sat'}],
             'satcomms': {'destination': 'ws'}},
            {'id': 'sat', 'kind': 'Satellite', 'routes': [{'dest': 'ws', 'next_hop': 'ws'}]},
            {'id': 'ws', 'kind': 'Workstation'},
        ],
        'links': [
            {'id': 'uplink', 'src': 'v', 'dst': 'sat', 'latency_ms': 5},
            {'id': 'downlink', 'src': 'sat', 'dst': 'ws', 'latency_ms': 50},
        ],
        'traffic': [{'node': 'v', 'kind': 'EstimatedState', 'size': 45, 'start_ms': 0}],
    }
    doc.update(fields)
    return doc


def of_kind(records, kind):
    return [r for r in records if r['kind'] == kind]


def bursts(records, node_id):
    return [r['detail']['burst'] for r in of_kind(records, 'TickSatComms')
            if r['node'] == node_id and 'burst' in r['detail']]


def run_doc(doc, log_path=None):
    return run(ScenarioConfig.from_dict(doc), log_path)


def random_scenario(rng: np.random.Generator, index: int) -> dict:
    n = int(rng.integers(1, 4))
    nodes = [
        {'id': 'sat', 'kind': 'Satellite', 'routes': [{'dest': 'ws', 'next_hop': 'ws'}]},
        {'id': 'ws', 'kind': 'Workstation'},
    ]
    links = [{
        'id': 'downlink', 'src': 'sat', 'dst': 'ws', 'latency_ms': 50,
        'per_copy_loss': float(rng.uniform(0, 0.3)),
    }]
    traffic = []
    for k in range(n):
        vid = f"v{k}"
        satcomms = {
            'destination': 'ws',
            'target_ephemeris': 'pass' if rng.random() < 0.5 else None,
            'queue_capacity_bytes': int(rng.integers(500, 20_000)),
        }
        if rng.random() < 0.3:
            satcomms.update(retransmit_timeout_ms=5_000, max_retransmissions=1)
        nodes.append({'id': vid, 'kind': 'Vehicle', 'routes': [{'dest': 'ws', 'next_hop': 'sat'}],
                      'satcomms': satcomms})
        toggles = sorted(int(t) for t in rng.integers(0, 60_000, size=int(rng.integers(0, 4))))
        links.append({
            'id': f"uplink-{vid}", 'src': vid, 'dst': 'sat', 'latency_ms': 5,
            'per_copy_loss': float(rng.uniform(0, 1)),
            'schedule': [{'at_ms': t, 'up': bool(j % 2)} for j, t in enumerate(toggles)],
        })
        traffic.append({
            'node': vid, 'kind': 'Survey', 'size': int(rng.integers(0, 3_000)),
            'start_ms': int(rng.integers(0, 30_000)), 'count': int(rng.integers(1, 4)),
            'period_ms': 5_000, 'priority': 'High' if rng.random() < 0.3 else 'Normal',
        })
    return {
        'name': f"random_{index}",
        'duration_ms': 60_000,
        'seed': index,
        'eviction_age_ms': int(rng.integers(1_000, 100_000)),
        'ephemerides': [{
            'id': 'pass', 'satellite_id': 'sat', 'last_passage_ms': int(rng.integers(0, 30_000)),
            'period_ms': 40_000, 'window_ms': int(rng.integers(2_000, 40_000)),
        }],
        'nodes': nodes,
        'links': links,
        'traffic': traffic,
    }


class TestLogShape:

    def test_empty_scenario_has_header_and_footer_only(self):
        _, records = run_doc({'name': 'empty', 'duration_ms': 1_000})
        assert [r['kind'] for r in records] == ['RunStart', 'RunEnd']
        assert (records[0]['t'], records[0]['seq']) == (0, 0)
        assert records[-1]['t'] == 1_000
        assert records[-1]['detail']['ledger']['enqueued'] == 0

    def test_records_are_in_time_then_seq_order(self):
        _, records = run_doc(bench())
        keys = [(r['t'], r['seq']) for r in records]
        assert keys == sorted(keys)
        assert len(set(r['seq'] for r in records)) == len(records)

    def test_header(self):
        config = ScenarioConfig.from_dict(bench())
        _, records = run(config)
        header = records[0]['detail']
        assert header['schema_version'] == 1
        assert header['config_hash'] == config.config_hash
        assert header['nodes'] == {'v': 'Vehicle', 'sat': 'Satellite', 'ws': 'Workstation'}
        assert header['radios']['v']['frame_bytes'] == 32

    def test_cannot_schedule_in_the_past(self):
        engine = Engine(ScenarioConfig.from_dict(bench()))
        engine.now = 100
        with pytest.raises(RuntimeError):
            engine.schedule(50, None, EventKind.SCRIPT_STEP, {})


class TestDeterminism:

    def test_same_seed_same_log(self):
        doc = bench(traffic=[{'node': 'v', 'kind': 'k', 'size': 500, 'start_ms': 0}])
        doc['links'][0]['per_copy_loss'] = 0.5
        _, a = run_doc(doc)
        _, b = run_doc(doc)
        assert json.dumps(a, sort_keys=True) == json.dumps(b, sort_keys=True)

    def test_seed_changes_loss_pattern(self):
        doc = bench(traffic=[{'node': 'v', 'kind': 'k', 'size': 500, 'start_ms': 0}])
        doc['links'][0]['per_copy_loss'] = 0.5
        _, a = run_doc(doc)
        _, b = run_doc(dict(doc, seed=2))
        assert [x['lost'] for x in bursts(a, 'v')] != [x['lost'] for x in bursts(b, 'v')]

    def test_adding_a_link_leaves_other_streams_alone(self):
        doc = bench(traffic=[{'node': 'v', 'kind': 'k', 'size': 500, 'start_ms': 0}])
        doc['links'][0]['per_copy_loss'] = 0.5
        _, alone = run_doc(doc)

        crowded = json.loads(json.dumps(doc))
        crowded['nodes'].append({'id': 'w', 'kind': 'Vehicle', 'routes': [{'dest': 'ws', 'next_hop': 'sat'}],
                                 'satcomms': {'destination': 'ws'}})
        crowded['links'].append({'id': 'uplink-w', 'src': 'w', 'dst': 'sat', 'latency_ms': 5,
                                 'per_copy_loss': 0.5})
        crowded['traffic'].append({'node': 'w', 'kind': 'k', 'size': 300, 'start_ms': 0})
        _, shared = run_doc(crowded)

        assert [x['lost'] for x in bursts(alone, 'v')] == [x['lost'] for x in bursts(shared, 'v')]


class TestConservation:

    def test_every_datum_accounted_for(self):
        rng = np.random.default_rng(2017)
        for index in range(50):
            doc = random_scenario(rng, index)
            _, records = run_doc(doc)
            footer = records[-1]['detail']
            ledger = footer['ledger']

            enqueued = [r for r in of_kind(records, 'EnqueueDatum') if 'retransmit' not in r['detail']]
            assert ledger['enqueued'] == len(enqueued) == len(footer['datums'])
            assert ledger['enqueued'] == ledger['delivered'] + ledger['stored'] + ledger['dropped']
            assert sum(ledger['dropped_by_reason'].values()) == ledger['dropped']
            for datum in footer['datums']:
                assert datum['status'] in ('delivered', 'stored', 'dropped')
                assert (datum['reason'] is not None) == (datum['status'] == 'dropped')
                if datum['status'] == 'delivered':
                    assert datum['match']

    def test_copies_never_exceed_what_was_sent(self):
        rng = np.random.default_rng(5)
        for index in range(10):
            _, records = run_doc(random_scenario(rng, index))
            for node_id in ('v0', 'v1', 'v2'):
                launched = sum(b['copies'] - len(b['lost']) for b in bursts(records, node_id))
                arrived = [r for r in of_kind(records, 'FrameArrival') if r['detail']['from'] == node_id]
                assert len(arrived) <= launched


class TestBursts:

    def test_saturated_queue_sends_back_to_back(self):
        _, records = run_doc(bench(traffic=[
            {'node': 'v', 'kind': 'EstimatedState', 'size': 45, 'start_ms': 1_000},
            {'node': 'v', 'kind': 'SurveyLog', 'size': 500, 'start_ms': 2_000},
        ], duration_ms=30_000))
        starts = [b['start'] for b in bursts(records, 'v')]
        assert starts == [1_000 + k * 856 for k in range(22)]

    def test_redundant_copies_become_duplicates(self):
        metrics, records = run_doc(bench())
        assert metrics.counter('v', 'frames_sent') == 2
        assert metrics.counter('ws', 'duplicates') == 6
        assert records[-1]['detail']['ledger']['delivered'] == 1

    def test_link_down_mid_burst_requeues_fragment(self):
        doc = bench()
        doc['links'][0]['schedule'] = [{'at_ms': 300, 'up': False}, {'at_ms': 2_000, 'up': True}]
        metrics, records = run_doc(doc)

        change = of_kind(records, 'LinkStateChange')[0]['detail']
        assert change['requeued'] == [[1, 0, 0]]
        lost = [r for r in of_kind(records, 'FrameArrival') if r['detail']['outcome'] == 'lost']
        assert [r['detail']['copy'] for r in lost] == [1, 2, 3]
        assert all(r['detail']['reason'] == 'link_down' for r in lost)
        assert [b['start'] for b in bursts(records, 'v')] == [0, 2_000, 2_856]
        assert records[-1]['detail']['ledger']['delivered'] == 1

    def test_total_loss_is_channel_loss(self):
        doc = bench()
        doc['links'][0]['per_copy_loss'] = 1.0
        metrics, records = run_doc(doc)
        ledger = records[-1]['detail']['ledger']
        assert ledger['dropped_by_reason'] == {'channel_loss': 1}
        assert metrics.counter('v', 'copies_lost') == 8

    def test_blind_retransmission(self):
        doc = bench()
        doc['links'][0]['per_copy_loss'] = 1.0
        doc['nodes'][0]['satcomms'].update(retransmit_timeout_ms=1_000, max_retransmissions=1)
        metrics, records = run_doc(doc)

        resent = [r for r in of_kind(records, 'EnqueueDatum') if 'retransmit' in r['detail']]
        assert len(resent) == 1
        assert resent[0]['t'] == 2 * 856 + 1_000
        assert resent[0]['detail']['msg_id'] == 1
        assert metrics.counter('v', 'datums_enqueued') == 1
        assert metrics.counter('v', 'frames_sent') == 4
        assert records[-1]['detail']['datums'][0]['retransmissions'] == 1

    def test_kind_filter_drops_at_enqueue(self):
        doc = bench()
        doc['nodes'][0]['satcomms']['accepted_kinds'] = ['Image']
        _, records = run_doc(doc)
        assert of_kind(records, 'EnqueueDatum')[0]['detail']['reason'] == 'kind_filtered'
        assert records[-1]['detail']['ledger']['dropped_by_reason'] == {'kind_filtered': 1}

    def test_undelivered_queue_is_stored(self):
        doc = bench()
        doc['links'][0]['up'] = False
        _, records = run_doc(doc)
        assert records[-1]['detail']['ledger']['stored'] == 1


class TestWindows:

    def gated(self, **fields):
        doc = bench(
            duration_ms=30_000,
            eviction_age_ms=2_000,
            ephemerides=[{'id': 'pass', 'satellite_id': 'sat', 'last_passage_ms': 0,
                          'period_ms': 20_000, 'window_ms': 5_000}],
            traffic=[{'node': 'v', 'kind': 'Survey', 'size': 200, 'start_ms': 0}],
            **fields,
        )
        doc['nodes'][0]['satcomms']['target_ephemeris'] = 'pass'
        return doc

    def test_bursts_stay_inside_windows(self):
        _, records = run_doc(self.gated())
        for burst in bursts(records, 'v'):
            phase = burst['start'] % 20_000
            assert phase + 856 <= 5_000

    def test_datum_split_across_passes_completes(self):
        _, records = run_doc(self.gated())
        assert [b['start'] for b in bursts(records, 'v')] == [0, 856, 1_712, 2_568, 3_424, 20_000, 20_856, 21_712]
        assert records[-1]['detail']['ledger']['delivered'] == 1

    def test_stale_reassembly_evicted_at_window_close(self):
        doc = self.gated()
        doc['links'][0]['schedule'] = [{'at_ms': 6_000, 'up': False}]
        _, records = run_doc(doc)
        closes = of_kind(records, 'WindowClose')
        assert closes[0]['detail']['evicted'] == []
        assert closes[1]['detail']['evicted'] == [[1, 0]]
        ledger = records[-1]['detail']['ledger']
        assert ledger['dropped_by_reason'] == {'reassembly_evicted': 1}

    def test_window_records(self):
        _, records = run_doc(self.gated())
        opens = of_kind(records, 'WindowOpen')
        assert [(r['detail']['start'], r['detail']['end']) for r in opens] == [(0, 5_000), (20_000, 25_000)]
        assert opens[0]['detail']['slots'] == [{'node': 'v', 'start': 0, 'end': 5_000}]

    def test_untargeted_sender_woken_when_gated_link_opens(self):
        doc = self.gated()
        doc['traffic'] = [{'node': 'v', 'kind': 'EstimatedState', 'size': 45, 'start_ms': 6_000}]
        doc['nodes'][0]['satcomms']['target_ephemeris'] = None
        doc['links'][0]['ephemeris'] = 'pass'
        _, records = run_doc(doc)
        ticks = [r for r in of_kind(records, 'TickSatComms') if r['node'] == 'v']
        assert [r['t'] for r in ticks if r['detail']['status'] == 'link_down'] == [6_000]
        assert [b['start'] for b in bursts(records, 'v')] == [20_000, 20_856]


class TestHousekeeping:

    def test_relay_store_evicted_without_ephemerides(self):
        doc = bench(duration_ms=60_000, eviction_age_ms=1_000)
        doc['nodes'][1]['routes'] = []
        _, records = run_doc(doc)
        sweeps = of_kind(records, 'Housekeeping')
        assert sweeps[0]['t'] == 1_000
        assert all(r['t'] % 1_000 == 0 for r in sweeps)
        assert sum(r['detail']['store_evicted'] for r in sweeps) == 8
        assert records[-1]['detail']['ledger']['dropped_by_reason'] == {'store_evicted': 1}

    def test_no_sweeps_when_windows_close(self):
        _, records = run_doc(TestWindows().gated())
        assert of_kind(records, 'Housekeeping') == []

    def test_no_sweep_past_run_end(self):
        _, records = run_doc(bench(eviction_age_ms=20_000))
        assert of_kind(records, 'Housekeeping') == []


class TestPolling:

    def test_untargeted_vehicle_waits_for_link_up(self):
        doc = bench()
        doc['links'][0].update(up=False, schedule=[{'at_ms': 5_000, 'up': True}])
        _, records = run_doc(doc)
        ticks = [r for r in of_kind(records, 'TickSatComms') if r['node'] == 'v']
        assert [r['t'] for r in ticks if r['detail']['status'] == 'link_down'] == [0]
        assert [b['start'] for b in bursts(records, 'v')] == [5_000, 5_856]
        assert len(ticks) <= 4
        assert records[-1]['detail']['ledger']['delivered'] == 1


class TestBattery:

    def powered(self, battery_j):
        doc = bench()
        doc['nodes'][0]['vehicle'] = {'battery_j': battery_j}
        return doc

    def test_each_burst_drains_the_battery(self):
        _, records = run_doc(self.powered(10.0))
        battery = records[-1]['detail']['batteries']['v']
        assert battery['remaining_j'] == pytest.approx(10.0 - 2 * 3.2 * 0.856)
        assert battery['depleted_at'] is None

    def test_depleted_battery_stops_transmission(self):
        _, records = run_doc(self.powered(3.0))
        ticks = [r for r in of_kind(records, 'TickSatComms') if r['node'] == 'v']
        assert [b['start'] for b in bursts(records, 'v')] == [0]
        assert ticks[-1]['t'] == 856
        assert ticks[-1]['detail']['status'] == 'battery_depleted'
        assert records[-1]['detail']['batteries']['v']['depleted_at'] == 856
        assert records[-1]['detail']['ledger']['stored'] == 1

    def test_untracked_battery_not_reported(self):
        _, records = run_doc(bench())
        assert records[-1]['detail']['batteries'] == {}


class TestVehicleMotion:

    def flying(self, speed, plan):
        return replace(VehicleState((0.0, 0.0, 100.0), speed, airborne=True).with_plan(plan), executing=True)

    def test_moves_toward_waypoint(self):
        v = step_vehicle(self.flying(18.0, [(180, 0, 100)]), 5_000)
        assert v.position == pytest.approx((90.0, 0.0, 100.0))
        assert not v.plan_complete

    def test_reaches_final_waypoint_and_holds(self):
        v = step_vehicle(self.flying(18.0, [(180, 0, 100)]), 20_000)
        assert v.position == (180.0, 0.0, 100.0)
        assert v.plan_complete
        assert step_vehicle(v, 1_000) == v

    def test_capture_radius_switches_leg(self):
        v = step_vehicle(self.flying(10.0, [(20, 0, 100), (20, 100, 100)]), 1_000, capture_radius_m=31)
        assert v.leg == 1
        assert v.position[1] > 0

    def test_grounded_vehicle_does_not_move(self):
        v = VehicleState((0.0, 0.0, 0.0), 18.0).with_plan([(100, 0, 0)])
        assert step_vehicle(v, 1_000) == v

    def test_rejects_non_positive_step(self):
        with pytest.raises(ValueError):
            step_vehicle(VehicleState((0.0, 0.0, 0.0), 18.0), 0)

    def test_endurance_violation_recorded(self):
        doc = bench(traffic=[], duration_ms=5_000)
        doc['nodes'][0]['airframe'] = {'endurance_ms': 1_000}
        doc['nodes'][0]['vehicle'] = {'airborne': True, 'position': [0, 0, 100]}
        _, records = run_doc(doc)
        assert records[-1]['detail']['violations'] == {'v': 5_000}


class TestReplay:

    def test_metrics_fold_matches_online(self, tmp_path):
        log_path = tmp_path / 'bench.ndjson'
        metrics, records = run_doc(bench(), log_path)
        replayed = reduce_records(read_log(log_path))
        assert replayed.to_dict() == metrics.to_dict()

    def test_log_is_canonical_json_lines(self, tmp_path):
        log_path = tmp_path / 'bench.ndjson'
        _, records = run_doc(bench(), log_path)
        lines = log_path.read_text().splitlines()
        assert len(lines) == len(records)
        assert lines[0] == json.dumps(records[0], sort_keys=True, separators=(',', ':'))

    def test_unwritable_log_aborts_at_first_record(self, tmp_path):
        with pytest.raises(SimulationAborted) as info:
            run_doc(bench(), tmp_path)
        assert [r['kind'] for r in info.value.records] == ['RunStart']

    def test_log_is_written_while_running(self, tmp_path):
        log_path = tmp_path / 'nested' / 'bench.ndjson'
        log = EventLog(log_path)
        log.append(make_record(0, 0, None, 'RunStart', {'schema_version': 1}))
        assert log_path.read_text().splitlines() == log.lines()
        log.close()

    def test_saved_records_match_streamed_log(self, tmp_path):
        streamed = tmp_path / 'bench.ndjson'
        _, records = run_doc(bench(), streamed)
        saved = write_records(records, tmp_path / 'saved' / 'bench.ndjson')
        assert saved.read_bytes() == streamed.read_bytes()

    def test_rejects_log_without_header(self):
        with pytest.raises(EventLogError):
            parse_log(['{"kind": "RunEnd", "detail": {}}'])

    def test_rejects_bad_json(self):
        with pytest.raises(EventLogError):
            parse_log(['not json'])

    def test_rejects_unknown_schema_version(self):
        with pytest.raises(EventLogError):
            parse_log(['{"kind": "RunStart", "detail": {"schema_version": 99}}'])

    def test_missing_log_file(self, tmp_path):
        with pytest.raises(EventLogError):
            read_log(tmp_path / 'missing.ndjson')
