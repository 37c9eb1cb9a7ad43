"""
Metrics as a fold over event-log records.

The engine applies every record to a Metrics instance as it is emitted; a
saved log reduced with `reduce_records` gives the same result.
"""

from dataclasses import asdict, dataclass, field
from typing import Any, Dict, Iterable, List, Optional

from .eventlog import Record

COUNTERS = (
    'frames_sent',
    'copies_sent',
    'copies_lost',
    'bytes_raw',
    'frames_received',
    'frames_forwarded',
    'frames_stored',
    'frames_dropped',
    'duplicates',
    'decode_errors',
    'fragments_accepted',
    'datums_enqueued',
    'datums_delivered',
    'datums_stored',
    'datums_dropped',
    'bytes_goodput',
)


@dataclass
class NodeCounters:
    frames_sent: int = 0
    copies_sent: int = 0
    copies_lost: int = 0
    bytes_raw: int = 0
    frames_received: int = 0
    frames_forwarded: int = 0
    frames_stored: int = 0
    frames_dropped: int = 0
    duplicates: int = 0
    decode_errors: int = 0
    fragments_accepted: int = 0
    datums_enqueued: int = 0
    datums_delivered: int = 0
    datums_stored: int = 0
    datums_dropped: int = 0
    bytes_goodput: int = 0
    dropped_reasons: Dict[str, int] = field(default_factory=dict)
    energy: Optional[Dict[str, Any]] = None

    def to_dict(self) -> dict:
        data = asdict(self)
        data['dropped_reasons'] = dict(sorted(self.dropped_reasons.items()))
        return data


@dataclass
class PassRow:
    """Utilization of one communication window."""

    ephemeris: str
    start: int
    end: int
    bytes_raw: int = 0
    bytes_goodput: int = 0
    frames: int = 0
    duplicates: int = 0
    energy_j: float = 0.0
    slots: List[dict] = field(default_factory=list)
    raw_by_node: Dict[str, int] = field(default_factory=dict)

    def contains(self, t: int) -> bool:
        return self.start <= t < self.end

    def to_dict(self) -> dict:
        data = asdict(self)
        data['energy_j'] = round(self.energy_j, 6)
        data['raw_by_node'] = dict(sorted(self.raw_by_node.items()))
        return data


class Metrics:
    """Per-node counters, per-pass rows, step results and the final ledger."""

    def __init__(self):
        self.scenario: Optional[str] = None
        self.seed: Optional[int] = None
        self.config_hash: Optional[str] = None
        self.targets: Dict[str, Optional[str]] = {}
        self.tx_power: Dict[str, float] = {}
        self.nodes: Dict[str, NodeCounters] = {}
        self.passes: List[PassRow] = []
        self.steps: List[dict] = []
        self.ledger: Dict[str, Any] = {}
        self.violations: Dict[str, int] = {}
        self.end_time: Optional[int] = None
        self._handlers = {
            'RunStart': self._run_start,
            'TickSatComms': self._tick,
            'FrameArrival': self._arrival,
            'EnqueueDatum': self._enqueue,
            'WindowOpen': self._window_open,
            'ScriptStep': self._step,
            'RunEnd': self._run_end,
        }

    def node(self, node_id: str) -> NodeCounters:
        counters = self.nodes.get(node_id)
        if counters is None:
            counters = self.nodes[node_id] = NodeCounters()
        return counters

    def counter(self, node_id: str, name: str) -> int:
        if name not in COUNTERS:
            raise KeyError(f"unknown counter {name!r}")
        return getattr(self.node(node_id), name)

    def apply(self, record: Record):
        handler = self._handlers.get(record['kind'])
        if handler is not None:
            handler(record)

    def _pass_for(self, node_id: str, t: int) -> Optional[PassRow]:
        eph = self.targets.get(node_id)
        if eph is None:
            return None
        for row in reversed(self.passes):
            if row.ephemeris == eph and row.contains(t):
                return row
        return None

    def pass_raw_bytes(self, eph_id: str, start: int, node_id: Optional[str] = None) -> int:
        for row in self.passes:
            if row.ephemeris == eph_id and row.start == start:
                return row.raw_by_node.get(node_id, 0) if node_id else row.bytes_raw
        return 0

    # Record handlers

    def _run_start(self, record: Record):
        d = record['detail']
        self.scenario = d['scenario']
        self.seed = d['seed']
        self.config_hash = d['config_hash']
        self.targets = dict(d['targets'])
        self.tx_power = {n: r['tx_power_w'] for n, r in d['radios'].items()}
        for node_id in d['nodes']:
            self.node(node_id)

    def _tick(self, record: Record):
        burst = record['detail'].get('burst')
        if burst is None:
            return
        node_id = record['node']
        counters = self.node(node_id)
        raw = burst['copies'] * burst['frame_bytes']
        counters.frames_sent += 1
        counters.copies_sent += burst['copies']
        counters.copies_lost += len(burst['lost'])
        counters.bytes_raw += raw

        row = self._pass_for(node_id, burst['start'])
        if row is not None:
            row.bytes_raw += raw
            row.frames += 1
            row.raw_by_node[node_id] = row.raw_by_node.get(node_id, 0) + raw
            row.energy_j += self.tx_power.get(node_id, 0.0) * (burst['end'] - burst['start']) / 1000.0

    def _arrival(self, record: Record):
        d = record['detail']
        counters = self.node(record['node'])
        outcome = d['outcome']

        if outcome == 'lost':
            self.node(d['from']).copies_lost += 1
            return
        if outcome == 'dropped':
            counters.frames_dropped += 1
            if d['reason'] == 'decode_error':
                counters.decode_errors += 1
            if d['reason'] != 'node_offline':
                counters.frames_received += 1
            return

        counters.frames_received += 1
        if outcome == 'forwarded':
            counters.frames_forwarded += 1
            if d.get('lost'):
                counters.copies_lost += 1
        elif outcome == 'stored':
            counters.frames_stored += 1
        elif outcome == 'Duplicate':
            counters.duplicates += 1
            row = self._pass_for(d['origin'], d['sent_at'])
            if row is not None:
                row.duplicates += 1
        elif outcome in ('Stored', 'Completed'):
            counters.fragments_accepted += 1
            self.node(d['origin']).bytes_goodput += d['payload_len']
            row = self._pass_for(d['origin'], d['sent_at'])
            if row is not None:
                row.bytes_goodput += d['payload_len']

    def _enqueue(self, record: Record):
        if not record['detail'].get('retransmit'):
            self.node(record['node']).datums_enqueued += 1

    def _window_open(self, record: Record):
        d = record['detail']
        self.passes.append(PassRow(d['ephemeris'], d['start'], d['end'], slots=list(d['slots'])))

    def _step(self, record: Record):
        self.steps.append(dict(record['detail'], t=record['t']))

    def _run_end(self, record: Record):
        d = record['detail']
        self.end_time = record['t']
        self.ledger = d['ledger']
        self.violations = dict(d['violations'])
        for datum in d['datums']:
            counters = self.node(datum['node'])
            if datum['status'] == 'delivered':
                counters.datums_delivered += 1
            elif datum['status'] == 'stored':
                counters.datums_stored += 1
            else:
                counters.datums_dropped += 1
                reason = datum['reason']
                counters.dropped_reasons[reason] = counters.dropped_reasons.get(reason, 0) + 1
        for node_id, energy in d['energy'].items():
            self.node(node_id).energy = energy

    @property
    def passed(self) -> bool:
        return all(s['ok'] for s in self.steps)

    def to_dict(self) -> dict:
        return {
            'scenario': self.scenario,
            'seed': self.seed,
            'config_hash': self.config_hash,
            'end_time': self.end_time,
            'nodes': {n: c.to_dict() for n, c in sorted(self.nodes.items())},
            'passes': [p.to_dict() for p in self.passes],
            'steps': self.steps,
            'ledger': self.ledger,
            'violations': self.violations,
            'passed': self.passed,
        }


def reduce_records(records: Iterable[Record]) -> Metrics:
    metrics = Metrics()
    for record in records:
        metrics.apply(record)
    return metrics
