"""
Run reports, the radio profile comparison and pass plans.

A report is derived only from event-log records, so regenerating it from a
saved log gives the same document as the one produced online.
"""

import json
from dataclasses import dataclass, field
from typing import Any, Dict, Iterable, List, Optional

from jinja2 import Template

from ..link import (
    RadioProfile,
    builtin_profiles,
    frame_airtime,
    pass_capacity,
    pass_goodput,
)
from ..orbit import OrbitEphemeris, windows_between
from ..sim import Record, reduce_records
from ..utils.timezone import TimezoneHandler


@dataclass
class Report:
    """
    Attributes:
        scenario: Scenario name
        seed: Run seed
        config_hash: SHA-256 of the canonical scenario document
        nodes: Per-node counters
        passes: Per-window utilization rows
        assertions: Scripted step results in execution order
        ledger: Final datum ledger summary
        violations: Node → time the endurance limit was exceeded
    """

    scenario: str
    seed: int
    config_hash: str
    end_time: int
    nodes: Dict[str, Dict[str, Any]] = field(default_factory=dict)
    passes: List[Dict[str, Any]] = field(default_factory=list)
    assertions: List[Dict[str, Any]] = field(default_factory=list)
    ledger: Dict[str, Any] = field(default_factory=dict)
    violations: Dict[str, int] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(a['ok'] for a in self.assertions)

    @property
    def failures(self) -> List[Dict[str, Any]]:
        return [a for a in self.assertions if not a['ok']]

    def to_dict(self) -> dict:
        return {
            'scenario': self.scenario,
            'seed': self.seed,
            'config_hash': self.config_hash,
            'end_time': self.end_time,
            'passed': self.passed,
            'nodes': self.nodes,
            'passes': self.passes,
            'assertions': self.assertions,
            'ledger': self.ledger,
            'violations': self.violations,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2) + '\n'

    def summary(self) -> dict:
        """Stable subset used for golden files."""
        return {
            'scenario': self.scenario,
            'seed': self.seed,
            'passed': self.passed,
            'ledger': self.ledger,
            'assertions': [{'name': a['name'], 'result': a['result']} for a in self.assertions],
            'passes': [
                {k: p[k] for k in ('ephemeris', 'start', 'end', 'bytes_raw', 'bytes_goodput', 'frames', 'duplicates')}
                for p in self.passes
            ],
        }


def build_report(records: Iterable[Record]) -> Report:
    metrics = reduce_records(records)
    data = metrics.to_dict()
    return Report(
        scenario=data['scenario'],
        seed=data['seed'],
        config_hash=data['config_hash'],
        end_time=data['end_time'],
        nodes=data['nodes'],
        passes=data['passes'],
        assertions=data['steps'],
        ledger=data['ledger'],
        violations=data['violations'],
    )


REPORT_TEMPLATE = Template('''\
Scenario: {{ r.scenario }} (seed {{ r.seed }})
Config:   {{ r.config_hash[:16] }}
Result:   {{ 'PASS' if r.passed else 'FAIL' }}

Assertions
{% for a in r.assertions -%}
  {{ '%-4s'|format('ok' if a.ok else 'FAIL') }} {{ '%9s'|format(a.t) }}  {{ '%-48s'|format(a.name) }} {{ a.result }}{% if a.expected != 'pass' %} (expected {{ a.expected }}){% endif %}{% if a.attempts > 1 %} [{{ a.attempts }} attempts]{% endif %}
{% for note in a.notes %}       - {{ note }}
{% endfor -%}
{% else %}  (none)
{% endfor %}
Nodes                     sent  copies  lost   recv   dups  fwd  stored  dropped  goodput
{% for name, n in r.nodes.items() -%}
  {{ '%-22s'|format(name) }} {{ '%5d'|format(n.frames_sent) }} {{ '%7d'|format(n.copies_sent) }} {{ '%5d'|format(n.copies_lost) }} {{ '%6d'|format(n.frames_received) }} {{ '%6d'|format(n.duplicates) }} {{ '%4d'|format(n.frames_forwarded) }} {{ '%7d'|format(n.frames_stored) }} {{ '%8d'|format(n.frames_dropped) }} {{ '%8d'|format(n.bytes_goodput) }}
{% endfor %}
Passes
{% for p in r.passes -%}
  {{ '%-12s'|format(p.ephemeris) }} [{{ p.start }}, {{ p.end }})  raw {{ p.bytes_raw }} B  goodput {{ p.bytes_goodput }} B  frames {{ p.frames }}  dups {{ p.duplicates }}  energy {{ '%.1f'|format(p.energy_j) }} J
{% else %}  (none)
{% endfor %}
Datums: {{ r.ledger.enqueued }} enqueued, {{ r.ledger.delivered }} delivered, {{ r.ledger.stored }} stored, {{ r.ledger.dropped }} dropped
{% for reason, count in r.ledger.dropped_by_reason.items() %}  {{ reason }}: {{ count }}
{% endfor -%}
{% for name, t in r.violations.items() %}Endurance exceeded: {{ name }} at t={{ t }}
{% endfor -%}
''')


def render_text(report: Report) -> str:
    return REPORT_TEMPLATE.render(r=report)


def profile_rows(window_ms: int, profiles: Optional[Dict[str, RadioProfile]] = None) -> List[dict]:
    """
    One comparison row per radio profile for a window of the given length.

    Raises:
        ValueError: If window_ms <= 0
    """
    if window_ms <= 0:
        raise ValueError(f"window must be > 0, got {window_ms} ms")
    rows = []
    for name, profile in (profiles or builtin_profiles()).items():
        rows.append({
            'name': name,
            'frame_bytes': profile.frame_bytes,
            'air_rate_bps': profile.air_rate_bps,
            'redundancy': profile.redundancy,
            'airtime_ms': frame_airtime(profile),
            'capacity_bytes': pass_capacity(profile, window_ms),
            'goodput_bytes': pass_goodput(profile, window_ms, profile.payload_capacity),
            'energy_j': profile.tx_power_w * window_ms / 1000,
        })
    return rows


PROFILE_TEMPLATE = Template('''\
Radio profiles over a {{ window }} window
  profile        frame B  rate b/s  copies  airtime ms  capacity B  goodput B  energy J
{% for p in rows -%}
  {{ '%-14s'|format(p.name) }} {{ '%7d'|format(p.frame_bytes) }} {{ '%9d'|format(p.air_rate_bps) }} {{ '%7d'|format(p.redundancy) }} {{ '%11d'|format(p.airtime_ms) }} {{ '%11d'|format(p.capacity_bytes) }} {{ '%10d'|format(p.goodput_bytes) }} {{ '%9.1f'|format(p.energy_j) }}
{% endfor -%}
''')


def render_profiles(window_ms: int, profiles: Optional[Dict[str, RadioProfile]] = None) -> str:
    rows = profile_rows(window_ms, profiles)
    return PROFILE_TEMPLATE.render(window=TimezoneHandler.format_duration(window_ms), rows=rows)


def pass_plan_rows(
    eph: OrbitEphemeris,
    t_from: int,
    t_to: int,
    profile: RadioProfile,
    epoch: Optional[str] = None,
    timezone: str = 'UTC',
) -> List[dict]:
    """
    Windows overlapping [t_from, t_to] with their capacity on one radio.

    Raises:
        OrbitError: If t_from > t_to
    """
    tz = TimezoneHandler(timezone)
    base = tz.parse_epoch(epoch)
    rows = []
    for window in windows_between(eph, t_from, t_to):
        rows.append({
            'start': window.start,
            'end': window.end,
            'start_local': tz.format_sim_time(base, window.start),
            'end_local': tz.format_sim_time(base, window.end),
            'capacity_bytes': pass_capacity(profile, window.duration),
            'goodput_bytes': pass_goodput(profile, window.duration, profile.payload_capacity),
        })
    return rows


PLAN_TEMPLATE = Template('''\
Passes of {{ eph.id }} ({{ profile.name }}): period {{ eph.period }} ms, window {{ eph.window }} ms
{% for w in rows -%}
  {{ '%3d'|format(loop.index) }}  {{ '%12d'|format(w.start) }} → {{ '%12d'|format(w.end) }}  {{ w.start_local }} → {{ w.end_local }}  capacity {{ w.capacity_bytes }} B  goodput {{ w.goodput_bytes }} B
{% else %}  (no windows)
{% endfor -%}
''')


def render_pass_plan(eph: OrbitEphemeris, rows: List[dict], profile: RadioProfile) -> str:
    return PLAN_TEMPLATE.render(eph=eph, rows=rows, profile=profile)
