"""
Scripted assertions for canned scenarios.
"""

from dataclasses import dataclass
from typing import Any, Dict, Tuple


@dataclass(frozen=True)
class ScriptAssertion:
    """
    One scripted step: actions at a time, then a predicate.

    Attributes:
        name: Step name shown in reports
        at_ms: When the step runs
        expect: Predicate call, e.g. {'predicate': 'link_up', 'link': 'uplink'}
        actions: Actions applied before the predicate
        on_fail: Recovery actions; the step is retried once after them
        expected: 'pass' or 'fail'
        row: Script row this step reproduces, or 'extension'
    """

    name: str
    at_ms: int
    expect: Dict[str, Any]
    actions: Tuple[Dict[str, Any], ...] = ()
    on_fail: Tuple[Dict[str, Any], ...] = ()
    expected: str = 'pass'
    row: str = 'extension'

    def to_dict(self) -> dict:
        return {
            'name': self.name,
            'row': self.row,
            'at_ms': self.at_ms,
            'actions': [dict(a) for a in self.actions],
            'on_fail': [dict(a) for a in self.on_fail],
            'expect': dict(self.expect),
            'expected': self.expected,
        }


def action(kind: str, **params) -> Dict[str, Any]:
    return {'type': kind, **params}


def expect(predicate: str, **params) -> Dict[str, Any]:
    return {'predicate': predicate, **params}
