"""
Append-only NDJSON event log.

One canonical JSON object per line: sorted keys, compact separators.
"""

import json
import logging
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional, TextIO, Union

logger = logging.getLogger(__name__)

SCHEMA_VERSION = 1

Record = Dict[str, Any]


class EventLogError(ValueError):
    """Unreadable or malformed event log."""


class SimulationAborted(RuntimeError):
    """The log sink failed; the records written so far are attached."""

    def __init__(self, message: str, records: List[Record]):
        super().__init__(message)
        self.records = records


def canonical_json(data: Any) -> str:
    return json.dumps(data, sort_keys=True, separators=(',', ':'))


def make_record(t: int, seq: int, node: Optional[str], kind: str, detail: Dict[str, Any]) -> Record:
    return {'t': t, 'seq': seq, 'node': node, 'kind': kind, 'detail': detail}


class EventLog:
    """
    In-memory record stream with an optional file sink.

    Each record is written to the sink as it is appended, so a failed run
    leaves every record up to the failure on disk.
    """

    def __init__(self, path: Optional[Union[str, Path]] = None):
        self.path = Path(path) if path else None
        self.records: List[Record] = []
        self._sink: Optional[TextIO] = None

    def __len__(self) -> int:
        return len(self.records)

    def append(self, record: Record):
        """
        Keep a record and stream it to the sink.

        Raises:
            SimulationAborted: If the sink cannot be opened or written
        """
        self.records.append(record)
        if self.path is None:
            return
        try:
            if self._sink is None:
                self.path.parent.mkdir(parents=True, exist_ok=True)
                self._sink = self.path.open('w', encoding='utf-8')
            self._sink.write(canonical_json(record) + '\n')
            self._sink.flush()
        except OSError as e:
            self._release()
            raise SimulationAborted(f"cannot write event log {self.path}: {e}", list(self.records)) from e

    def lines(self) -> List[str]:
        return [canonical_json(r) for r in self.records]

    def dumps(self) -> str:
        return ''.join(line + '\n' for line in self.lines())

    def close(self):
        """
        Close the sink.

        Raises:
            SimulationAborted: If the final flush fails
        """
        if self._sink is None:
            return
        try:
            self._sink.close()
            logger.debug("wrote %d records to %s", len(self.records), self.path)
        except OSError as e:
            raise SimulationAborted(f"cannot write event log {self.path}: {e}", list(self.records)) from e
        finally:
            self._sink = None

    def _release(self):
        if self._sink is not None:
            try:
                self._sink.close()
            except OSError:
                pass
            self._sink = None


def write_records(records: Iterable[Record], path: Union[str, Path]) -> Path:
    """Write records as NDJSON in one go."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(''.join(canonical_json(r) + '\n' for r in records), encoding='utf-8')
    return path


def read_log(path: Union[str, Path]) -> List[Record]:
    """
    Load records from an NDJSON log.

    Raises:
        EventLogError: On unreadable files, bad JSON or unknown schema
    """
    try:
        text = Path(path).read_text(encoding='utf-8')
    except OSError as e:
        raise EventLogError(f"cannot read {path}: {e}") from e
    return parse_log(text.splitlines())


def parse_log(lines: Iterable[str]) -> List[Record]:
    records = []
    for n, line in enumerate(lines, start=1):
        if not line.strip():
            continue
        try:
            records.append(json.loads(line))
        except json.JSONDecodeError as e:
            raise EventLogError(f"line {n}: {e.msg}") from e

    if not records or records[0].get('kind') != 'RunStart':
        raise EventLogError("log does not start with a RunStart record")
    version = records[0]['detail'].get('schema_version')
    if version != SCHEMA_VERSION:
        raise EventLogError(f"unsupported log schema version {version}")
    return records
