"""
Per-datum accounting: every enqueued datum ends delivered, stored or dropped.
"""

from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Set, Tuple

Key = Tuple[int, int]

CHANNEL_LOSS = 'channel_loss'


@dataclass
class DatumEntry:
    id: int
    node: str
    kind: str
    size: int
    created_at: int
    data: bytes
    priority: str
    blob: Optional[str] = None
    part: Optional[int] = None
    keys: List[Key] = field(default_factory=list)
    retransmissions: int = 0
    delivered_at: Optional[int] = None
    received: Optional[bytes] = None
    drop_reason: Optional[str] = None

    @property
    def delivered(self) -> bool:
        return self.delivered_at is not None

    @property
    def match(self) -> bool:
        return self.received == self.data


class DatumLedger:
    """
    Datum registry keyed by id, with (src address, msg_id) → datum lookup.

    Final status precedence: delivered, then an explicit drop, then stored
    if any trace of the datum remains in the network, else channel_loss.
    """

    def __init__(self):
        self._entries: Dict[int, DatumEntry] = {}
        self._by_key: Dict[Key, int] = {}

    def __len__(self) -> int:
        return len(self._entries)

    def __getitem__(self, datum_id: int) -> DatumEntry:
        return self._entries[datum_id]

    def entries(self) -> List[DatumEntry]:
        return [self._entries[i] for i in sorted(self._entries)]

    def entries_for(self, node_id: str) -> List[DatumEntry]:
        return [e for e in self.entries() if e.node == node_id]

    def register(
        self,
        node: str,
        kind: str,
        data: bytes,
        now: int,
        priority: str,
        blob: Optional[str] = None,
        part: Optional[int] = None,
    ) -> DatumEntry:
        entry = DatumEntry(len(self._entries), node, kind, len(data), now, data, priority, blob, part)
        self._entries[entry.id] = entry
        return entry

    def bind(self, datum_id: int, key: Key):
        """Record that the datum went out under this key; a reused key rebinds."""
        self._entries[datum_id].keys.append(key)
        self._by_key[key] = datum_id

    def lookup(self, key: Optional[Key]) -> Optional[int]:
        if key is None:
            return None
        return self._by_key.get(key)

    def drop(self, datum_id: Optional[int], reason: str):
        """First explicit drop reason wins."""
        if datum_id is None:
            return
        entry = self._entries[datum_id]
        if entry.drop_reason is None:
            entry.drop_reason = reason

    def deliver(self, key: Key, data: bytes, now: int) -> Optional[DatumEntry]:
        datum_id = self._by_key.get(key)
        if datum_id is None:
            return None
        entry = self._entries[datum_id]
        if entry.delivered:
            return None
        entry.delivered_at = now
        entry.received = data
        return entry

    def status(self, entry: DatumEntry, traces: Set[int]) -> Tuple[str, Optional[str]]:
        if entry.delivered:
            return 'delivered', None
        if entry.drop_reason is not None:
            return 'dropped', entry.drop_reason
        if entry.id in traces:
            return 'stored', None
        return 'dropped', CHANNEL_LOSS

    def keys_to_ids(self, keys: Iterable[Key]) -> Set[int]:
        return {self._by_key[k] for k in keys if k in self._by_key}

    def classify(self, traces: Set[int]) -> dict:
        """
        Final ledger.

        Returns:
            {'summary': {...}, 'datums': [...]} where enqueued equals
            delivered + stored + dropped
        """
        summary = {'enqueued': 0, 'delivered': 0, 'stored': 0, 'dropped': 0, 'dropped_by_reason': {}}
        datums = []
        for entry in self.entries():
            status, reason = self.status(entry, traces)
            summary['enqueued'] += 1
            summary[status] += 1
            if reason is not None:
                by_reason = summary['dropped_by_reason']
                by_reason[reason] = by_reason.get(reason, 0) + 1
            datums.append({
                'id': entry.id,
                'node': entry.node,
                'kind': entry.kind,
                'size': entry.size,
                'created_at': entry.created_at,
                'status': status,
                'reason': reason,
                'delivered_at': entry.delivered_at,
                'match': entry.match if entry.delivered else None,
                'blob': entry.blob,
                'part': entry.part,
                'retransmissions': entry.retransmissions,
            })
        summary['dropped_by_reason'] = dict(sorted(summary['dropped_by_reason'].items()))
        return {'summary': summary, 'datums': datums}
