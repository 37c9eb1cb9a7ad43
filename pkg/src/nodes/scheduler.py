"""
Shared-uplink slot assignment for several vehicles in one pass.
"""

from dataclasses import dataclass
from typing import Dict, Iterable, Sequence

from ..orbit import PassWindow


@dataclass(frozen=True)
class SlotDemand:
    node_id: str
    queued_bytes: int
    quantum_ms: int


@dataclass(frozen=True)
class Slot:
    node_id: str
    start: int
    end: int

    @property
    def duration(self) -> int:
        return self.end - self.start

    def contains(self, t: int) -> bool:
        return self.start <= t < self.end

    def to_dict(self) -> dict:
        return {'node': self.node_id, 'start': self.start, 'end': self.end}


def schedule_multi_vehicle(vehicles: Sequence[SlotDemand], window: PassWindow) -> Dict[str, Slot]:
    """
    Partition a window into contiguous slots proportional to queued bytes.

    Slots are whole quanta (one burst of the slowest radio). Whole quanta
    left after flooring go one each by largest fractional share, ties to
    the larger queue and then declaration order. The sub-quantum tail goes
    to the largest queue. Vehicles with nothing queued get no slot, unless
    every queue is empty.

    Raises:
        ValueError: If no vehicles are given
    """
    if not vehicles:
        raise ValueError("at least one vehicle is required")

    if len(vehicles) == 1:
        only = vehicles[0]
        return {only.node_id: Slot(only.node_id, window.start, window.end)}

    quantum = max(v.quantum_ms for v in vehicles)
    whole = window.duration // quantum
    tail = window.duration - whole * quantum
    total = sum(v.queued_bytes for v in vehicles)

    order = list(range(len(vehicles)))
    largest = min(order, key=lambda i: (-vehicles[i].queued_bytes, i))

    if total == 0:
        quanta = [0] * len(vehicles)
        quanta[largest] = whole
    else:
        quanta = [whole * v.queued_bytes // total for v in vehicles]
        fractions = [whole * v.queued_bytes % total for v in vehicles]
        leftover = whole - sum(quanta)
        ranked = sorted(order, key=lambda i: (-fractions[i], -vehicles[i].queued_bytes, i))
        for i in ranked[:leftover]:
            quanta[i] += 1

    slots = {}
    cursor = window.start
    for i, vehicle in enumerate(vehicles):
        length = quanta[i] * quantum + (tail if i == largest else 0)
        if quanta[i] == 0 and i != largest:
            continue
        slots[vehicle.node_id] = Slot(vehicle.node_id, cursor, cursor + length)
        cursor += length
    return slots


def slots_disjoint(slots: Iterable[Slot], window: PassWindow) -> bool:
    """True iff slots are pairwise disjoint and inside the window."""
    ordered = sorted(slots, key=lambda s: (s.start, s.end))
    for slot in ordered:
        if slot.start < window.start or slot.end > window.end or slot.start > slot.end:
            return False
    return all(a.end <= b.start for a, b in zip(ordered, ordered[1:]))
