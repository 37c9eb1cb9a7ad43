"""
Event types for the discrete-event engine.
"""

from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, Optional


class EventKind(str, Enum):
    FRAME_ARRIVAL = 'FrameArrival'
    TICK_SATCOMMS = 'TickSatComms'
    WINDOW_OPEN = 'WindowOpen'
    WINDOW_CLOSE = 'WindowClose'
    ENQUEUE_DATUM = 'EnqueueDatum'
    LINK_STATE_CHANGE = 'LinkStateChange'
    SCRIPT_STEP = 'ScriptStep'
    HOUSEKEEPING = 'Housekeeping'


@dataclass(order=True)
class Event:
    """Ordered by (time, seq); seq is unique within a run."""

    time: int
    seq: int
    target: Optional[str] = field(compare=False)
    kind: EventKind = field(compare=False)
    payload: Dict[str, Any] = field(default_factory=dict, compare=False)
