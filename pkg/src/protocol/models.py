"""
Fragment data types and the protocol error family.
"""

from dataclasses import dataclass
from typing import Tuple

HEADER_BYTES = 6
MAX_FRAGMENTS = 255
MSG_ID_MODULUS = 1 << 16


class ProtocolError(ValueError):
    """Base class for fragmentation and wire-format errors."""


class DatumTooLarge(ProtocolError):
    """Datum needs more than 255 fragments."""


class BadFrameSize(ProtocolError):
    """Frame cannot hold the header plus one payload byte."""


class PayloadOverflow(ProtocolError):
    """Fragment payload does not fit the frame."""


class BadLength(ProtocolError):
    """Wire frame length differs from the configured frame size."""


class BadHeader(ProtocolError):
    """Header fields are inconsistent or out of range."""


@dataclass(frozen=True)
class FragmentHeader:
    """
    Reassembly header carried in front of every payload slice.

    Attributes:
        msg_id: Per-source sequence id, 16 bits
        frag_index: 0-based position of this slice
        frag_total: Number of slices in the datum
        src_node: Numeric address of the originating node
        payload_len: Payload bytes in this frame
    """

    msg_id: int
    frag_index: int
    frag_total: int
    src_node: int
    payload_len: int

    @property
    def key(self) -> Tuple[int, int]:
        return (self.src_node, self.msg_id)

    def check(self):
        """
        Raise BadHeader unless every field fits its width and the index is in range.
        """
        if not 0 <= self.msg_id < MSG_ID_MODULUS:
            raise BadHeader(f"msg_id out of range: {self.msg_id}")
        for name in ('frag_index', 'frag_total', 'src_node', 'payload_len'):
            value = getattr(self, name)
            if not 0 <= value <= 0xFF:
                raise BadHeader(f"{name} out of range: {value}")
        if self.frag_total == 0:
            raise BadHeader("frag_total is 0")
        if self.frag_index >= self.frag_total:
            raise BadHeader(
                f"frag_index {self.frag_index} >= frag_total {self.frag_total}"
            )


@dataclass(frozen=True)
class Fragment:
    """One header plus its payload slice."""

    header: FragmentHeader
    payload: bytes

    def __post_init__(self):
        if len(self.payload) != self.header.payload_len:
            raise BadHeader(
                f"payload is {len(self.payload)} bytes, header says {self.header.payload_len}"
            )

    @property
    def key(self) -> Tuple[int, int]:
        return self.header.key

    @property
    def index(self) -> int:
        return self.header.frag_index
