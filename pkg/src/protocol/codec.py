"""
Splitting a datum into fixed-size frames and the byte-exact wire codec.

Layout (big-endian):
    bytes 0-1  msg_id
    byte  2    frag_index
    byte  3    frag_total
    byte  4    src_node
    byte  5    payload_len
    bytes 6..  payload, zero-padded to the frame size
"""

import struct
from typing import List

from .models import (
    HEADER_BYTES,
    MAX_FRAGMENTS,
    BadFrameSize,
    BadHeader,
    BadLength,
    DatumTooLarge,
    Fragment,
    FragmentHeader,
    PayloadOverflow,
)

DEFAULT_FRAME_BYTES = 32

_HEADER = struct.Struct('>HBBBB')


def payload_capacity(frame_bytes: int) -> int:
    """Payload bytes per frame; raises BadFrameSize below 7 bytes."""
    if frame_bytes < HEADER_BYTES + 1:
        raise BadFrameSize(f"frame_bytes must be >= {HEADER_BYTES + 1}, got {frame_bytes}")
    return frame_bytes - HEADER_BYTES


def max_datum_bytes(frame_bytes: int) -> int:
    return payload_capacity(frame_bytes) * MAX_FRAGMENTS


def fragment_count(size: int, frame_bytes: int = DEFAULT_FRAME_BYTES) -> int:
    """Fragments a datum of `size` bytes splits into (at least 1)."""
    cap = payload_capacity(frame_bytes)
    return max(1, -(-size // cap))


def fragment_datum(
    src: int,
    msg_id: int,
    data: bytes,
    frame_bytes: int = DEFAULT_FRAME_BYTES,
) -> List[Fragment]:
    """
    Split data into index-ordered fragments.

    Empty data gives a single fragment with an empty payload.

    Raises:
        BadFrameSize: If frame_bytes < 7
        DatumTooLarge: If data needs more than 255 fragments
    """
    cap = payload_capacity(frame_bytes)
    if len(data) > cap * MAX_FRAGMENTS:
        raise DatumTooLarge(
            f"datum is {len(data)} bytes, limit is {cap * MAX_FRAGMENTS} for {frame_bytes}-byte frames"
        )

    total = fragment_count(len(data), frame_bytes)
    fragments = []
    for index in range(total):
        chunk = bytes(data[index * cap:(index + 1) * cap])
        header = FragmentHeader(msg_id, index, total, src, len(chunk))
        header.check()
        fragments.append(Fragment(header, chunk))
    return fragments


def encode_frame(fragment: Fragment, frame_bytes: int = DEFAULT_FRAME_BYTES) -> bytes:
    """
    Serialize a fragment to exactly frame_bytes bytes.

    Raises:
        BadFrameSize: If frame_bytes < 7
        PayloadOverflow: If the payload exceeds the frame capacity
        BadHeader: If a header field does not fit its width
    """
    cap = payload_capacity(frame_bytes)
    h = fragment.header
    if h.payload_len > cap:
        raise PayloadOverflow(f"payload_len {h.payload_len} exceeds capacity {cap}")
    h.check()
    wire = _HEADER.pack(h.msg_id, h.frag_index, h.frag_total, h.src_node, h.payload_len)
    return wire + fragment.payload + bytes(cap - h.payload_len)


def decode_frame(wire: bytes, frame_bytes: int = DEFAULT_FRAME_BYTES) -> Fragment:
    """
    Parse a wire frame. Trailing padding is ignored.

    Raises:
        BadLength: If len(wire) != frame_bytes
        BadHeader: On payload_len over capacity, frag_total 0 or index out of range
    """
    if len(wire) != frame_bytes:
        raise BadLength(f"frame is {len(wire)} bytes, expected {frame_bytes}")
    cap = payload_capacity(frame_bytes)
    msg_id, index, total, src, length = _HEADER.unpack_from(wire)
    if length > cap:
        raise BadHeader(f"payload_len {length} exceeds capacity {cap}")
    header = FragmentHeader(msg_id, index, total, src, length)
    header.check()
    return Fragment(header, bytes(wire[HEADER_BYTES:HEADER_BYTES + length]))
