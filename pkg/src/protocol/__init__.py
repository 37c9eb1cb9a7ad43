# Protocol package
from .models import (
    HEADER_BYTES,
    MAX_FRAGMENTS,
    MSG_ID_MODULUS,
    BadFrameSize,
    BadHeader,
    BadLength,
    DatumTooLarge,
    Fragment,
    FragmentHeader,
    PayloadOverflow,
    ProtocolError,
)
from .codec import (
    DEFAULT_FRAME_BYTES,
    decode_frame,
    encode_frame,
    fragment_count,
    fragment_datum,
    max_datum_bytes,
    payload_capacity,
)
from .reassembly import (
    IngestOutcome,
    IngestResult,
    ReassemblyBuffer,
    ReassemblyStore,
    evict_stale,
    ingest_fragment,
)

__all__ = [
    'HEADER_BYTES',
    'MAX_FRAGMENTS',
    'MSG_ID_MODULUS',
    'BadFrameSize',
    'BadHeader',
    'BadLength',
    'DatumTooLarge',
    'Fragment',
    'FragmentHeader',
    'PayloadOverflow',
    'ProtocolError',
    'DEFAULT_FRAME_BYTES',
    'decode_frame',
    'encode_frame',
    'fragment_count',
    'fragment_datum',
    'max_datum_bytes',
    'payload_capacity',
    'IngestOutcome',
    'IngestResult',
    'ReassemblyBuffer',
    'ReassemblyStore',
    'evict_stale',
    'ingest_fragment',
]
