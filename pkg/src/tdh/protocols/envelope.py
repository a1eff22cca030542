"""Framed protocol message unit.

Byte layout (big-endian integers):

    session_id(16) | protocol_id(1) | round(1) | sender(4) | kind(1)
    | body_len(4) | body

VSS share envelopes are never broadcast; they travel only inside the
transport layer's encrypted point-to-point frames.
"""

from __future__ import annotations

import enum
import struct
from dataclasses import dataclass

SESSION_ID_LEN = 16
_HEADER = struct.Struct(">16sBBIBI")


class ProtocolId(enum.IntEnum):
    NAIVE_KEYGEN = 1
    NAIVE_EXCHANGE = 2
    NAIVE_RESHARE = 3
    THRESHOLD_KEYGEN = 4
    THRESHOLD_EXCHANGE = 5
    THRESHOLD_RESHARE = 6


class Kind(enum.IntEnum):
    COMMIT = 1
    DECOMMIT = 2
    VSS_SHARE = 3
    ACK = 4
    PUBKEY = 5


@dataclass(frozen=True)
class Envelope:
    session_id: bytes
    protocol_id: ProtocolId
    round: int
    sender: int
    kind: Kind
    body: bytes

    def to_bytes(self) -> bytes:
        if len(self.session_id) != SESSION_ID_LEN:
            raise ValueError("session id must be 16 bytes")
        return (
            _HEADER.pack(
                self.session_id,
                self.protocol_id,
                self.round,
                self.sender,
                self.kind,
                len(self.body),
            )
            + self.body
        )

    @classmethod
    def from_bytes(cls, data: bytes) -> "Envelope":
        if len(data) < _HEADER.size:
            raise ValueError("truncated envelope")
        sid, pid, rnd, sender, kind, blen = _HEADER.unpack_from(data)
        body = data[_HEADER.size :]
        if len(body) != blen:
            raise ValueError("envelope body length mismatch")
        return cls(sid, ProtocolId(pid), rnd, sender, Kind(kind), body)


def pack_points(points: list[bytes]) -> bytes:
    out = struct.pack(">H", len(points))
    for p in points:
        out += p
    return out


def unpack_points(data: bytes, point_len: int = 33) -> list[bytes]:
    if len(data) < 2:
        raise ValueError("truncated point list")
    (count,) = struct.unpack(">H", data[:2])
    rest = data[2:]
    if len(rest) != count * point_len:
        raise ValueError("point list length mismatch")
    return [rest[i * point_len : (i + 1) * point_len] for i in range(count)]
