"""Hash commitments used by every commit-then-reveal protocol round.

commit(m) binds to m while hiding it: c = SHA-256(tag ‖ nonce ‖ m) with a
fresh 32-byte nonce kept secret until opening. Domain tags separate the
protocol families (keygen / exchange / re-sharing) so a commitment can
never be replayed across them.
"""

from __future__ import annotations

import hashlib
import hmac
import secrets
import struct
from dataclasses import dataclass
from typing import Callable

Rng = Callable[[int], bytes]

DIGEST_LEN = 32
NONCE_LEN = 32

TAG_KEYGEN = b"KGC"
TAG_EXCHANGE = b"EXC"
TAG_RESHARE = b"RSC"

_TAGS = (TAG_KEYGEN, TAG_EXCHANGE, TAG_RESHARE)

MAX_MESSAGE_LEN = 2**32 - 1


class MismatchError(Exception):
    """Decommitment does not open the commitment (equivocation/corruption)."""


def _digest(tag: bytes, nonce: bytes, message: bytes) -> bytes:
    return hashlib.sha256(tag + nonce + message).digest()


@dataclass(frozen=True)
class Commitment:
    c: bytes

    def __post_init__(self):
        if len(self.c) != DIGEST_LEN:
            raise ValueError("commitment must be 32 bytes")

    def to_bytes(self) -> bytes:
        return self.c

    @classmethod
    def from_bytes(cls, data: bytes) -> "Commitment":
        return cls(data)


@dataclass(frozen=True)
class Decommitment:
    nonce: bytes
    message: bytes

    def __post_init__(self):
        if len(self.nonce) != NONCE_LEN:
            raise ValueError("nonce must be 32 bytes")

    def to_bytes(self) -> bytes:
        return self.nonce + struct.pack(">I", len(self.message)) + self.message

    @classmethod
    def from_bytes(cls, data: bytes) -> "Decommitment":
        if len(data) < NONCE_LEN + 4:
            raise ValueError("truncated decommitment")
        nonce = data[:NONCE_LEN]
        (mlen,) = struct.unpack(">I", data[NONCE_LEN : NONCE_LEN + 4])
        message = data[NONCE_LEN + 4 :]
        if len(message) != mlen:
            raise ValueError("decommitment length mismatch")
        return cls(nonce, message)


def commit(
    message: bytes, rng: Rng | None = None, tag: bytes = TAG_KEYGEN
) -> tuple[Commitment, Decommitment]:
    if tag not in _TAGS:
        raise ValueError(f"unknown domain tag {tag!r}")
    if len(message) > MAX_MESSAGE_LEN:
        raise ValueError("message too long")
    nonce = (rng or secrets.token_bytes)(NONCE_LEN)
    return Commitment(_digest(tag, nonce, message)), Decommitment(nonce, message)


def open_commitment(
    commitment: Commitment, decommitment: Decommitment, tag: bytes = TAG_KEYGEN
) -> bytes:
    """Return the committed message, or raise MismatchError.

    Digest comparison is constant-time; protocols convert a mismatch
    into a session abort.
    """
    expected = _digest(tag, decommitment.nonce, decommitment.message)
    if not hmac.compare_digest(expected, commitment.c):
        raise MismatchError("decommitment does not match commitment")
    return decommitment.message
