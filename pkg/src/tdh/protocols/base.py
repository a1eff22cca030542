"""Shared machinery for the six round-based protocol state machines.

A session is a pure message-in/message-out engine: it performs no I/O,
owns an injected randomness source, and advances through strict barrier
rounds — no round-k+1 message is emitted until every expected round-k
message has arrived and verified. Buffered messages are processed in
sender order, so outputs are deterministic for fixed rngs regardless of
arrival interleaving. Any verification failure is terminal: the session
refuses all further input and never produces an output.
"""

from __future__ import annotations

import enum
import hashlib
import secrets
from dataclasses import dataclass, field
from typing import Optional

from ..groups import (
    CurveId,
    GroupPoint,
    GroupScalar,
    Rng,
    decode_point,
    encode_point,
    sanitize_point,
    to_x25519_u,
)
from .envelope import SESSION_ID_LEN, Envelope, Kind, ProtocolId

PSK_TAG = b"TDH-PSK-v1"


class ProtocolError(Exception):
    """Base for protocol failures; every one of these aborts the session."""


class CommitmentMismatch(ProtocolError):
    pass


class FeldmanReject(ProtocolError):
    pass


class DuplicateMessage(ProtocolError):
    pass


class UnknownSender(ProtocolError):
    pass


class ProtocolViolation(ProtocolError):
    """Malformed, mistimed or mistyped message."""


class InvalidContribution(ProtocolError):
    """A contributed group element failed to decode or collapsed to the
    identity under sanitization."""


class ExchangeFailure(ProtocolError):
    """Shared-secret computation failed (bad peer key / identity result)."""


class KeyMismatch(ProtocolError):
    """Re-sharing verification failed: new shares do not preserve the key."""


class SessionAborted(ProtocolError):
    """Raised on any input after the session failed or finished."""


class Scheme(enum.Enum):
    NAIVE = "naive"
    THRESHOLD = "threshold"


@dataclass(frozen=True)
class SchemeParams:
    scheme: Scheme
    curve: CurveId
    t: int
    n: int

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("committee size must be >= 1")
        if self.scheme is Scheme.NAIVE:
            if self.t != self.n - 1:
                raise ValueError("naive scheme requires t = n - 1")
        elif not 0 <= self.t < self.n:
            raise ValueError("threshold scheme requires 0 <= t < n")

    @property
    def committee(self) -> list[int]:
        return list(range(1, self.n + 1))


@dataclass
class KeyShareRecord:
    params: SchemeParams
    self_id: int
    private_share: GroupScalar
    public_share: GroupPoint
    public_key: GroupPoint
    vss_commitments: Optional[list[GroupPoint]] = None

    def to_dict(self) -> dict:
        d = {
            "scheme": self.params.scheme.value,
            "curve": self.params.curve.value,
            "t": self.params.t,
            "n": self.params.n,
            "self_id": self.self_id,
            "private_share": self.private_share.to_bytes().hex(),
            "public_share": encode_point(self.public_share).hex(),
            "public_key": encode_point(self.public_key).hex(),
        }
        if self.vss_commitments is not None:
            d["vss_commitments"] = [encode_point(p).hex() for p in self.vss_commitments]
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "KeyShareRecord":
        curve = CurveId(d["curve"])
        params = SchemeParams(Scheme(d["scheme"]), curve, d["t"], d["n"])
        vss = d.get("vss_commitments")
        return cls(
            params=params,
            self_id=d["self_id"],
            private_share=GroupScalar.from_bytes(
                bytes.fromhex(d["private_share"]), curve
            ),
            public_share=decode_point(bytes.fromhex(d["public_share"]), curve),
            public_key=decode_point(bytes.fromhex(d["public_key"]), curve),
            vss_commitments=(
                [decode_point(bytes.fromhex(p), curve) for p in vss]
                if vss is not None
                else None
            ),
        )


@dataclass(frozen=True)
class ExchangeOutput:
    shared_point: GroupPoint
    psk: bytes


@dataclass(frozen=True)
class ReshareComplete:
    """Output for an old-committee member not part of the new committee."""

    public_key: GroupPoint


def psk_point_bytes(point: GroupPoint) -> bytes:
    """Encoding of the shared point hashed into the PSK.

    On Curve25519 this is the bare Montgomery u — the exact bytes a
    classic X25519 peer obtains as its shared secret, so both sides can
    derive the same PSK. On P-256 it is the compressed encoding.
    """
    clean = sanitize_point(point)
    if clean.curve is CurveId.CURVE25519:
        return to_x25519_u(clean)
    return encode_point(clean)


def derive_psk(shared_point: GroupPoint) -> bytes:
    return hashlib.sha256(PSK_TAG + psk_point_bytes(shared_point)).digest()


def new_session_id(rng: Rng | None = None) -> bytes:
    return (rng or secrets.token_bytes)(SESSION_ID_LEN)


@dataclass(frozen=True)
class Outgoing:
    """An envelope plus its addressing: recipient None means broadcast."""

    envelope: Envelope
    recipient: Optional[int] = None


@dataclass
class StepResult:
    outgoing: list[Outgoing] = field(default_factory=list)
    output: object | None = None


class Session:
    """Barrier-round driver; subclasses define expectations and handlers.

    Subclass contract:
      - ``_start()`` returns the first-round messages;
      - ``_expected(round)`` returns the set of (sender, kind) pairs the
        round waits for (may be empty: the round completes immediately);
      - ``_process(round, msgs)`` consumes the completed round's messages
        ({(sender, kind): Envelope}) and returns (outgoing, output).
    """

    protocol_id: ProtocolId

    def __init__(
        self,
        session_id: bytes,
        params: SchemeParams,
        rng: Rng | None = None,
    ):
        if len(session_id) != SESSION_ID_LEN:
            raise ValueError("session id must be 16 bytes")
        self.session_id = session_id
        self.params = params
        self.rng: Rng = rng or secrets.token_bytes
        self.round = 1
        self._buffer: dict[tuple[int, Kind], Envelope] = {}
        self._expected_now: set[tuple[int, Kind]] = set()
        self._failed: Exception | None = None
        self._finished = False
        self.output: object | None = None

    # -- subclass hooks -------------------------------------------------
    def _start(self) -> list[Outgoing]:
        raise NotImplementedError

    def _expected(self, round_no: int) -> set[tuple[int, Kind]]:
        raise NotImplementedError

    def _process(
        self, round_no: int, msgs: dict[tuple[int, Kind], Envelope]
    ) -> tuple[list[Outgoing], object | None]:
        raise NotImplementedError

    # -- driving API ----------------------------------------------------
    def start(self) -> list[Outgoing]:
        try:
            first = self._start()
            self._expected_now = self._expected(self.round)
            out, _ = self._drain_empty_rounds()
            return first + out
        except ProtocolError as exc:
            self._failed = exc
            raise

    def step(self, env: Envelope) -> StepResult:
        if self._failed is not None:
            raise SessionAborted(f"session already aborted: {self._failed}")
        if self._finished:
            raise SessionAborted("session already finished")
        try:
            return self._step_inner(env)
        except ProtocolError as exc:
            self._failed = exc
            raise

    def fail(self, reason: str) -> None:
        """Mark the session aborted on an external signal (transport abort,
        timeout); further steps raise SessionAborted."""
        if self._failed is None and not self._finished:
            self._failed = SessionAborted(reason)

    @property
    def aborted(self) -> bool:
        return self._failed is not None

    @property
    def finished(self) -> bool:
        return self._finished

    def _step_inner(self, env: Envelope) -> StepResult:
        if env.session_id != self.session_id:
            raise ProtocolViolation("envelope for a different session")
        if env.protocol_id != self.protocol_id:
            raise ProtocolViolation(
                f"protocol id {env.protocol_id} in {self.protocol_id} session"
            )
        if env.round != self.round:
            if env.round < self.round:
                raise DuplicateMessage(
                    f"round {env.round} message after round completed"
                )
            raise ProtocolViolation(
                f"round {env.round} message while in round {self.round}"
            )
        key = (env.sender, env.kind)
        if key not in self._expected_now:
            if all(s != env.sender for s, _ in self._expected_now):
                raise UnknownSender(f"unexpected sender {env.sender}")
            raise ProtocolViolation(f"unexpected {env.kind.name} from {env.sender}")
        if key in self._buffer:
            raise DuplicateMessage(f"{env.kind.name} from {env.sender} repeated")
        self._buffer[key] = env

        result = StepResult()
        if self._expected_now and set(self._buffer) != self._expected_now:
            return result
        out, output = self._complete_round()
        result.outgoing.extend(out)
        if output is None and not self._finished:
            more, output = self._drain_empty_rounds()
            result.outgoing.extend(more)
        result.output = output
        return result

    def _complete_round(self) -> tuple[list[Outgoing], object | None]:
        msgs = self._buffer
        self._buffer = {}
        out, output = self._process(self.round, msgs)
        if output is not None:
            self.output = output
            self._finished = True
        else:
            self.round += 1
            self._expected_now = self._expected(self.round)
        return out, output

    def _drain_empty_rounds(self) -> tuple[list[Outgoing], object | None]:
        # A round with nothing to wait for (e.g. an old re-sharing party
        # during the new committee's internal round) completes at once.
        outgoing: list[Outgoing] = []
        output: object | None = None
        while not self._finished and not self._expected_now:
            out, output = self._complete_round()
            outgoing.extend(out)
            if output is not None:
                break
        return outgoing, output

    # -- helpers for subclasses ------------------------------------------
    def _envelope(self, round_no: int, kind: Kind, body: bytes, sender: int) -> Envelope:
        return Envelope(
            session_id=self.session_id,
            protocol_id=self.protocol_id,
            round=round_no,
            sender=sender,
            kind=kind,
            body=body,
        )

    def _decode_contribution(self, data: bytes, what: str) -> GroupPoint:
        """Decode + sanitize a received group element; identity aborts."""
        try:
            point = decode_point(data, self.params.curve, sanitize=True)
        except Exception as exc:
            raise InvalidContribution(f"{what}: {exc}") from exc
        if point.is_identity():
            raise InvalidContribution(f"{what}: low-order contribution")
        return point
