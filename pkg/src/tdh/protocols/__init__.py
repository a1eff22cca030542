"""Round-based protocol state machines for both threshold DH schemes."""

from .base import (
    CommitmentMismatch,
    DuplicateMessage,
    ExchangeFailure,
    ExchangeOutput,
    FeldmanReject,
    InvalidContribution,
    KeyMismatch,
    KeyShareRecord,
    Outgoing,
    ProtocolError,
    ProtocolViolation,
    ReshareComplete,
    Scheme,
    SchemeParams,
    Session,
    SessionAborted,
    StepResult,
    UnknownSender,
    derive_psk,
    new_session_id,
    psk_point_bytes,
)
from .envelope import SESSION_ID_LEN, Envelope, Kind, ProtocolId
from .naive import NaiveExchangeSession, NaiveKeygenSession, NaiveReshareSession
from .threshold import (
    ThresholdExchangeSession,
    ThresholdKeygenSession,
    ThresholdReshareSession,
)

__all__ = [
    "CommitmentMismatch",
    "DuplicateMessage",
    "Envelope",
    "ExchangeFailure",
    "ExchangeOutput",
    "FeldmanReject",
    "InvalidContribution",
    "KeyMismatch",
    "KeyShareRecord",
    "Kind",
    "NaiveExchangeSession",
    "NaiveKeygenSession",
    "NaiveReshareSession",
    "Outgoing",
    "ProtocolError",
    "ProtocolId",
    "ProtocolViolation",
    "ReshareComplete",
    "SESSION_ID_LEN",
    "Scheme",
    "SchemeParams",
    "Session",
    "SessionAborted",
    "StepResult",
    "ThresholdExchangeSession",
    "ThresholdKeygenSession",
    "ThresholdReshareSession",
    "UnknownSender",
    "derive_psk",
    "new_session_id",
    "psk_point_bytes",
]
