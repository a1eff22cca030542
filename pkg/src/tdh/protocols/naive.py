"""n-of-n additive threshold DH: key generation, exchange, re-sharing.

Key generation: every party picks x_i, broadcasts a commitment to
X_i = x_i*G, then decommits; the joint public key is X = sum X_i and all
n shares are needed to use it. Exchange commits/decommits to
S_i = x_i*Y and outputs S = sum S_i. Re-sharing additively re-splits
every x_i across the new committee so the key is preserved while every
share changes.
"""

from __future__ import annotations

from typing import Optional

from .. import commitments as com
from ..groups import (
    GroupPoint,
    GroupScalar,
    Rng,
    encode_point,
    generator,
    scalar_random,
)
from ..sharing import ShamirShare, additive_split
from .base import (
    CommitmentMismatch,
    ExchangeFailure,
    ExchangeOutput,
    InvalidContribution,
    KeyMismatch,
    KeyShareRecord,
    Outgoing,
    ProtocolViolation,
    ReshareComplete,
    Scheme,
    SchemeParams,
    Session,
    derive_psk,
)
from .envelope import Envelope, Kind, ProtocolId


class _CommitRevealSession(Session):
    """Two barrier rounds shared by keygen and exchange: broadcast C(M_i),
    then broadcast D(M_i), then fold all revealed M_j."""

    tag: bytes

    def __init__(self, session_id, params, self_id: int, rng: Rng | None = None):
        super().__init__(session_id, params, rng)
        if self_id not in params.committee:
            raise ProtocolViolation(f"party {self_id} not in committee")
        self.self_id = self_id
        self._decommitment: com.Decommitment | None = None
        self._commitments: dict[int, com.Commitment] = {}

    def _contribution(self) -> bytes:
        raise NotImplementedError

    def _finish(self, revealed: dict[int, bytes]) -> object:
        raise NotImplementedError

    def _start(self) -> list[Outgoing]:
        message = self._contribution()
        c, d = com.commit(message, self.rng, self.tag)
        self._decommitment = d
        env = self._envelope(1, Kind.COMMIT, c.to_bytes(), self.self_id)
        return [Outgoing(env)]

    def _expected(self, round_no: int) -> set[tuple[int, Kind]]:
        kind = Kind.COMMIT if round_no == 1 else Kind.DECOMMIT
        return {(j, kind) for j in self.params.committee}

    def _process(self, round_no, msgs):
        if round_no == 1:
            for (sender, _), env in sorted(msgs.items()):
                try:
                    self._commitments[sender] = com.Commitment.from_bytes(env.body)
                except ValueError as exc:
                    raise ProtocolViolation(f"bad commitment from {sender}: {exc}")
            env = self._envelope(
                2, Kind.DECOMMIT, self._decommitment.to_bytes(), self.self_id
            )
            return [Outgoing(env)], None

        revealed: dict[int, bytes] = {}
        for (sender, _), env in sorted(msgs.items()):
            try:
                d = com.Decommitment.from_bytes(env.body)
                revealed[sender] = com.open_commitment(
                    self._commitments[sender], d, self.tag
                )
            except (ValueError, com.MismatchError) as exc:
                raise CommitmentMismatch(f"party {sender}: {exc}") from exc
        return [], self._finish(revealed)


class NaiveKeygenSession(_CommitRevealSession):
    protocol_id = ProtocolId.NAIVE_KEYGEN
    tag = com.TAG_KEYGEN

    def __init__(self, session_id, params: SchemeParams, self_id, rng=None):
        if params.scheme is not Scheme.NAIVE:
            raise ValueError("naive keygen needs naive params")
        super().__init__(session_id, params, self_id, rng)

    def _contribution(self) -> bytes:
        self.x = scalar_random(self.params.curve, self.rng)
        self.public_share = self.x * generator(self.params.curve)
        return encode_point(self.public_share)

    def _finish(self, revealed) -> KeyShareRecord:
        total: GroupPoint | None = None
        for sender in sorted(revealed):
            share_point = self._decode_contribution(
                revealed[sender], f"public share of {sender}"
            )
            total = share_point if total is None else total + share_point
        return KeyShareRecord(
            params=self.params,
            self_id=self.self_id,
            private_share=self.x,
            public_share=self.public_share,
            public_key=total,
        )


class NaiveExchangeSession(_CommitRevealSession):
    protocol_id = ProtocolId.NAIVE_EXCHANGE
    tag = com.TAG_EXCHANGE

    def __init__(
        self,
        session_id,
        record: KeyShareRecord,
        remote_pubkey: GroupPoint,
        rng=None,
    ):
        if record.params.scheme is not Scheme.NAIVE:
            raise ValueError("naive exchange needs a naive key share")
        if remote_pubkey.is_identity():
            raise ExchangeFailure("remote public key sanitized to the identity")
        super().__init__(session_id, record.params, record.self_id, rng)
        self._record = record
        self._remote = remote_pubkey

    def _contribution(self) -> bytes:
        return encode_point(self._record.private_share * self._remote)

    def _finish(self, revealed) -> ExchangeOutput:
        total: GroupPoint | None = None
        for sender in sorted(revealed):
            part = self._decode_contribution(
                revealed[sender], f"secret share of {sender}"
            )
            total = part if total is None else total + part
        if total.is_identity():
            raise ExchangeFailure("shared secret is the identity point")
        return ExchangeOutput(shared_point=total, psk=derive_psk(total))


class NaiveReshareSession(Session):
    """Redistribute an additively shared key to a new committee.

    Old parties broadcast the public key and additively split their share
    across the new committee; new parties acknowledge, receive one
    sub-share from every old party over encrypted P2P, sum them, and
    finally broadcast their new public shares so everyone can confirm
    that the new shares still compose to the old public key.
    """

    protocol_id = ProtocolId.NAIVE_RESHARE

    def __init__(
        self,
        session_id,
        new_params: SchemeParams,
        old_committee: list[int],
        old_record: Optional[KeyShareRecord] = None,
        new_id: Optional[int] = None,
        rng=None,
    ):
        if new_params.scheme is not Scheme.NAIVE:
            raise ValueError("naive reshare needs naive params")
        super().__init__(session_id, new_params, rng)
        if old_record is None and new_id is None:
            raise ValueError("party must hold an old share, a new slot, or both")
        if old_record is not None and sorted(old_committee) != old_committee:
            old_committee = sorted(old_committee)
        self.old_committee = list(old_committee)
        self.old_record = old_record
        self.old_id = old_record.self_id if old_record else None
        self.new_id = new_id
        if self.old_id is not None and self.old_id not in self.old_committee:
            raise ProtocolViolation("old share id not in the old committee")
        if new_id is not None and new_id not in new_params.committee:
            raise ProtocolViolation("new id not in the new committee")
        self._public_key: GroupPoint | None = (
            old_record.public_key if old_record else None
        )
        self._sub_shares: dict[int, GroupScalar] = {}
        self._received: dict[int, GroupScalar] = {}
        self.new_record: KeyShareRecord | None = None

    def _start(self) -> list[Outgoing]:
        if self.old_record is None:
            return []
        self._sub_shares = additive_split(
            self.old_record.private_share, self.params.committee, self.rng
        )
        body = encode_point(self._public_key)
        env = self._envelope(1, Kind.PUBKEY, body, self.old_id)
        return [Outgoing(env)]

    def _expected(self, round_no: int) -> set[tuple[int, Kind]]:
        if round_no == 1:
            return {(i, Kind.PUBKEY) for i in self.old_committee}
        if round_no == 2:
            return {(j, Kind.ACK) for j in self.params.committee}
        if round_no == 3:
            if self.new_id is None:
                return set()
            senders = [i for i in self.old_committee if i != self.old_id]
            return {(i, Kind.VSS_SHARE) for i in senders}
        return {(j, Kind.ACK) for j in self.params.committee}

    def _process(self, round_no, msgs):
        if round_no == 1:
            for (sender, _), env in sorted(msgs.items()):
                claimed = self._decode_contribution(env.body, f"public key from {sender}")
                if self._public_key is None:
                    self._public_key = claimed
                elif claimed != self._public_key:
                    raise KeyMismatch(f"party {sender} broadcast a different public key")
            out = []
            if self.new_id is not None:
                out.append(Outgoing(self._envelope(2, Kind.ACK, b"", self.new_id)))
            return out, None

        if round_no == 2:
            out = []
            if self.old_record is not None:
                for j in self.params.committee:
                    share = ShamirShare(
                        j, self._sub_shares[j], self.params.t, self.params.n
                    )
                    if j == self.new_id:
                        self._received[self.old_id] = share.value
                        continue
                    env = self._envelope(3, Kind.VSS_SHARE, share.to_bytes(), self.old_id)
                    out.append(Outgoing(env, recipient=j))
            return out, None

        if round_no == 3:
            for (sender, _), env in sorted(msgs.items()):
                try:
                    share = ShamirShare.from_bytes(env.body, self.params.curve)
                except ValueError as exc:
                    raise ProtocolViolation(f"bad share from {sender}: {exc}")
                if share.owner != self.new_id:
                    raise ProtocolViolation(
                        f"share from {sender} addressed to {share.owner}"
                    )
                self._received[sender] = share.value
            out = []
            if self.new_id is not None:
                total = GroupScalar(0, self.params.curve)
                for i in self.old_committee:
                    total = total + self._received[i]
                self._new_share = total
                self._new_public = total * generator(self.params.curve)
                env = self._envelope(
                    4, Kind.ACK, encode_point(self._new_public), self.new_id
                )
                out.append(Outgoing(env))
            return out, None

        # Round 4: everyone checks the refreshed shares still form the key.
        total: GroupPoint | None = None
        for (sender, _), env in sorted(msgs.items()):
            pub = self._decode_contribution(env.body, f"new public share of {sender}")
            total = pub if total is None else total + pub
        if total != self._public_key:
            raise KeyMismatch("re-shared public shares do not sum to the public key")
        if self.new_id is None:
            return [], ReshareComplete(public_key=self._public_key)
        self.new_record = KeyShareRecord(
            params=self.params,
            self_id=self.new_id,
            private_share=self._new_share,
            public_share=self._new_public,
            public_key=self._public_key,
        )
        return [], self.new_record
