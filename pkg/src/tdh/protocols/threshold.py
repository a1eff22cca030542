"""(t, n) threshold DH via Feldman verifiable secret sharing.

Key generation follows the dealerless pattern: each party commits to
y_i = u_i*G, decommits, then deals a (t, n) Feldman VSS of u_i. Summing
the received sub-shares leaves every party with a Shamir share x_i of
the never-reconstructed key x = sum u_i, and y = sum y_i is the public
key. Exchange maps x_i into an additive share w_i = lambda_i * x_i over
a chosen (t+1)-subset and runs the commit/reveal fold of S_i = w_i*Y.
Re-sharing has t+1 old parties deal VSS's of lambda_i * x_i to the new
committee, which preserves the key while re-randomizing every share.
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
    point_mul_public,
    scalar_random,
)
from ..sharing import ShamirShare, feldman_verify, lagrange_coeff, shamir_share
from .base import (
    CommitmentMismatch,
    ExchangeFailure,
    ExchangeOutput,
    FeldmanReject,
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
from .envelope import Kind, ProtocolId, pack_points, unpack_points
from .naive import _CommitRevealSession


def _aggregate_points(vectors: list[list[GroupPoint]]) -> list[GroupPoint]:
    agg = list(vectors[0])
    for vec in vectors[1:]:
        agg = [a + b for a, b in zip(agg, vec)]
    return agg


def _feldman_point_check(owner: int, comms: list[GroupPoint], claimed: GroupPoint) -> bool:
    """claimed == sum_k owner^k * comms[k] (public-data Horner)."""
    rhs = comms[-1]
    for c in reversed(comms[:-1]):
        rhs = point_mul_public(owner, rhs) + c
    return claimed == rhs


class ThresholdKeygenSession(Session):
    protocol_id = ProtocolId.THRESHOLD_KEYGEN

    def __init__(self, session_id, params: SchemeParams, self_id: int, rng: Rng | None = None):
        if params.scheme is not Scheme.THRESHOLD:
            raise ValueError("threshold keygen needs threshold params")
        super().__init__(session_id, params, rng)
        if self_id not in params.committee:
            raise ProtocolViolation(f"party {self_id} not in committee")
        self.self_id = self_id
        self._commitments: dict[int, com.Commitment] = {}
        self._public_contribs: dict[int, GroupPoint] = {}

    def _start(self) -> list[Outgoing]:
        self._u = scalar_random(self.params.curve, self.rng)
        self._y_i = self._u * generator(self.params.curve)
        c, d = com.commit(encode_point(self._y_i), self.rng, com.TAG_KEYGEN)
        self._decommitment = d
        self._shares, self._comms = shamir_share(
            self._u, self.params.t, self.params.committee, self.rng
        )
        return [Outgoing(self._envelope(1, Kind.COMMIT, c.to_bytes(), self.self_id))]

    def _expected(self, round_no: int):
        if round_no == 1:
            return {(j, Kind.COMMIT) for j in self.params.committee}
        if round_no == 2:
            return {(j, Kind.DECOMMIT) for j in self.params.committee}
        expected = {(j, Kind.PUBKEY) for j in self.params.committee}
        expected |= {
            (j, Kind.VSS_SHARE) for j in self.params.committee if j != self.self_id
        }
        return expected

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

        if round_no == 2:
            for (sender, _), env in sorted(msgs.items()):
                try:
                    d = com.Decommitment.from_bytes(env.body)
                    revealed = com.open_commitment(
                        self._commitments[sender], d, com.TAG_KEYGEN
                    )
                except (ValueError, com.MismatchError) as exc:
                    raise CommitmentMismatch(f"party {sender}: {exc}") from exc
                self._public_contribs[sender] = self._decode_contribution(
                    revealed, f"key contribution of {sender}"
                )
            out = [
                Outgoing(
                    self._envelope(
                        3,
                        Kind.PUBKEY,
                        pack_points([encode_point(p) for p in self._comms]),
                        self.self_id,
                    )
                )
            ]
            for j in sorted(self.params.committee):
                if j == self.self_id:
                    continue
                env = self._envelope(
                    3, Kind.VSS_SHARE, self._shares[j].to_bytes(), self.self_id
                )
                out.append(Outgoing(env, recipient=j))
            return out, None

        # Round 3: verify every dealer's VSS and fold the sub-shares.
        comms_by_dealer: dict[int, list[GroupPoint]] = {}
        for j in sorted(self.params.committee):
            env = msgs[(j, Kind.PUBKEY)]
            try:
                raw = unpack_points(env.body)
            except ValueError as exc:
                raise ProtocolViolation(f"bad commitment vector from {j}: {exc}")
            if len(raw) != self.params.t + 1:
                raise FeldmanReject(f"dealer {j} sent {len(raw)} commitments")
            comms = [self._decode_contribution(r, f"VSS commitment of {j}") for r in raw]
            if comms[0] != self._public_contribs[j]:
                raise FeldmanReject(
                    f"dealer {j}'s VSS constant term differs from its decommitted y_i"
                )
            comms_by_dealer[j] = comms

        total = self._shares[self.self_id].value
        for j in sorted(self.params.committee):
            if j == self.self_id:
                continue
            env = msgs[(j, Kind.VSS_SHARE)]
            try:
                share = ShamirShare.from_bytes(env.body, self.params.curve)
            except ValueError as exc:
                raise ProtocolViolation(f"bad share from {j}: {exc}")
            if share.owner != self.self_id or (share.t, share.n) != (
                self.params.t,
                self.params.n,
            ):
                raise ProtocolViolation(f"share from {j} has wrong addressing")
            if not feldman_verify(share, comms_by_dealer[j]):
                raise FeldmanReject(f"share from dealer {j} fails VSS verification")
            total = total + share.value

        aggregate = _aggregate_points(
            [comms_by_dealer[j] for j in sorted(comms_by_dealer)]
        )
        public_key = aggregate[0]
        record = KeyShareRecord(
            params=self.params,
            self_id=self.self_id,
            private_share=total,
            public_share=total * generator(self.params.curve),
            public_key=public_key,
            vss_commitments=aggregate,
        )
        return [], record


class ThresholdExchangeSession(_CommitRevealSession):
    protocol_id = ProtocolId.THRESHOLD_EXCHANGE
    tag = com.TAG_EXCHANGE

    def __init__(
        self,
        session_id,
        record: KeyShareRecord,
        remote_pubkey: GroupPoint,
        subset: list[int],
        rng=None,
    ):
        if record.params.scheme is not Scheme.THRESHOLD:
            raise ValueError("threshold exchange needs a threshold key share")
        if remote_pubkey.is_identity():
            raise ExchangeFailure("remote public key sanitized to the identity")
        subset = sorted(subset)
        if len(subset) != record.params.t + 1:
            raise ProtocolViolation(
                f"exchange needs exactly t+1={record.params.t + 1} parties, "
                f"got {len(subset)}"
            )
        if len(set(subset)) != len(subset):
            raise ProtocolViolation("duplicate party in subset")
        if any(j not in record.params.committee for j in subset):
            raise ProtocolViolation("subset contains a non-committee party")
        if record.self_id not in subset:
            raise ProtocolViolation("own party id not in the subset")
        super().__init__(session_id, record.params, record.self_id, rng)
        self._record = record
        self._remote = remote_pubkey
        self.subset = subset

    def _expected(self, round_no: int):
        kind = Kind.COMMIT if round_no == 1 else Kind.DECOMMIT
        return {(j, kind) for j in self.subset}

    def _contribution(self) -> bytes:
        lam = lagrange_coeff(self.subset, self.self_id, self.params.curve)
        w = lam * self._record.private_share
        return encode_point(w * self._remote)

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


class ThresholdReshareSession(Session):
    """Redistribute a Feldman-shared key: t+1 old parties deal VSS's of
    their lambda-weighted shares to the new committee; the sums become
    the new shares and the aggregated commitment vector lets everyone
    verify every new public share before the old shares are retired."""

    protocol_id = ProtocolId.THRESHOLD_RESHARE

    def __init__(
        self,
        session_id,
        new_params: SchemeParams,
        old_subset: list[int],
        old_record: Optional[KeyShareRecord] = None,
        new_id: Optional[int] = None,
        rng=None,
    ):
        if new_params.scheme is not Scheme.THRESHOLD:
            raise ValueError("threshold reshare needs threshold params")
        super().__init__(session_id, new_params, rng)
        if old_record is None and new_id is None:
            raise ValueError("party must hold an old share, a new slot, or both")
        self.old_subset = sorted(old_subset)
        if len(set(self.old_subset)) != len(self.old_subset):
            raise ProtocolViolation("duplicate party in old subset")
        self.old_record = old_record
        self.old_id = old_record.self_id if old_record else None
        self.new_id = new_id
        if old_record is not None:
            if len(self.old_subset) != old_record.params.t + 1:
                raise ProtocolViolation(
                    f"re-sharing needs exactly t+1={old_record.params.t + 1} "
                    f"old parties, got {len(self.old_subset)}"
                )
            if self.old_id not in self.old_subset:
                raise ProtocolViolation("own old id not in the old subset")
        if new_id is not None and new_id not in new_params.committee:
            raise ProtocolViolation("new id not in the new committee")
        self._public_key: GroupPoint | None = (
            old_record.public_key if old_record else None
        )
        self._received: dict[int, GroupScalar] = {}
        self._dealer_comms: dict[int, list[GroupPoint]] = {}
        self.new_record: KeyShareRecord | None = None

    def _start(self) -> list[Outgoing]:
        if self.old_record is None:
            return []
        lam = lagrange_coeff(self.old_subset, self.old_id, self.params.curve)
        v = lam * self.old_record.private_share
        self._shares, comms = shamir_share(
            v, self.params.t, self.params.committee, self.rng
        )
        body = encode_point(self._public_key) + pack_points(
            [encode_point(p) for p in comms]
        )
        return [Outgoing(self._envelope(1, Kind.PUBKEY, body, self.old_id))]

    def _expected(self, round_no: int):
        if round_no == 1:
            return {(i, Kind.PUBKEY) for i in self.old_subset}
        if round_no == 2:
            return {(j, Kind.ACK) for j in self.params.committee}
        if round_no == 3:
            if self.new_id is None:
                return set()
            senders = [i for i in self.old_subset if i != self.old_id]
            return {(i, Kind.VSS_SHARE) for i in senders}
        return {(j, Kind.ACK) for j in self.params.committee}

    def _process(self, round_no, msgs):
        if round_no == 1:
            for (sender, _), env in sorted(msgs.items()):
                if len(env.body) < 33:
                    raise ProtocolViolation(f"short re-share broadcast from {sender}")
                claimed_key = self._decode_contribution(
                    env.body[:33], f"public key from {sender}"
                )
                if self._public_key is None:
                    self._public_key = claimed_key
                elif claimed_key != self._public_key:
                    raise KeyMismatch(
                        f"party {sender} broadcast a different public key"
                    )
                try:
                    raw = unpack_points(env.body[33:])
                except ValueError as exc:
                    raise ProtocolViolation(f"bad commitment vector from {sender}: {exc}")
                if len(raw) != self.params.t + 1:
                    raise FeldmanReject(f"dealer {sender} sent {len(raw)} commitments")
                self._dealer_comms[sender] = [
                    self._decode_contribution(r, f"VSS commitment of {sender}")
                    for r in raw
                ]
            constant_sum: GroupPoint | None = None
            for i in sorted(self._dealer_comms):
                c0 = self._dealer_comms[i][0]
                constant_sum = c0 if constant_sum is None else constant_sum + c0
            if constant_sum != self._public_key:
                raise KeyMismatch(
                    "VSS constant terms do not sum to the old public key"
                )
            self._aggregate = _aggregate_points(
                [self._dealer_comms[i] for i in sorted(self._dealer_comms)]
            )
            out = []
            if self.new_id is not None:
                out.append(Outgoing(self._envelope(2, Kind.ACK, b"", self.new_id)))
            return out, None

        if round_no == 2:
            out = []
            if self.old_record is not None:
                for j in self.params.committee:
                    share = self._shares[j]
                    if j == self.new_id:
                        self._received[self.old_id] = share.value
                        continue
                    env = self._envelope(
                        3, Kind.VSS_SHARE, share.to_bytes(), self.old_id
                    )
                    out.append(Outgoing(env, recipient=j))
            return out, None

        if round_no == 3:
            for (sender, _), env in sorted(msgs.items()):
                try:
                    share = ShamirShare.from_bytes(env.body, self.params.curve)
                except ValueError as exc:
                    raise ProtocolViolation(f"bad share from {sender}: {exc}")
                if share.owner != self.new_id or (share.t, share.n) != (
                    self.params.t,
                    self.params.n,
                ):
                    raise ProtocolViolation(f"share from {sender} has wrong addressing")
                if not feldman_verify(share, self._dealer_comms[sender]):
                    raise FeldmanReject(
                        f"share from dealer {sender} fails VSS verification"
                    )
                self._received[sender] = share.value
            out = []
            if self.new_id is not None:
                total = GroupScalar(0, self.params.curve)
                for i in self.old_subset:
                    total = total + self._received[i]
                self._new_share = total
                self._new_public = total * generator(self.params.curve)
                env = self._envelope(
                    4, Kind.ACK, encode_point(self._new_public), self.new_id
                )
                out.append(Outgoing(env))
            return out, None

        # Round 4: every new public share must match the aggregated VSS.
        for (sender, _), env in sorted(msgs.items()):
            pub = self._decode_contribution(env.body, f"new public share of {sender}")
            if not _feldman_point_check(sender, self._aggregate, pub):
                raise KeyMismatch(
                    f"new public share of {sender} contradicts the VSS commitments"
                )
        if self.new_id is None:
            return [], ReshareComplete(public_key=self._public_key)
        self.new_record = KeyShareRecord(
            params=self.params,
            self_id=self.new_id,
            private_share=self._new_share,
            public_share=self._new_public,
            public_key=self._public_key,
            vss_commitments=self._aggregate,
        )
        return [], self.new_record
