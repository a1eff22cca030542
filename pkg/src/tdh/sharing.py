"""Secret sharing algebra: additive shares, Shamir shares, Feldman VSS,
Lagrange coefficients.

Party ids are integers >= 1 and double as the Shamir evaluation points,
so a share held by party i is f(i). All arithmetic is over Z_q for the
curve's subgroup order q.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .groups import (
    CurveId,
    GroupPoint,
    GroupScalar,
    Rng,
    curve_order,
    generator,
    point_mul_public,
    scalar_random,
)

PartyId = int


class SharingError(Exception):
    pass


def _check_parties(parties: Sequence[PartyId]) -> None:
    if not parties:
        raise SharingError("empty party list")
    if any(p < 1 for p in parties):
        raise SharingError("party ids must be >= 1")
    if len(set(parties)) != len(parties):
        raise SharingError("duplicate party ids")


@dataclass(frozen=True)
class ShamirShare:
    owner: PartyId
    value: GroupScalar
    t: int
    n: int

    def to_bytes(self) -> bytes:
        return struct.pack(">I", self.owner) + self.value.to_bytes() + struct.pack(
            ">HH", self.t, self.n
        )

    @classmethod
    def from_bytes(cls, data: bytes, curve: CurveId) -> "ShamirShare":
        if len(data) != 4 + 32 + 4:
            raise ValueError("share record must be 40 bytes")
        (owner,) = struct.unpack(">I", data[:4])
        value = GroupScalar.from_bytes(data[4:36], curve)
        t, n = struct.unpack(">HH", data[36:])
        return cls(owner, value, t, n)


def additive_split(
    secret: GroupScalar, parties: Sequence[PartyId], rng: Rng | None = None
) -> dict[PartyId, GroupScalar]:
    """Uniform shares with sum = secret (mod q)."""
    _check_parties(parties)
    curve = secret.curve
    shares: dict[PartyId, GroupScalar] = {}
    total = GroupScalar(0, curve)
    for p in parties[:-1]:
        s = scalar_random(curve, rng)
        shares[p] = s
        total = total + s
    shares[parties[-1]] = secret - total
    return shares


def shamir_share(
    secret: GroupScalar,
    t: int,
    parties: Sequence[PartyId],
    rng: Rng | None = None,
) -> tuple[dict[PartyId, ShamirShare], list[GroupPoint]]:
    """(t, n) Shamir sharing of the secret plus Feldman commitments.

    Shares are evaluations of a uniform degree-t polynomial f with
    f(0) = secret; the commitments are the coefficient points
    [a_0*G, ..., a_t*G] with a_0 = secret, letting each recipient verify
    its share publicly.
    """
    _check_parties(parties)
    n = len(parties)
    if not 0 <= t < n:
        raise SharingError(f"threshold t={t} must satisfy 0 <= t < n={n}")
    curve = secret.curve
    coeffs = [secret] + [scalar_random(curve, rng) for _ in range(t)]
    g = generator(curve)
    commitments = [c * g for c in coeffs]
    q = curve_order(curve)
    shares: dict[PartyId, ShamirShare] = {}
    for p in parties:
        # Horner evaluation of f(p) mod q
        acc = 0
        for c in reversed(coeffs):
            acc = (acc * p + c.value) % q
        shares[p] = ShamirShare(p, GroupScalar(acc, curve), t, n)
    return shares, commitments


def feldman_verify(share: ShamirShare, commitments: Sequence[GroupPoint]) -> bool:
    """Check share.value * G == sum_j owner^j * commitments[j].

    Operates on public data (the share value enters only via its public
    image), so the variable-time path is fine for the right-hand side.
    """
    if len(commitments) != share.t + 1:
        return False
    curve = share.value.curve
    # Horner over points: (((C_t * i) + C_{t-1}) * i + ...) + C_0
    rhs = commitments[-1]
    for c in reversed(commitments[:-1]):
        rhs = point_mul_public(share.owner, rhs) + c
    return share.value * generator(curve) == rhs


def lagrange_coeff(
    subset: Sequence[PartyId], i: PartyId, curve: CurveId
) -> GroupScalar:
    """Interpolation-at-zero weight for party i within the subset:
    lambda_i = prod_{j != i} x_j / (x_j - x_i) mod q."""
    _check_parties(subset)
    if i not in subset:
        raise SharingError(f"party {i} not in subset")
    q = curve_order(curve)
    num, den = 1, 1
    for j in subset:
        if j == i:
            continue
        num = num * j % q
        den = den * (j - i) % q
    return GroupScalar(num * pow(den, q - 2, q), curve)


def reconstruct(shares: Iterable[ShamirShare]) -> GroupScalar:
    """Interpolate the secret from t+1 shares. Test/oracle use only: the
    protocols themselves never reconstruct a shared private key."""
    shares = list(shares)
    if not shares:
        raise SharingError("no shares")
    t = shares[0].t
    if any(s.t != t for s in shares):
        raise SharingError("mixed thresholds")
    owners = [s.owner for s in shares]
    _check_parties(owners)
    if len(shares) != t + 1:
        raise SharingError(f"need exactly {t + 1} shares, got {len(shares)}")
    curve = shares[0].value.curve
    total = GroupScalar(0, curve)
    for s in shares:
        total = total + lagrange_coeff(owners, s.owner, curve) * s.value
    return total


def sum_additive(shares: Mapping[PartyId, GroupScalar]) -> GroupScalar:
    if not shares:
        raise SharingError("no shares")
    values = list(shares.values())
    total = values[0]
    for v in values[1:]:
        total = total + v
    return total
