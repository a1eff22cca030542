"""Curve-agnostic prime-order group API over the P-256 and Curve25519 backends.

GroupScalar and GroupPoint carry their curve id and refuse mixed-curve
arithmetic. All values are immutable; every operation is a pure function.

Externally visible byte formats:
  - scalars: 32 bytes little-endian;
  - P-256 points: 33-byte SEC1 compressed;
  - Curve25519 points: 32-byte little-endian Montgomery u plus one sign
    byte for the second coordinate (0 = even/"positive", 1 = odd).
"""

from __future__ import annotations

import enum
import secrets
from dataclasses import dataclass
from typing import Callable

from . import edwards25519, p256

Rng = Callable[[int], bytes]

SCALAR_LEN = 32
ENCODED_POINT_LEN = 33


class GroupError(Exception):
    """Base for group-level failures."""


class CurveMismatchError(GroupError):
    """Operands belong to different curves."""


class DecodeError(GroupError):
    """Encoded point is malformed, off-curve, non-canonical or low-order."""


class PointConversionError(GroupError):
    """Point has no Montgomery u-coordinate (identity / map exceptions)."""


class CurveId(enum.Enum):
    P256 = "p256"
    CURVE25519 = "curve25519"


_BACKENDS = {
    CurveId.P256: p256,
    CurveId.CURVE25519: edwards25519,
}


def _backend(curve: CurveId):
    return _BACKENDS[curve]


def curve_order(curve: CurveId) -> int:
    return _backend(curve).ORDER


def cofactor(curve: CurveId) -> int:
    return _backend(curve).COFACTOR


@dataclass(frozen=True)
class GroupScalar:
    """Element of Z_q for the curve's subgroup order q (reduced on build)."""

    value: int
    curve: CurveId

    def __post_init__(self):
        object.__setattr__(self, "value", self.value % curve_order(self.curve))

    def _check(self, other: "GroupScalar") -> None:
        if not isinstance(other, GroupScalar):
            raise TypeError(f"expected GroupScalar, got {type(other).__name__}")
        if other.curve is not self.curve:
            raise CurveMismatchError(f"{self.curve.value} vs {other.curve.value}")

    def __add__(self, other: "GroupScalar") -> "GroupScalar":
        self._check(other)
        return GroupScalar(self.value + other.value, self.curve)

    def __sub__(self, other: "GroupScalar") -> "GroupScalar":
        self._check(other)
        return GroupScalar(self.value - other.value, self.curve)

    def __mul__(self, other):
        if not isinstance(other, GroupScalar):
            return NotImplemented  # scalar * point handled by GroupPoint
        self._check(other)
        return GroupScalar(self.value * other.value, self.curve)

    def __neg__(self) -> "GroupScalar":
        return GroupScalar(-self.value, self.curve)

    def inverse(self) -> "GroupScalar":
        if self.value == 0:
            raise ZeroDivisionError("zero scalar has no inverse")
        q = curve_order(self.curve)
        return GroupScalar(pow(self.value, q - 2, q), self.curve)

    def is_zero(self) -> bool:
        return self.value == 0

    def to_bytes(self) -> bytes:
        return self.value.to_bytes(SCALAR_LEN, "little")

    @classmethod
    def from_bytes(cls, data: bytes, curve: CurveId) -> "GroupScalar":
        if len(data) != SCALAR_LEN:
            raise ValueError(f"scalar must be {SCALAR_LEN} bytes, got {len(data)}")
        v = int.from_bytes(data, "little")
        if v >= curve_order(curve):
            raise ValueError("scalar out of range")
        return cls(v, curve)


class GroupPoint:
    """Point of the curve's prime-order subgroup (or the identity).

    Curve25519 points built by strict decoding may still carry a small
    torsion component (only pure low-order inputs are rejected there);
    sanitize_point strips it. Points produced by arithmetic on sanitized
    inputs stay in the subgroup.
    """

    __slots__ = ("curve", "_p")

    def __init__(self, curve: CurveId, raw):
        self.curve = curve
        self._p = raw

    def _check(self, other: "GroupPoint") -> None:
        if not isinstance(other, GroupPoint):
            raise TypeError(f"expected GroupPoint, got {type(other).__name__}")
        if other.curve is not self.curve:
            raise CurveMismatchError(f"{self.curve.value} vs {other.curve.value}")

    def __add__(self, other: "GroupPoint") -> "GroupPoint":
        self._check(other)
        return GroupPoint(self.curve, _backend(self.curve).add(self._p, other._p))

    def __sub__(self, other: "GroupPoint") -> "GroupPoint":
        self._check(other)
        return self + (-other)

    def __neg__(self) -> "GroupPoint":
        return GroupPoint(self.curve, _backend(self.curve).neg(self._p))

    def __rmul__(self, k) -> "GroupPoint":
        if isinstance(k, GroupScalar):
            if k.curve is not self.curve:
                raise CurveMismatchError(f"{self.curve.value} vs {k.curve.value}")
            return GroupPoint(self.curve, _backend(self.curve).mul(k.value, self._p))
        if isinstance(k, int):
            return GroupPoint(
                self.curve,
                _backend(self.curve).mul(k % curve_order(self.curve), self._p),
            )
        return NotImplemented

    __mul__ = __rmul__

    def __eq__(self, other) -> bool:
        if not isinstance(other, GroupPoint) or other.curve is not self.curve:
            return False
        return _backend(self.curve).eq(self._p, other._p)

    def __hash__(self) -> int:
        if self.is_identity():
            return hash((self.curve, None))
        return hash((self.curve, encode_point(self)))

    def is_identity(self) -> bool:
        return _backend(self.curve).is_identity(self._p)

    def is_low_order(self) -> bool:
        return _backend(self.curve).is_low_order(self._p)

    def __repr__(self) -> str:
        if self.is_identity():
            return f"GroupPoint({self.curve.value}, identity)"
        return f"GroupPoint({self.curve.value}, {encode_point(self).hex()[:16]}...)"


def generator(curve: CurveId) -> GroupPoint:
    return GroupPoint(curve, _backend(curve).GENERATOR)


def identity(curve: CurveId) -> GroupPoint:
    return GroupPoint(curve, _backend(curve).IDENTITY)


def scalar_random(curve: CurveId, rng: Rng | None = None) -> GroupScalar:
    """Uniform nonzero scalar; on Curve25519 additionally a multiple of
    the cofactor 8 (mirrors how classic X25519 private keys clear their
    three low bits), drawn strictly below the subgroup order."""
    draw = rng or secrets.token_bytes
    q = curve_order(curve)
    while True:
        v = int.from_bytes(draw(SCALAR_LEN), "little")
        if curve is CurveId.CURVE25519:
            v &= (1 << 253) - 1
            v &= ~7
        if 0 < v < q:
            return GroupScalar(v, curve)


def scalar_clamp(raw: bytes) -> bytes:
    """X25519 bit clamping: clear the 3 low bits of byte 0, clear bit 7
    and set bit 6 of byte 31 (little-endian scalar bytes)."""
    if len(raw) != 32:
        raise ValueError(f"clamp input must be 32 bytes, got {len(raw)}")
    out = bytearray(raw)
    out[0] &= 248
    out[31] &= 127
    out[31] |= 64
    return bytes(out)


def point_mul(s: GroupScalar, point: GroupPoint) -> GroupPoint:
    return s * point


def point_add(p: GroupPoint, q: GroupPoint) -> GroupPoint:
    return p + q


def encode_point(point: GroupPoint) -> bytes:
    """33-byte encoding (u ‖ sign for Curve25519, SEC1 compressed for P-256).

    The identity has no affine encoding on either curve and raises."""
    be = _backend(point.curve)
    try:
        return be.encode(point._p)
    except (edwards25519.ConversionError, ValueError) as exc:
        raise PointConversionError(str(exc)) from exc


def decode_point(data: bytes, curve: CurveId, *, sanitize: bool = False) -> GroupPoint:
    """Decode a 33-byte point.

    With sanitize=True the low-order component of the decoded point is
    stripped (Curve25519), so the result is always a subgroup element,
    possibly the identity. Without it, decoding rejects the low-order
    u-coordinates outright.
    """
    be = _backend(curve)
    try:
        raw = be.decode(data)
    except be.DecodeFailure as exc:
        raise DecodeError(str(exc)) from exc
    point = GroupPoint(curve, raw)
    if sanitize:
        return sanitize_point(point)
    if point.is_low_order():
        raise DecodeError("low-order point rejected")
    return point


# 8 * (8^-1 mod q): kills the 8-torsion component and acts as 1 on the
# prime-order component, in a single fixed-width scalar multiplication.
_SANITIZE_K = 8 * pow(8, -1, edwards25519.ORDER)


def sanitize_point(point: GroupPoint) -> GroupPoint:
    """Prime-order component of a curve point.

    Multiplies by the cofactor and then by its inverse mod q; a pure
    low-order point collapses to the identity. On P-256 (cofactor 1)
    this is the identity map.
    """
    if point.curve is CurveId.P256:
        return point
    return GroupPoint(point.curve, edwards25519.mul_vartime(_SANITIZE_K, point._p))


def point_mul_public(k: int, point: GroupPoint) -> GroupPoint:
    """Variable-time k * point for public operands (verification
    equations, sanitization, oracles); never use with secret scalars."""
    return GroupPoint(
        point.curve,
        _backend(point.curve).mul_vartime(k % curve_order(point.curve), point._p),
    )


def to_x25519_u(point: GroupPoint) -> bytes:
    """Montgomery u-coordinate bytes: what a classic X25519 peer computes
    for the same point. Curve25519 only; identity raises."""
    if point.curve is not CurveId.CURVE25519:
        raise CurveMismatchError("to_x25519_u is defined for Curve25519 only")
    try:
        return edwards25519.to_u_bytes(point._p)
    except edwards25519.ConversionError as exc:
        raise PointConversionError(str(exc)) from exc


def point_sign(point: GroupPoint) -> int:
    """Sign bit of the Montgomery second coordinate (Curve25519 only)."""
    if point.curve is not CurveId.CURVE25519:
        raise CurveMismatchError("point_sign is defined for Curve25519 only")
    try:
        return edwards25519.sign_bit(point._p)
    except edwards25519.ConversionError as exc:
        raise PointConversionError(str(exc)) from exc


def from_x25519_u(u: bytes, sign: int = 0, *, sanitize: bool = False) -> GroupPoint:
    """Inverse of to_x25519_u given the sign of the second coordinate.

    Classic X25519 public keys carry no sign; either choice yields P or
    -P, which agree on every u-coordinate later derived from the point.
    """
    try:
        raw = edwards25519.decode_u(u, sign)
    except edwards25519.DecodeFailure as exc:
        raise DecodeError(str(exc)) from exc
    point = GroupPoint(CurveId.CURVE25519, raw)
    if sanitize:
        return sanitize_point(point)
    if point.is_low_order():
        raise DecodeError("low-order point rejected")
    return point
