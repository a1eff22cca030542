"""NIST P-256 group arithmetic in Jacobian coordinates.

Prime-order curve (cofactor 1), so there is no low-order machinery here;
sanitization is the identity map. Points are tuples (X, Y, Z) with
x = X/Z^2, y = Y/Z^3; the identity is encoded as Z = 0.
"""

from __future__ import annotations

NAME = "p256"

P = 2**256 - 2**224 + 2**192 + 2**96 - 1
ORDER = 0xFFFFFFFF00000000FFFFFFFFFFFFFFFFBCE6FAADA7179E84F3B9CAC2FC632551
COFACTOR = 1

A = P - 3
B = 0x5AC635D8AA3A93E7B3EBBD55769886BC651D06B0CC53B0F63BCE3C3E27D2604B

GX = 0x6B17D1F2E12C4247F8BCE6E563A440F277037D812DEB33A0F4A13945D898C296
GY = 0x4FE342E2FE1A7F9B8EE7EB4A7C0F9E162BCE33576B315ECECBB6406837BF51F5

ENCODED_LEN = 33  # SEC1 compressed: 0x02/0x03 prefix plus big-endian x

Point = tuple[int, int, int]

IDENTITY: Point = (1, 1, 0)


def _inv(x: int) -> int:
    return pow(x, P - 2, P)


def from_affine(x: int, y: int) -> Point:
    return (x % P, y % P, 1)


def to_affine(p: Point) -> tuple[int, int]:
    if p[2] % P == 0:
        raise ZeroDivisionError("identity has no affine coordinates")
    zi = _inv(p[2])
    zi2 = zi * zi % P
    return (p[0] * zi2 % P, p[1] * zi2 % P * zi % P)


def is_identity(p: Point) -> bool:
    return p[2] % P == 0


def eq(p: Point, q: Point) -> bool:
    if is_identity(p) or is_identity(q):
        return is_identity(p) and is_identity(q)
    z12 = p[2] * p[2] % P
    z22 = q[2] * q[2] % P
    if (p[0] * z22 - q[0] * z12) % P != 0:
        return False
    return (p[1] * z22 % P * q[2] - q[1] * z12 % P * p[2]) % P == 0


def neg(p: Point) -> Point:
    return (p[0], (-p[1]) % P, p[2])


def double(p: Point) -> Point:
    if is_identity(p) or p[1] % P == 0:
        return IDENTITY
    x1, y1, z1 = p
    # dbl-2001-b, specialized for a = -3
    delta = z1 * z1 % P
    gamma = y1 * y1 % P
    beta = x1 * gamma % P
    alpha = 3 * (x1 - delta) * (x1 + delta) % P
    x3 = (alpha * alpha - 8 * beta) % P
    z3 = ((y1 + z1) * (y1 + z1) - gamma - delta) % P
    y3 = (alpha * (4 * beta - x3) - 8 * gamma * gamma) % P
    return (x3, y3, z3)


def add(p: Point, q: Point) -> Point:
    if is_identity(p):
        return q
    if is_identity(q):
        return p
    x1, y1, z1 = p
    x2, y2, z2 = q
    z1z1 = z1 * z1 % P
    z2z2 = z2 * z2 % P
    u1 = x1 * z2z2 % P
    u2 = x2 * z1z1 % P
    s1 = y1 * z2 % P * z2z2 % P
    s2 = y2 * z1 % P * z1z1 % P
    if u1 == u2:
        if s1 != s2:
            return IDENTITY
        return double(p)
    h = (u2 - u1) % P
    r = (s2 - s1) % P
    h2 = h * h % P
    h3 = h * h2 % P
    u1h2 = u1 * h2 % P
    x3 = (r * r - h3 - 2 * u1h2) % P
    y3 = (r * (u1h2 - x3) - s1 * h3) % P
    z3 = z1 * z2 % P * h % P
    return (x3, y3, z3)


def mul(k: int, p: Point) -> Point:
    """k * p via the same fixed-length index-select ladder as the Edwards
    backend (identity handling falls out of add/double)."""
    if k < 0:
        raise ValueError("negative scalar")
    r0: Point = IDENTITY
    r1: Point = p
    for i in reversed(range(256)):
        b = (k >> i) & 1
        pair = (r0, r1)
        s = add(pair[0], pair[1])
        d2 = double(pair[b])
        r0, r1 = ((d2, s), (s, d2))[b]
    return r0


def mul_vartime(k: int, p: Point) -> Point:
    """Plain double-and-add; for public inputs only."""
    if k < 0:
        raise ValueError("negative scalar")
    acc: Point = IDENTITY
    for i in reversed(range(k.bit_length())):
        acc = double(acc)
        if (k >> i) & 1:
            acc = add(acc, p)
    return acc


def on_curve(x: int, y: int) -> bool:
    return (y * y - (x * x % P * x + A * x + B)) % P == 0


def is_low_order(p: Point) -> bool:
    # Cofactor 1: the only low-order point is the identity.
    return is_identity(p)


GENERATOR: Point = from_affine(GX, GY)


class DecodeFailure(Exception):
    pass


def encode(p: Point) -> bytes:
    if is_identity(p):
        raise ValueError("identity point is not encodable")
    x, y = to_affine(p)
    return bytes([0x02 + (y & 1)]) + x.to_bytes(32, "big")


def decode(data: bytes) -> Point:
    if len(data) != ENCODED_LEN:
        raise DecodeFailure(f"encoded point must be {ENCODED_LEN} bytes")
    prefix = data[0]
    if prefix not in (0x02, 0x03):
        raise DecodeFailure("bad compression prefix")
    x = int.from_bytes(data[1:], "big")
    if x >= P:
        raise DecodeFailure("non-canonical x-coordinate (>= p)")
    rhs = (x * x % P * x + A * x + B) % P
    y = pow(rhs, (P + 1) // 4, P)
    if y * y % P != rhs:
        raise DecodeFailure("x-coordinate is not on the curve")
    if y & 1 != prefix - 0x02:
        y = (P - y) % P
    return from_affine(x, y)
