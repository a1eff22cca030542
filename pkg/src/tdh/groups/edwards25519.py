"""Curve25519 group arithmetic on the birationally equivalent twisted Edwards curve.

Classic X25519 works on the Montgomery form ``v^2 = u^3 + 486662*u^2 + u``
with a single-coordinate ladder, which cannot add two arbitrary points.
Summing key/secret shares needs full point addition, so all internal
arithmetic here uses the twisted Edwards form ``-x^2 + y^2 = 1 + d*x^2*y^2``
(extended homogeneous coordinates), and points cross the Montgomery
boundary only in ``to_u``/``from_u``/``encode``/``decode``.

The Montgomery second coordinate is recovered from a sign convention:
a coordinate is "positive" when its canonical representative in [0, p)
is even; the sign byte is 0 for positive, 1 for negative.

Points are tuples (X, Y, Z, T) with x = X/Z, y = Y/Z, T = X*Y/Z.
Pure functions over Python ints; nothing here is mutated.
"""

from __future__ import annotations

NAME = "curve25519"

P = 2**255 - 19
# Prime order of the large subgroup; full group order is 8 * ORDER.
ORDER = 2**252 + 27742317777372353535851937790883648493
COFACTOR = 8

D = (-121665 * pow(121666, P - 2, P)) % P
_TWO_D = (2 * D) % P
SQRT_M1 = pow(2, (P - 1) // 4, P)

MONT_A = 486662

ENCODED_LEN = 33  # 32-byte little-endian u plus one sign byte

Point = tuple[int, int, int, int]

IDENTITY: Point = (0, 1, 1, 0)


def _inv(x: int) -> int:
    return pow(x, P - 2, P)


def _sqrt(a: int) -> int | None:
    """Square root mod p (p = 5 mod 8), or None if a is not a QR."""
    a %= P
    if a == 0:
        return 0
    r = pow(a, (P + 3) // 8, P)
    if r * r % P == a:
        return r
    r = r * SQRT_M1 % P
    if r * r % P == a:
        return r
    return None


def from_affine(x: int, y: int) -> Point:
    return (x % P, y % P, 1, x * y % P)


def to_affine(p: Point) -> tuple[int, int]:
    zi = _inv(p[2])
    return (p[0] * zi % P, p[1] * zi % P)


def is_identity(p: Point) -> bool:
    return p[0] % P == 0 and (p[1] - p[2]) % P == 0


def eq(p: Point, q: Point) -> bool:
    # Cross-multiply to avoid inversions: X1/Z1 == X2/Z2 etc.
    return (
        (p[0] * q[2] - q[0] * p[2]) % P == 0
        and (p[1] * q[2] - q[1] * p[2]) % P == 0
    )


def neg(p: Point) -> Point:
    return ((-p[0]) % P, p[1], p[2], (-p[3]) % P)


def add(p: Point, q: Point) -> Point:
    # Unified/complete for a = -1 and non-square d: also valid for p == q
    # and for the identity, so the ladder below has no special cases.
    x1, y1, z1, t1 = p
    x2, y2, z2, t2 = q
    a = (y1 - x1) * (y2 - x2) % P
    b = (y1 + x1) * (y2 + x2) % P
    c = t1 * _TWO_D % P * t2 % P
    d = 2 * z1 * z2 % P
    e = b - a
    f = d - c
    g = d + c
    h = b + a
    return (e * f % P, g * h % P, f * g % P, e * h % P)


def double(p: Point) -> Point:
    x1, y1, z1, _ = p
    a = x1 * x1 % P
    b = y1 * y1 % P
    c = 2 * z1 * z1 % P
    e = ((x1 + y1) * (x1 + y1) - a - b) % P
    g = (b - a) % P
    f = (g - c) % P
    h = (-a - b) % P
    return (e * f % P, g * h % P, f * g % P, e * h % P)


def mul(k: int, p: Point) -> Point:
    """k * p via a fixed-length ladder.

    Runs exactly 256 iterations of one add and one double with
    index-selection instead of secret-dependent branches; the complete
    addition law keeps the operation sequence uniform for any k >= 0
    below 2^256 (callers pass reduced scalars or the sanitizer constant).
    """
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
    """Plain double-and-add; for public inputs only (validation,
    sanitization, verification equations)."""
    if k < 0:
        raise ValueError("negative scalar")
    acc: Point = IDENTITY
    for i in reversed(range(k.bit_length())):
        acc = double(acc)
        if (k >> i) & 1:
            acc = add(acc, p)
    return acc


def on_curve(x: int, y: int) -> bool:
    x2 = x * x % P
    y2 = y * y % P
    return (y2 - x2 - 1 - D * x2 % P * y2) % P == 0


def is_low_order(p: Point) -> bool:
    """True when the point lies in the 8-torsion subgroup."""
    return is_identity(double(double(double(p))))


def _recover_x(y: int, want_even: bool) -> int | None:
    # x^2 = (y^2 - 1) / (d*y^2 + 1)
    y2 = y * y % P
    x2 = (y2 - 1) * _inv(D * y2 + 1) % P
    x = _sqrt(x2)
    if x is None:
        return None
    if (x % 2 == 0) != want_even:
        x = (P - x) % P
    return x


def _base_point() -> Point:
    y = 4 * _inv(5) % P
    x = _recover_x(y, want_even=True)
    assert x is not None
    return from_affine(x, y)


GENERATOR: Point = _base_point()

# sqrt(-486664), fixed to the even root so encode/decode and the u<->Edwards
# maps all agree on which Montgomery v each Edwards x corresponds to.
_C = _sqrt(-486664 % P)
assert _C is not None
if _C % 2 == 1:
    _C = P - _C


class ConversionError(Exception):
    """Point has no affine Montgomery image (identity or order-2 edge)."""


def to_montgomery(p: Point) -> tuple[int, int]:
    """Affine Montgomery (u, v) of an Edwards point.

    u = (1+y)/(1-y), v = c*u/x with c = sqrt(-486664). The identity has
    no affine u; the order-2 point (0, -1) maps to (0, 0).
    """
    x, y = to_affine(p)
    if x == 0:
        if y == 1:
            raise ConversionError("identity has no Montgomery u-coordinate")
        return (0, 0)  # y == -1, the order-2 point
    u = (1 + y) * _inv(1 - y) % P
    v = _C * u % P * _inv(x) % P
    return (u, v)


def from_montgomery(u: int, v: int) -> Point:
    if u == 0 and v == 0:
        return from_affine(0, P - 1)
    if (u + 1) % P == 0:
        raise ConversionError("u = -1 is not in the image of the Edwards map")
    y = (u - 1) * _inv(u + 1) % P
    x = _C * u % P * _inv(v) % P
    if not on_curve(x, y):
        raise ConversionError("(u, v) does not map onto the Edwards curve")
    return from_affine(x, y)


def to_u_bytes(p: Point) -> bytes:
    u, _ = to_montgomery(p)
    return u.to_bytes(32, "little")


def sign_bit(p: Point) -> int:
    """0 when the Montgomery v-coordinate is even ("positive"), else 1."""
    _, v = to_montgomery(p)
    return v & 1


class DecodeFailure(Exception):
    pass


def decode_u(u_bytes: bytes, sign: int) -> Point:
    if len(u_bytes) != 32:
        raise DecodeFailure("u-coordinate must be 32 bytes")
    if sign not in (0, 1):
        raise DecodeFailure("sign byte must be 0 or 1")
    u = int.from_bytes(u_bytes, "little")
    if u >= P:
        raise DecodeFailure("non-canonical u-coordinate (>= p)")
    rhs = (u * u % P * u + MONT_A * u % P * u + u) % P
    v = _sqrt(rhs)
    if v is None:
        raise DecodeFailure("u-coordinate is not on the curve")
    if v & 1 != sign:
        v = (P - v) % P
    if v & 1 != sign:
        raise DecodeFailure("no second coordinate with the requested sign")
    try:
        return from_montgomery(u, v)
    except ConversionError as exc:
        raise DecodeFailure(str(exc)) from exc


def encode(p: Point) -> bytes:
    if is_identity(p):
        raise ConversionError("identity point is not encodable")
    u, v = to_montgomery(p)
    return u.to_bytes(32, "little") + bytes([v & 1])


def decode(data: bytes) -> Point:
    if len(data) != ENCODED_LEN:
        raise DecodeFailure(f"encoded point must be {ENCODED_LEN} bytes")
    return decode_u(data[:32], data[32])
