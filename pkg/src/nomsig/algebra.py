"""Group and hash abstraction used by the signature scheme.

Two interchangeable backends expose the same surface:

  * ``RealBackend`` -- the BN254 curve groups with the optimal ate pairing.
  * ``MockBackend`` -- every group element is its discrete log w.r.t. the
    fixed generator, reduced mod the group order; the pairing multiplies
    exponents. This is the brute-force oracle the test suites check the
    real curve against.

Scalars are plain ints in [0, order). Group elements are immutable wrapper
objects supporting ``*`` (group operation), ``**`` (scalar exponent), ``/``
and ``~`` (inverse), so scheme code reads like the algebra it implements.
"""

from __future__ import annotations

import hashlib
from typing import Any, Iterable

from . import bn254

ELL = 256

H1_TAG = b"NOMSIG-H1"
H2_TAG = b"NOMSIG-H2"


class AlgebraError(Exception):
    pass


class MalformedEncoding(AlgebraError):
    pass


class NotOnCurve(AlgebraError):
    pass


class NotInSubgroup(AlgebraError):
    pass


# ---------------------------------------------------------------------------
# Hashes
# ---------------------------------------------------------------------------


def hash_h1(data: bytes) -> bytes:
    """H1: arbitrary bytes -> 256-bit string (returned as 32 bytes)."""
    return hashlib.sha256(H1_TAG + data).digest()


def hash_h2(data: bytes, order: int) -> int:
    """H2: arbitrary bytes -> scalar, by wide reduction of a 512-bit digest."""
    return int.from_bytes(hashlib.sha512(H2_TAG + data).digest(), "big") % order


def encode_parts(*parts: bytes) -> bytes:
    """Length-prefixed concatenation; keeps multi-field hash inputs unambiguous."""
    out = bytearray()
    for part in parts:
        out += len(part).to_bytes(4, "big") + part
    return bytes(out)


def bit(bs: bytes, i: int) -> int:
    """The i-th bit of a bit string, 1-indexed, MSB of the first byte first."""
    return (bs[(i - 1) >> 3] >> (7 - ((i - 1) & 7))) & 1


def bits_of(bs: bytes) -> tuple[int, ...]:
    out = []
    for byte in bs:
        for j in range(7, -1, -1):
            out.append((byte >> j) & 1)
    return tuple(out)


# ---------------------------------------------------------------------------
# Group elements
# ---------------------------------------------------------------------------


class GroupElem:
    """Immutable element of one of the three pairing groups."""

    __slots__ = ("backend", "group", "value")

    def __init__(self, backend: "Backend", group: str, value: Any):
        object.__setattr__(self, "backend", backend)
        object.__setattr__(self, "group", group)
        object.__setattr__(self, "value", value)

    def __setattr__(self, *_):
        raise AttributeError("group elements are immutable")

    def __mul__(self, other: "GroupElem") -> "GroupElem":
        if not isinstance(other, GroupElem) or other.group != self.group:
            return NotImplemented
        return GroupElem(self.backend, self.group, self.backend.op(self.group, self.value, other.value))

    def __truediv__(self, other: "GroupElem") -> "GroupElem":
        return self * ~other

    def __pow__(self, k: int) -> "GroupElem":
        return GroupElem(self.backend, self.group, self.backend.exp(self.group, self.value, k % self.backend.order))

    def __invert__(self) -> "GroupElem":
        return GroupElem(self.backend, self.group, self.backend.inv(self.group, self.value))

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, GroupElem)
            and self.group == other.group
            and type(self.backend) is type(other.backend)
            and self.value == other.value
        )

    def __hash__(self):
        return hash((self.group, self.value))

    def is_identity(self) -> bool:
        return self.value == self.backend.identity_value(self.group)

    def to_bytes(self) -> bytes:
        return self.backend.serialize(self.group, self.value)

    def hex(self) -> str:
        return self.to_bytes().hex()

    def __repr__(self):
        return f"<{self.group} {self.hex()[:16]}..>"


def product(elems: Iterable[GroupElem], identity: GroupElem) -> GroupElem:
    acc = identity
    for e in elems:
        acc = acc * e
    return acc


# ---------------------------------------------------------------------------
# Backends
# ---------------------------------------------------------------------------


class Backend:
    """Shared surface of the two backends."""

    name: str
    order: int

    def g1(self) -> GroupElem:
        return GroupElem(self, "G1", self.generator_value("G1"))

    def g2(self) -> GroupElem:
        return GroupElem(self, "G2", self.generator_value("G2"))

    def gt(self) -> GroupElem:
        """e(g1, g2), the canonical GT generator."""
        return self.pairing(self.g1(), self.g2())

    def identity(self, group: str) -> GroupElem:
        return GroupElem(self, group, self.identity_value(group))

    def pairing(self, a: GroupElem, b: GroupElem) -> GroupElem:
        if a.group != "G1" or b.group != "G2":
            raise AlgebraError(f"pairing needs (G1, G2), got ({a.group}, {b.group})")
        return GroupElem(self, "GT", self.pairing_value(a.value, b.value))

    def element(self, group: str, data: bytes) -> GroupElem:
        return GroupElem(self, group, self.deserialize(group, data))

    def random_scalar(self, rng) -> int:
        return rng.randrange(self.order)

    def random_nonzero_scalar(self, rng) -> int:
        return rng.randrange(1, self.order)

    def hash_to_g2(self, data: bytes) -> GroupElem:
        raise NotImplementedError

    # value-level hooks implemented per backend
    def generator_value(self, group): raise NotImplementedError
    def identity_value(self, group): raise NotImplementedError
    def op(self, group, a, b): raise NotImplementedError
    def inv(self, group, a): raise NotImplementedError
    def exp(self, group, a, k): raise NotImplementedError
    def pairing_value(self, a, b): raise NotImplementedError
    def serialize(self, group, a) -> bytes: raise NotImplementedError
    def deserialize(self, group, data: bytes): raise NotImplementedError


class MockBackend(Backend):
    """Exponent-tracking oracle: an element is its discrete log mod the order."""

    name = "mock"
    order = bn254.N

    def generator_value(self, group):
        return 1

    def identity_value(self, group):
        return 0

    def op(self, group, a, b):
        return (a + b) % self.order

    def inv(self, group, a):
        return -a % self.order

    def exp(self, group, a, k):
        return a * k % self.order

    def pairing_value(self, a, b):
        return a * b % self.order

    def serialize(self, group, a):
        return a.to_bytes(32, "big")

    def deserialize(self, group, data):
        if len(data) != 32:
            raise MalformedEncoding(f"{group}: expected 32 bytes, got {len(data)}")
        v = int.from_bytes(data, "big")
        if v >= self.order:
            raise MalformedEncoding(f"{group}: exponent out of range")
        return v

    def hash_to_g2(self, data: bytes) -> GroupElem:
        return GroupElem(self, "G2", hash_h2(b"mock-h2g" + data, self.order))


_FLAG_SIGN = 0x80
_FLAG_INF = 0x40


def _fp_is_high(v: int) -> bool:
    return v > (bn254.P - 1) // 2


def _f2_is_high(v) -> bool:
    c0, c1 = v
    return _fp_is_high(c1) if c1 != 0 else _fp_is_high(c0)


class RealBackend(Backend):
    """BN254 groups; G2 lives on the sextic twist, GT inside Fp12."""

    name = "bn254"
    order = bn254.N

    def generator_value(self, group):
        if group == "G1":
            return bn254.G1_GEN
        if group == "G2":
            return bn254.G2_GEN
        return self._gt_gen()

    _gt_gen_cache = None

    def _gt_gen(self):
        if RealBackend._gt_gen_cache is None:
            RealBackend._gt_gen_cache = bn254.pairing(bn254.G1_GEN, bn254.G2_GEN)
        return RealBackend._gt_gen_cache

    def identity_value(self, group):
        return bn254.F12_ONE if group == "GT" else None

    def op(self, group, a, b):
        if group == "G1":
            return bn254.g1_add(a, b)
        if group == "G2":
            return bn254.g2_add(a, b)
        return bn254.f12_mul(a, b)

    def inv(self, group, a):
        if group == "G1":
            return bn254.g1_neg(a)
        if group == "G2":
            return bn254.g2_neg(a)
        return bn254.f12_conj(a)  # GT is cyclotomic: inverse = conjugate

    def exp(self, group, a, k):
        if group == "G1":
            return bn254.g1_mul_base(k) if a == bn254.G1_GEN else bn254.g1_mul(a, k)
        if group == "G2":
            return bn254.g2_mul_base(k) if a == bn254.G2_GEN else bn254.g2_mul(a, k % self.order)
        return bn254.f12_pow(a, k % self.order)

    def pairing_value(self, a, b):
        return bn254.pairing(a, b)

    def serialize(self, group, a):
        if group == "GT":
            out = bytearray()
            for c in a:
                out += c[0].to_bytes(32, "big") + c[1].to_bytes(32, "big")
            return bytes(out)
        if a is None:
            n = 32 if group == "G1" else 64
            return bytes([_FLAG_INF]) + bytes(n - 1)
        x, y = a
        if group == "G1":
            buf = bytearray(x.to_bytes(32, "big"))
            if _fp_is_high(y):
                buf[0] |= _FLAG_SIGN
            return bytes(buf)
        buf = bytearray(x[1].to_bytes(32, "big") + x[0].to_bytes(32, "big"))
        if _f2_is_high(y):
            buf[0] |= _FLAG_SIGN
        return bytes(buf)

    def deserialize(self, group, data):
        if group == "GT":
            if len(data) != 384:
                raise MalformedEncoding("GT: expected 384 bytes")
            coeffs = []
            for i in range(6):
                c0 = int.from_bytes(data[64 * i : 64 * i + 32], "big")
                c1 = int.from_bytes(data[64 * i + 32 : 64 * i + 64], "big")
                if c0 >= bn254.P or c1 >= bn254.P:
                    raise MalformedEncoding("GT: coefficient out of range")
                coeffs.append((c0, c1))
            v = tuple(coeffs)
            if bn254.f12_pow(v, self.order) != bn254.F12_ONE:
                raise NotInSubgroup("GT: not in the order-n subgroup")
            return v
        n = 32 if group == "G1" else 64
        if len(data) != n:
            raise MalformedEncoding(f"{group}: expected {n} bytes, got {len(data)}")
        flags = data[0] & (_FLAG_SIGN | _FLAG_INF)
        body = bytes([data[0] & ~(_FLAG_SIGN | _FLAG_INF)]) + data[1:]
        if flags & _FLAG_INF:
            if flags & _FLAG_SIGN or any(body):
                raise MalformedEncoding(f"{group}: bad infinity encoding")
            return None
        sign = bool(flags & _FLAG_SIGN)
        if group == "G1":
            x = int.from_bytes(body, "big")
            if x >= bn254.P:
                raise MalformedEncoding("G1: x out of range")
            y = bn254._sqrt_fp((x * x * x + bn254.G1_B) % bn254.P)
            if y is None:
                raise NotOnCurve("G1: x not on curve")
            if _fp_is_high(y) != sign:
                y = -y % bn254.P
            return (x, y)
        c1 = int.from_bytes(body[:32], "big")
        c0 = int.from_bytes(body[32:], "big")
        if c0 >= bn254.P or c1 >= bn254.P:
            raise MalformedEncoding("G2: x out of range")
        x = (c0, c1)
        rhs = bn254.f2_add(bn254.f2_mul(bn254.f2_sqr(x), x), bn254.TW_B)
        y = bn254.f2_sqrt(rhs)
        if y is None:
            raise NotOnCurve("G2: x not on curve")
        if _f2_is_high(y) != sign:
            y = bn254.f2_neg(y)
        pt = (x, y)
        if not bn254.g2_in_subgroup(pt):
            raise NotInSubgroup("G2: point not in the prime-order subgroup")
        return pt

    def hash_to_g2(self, data: bytes) -> GroupElem:
        """Try-and-increment onto the twist, then clear the cofactor."""
        ctr = 0
        while True:
            seed = hashlib.sha512(b"NOMSIG-H2G" + ctr.to_bytes(4, "big") + data).digest()
            c0 = int.from_bytes(seed[:32], "big") % bn254.P
            c1 = int.from_bytes(seed[32:], "big") % bn254.P
            x = (c0, c1)
            rhs = bn254.f2_add(bn254.f2_mul(bn254.f2_sqr(x), x), bn254.TW_B)
            y = bn254.f2_sqrt(rhs)
            if y is not None:
                if _f2_is_high(y):
                    y = bn254.f2_neg(y)
                pt = bn254.g2_mul((x, y), bn254.G2_COFACTOR)
                if pt is not None:
                    return GroupElem(self, "G2", pt)
            ctr += 1


def get_backend(name: str) -> Backend:
    if name in ("mock", "mock-exponent"):
        return MockBackend()
    if name in ("real", "bn254", "real-curve"):
        return RealBackend()
    raise AlgebraError(f"unknown backend {name!r}")
