"""Prime-order groups and Pedersen commitments.

Two backends are available.  ``ristretto255`` (the default) calls the system
libsodium through ctypes; ``secp256k1`` goes through coincurve.  Set
``WVSS_GROUP`` to pick one at runtime.

Points are opaque backend values.  Use ``encode``/``decode`` for bytes and
``eq`` for comparison; scalars are plain ints in ``[0, order)``.
"""
from __future__ import annotations

import ctypes
import ctypes.util
import hashlib
import os
import secrets
import struct
from dataclasses import dataclass

from .errors import VectorTooWide

GROUP_ENV = "WVSS_GROUP"
DEFAULT_GROUP = "ristretto255"


class Ristretto255:
    name = "ristretto255"
    order = 2**252 + 27742317777372353535851937790883648493
    element_size = 32
    identity = bytes(32)

    def __init__(self):
        path = ctypes.util.find_library("sodium")
        if path is None:
            raise RuntimeError("libsodium not found; set WVSS_GROUP=secp256k1")
        lib = ctypes.CDLL(path)
        if lib.sodium_init() < 0:
            raise RuntimeError("sodium_init failed")
        self._add = lib.crypto_core_ristretto255_add
        self._sub = lib.crypto_core_ristretto255_sub
        self._mul = lib.crypto_scalarmult_ristretto255
        self._valid = lib.crypto_core_ristretto255_is_valid_point
        self._from_hash = lib.crypto_core_ristretto255_from_hash

    @property
    def bits(self) -> int:
        return self.order.bit_length()

    def add(self, P: bytes, Q: bytes) -> bytes:
        buf = ctypes.create_string_buffer(32)
        self._add(buf, P, Q)
        return buf.raw

    def sub(self, P: bytes, Q: bytes) -> bytes:
        buf = ctypes.create_string_buffer(32)
        self._sub(buf, P, Q)
        return buf.raw

    def neg(self, P: bytes) -> bytes:
        return self.sub(self.identity, P)

    def mul(self, k: int, P: bytes) -> bytes:
        k %= self.order
        if k == 0:
            return self.identity
        buf = ctypes.create_string_buffer(32)
        # a -1 return means the product is the identity; buf is zeroed then
        self._mul(buf, k.to_bytes(32, "little"), P)
        return buf.raw

    def msm(self, scalars, points) -> bytes:
        order = self.order
        minus_one = order - 1
        buf = ctypes.create_string_buffer(32)
        add, sub, mul = self._add, self._sub, self._mul
        acc = self.identity
        for k, P in zip(scalars, points):
            k %= order
            if k == 0:
                continue
            if k == 1:
                add(buf, acc, P)
            elif k == minus_one:
                sub(buf, acc, P)
            else:
                mul(buf, k.to_bytes(32, "little"), P)
                add(buf, acc, buf.raw)
            acc = buf.raw
        return acc

    def hash_to_group(self, data: bytes) -> bytes:
        buf = ctypes.create_string_buffer(32)
        self._from_hash(buf, hashlib.sha512(data).digest())
        return buf.raw

    def encode(self, P: bytes) -> bytes:
        return P

    def decode(self, data: bytes) -> bytes:
        data = bytes(data)
        if len(data) != 32 or self._valid(data) != 1:
            raise ValueError("not a canonical ristretto255 encoding")
        return data

    def eq(self, P, Q) -> bool:
        return P == Q

    def is_identity(self, P) -> bool:
        return P == self.identity


class Secp256k1:
    """secp256k1 via coincurve; the identity is represented by ``None``."""

    name = "secp256k1"
    order = 0xFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFEBAAEDCE6AF48A03BBFD25E8CD0364141
    field_prime = 2**256 - 2**32 - 977
    element_size = 33
    identity = None

    def __init__(self):
        import coincurve

        self._pk = coincurve.PublicKey

    @property
    def bits(self) -> int:
        return self.order.bit_length()

    def add(self, P, Q):
        if P is None:
            return Q
        if Q is None:
            return P
        try:
            return self._pk.combine_keys([P, Q])
        except ValueError:
            return None

    def neg(self, P):
        if P is None:
            return None
        raw = P.format(compressed=True)
        return self._pk(bytes([raw[0] ^ 1]) + raw[1:])

    def sub(self, P, Q):
        return self.add(P, self.neg(Q))

    def mul(self, k: int, P):
        k %= self.order
        if k == 0 or P is None:
            return None
        return P.multiply(k.to_bytes(32, "big"))

    def msm(self, scalars, points):
        order = self.order
        terms = []
        for k, P in zip(scalars, points):
            k %= order
            if k == 0 or P is None:
                continue
            terms.append(P if k == 1 else P.multiply(k.to_bytes(32, "big")))
        if not terms:
            return None
        if len(terms) == 1:
            return terms[0]
        try:
            return self._pk.combine_keys(terms)
        except ValueError:
            return None

    def hash_to_group(self, data: bytes):
        # try-and-increment on the x coordinate
        ctr = 0
        while True:
            x = int.from_bytes(hashlib.sha256(data + struct.pack(">I", ctr)).digest(), "big")
            ctr += 1
            if x >= self.field_prime:
                continue
            try:
                return self._pk(b"\x02" + x.to_bytes(32, "big"))
            except ValueError:
                continue

    def encode(self, P) -> bytes:
        if P is None:
            return bytes(33)
        return P.format(compressed=True)

    def decode(self, data: bytes):
        data = bytes(data)
        if len(data) != 33:
            raise ValueError("bad secp256k1 encoding length")
        if data == bytes(33):
            return None
        if data[0] not in (2, 3):
            raise ValueError("not a compressed secp256k1 point")
        try:
            return self._pk(data)
        except ValueError as exc:
            raise ValueError(str(exc)) from None

    def eq(self, P, Q) -> bool:
        return self.encode(P) == self.encode(Q)

    def is_identity(self, P) -> bool:
        return P is None


_BACKENDS = {"ristretto255": Ristretto255, "secp256k1": Secp256k1}
_INSTANCES: dict = {}


def get_group(name: str | None = None):
    name = name or os.environ.get(GROUP_ENV, DEFAULT_GROUP)
    if name not in _BACKENDS:
        raise ValueError(f"unknown group {name!r}; choose from {sorted(_BACKENDS)}")
    if name not in _INSTANCES:
        _INSTANCES[name] = _BACKENDS[name]()
    return _INSTANCES[name]


def scalar_bytes(group) -> int:
    return (group.bits + 7) // 8


def encode_scalar(group, x: int) -> bytes:
    return (x % group.order).to_bytes(scalar_bytes(group), "little")


def decode_scalar(group, data: bytes) -> int:
    if len(data) != scalar_bytes(group):
        raise ValueError("bad scalar length")
    x = int.from_bytes(data, "little")
    if x >= group.order:
        raise ValueError("scalar not reduced")
    return x


def default_rng():
    return secrets.SystemRandom()


def random_scalar(group, rng=None) -> int:
    return (rng or default_rng()).randrange(group.order)


# generator i only depends on (group, label, tag, i), so a wider setup extends
# a narrower one; derived points are cached per label
_GEN_CACHE: dict = {}


def _derive(group, label: bytes, tag: bytes, index: int):
    msg = b"wrvss/generator" + struct.pack(">I", len(label)) + label + tag + struct.pack(">Q", index)
    return group.hash_to_group(msg)


def _generators(group, label: bytes, tag: bytes, width: int) -> tuple:
    key = (group.name, label, tag)
    cached = _GEN_CACHE.setdefault(key, [])
    while len(cached) < width:
        cached.append(_derive(group, label, tag, len(cached)))
    return tuple(cached[:width])


@dataclass(frozen=True)
class PedersenParams:
    group: object
    context_label: bytes
    g: object
    h: object
    g_vec: tuple
    h_vec: tuple

    @property
    def width(self) -> int:
        return len(self.g_vec)

    @property
    def p0(self) -> int:
        return self.group.order


def setup(context_label: bytes, width: int, group=None) -> PedersenParams:
    if width < 1:
        raise ValueError("width must be at least 1")
    group = group or get_group()
    g = _derive(group, context_label, b"g", 0)
    h = _derive(group, context_label, b"h", 0)
    return PedersenParams(
        group=group,
        context_label=context_label,
        g=g,
        h=h,
        g_vec=_generators(group, context_label, b"G", width),
        h_vec=_generators(group, context_label, b"H", width),
    )


def commit(params: PedersenParams, x: int, r: int):
    return params.group.msm((x, r), (params.g, params.h))


def commit_vec(params: PedersenParams, x_vec, r: int, basis: str = "g"):
    """h^r * prod gens_i^x_i, with gens the G vector (or H when basis="h")."""
    gens = params.g_vec if basis == "g" else params.h_vec
    if len(x_vec) > len(gens):
        raise VectorTooWide(f"{len(x_vec)} values for width {len(gens)}")
    return params.group.msm([r, *x_vec], [params.h, *gens[: len(x_vec)]])
