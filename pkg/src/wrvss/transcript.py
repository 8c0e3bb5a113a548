"""Fiat-Shamir transcript over a SHAKE256 duplex.

Each absorbed item is framed as len(label) || label || len(data) || data, so
no two absorb sequences share an encoding.  Squeezing forks the state,
reads the output, then absorbs that output back in (a ratchet), which keeps
later challenges bound to earlier ones.
"""
from __future__ import annotations

import hashlib
import struct

from .bignat import encode_nat
from .group import encode_scalar


class Transcript:
    def __init__(self, label: bytes):
        self._state = hashlib.shake_256()
        self.append_message(b"dom-sep", label)

    def append_message(self, label: bytes, data: bytes) -> None:
        self._state.update(struct.pack(">I", len(label)) + label + struct.pack(">Q", len(data)) + data)

    def append_u64(self, label: bytes, x: int) -> None:
        self.append_message(label, struct.pack(">Q", x))

    def append_nat(self, label: bytes, x: int) -> None:
        self.append_message(label, encode_nat(x))

    def append_point(self, label: bytes, group, P) -> None:
        self.append_message(label, group.encode(P))

    def append_scalar(self, label: bytes, group, x: int) -> None:
        self.append_message(label, encode_scalar(group, x))

    def challenge_bytes(self, label: bytes, n: int) -> bytes:
        self.append_message(b"challenge", label)
        out = self._state.copy().digest(n)
        self.append_message(b"squeezed", out)
        return out

    def challenge_scalar(self, label: bytes, order: int) -> int:
        """Nonzero scalar; 64 output bytes keep the modular bias negligible."""
        while True:
            x = int.from_bytes(self.challenge_bytes(label, 64), "little") % order
            if x:
                return x

    def fork(self) -> "Transcript":
        t = Transcript.__new__(Transcript)
        t._state = self._state.copy()
        return t
