"""Integer side of the sharing: prime generation, CRT, base-p0 digits.

Everything here is exact integer arithmetic.  Nothing is reduced mod the
group order unless a function says so.
"""
from __future__ import annotations

import math
import struct
from itertools import combinations

from .errors import NotCoprime, TooLarge, WeightOutOfRange
from .group import default_rng

MR_ROUNDS = 40
_SMALL_PRIMES = [p for p in range(3, 1000) if all(p % d for d in range(2, int(p**0.5) + 1))]


def max_weight(p0_bits: int) -> int:
    """Largest prime bit length keeping p0 > p^2 + p."""
    return (p0_bits - 1) // 2


def is_probable_prime(n: int, rng=None, rounds: int = MR_ROUNDS) -> bool:
    if n < 2:
        return False
    if n in (2, 3):
        return True
    if n % 2 == 0:
        return False
    for p in _SMALL_PRIMES:
        if n == p:
            return True
        if n % p == 0:
            return False
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    rng = rng or default_rng()
    for _ in range(rounds):
        a = rng.randrange(2, n - 1)
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def gen_prime(bit_length: int, rng=None, p0_bits: int | None = None) -> int:
    """Uniform prime p with 2^(bit_length-1) < p < 2^bit_length."""
    if p0_bits is None:
        from .group import get_group

        p0_bits = get_group().bits
    cap = max_weight(p0_bits)
    if bit_length < 2 or bit_length > cap:
        raise WeightOutOfRange(f"bit length {bit_length} outside [2, {cap}]")
    rng = rng or default_rng()
    lo, hi = 2 ** (bit_length - 1) + 1, 2**bit_length
    while True:
        c = rng.randrange(lo, hi)
        if is_probable_prime(c, rng):
            return c


def largest_primes_below(bit_length: int, count: int, exclude=()) -> list[int]:
    """The `count` largest primes of exactly `bit_length` bits, descending."""
    out, c = [], 2**bit_length - 1
    floor = 2 ** (bit_length - 1)
    while len(out) < count and c > floor:
        if c not in exclude and is_probable_prime(c):
            out.append(c)
        c -= 1
    if len(out) < count:
        raise WeightOutOfRange(f"not enough {bit_length}-bit primes")
    return out


def check_coprime(moduli) -> None:
    for a, b in combinations(moduli, 2):
        if math.gcd(a, b) != 1:
            raise NotCoprime(f"gcd({a}, {b}) > 1")


def crt_solve(residues) -> int:
    """Smallest non-negative s with s = s_i mod p_i for every (s_i, p_i)."""
    residues = list(residues)
    moduli = [p for _, p in residues]
    check_coprime(moduli)
    P = math.prod(moduli)
    total = 0
    for s_i, p_i in residues:
        q_i = P // p_i
        total += s_i * q_i * pow(q_i, -1, p_i)
    return total % P


def decompose_base_p0(s: int, m: int, p0: int) -> list[int]:
    if s < 0 or s >= p0 ** (m + 1):
        raise TooLarge(f"value needs more than {m + 1} base-p0 digits")
    digits = []
    for _ in range(m + 1):
        s, d = divmod(s, p0)
        digits.append(d)
    return digits


def recompose_base_p0(digits, p0: int) -> int:
    s = 0
    for d in reversed(digits):
        s = s * p0 + d
    return s


def mod_small(s: int, p: int) -> int:
    if p < 2:
        raise ValueError("modulus must be at least 2")
    return s % p


def encode_nat(x: int) -> bytes:
    """4-byte big-endian length, then minimal big-endian magnitude."""
    if x < 0:
        raise ValueError("negative")
    body = x.to_bytes((x.bit_length() + 7) // 8, "big")
    return struct.pack(">I", len(body)) + body


def decode_nat(data: bytes, offset: int = 0) -> tuple[int, int]:
    if len(data) < offset + 4:
        raise ValueError("truncated length prefix")
    (n,) = struct.unpack_from(">I", data, offset)
    body = data[offset + 4 : offset + 4 + n]
    if len(body) != n:
        raise ValueError("truncated natural")
    if n and body[0] == 0:
        raise ValueError("non-minimal encoding")
    return int.from_bytes(body, "big"), offset + 4 + n
