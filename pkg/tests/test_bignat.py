import math
import random

import pytest
import sympy
from hypothesis import given, strategies as st

from wrvss.bignat import (
    check_coprime,
    crt_solve,
    decode_nat,
    decompose_base_p0,
    encode_nat,
    gen_prime,
    is_probable_prime,
    largest_primes_below,
    max_weight,
    mod_small,
    recompose_base_p0,
)
from wrvss.errors import NotCoprime, TooLarge, WeightOutOfRange
from wrvss.group import get_group

from .oracles import crt_brute

P0 = get_group().order


@given(st.integers(min_value=0, max_value=10**6))
def test_primality_matches_sympy_small(n):
    assert is_probable_prime(n) == sympy.isprime(n)


@given(st.integers(min_value=2**60, max_value=2**128))
def test_primality_matches_sympy_large(n):
    assert is_probable_prime(n) == sympy.isprime(n)


def test_carmichael_and_strong_pseudoprimes():
    for n in (561, 1105, 1729, 2047, 3215031751, 3825123056546413051):
        assert not is_probable_prime(n)


def test_weight_cap():
    assert max_weight(253) == 126
    with pytest.raises(WeightOutOfRange):
        gen_prime(200, p0_bits=253)
    with pytest.raises(WeightOutOfRange):
        gen_prime(1, p0_bits=253)


def test_gen_prime_examples(rng):
    assert gen_prime(2, rng) == 3
    p = gen_prime(10, rng)
    assert 512 < p < 1024 and all(p % d for d in range(2, 33))


@pytest.mark.parametrize("bits", [2, 3, 8, 32, 64, 126])
def test_gen_prime_invariants(bits):
    rng = random.Random(bits)
    for _ in range(5):
        p = gen_prime(bits, rng)
        assert p.bit_length() == bits and sympy.isprime(p)
        assert p * p + p < P0 and math.gcd(p, P0) == 1


def test_gen_prime_is_reproducible():
    assert gen_prime(64, random.Random(5)) == gen_prime(64, random.Random(5))


def test_largest_primes_below():
    assert largest_primes_below(4, 2) == [13, 11]
    ps = largest_primes_below(126, 3)
    assert all(p.bit_length() == 126 and sympy.isprime(p) for p in ps)
    assert ps == sorted(ps, reverse=True)
    with pytest.raises(WeightOutOfRange):
        largest_primes_below(3, 5)


def test_crt_examples():
    assert crt_solve([(2, 3), (3, 5)]) == 8
    assert crt_solve([(0, 7)]) == 0
    with pytest.raises(NotCoprime):
        crt_solve([(1, 4), (1, 6)])
    with pytest.raises(NotCoprime):
        check_coprime([6, 35, 10])


@given(st.lists(st.sampled_from([2, 3, 5, 7, 11, 13, 17, 19, 23, 29]), min_size=1, max_size=5, unique=True), st.data())
def test_crt_matches_brute_force(moduli, data):
    P = math.prod(moduli)
    s = data.draw(st.integers(min_value=0, max_value=P - 1))
    residues = [(s % p, p) for p in moduli]
    assert crt_solve(residues) == crt_brute(residues) == s


@given(st.integers(min_value=0, max_value=2**1000))
def test_crt_inverts_sharing_for_big_primes(s):
    primes = largest_primes_below(126, 8)
    P = math.prod(primes)
    s %= P
    assert crt_solve([(mod_small(s, p), p) for p in primes]) == s


def test_digit_examples():
    assert decompose_base_p0(0, 2, P0) == [0, 0, 0]
    assert decompose_base_p0(5 + 7 * P0 + 2 * P0**2, 2, P0) == [5, 7, 2]
    with pytest.raises(TooLarge):
        decompose_base_p0(P0**3, 2, P0)


@given(st.integers(min_value=0), st.integers(min_value=0, max_value=4))
def test_digits_roundtrip(s, m):
    s %= P0 ** (m + 1)
    d = decompose_base_p0(s, m, P0)
    assert len(d) == m + 1 and all(0 <= x < P0 for x in d)
    assert recompose_base_p0(d, P0) == s == sum(x * P0**j for j, x in enumerate(d))


@given(st.lists(st.integers(min_value=0, max_value=P0 - 1), min_size=3, max_size=3), st.lists(st.integers(min_value=0, max_value=P0 - 1), min_size=3, max_size=3))
def test_digit_vectors_are_unique(d1, d2):
    if d1 != d2:
        assert recompose_base_p0(d1, P0) != recompose_base_p0(d2, P0)


def test_mod_small_examples():
    assert mod_small(23, 5) == 3
    assert mod_small(8, 3) == 2
    assert mod_small(96, 97) == 96


@given(st.integers(min_value=0, max_value=2**600))
def test_nat_roundtrip(x):
    data = encode_nat(x) + b"tail"
    assert decode_nat(data) == (x, len(data) - 4)


def test_nat_rejects_non_minimal():
    with pytest.raises(ValueError):
        decode_nat(b"\x00\x00\x00\x02\x00\x05")
    with pytest.raises(ValueError):
        decode_nat(b"\x00\x00\x00\x05\x01")
