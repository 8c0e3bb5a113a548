import random
import statistics

import pytest
from hypothesis import given, strategies as st

from wrvss import r1cs
from wrvss.bignat import gen_prime
from wrvss.errors import BadInput, MalformedProof
from wrvss.group import commit, get_group
from wrvss.pom import PomProof, decomp, emod_solve, mod_solve, ni_pom_prove, ni_pom_verify, pom_setup
from wrvss.r1cs import is_satisfied

G = get_group()
P0 = G.order


def make(p, digits, v, rng, strict=True):
    pp = pom_setup(p, len(digits) - 1, G)
    r_v = rng.randrange(P0)
    r_d = [rng.randrange(P0) for _ in digits]
    proof = ni_pom_prove(pp, p, digits, v, r_v, r_d, rng, strict=strict)
    V = commit(pp, v, r_v)
    A = [commit(pp, d, r) for d, r in zip(digits, r_d)]
    return pp, V, A, proof


def test_decomp_examples():
    assert decomp(5, 3) == ([1, 0, 1], [0, -1, 0])
    assert decomp(0, 3) == ([0, 0, 0], [-1, -1, -1])
    assert decomp(9, 3) == ([9, 0, 0], [0, -1, -1])


def test_mod_solve_toy_branches():
    mp = r1cs.mod_params(3, 13)
    w = mod_solve(2, 11, 3, 13)
    k = sum(w.a[i] << i for i in range(mp.n2))
    assert k == 3
    # s in the top t residues: k = q, only the right disjunct holds
    w = mod_solve(0, 12, 3, 13)
    assert sum(w.a[i] << i for i in range(mp.n2)) == 4
    # left range fails (k = q), so the disjunction gate carries it on a
    assert w.a[-1] != 0 and w.b[-1] == 0
    for z in range(13):
        assert is_satisfied(r1cs.mod_ckt(3, z, 13), [0, 12], w)
    w = mod_solve(1, 1, 3, 13)
    assert sum(w.a[i] << i for i in range(mp.n2)) == 0


def test_bad_input():
    with pytest.raises(BadInput):
        mod_solve(1, 11, 3, 13)
    with pytest.raises(BadInput):
        mod_solve(3, 3, 3, 13)
    with pytest.raises(BadInput):
        emod_solve(0, [1, P0], 1021, P0)


@given(st.integers(min_value=0, max_value=P0 - 1), st.sampled_from([3, 13, 1021, 2**31 - 1, 85070591730234615865843651857942052727]))
def test_honest_path_never_falls_back(s, p):
    mp = r1cs.mod_params(p, P0)
    w = mod_solve(s % p, s, p, P0)
    blocks = [mp.n2, mp.n2, mp.n1, mp.n1]
    off = 0
    for n in blocks:
        assert all(x in (0, 1) for x in w.a[off : off + n])
        off += n


def test_emod_solve_matches_mod_solve_at_m0():
    assert emod_solve(5, [1021 * 7 + 5], 1021, P0) == mod_solve(5, 1021 * 7 + 5, 1021, P0)


@pytest.mark.parametrize("bits", [4, 10, 32, 126])
def test_completeness_250_per_prime_size(bits):
    rng = random.Random(bits)
    for _ in range(250):
        p = gen_prime(bits, rng)
        s = rng.randrange(P0)
        pp, V, A, proof = make(p, [s], s % p, rng)
        assert ni_pom_verify(pp, p, V, A, proof)


@pytest.mark.parametrize("m", [1, 2])
def test_extended_completeness_and_size(m):
    rng = random.Random(m)
    p = gen_prime(10, rng)
    digits = [rng.randrange(P0) for _ in range(m + 1)]
    v = sum(d * P0**j for j, d in enumerate(digits)) % p
    pp, V, A, proof = make(p, digits, v, rng)
    assert ni_pom_verify(pp, p, V, A, proof)
    assert not ni_pom_verify(pp, p, V, A[::-1], proof)
    data = proof.to_bytes(G)
    assert PomProof.from_bytes(G, data) == proof


def test_base_pom_size():
    rng = random.Random(0)
    p = 1021
    pp, V, A, proof = make(p, [1021 * 5 + 3], 3, rng)
    assert len(proof.pi_ckt.ipa_elements) == 2 * 10 + 6 and len(proof.pi_ckt.final_scalars) == 5
    assert len(proof.to_bytes(G)) == 3 * 32 + 8 + 26 * 32 + 5 * 32


def test_wrong_prime_and_wrong_commitments_reject():
    rng = random.Random(1)
    p = 1021
    s = rng.randrange(P0)
    pp, V, A, proof = make(p, [s], s % p, rng)
    assert ni_pom_verify(pp, p, V, A, proof)
    assert not ni_pom_verify(pp, 1031, V, A, proof)
    assert not ni_pom_verify(pp, 2**127 + 45, V, A, proof)
    assert not ni_pom_verify(pp, p, A[0], [V], proof)


def test_wraparound_forgeries_rejected():
    """v' != s mod p, proved with the field-consistent k' = (s - v') / p."""
    rng = random.Random(2)
    for trial in range(100):
        p = gen_prime(rng.choice([4, 10, 32, 126]), rng)
        s = rng.randrange(P0)
        v_bad = (s % p + 1 + rng.randrange(p - 1)) % p
        k_bad = (s - v_bad) * pow(p, -1, P0) % P0
        assert (v_bad + k_bad * p) % P0 == s and k_bad > P0 // p
        pp, V, A, proof = make(p, [s], v_bad, rng, strict=False)
        assert not ni_pom_verify(pp, p, V, A, proof), trial


def test_malformed_bytes():
    rng = random.Random(3)
    pp, V, A, proof = make(1021, [7], 7, rng)
    data = proof.to_bytes(G)
    with pytest.raises(MalformedProof):
        PomProof.from_bytes(G, data + b"\x00")
    with pytest.raises(MalformedProof):
        PomProof.from_bytes(G, data[:50])


def test_same_seed_same_proof():
    a = make(1021, [99], 99 % 1021, random.Random(9))[-1]
    b = make(1021, [99], 99 % 1021, random.Random(9))[-1]
    assert a.to_bytes(G) == b.to_bytes(G)


def test_zero_knowledge_smoke():
    """Proofs for (v, s) and (v, s') with s = s' mod p look alike byte by byte."""
    rng = random.Random(4)
    p = 1021
    s1 = 1021 * 12345 + 17
    s2 = 1021 * 98765432123456789 + 17
    pp = pom_setup(p, 0, G)
    samples = {s1: [], s2: []}
    for i in range(1000):
        s = s1 if i % 2 == 0 else s2
        proof = ni_pom_prove(pp, p, [s], 17, rng.randrange(P0), [rng.randrange(P0)], rng)
        samples[s].append(proof.to_bytes(G))
    lengths = {len(x) for xs in samples.values() for x in xs}
    assert len(lengths) == 1
    n = len(samples[s1])
    worst = 0.0
    for pos in range(lengths.pop()):
        a = [x[pos] for x in samples[s1]]
        b = [x[pos] for x in samples[s2]]
        sd = statistics.pstdev(a + b)
        if sd == 0:
            assert set(a) == set(b)
            continue
        z = abs(statistics.fmean(a) - statistics.fmean(b)) / (sd * (2 / n) ** 0.5)
        worst = max(worst, z)
    assert worst < 5.0, worst
