import random

import pytest

from wrvss import ckt_proof, r1cs
from wrvss.ckt_proof import CircuitProof, commit_wires, proof_counts, prove, verify
from wrvss.errors import DimensionMismatch, MalformedProof, UnsatisfiedWitness, VectorTooWide
from wrvss.group import commit, get_group, setup
from wrvss.pom import mod_solve
from wrvss.r1cs import CircuitBuilder, Witness, is_satisfied
from wrvss.transcript import Transcript

G = get_group()
P0 = G.order
PP = setup(b"test/ckt", 4096, G)


def random_instance(rng, m_mul=None, n_in=None, q=None):
    """Random satisfiable circuit with its witness and inputs."""
    m_mul = rng.randint(1, 8) if m_mul is None else m_mul
    n_in = rng.randint(0, 3) if n_in is None else n_in
    q = rng.randint(1, 6) if q is None else q
    a = [rng.randrange(P0) for _ in range(m_mul)]
    b = [rng.randrange(P0) for _ in range(m_mul)]
    w = Witness(a, b, [x * y % P0 for x, y in zip(a, b)])
    v = [rng.randrange(P0) for _ in range(n_in)]
    bld = CircuitBuilder(P0, n_in)
    bld.gates(m_mul)
    for _ in range(q):
        row = {}
        for kind in "abc":
            for i in rng.sample(range(m_mul), rng.randint(0, m_mul)):
                row[(kind, i)] = rng.randrange(P0)
        for j in range(n_in):
            if rng.random() < 0.7:
                row[("v", j)] = rng.randrange(P0)
        val = sum(c * {"a": w.a, "b": w.b, "c": w.c}[k[0]][k[1]] for k, c in row.items() if k[0] != "v")
        val += sum(c * v[k[1]] for k, c in row.items() if k[0] == "v")
        row["one"] = -val % P0
        bld.constrain(row)
    ckt = bld.build()
    assert is_satisfied(ckt, v, w)
    return ckt, v, w


def run(ckt, v, w, rng, label=b"t"):
    r_v = [rng.randrange(P0) for _ in v]
    V = [commit(PP, x, r) for x, r in zip(v, r_v)]
    A, B, C, blinds = commit_wires(PP, w, rng)
    pi = prove(PP, ckt, V, v, r_v, w, A, B, C, blinds, Transcript(label), rng)
    return V, A, B, C, pi


def check(ckt, V, A, B, C, pi, label=b"t"):
    return verify(PP, ckt, V, A, B, C, pi, Transcript(label))


def test_single_gate():
    rng = random.Random(0)
    b = CircuitBuilder(P0, 1)
    (g,) = b.gates(1)
    b.constrain({("c", g): 1, ("v", 0): -1})
    ckt = b.build()
    V, A, B, C, pi = run(ckt, [6], Witness([2], [3], [6]), rng)
    assert check(ckt, V, A, B, C, pi)


def test_completeness_1000_random_instances():
    rng = random.Random(1)
    for _ in range(1000):
        ckt, v, w = random_instance(rng)
        assert check(ckt, *run(ckt, v, w, rng))


def test_unsatisfied_witness_raises_early():
    rng = random.Random(2)
    ckt, v, w = random_instance(rng, m_mul=4, n_in=1, q=3)
    w.a[0] = (w.a[0] + 1) % P0
    w.c[0] = w.a[0] * w.b[0] % P0
    with pytest.raises(UnsatisfiedWitness):
        run(ckt, v, w, rng)


def test_forced_proof_of_false_statement_rejected():
    rng = random.Random(3)
    for _ in range(20):
        ckt, v, w = random_instance(rng, m_mul=4, n_in=2, q=4)
        v = [(v[0] + 1) % P0, v[1]]
        r_v = [rng.randrange(P0) for _ in v]
        V = [commit(PP, x, r) for x, r in zip(v, r_v)]
        A, B, C, blinds = commit_wires(PP, w, rng)
        pi = prove(PP, ckt, V, v, r_v, w, A, B, C, blinds, Transcript(b"t"), rng, check=False)
        assert not check(ckt, V, A, B, C, pi)


def test_other_circuit_or_label_rejects():
    rng = random.Random(4)
    p = 1021
    s = 123456789
    w = mod_solve(s % p, s, p, P0)
    ckt = r1cs.mod_ckt(p, 5, P0)
    V, A, B, C, pi = run(ckt, [s % p, s], w, rng)
    assert check(ckt, V, A, B, C, pi)
    assert not check(r1cs.mod_ckt(p, 6, P0), V, A, B, C, pi)
    assert not check(ckt, V, A, B, C, pi, label=b"other")
    assert not check(ckt, V[::-1], A, B, C, pi)
    assert not check(ckt, V, B, A, C, pi)


@pytest.mark.parametrize("k", range(1, 13))
def test_size_closed_form_at_powers_of_two(k):
    rng = random.Random(k)
    m_mul = 2**k
    bld = CircuitBuilder(P0, 0)
    gates = bld.gates(m_mul)
    bld.constrain({("c", gates[-1]): 1})
    ckt = bld.build()
    w = Witness([0] * m_mul, [0] * m_mul, [0] * m_mul)
    V, A, B, C, pi = run(ckt, [], w, rng)
    n_g, n_s = proof_counts(m_mul)
    assert (n_g, n_s) == (2 * k + 6, 5)
    assert len(pi.ipa_elements) == n_g and len(pi.final_scalars) == n_s
    assert len(pi.to_bytes(G)) == ckt_proof.proof_size_bytes(m_mul, G)
    if k <= 8:
        assert check(ckt, V, A, B, C, pi)


def test_counts_for_one_pom():
    # 760 gates pad to 1024: ten folding rounds
    assert proof_counts(760) == (26, 5)
    assert ckt_proof.padded_size(760) == 1024 and ckt_proof.padded_size(1024) == 1024
    assert proof_counts(1) == (6, 5)


def test_serialization_roundtrip_and_all_byte_flips():
    rng = random.Random(5)
    ckt, v, w = random_instance(rng, m_mul=3, n_in=1, q=3)
    V, A, B, C, pi = run(ckt, v, w, rng)
    data = pi.to_bytes(G)
    again, end = CircuitProof.from_bytes(G, data)
    assert end == len(data) and again == pi
    accepted = 0
    for pos in range(8, len(data)):
        bad = bytearray(data)
        bad[pos] ^= 1 << (pos % 8)
        try:
            mutant, _ = CircuitProof.from_bytes(G, bytes(bad))
        except MalformedProof:
            continue
        accepted += check(ckt, V, A, B, C, mutant)
    assert accepted == 0


def test_malformed_headers():
    with pytest.raises(MalformedProof):
        CircuitProof.from_bytes(G, b"\x01\x00")
    with pytest.raises(MalformedProof):
        CircuitProof.from_bytes(G, b"\x07\x00\x00\x00\x05\x00\x00\x00")
    with pytest.raises(MalformedProof):
        CircuitProof.from_bytes(G, b"\x06\x00\x00\x00\x05\x00\x00\x00" + b"\x00" * 10)


def test_deterministic_under_seed():
    ckt, v, w = random_instance(random.Random(6), m_mul=5, n_in=2, q=3)
    p1 = run(ckt, v, w, random.Random(7))[-1]
    p2 = run(ckt, v, w, random.Random(7))[-1]
    assert p1.to_bytes(G) == p2.to_bytes(G)


def test_dimension_and_width_errors():
    rng = random.Random(8)
    ckt, v, w = random_instance(rng, m_mul=2, n_in=1, q=1)
    A, B, C, blinds = commit_wires(PP, w, rng)
    with pytest.raises(DimensionMismatch):
        prove(PP, ckt, [], [], [], w, A, B, C, blinds, Transcript(b"t"), rng)
    small = setup(b"test/small", 2, G)
    big = CircuitBuilder(P0, 0)
    big.gates(3)
    ckt3 = big.build()
    w3 = Witness([0] * 3, [0] * 3, [0] * 3)
    A, B, C, blinds = commit_wires(small, Witness([0] * 2, [0] * 2, [0] * 2), rng)
    with pytest.raises(VectorTooWide):
        prove(small, ckt3, [], [], [], w3, A, B, C, blinds, Transcript(b"t"), rng)
