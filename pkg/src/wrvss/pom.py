"""Proof-of-mod: witness solvers plus the non-interactive prover/verifier.

The solvers lay out wires in exactly the gate order used by the gadgets in
``r1cs`` (k, q-k, v, p-v-1, q-k-1, t-v-1, disjunction).
"""
from __future__ import annotations

from dataclasses import dataclass

from . import ckt_proof, r1cs
from .errors import BadInput, MalformedProof, PrimeTooLarge
from .group import PedersenParams, commit, default_rng
from .r1cs import Witness, can_collapse, mod_params, residue_weights
from .transcript import Transcript


def decomp(v: int, n: int):
    """Bits of v in n places, or the fallback (a_1 = v, b_1 = 0, b_rest = -1).

    Vectors come back as plain ints (b uses -1); callers reduce them.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    if 0 <= v < 2**n:
        a = [(v >> i) & 1 for i in range(n)]
        return a, [x - 1 for x in a]
    return [v] + [0] * (n - 1), [0] + [-1] * (n - 1)


def _solve(s: int, v: int, p: int, p0: int, strict: bool) -> Witness:
    mp = mod_params(p, p0)
    if strict:
        if not (0 <= s < p0 and 0 <= v < p):
            raise BadInput("need 0 <= s < p0 and 0 <= v < p")
        if s % p != v:
            raise BadInput(f"{v} is not {s} mod {p}")
    q, t, n1, n2 = mp.q_quot, mp.t_rem, mp.n1, mp.n2
    k = (s - v) * pow(p, -1, p0) % p0
    blocks = [
        (k, n2),
        ((q - k) % p0, n2),
        (v % p0, n1),
        ((p - v - 1) % p0, n1),
        ((q - k - 1) % p0, n2),
        ((t - v - 1) % p0, n1),
    ]
    a: list = []
    b: list = []
    for idx, (val, n) in enumerate(blocks):
        ai, bi = decomp(val, n)
        if strict and idx < 4:
            assert val < 2**n, "true statements never need the fallback on a hard block"
        a.extend(ai)
        b.extend(bi)
    # only slot 1 of a block can carry a nonzero a-b-1, so these are z-free
    off5 = 2 * n2 + 2 * n1
    off6 = off5 + n2
    a.append(a[off5] - b[off5] - 1)
    b.append(a[off6] - b[off6] - 1)
    return Witness([x % p0 for x in a], [x % p0 for x in b], [0] * len(a))


def mod_solve(v: int, s: int, p: int, p0: int, strict: bool = True) -> Witness:
    """Witness for mod_ckt(p, z) on inputs (v, s), valid for every z.

    With strict=False the solver runs on false statements too (the resulting
    witness does not satisfy the circuit); the adversarial tests use this.
    """
    return _solve(s, v, p, p0, strict)


def _emod(v: int, digits, p: int, p0: int, strict: bool) -> Witness:
    m = len(digits) - 1
    if m == 0:
        return _solve(digits[0], v, p, p0, strict)
    residues = [d % p for d in digits]
    w = Witness([], [], [])
    for d, r in zip(digits, residues):
        w += _solve(d, r, p, p0, strict)
    if can_collapse(p, m, p0):
        total = sum(x * r for x, r in zip(residue_weights(p, m, p0), residues))
        return w + _solve(total, v, p, p0, strict)
    t = p0 % p
    acc = residues[m]
    for j in range(m - 1, -1, -1):
        val = residues[j] + t * acc
        out = v if j == 0 else val % p
        w += _solve(val, out, p, p0, strict)
        acc = out
    return w


def emod_solve(v: int, digits, p: int, p0: int, strict: bool = True) -> Witness:
    """Witness for emod_ckt(p, m, z) on inputs (v, a_0..a_m)."""
    digits = list(digits)
    if strict:
        if any(not 0 <= d < p0 for d in digits):
            raise BadInput("digits must lie in [0, p0)")
        if sum(d * pow(p0, j, p) for j, d in enumerate(digits)) % p != v:
            raise BadInput("v does not match the digits mod p")
    return _emod(v, digits, p, p0, strict)


def vss_solve(shares, digits, primes, p0: int, strict: bool = True) -> Witness:
    """Witness for vss_ckt on inputs (s_0..s_n); digits are a_0..a_m."""
    if len(shares) != len(primes) + 1:
        raise BadInput("need one share per prime plus s_0")
    if digits[0] != shares[0]:
        raise BadInput("digit a_0 must equal s_0")
    w = Witness([], [], [])
    for s_i, p in zip(shares[1:], primes):
        w += emod_solve(s_i, digits, p, p0, strict)
    return w


# ---------------------------------------------------------------- NI proof

POM_LABEL = b"wrvss/pom/v1"


@dataclass(frozen=True)
class PomProof:
    A: object
    B: object
    C: object
    pi_ckt: ckt_proof.CircuitProof

    def to_bytes(self, group) -> bytes:
        return group.encode(self.A) + group.encode(self.B) + group.encode(self.C) + self.pi_ckt.to_bytes(group)

    @classmethod
    def from_bytes(cls, group, data: bytes) -> "PomProof":
        es = group.element_size
        if len(data) < 3 * es:
            raise MalformedProof("truncated wire commitments")
        try:
            A, B, C = (group.decode(data[i * es : (i + 1) * es]) for i in range(3))
        except ValueError as exc:
            raise MalformedProof(str(exc)) from None
        pi, end = ckt_proof.CircuitProof.from_bytes(group, data, 3 * es)
        if end != len(data):
            raise MalformedProof("trailing bytes after proof")
        return cls(A, B, C, pi)


def pom_gate_count(p: int, m: int, p0: int) -> int:
    return r1cs.emod_pom_count(p, m, p0) * mod_params(p, p0).gates


def pom_setup(p: int, m: int, group=None) -> PedersenParams:
    from .group import get_group, setup

    group = group or get_group()
    return setup(POM_LABEL, ckt_proof.padded_size(pom_gate_count(p, m, group.order)), group)


def _pom_transcript(group, p: int, V, A_digits, A, B, C):
    tr = Transcript(POM_LABEL)
    tr.append_nat(b"p0", group.order)
    tr.append_nat(b"p", p)
    tr.append_u64(b"m", len(A_digits) - 1)
    tr.append_point(b"V", group, V)
    for Ai in A_digits:
        tr.append_point(b"A_i", group, Ai)
    for label, P in ((b"A", A), (b"B", B), (b"C", C)):
        tr.append_point(label, group, P)
    return tr, tr.challenge_scalar(b"z", group.order)


def ni_pom_prove(params: PedersenParams, p: int, digits, v: int, r_v: int, r_digits, rng=None, strict: bool = True) -> PomProof:
    """Prove that commit(v, r_v) holds sum_j digits_j p0^j mod p.

    strict=False skips the honesty checks so that tests can build proofs of
    false statements and watch them fail.
    """
    group = params.group
    p0 = group.order
    rng = rng or default_rng()
    digits = list(digits)
    m = len(digits) - 1
    if len(r_digits) != m + 1:
        raise BadInput("one blinding factor per digit")
    V = commit(params, v, r_v)
    A_digits = [commit(params, a, r) for a, r in zip(digits, r_digits)]
    w = emod_solve(v, digits, p, p0, strict=strict)
    A, B, C, blinds = ckt_proof.commit_wires(params, w, rng)
    tr, z = _pom_transcript(group, p, V, A_digits, A, B, C)
    ckt = r1cs.emod_ckt(p, m, z, p0)
    pi = ckt_proof.prove(
        params, ckt, [V, *A_digits], [v, *digits], [r_v, *r_digits], w, A, B, C, blinds, tr, rng, check=strict
    )
    return PomProof(A, B, C, pi)


def ni_pom_verify(params: PedersenParams, p: int, V, A_digits, proof: PomProof) -> bool:
    group = params.group
    m = len(A_digits) - 1
    try:
        tr, z = _pom_transcript(group, p, V, A_digits, proof.A, proof.B, proof.C)
        ckt = r1cs.emod_ckt(p, m, z, group.order)
    except PrimeTooLarge:
        return False
    return ckt_proof.verify(params, ckt, [V, *A_digits], proof.A, proof.B, proof.C, proof.pi_ckt, tr)
