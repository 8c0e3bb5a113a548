"""Logarithmic-size zero-knowledge argument for R1CS with committed inputs.

This follows the Bulletproofs arithmetic-circuit protocol with one change at
the front: the wire commitments arrive from the caller, split three ways,

    A = h^r_a G^a      B = h^r_b H^b      C = h^r_c G^c

so that a caller can hash them before it fixes the circuit.  The protocol's
A_I is then A*B and A_O is C.  The proof carries S, T1, T3..T6, the
inner-product rounds (L_j, R_j), and the scalars tau_x, mu, t_hat, a, b.
"""
from __future__ import annotations

import struct
from dataclasses import dataclass

from .errors import DimensionMismatch, MalformedProof, UnsatisfiedWitness, VectorTooWide
from .group import (
    PedersenParams,
    commit_vec,
    decode_scalar,
    default_rng,
    encode_scalar,
    scalar_bytes,
)
from .r1cs import CircuitSpec, Witness, is_satisfied
from .transcript import Transcript

N_FIXED_POINTS = 6  # S, T1, T3, T4, T5, T6
N_SCALARS = 5


def padded_size(m_mul: int) -> int:
    n = 1
    while n < m_mul:
        n *= 2
    return n


def log2_padded(m_mul: int) -> int:
    return padded_size(m_mul).bit_length() - 1


def proof_counts(m_mul: int) -> tuple[int, int]:
    """(group elements, scalars) in a serialized proof for m_mul gates."""
    return 2 * log2_padded(m_mul) + N_FIXED_POINTS, N_SCALARS


def proof_size_bytes(m_mul: int, group) -> int:
    n_g, n_s = proof_counts(m_mul)
    return 8 + n_g * group.element_size + n_s * scalar_bytes(group)


@dataclass(frozen=True)
class CircuitProof:
    S: object
    T1: object
    T3: object
    T4: object
    T5: object
    T6: object
    L: tuple
    R: tuple
    tau_x: int
    mu: int
    t_hat: int
    a: int
    b: int

    @property
    def ipa_elements(self) -> list:
        rounds = [P for pair in zip(self.L, self.R) for P in pair]
        return [self.S, self.T1, self.T3, self.T4, self.T5, self.T6, *rounds]

    @property
    def final_scalars(self) -> list:
        return [self.tau_x, self.mu, self.t_hat, self.a, self.b]

    def to_bytes(self, group) -> bytes:
        pts = self.ipa_elements
        scs = self.final_scalars
        out = [struct.pack("<II", len(pts), len(scs))]
        out += [group.encode(P) for P in pts]
        out += [encode_scalar(group, x) for x in scs]
        return b"".join(out)

    @classmethod
    def from_bytes(cls, group, data: bytes, offset: int = 0) -> tuple["CircuitProof", int]:
        """Parse a proof starting at `offset`; returns (proof, end offset)."""
        if len(data) < offset + 8:
            raise MalformedProof("truncated proof header")
        n_g, n_s = struct.unpack_from("<II", data, offset)
        if n_s != N_SCALARS or n_g < N_FIXED_POINTS or (n_g - N_FIXED_POINTS) % 2 or n_g > 200:
            raise MalformedProof(f"bad element counts ({n_g}, {n_s})")
        off = offset + 8
        es, ss = group.element_size, scalar_bytes(group)
        end = off + n_g * es + n_s * ss
        if len(data) < end:
            raise MalformedProof("truncated proof body")
        try:
            pts = [group.decode(data[off + i * es : off + (i + 1) * es]) for i in range(n_g)]
            off += n_g * es
            scs = [decode_scalar(group, data[off + i * ss : off + (i + 1) * ss]) for i in range(n_s)]
        except ValueError as exc:
            raise MalformedProof(str(exc)) from None
        rounds = pts[N_FIXED_POINTS:]
        proof = cls(*pts[:N_FIXED_POINTS], tuple(rounds[0::2]), tuple(rounds[1::2]), *scs)
        return proof, end


def commit_wires(params: PedersenParams, w: Witness, rng=None):
    """(A, B, C, (r_a, r_b, r_c)) for a witness; B uses the H generators."""
    rng = rng or default_rng()
    p = params.group.order
    blinds = tuple(rng.randrange(p) for _ in range(3))
    A = commit_vec(params, w.a, blinds[0])
    B = commit_vec(params, w.b, blinds[1], basis="h")
    C = commit_vec(params, w.c, blinds[2])
    return A, B, C, blinds


def _ip(x, y, p) -> int:
    return sum(map(int.__mul__, x, y)) % p


def _powers(base: int, n: int, p: int) -> list:
    out, acc = [], 1
    for _ in range(n):
        out.append(acc)
        acc = acc * base % p
    return out


def _absorb_statement(tr: Transcript, group, ckt: CircuitSpec, V_vec, A, B, C) -> None:
    tr.append_message(b"r1cs-shape", struct.pack(">QQQ", ckt.m_mul, ckt.q_cons, ckt.n_in))
    for V in V_vec:
        tr.append_point(b"V", group, V)
    tr.append_point(b"A", group, A)
    tr.append_point(b"B", group, B)
    tr.append_point(b"C", group, C)


def _weights(ckt: CircuitSpec, z: int, N: int, p: int):
    """z-weighted column sums of W_a, W_b, W_c, W_v and <z^Q, k>."""
    wL, wR, wO = [0] * N, [0] * N, [0] * N
    wV = [0] * ckt.n_in
    wc = 0
    zj = z
    for j in range(ckt.q_cons):
        for i, c in ckt.W_a[j]:
            wL[i] += zj * c
        for i, c in ckt.W_b[j]:
            wR[i] += zj * c
        for i, c in ckt.W_c[j]:
            wO[i] += zj * c
        for i, c in ckt.W_v[j]:
            wV[i] += zj * c
        wc += zj * ckt.k_vec[j]
        zj = zj * z % p
    return [x % p for x in wL], [x % p for x in wR], [x % p for x in wO], [x % p for x in wV], wc % p


def _generators(params: PedersenParams, N: int):
    if params.width < N:
        raise VectorTooWide(f"circuit needs {N} generators, params have {params.width}")
    return params.g_vec[:N], params.h_vec[:N]


def prove(params, ckt, V_vec, v_vec, r_v_vec, w, A, B, C, blinds, transcript, rng=None, check=True):
    """Prove that the committed inputs satisfy `ckt`.

    `blinds` is (r_a, r_b, r_c) as returned by commit_wires.  The transcript
    must already hold whatever context the caller wants bound; this function
    absorbs the circuit shape, V_vec, A, B and C itself.
    """
    if len(V_vec) != ckt.n_in or len(v_vec) != ckt.n_in or len(r_v_vec) != ckt.n_in:
        raise DimensionMismatch("input vectors must have n_in entries")
    if check and not is_satisfied(ckt, v_vec, w):
        raise UnsatisfiedWitness("witness does not satisfy the circuit")
    rng = rng or default_rng()
    group = params.group
    p = group.order
    N = padded_size(ckt.m_mul)
    G, H = _generators(params, N)
    pad = [0] * (N - ckt.m_mul)
    aL = [x % p for x in w.a] + pad
    aR = [x % p for x in w.b] + pad
    aO = [x % p for x in w.c] + pad

    _absorb_statement(transcript, group, ckt, V_vec, A, B, C)
    r_a, r_b, r_c = blinds
    alpha, beta = (r_a + r_b) % p, r_c % p
    sL = [rng.randrange(p) for _ in range(N)]
    sR = [rng.randrange(p) for _ in range(N)]
    rho = rng.randrange(p)
    S = group.msm([rho, *sL, *sR], [params.h, *G, *H])
    transcript.append_point(b"S", group, S)
    y = transcript.challenge_scalar(b"y", p)
    z = transcript.challenge_scalar(b"z", p)

    wL, wR, wO, wV, _ = _weights(ckt, z, N, p)
    y_n = _powers(y, N, p)
    yinv_n = _powers(pow(y, -1, p), N, p)
    l1 = [(a + yi * r) % p for a, yi, r in zip(aL, yinv_n, wR)]
    l2, l3 = aO, sL
    r0 = [(o - yi) % p for o, yi in zip(wO, y_n)]
    r1 = [(yi * b + l) % p for yi, b, l in zip(y_n, aR, wL)]
    r3 = [yi * s % p for yi, s in zip(y_n, sR)]
    t = {
        1: _ip(l1, r0, p),
        3: (_ip(l2, r1, p) + _ip(l3, r0, p)) % p,
        4: (_ip(l1, r3, p) + _ip(l3, r1, p)) % p,
        5: _ip(l2, r3, p),
        6: _ip(l3, r3, p),
    }
    tau = {i: rng.randrange(p) for i in t}
    T = {i: group.msm((t[i], tau[i]), (params.g, params.h)) for i in t}
    for i in (1, 3, 4, 5, 6):
        transcript.append_point(b"T%d" % i, group, T[i])
    x = transcript.challenge_scalar(b"x", p)

    x2, x3 = x * x % p, pow(x, 3, p)
    l_vec = [(a * x + b * x2 + c * x3) % p for a, b, c in zip(l1, l2, l3)]
    r_vec = [(a + b * x + c * x3) % p for a, b, c in zip(r0, r1, r3)]
    t_hat = _ip(l_vec, r_vec, p)
    tau_x = (sum(tau[i] * pow(x, i, p) for i in tau) + x2 * _ip(wV, r_v_vec, p)) % p
    mu = (alpha * x + beta * x2 + rho * x3) % p
    transcript.append_scalar(b"tau_x", group, tau_x)
    transcript.append_scalar(b"mu", group, mu)
    transcript.append_scalar(b"t_hat", group, t_hat)
    w_ch = transcript.challenge_scalar(b"w", p)
    Q = group.mul(w_ch, params.g)

    L, R, a_fin, b_fin = _ipa_prove(group, G, H, yinv_n, Q, l_vec, r_vec, transcript)
    return CircuitProof(S, T[1], T[3], T[4], T[5], T[6], tuple(L), tuple(R), tau_x, mu, t_hat, a_fin, b_fin)


def _ipa_prove(group, G, H, h_factors, Q, a, b, transcript):
    """Inner-product argument on generators (G_i, h_factors_i * H_i).

    Folded generators are kept as point * factor pairs, and each fold is
    written as lo + c*hi so that it costs one scalar multiplication.
    """
    p = group.order
    G, H = list(G), list(H)
    gf, hf = [1] * len(G), list(h_factors)
    L_out, R_out = [], []
    n = len(a)
    while n > 1:
        h = n // 2
        a_lo, a_hi, b_lo, b_hi = a[:h], a[h:], b[:h], b[h:]
        cL, cR = _ip(a_lo, b_hi, p), _ip(a_hi, b_lo, p)
        L = group.msm(
            [x * f for x, f in zip(a_lo, gf[h:])] + [x * f for x, f in zip(b_hi, hf[:h])] + [cL],
            G[h:] + H[:h] + [Q],
        )
        R = group.msm(
            [x * f for x, f in zip(a_hi, gf[:h])] + [x * f for x, f in zip(b_lo, hf[h:])] + [cR],
            G[:h] + H[h:] + [Q],
        )
        transcript.append_point(b"L", group, L)
        transcript.append_point(b"R", group, R)
        L_out.append(L)
        R_out.append(R)
        u = transcript.challenge_scalar(b"u", p)
        uinv = pow(u, -1, p)
        a = [(lo * u + hi * uinv) % p for lo, hi in zip(a_lo, a_hi)]
        b = [(lo * uinv + hi * u) % p for lo, hi in zip(b_lo, b_hi)]
        if h > 1:
            G, gf = _fold(group, G, gf, uinv, u, p)
            H, hf = _fold(group, H, hf, u, uinv, p)
        n = h
    return L_out, R_out, a[0], b[0]


def _fold(group, pts, factors, c_lo, c_hi, p):
    h = len(pts) // 2
    new_pts, new_f = [], []
    for i in range(h):
        f_lo = factors[i] * c_lo % p
        f_hi = factors[h + i] * c_hi % p
        ratio = f_hi * pow(f_lo, -1, p) % p
        new_pts.append(group.add(pts[i], group.mul(ratio, pts[h + i])))
        new_f.append(f_lo)
    return new_pts, new_f


def verify(params, ckt, V_vec, A, B, C, proof: CircuitProof, transcript) -> bool:
    """True iff the proof is valid.  Structural problems also return False;
    MalformedProof is raised only by ``CircuitProof.from_bytes``."""
    group = params.group
    p = group.order
    N = padded_size(ckt.m_mul)
    k = N.bit_length() - 1
    if len(V_vec) != ckt.n_in or len(proof.L) != k or len(proof.R) != k:
        return False
    G, H = _generators(params, N)

    _absorb_statement(transcript, group, ckt, V_vec, A, B, C)
    transcript.append_point(b"S", group, proof.S)
    y = transcript.challenge_scalar(b"y", p)
    z = transcript.challenge_scalar(b"z", p)
    Ts = (proof.T1, proof.T3, proof.T4, proof.T5, proof.T6)
    for i, Ti in zip((1, 3, 4, 5, 6), Ts):
        transcript.append_point(b"T%d" % i, group, Ti)
    x = transcript.challenge_scalar(b"x", p)
    transcript.append_scalar(b"tau_x", group, proof.tau_x)
    transcript.append_scalar(b"mu", group, proof.mu)
    transcript.append_scalar(b"t_hat", group, proof.t_hat)
    w_ch = transcript.challenge_scalar(b"w", p)
    us = []
    for L, R in zip(proof.L, proof.R):
        transcript.append_point(b"L", group, L)
        transcript.append_point(b"R", group, R)
        us.append(transcript.challenge_scalar(b"u", p))

    wL, wR, wO, wV, wc = _weights(ckt, z, N, p)
    yinv_n = _powers(pow(y, -1, p), N, p)
    delta = sum(yi * r * l for yi, r, l in zip(yinv_n, wR, wL)) % p
    x2 = x * x % p

    # g^t_hat h^tau_x == g^(x^2 (delta + wc)) V^(x^2 wV) T1^x T3^x^3 ... T6^x^6
    lhs = group.msm(
        [(proof.t_hat - x2 * (delta + wc)) % p, proof.tau_x] + [-x2 * c % p for c in wV] + [-pow(x, i, p) % p for i in (1, 3, 4, 5, 6)],
        [params.g, params.h, *V_vec, *Ts],
    )
    if not group.is_identity(lhs):
        return False

    # inner-product check folded into one multi-exponentiation
    u_sq = [u * u % p for u in us]
    uinv = [pow(u, -1, p) for u in us]
    s = [0] * N
    acc = 1
    for ui in uinv:
        acc = acc * ui % p
    s[0] = acc
    for i in range(1, N):
        lg = i.bit_length() - 1
        s[i] = s[i - (1 << lg)] * u_sq[k - 1 - lg] % p
    a, b = proof.a, proof.b
    g_sc = [(x * yi * r - a * si) % p for yi, r, si in zip(yinv_n, wR, s)]
    h_sc = [(yi * (x * l + o - b * s[N - 1 - i]) - 1) % p for i, (yi, l, o) in enumerate(zip(yinv_n, wL, wO))]
    scalars = g_sc + h_sc + [x, x, x2, pow(x, 3, p), -proof.mu % p, w_ch * (proof.t_hat - a * b) % p]
    points = list(G) + list(H) + [A, B, C, proof.S, params.h, params.g]
    scalars += u_sq + [ui * ui % p for ui in uinv]
    points += list(proof.L) + list(proof.R)
    return group.is_identity(group.msm(scalars, points))
