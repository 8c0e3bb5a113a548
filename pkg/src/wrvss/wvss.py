"""Weighted ramp verifiable secret sharing over CRT residues.

A dealer lifts s_0 to s = s_0 + a_1 p0 + ... + a_m p0^m with random digits,
hands party i the residue s mod p_i (p_i has bit length w_i), and broadcasts
Pedersen commitments Y_0..Y_n plus one circuit proof that every Y_i opens to
the right residue of the same lifted secret.
"""
from __future__ import annotations

import json
import math
import struct
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from . import ckt_proof, r1cs
from .bignat import check_coprime, crt_solve, is_probable_prime, largest_primes_below, gen_prime, max_weight
from .ckt_proof import CircuitProof
from .errors import (
    Infeasible,
    MalformedProof,
    NotCoprime,
    OpeningMismatch,
    ParseError,
    ProofInvalid,
    TooLargeToEnumerate,
    Unauthorized,
)
from .group import PedersenParams, commit, default_rng, get_group, setup
from .pom import vss_solve
from .transcript import Transcript

VSS_LABEL = b"wrvss/vss/v1"
GAP_SLACK = 64


@dataclass(frozen=True)
class WvssParams:
    """Public parameters.  Party indices are 1-based; 0 is the secret."""

    group_name: str
    lambda_sec: int
    weights: tuple
    primes: tuple
    m: int
    t_priv: int
    T_rec: int
    amplification: int = 1
    labels: tuple = ()

    @property
    def group(self):
        return get_group(self.group_name)

    @property
    def p0(self) -> int:
        return self.group.order

    @property
    def p0_bits(self) -> int:
        return self.group.bits

    @property
    def n(self) -> int:
        return len(self.primes)

    def prime(self, index: int) -> int:
        return self.p0 if index == 0 else self.primes[index - 1]

    def weight(self, indices) -> int:
        return sum(self.weights[i - 1] for i in set(indices))

    def is_authorized(self, indices) -> bool:
        return self.weight(indices) >= self.T_rec

    def is_unauthorized(self, indices) -> bool:
        return self.weight(indices) < self.t_priv

    def gate_count(self) -> int:
        return r1cs.vss_gate_count(self.primes, self.m, self.p0)

    def pedersen(self) -> PedersenParams:
        return setup(VSS_LABEL, ckt_proof.padded_size(self.gate_count()), self.group)

    def min_authorized_log2(self) -> float:
        """Lower bound on log2 P_A over authorized A."""
        return authorized_log2_bound(self.primes, self.weights, self.T_rec)

    def validate(self) -> "WvssParams":
        """Raise Infeasible unless every structural and threshold invariant holds."""
        p0, cap = self.p0, max_weight(self.p0_bits)
        if len(self.weights) != len(self.primes) or not self.primes:
            raise Infeasible("need one prime per weight")
        for w, p in zip(self.weights, self.primes):
            if not 2 <= w <= cap:
                raise Infeasible(f"weight {w} outside [2, {cap}]")
            if p.bit_length() != w or p == 2 ** (w - 1) or not is_probable_prime(p):
                raise Infeasible(f"{p} is not a {w}-bit prime")
        try:
            check_coprime([*self.primes, p0])
        except NotCoprime as exc:
            raise Infeasible(str(exc)) from None
        if self.m < 0 or self.lambda_sec < 0:
            raise Infeasible("m and lambda_sec must be non-negative")
        if not 0 < self.t_priv <= self.T_rec <= sum(self.weights):
            raise Infeasible("need 0 < t_priv <= T_rec <= total weight")
        # every authorized set multiplies past p0^(m+1)
        if self.min_authorized_log2() <= (self.m + 1) * math.log2(p0) + 1e-6:
            raise Infeasible("P_MIN does not clear p0^(m+1); raise T_rec or lower m")
        # unauthorized products stay below 2^(t_priv-1) <= p0^m 2^-lambda
        if 2 ** (self.t_priv - 1 + self.lambda_sec) > p0**self.m:
            raise Infeasible("P_MAX too large for the requested lambda_sec")
        return self

    def to_json(self) -> str:
        return json.dumps(
            {
                "group": self.group_name,
                "p0_bits": self.p0_bits,
                "lambda_sec": self.lambda_sec,
                "weights": list(self.weights),
                "primes": [str(p) for p in self.primes],
                "m": self.m,
                "t_priv": self.t_priv,
                "T_rec": self.T_rec,
                "amplification": self.amplification,
                "labels": list(self.labels),
            },
            indent=2,
        )

    @classmethod
    def from_json(cls, text: str) -> "WvssParams":
        try:
            d = json.loads(text)
            params = cls(
                group_name=d["group"],
                lambda_sec=int(d["lambda_sec"]),
                weights=tuple(int(w) for w in d["weights"]),
                primes=tuple(int(p) for p in d["primes"]),
                m=int(d["m"]),
                t_priv=int(d["t_priv"]),
                T_rec=int(d["T_rec"]),
                amplification=int(d.get("amplification", 1)),
                labels=tuple(d.get("labels", ())),
            )
            if "p0_bits" in d and int(d["p0_bits"]) != params.p0_bits:
                raise ParseError("params were made for a different group order")
        except (KeyError, TypeError, ValueError) as exc:
            raise ParseError(f"bad params file: {exc}") from None
        return params.validate()


def _pick_primes(weights, rng=None) -> list[int]:
    """Distinct primes with bit length w_i; the largest ones unless rng is given."""
    chosen: list[int] = []
    if rng is None:
        pools = {w: iter(largest_primes_below(w, c)) for w, c in Counter(weights).items()}
        return [next(pools[w]) for w in weights]
    for w in weights:
        while True:
            p = gen_prime(w, rng, p0_bits=10**6)
            if p not in chosen:
                chosen.append(p)
                break
    return chosen


def authorized_log2_bound(primes, weights, T_rec: int) -> float:
    """Lower bound on log2 of the prime product of any set with weight >= T_rec.

    Two bounds, take the better: every prime gives at least rho_min bits per
    unit of weight, and every prime loses less than its slack w - log2 p.
    """
    logs = [math.log2(p) for p in primes]
    rho = min(lg / w for lg, w in zip(logs, weights))
    slack = sum(w - lg for lg, w in zip(logs, weights))
    return max(rho * T_rec, T_rec - slack)


def thresholds_for(primes, weights, T_rec: int, lambda_sec: int, p0: int):
    """(m, t_priv) for a fixed reconstruction threshold, or None if infeasible.

    m is the largest digit count with p0^(m+1) below the authorized-product
    bound; t_priv is then the largest value with 2^(t-1+lambda) <= p0^m.
    """
    bound = authorized_log2_bound(primes, weights, T_rec)
    m = math.floor((bound - 1e-6) / math.log2(p0)) - 1
    if m < 0:
        return None
    t_priv = (p0**m).bit_length() - lambda_sec
    if t_priv < 1 or t_priv > T_rec:
        return None
    return m, t_priv


def derive_params(weights, lambda_sec: int = 128, ratio_T=Fraction(2, 3), rng=None, group=None, labels=()) -> WvssParams:
    """Thresholds, primes and digit count for the given weights.

    T_rec = ceil(ratio_T * total weight).  If no digit count works, every
    weight is multiplied by the smallest c that makes it work, subject to the
    per-prime bit cap; otherwise Infeasible.
    """
    group = group or get_group()
    ratio_T = Fraction(ratio_T)
    if not 0 < ratio_T <= 1:
        raise ValueError("ratio_T must lie in (0, 1]")
    weights = [int(w) for w in weights]
    if not weights or min(weights) < 1:
        raise Infeasible("weights must be positive")
    cap = max_weight(group.bits)
    if max(weights) > cap:
        raise Infeasible(f"weight {max(weights)} exceeds the {cap}-bit cap")
    p0 = group.order
    for c in range(1, cap // max(weights) + 1):
        ws = [c * w for w in weights]
        if min(ws) < 2:
            continue
        T_rec = math.ceil(ratio_T * sum(ws))
        primes = _pick_primes(ws, rng)
        found = thresholds_for(primes, ws, T_rec, lambda_sec, p0)
        if found is None:
            continue
        m, t_priv = found
        params = WvssParams(group.name, lambda_sec, tuple(ws), tuple(primes), m, t_priv, T_rec, c, tuple(labels))
        return params.validate()
    raise Infeasible(
        f"total weight {sum(weights)} at ratio {ratio_T} cannot clear p0^(m+1) with t_priv >= 1 "
        f"and lambda_sec={lambda_sec}, even after amplification up to the {cap}-bit cap"
    )


# ---------------------------------------------------------------- deals


@dataclass(frozen=True)
class Opening:
    index: int
    share: int
    blind: int

    def to_json(self) -> str:
        return json.dumps({"index": self.index, "share": str(self.share), "blind": str(self.blind)})

    @classmethod
    def from_json(cls, text: str) -> "Opening":
        try:
            d = json.loads(text)
            return cls(int(d["index"]), int(d["share"]), int(d["blind"]))
        except (KeyError, TypeError, ValueError) as exc:
            raise ParseError(f"bad opening file: {exc}") from None


@dataclass(frozen=True)
class DealPublic:
    """Broadcast part: Y_0..Y_n, the wire commitments and the circuit proof."""

    Y: tuple
    A: object
    B: object
    C: object
    pi_ckt: CircuitProof

    def to_bytes(self, group) -> bytes:
        head = struct.pack("<I", len(self.Y))
        pts = b"".join(group.encode(P) for P in (*self.Y, self.A, self.B, self.C))
        return head + pts + self.pi_ckt.to_bytes(group)

    @classmethod
    def from_bytes(cls, group, data: bytes) -> "DealPublic":
        if len(data) < 4:
            raise MalformedProof("truncated deal header")
        (count,) = struct.unpack_from("<I", data)
        es = group.element_size
        n_pts = count + 3
        if count < 2 or len(data) < 4 + n_pts * es:
            raise MalformedProof("bad commitment count")
        try:
            pts = [group.decode(data[4 + i * es : 4 + (i + 1) * es]) for i in range(n_pts)]
        except ValueError as exc:
            raise MalformedProof(str(exc)) from None
        pi, end = CircuitProof.from_bytes(group, data, 4 + n_pts * es)
        if end != len(data):
            raise MalformedProof("trailing bytes after deal")
        return cls(tuple(pts[:count]), pts[count], pts[count + 1], pts[count + 2], pi)

    def element_counts(self) -> tuple[int, int]:
        n_g = len(self.Y) + 3 + len(self.pi_ckt.ipa_elements)
        return n_g, len(self.pi_ckt.final_scalars)


@dataclass(frozen=True)
class Deal:
    openings: tuple  # Opening for indices 0..n
    public: DealPublic
    digits: tuple = field(default=(), repr=False)


def _vss_transcript(params: WvssParams, Y, A, B, C):
    group = params.group
    tr = Transcript(VSS_LABEL)
    tr.append_nat(b"p0", params.p0)
    for p in params.primes:
        tr.append_nat(b"p_i", p)
    tr.append_u64(b"m", params.m)
    for Yi in Y:
        tr.append_point(b"Y_i", group, Yi)
    for label, P in ((b"A", A), (b"B", B), (b"C", C)):
        tr.append_point(label, group, P)
    return tr, tr.challenge_scalar(b"z", group.order)


def deal_from_values(params: WvssParams, shares, digits, rng=None, strict: bool = True) -> Deal:
    """Commit to the given shares and prove them against `digits`.

    ``share`` calls this with honest values.  With strict=False the shares
    need not match the digits; the proof is produced anyway (it will not
    verify), which is how the adversarial tests play a cheating dealer.
    """
    rng = rng or default_rng()
    group, p0 = params.group, params.p0
    pp = params.pedersen()
    blinds = [rng.randrange(p0) for _ in shares]
    Y = [commit(pp, s, r) for s, r in zip(shares, blinds)]
    w = vss_solve(list(shares), list(digits), params.primes, p0, strict=strict)
    A, B, C, wire_blinds = ckt_proof.commit_wires(pp, w, rng)
    tr, z = _vss_transcript(params, Y, A, B, C)
    ckt = r1cs.vss_ckt(params.primes, params.m, z, p0)
    pi = ckt_proof.prove(pp, ckt, Y, list(shares), blinds, w, A, B, C, wire_blinds, tr, rng, check=strict)
    openings = tuple(Opening(i, s, r) for i, (s, r) in enumerate(zip(shares, blinds)))
    return Deal(openings, DealPublic(tuple(Y), A, B, C, pi), tuple(digits))


def lift(s_0: int, digits, p0: int) -> int:
    return s_0 + sum(a * p0**j for j, a in enumerate(digits, start=1))


def share(params: WvssParams, s_0: int, rng=None) -> Deal:
    p0 = params.p0
    if not 0 <= s_0 < p0:
        raise ValueError("secret must lie in [0, p0)")
    rng = rng or default_rng()
    upper = [rng.randrange(p0) for _ in range(params.m)]
    s = lift(s_0, upper, p0)
    shares = [s_0] + [s % p for p in params.primes]
    return deal_from_values(params, shares, [s_0, *upper], rng)


@lru_cache(maxsize=128)
def _verify_bytes(params: WvssParams, data: bytes) -> bool:
    # verification is a pure function of these bytes, so repeat checks of the
    # same broadcast (all parties in one process, reconstruct re-checks) hit
    # this cache instead of redoing the multi-exponentiation
    group = params.group
    public = DealPublic.from_bytes(group, data)
    if len(public.Y) != params.n + 1:
        return False
    tr, z = _vss_transcript(params, public.Y, public.A, public.B, public.C)
    ckt = r1cs.vss_ckt(params.primes, params.m, z, params.p0)
    return ckt_proof.verify(params.pedersen(), ckt, list(public.Y), public.A, public.B, public.C, public.pi_ckt, tr)


def verify_proof(params: WvssParams, public) -> bool:
    """Check the broadcast proof.  `public` may be a DealPublic or its bytes;
    malformed bytes raise MalformedProof."""
    data = public if isinstance(public, (bytes, bytearray)) else public.to_bytes(params.group)
    return _verify_bytes(params, bytes(data))


def check_opening(params: WvssParams, public: DealPublic, opening: Opening) -> bool:
    i = opening.index
    if not 0 <= i <= params.n or i >= len(public.Y):
        return False
    if not 0 <= opening.share < params.prime(i) or not 0 <= opening.blind < params.p0:
        return False
    return params.group.eq(commit(params.pedersen(), opening.share, opening.blind), public.Y[i])


def verify_deal(params: WvssParams, public: DealPublic, my_index: int, my_opening: Opening) -> bool:
    """True, or raise ProofInvalid / OpeningMismatch."""
    if not verify_proof(params, public):
        raise ProofInvalid("circuit proof rejected")
    if my_opening.index != my_index or not check_opening(params, public, my_opening):
        raise OpeningMismatch(f"opening for party {my_index} does not match Y_{my_index}")
    return True


def reconstruct(params: WvssParams, openings, public: DealPublic):
    """s_0, or None when the proof or any opening fails.  Raises Unauthorized
    for sets below T_rec."""
    openings = list(openings)
    indices = [o.index for o in openings]
    if len(set(indices)) != len(indices) or any(not 1 <= i <= params.n for i in indices):
        raise ValueError("openings need distinct party indices in 1..n")
    if not params.is_authorized(indices):
        raise Unauthorized(f"weight {params.weight(indices)} below T_rec={params.T_rec}")
    if not verify_proof(params, public):
        return None
    if not all(check_opening(params, public, o) for o in openings):
        return None
    s = crt_solve([(o.share, params.prime(o.index)) for o in openings])
    return s % params.p0


def secrecy_distance(p0: int, primes, L: int, s: int, s_prime: int, unauthorized) -> Fraction:
    """Exact statistical distance between the views of `unauthorized` parties
    (1-based indices into primes) for secrets s and s', over lifts s + a p0
    with a uniform in [0, L)."""
    if L * p0 > 10**7:
        raise TooLargeToEnumerate(f"L*p0 = {L * p0} exceeds 10^7")
    mods = [primes[i - 1] for i in sorted(set(unauthorized))]
    if not mods:
        return Fraction(0)

    def view(secret):
        return Counter(tuple((secret + a * p0) % p for p in mods) for a in range(L))

    d1, d2 = view(s), view(s_prime)
    diff = sum(abs(d1[k] - d2[k]) for k in d1.keys() | d2.keys())
    return Fraction(diff, 2 * L)
