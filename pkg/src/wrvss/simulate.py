"""In-process dealer and parties exchanging serialized messages.

Adversarial dealers:
  honest               follows the protocol
  tamper-share(j)      valid broadcast, but party j gets a wrong opening
  forge-wraparound     commits one party to v' != s mod p and proves it with
                       the field-consistent quotient k' = (s - v') / p mod p0
  inconsistent-digits  party j's share comes from different upper digits
"""
from __future__ import annotations

import random
import re
from dataclasses import dataclass, field

from .errors import DealRejected, MalformedProof, Unauthorized
from .wvss import DealPublic, Opening, WvssParams, deal_from_values, lift, reconstruct, share, verify_deal

PROFILES = ("honest", "tamper-share", "forge-wraparound", "inconsistent-digits")


def parse_profile(text: str) -> tuple[str, int | None]:
    m = re.fullmatch(r"([a-z-]+)(?:\((\d+)\))?", text.strip())
    if not m or m.group(1) not in PROFILES:
        raise ValueError(f"unknown adversary profile {text!r}; choose from {', '.join(PROFILES)}")
    j = int(m.group(2)) if m.group(2) else None
    if m.group(1) == "tamper-share" and j is None:
        raise ValueError("tamper-share needs a party index, e.g. tamper-share(2)")
    return m.group(1), j


@dataclass
class ScenarioReport:
    profile: str
    seed: int
    secret: int
    verdicts: dict = field(default_factory=dict)  # index -> "accept" or error class name
    subsets: list = field(default_factory=list)  # (indices, secret or None)

    @property
    def all_accept(self) -> bool:
        return all(v == "accept" for v in self.verdicts.values())

    @property
    def outcomes(self) -> set:
        return {r for _, r in self.subsets if r is not None}

    @property
    def subsets_agree(self) -> bool:
        return len(self.outcomes) <= 1

    def lines(self) -> list[str]:
        out = [f"profile={self.profile} seed={self.seed}"]
        out += [f"party {i}: {v}" for i, v in sorted(self.verdicts.items())]
        for idx, res in self.subsets:
            out.append(f"subset {sorted(idx)}: {'bottom' if res is None else res}")
        out.append(f"all_accept={self.all_accept} subsets_agree={self.subsets_agree}")
        return out


def authorized_subsets(params: WvssParams, count: int, rng) -> list[tuple]:
    """Random authorized subsets: shuffle, then take the shortest prefix
    reaching T_rec.  Duplicates are kept when there are few distinct ones."""
    out = []
    parties = list(range(1, params.n + 1))
    for _ in range(count):
        rng.shuffle(parties)
        acc, picked = 0, []
        for i in parties:
            picked.append(i)
            acc += params.weights[i - 1]
            if acc >= params.T_rec:
                break
        out.append(tuple(sorted(picked)))
    return out


def _dealer(params: WvssParams, profile: str, j, s_0: int, rng):
    """(public bytes, opening json per party) as the dealer would send them."""
    p0 = params.p0
    if profile == "honest" or profile == "tamper-share":
        deal = share(params, s_0, rng)
        openings = list(deal.openings)
        if profile == "tamper-share":
            o = openings[j]
            openings[j] = Opening(o.index, (o.share + 1) % params.prime(j), o.blind)
    else:
        digits = [s_0] + [rng.randrange(p0) for _ in range(params.m)]
        s = lift(s_0, digits[1:], p0)
        shares = [s_0] + [s % p for p in params.primes]
        target = j if j is not None else rng.randrange(1, params.n + 1)
        p = params.prime(target)
        if profile == "forge-wraparound":
            shares[target] = (shares[target] + 1 + rng.randrange(p - 1)) % p
        else:
            other = list(digits)
            pos = rng.randrange(1, params.m + 1) if params.m else 0
            other[pos] = (other[pos] + 1) % p0
            shares[target] = lift(other[0], other[1:], p0) % p
            if shares[target] == s % p:
                shares[target] = (shares[target] + 1) % p
        deal = deal_from_values(params, shares, digits, rng, strict=False)
        openings = list(deal.openings)
    return deal.public.to_bytes(params.group), [o.to_json() for o in openings]


def run_scenario(params: WvssParams, profile: str = "honest", seed: int = 0, subsets: int = 5, secret=None) -> ScenarioReport:
    kind, j = parse_profile(profile)
    if j is not None and not 1 <= j <= params.n:
        raise ValueError(f"party index {j} outside 1..{params.n}")
    rng = random.Random(seed)
    s_0 = rng.randrange(params.p0) if secret is None else secret
    public_bytes, messages = _dealer(params, kind, j, s_0, rng)
    report = ScenarioReport(profile, seed, s_0)

    received = {}
    for i in range(1, params.n + 1):
        try:
            public = DealPublic.from_bytes(params.group, public_bytes)
            opening = Opening.from_json(messages[i])
            verify_deal(params, public, i, opening)
            report.verdicts[i] = "accept"
        except (DealRejected, MalformedProof) as exc:
            report.verdicts[i] = type(exc).__name__
        received[i] = Opening.from_json(messages[i])

    public = DealPublic.from_bytes(params.group, public_bytes)
    for idx in authorized_subsets(params, subsets, rng):
        try:
            res = reconstruct(params, [received[i] for i in idx], public)
        except Unauthorized:
            res = None
        report.subsets.append((idx, res))
    return report
