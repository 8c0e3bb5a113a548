"""Ethereum staking case study: stake table to weights, and bandwidth rows."""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from importlib import resources

from . import ckt_proof
from .errors import Infeasible, ParseError

# "Unidentified" is not a party and solo stakers are not one entity
EXCLUDED = ("Unidentified", "Other Solo Stakers")
G1_BYTES = 48  # BLS12-381 compressed G1, used by the Current and Feldman rows
SIG_COUNT = 28_000
BASE_WEIGHT = 10
MIN_STAKE_PCT = 0.02
# published figures the recomputed row is compared against:
# (broadcast group, broadcast field, private field)
REFERENCE_WRSS = (389, 6, 892)


@dataclass(frozen=True)
class StakeRecord:
    entity: str
    eth_staked: int


def load_stakes(source=None) -> list[StakeRecord]:
    """Parse `entity,eth_staked` CSV text, a path, or the bundled table."""
    if source is None:
        text = resources.files("wrvss.data").joinpath("eth_stakes.csv").read_text()
    elif "\n" in str(source):
        text = str(source)
    else:
        with open(source, newline="") as fh:
            text = fh.read()
    reader = csv.DictReader(io.StringIO(text))
    if reader.fieldnames is None or [f.strip() for f in reader.fieldnames] != ["entity", "eth_staked"]:
        raise ParseError("stake CSV needs the header entity,eth_staked")
    out = []
    for line, row in enumerate(reader, start=2):
        try:
            amount = int(row["eth_staked"].replace(",", "").strip())
        except (AttributeError, ValueError):
            raise ParseError(f"line {line}: bad eth_staked {row.get('eth_staked')!r}") from None
        if amount < 0:
            raise ParseError(f"line {line}: negative stake")
        out.append(StakeRecord(row["entity"].strip(), amount))
    if not out:
        raise ParseError("stake CSV has no rows")
    return out


@dataclass(frozen=True)
class WeightAssignment:
    entities: tuple
    weights: tuple
    excluded: tuple  # (entity, reason)
    virtual: tuple = ()  # round(stake% / min_stake%): 1-of-N shares per entity

    @property
    def virtual_total(self) -> int:
        return sum(self.virtual)

    @property
    def total(self) -> int:
        return sum(self.weights)


def stake_weights(records, min_stake_pct: float = MIN_STAKE_PCT, base_weight: int = BASE_WEIGHT) -> WeightAssignment:
    """weight = round(stake% / min_stake% * base_weight); percentages use the
    whole table (excluded rows included) as the denominator."""
    total = sum(r.eth_staked for r in records)
    if total == 0:
        raise Infeasible("no stake in the table")
    ents, ws, virt, dropped = [], [], [], []
    for r in records:
        pct = 100 * r.eth_staked / total
        if r.entity in EXCLUDED:
            dropped.append((r.entity, "not a single operator"))
        elif pct < min_stake_pct:
            dropped.append((r.entity, f"{pct:.4f}% below {min_stake_pct}%"))
        else:
            ents.append(r.entity)
            ws.append(round(pct / min_stake_pct * base_weight))
            virt.append(round(pct / min_stake_pct))
    if not ws:
        raise Infeasible(f"every party is below the {min_stake_pct}% minimum stake")
    return WeightAssignment(tuple(ents), tuple(ws), tuple(dropped), tuple(virt))


def split_weights(weights, cap: int) -> list[int]:
    """Split each weight into ceil(w / cap) near-equal pieces, each <= cap."""
    out = []
    for w in weights:
        k = -(-w // cap)
        base, extra = divmod(w, k)
        out += [base + 1] * extra + [base] * (k - extra)
    return out


@dataclass(frozen=True)
class BandwidthReport:
    design: str
    broadcast_group: int
    broadcast_field: int
    broadcast_bytes: int
    private_field: int
    private_bytes: int
    notes: str = ""


def current_row() -> BandwidthReport:
    return BandwidthReport("Current", SIG_COUNT, 0, SIG_COUNT * G1_BYTES, 0, 0, f"{SIG_COUNT} BLS signatures x {G1_BYTES} B")


def feldman_row(virtual_shares: int, field_bytes: int = 32) -> BandwidthReport:
    N = virtual_shares
    t = math.ceil(2 * N / 3)
    return BandwidthReport(
        "Feldman",
        N + t,
        0,
        (N + t) * G1_BYTES,
        N,
        N * field_bytes,
        f"N={N} virtual shares, t=ceil(2N/3)={t}, {G1_BYTES} B group elements",
    )


def wrss_row(n_shares: int, m: int, p0: int, element_bytes: int, scalar_bytes: int, gates: int) -> BandwidthReport:
    """Broadcast = (n+1) share commitments + A, B, C + circuit proof.

    Private = share and blind per issued share, so 2 field elements each.
    """
    n_g, n_s = ckt_proof.proof_counts(gates)
    group_elems = (n_shares + 1) + 3 + n_g
    return BandwidthReport(
        "WRSS",
        group_elems,
        n_s,
        group_elems * element_bytes + n_s * scalar_bytes,
        2 * n_shares,
        2 * n_shares * scalar_bytes,
        f"n={n_shares} shares, m={m}, G={gates} gates -> {ckt_proof.padded_size(gates)} padded, "
        f"{element_bytes} B group / {scalar_bytes} B field",
    )


@dataclass(frozen=True)
class EthReport:
    rows: tuple
    assumptions: tuple  # (key, value) pairs, printed with the table
    wrss_delta: tuple  # measured minus REFERENCE_WRSS, per column

    @property
    def feldman_ratio(self) -> float:
        by = {r.design: r for r in self.rows}
        return by["Feldman"].broadcast_bytes / by["WRSS"].broadcast_bytes


def eth_report(records=None, min_stake_pct: float = MIN_STAKE_PCT, ratio_T=None, lambda_sec: int = 128, group=None) -> EthReport:
    from fractions import Fraction

    from .bignat import max_weight
    from .group import get_group, scalar_bytes
    from .wvss import derive_params

    group = group or get_group()
    ratio_T = Fraction(2, 3) if ratio_T is None else Fraction(ratio_T)
    records = load_stakes() if records is None else records
    wa = stake_weights(records, min_stake_pct)
    cap = max_weight(group.bits)
    pieces = split_weights(wa.weights, cap)
    params = derive_params(pieces, lambda_sec, ratio_T, group=group)
    gates = params.gate_count()
    sb = scalar_bytes(group)
    wrss = wrss_row(len(pieces), params.m, group.order, group.element_size, sb, gates)
    rows = (current_row(), feldman_row(wa.virtual_total, sb), wrss)
    n_g, _ = ckt_proof.proof_counts(gates)
    assumptions = (
        ("group", f"{group.name}, {group.bits}-bit order, {group.element_size} B elements, {sb} B scalars"),
        ("parties", f"{len(wa.weights)} entities >= {min_stake_pct}% (excluded: {len(wa.excluded)})"),
        ("total weight", str(wa.total)),
        ("Feldman N", f"{wa.virtual_total} = sum of round(stake% / {min_stake_pct}%)"),
        ("share cap", f"{cap} bits per prime; entities split into ceil(w/{cap}) shares -> {len(pieces)}"),
        ("thresholds", f"T_rec={params.T_rec}, t_priv={params.t_priv}, m={params.m}, lambda_sec={lambda_sec}"),
        ("gates", f"{gates} -> {ckt_proof.padded_size(gates)} padded, {n_g} proof group elements"),
        (
            "WRSS broadcast",
            f"(n+1)={len(pieces) + 1} share commitments + 3 wire commitments + {n_g} proof elements + 5 scalars",
        ),
        ("WRSS private", "share and blind per issued share (2 field elements each)"),
    )
    delta = (wrss.broadcast_group - REFERENCE_WRSS[0], wrss.broadcast_field - REFERENCE_WRSS[1], wrss.private_field - REFERENCE_WRSS[2])
    return EthReport(rows, assumptions, delta)
