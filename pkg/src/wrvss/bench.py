"""Proof size and timing sweep over (n, m)."""
from __future__ import annotations

import csv
import io
import math
import random
import statistics
import time
from dataclasses import dataclass

from . import ckt_proof
from .bignat import largest_primes_below, max_weight
from .group import get_group, scalar_bytes
from .wvss import WvssParams, share, verify_proof

FIELDS = ("n", "m", "gate_count", "proof_bytes", "prove_ms", "verify_ms")


@dataclass(frozen=True)
class BenchRow:
    n: int
    m: int
    gate_count: int
    proof_bytes: int
    prove_ms: float
    verify_ms: float


def bench_params(n: int, m: int, group=None) -> WvssParams:
    """n parties at the widest allowed prime size with m upper digits.

    Thresholds are placeholders: proving cost depends only on the primes and
    m, so these params skip the reconstruction-bound checks on purpose.
    """
    group = group or get_group()
    w = max_weight(group.bits)
    primes = largest_primes_below(w, n)
    return WvssParams(group.name, 0, (w,) * n, tuple(primes), m, 1, n * w)


def run_one(n: int, m: int, rng, group=None) -> BenchRow:
    params = bench_params(n, m, group)
    s_0 = rng.randrange(params.p0)
    t0 = time.perf_counter()
    deal = share(params, s_0, rng)
    t1 = time.perf_counter()
    data = deal.public.to_bytes(params.group)
    ok = verify_proof(params, data)
    t2 = time.perf_counter()
    if not ok:
        raise AssertionError(f"honest deal rejected at n={n}, m={m}")
    size = len(deal.public.pi_ckt.to_bytes(params.group))
    return BenchRow(n, m, params.gate_count(), size, 1e3 * (t1 - t0), 1e3 * (t2 - t1))


def run_bench(ns=range(1, 5), ms=range(1, 5), seed: int = 0, group=None, max_nm: int = 16) -> list[BenchRow]:
    rng = random.Random(seed)
    return [run_one(n, m, rng, group) for n in ns for m in ms if n * m <= max_nm]


def log_fit(rows) -> tuple[float, float, float]:
    """Least-squares proof_bytes = a + b log2(n m); returns (a, b, R^2)."""
    xs = [math.log2(r.n * r.m) for r in rows]
    ys = [r.proof_bytes for r in rows]
    b, a = statistics.linear_regression(xs, ys)
    mean = statistics.fmean(ys)
    ss_tot = sum((y - mean) ** 2 for y in ys)
    ss_res = sum((y - a - b * x) ** 2 for x, y in zip(xs, ys))
    return a, b, 1.0 if ss_tot == 0 else 1 - ss_res / ss_tot


def predicted_proof_bytes(gates: int, group=None) -> int:
    """Circuit proof size from the closed form, without running anything."""
    group = group or get_group()
    return ckt_proof.proof_size_bytes(gates, group)


def extrapolated_gates(n: int, m: int, group=None) -> int:
    """Gate count for n parties at the widest prime size and m digits,
    assuming no party qualifies for the collapsed reduction (the usual case
    for wide primes)."""
    group = group or get_group()
    w = max_weight(group.bits)
    p0 = group.order
    q = p0 // (2**w - 1)
    per_pom = 3 * w + 3 * q.bit_length() + 1
    return n * (2 * m + 1 if m else 1) * per_pom


def to_csv(rows) -> str:
    buf = io.StringIO()
    wr = csv.writer(buf)
    wr.writerow(FIELDS)
    for r in rows:
        wr.writerow([r.n, r.m, r.gate_count, r.proof_bytes, f"{r.prove_ms:.1f}", f"{r.verify_ms:.1f}"])
    return buf.getvalue()


def scalar_size(group=None) -> int:
    return scalar_bytes(group or get_group())
