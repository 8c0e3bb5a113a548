"""Sparse rank-1 constraint systems and the gadgets used by the sharing proofs.

A circuit has ``m_mul`` multiplication gates ``a_i * b_i = c_i`` and rows

    W_a . a + W_b . b + W_c . c = W_v . v + k      (mod modulus)

Builders work with linear combinations: dicts mapping a wire key to an integer
coefficient.  Wire keys are ``("a", i)``, ``("b", i)``, ``("c", i)`` for gate
wires, ``("v", j)`` for committed inputs and ``ONE`` for the constant term.
"""
from __future__ import annotations

import hashlib
from dataclasses import dataclass

from .errors import BadPrimes, DimensionMismatch, PrimeTooLarge

ONE = "one"


def lc_sum(*parts) -> dict:
    """Sum of (coefficient, lc) pairs; lcs may also be plain ints (constants)."""
    out: dict = {}
    for coef, term in parts:
        if isinstance(term, int):
            term = {ONE: term}
        for key, val in term.items():
            out[key] = out.get(key, 0) + coef * val
    return out


@dataclass(frozen=True)
class CircuitSpec:
    m_mul: int
    n_in: int
    modulus: int
    W_a: tuple
    W_b: tuple
    W_c: tuple
    W_v: tuple
    k_vec: tuple

    @property
    def q_cons(self) -> int:
        return len(self.k_vec)

    def dump(self) -> str:
        """Sparse-triplet text form, one line per nonzero entry."""
        lines = [f"# circuit m_mul={self.m_mul} q_cons={self.q_cons} n_in={self.n_in} modulus={self.modulus}"]
        for j in range(self.q_cons):
            for name, mat in (("a", self.W_a), ("b", self.W_b), ("c", self.W_c), ("v", self.W_v)):
                for i, coef in mat[j]:
                    lines.append(f"{j} {name} {i} {coef}")
            if self.k_vec[j]:
                lines.append(f"{j} k 0 {self.k_vec[j]}")
        return "\n".join(lines) + "\n"

    def digest(self) -> bytes:
        return hashlib.sha256(self.dump().encode()).digest()


@dataclass
class Witness:
    a: list
    b: list
    c: list

    def __len__(self):
        return len(self.a)

    def __add__(self, other: "Witness") -> "Witness":
        return Witness(self.a + other.a, self.b + other.b, self.c + other.c)


class CircuitBuilder:
    def __init__(self, modulus: int, n_in: int):
        self.modulus = modulus
        self.n_in = n_in
        self.m_mul = 0
        self.rows: list = []

    def input(self, j: int) -> dict:
        if not 0 <= j < self.n_in:
            raise IndexError(j)
        return {("v", j): 1}

    def gates(self, n: int) -> range:
        start = self.m_mul
        self.m_mul += n
        return range(start, start + n)

    def constrain(self, lc: dict) -> None:
        """Require the linear combination to vanish."""
        self.rows.append(lc)

    def build(self) -> CircuitSpec:
        mod = self.modulus
        W_a, W_b, W_c, W_v, k_vec = [], [], [], [], []
        for row in self.rows:
            parts = {"a": {}, "b": {}, "c": {}, "v": {}}
            const = 0
            for key, coef in row.items():
                if key == ONE:
                    const += coef
                else:
                    kind, idx = key
                    parts[kind][idx] = parts[kind].get(idx, 0) + coef
            # inputs and the constant move to the right-hand side
            W_a.append(tuple((i, c % mod) for i, c in sorted(parts["a"].items()) if c % mod))
            W_b.append(tuple((i, c % mod) for i, c in sorted(parts["b"].items()) if c % mod))
            W_c.append(tuple((i, c % mod) for i, c in sorted(parts["c"].items()) if c % mod))
            W_v.append(tuple((i, -c % mod) for i, c in sorted(parts["v"].items()) if c % mod))
            k_vec.append(-const % mod)
        return CircuitSpec(self.m_mul, self.n_in, mod, tuple(W_a), tuple(W_b), tuple(W_c), tuple(W_v), tuple(k_vec))


def is_satisfied(ckt: CircuitSpec, v_vec, w: Witness) -> bool:
    if len(v_vec) != ckt.n_in:
        raise DimensionMismatch(f"{len(v_vec)} inputs for a circuit taking {ckt.n_in}")
    if not (len(w.a) == len(w.b) == len(w.c) == ckt.m_mul):
        raise DimensionMismatch(f"witness length {len(w.a)} for {ckt.m_mul} gates")
    mod = ckt.modulus
    a, b, c = w.a, w.b, w.c
    for x, y, z in zip(a, b, c):
        if (x * y - z) % mod:
            return False
    for j in range(ckt.q_cons):
        lhs = sum(coef * a[i] for i, coef in ckt.W_a[j])
        lhs += sum(coef * b[i] for i, coef in ckt.W_b[j])
        lhs += sum(coef * c[i] for i, coef in ckt.W_c[j])
        rhs = sum(coef * v_vec[i] for i, coef in ckt.W_v[j]) + ckt.k_vec[j]
        if (lhs - rhs) % mod:
            return False
    return True


# ---------------------------------------------------------------- gadgets


@dataclass(frozen=True)
class ModCircuitParams:
    p: int
    q_quot: int
    t_rem: int
    n1: int
    n2: int

    @property
    def gates(self) -> int:
        return 3 * self.n1 + 3 * self.n2 + 1

    @property
    def constraints(self) -> int:
        return 5 * self.n1 + 5 * self.n2 + 9


def mod_params(p: int, p0: int) -> ModCircuitParams:
    if p < 2 or p * p + p >= p0:
        raise PrimeTooLarge(f"p={p} needs p^2 + p < p0")
    q, t = divmod(p0, p)
    # strict 2^n2 > q, so that both k = 0 and k = q decompose
    return ModCircuitParams(p, q, t, (p - 1).bit_length(), q.bit_length())


def _bit_block(b: CircuitBuilder, n: int, target=None, hard: bool = True):
    """n gates whose a-wires hold the bits of `target`; returns (gates, value)."""
    gates = b.gates(n)
    value = {("a", g): 1 << i for i, g in enumerate(gates)}
    if target is not None:
        b.constrain(lc_sum((1, value), (-1, target)))
    if hard:
        for g in gates:
            b.constrain({("a", g): 1, ("b", g): -1, ONE: -1})
    for g in gates:
        b.constrain({("c", g): 1})
    return gates, value


def range_subckt(b: CircuitBuilder, value, n: int):
    """0 <= value < 2^n.  n gates, 2n + 1 rows."""
    if n < 1:
        raise ValueError("n must be at least 1")
    return _bit_block(b, n, target=value)


def bounded_range_subckt(b: CircuitBuilder, value, bound: int, n: int):
    """0 <= value < bound, both sides checked in n bits."""
    range_subckt(b, value, n)
    range_subckt(b, lc_sum((bound - 1, 1), (-1, value)), n)


def disjunction_subckt(b: CircuitBuilder, left, right, z: int) -> int:
    """One gate forcing sum_j z^j c_left_j times sum_j z^j c_right_j to zero.

    `left` and `right` are gate indices; c_j means a_j - b_j - 1 there.
    """
    (g,) = b.gates(1)
    for side, gates in (("a", left), ("b", right)):
        row = {(side, g): -1}
        zj = 1
        for i in gates:
            row[("a", i)] = row.get(("a", i), 0) + zj
            row[("b", i)] = row.get(("b", i), 0) - zj
            row[ONE] = row.get(ONE, 0) - zj
            zj = zj * z % b.modulus
        b.constrain(row)
    b.constrain({("c", g): 1})
    return g


def pom_gadget(b: CircuitBuilder, p: int, z: int, s=None, v=None):
    """Constrain v = s mod p as integers, with s < p0.

    Either side may be None, in which case the gadget defines it from its own
    wires (s = p*k + v, v = its bit block).  Returns (s, v) as linear
    combinations.  Gate order: k, q-k, v, p-v-1, q-k-1, t-v-1, disjunction.
    """
    mp = mod_params(p, b.modulus)
    n1, n2, q, t = mp.n1, mp.n2, mp.q_quot, mp.t_rem
    _, k = _bit_block(b, n2)
    _bit_block(b, n2, target=lc_sum((q, 1), (-1, k)))
    _, v_bits = _bit_block(b, n1, target=v)
    if v is None:
        v = v_bits
    _bit_block(b, n1, target=lc_sum((p - 1, 1), (-1, v)))
    left, _ = _bit_block(b, n2, target=lc_sum((q - 1, 1), (-1, k)), hard=False)
    right, _ = _bit_block(b, n1, target=lc_sum((t - 1, 1), (-1, v)), hard=False)
    pk_plus_v = lc_sum((p, k), (1, v))
    if s is None:
        s = pk_plus_v
    else:
        b.constrain(lc_sum((1, pk_plus_v), (-1, s)))
    disjunction_subckt(b, left, right, z)
    return s, v


def residue_weights(p: int, m: int, p0: int) -> list[int]:
    return [pow(p0, j, p) for j in range(m + 1)]


def can_collapse(p: int, m: int, p0: int) -> bool:
    """True when sum_j (p0^j mod p) * a'_j cannot reach p0."""
    return m >= 1 and (p - 1) * sum(residue_weights(p, m, p0)) < p0


def emod_pom_count(p: int, m: int, p0: int) -> int:
    if m == 0:
        return 1
    return m + 2 if can_collapse(p, m, p0) else 2 * m + 1


def emod_gadget(b: CircuitBuilder, p: int, z: int, digits: list, v) -> list:
    """v = sum_j digits_j p0^j mod p.  Undefined digits (None) get defined."""
    p0 = b.modulus
    m = len(digits) - 1
    digits = list(digits)
    if m == 0:
        digits[0], _ = pom_gadget(b, p, z, s=digits[0], v=v)
        return digits
    residues = []
    for j, d in enumerate(digits):
        digits[j], r = pom_gadget(b, p, z, s=d)
        residues.append(r)
    if can_collapse(p, m, p0):
        weights = residue_weights(p, m, p0)
        pom_gadget(b, p, z, s=lc_sum(*zip(weights, residues)), v=v)
        return digits
    t = p0 % p
    acc = residues[m]
    for j in range(m - 1, -1, -1):
        val = lc_sum((1, residues[j]), (t, acc))
        _, acc = pom_gadget(b, p, z, s=val, v=v if j == 0 else None)
    return digits


def mod_ckt(p: int, z: int, p0: int) -> CircuitSpec:
    """Inputs (v, s)."""
    b = CircuitBuilder(p0, 2)
    pom_gadget(b, p, z, s=b.input(1), v=b.input(0))
    return b.build()


def emod_ckt(p: int, m: int, z: int, p0: int) -> CircuitSpec:
    """Inputs (v, a_0, ..., a_m)."""
    mod_params(p, p0)
    b = CircuitBuilder(p0, m + 2)
    emod_gadget(b, p, z, [b.input(j + 1) for j in range(m + 1)], b.input(0))
    return b.build()


def check_primes(primes, p0: int) -> None:
    from math import gcd

    for i, p in enumerate(primes):
        if p < 2 or p * p + p >= p0:
            raise BadPrimes(f"p_{i + 1}={p} violates p^2 + p < p0")
        for p2 in primes[:i]:
            if gcd(p, p2) != 1:
                raise BadPrimes(f"{p} and {p2} share a factor")


def vss_ckt(primes, m: int, z: int, p0: int) -> CircuitSpec:
    """Inputs (s_0, s_1, ..., s_n).

    Digit a_0 is the input s_0; digits a_1..a_m are defined by the first
    party's digit gadgets and reused by every other party.
    """
    primes = list(primes)
    check_primes(primes, p0)
    b = CircuitBuilder(p0, len(primes) + 1)
    digits = [b.input(0)] + [None] * m
    for i, p in enumerate(primes, start=1):
        digits = emod_gadget(b, p, z, digits, b.input(i))
    return b.build()


def vss_gate_count(primes, m: int, p0: int) -> int:
    return sum(emod_pom_count(p, m, p0) * mod_params(p, p0).gates for p in primes)
