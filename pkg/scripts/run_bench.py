"""Proof-size sweep over n, m in 1..4 (n*m <= 16) plus the log-size fit.

    python3 scripts/run_bench.py [--out results/bench.csv]
"""
import argparse
from pathlib import Path

from wrvss.bench import extrapolated_gates, log_fit, predicted_proof_bytes, run_bench, to_csv


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--out", type=Path, default=None)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    rows = run_bench(range(1, 5), range(1, 5), seed=args.seed)
    text = to_csv(rows)
    print(text, end="")
    if args.out:
        args.out.parent.mkdir(parents=True, exist_ok=True)
        args.out.write_text(text)
    a, b, r2 = log_fit(rows)
    print(f"\nfit: proof_bytes = {a:.1f} + {b:.2f} log2(n m)   R^2 = {r2:.4f}")
    gates = extrapolated_gates(365, 108)
    print(f"n=365 m=108: {gates} gates -> {predicted_proof_bytes(gates)} B circuit proof")


if __name__ == "__main__":
    main()
