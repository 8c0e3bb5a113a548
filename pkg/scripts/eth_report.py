"""Bandwidth table for the bundled Ethereum stake snapshot.

    python3 scripts/eth_report.py [--stakes other.csv]
"""
import argparse

from wrvss.eth import REFERENCE_WRSS, eth_report, load_stakes


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--stakes", default=None)
    args = ap.parse_args()

    rep = eth_report(load_stakes(args.stakes) if args.stakes else None)
    print(f"{'design':8} {'group':>6} {'field':>6} {'bytes':>10} {'priv field':>10} {'priv bytes':>10}")
    for r in rep.rows:
        print(f"{r.design:8} {r.broadcast_group:6} {r.broadcast_field:6} {r.broadcast_bytes:10} {r.private_field:10} {r.private_bytes:10}")
    print()
    for k, v in rep.assumptions:
        print(f"{k}: {v}")
    print(f"WRSS minus reference {REFERENCE_WRSS}: {rep.wrss_delta}")
    print(f"Feldman / WRSS broadcast: {rep.feldman_ratio:.1f}x")


if __name__ == "__main__":
    main()
