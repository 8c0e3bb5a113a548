"""Command-line front end.

Exit codes: 0 success or accept, 1 reject / bottom / infeasible, 2 usage or
I/O error.  Failures print ``reason=<Name>`` on stderr.
"""
from __future__ import annotations

import csv
import io
import random
import sys
from fractions import Fraction
from pathlib import Path

import click

from . import bench as bench_mod
from . import eth as eth_mod
from .bignat import max_weight
from .errors import DealRejected, Infeasible, MalformedProof, ParseError, Unauthorized, WvssError
from .group import get_group
from .simulate import run_scenario
from .wvss import DealPublic, Opening, WvssParams, derive_params, reconstruct as wvss_reconstruct, share, verify_deal, verify_proof


class Reject(Exception):
    """Exit 1 with a reason."""


def _fail(code: int, reason: str, detail: str = ""):
    click.echo(f"reason={reason}" + (f" {detail}" if detail else ""), err=True)
    sys.exit(code)


def _run(fn):
    try:
        return fn()
    except Reject as exc:
        _fail(1, exc.args[0])
    except (Infeasible, Unauthorized, DealRejected, MalformedProof) as exc:
        _fail(1, type(exc).__name__, str(exc))
    except (WvssError, OSError, ValueError) as exc:
        _fail(2, type(exc).__name__, str(exc))


def _ratio(text: str) -> Fraction:
    try:
        r = Fraction(text)
    except ValueError:
        raise click.BadParameter(f"{text!r} is not a fraction") from None
    if not 0 < r <= 1:
        raise click.BadParameter("ratio must lie in (0, 1]")
    return r


def _range(text: str) -> list[int]:
    try:
        if "-" in text:
            lo, hi = (int(x) for x in text.split("-", 1))
            return list(range(lo, hi + 1))
        return [int(x) for x in text.split(",")]
    except ValueError:
        raise click.BadParameter(f"bad range {text!r}") from None


def _load_params(path) -> WvssParams:
    return WvssParams.from_json(Path(path).read_text())


def _read_weights(path) -> list[int]:
    text = Path(path).read_text().replace(",", " ").split()
    try:
        return [int(t) for t in text]
    except ValueError:
        raise ParseError("weights file must hold integers") from None


def _emit_table(rows: list[dict], fmt: str) -> None:
    if not rows:
        return
    keys = list(rows[0])
    if fmt == "csv":
        buf = io.StringIO()
        wr = csv.DictWriter(buf, keys, lineterminator="\n")
        wr.writeheader()
        wr.writerows(rows)
        click.echo(buf.getvalue(), nl=False)
        return
    widths = {k: max(len(k), *(len(str(r[k])) for r in rows)) for k in keys}
    click.echo("  ".join(k.ljust(widths[k]) for k in keys))
    for r in rows:
        click.echo("  ".join(str(r[k]).ljust(widths[k]) for k in keys))


FORMAT = click.option("--format", "fmt", type=click.Choice(["table", "csv"]), default="table", show_default=True)
SEED = click.option("--seed", type=int, default=None, help="Makes the run reproducible.")


@click.group()
def main():
    """Weighted ramp verifiable secret sharing."""


@main.command()
@click.option("--weights", "weights_file", type=click.Path(), help="File of integer weights.")
@click.option("--stakes", type=click.Path(), help="Stake CSV (entity,eth_staked).")
@click.option("--min-stake", type=float, default=eth_mod.MIN_STAKE_PCT, show_default=True, help="Minimum stake in percent.")
@click.option("--ratio-T", "ratio_T", default="2/3", show_default=True)
@click.option("--lambda-sec", type=int, default=128, show_default=True)
@click.option("--out", type=click.Path(), help="Write params here instead of stdout.")
@SEED
def params(weights_file, stakes, min_stake, ratio_T, lambda_sec, out, seed):
    """Derive thresholds, primes and digit count."""
    if (weights_file is None) == (stakes is None):
        raise click.UsageError("give exactly one of --weights or --stakes")
    ratio = _ratio(ratio_T)

    def go():
        labels = ()
        if stakes is not None:
            wa = eth_mod.stake_weights(eth_mod.load_stakes(stakes), min_stake)
            for entity, why in wa.excluded:
                click.echo(f"excluded {entity}: {why}", err=True)
            weights, labels = [], []
            cap = max_weight(get_group().bits)
            for entity, w in zip(wa.entities, wa.weights):
                pieces = eth_mod.split_weights([w], cap)
                weights += pieces
                labels += [entity] if len(pieces) == 1 else [f"{entity}#{k + 1}" for k in range(len(pieces))]
            click.echo(f"{len(wa.entities)} entities, total weight {wa.total}, {len(weights)} shares", err=True)
        else:
            weights = _read_weights(weights_file)
        rng = random.Random(seed) if seed is not None else None
        p = derive_params(weights, lambda_sec, ratio, rng=rng, labels=labels)
        text = p.to_json()
        if out:
            Path(out).write_text(text + "\n")
        else:
            click.echo(text)
        click.echo(f"m={p.m} t_priv={p.t_priv} T_rec={p.T_rec} amplification={p.amplification}", err=True)

    _run(go)


@main.command()
@click.option("--params", "params_file", required=True, type=click.Path())
@click.option("--secret", type=int, default=None, help="Secret in [0, p0); random if omitted.")
@click.option("--deal", "deal_file", required=True, type=click.Path(), help="Output deal file.")
@click.option("--openings", "openings_dir", required=True, type=click.Path(), help="Output directory for openings.")
@SEED
def deal(params_file, secret, deal_file, openings_dir, seed):
    """Share a secret: writes the broadcast deal and one opening per party."""

    def go():
        p = _load_params(params_file)
        rng = random.Random(seed) if seed is not None else None
        s_0 = secret if secret is not None else (rng or random.SystemRandom()).randrange(p.p0)
        d = share(p, s_0, rng)
        Path(deal_file).write_bytes(d.public.to_bytes(p.group))
        out = Path(openings_dir)
        out.mkdir(parents=True, exist_ok=True)
        for o in d.openings:
            (out / f"opening_{o.index}.json").write_text(o.to_json() + "\n")
        click.echo(f"dealt to {p.n} parties; openings in {out}", err=True)

    _run(go)


@main.command()
@click.option("--params", "params_file", required=True, type=click.Path())
@click.option("--deal", "deal_file", required=True, type=click.Path())
@click.option("--openings", "opening_files", multiple=True, type=click.Path(), help="Opening file(s) to check.")
def verify(params_file, deal_file, opening_files):
    """Check the deal proof and, if given, each party's opening."""

    def go():
        p = _load_params(params_file)
        public = DealPublic.from_bytes(p.group, Path(deal_file).read_bytes())
        if not opening_files:
            if not verify_proof(p, public):
                raise Reject("ProofInvalid")
        for f in opening_files:
            o = Opening.from_json(Path(f).read_text())
            verify_deal(p, public, o.index, o)
        click.echo("accept")

    _run(go)


@main.command()
@click.option("--params", "params_file", required=True, type=click.Path())
@click.option("--deal", "deal_file", required=True, type=click.Path())
@click.option("--openings", "opening_files", multiple=True, required=True, type=click.Path())
def reconstruct(params_file, deal_file, opening_files):
    """Recover the secret from an authorized set of openings."""

    def go():
        p = _load_params(params_file)
        public = DealPublic.from_bytes(p.group, Path(deal_file).read_bytes())
        ops = [Opening.from_json(Path(f).read_text()) for f in opening_files]
        s = wvss_reconstruct(p, ops, public)
        if s is None:
            raise Reject("Bottom")
        click.echo(str(s))

    _run(go)


@main.command()
@click.option("--params", "params_file", required=True, type=click.Path())
@click.option("--profile", default="honest", show_default=True, help="honest, tamper-share(j), forge-wraparound, inconsistent-digits")
@click.option("--subsets", type=int, default=5, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@FORMAT
def simulate(params_file, profile, subsets, seed, fmt):
    """Run a dealer and all parties in process."""

    def go():
        p = _load_params(params_file)
        rep = run_scenario(p, profile, seed, subsets)
        if fmt == "csv":
            rows = [{"kind": "party", "who": i, "result": v} for i, v in sorted(rep.verdicts.items())]
            rows += [
                {"kind": "subset", "who": " ".join(map(str, idx)), "result": "bottom" if r is None else r}
                for idx, r in rep.subsets
            ]
            _emit_table(rows, "csv")
        else:
            click.echo("\n".join(rep.lines()))

    _run(go)


@main.command()
@click.option("--n", "n_range", default="1-4", show_default=True)
@click.option("--m", "m_range", default="1-4", show_default=True)
@click.option("--max-nm", type=int, default=16, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@FORMAT
def bench(n_range, m_range, max_nm, seed, fmt):
    """Proof size and timing sweep; prints the log-size fit on stderr."""
    rows = bench_mod.run_bench(_range(n_range), _range(m_range), seed, max_nm=max_nm)
    _emit_table(
        [
            {"n": r.n, "m": r.m, "gate_count": r.gate_count, "proof_bytes": r.proof_bytes,
             "prove_ms": f"{r.prove_ms:.1f}", "verify_ms": f"{r.verify_ms:.1f}"}
            for r in rows
        ],
        fmt,
    )
    if len(rows) >= 2 and len({r.n * r.m for r in rows}) > 1:
        a, b, r2 = bench_mod.log_fit(rows)
        click.echo(f"fit proof_bytes = {a:.1f} + {b:.2f} log2(n m), R^2 = {r2:.4f}", err=True)


@main.command("eth-report")
@click.option("--stakes", type=click.Path(), default=None, help="Stake CSV; the bundled table if omitted.")
@click.option("--min-stake", type=float, default=eth_mod.MIN_STAKE_PCT, show_default=True)
@click.option("--ratio-T", "ratio_T", default="2/3", show_default=True)
@click.option("--lambda-sec", type=int, default=128, show_default=True)
@FORMAT
def eth_report(stakes, min_stake, ratio_T, lambda_sec, fmt):
    """Bandwidth comparison for the Ethereum validator set."""
    ratio = _ratio(ratio_T)

    def go():
        recs = eth_mod.load_stakes(stakes) if stakes else None
        rep = eth_mod.eth_report(recs, min_stake, ratio, lambda_sec)
        rows = [
            {
                "design": r.design,
                "broadcast_group": r.broadcast_group,
                "broadcast_field": r.broadcast_field,
                "broadcast_bytes": r.broadcast_bytes,
                "private_field": r.private_field,
                "private_bytes": r.private_bytes,
            }
            for r in rep.rows
        ]
        _emit_table(rows, fmt)
        if fmt == "table":
            click.echo("")
            for k, v in rep.assumptions:
                click.echo(f"{k}: {v}")
            g, f, pf = rep.wrss_delta
            ref = eth_mod.REFERENCE_WRSS
            click.echo(f"WRSS delta vs reference {ref}: group {g:+d}, field {f:+d}, private {pf:+d}")
            click.echo(f"Feldman / WRSS broadcast bytes: {rep.feldman_ratio:.1f}x")

    _run(go)


if __name__ == "__main__":
    main()
