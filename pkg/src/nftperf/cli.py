"""Operator entry point: ingest, rarity, indicators, network, serve, fixtures.

Exit codes: 0 success, 1 validation/data failure, 2 usage error.
"""
from __future__ import annotations

import datetime as dt
import json
import sys

import click

from .features import MatchParams, ScaleSpaceParams
from .fixtures import SCENARIOS, gen_fixture
from .indicators import WhalePolicy, day_of, market_series
from .ingestion import load_snapshot, validate_snapshot
from .model import NftPerfError
from .network import build_transaction_network
from .rarity import (
    RarityWeights,
    compute_collection_rarity,
    extract_collection_features,
    ranked,
    weighted_rarity,
)
from .serialize import market_day_json, network_json
from .storage import Store


@click.group()
@click.option("--data-dir", envvar="NFTPERF_DATA_DIR", default="./data",
              show_default=True, help="Store root directory.")
@click.pass_context
def main(ctx, data_dir):
    """NFT performance-analysis workbench."""
    ctx.ensure_object(dict)
    ctx.obj["data_dir"] = data_dir


def _store(ctx) -> Store:
    return Store(ctx.obj["data_dir"])


def _fail(message: str, code: int = 1):
    click.echo(f"error: {message}", err=True)
    sys.exit(code)


@main.command()
@click.argument("path", type=click.Path(exists=True, file_okay=False))
@click.option("--collection-id", default=None,
              help="Require the snapshot to carry this collection id.")
@click.option("--json", "as_json", is_flag=True)
@click.pass_context
def ingest(ctx, path, collection_id, as_json):
    """Validate and store a snapshot directory."""
    try:
        warnings = []
        snapshot = load_snapshot(path, warnings)
        if collection_id and snapshot.collection_id != collection_id:
            _fail(f"snapshot id {snapshot.collection_id!r} != {collection_id!r}")
        violations = validate_snapshot(snapshot)
        if violations:
            for v in violations:
                click.echo(f"violation: {v.token_id}: {v.rule}: {v.message}", err=True)
            _fail("snapshot failed validation")
        cid = _store(ctx).put_snapshot(path)
    except NftPerfError as exc:
        _fail(str(exc))
    report = {
        "collection_id": cid,
        "nfts": len(snapshot.nfts),
        "warnings": [{"token_id": w.token_id, "rule": w.rule, "message": w.message}
                     for w in warnings],
    }
    if as_json:
        click.echo(json.dumps(report))
    else:
        click.echo(f"ingested {cid}: {len(snapshot.nfts)} NFTs, "
                   f"{len(warnings)} warnings")


@main.command()
@click.option("--collection-id", required=True)
@click.option("--w-trait", type=float, default=0.5, show_default=True)
@click.option("--jobs", type=int, default=1, show_default=True)
@click.option("--json", "as_json", is_flag=True)
@click.pass_context
def rarity(ctx, collection_id, w_trait, jobs, as_json):
    """Compute trait and image rarity; writes rarity.csv and pairdiffs.bin."""
    store = _store(ctx)
    try:
        snapshot = store.get_snapshot(collection_id)
        params = ScaleSpaceParams()
        mp = MatchParams()
        features = extract_collection_features(
            snapshot, store.collection_dir(collection_id), params,
            cache=store.feature_cache(collection_id), jobs=jobs)
        scores, pair_diffs = compute_collection_rarity(
            snapshot, features, mp, jobs=jobs)
    except NftPerfError as exc:
        _fail(str(exc))
    store.save_rarity(collection_id, scores)
    store.save_pair_differences(collection_id, pair_diffs)
    w = RarityWeights(w_trait)
    ordering = ranked(scores, w)
    if as_json:
        click.echo(json.dumps({
            "collection_id": collection_id,
            "w_trait": w_trait,
            "ranking": [s.token_id for s in ordering],
            "scores": {s.token_id: {"trait_rarity": round(s.trait_rarity, 6),
                                    "image_rarity": round(s.image_rarity, 6)}
                       for s in scores},
        }))
    else:
        click.echo(f"{'token_id':<12} {'trait':>8} {'image':>8} {'weighted':>8}")
        for s in ordering:
            click.echo(f"{s.token_id:<12} {s.trait_rarity:>8.4f} "
                       f"{s.image_rarity:>8.4f} {weighted_rarity(s, w):>8.4f}")


@main.command()
@click.option("--collection-id", required=True)
@click.option("--from", "day_from", default=None, help="YYYY-MM-DD")
@click.option("--to", "day_to", default=None, help="YYYY-MM-DD")
@click.option("--min-holdings", type=int, default=10, show_default=True)
@click.pass_context
def indicators(ctx, collection_id, day_from, day_to, min_holdings):
    """Print the daily market series as JSON."""
    store = _store(ctx)
    try:
        snapshot = store.get_snapshot(collection_id)
        stamps = [a.timestamp for n in snapshot.nfts for a in n.activities]
        default_from = day_of(min(stamps)) if stamps else day_of(snapshot.snapshot_at)
        d_from = dt.date.fromisoformat(day_from) if day_from else default_from
        d_to = dt.date.fromisoformat(day_to) if day_to else day_of(snapshot.snapshot_at)
        series = market_series(snapshot, d_from, d_to, WhalePolicy(min_holdings))
    except (NftPerfError, ValueError) as exc:
        _fail(str(exc))
    click.echo(json.dumps({"schema": 1,
                           "days": [market_day_json(m) for m in series]}))


@main.command()
@click.option("--collection-id", required=True)
@click.option("--token", required=True)
@click.option("--as-of", type=int, default=None, help="UTC seconds")
@click.pass_context
def network(ctx, collection_id, token, as_of):
    """Print the transaction network of one NFT as JSON."""
    store = _store(ctx)
    try:
        snapshot = store.get_snapshot(collection_id)
        net = build_transaction_network(token, snapshot, as_of)
    except NftPerfError as exc:
        _fail(str(exc))
    click.echo(json.dumps(network_json(net)))


@main.command()
@click.option("--port", type=int, default=8000, show_default=True)
@click.option("--host", default="127.0.0.1", show_default=True)
@click.pass_context
def serve(ctx, port, host):
    """Run the HTTP service until interrupted."""
    import os

    import uvicorn

    from .service import create_app

    data_dir = ctx.obj["data_dir"]
    if not os.path.isdir(data_dir):
        _fail(f"data directory not found: {data_dir}")
    app = create_app(data_dir)
    try:
        uvicorn.run(app, host=host, port=port, log_level="info")
    except SystemExit:
        raise
    except OSError as exc:
        _fail(f"cannot bind {host}:{port}: {exc}")


@main.command("gen-fixture")
@click.option("--scenario", type=click.Choice(SCENARIOS), required=True)
@click.option("--out", required=True, type=click.Path(file_okay=False))
@click.option("--seed", type=int, default=7, show_default=True)
def gen_fixture_cmd(scenario, out, seed):
    """Write a synthetic snapshot directory."""
    gen_fixture(scenario, out, seed)
    click.echo(f"wrote {scenario} fixture to {out}")


if __name__ == "__main__":
    main()
