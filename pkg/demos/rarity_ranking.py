"""Rank a small synthetic collection by combined trait and image rarity.

Generates the bundled "basic" fixture into a temp directory, extracts image
descriptors for every NFT, computes both rarity components, and prints the
ranking at a few different trait/image weightings.

Run:  python3 demos/rarity_ranking.py
"""
import tempfile

from nftperf.features import ScaleSpaceParams
from nftperf.fixtures import gen_fixture
from nftperf.ingestion import load_snapshot
from nftperf.rarity import (
    RarityWeights,
    compute_collection_rarity,
    extract_collection_features,
    ranked,
    weighted_rarity,
)

with tempfile.TemporaryDirectory() as tmp:
    gen_fixture("basic", tmp)
    snap = load_snapshot(tmp)
    print(f"collection {snap.collection_id!r}: {len(snap.nfts)} NFTs")

    print("extracting descriptors with 4 workers...")
    feats = extract_collection_features(snap, tmp, ScaleSpaceParams(), jobs=4)
    scores, _ = compute_collection_rarity(snap, feats, jobs=4)

    print(f"\n{'token':<8} {'trait':>7} {'image':>7}")
    for s in scores:
        print(f"{s.token_id:<8} {s.trait_rarity:>7.4f} {s.image_rarity:>7.4f}")

    for w in (1.0, 0.5, 0.0):
        order = [s.token_id for s in ranked(scores, RarityWeights(w))]
        print(f"\nranking at w_trait={w}: {' > '.join(order)}")

    # t09 carries a unique trait set, so it dominates whenever traits matter
    top = ranked(scores, RarityWeights(0.5))[0]
    print(f"\ntop at the balanced weighting: {top.token_id} "
          f"(weighted {weighted_rarity(top, RarityWeights(0.5)):.4f})")
