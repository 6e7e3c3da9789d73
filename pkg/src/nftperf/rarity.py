"""Trait rarity, image rarity, and the weighted combination.

Trait rarity of a token is the mean trait-set dissimilarity (1 - Jaccard)
against every token in the collection, itself included (the self term is 0).
Image rarity averages the per-channel descriptor no-match ratio the same way.
"""
from __future__ import annotations

import hashlib
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

from .features import (
    MatchParams,
    ScaleSpaceParams,
    extract_features,
    load_image_rgb,
    match_features,
)
from .model import CollectionSnapshot, MissingFeatures

CHANNELS = ("R", "G", "B")


@dataclass(frozen=True)
class RarityScores:
    token_id: str
    trait_rarity: float
    image_rarity: float
    collection_size: int


@dataclass(frozen=True)
class PairDifference:
    token_a: str
    token_b: str
    dif_r: float
    dif_g: float
    dif_b: float

    def channel(self, tag: str) -> float:
        return {"R": self.dif_r, "G": self.dif_g, "B": self.dif_b}[tag]


@dataclass(frozen=True)
class RarityWeights:
    w_trait: float = 0.5

    def __post_init__(self):
        if not 0.0 <= self.w_trait <= 1.0:
            raise ValueError("w_trait must be in [0, 1]")

    @property
    def w_image(self) -> float:
        return 1.0 - self.w_trait


def jaccard_similarity(tx: frozenset, ty: frozenset) -> float:
    """|Tx n Ty| / |Tx u Ty|; two empty sets count as identical (1)."""
    if not tx and not ty:
        return 1.0
    inter = len(tx & ty)
    return inter / (len(tx) + len(ty) - inter)


def trait_rarity(token_id: str, collection: CollectionSnapshot) -> float:
    target = collection.nft(token_id)  # raises UnknownToken
    m = len(collection.nfts)
    total = sum(1.0 - jaccard_similarity(target.traits, other.traits)
                for other in collection.nfts)
    return total / m


def image_difference(z: str, y: str, channel: str, features: dict,
                     mp: MatchParams = MatchParams()) -> float:
    """Directional no-match ratio of z's descriptors against y's, one channel."""
    try:
        dz = features[z].channel(channel)
        dy = features[y].channel(channel)
    except KeyError as exc:
        raise MissingFeatures(str(exc)) from exc
    return match_features(dz, dy, mp).no_match_ratio


def image_rarity(z: str, features: dict, mp: MatchParams = MatchParams()) -> float:
    """Mean per-channel difference of z against every token, itself included."""
    if z not in features:
        raise MissingFeatures(z)
    m = len(features)
    total = 0.0
    for other in features:
        for ch in CHANNELS:
            total += image_difference(z, other, ch, features, mp)
    return total / (3.0 * m)


def weighted_rarity(s: RarityScores, w: RarityWeights) -> float:
    return w.w_trait * s.trait_rarity + w.w_image * s.image_rarity


def image_content_hash(path: str) -> str:
    with open(path, "rb") as f:
        return hashlib.sha256(f.read()).hexdigest()[:16]


def extract_collection_features(collection: CollectionSnapshot, base_dir: str,
                                params: ScaleSpaceParams = ScaleSpaceParams(),
                                cache=None, jobs: int = 1) -> dict:
    """Per-token ChannelDescriptorSets, via the cache when entries match the
    (image content, params) key.

    `cache` needs get(image_hash, params_hash) and put(image_hash,
    params_hash, ChannelDescriptorSet); the storage module provides one.
    """
    import os

    phash = params.params_hash()

    def one(nft) -> tuple:
        path = os.path.join(base_dir, nft.image_ref)
        ihash = image_content_hash(path)
        if cache is not None:
            hit = cache.get(ihash, phash)
            if hit is not None:
                return nft.token_id, hit
        feats = extract_features(load_image_rgb(path), params)
        if cache is not None:
            cache.put(ihash, phash, feats)
        return nft.token_id, feats

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            pairs = list(pool.map(one, collection.nfts))
    else:
        pairs = [one(n) for n in collection.nfts]
    return dict(pairs)


def compute_pair_differences(features: dict, mp: MatchParams = MatchParams(),
                             jobs: int = 1) -> dict:
    """All ordered-pair channel differences: {(a, b): PairDifference}.

    Both directions are computed and stored; self pairs are exact zeros by
    the self-match property and are skipped.
    """
    tokens = sorted(features)
    pairs = [(a, b) for a in tokens for b in tokens if a != b]

    def one(ab):
        a, b = ab
        return ab, PairDifference(
            a, b,
            image_difference(a, b, "R", features, mp),
            image_difference(a, b, "G", features, mp),
            image_difference(a, b, "B", features, mp),
        )

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(one, pairs))
    else:
        results = [one(ab) for ab in pairs]
    return dict(results)


def image_rarity_from_pairs(z: str, tokens, pair_diffs: dict) -> float:
    m = len(tokens)
    total = 0.0
    for other in tokens:
        if other == z:
            continue  # self term is 0 but still counted in the divisor
        pd = pair_diffs[(z, other)]
        total += pd.dif_r + pd.dif_g + pd.dif_b
    return total / (3.0 * m)


def compute_collection_rarity(collection: CollectionSnapshot, features: dict,
                              mp: MatchParams = MatchParams(),
                              jobs: int = 1,
                              pair_diffs: dict | None = None) -> tuple:
    """(list of RarityScores in token order, pair-difference cache).

    Pairwise image work dominates; pass a precomputed pair_diffs cache to
    re-rank with new weights in O(m).
    """
    tokens = [n.token_id for n in collection.nfts]
    missing = [t for t in tokens if t not in features]
    if missing:
        raise MissingFeatures(f"no features for tokens: {missing}")
    if pair_diffs is None:
        pair_diffs = compute_pair_differences(features, mp, jobs=jobs)
    m = len(tokens)
    scores = []
    for t in tokens:
        scores.append(RarityScores(
            token_id=t,
            trait_rarity=trait_rarity(t, collection),
            image_rarity=image_rarity_from_pairs(t, tokens, pair_diffs),
            collection_size=m,
        ))
    return scores, pair_diffs


def ranked(scores, w: RarityWeights) -> list:
    """Descending weighted rarity, ties broken by ascending token_id."""
    return sorted(scores, key=lambda s: (-weighted_rarity(s, w), s.token_id))


def scores_to_csv(scores) -> str:
    lines = ["token_id,trait_rarity,image_rarity"]
    for s in scores:
        lines.append(f"{s.token_id},{s.trait_rarity:.6f},{s.image_rarity:.6f}")
    return "\n".join(lines) + "\n"
