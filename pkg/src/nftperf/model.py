"""Core domain types shared by every module.

All types are immutable; computations elsewhere treat a snapshot as a value.
Timestamps are integer UTC seconds. Prices are ETH floats (non-negative).
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum


class ActivityKind(str, Enum):
    MINT = "mint"
    SALE = "sale"
    TRANSFER = "transfer"


# A trait set is a set of (trait_type, trait_value) pairs.
TraitSet = frozenset


def trait_set(pairs) -> TraitSet:
    """Build a TraitSet from an iterable of (type, value) pairs."""
    return frozenset((str(t), str(v)) for t, v in pairs)


@dataclass(frozen=True)
class Activity:
    kind: ActivityKind
    timestamp: int
    price_eth: float
    from_address: str  # empty for mint
    to_address: str
    tx_id: str


@dataclass(frozen=True)
class NftRecord:
    token_id: str
    image_ref: str  # relative path inside the snapshot directory
    traits: TraitSet
    activities: tuple = ()


@dataclass(frozen=True)
class CollectionSnapshot:
    collection_id: str
    name: str
    description: str
    official_url: str
    created_at: int
    snapshot_at: int
    nfts: tuple = ()

    def nft(self, token_id: str) -> NftRecord:
        for n in self.nfts:
            if n.token_id == token_id:
                return n
        raise UnknownToken(token_id)


@dataclass(frozen=True)
class Violation:
    """One broken invariant; data, not an exception."""
    token_id: str  # "" for collection-level rules
    rule: str
    message: str


def current_holder(nft: NftRecord) -> str:
    """Address holding the NFT after replaying its activity log ('' if unminted)."""
    if not nft.activities:
        return ""
    return nft.activities[-1].to_address


# ---------------------------------------------------------------------------
# Errors

class NftPerfError(Exception):
    """Base class for all workbench errors."""


class MissingManifest(NftPerfError):
    pass


class MalformedManifest(NftPerfError):
    pass


class BrokenImageRef(NftPerfError):
    def __init__(self, token_ids):
        self.token_ids = list(token_ids)
        super().__init__(f"undecodable or missing images for tokens: {self.token_ids}")


class ActivityOrderViolation(NftPerfError):
    pass


class Unreachable(NftPerfError):
    pass


class RemoteSchemaMismatch(NftPerfError):
    pass


class UndecodableImage(NftPerfError):
    pass


class UnknownToken(NftPerfError):
    pass


class MissingFeatures(NftPerfError):
    pass


class UnknownCollection(NftPerfError):
    pass


class RarityNotComputed(NftPerfError):
    pass


class EmptyRange(NftPerfError):
    pass
