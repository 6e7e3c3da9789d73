"""Snapshot loading, validation, and the mock remote client.

A snapshot is a directory with manifest.json plus an images/ subdirectory.
Loading is strict about structural problems (missing manifest, unsorted
activities, broken image refs) and lenient about normalizable ones (a priced
transfer is zeroed with a warning Violation).
"""
from __future__ import annotations

import json
import os
from typing import Optional

from PIL import Image

from .model import (
    Activity,
    ActivityKind,
    ActivityOrderViolation,
    BrokenImageRef,
    CollectionSnapshot,
    MalformedManifest,
    MissingManifest,
    NftRecord,
    RemoteSchemaMismatch,
    Unreachable,
    Violation,
    trait_set,
)

_REQUIRED_COLLECTION_FIELDS = (
    "id", "name", "description", "official_url", "created_at", "snapshot_at",
)


def _parse_activity(raw: dict, token_id: str) -> Activity:
    try:
        kind = ActivityKind(raw["kind"])
        price = float(raw.get("price_eth", 0.0))
        return Activity(
            kind=kind,
            timestamp=int(raw["timestamp"]),
            price_eth=price,
            from_address=str(raw.get("from", "")),
            to_address=str(raw["to"]),
            tx_id=str(raw.get("tx_id", "")),
        )
    except (KeyError, ValueError, TypeError) as exc:
        raise MalformedManifest(f"token {token_id}: bad activity record: {exc}") from exc


def _check_activity_order(token_id: str, activities) -> None:
    if not activities:
        return
    if activities[0].kind is not ActivityKind.MINT:
        raise ActivityOrderViolation(
            f"token {token_id}: first activity must be a mint, got {activities[0].kind.value}")
    for i in range(1, len(activities)):
        if activities[i].kind is ActivityKind.MINT:
            raise ActivityOrderViolation(f"token {token_id}: mint at position {i}")
        if activities[i].timestamp < activities[i - 1].timestamp:
            raise ActivityOrderViolation(
                f"token {token_id}: activities out of order at position {i}")


def load_snapshot(path: str, warnings: Optional[list] = None) -> CollectionSnapshot:
    """Load and validate a snapshot directory.

    Normalization warnings (e.g. priced transfers zeroed) are appended to
    `warnings` when given. Hard structural problems raise.
    """
    manifest_path = os.path.join(path, "manifest.json")
    if not os.path.isfile(manifest_path):
        raise MissingManifest(manifest_path)
    try:
        with open(manifest_path) as f:
            doc = json.load(f)
    except json.JSONDecodeError as exc:
        raise MalformedManifest(f"{manifest_path}:{exc.lineno}: {exc.msg}") from exc

    if not isinstance(doc, dict) or "collection" not in doc or "nfts" not in doc:
        raise MalformedManifest("manifest must contain 'collection' and 'nfts'")
    coll = doc["collection"]
    for field in _REQUIRED_COLLECTION_FIELDS:
        if field not in coll:
            raise MalformedManifest(f"collection missing field '{field}'")

    nfts = []
    broken = []
    for raw in doc["nfts"]:
        try:
            token_id = str(raw["token_id"])
            image_ref = str(raw["image"])
            traits = trait_set((t["type"], t["value"]) for t in raw.get("traits", []))
        except (KeyError, TypeError) as exc:
            raise MalformedManifest(f"bad nft record: {exc}") from exc

        activities = [_parse_activity(a, token_id) for a in raw.get("activities", [])]
        _check_activity_order(token_id, activities)

        normalized = []
        for a in activities:
            if a.kind is ActivityKind.TRANSFER and a.price_eth != 0.0:
                if warnings is not None:
                    warnings.append(Violation(
                        token_id, "transfer-unpriced",
                        f"transfer {a.tx_id} had price {a.price_eth}, normalized to 0"))
                a = Activity(a.kind, a.timestamp, 0.0, a.from_address, a.to_address, a.tx_id)
            normalized.append(a)

        img_path = os.path.join(path, image_ref)
        if not _image_decodable(img_path):
            broken.append(token_id)
        nfts.append(NftRecord(token_id, image_ref, traits, tuple(normalized)))

    if broken:
        raise BrokenImageRef(broken)

    snapshot = CollectionSnapshot(
        collection_id=str(coll["id"]),
        name=str(coll["name"]),
        description=str(coll["description"]),
        official_url=str(coll["official_url"]),
        created_at=int(coll["created_at"]),
        snapshot_at=int(coll["snapshot_at"]),
        nfts=tuple(nfts),
    )
    if not snapshot.collection_id:
        raise MalformedManifest("collection id must be non-empty")
    return snapshot


def _image_decodable(path: str) -> bool:
    try:
        with Image.open(path) as im:
            im.load()
        return True
    except Exception:
        return False


def validate_snapshot(s: CollectionSnapshot) -> list:
    """Check every invariant; returns Violations instead of raising."""
    out = []
    if not s.collection_id:
        out.append(Violation("", "collection-id", "collection id is empty"))
    seen = set()
    for n in s.nfts:
        if n.token_id in seen:
            out.append(Violation(n.token_id, "unique-token-id",
                                 f"duplicate token id {n.token_id}"))
        seen.add(n.token_id)

        acts = n.activities
        if acts:
            if acts[0].kind is not ActivityKind.MINT:
                out.append(Violation(n.token_id, "first-activity-mint",
                                     "first activity is not a mint"))
            if acts[0].from_address:
                out.append(Violation(n.token_id, "mint-from-empty",
                                     "mint has a non-empty from address"))
        for i, a in enumerate(acts):
            if a.timestamp > s.snapshot_at:
                out.append(Violation(n.token_id, "snapshot-at-bound",
                                     f"activity {a.tx_id} after snapshot_at"))
            if a.price_eth < 0:
                out.append(Violation(n.token_id, "price-nonnegative",
                                     f"activity {a.tx_id} has negative price"))
            if a.kind is ActivityKind.TRANSFER and a.price_eth != 0:
                out.append(Violation(n.token_id, "transfer-unpriced",
                                     f"transfer {a.tx_id} has nonzero price"))
            if not a.to_address:
                out.append(Violation(n.token_id, "to-address-nonempty",
                                     f"activity {a.tx_id} has empty to address"))
            if i > 0:
                if a.timestamp < acts[i - 1].timestamp:
                    out.append(Violation(n.token_id, "activities-sorted",
                                         f"activity {a.tx_id} out of order"))
                if a.from_address != acts[i - 1].to_address:
                    out.append(Violation(n.token_id, "ownership-chain",
                                         f"activity {a.tx_id} breaks the holder chain"))
                if a.kind is ActivityKind.MINT:
                    out.append(Violation(n.token_id, "single-mint",
                                         "mint after the first activity"))
    return out


class MockRemoteClient:
    """Stand-in for a platform API: serves snapshot directories from disk.

    Each collection id maps to `<base_dir>/<collection_id>/` holding the
    standard snapshot layout.
    """

    def __init__(self, base_dir: str):
        self.base_dir = base_dir

    def fetch(self, collection_id: str) -> CollectionSnapshot:
        path = os.path.join(self.base_dir, collection_id)
        if not os.path.isdir(path):
            raise Unreachable(f"collection {collection_id!r} not found at {path}")
        try:
            return load_snapshot(path)
        except (MissingManifest, MalformedManifest) as exc:
            raise RemoteSchemaMismatch(str(exc)) from exc


def fetch_remote(client: MockRemoteClient, collection_id: str) -> CollectionSnapshot:
    """Fetch a collection through a remote client; same contract as load_snapshot."""
    return client.fetch(collection_id)
