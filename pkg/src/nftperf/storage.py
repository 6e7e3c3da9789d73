"""Embedded file-backed store: snapshots, feature caches, rarity scores,
pairwise differences, and the ranked/filtered/paginated list query.

Layout under the store root:
    collections/<id>/manifest.json      snapshot manifest
    collections/<id>/images/            image files
    collections/<id>/features/          descriptor cache, one .npz per
                                        (image hash, params hash)
    collections/<id>/rarity.csv         trait/image rarity per token
    collections/<id>/pairdiffs.bin      pairwise channel differences (npz)

Writes publish atomically by directory/file rename; readers always see a
complete version.
"""
from __future__ import annotations

import io
import os
import shutil
import tempfile
from dataclasses import dataclass, field

import numpy as np

from .features import ChannelDescriptorSet
from .indicators import all_nft_indicators
from .ingestion import load_snapshot, validate_snapshot
from .model import CollectionSnapshot, RarityNotComputed, UnknownCollection
from .rarity import PairDifference, RarityScores, RarityWeights, weighted_rarity

SORT_KEYS = ("weighted_rarity", "trait_rarity", "image_rarity", "last_price",
             "token_id")
FILTER_FIELDS = ("weighted_rarity", "trait_rarity", "image_rarity",
                 "last_price", "price_rank", "past_owners",
                 "current_hold_time", "longest_hold_time", "sellers_pnl")
MAX_PAGE_SIZE = 200


@dataclass(frozen=True)
class ListQuery:
    sort_key: str = "weighted_rarity"
    descending: bool = True
    weights: RarityWeights = field(default_factory=RarityWeights)
    filters: tuple = ()  # (field, min, max) inclusive ranges
    page: int = 0
    page_size: int = 20

    def __post_init__(self):
        if self.sort_key not in SORT_KEYS:
            raise ValueError(f"unknown sort key {self.sort_key!r}")
        if self.page_size < 1:
            raise ValueError("page_size must be >= 1")
        for f, lo, hi in self.filters:
            if f not in FILTER_FIELDS:
                raise ValueError(f"unknown filter field {f!r}")
            if lo is not None and hi is not None and lo > hi:
                raise ValueError(f"filter {f}: min > max")


class FeatureCache:
    """Descriptor cache keyed by (image content hash, params hash)."""

    def __init__(self, directory: str):
        self.directory = directory
        os.makedirs(directory, exist_ok=True)

    def _path(self, image_hash: str, params_hash: str) -> str:
        return os.path.join(self.directory, f"{image_hash}_{params_hash}.npz")

    def get(self, image_hash: str, params_hash: str):
        path = self._path(image_hash, params_hash)
        if not os.path.isfile(path):
            return None
        with np.load(path) as z:
            return ChannelDescriptorSet(z["r"], z["g"], z["b"])

    def put(self, image_hash: str, params_hash: str,
            feats: ChannelDescriptorSet) -> None:
        path = self._path(image_hash, params_hash)
        buf = io.BytesIO()
        np.savez(buf, r=feats.r, g=feats.g, b=feats.b)
        _atomic_write_bytes(path, buf.getvalue())


def _atomic_write_bytes(path: str, data: bytes) -> None:
    fd, tmp = tempfile.mkstemp(dir=os.path.dirname(path) or ".")
    try:
        with os.fdopen(fd, "wb") as f:
            f.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


class Store:
    def __init__(self, root: str):
        self.root = root
        os.makedirs(os.path.join(root, "collections"), exist_ok=True)

    def _coll_dir(self, collection_id: str) -> str:
        return os.path.join(self.root, "collections", collection_id)

    def list_collections(self) -> list:
        base = os.path.join(self.root, "collections")
        out = []
        for name in sorted(os.listdir(base)):
            if os.path.isfile(os.path.join(base, name, "manifest.json")):
                out.append(name)
        return out

    def put_snapshot(self, source_dir: str) -> str:
        """Validate and ingest a snapshot directory; replaces atomically."""
        snapshot = load_snapshot(source_dir)
        violations = validate_snapshot(snapshot)
        if violations:
            raise ValueError("snapshot has violations: "
                             + "; ".join(f"{v.token_id}:{v.rule}" for v in violations))
        target = self._coll_dir(snapshot.collection_id)
        staging = target + ".staging"
        if os.path.exists(staging):
            shutil.rmtree(staging)
        os.makedirs(staging)
        shutil.copy2(os.path.join(source_dir, "manifest.json"),
                     os.path.join(staging, "manifest.json"))
        src_images = os.path.join(source_dir, "images")
        if os.path.isdir(src_images):
            shutil.copytree(src_images, os.path.join(staging, "images"))
        if os.path.exists(target):
            # keep derived caches that survive a re-ingest of identical content
            for keep in ("features",):
                old = os.path.join(target, keep)
                if os.path.isdir(old):
                    shutil.copytree(old, os.path.join(staging, keep))
            old_dir = target + ".old"
            if os.path.exists(old_dir):
                shutil.rmtree(old_dir)
            os.rename(target, old_dir)
            os.rename(staging, target)
            shutil.rmtree(old_dir)
        else:
            os.rename(staging, target)
        return snapshot.collection_id

    def get_snapshot(self, collection_id: str) -> CollectionSnapshot:
        path = self._coll_dir(collection_id)
        if not os.path.isfile(os.path.join(path, "manifest.json")):
            raise UnknownCollection(collection_id)
        return load_snapshot(path)

    def collection_dir(self, collection_id: str) -> str:
        return self._coll_dir(collection_id)

    def image_path(self, collection_id: str, image_ref: str) -> str:
        return os.path.join(self._coll_dir(collection_id), image_ref)

    def feature_cache(self, collection_id: str) -> FeatureCache:
        return FeatureCache(os.path.join(self._coll_dir(collection_id), "features"))

    # -- rarity -------------------------------------------------------------

    def save_rarity(self, collection_id: str, scores) -> None:
        from .rarity import scores_to_csv
        path = os.path.join(self._coll_dir(collection_id), "rarity.csv")
        _atomic_write_bytes(path, scores_to_csv(scores).encode())

    def load_rarity(self, collection_id: str) -> list:
        path = os.path.join(self._coll_dir(collection_id), "rarity.csv")
        if not os.path.isfile(path):
            raise RarityNotComputed(collection_id)
        with open(path) as f:
            lines = [ln.strip() for ln in f if ln.strip()]
        rows = lines[1:]
        out = []
        for ln in rows:
            token, tr, ir = ln.split(",")
            out.append(RarityScores(token, float(tr), float(ir), len(rows)))
        return out

    def save_pair_differences(self, collection_id: str, pair_diffs: dict) -> None:
        tokens = sorted({a for a, _ in pair_diffs} | {b for _, b in pair_diffs})
        index = {t: i for i, t in enumerate(tokens)}
        m = len(tokens)
        mat = np.zeros((m, m, 3))
        for (a, b), pd in pair_diffs.items():
            mat[index[a], index[b]] = (pd.dif_r, pd.dif_g, pd.dif_b)
        buf = io.BytesIO()
        np.savez(buf, tokens=np.array(tokens), diffs=mat)
        path = os.path.join(self._coll_dir(collection_id), "pairdiffs.bin")
        _atomic_write_bytes(path, buf.getvalue())

    def load_pair_differences(self, collection_id: str) -> dict:
        path = os.path.join(self._coll_dir(collection_id), "pairdiffs.bin")
        if not os.path.isfile(path):
            return {}
        with np.load(path) as z:
            tokens = [str(t) for t in z["tokens"]]
            mat = z["diffs"]
        out = {}
        for i, a in enumerate(tokens):
            for j, b in enumerate(tokens):
                if i == j:
                    continue
                out[(a, b)] = PairDifference(a, b, *mat[i, j])
        return out

    # -- list query ---------------------------------------------------------

    def query_nfts(self, collection_id: str, q: ListQuery) -> dict:
        """One page of (nft summary, rarity, indicators) rows plus paging info."""
        snapshot = self.get_snapshot(collection_id)
        scores = {s.token_id: s for s in self.load_rarity(collection_id)}
        indicators = {i.token_id: i
                      for i in all_nft_indicators(
                          snapshot, rarity_scores=list(scores.values()))}

        rows = []
        for n in snapshot.nfts:
            s = scores.get(n.token_id)
            if s is None:
                raise RarityNotComputed(f"{collection_id}:{n.token_id}")
            ind = indicators[n.token_id]
            rows.append({
                "token_id": n.token_id,
                "image": n.image_ref,
                "traits": sorted([list(t) for t in n.traits]),
                "trait_rarity": s.trait_rarity,
                "image_rarity": s.image_rarity,
                "weighted_rarity": weighted_rarity(s, q.weights),
                "last_price": ind.last_price,
                "price_rank": ind.price_rank,
                "past_owners": ind.past_owners,
                "current_hold_time": ind.current_hold_time,
                "longest_hold_time": ind.longest_hold_time,
                "sellers_pnl": ind.sellers_pnl,
            })

        for fld, lo, hi in q.filters:
            rows = [r for r in rows
                    if (lo is None or r[fld] >= lo) and (hi is None or r[fld] <= hi)]

        sign = -1 if q.descending else 1
        if q.sort_key == "token_id":
            rows.sort(key=lambda r: r["token_id"], reverse=q.descending)
        else:
            rows.sort(key=lambda r: (sign * r[q.sort_key], r["token_id"]))

        size = min(q.page_size, MAX_PAGE_SIZE)
        start = q.page * size
        return {
            "total": len(rows),
            "page": q.page,
            "page_size": size,
            "rows": rows[start:start + size],
        }
