"""Record API payloads into tests/fixtures/ for the contract tests.

Builds three synthetic collections (the two bundled scenarios plus a
25-token collection so default pagination is exercised), serves them with
the in-process test client, and captures the JSON responses verbatim.

Run from this directory or the repo root:  python3 tests/record_payloads.py
"""
import json
import os
import tempfile

import numpy as np
from fastapi.testclient import TestClient

from nftperf.features import ScaleSpaceParams
from nftperf.fixtures import (
    _act,
    _collection,
    _save_png,
    _textured,
    _traits_for,
    _write,
    gen_fixture,
)
from nftperf.rarity import compute_collection_rarity, extract_collection_features
from nftperf.service import create_app
from nftperf.storage import Store

OUT = os.path.join(os.path.dirname(__file__), "fixtures")


def gen_list25(out_dir, seed=13):
    rng = np.random.default_rng(seed)
    os.makedirs(os.path.join(out_dir, "images"), exist_ok=True)
    nfts = []
    traders = [f"0xg{i}" for i in range(8)]
    for i in range(25):
        token = f"l{i:02d}"
        _save_png(_textured(rng, 24),
                  os.path.join(out_dir, "images", f"{token}.png"))
        minter = traders[i % len(traders)]
        acts = [_act("mint", i % 12, 0.0, "", minter, f"{token}-mint")]
        if i % 3 != 0:
            price = round(float(rng.uniform(0.2, 9.0)), 3)
            buyer = traders[(i + 3) % len(traders)]
            acts.append(_act("sale", 15 + i, price, minter, buyer,
                             f"{token}-sale0"))
        nfts.append({"token_id": token, "image": f"images/{token}.png",
                     "traits": _traits_for(i), "activities": acts})
    _write(out_dir, _collection("list25", "List Fixture", 60), nfts)


def main():
    os.makedirs(OUT, exist_ok=True)
    with tempfile.TemporaryDirectory() as tmp:
        sources = []
        for scenario in ("basic", "wash-trading"):
            path = os.path.join(tmp, scenario)
            gen_fixture(scenario, path)
            sources.append(path)
        list25 = os.path.join(tmp, "list25")
        gen_list25(list25)
        sources.append(list25)

        data = os.path.join(tmp, "data")
        store = Store(data)
        for src in sources:
            cid = store.put_snapshot(src)
            snap = store.get_snapshot(cid)
            feats = extract_collection_features(
                snap, store.collection_dir(cid), ScaleSpaceParams(),
                cache=store.feature_cache(cid), jobs=4)
            scores, pair_diffs = compute_collection_rarity(snap, feats, jobs=4)
            store.save_rarity(cid, scores)
            store.save_pair_differences(cid, pair_diffs)

        client = TestClient(create_app(data))

        def dump(name, path, params=None):
            r = client.get(path, params=params or {})
            assert r.status_code == 200, (path, r.status_code, r.text)
            with open(os.path.join(OUT, name), "w") as f:
                json.dump(r.json(), f, indent=1, sort_keys=True)
                f.write("\n")
            print(f"recorded {name}")

        dump("collections.json", "/api/v1/collections")
        dump("market-basic.json", "/api/v1/collections/basic/market")
        dump("nfts-list25-default.json", "/api/v1/collections/list25/nfts")
        dump("nfts-list25-page1.json", "/api/v1/collections/list25/nfts",
             {"page": "1"})
        dump("nfts-basic-w05.json", "/api/v1/collections/basic/nfts",
             {"w_trait": "0.5"})
        dump("indicator-matrix-basic.json",
             "/api/v1/collections/basic/indicator-matrix")
        dump("network-wash-w00.json",
             "/api/v1/nfts/wash-trading/w00/activity-network")
        dump("network-basic-t09.json",
             "/api/v1/nfts/basic/t09/activity-network")


if __name__ == "__main__":
    main()
