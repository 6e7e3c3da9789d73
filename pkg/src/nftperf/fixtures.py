"""Deterministic synthetic snapshot fixtures.

Scenarios:
    basic            small varied collection: sales chains, transfers, a
                     never-sold token, one all-unique-traits token
    wash-trading        wash-trading pattern: accumulate high, dump the lot at
                     0 ETH to an accomplice, transfer onward, resell high
    identical-images every token shares byte-identical image content
    basic3           3-token micro fixture (activity counts 2/3/1)

All output is a function of (scenario, seed): identical bytes across runs.
"""
from __future__ import annotations

import json
import os

import numpy as np
from PIL import Image

SCENARIOS = ("basic", "wash-trading", "identical-images", "basic3")

_DAY = 86400
_T0 = 1700006400  # 2023-11-15 00:00:00 UTC, a day boundary


def _textured(rng: np.random.Generator, size: int = 64) -> np.ndarray:
    """Blocky high-contrast texture with mild noise; rich in corners."""
    cells = max(2, size // 8)
    base = rng.random((cells, cells, 3))
    img = np.kron(base, np.ones((size // cells, size // cells, 1)))
    img = img[:size, :size]
    img += 0.05 * rng.standard_normal(img.shape)
    return np.clip(img, 0.0, 1.0)


def _save_png(img: np.ndarray, path: str) -> None:
    arr = np.round(img * 255.0).astype(np.uint8)
    Image.fromarray(arr, "RGB").save(path, format="PNG")


def _act(kind, day, price, frm, to, tx):
    return {"kind": kind, "timestamp": _T0 + day * _DAY + 3600,
            "price_eth": price, "from": frm, "to": to, "tx_id": tx}


def _write(out_dir: str, collection: dict, nfts: list) -> None:
    os.makedirs(os.path.join(out_dir, "images"), exist_ok=True)
    manifest = {"collection": collection, "nfts": nfts}
    with open(os.path.join(out_dir, "manifest.json"), "w") as f:
        json.dump(manifest, f, indent=1, sort_keys=True)
        f.write("\n")


def _collection(cid: str, name: str, span_days: int) -> dict:
    return {
        "id": cid,
        "name": name,
        "description": f"synthetic fixture collection ({cid})",
        "official_url": f"https://example.invalid/{cid}",
        "created_at": _T0,
        "snapshot_at": _T0 + span_days * _DAY,
    }


_TRAIT_VOCAB = {
    "background": ["red", "blue", "gold"],
    "body": ["ape", "robot", "ghost"],
    "hat": ["cap", "crown", "none"],
    "eyes": ["laser", "plain"],
}


def _traits_for(i: int) -> list:
    types = sorted(_TRAIT_VOCAB)
    return [{"type": t, "value": _TRAIT_VOCAB[t][i % len(_TRAIT_VOCAB[t])]}
            for t in types]


def _gen_basic(out_dir: str, seed: int) -> None:
    rng = np.random.default_rng(seed)
    n = 10
    nfts = []
    traders = [f"0x{c}" for c in "abcdefgh"]
    for i in range(n):
        token = f"t{i:02d}"
        _save_png(_textured(rng), os.path.join(out_dir, "images", f"{token}.png"))
        if i == 9:
            traits = [{"type": "background", "value": "void"},
                      {"type": "aura", "value": "singular"}]
        else:
            traits = _traits_for(i)
        # token 9's minter touches nothing else: a truly isolated holder
        minter = "0xsolo" if i == 9 else traders[i % 4]
        acts = [_act("mint", i, 0.0, "", minter, f"{token}-mint")]
        if i < 7:  # sale chain, no transfers: telescoping-friendly
            prices = [round(float(p), 3)
                      for p in np.round(rng.uniform(0.5, 8.0, size=2 + i % 2), 3)]
            holder = minter
            for j, p in enumerate(prices):
                buyer = traders[(i + j + 1) % len(traders)]
                acts.append(_act("sale", 10 + i + 5 * j, p, holder, buyer,
                                 f"{token}-sale{j}"))
                holder = buyer
        elif i == 7:  # sale then transfer
            acts.append(_act("sale", 20, 3.2, minter, traders[5], f"{token}-sale0"))
            acts.append(_act("transfer", 30, 0.0, traders[5], traders[6],
                             f"{token}-xfer0"))
        # i == 8, 9: never sold (token 8 transferred once, token 9 only minted)
        if i == 8:
            acts.append(_act("transfer", 25, 0.0, minter, traders[7], f"{token}-xfer0"))
        nfts.append({"token_id": token, "image": f"images/{token}.png",
                     "traits": traits, "activities": acts})
    _write(out_dir, _collection("basic", "Basic Fixture", 60), nfts)


def _gen_wash_trading(out_dir: str, seed: int) -> None:
    rng = np.random.default_rng(seed)
    blue, yellow, green = "0xblue", "0xyellow", "0xgreen"
    nfts = []
    for i in range(8):
        token = f"w{i:02d}"
        _save_png(_textured(rng), os.path.join(out_dir, "images", f"{token}.png"))
        minter = f"0xminter{i}"
        outsider = f"0xbuyer{i}"
        acts = [
            _act("mint", 0, 0.0, "", minter, f"{token}-mint"),
            # accumulate at high prices
            _act("sale", 2 + i, round(4.0 + 0.5 * i, 3), minter, blue,
                 f"{token}-buyhigh"),
            # dump the lot to the accomplice at 0 ETH
            _act("sale", 20, 0.0, blue, yellow, f"{token}-dump"),
            # move onward without a sale
            _act("transfer", 25, 0.0, yellow, green, f"{token}-xfer"),
            # resell high to outsiders
            _act("sale", 30 + i, round(9.0 + float(rng.uniform(0, 2)), 3),
                 green, outsider, f"{token}-resell"),
        ]
        nfts.append({"token_id": token, "image": f"images/{token}.png",
                     "traits": _traits_for(0), "activities": acts})
    # two bystander tokens with ordinary history
    for i in range(2):
        token = f"n{i:02d}"
        _save_png(_textured(rng), os.path.join(out_dir, "images", f"{token}.png"))
        acts = [
            _act("mint", 1, 0.0, "", f"0xcollector{i}", f"{token}-mint"),
            _act("sale", 15 + i, round(2.0 + i, 3), f"0xcollector{i}",
                 f"0xfan{i}", f"{token}-sale0"),
        ]
        nfts.append({"token_id": token, "image": f"images/{token}.png",
                     "traits": _traits_for(i + 1), "activities": acts})
    _write(out_dir, _collection("wash-trading", "Wash Pattern Fixture", 45), nfts)


def _gen_identical_images(out_dir: str, seed: int) -> None:
    rng = np.random.default_rng(seed)
    img = _textured(rng)
    nfts = []
    for i in range(5):
        token = f"s{i:02d}"
        _save_png(img, os.path.join(out_dir, "images", f"{token}.png"))
        acts = [_act("mint", i, 0.0, "", f"0xowner{i}", f"{token}-mint")]
        nfts.append({"token_id": token, "image": f"images/{token}.png",
                     "traits": _traits_for(i), "activities": acts})
    _write(out_dir, _collection("identical-images", "Identical Images Fixture", 30),
           nfts)


def _gen_basic3(out_dir: str, seed: int) -> None:
    rng = np.random.default_rng(seed)
    specs = [
        ("a01", [_act("mint", 0, 0.0, "", "0xm1", "a01-mint"),
                 _act("sale", 5, 1.5, "0xm1", "0xp", "a01-sale0")]),
        ("a02", [_act("mint", 1, 0.0, "", "0xm2", "a02-mint"),
                 _act("sale", 6, 2.0, "0xm2", "0xq", "a02-sale0"),
                 _act("transfer", 9, 0.0, "0xq", "0xr", "a02-xfer0")]),
        ("a03", [_act("mint", 2, 0.0, "", "0xm3", "a03-mint")]),
    ]
    nfts = []
    for i, (token, acts) in enumerate(specs):
        _save_png(_textured(rng, 24), os.path.join(out_dir, "images", f"{token}.png"))
        nfts.append({"token_id": token, "image": f"images/{token}.png",
                     "traits": _traits_for(i), "activities": acts})
    _write(out_dir, _collection("basic3", "Three Token Fixture", 20), nfts)


_GENERATORS = {
    "basic": _gen_basic,
    "wash-trading": _gen_wash_trading,
    "identical-images": _gen_identical_images,
    "basic3": _gen_basic3,
}


def gen_fixture(scenario: str, out_dir: str, seed: int = 7) -> str:
    if scenario not in _GENERATORS:
        raise ValueError(f"unknown scenario {scenario!r}; choose from {SCENARIOS}")
    os.makedirs(os.path.join(out_dir, "images"), exist_ok=True)
    _GENERATORS[scenario](out_dir, seed)
    return out_dir
