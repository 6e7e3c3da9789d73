"""Build a per-NFT transaction network and read a wash-trade pattern off it.

Uses the "wash-trading" fixture: one trader buys eight NFTs at high prices,
dumps them all to an accomplice for 0 ETH, the accomplice passes them on by
transfer, and the final holder resells high. Each sale becomes a ring whose
inner/outer radii are the pre/post-trade prices normalized by the NFT's
maximum sale price, so the dump shows up as an outer radius of exactly 0.

Run:  python3 demos/activity_network.py
"""
import tempfile

from nftperf.fixtures import gen_fixture
from nftperf.ingestion import load_snapshot
from nftperf.network import build_transaction_network

with tempfile.TemporaryDirectory() as tmp:
    gen_fixture("wash-trading", tmp)
    snap = load_snapshot(tmp)

    net = build_transaction_network("w00", snap)
    print(f"focus NFT: {net.focus_token}")
    print(f"traders in the one-hop neighborhood: {len(net.trader_nodes)}")
    print(f"NFTs touched by those traders: {len(net.nft_nodes)}")

    colors = {t.color_key: t.address for t in net.trader_nodes}
    print("\nrings on each NFT (inner -> outer price fraction, buyer):")
    for node in net.nft_nodes:
        if not node.token_id.startswith("w"):
            continue
        parts = []
        for r in node.rings:
            flag = "shaded" if r.shaded else "solid"
            parts.append(f"{r.inner_fraction:.2f}->{r.outer_fraction:.2f} "
                         f"to {colors[r.buyer_color_key]} ({flag})")
        print(f"  {node.token_id}: " + "; ".join(parts))

    suspicious = [n.token_id for n in net.nft_nodes
                  if any(r.outer_fraction == 0.0 for r in n.rings)
                  and any(r.outer_fraction == 1.0 for r in n.rings)]
    print(f"\nNFTs showing a zero-price sale followed by a peak-price "
          f"resale: {sorted(suspicious)}")
