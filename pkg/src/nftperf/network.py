"""Logical transaction network for one NFT.

Related traders are every address in the focus NFT's activity log; one hop
out, every NFT those traders ever touched joins the graph. Sales become
concentric-ring descriptors (price-normalized radii, shaded when the price
later fell); transfers become ring-less clockwise markers. Layout is the
UI's job; this layer carries no coordinates.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .indicators import TraderIndicators, WhalePolicy, trader_indicators, valuation
from .model import ActivityKind, CollectionSnapshot


@dataclass(frozen=True)
class RingDescriptor:
    order_index: int  # position in the NFT's sale sequence, 0-based
    inner_fraction: float  # pre-trade price / max historical sale price
    outer_fraction: float  # this sale's price / max historical sale price
    buyer_color_key: int
    shaded: bool  # true iff the price fell after this transaction


@dataclass(frozen=True)
class TransferMarker:
    order_index: int  # position in the NFT's full activity sequence
    recipient_color_key: int


@dataclass
class NftNode:
    token_id: str
    rings: list = field(default_factory=list)
    transfer_markers: list = field(default_factory=list)


@dataclass
class TraderNode:
    address: str
    behavior_shapes: set  # subset of {"mint", "sale", "transfer"}
    color_key: int
    indicators: TraderIndicators


@dataclass
class TransactionNetwork:
    focus_token: str
    trader_nodes: list
    nft_nodes: list
    edges: list  # (trader_address, token_id, relation)


def ring_descriptors(activities, valuation_at_end: float,
                     color_keys: dict) -> tuple:
    """(rings, markers) for one NFT's ordered activity log.

    Ring radii are normalized by the max sale price in the log (all-zero
    sales give degenerate 0/0 rings). A ring is shaded iff the next sale
    price is strictly lower, or, for the final sale, iff the end-of-window
    valuation is strictly lower.
    """
    sales = [(i, a) for i, a in enumerate(activities)
             if a.kind is ActivityKind.SALE]
    max_price = max((a.price_eth for _, a in sales), default=0.0)

    def frac(p: float) -> float:
        return p / max_price if max_price > 0 else 0.0

    rings = []
    prev_price = activities[0].price_eth if activities and \
        activities[0].kind is ActivityKind.MINT else 0.0
    for j, (_, a) in enumerate(sales):
        if j + 1 < len(sales):
            shaded = sales[j + 1][1].price_eth < a.price_eth
        else:
            shaded = valuation_at_end < a.price_eth
        rings.append(RingDescriptor(
            order_index=j,
            inner_fraction=frac(prev_price),
            outer_fraction=frac(a.price_eth),
            buyer_color_key=color_keys[a.to_address],
            shaded=shaded,
        ))
        prev_price = a.price_eth

    markers = [TransferMarker(i, color_keys[a.to_address])
               for i, a in enumerate(activities)
               if a.kind is ActivityKind.TRANSFER]
    return rings, markers


def build_transaction_network(token_id: str, collection: CollectionSnapshot,
                              as_of: int | None = None,
                              wp: WhalePolicy = WhalePolicy()) -> TransactionNetwork:
    as_of = collection.snapshot_at if as_of is None else as_of
    focus = collection.nft(token_id)  # raises UnknownToken

    related = []
    for a in focus.activities:
        for addr in (a.from_address, a.to_address):
            if addr and addr not in related:
                related.append(addr)

    # one-hop expansion: every NFT a related trader ever touched
    nft_ids = [token_id]
    for n in collection.nfts:
        if n.token_id == token_id:
            continue
        touched = any(a.from_address in related or a.to_address in related
                      for a in n.activities)
        if touched:
            nft_ids.append(n.token_id)

    # color keys by first appearance: focus log first, then the expanded
    # NFTs in graph order, so secondary buyers/recipients resolve too
    color_keys: dict = {}
    shapes: dict = {}

    def visit(addr: str, kind: ActivityKind):
        if not addr:
            return
        if addr not in color_keys:
            color_keys[addr] = len(color_keys)
            shapes[addr] = set()
        shapes[addr].add(kind.value)

    for a in focus.activities:
        visit(a.from_address, a.kind)
        visit(a.to_address, a.kind)
    for tid in nft_ids[1:]:
        for a in collection.nft(tid).activities:
            visit(a.from_address, a.kind)
            visit(a.to_address, a.kind)

    nft_nodes = []
    edges = []
    for tid in nft_ids:
        nft = collection.nft(tid)
        acts = [a for a in nft.activities if a.timestamp <= as_of]
        rings, markers = ring_descriptors(
            acts, valuation(collection, tid, as_of), color_keys)
        nft_nodes.append(NftNode(tid, rings, markers))
        for a in acts:
            if a.kind is ActivityKind.MINT:
                edges.append((a.to_address, tid, "minted"))
            elif a.kind is ActivityKind.SALE:
                edges.append((a.from_address, tid, "sold"))
                edges.append((a.to_address, tid, "bought"))
            else:
                edges.append((a.from_address, tid, "transferred_out"))
                edges.append((a.to_address, tid, "transferred_in"))
        if acts:
            edges.append((acts[-1].to_address, tid, "holds"))

    trader_nodes = [
        TraderNode(
            address=addr,
            behavior_shapes=shapes[addr],
            color_key=key,
            indicators=trader_indicators(addr, collection, as_of, wp),
        )
        for addr, key in color_keys.items()
    ]
    return TransactionNetwork(token_id, trader_nodes, nft_nodes, edges)
