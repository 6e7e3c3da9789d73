"""Market, per-NFT, and per-trader indicators derived from activity replay.

Days are UTC-midnight buckets. Valuation of an NFT at a time is its last
sale price on or before that time, falling back to the day's floor price,
falling back to 0. Floor price is the day's minimum sale price, carried
forward across saleless days, 0 before the first sale ever.
"""
from __future__ import annotations

import datetime as dt
from dataclasses import dataclass, field

from .model import (
    Activity,
    ActivityKind,
    CollectionSnapshot,
    EmptyRange,
)

SECONDS_PER_DAY = 86400


def day_of(ts: int) -> dt.date:
    return dt.datetime.fromtimestamp(ts, dt.timezone.utc).date()


def day_start(d: dt.date) -> int:
    return int(dt.datetime(d.year, d.month, d.day, tzinfo=dt.timezone.utc).timestamp())


def day_end(d: dt.date) -> int:
    return day_start(d) + SECONDS_PER_DAY - 1


@dataclass(frozen=True)
class WhalePolicy:
    min_holdings: int = 10

    def __post_init__(self):
        if self.min_holdings < 1:
            raise ValueError("min_holdings must be >= 1")


@dataclass
class MarketDaily:
    date: dt.date
    market_cap: float
    average_price: float
    floor_price: float
    volume: float
    liquidity: float  # percent: sales / #NFTs * 100
    sales: int
    transfers: int
    whale_sales: list = field(default_factory=list)  # (timestamp, price)
    normal_sales: list = field(default_factory=list)


@dataclass(frozen=True)
class NftIndicators:
    token_id: str
    past_owners: int
    current_hold_time: int  # seconds
    longest_hold_time: int  # seconds
    last_price: float
    price_rank: int
    trait_rarity_rank: int
    image_rarity_rank: int
    sellers_pnl: float


@dataclass(frozen=True)
class TraderIndicators:
    address: str
    holding_value: float
    pnl: float
    realized_pnl: float
    unrealized_pnl: float
    activity_count: int
    is_whale: bool


def _chronological(collection: CollectionSnapshot):
    """All activities across the collection in deterministic time order."""
    events = []
    for n in collection.nfts:
        for i, a in enumerate(n.activities):
            events.append((a.timestamp, n.token_id, i, a))
    events.sort(key=lambda e: (e[0], e[1], e[2]))
    return events


def _sale_classifier(collection: CollectionSnapshot, wp: WhalePolicy):
    """Map tx_id -> 'whale'/'normal' for every sale, by holdings replay."""
    holdings: dict = {}
    labels = {}
    for _, token, _, a in _chronological(collection):
        if a.kind is ActivityKind.SALE:
            count = len(holdings.get(a.from_address, ()))
            labels[a.tx_id] = "whale" if count >= wp.min_holdings else "normal"
        if a.from_address:
            holdings.get(a.from_address, set()).discard(token)
        holdings.setdefault(a.to_address, set()).add(token)
    return labels


def classify_sale(sale: Activity, collection: CollectionSnapshot,
                  wp: WhalePolicy = WhalePolicy()) -> str:
    """'whale' iff the seller held >= min_holdings NFTs just before the sale."""
    if sale.kind is not ActivityKind.SALE:
        raise ValueError("classify_sale expects a sale activity")
    return _sale_classifier(collection, wp)[sale.tx_id]


def _floor_by_day(collection: CollectionSnapshot) -> dict:
    """date -> min sale price that day (days with sales only)."""
    out: dict = {}
    for n in collection.nfts:
        for a in n.activities:
            if a.kind is ActivityKind.SALE:
                d = day_of(a.timestamp)
                out[d] = min(out.get(d, float("inf")), a.price_eth)
    return out


def floor_price_at(collection: CollectionSnapshot, ts: int) -> float:
    """Floor for the day containing ts, carry-forward, 0 before any sale."""
    by_day = _floor_by_day(collection)
    d = day_of(ts)
    candidates = [day for day in by_day if day <= d]
    if not candidates:
        return 0.0
    return by_day[max(candidates)]


def valuation(collection: CollectionSnapshot, token_id: str, ts: int) -> float:
    """Last sale price on or before ts, else that day's floor, else 0."""
    nft = collection.nft(token_id)
    last = None
    for a in nft.activities:
        if a.kind is ActivityKind.SALE and a.timestamp <= ts:
            last = a.price_eth
    if last is not None:
        return last
    return floor_price_at(collection, ts)


def market_series(collection: CollectionSnapshot, day_from: dt.date,
                  day_to: dt.date,
                  wp: WhalePolicy = WhalePolicy()) -> list:
    if day_from > day_to:
        raise EmptyRange(f"{day_from} > {day_to}")
    n_nfts = len(collection.nfts)
    labels = _sale_classifier(collection, wp)
    floor_by_day = _floor_by_day(collection)

    # last sale price per token, replayed day by day in event-time order
    sales_by_day: dict = {}
    transfers_by_day: dict = {}
    for _, token, _, a in _chronological(collection):
        d = day_of(a.timestamp)
        if a.kind is ActivityKind.SALE:
            sales_by_day.setdefault(d, []).append((token, a))
        elif a.kind is ActivityKind.TRANSFER:
            transfers_by_day[d] = transfers_by_day.get(d, 0) + 1

    all_days = sorted(set(floor_by_day) | set(transfers_by_day))
    last_price: dict = {}
    floor = 0.0
    out = []
    # replay any history strictly before the window so carry-forward state
    # is correct on the first emitted day
    for d in all_days:
        if d >= day_from:
            break
        floor = floor_by_day.get(d, floor)
        for token, a in sales_by_day.get(d, []):
            last_price[token] = a.price_eth

    d = day_from
    while d <= day_to:
        day_sales = sales_by_day.get(d, [])
        if d in floor_by_day:
            floor = floor_by_day[d]
        for token, a in day_sales:
            last_price[token] = a.price_eth
        volume = sum(a.price_eth for _, a in day_sales)
        n_sales = len(day_sales)
        whale = [(a.timestamp, a.price_eth) for _, a in day_sales
                 if labels[a.tx_id] == "whale"]
        normal = [(a.timestamp, a.price_eth) for _, a in day_sales
                  if labels[a.tx_id] == "normal"]
        cap = 0.0
        for n in collection.nfts:
            cap += last_price.get(n.token_id, floor)
        out.append(MarketDaily(
            date=d,
            market_cap=cap,
            average_price=volume / n_sales if n_sales else 0.0,
            floor_price=floor,
            volume=volume,
            liquidity=(n_sales / n_nfts * 100.0) if n_nfts else 0.0,
            sales=n_sales,
            transfers=transfers_by_day.get(d, 0),
            whale_sales=sorted(whale),
            normal_sales=sorted(normal),
        ))
        d += dt.timedelta(days=1)
    return out


def _ownership_intervals(nft, as_of: int):
    """[(holder, start_ts, end_ts)] with the current interval ending at as_of."""
    acts = [a for a in nft.activities if a.timestamp <= as_of]
    intervals = []
    for i, a in enumerate(acts):
        end = acts[i + 1].timestamp if i + 1 < len(acts) else as_of
        intervals.append((a.to_address, a.timestamp, end))
    return intervals


def _price_ranks(collection: CollectionSnapshot, as_of: int) -> dict:
    """1-based descending rank of last sale price; never-sold rank last."""
    rows = []
    for n in collection.nfts:
        sales = [a.price_eth for a in n.activities
                 if a.kind is ActivityKind.SALE and a.timestamp <= as_of]
        rows.append((n.token_id, sales[-1] if sales else 0.0, bool(sales)))
    rows.sort(key=lambda r: (0 if r[2] else 1, -r[1], r[0]))
    return {token: i + 1 for i, (token, _, _) in enumerate(rows)}


def _rarity_ranks(rarity_scores, attr: str) -> dict:
    rows = sorted(rarity_scores, key=lambda s: (-getattr(s, attr), s.token_id))
    return {s.token_id: i + 1 for i, s in enumerate(rows)}


def nft_indicators(token_id: str, collection: CollectionSnapshot,
                   as_of: int | None = None,
                   rarity_scores=None) -> NftIndicators:
    as_of = collection.snapshot_at if as_of is None else as_of
    nft = collection.nft(token_id)  # raises UnknownToken
    acts = [a for a in nft.activities if a.timestamp <= as_of]

    intervals = _ownership_intervals(nft, as_of)
    if intervals:
        past = {holder for holder, _, _ in intervals[:-1]}
        cht = as_of - intervals[-1][1]
        lht = max(end - start for _, start, end in intervals)
    else:
        past, cht, lht = set(), 0, 0

    sales = [a for a in acts if a.kind is ActivityKind.SALE]
    last_price = sales[-1].price_eth if sales else 0.0

    # each past seller's realized leg on this NFT: sale price minus what
    # that seller paid to acquire it (0 for mint- and transfer-ins)
    sellers_pnl = 0.0
    cost = 0.0
    for a in acts:
        if a.kind is ActivityKind.MINT:
            cost = a.price_eth
        elif a.kind is ActivityKind.SALE:
            sellers_pnl += a.price_eth - cost
            cost = a.price_eth
        else:
            cost = 0.0

    trait_rank = image_rank = 0
    if rarity_scores is not None:
        trait_rank = _rarity_ranks(rarity_scores, "trait_rarity")[token_id]
        image_rank = _rarity_ranks(rarity_scores, "image_rarity")[token_id]

    return NftIndicators(
        token_id=token_id,
        past_owners=len(past),
        current_hold_time=cht,
        longest_hold_time=lht,
        last_price=last_price,
        price_rank=_price_ranks(collection, as_of)[token_id],
        trait_rarity_rank=trait_rank,
        image_rarity_rank=image_rank,
        sellers_pnl=sellers_pnl,
    )


def all_nft_indicators(collection: CollectionSnapshot, as_of: int | None = None,
                       rarity_scores=None) -> list:
    as_of = collection.snapshot_at if as_of is None else as_of
    price_ranks = _price_ranks(collection, as_of)
    trait_ranks = _rarity_ranks(rarity_scores, "trait_rarity") if rarity_scores else {}
    image_ranks = _rarity_ranks(rarity_scores, "image_rarity") if rarity_scores else {}
    out = []
    for n in collection.nfts:
        ind = nft_indicators(n.token_id, collection, as_of, None)
        out.append(NftIndicators(
            token_id=n.token_id,
            past_owners=ind.past_owners,
            current_hold_time=ind.current_hold_time,
            longest_hold_time=ind.longest_hold_time,
            last_price=ind.last_price,
            price_rank=price_ranks[n.token_id],
            trait_rarity_rank=trait_ranks.get(n.token_id, 0),
            image_rarity_rank=image_ranks.get(n.token_id, 0),
            sellers_pnl=ind.sellers_pnl,
        ))
    return out


def _replay_positions(collection: CollectionSnapshot, as_of: int):
    """Replay to as_of: (holder per token, cost basis per token,
    realized pnl per address, activity count per address)."""
    holder: dict = {}
    cost: dict = {}
    realized: dict = {}
    activity_count: dict = {}
    for ts, token, _, a in _chronological(collection):
        if ts > as_of:
            break
        for addr in (a.from_address, a.to_address):
            if addr:
                activity_count[addr] = activity_count.get(addr, 0) + 1
        if a.kind is ActivityKind.MINT:
            cost[token] = a.price_eth
        elif a.kind is ActivityKind.SALE:
            seller = a.from_address
            realized[seller] = realized.get(seller, 0.0) + a.price_eth - cost.get(token, 0.0)
            cost[token] = a.price_eth
        else:
            cost[token] = 0.0
        holder[token] = a.to_address
    return holder, cost, realized, activity_count


def trader_indicators(address: str, collection: CollectionSnapshot,
                      as_of: int | None = None,
                      wp: WhalePolicy = WhalePolicy()) -> TraderIndicators:
    as_of = collection.snapshot_at if as_of is None else as_of
    holder, cost, realized, activity_count = _replay_positions(collection, as_of)
    held = [t for t, h in holder.items() if h == address]
    hv = sum(valuation(collection, t, as_of) for t in held)
    unrealized = sum(valuation(collection, t, as_of) - cost.get(t, 0.0) for t in held)
    r = realized.get(address, 0.0)
    return TraderIndicators(
        address=address,
        holding_value=hv,
        pnl=r + unrealized,
        realized_pnl=r,
        unrealized_pnl=unrealized,
        activity_count=activity_count.get(address, 0),
        is_whale=len(held) >= wp.min_holdings,
    )


def holders_count(collection: CollectionSnapshot, as_of: int | None = None) -> int:
    as_of = collection.snapshot_at if as_of is None else as_of
    holder, _, _, _ = _replay_positions(collection, as_of)
    return len({h for h in holder.values() if h})
