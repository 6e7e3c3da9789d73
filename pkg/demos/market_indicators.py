"""Daily market indicators and per-trader accounting on a fixture.

Replays the "basic" fixture's activity history into a daily series (floor
price with carry-forward, market cap, volume, liquidity) and then inspects
one trader's realized and unrealized profit.

Run:  python3 demos/market_indicators.py
"""
import tempfile

from nftperf.fixtures import gen_fixture
from nftperf.indicators import (
    WhalePolicy,
    day_of,
    market_series,
    trader_indicators,
)
from nftperf.ingestion import load_snapshot

with tempfile.TemporaryDirectory() as tmp:
    gen_fixture("basic", tmp)
    snap = load_snapshot(tmp)

    stamps = [a.timestamp for n in snap.nfts for a in n.activities]
    series = market_series(snap, day_of(min(stamps)), day_of(snap.snapshot_at),
                           WhalePolicy(min_holdings=3))

    print(f"{'date':<12} {'cap':>8} {'floor':>7} {'vol':>7} {'liq%':>6} sales")
    for day in series:
        if day.sales == 0 and day.transfers == 0:
            continue  # keep the table to eventful days
        print(f"{day.date.isoformat():<12} {day.market_cap:>8.2f} "
              f"{day.floor_price:>7.2f} {day.volume:>7.2f} "
              f"{day.liquidity:>6.1f} {day.sales}")

    whale_days = [d for d in series if d.whale_sales]
    print(f"\ndays with whale-classified sales: {len(whale_days)}")

    addresses = sorted({a for n in snap.nfts for x in n.activities
                        for a in (x.from_address, x.to_address) if a})
    print(f"\n{'trader':<10} {'holding':>8} {'realized':>9} {'unrealized':>11}")
    for addr in addresses[:6]:
        t = trader_indicators(addr, snap)
        print(f"{addr:<10} {t.holding_value:>8.2f} {t.realized_pnl:>9.2f} "
              f"{t.unrealized_pnl:>11.2f}")
