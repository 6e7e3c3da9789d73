import datetime as dt

import pytest

from nftperf.indicators import (
    WhalePolicy,
    classify_sale,
    day_of,
    floor_price_at,
    holders_count,
    market_series,
    nft_indicators,
    trader_indicators,
    valuation,
)
from nftperf.model import ActivityKind, UnknownToken
from nftperf.rarity import RarityScores

from .conftest import DAY, T0, act, nft, snapshot


# --------------------------------------------------------------------------
# independent naive per-day oracle: walks raw activities, no shared code

def naive_market_series(collection, day_from, day_to, wp):
    all_acts = []
    for n in collection.nfts:
        for i, a in enumerate(n.activities):
            all_acts.append((n.token_id, i, a))
    all_acts.sort(key=lambda e: (e[2].timestamp, e[0], e[1]))

    def holdings_before(target_tx):
        held = {}
        for token, _, a in all_acts:
            if a.tx_id == target_tx:
                return held
            if a.from_address:
                held.setdefault(a.from_address, set()).discard(token)
            held.setdefault(a.to_address, set()).add(token)
        raise KeyError(target_tx)

    def floor_on(day):
        best_day, best = None, 0.0
        for _, _, a in all_acts:
            d = day_of(a.timestamp)
            if a.kind is ActivityKind.SALE and d <= day:
                if best_day is None or d > best_day:
                    best_day, best = d, a.price_eth
                elif d == best_day:
                    best = min(best, a.price_eth)
        return best

    out = []
    d = day_from
    while d <= day_to:
        sales = [(t, a) for t, _, a in all_acts
                 if a.kind is ActivityKind.SALE and day_of(a.timestamp) == d]
        transfers = sum(1 for _, _, a in all_acts
                        if a.kind is ActivityKind.TRANSFER and day_of(a.timestamp) == d)
        vol = sum(a.price_eth for _, a in sales)
        floor = floor_on(d)
        cap = 0.0
        for n in collection.nfts:
            last = None
            for a in n.activities:
                if a.kind is ActivityKind.SALE and day_of(a.timestamp) <= d:
                    last = a.price_eth
            cap += last if last is not None else floor
        whale, normal = [], []
        for t, a in sales:
            held = holdings_before(a.tx_id)
            count = len(held.get(a.from_address, ()))
            (whale if count >= wp.min_holdings else normal).append(
                (a.timestamp, a.price_eth))
        out.append({
            "date": d, "market_cap": cap,
            "average_price": vol / len(sales) if sales else 0.0,
            "floor_price": floor, "volume": vol,
            "liquidity": len(sales) / len(collection.nfts) * 100.0,
            "sales": len(sales), "transfers": transfers,
            "whale_sales": sorted(whale), "normal_sales": sorted(normal),
        })
        d += dt.timedelta(days=1)
    return out


def test_market_series_matches_naive_oracle(big_snapshot):
    wp = WhalePolicy(min_holdings=4)
    stamps = [a.timestamp for n in big_snapshot.nfts for a in n.activities]
    d_from, d_to = day_of(min(stamps)), day_of(max(stamps))
    got = market_series(big_snapshot, d_from, d_to, wp)
    want = naive_market_series(big_snapshot, d_from, d_to, wp)
    assert len(got) == len(want)
    for g, w in zip(got, want):
        assert g.date == w["date"]
        assert g.market_cap == pytest.approx(w["market_cap"])
        assert g.average_price == pytest.approx(w["average_price"])
        assert g.floor_price == pytest.approx(w["floor_price"])
        assert g.volume == pytest.approx(w["volume"])
        assert g.liquidity == pytest.approx(w["liquidity"])
        assert g.sales == w["sales"]
        assert g.transfers == w["transfers"]
        assert g.whale_sales == w["whale_sales"]
        assert g.normal_sales == w["normal_sales"]


def test_big_fixture_has_200_activities(big_snapshot):
    assert sum(len(n.activities) for n in big_snapshot.nfts) == 200


def test_empty_day_conventions():
    s = snapshot([nft("t1", [act("mint", T0, to="a", tx="m"),
                             act("sale", T0 + DAY, 2.0, "a", "b", "s")])])
    series = market_series(s, day_of(T0), day_of(T0 + 3 * DAY))
    quiet = series[2]
    assert quiet.sales == 0 and quiet.transfers == 0
    assert quiet.volume == 0.0 and quiet.average_price == 0.0
    assert quiet.floor_price == 2.0  # carried forward
    assert series[0].floor_price == 0.0  # before the first sale ever


def test_liquidity_formula_100_nfts_5_sales():
    nfts = [nft(f"t{i:03d}", [act("mint", T0, to=f"a{i}", tx=f"m{i}")])
            for i in range(100)]
    sale_day = T0 + 10 * DAY
    for i in range(5):
        n = nfts[i]
        acts = list(n.activities) + [act("sale", sale_day + i, 1.0, f"a{i}",
                                         "buyer", f"s{i}")]
        nfts[i] = nft(n.token_id, acts)
    s = snapshot(nfts)
    series = market_series(s, day_of(sale_day), day_of(sale_day))
    assert series[0].liquidity == pytest.approx(5.0)
    assert series[0].sales == 5


def test_whale_normal_partition(big_snapshot):
    wp = WhalePolicy(min_holdings=4)
    series = market_series(big_snapshot,
                           day_of(min(a.timestamp for n in big_snapshot.nfts
                                      for a in n.activities)),
                           day_of(big_snapshot.snapshot_at), wp)
    for m in series:
        assert len(m.whale_sales) + len(m.normal_sales) == m.sales


def test_market_cap_changes_only_on_sale_days(big_snapshot):
    stamps = [a.timestamp for n in big_snapshot.nfts for a in n.activities]
    series = market_series(big_snapshot, day_of(min(stamps)), day_of(max(stamps)))
    prev = None
    for m in series:
        assert m.market_cap >= 0.0
        if prev is not None and m.sales == 0:
            assert m.market_cap == pytest.approx(prev)
        prev = m.market_cap


def test_nft_indicators_mint_only():
    as_of = T0 + 50 * DAY
    s = snapshot([nft("t1", [act("mint", T0, to="a", tx="m")])], snapshot_at=as_of)
    ind = nft_indicators("t1", s)
    assert ind.past_owners == 0
    assert ind.current_hold_time == as_of - T0
    assert ind.longest_hold_time == as_of - T0
    assert ind.last_price == 0.0


def test_nft_indicators_chain_past_owners():
    s = snapshot([nft("t1", [
        act("mint", T0, to="A", tx="m"),
        act("sale", T0 + DAY, 1.0, "A", "B", "s1"),
        act("sale", T0 + 2 * DAY, 2.0, "B", "C", "s2"),
    ])])
    ind = nft_indicators("t1", s)
    assert ind.past_owners == 2
    assert ind.last_price == 2.0


def test_nft_indicators_unknown_token():
    s = snapshot([nft("t1", [act("mint", T0, to="a", tx="m")])])
    with pytest.raises(UnknownToken):
        nft_indicators("zzz", s)


def test_price_rank_permutation():
    nfts = []
    for i in range(10):
        nfts.append(nft(f"t{i}", [
            act("mint", T0, to="a", tx=f"m{i}"),
            act("sale", T0 + DAY, float(i + 1), "a", "b", f"s{i}"),
        ]))
    s = snapshot(nfts)
    ranks = {n.token_id: nft_indicators(n.token_id, s).price_rank for n in nfts}
    assert sorted(ranks.values()) == list(range(1, 11))
    assert ranks["t9"] == 1 and ranks["t0"] == 10


def test_price_rank_never_sold_last():
    s = snapshot([
        nft("t1", [act("mint", T0, to="a", tx="m1"),
                   act("sale", T0 + DAY, 0.0, "a", "b", "s1")]),
        nft("t2", [act("mint", T0, to="a", tx="m2")]),
    ])
    assert nft_indicators("t1", s).price_rank == 1
    assert nft_indicators("t2", s).price_rank == 2


def test_sellers_pnl_wash_negative(wash_snapshot):
    # accumulate high then dump at 0: past sellers' realized legs are negative
    ind = nft_indicators("w00", wash_snapshot)
    # legs: minter +4.0, accumulator 0 - 4.0 = -4.0, accomplice -> (transfer)
    # reseller sells at high price with cost 0 after transfer-in
    assert ind.sellers_pnl == pytest.approx(
        4.0 + (0.0 - 4.0)
        + wash_snapshot.nft("w00").activities[-1].price_eth)


def test_wash_dumper_realized_pnl_negative(wash_snapshot):
    t = trader_indicators("0xblue", wash_snapshot)
    assert t.realized_pnl < 0.0


def test_trader_round_trip_pnl():
    s = snapshot([nft("t1", [
        act("mint", T0, to="m", tx="m0"),
        act("sale", T0 + DAY, 1.0, "m", "X", "s1"),
        act("sale", T0 + 2 * DAY, 3.0, "X", "Y", "s2"),
    ])])
    t = trader_indicators("X", s)
    assert t.pnl == pytest.approx(2.0)
    assert t.realized_pnl == pytest.approx(2.0)
    assert t.holding_value == 0.0


def test_transfer_in_cost_zero_unrealized():
    s = snapshot([
        nft("t1", [act("mint", T0, to="m", tx="m0"),
                   act("transfer", T0 + DAY, 0.0, "m", "X", "x1"),
                   act("sale", T0 + 2 * DAY, 5.0, "X", "Y", "s1"),
                   act("transfer", T0 + 3 * DAY, 0.0, "Y", "Z", "x2")]),
    ])
    z = trader_indicators("Z", s)
    assert z.unrealized_pnl == pytest.approx(5.0)  # valuation 5, cost 0
    assert z.holding_value == pytest.approx(5.0)


def test_pnl_telescoping(big_snapshot):
    traders = {a.from_address for n in big_snapshot.nfts for a in n.activities} | \
              {a.to_address for n in big_snapshot.nfts for a in n.activities}
    traders.discard("")
    for n in big_snapshot.nfts:
        kinds = {a.kind for a in n.activities}
        if ActivityKind.TRANSFER in kinds:
            continue
        sales = [a for a in n.activities if a.kind is ActivityKind.SALE]
        if not sales:
            continue
        single = snapshot([n], snapshot_at=big_snapshot.snapshot_at)
        total = sum(trader_indicators(t, single).realized_pnl for t in traders)
        mint_price = n.activities[0].price_eth
        assert total == pytest.approx(sales[-1].price_eth - mint_price)


def test_classify_sale_boundary():
    nfts = []
    for i in range(10):
        nfts.append(nft(f"h{i}", [act("mint", T0 + i, to="W", tx=f"hm{i}")]))
    target = nft("t1", [act("mint", T0, to="W", tx="m"),
                        act("sale", T0 + DAY, 1.0, "W", "b", "s")])
    s = snapshot(nfts + [target])
    sale = target.activities[1]
    assert classify_sale(sale, s, WhalePolicy(10)) == "whale"
    assert classify_sale(sale, s, WhalePolicy(12)) == "normal"


def test_classify_sale_accumulation_replay():
    # trader accumulates 12 tokens; sales before reaching 10 are normal,
    # afterwards whale
    nfts = []
    for i in range(12):
        nfts.append(nft(f"a{i:02d}", [
            act("mint", T0 + i * 3600, to="minter", tx=f"am{i}"),
            act("sale", T0 + DAY + i * 3600, 1.0, "minter", "ACC", f"ab{i}"),
        ]))
    early = nft("e1", [act("mint", T0, to="ACC", tx="em"),
                       act("sale", T0 + DAY + 3 * 3600 + 10, 1.0, "ACC", "x", "es")])
    late = nft("l1", [act("mint", T0, to="ACC", tx="lm"),
                      act("sale", T0 + 3 * DAY, 1.0, "ACC", "x", "ls")])
    s = snapshot(nfts + [early, late])
    assert classify_sale(early.activities[1], s, WhalePolicy(10)) == "normal"
    assert classify_sale(late.activities[1], s, WhalePolicy(10)) == "whale"


def test_ownership_conservation(big_snapshot):
    from nftperf.indicators import _replay_positions
    holder, _, _, _ = _replay_positions(big_snapshot, big_snapshot.snapshot_at)
    minted = sum(1 for n in big_snapshot.nfts if n.activities)
    per_trader = {}
    for token, h in holder.items():
        per_trader.setdefault(h, set()).add(token)
    assert sum(len(v) for v in per_trader.values()) == minted
    assert holders_count(big_snapshot) == len(per_trader)


def test_valuation_and_floor(big_snapshot):
    ts = big_snapshot.snapshot_at
    for n in big_snapshot.nfts[:10]:
        v = valuation(big_snapshot, n.token_id, ts)
        sales = [a.price_eth for a in n.activities
                 if a.kind is ActivityKind.SALE]
        if sales:
            assert v == sales[-1]
        else:
            assert v == floor_price_at(big_snapshot, ts)


def test_rarity_rank_fields():
    s = snapshot([nft("t1", [act("mint", T0, to="a", tx="m1")]),
                  nft("t2", [act("mint", T0, to="b", tx="m2")])])
    scores = [RarityScores("t1", 0.9, 0.1, 2), RarityScores("t2", 0.2, 0.8, 2)]
    i1 = nft_indicators("t1", s, rarity_scores=scores)
    i2 = nft_indicators("t2", s, rarity_scores=scores)
    assert i1.trait_rarity_rank == 1 and i2.trait_rarity_rank == 2
    assert i1.image_rarity_rank == 2 and i2.image_rarity_rank == 1
