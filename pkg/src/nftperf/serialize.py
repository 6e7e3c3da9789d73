"""JSON payload builders shared by the HTTP service and the CLI."""
from __future__ import annotations


def market_day_json(m) -> dict:
    return {
        "date": m.date.isoformat(),
        "market_cap": m.market_cap,
        "average_price": m.average_price,
        "floor_price": m.floor_price,
        "volume": m.volume,
        "liquidity": m.liquidity,
        "sales": m.sales,
        "transfers": m.transfers,
        "whale_sales": [[ts, p] for ts, p in m.whale_sales],
        "normal_sales": [[ts, p] for ts, p in m.normal_sales],
    }


def network_json(net) -> dict:
    return {
        "schema": 1,
        "focus_token": net.focus_token,
        "trader_nodes": [{
            "address": t.address,
            "behavior_shapes": sorted(t.behavior_shapes),
            "color_key": t.color_key,
            "indicators": {
                "holding_value": t.indicators.holding_value,
                "pnl": t.indicators.pnl,
                "activity_count": t.indicators.activity_count,
                "is_whale": t.indicators.is_whale,
            },
        } for t in net.trader_nodes],
        "nft_nodes": [{
            "token_id": n.token_id,
            "rings": [{
                "order_index": r.order_index,
                "inner_fraction": r.inner_fraction,
                "outer_fraction": r.outer_fraction,
                "buyer_color_key": r.buyer_color_key,
                "shaded": r.shaded,
            } for r in n.rings],
            "transfer_markers": [{
                "order_index": m.order_index,
                "recipient_color_key": m.recipient_color_key,
            } for m in n.transfer_markers],
        } for n in net.nft_nodes],
        "edges": [{"trader": e[0], "token_id": e[1], "relation": e[2]}
                  for e in net.edges],
    }
