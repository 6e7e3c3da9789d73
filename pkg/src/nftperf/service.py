"""Stateless read-only JSON API over a store directory.

All endpoints live under /api/v1; images are served from /images so the
browser UI needs a single origin. Handlers never mutate the store.
"""
from __future__ import annotations

import datetime as dt
import os

from fastapi import FastAPI, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import FileResponse, JSONResponse

from . import indicators as ind
from .indicators import WhalePolicy, day_of, day_end, holders_count, market_series
from .model import (
    NftPerfError,
    RarityNotComputed,
    UnknownCollection,
    UnknownToken,
)
from .network import build_transaction_network
from .rarity import RarityWeights
from .serialize import market_day_json, network_json
from .storage import FILTER_FIELDS, ListQuery, SORT_KEYS, Store

DEFAULT_AXES = ("trait_rarity", "image_rarity", "last_price", "price_rank",
                "past_owners", "current_hold_time", "longest_hold_time",
                "sellers_pnl")
_AXIS_UNITS = {
    "trait_rarity": "score", "image_rarity": "score", "last_price": "eth",
    "price_rank": "rank", "past_owners": "count", "current_hold_time": "seconds",
    "longest_hold_time": "seconds", "sellers_pnl": "eth",
}


def _err(status: int, code: str, message: str) -> JSONResponse:
    return JSONResponse(status_code=status,
                        content={"code": code, "message": message})


def _parse_day(value: str | None, fallback: dt.date) -> dt.date:
    if value is None:
        return fallback
    return dt.date.fromisoformat(value)


def _activity_span(snapshot) -> tuple:
    stamps = [a.timestamp for n in snapshot.nfts for a in n.activities]
    if not stamps:
        d = day_of(snapshot.snapshot_at)
        return d, d
    return day_of(min(stamps)), day_of(snapshot.snapshot_at)


def create_app(data_dir: str, axes=DEFAULT_AXES,
               cors_origins=("http://localhost:5173", "http://localhost:3000"),
               whale_policy: WhalePolicy = WhalePolicy()) -> FastAPI:
    store = Store(data_dir)
    app = FastAPI(title="nftperf", docs_url=None, redoc_url=None)
    app.add_middleware(
        CORSMiddleware, allow_origins=list(cors_origins),
        allow_methods=["GET"], allow_headers=["*"],
    )

    @app.exception_handler(UnknownCollection)
    async def _unknown_collection(request, exc):
        return _err(404, "unknown_collection", str(exc))

    @app.exception_handler(UnknownToken)
    async def _unknown_token(request, exc):
        return _err(404, "unknown_token", str(exc))

    @app.exception_handler(RarityNotComputed)
    async def _rarity_missing(request, exc):
        return _err(409, "rarity_not_computed", str(exc))

    @app.exception_handler(NftPerfError)
    async def _generic(request, exc):
        return _err(400, "bad_request", str(exc))

    @app.get("/api/v1/collections")
    def collections():
        out = []
        for cid in store.list_collections():
            s = store.get_snapshot(cid)
            span_from, span_to = _activity_span(s)
            series = market_series(s, span_from, span_to, whale_policy)
            volume = sum(m.volume for m in series)
            sales = sum(m.sales for m in series)
            n = len(s.nfts)
            out.append({
                "id": cid,
                "name": s.name,
                "description": s.description,
                "official_url": s.official_url,
                "nft_count": n,
                "holders": holders_count(s),
                "market_cap": series[-1].market_cap if series else 0.0,
                "volume": volume,
                "liquidity": (sales / n * 100.0) if n else 0.0,
            })
        return out

    @app.get("/api/v1/collections/{cid}/market")
    def market(cid: str, request: Request):
        s = store.get_snapshot(cid)
        span_from, span_to = _activity_span(s)
        try:
            d_from = _parse_day(request.query_params.get("from"), span_from)
            d_to = _parse_day(request.query_params.get("to"), span_to)
        except ValueError as exc:
            return _err(400, "bad_date", str(exc))
        if d_from > d_to:
            return _err(400, "bad_range", f"{d_from} > {d_to}")
        series = market_series(s, d_from, d_to, whale_policy)
        return {"schema": 1, "days": [market_day_json(m) for m in series]}

    @app.get("/api/v1/collections/{cid}/nfts")
    def nfts(cid: str, request: Request):
        qp = request.query_params
        try:
            sort_key = qp.get("sort", "weighted_rarity")
            if sort_key not in SORT_KEYS:
                return _err(400, "bad_sort", f"unknown sort key {sort_key!r}")
            w_trait = float(qp.get("w_trait", "0.5"))
            if not 0.0 <= w_trait <= 1.0:
                return _err(400, "bad_weight", "w_trait must be in [0, 1]")
            filters = []
            for key, value in qp.items():
                if not key.startswith("filter."):
                    continue
                _, fld, bound = key.split(".", 2)
                if fld not in FILTER_FIELDS or bound not in ("min", "max"):
                    return _err(400, "bad_filter", f"bad filter param {key!r}")
                existing = next((f for f in filters if f[0] == fld), None)
                if existing is None:
                    existing = [fld, None, None]
                    filters.append(existing)
                existing[1 if bound == "min" else 2] = float(value)
            q = ListQuery(
                sort_key=sort_key,
                descending=qp.get("desc", "true").lower() != "false",
                weights=RarityWeights(w_trait),
                filters=tuple(tuple(f) for f in filters),
                page=int(qp.get("page", "0")),
                page_size=int(qp.get("page_size", "20")),
            )
        except ValueError as exc:
            return _err(400, "bad_query", str(exc))
        return store.query_nfts(cid, q)

    @app.get("/api/v1/collections/{cid}/indicator-matrix")
    def indicator_matrix(cid: str, request: Request):
        s = store.get_snapshot(cid)
        scores = store.load_rarity(cid)
        try:
            to = request.query_params.get("to")
            as_of = day_end(dt.date.fromisoformat(to)) if to else s.snapshot_at
        except ValueError as exc:
            return _err(400, "bad_date", str(exc))
        as_of = min(as_of, s.snapshot_at)
        score_by_token = {sc.token_id: sc for sc in scores}
        rows = []
        for i in ind.all_nft_indicators(s, as_of, scores):
            sc = score_by_token.get(i.token_id)
            values = []
            for axis in axes:
                if axis in ("trait_rarity", "image_rarity"):
                    values.append(getattr(sc, axis) if sc else 0.0)
                else:
                    values.append(getattr(i, axis))
            rows.append({"token_id": i.token_id, "values": values})
        axis_descr = []
        for j, axis in enumerate(axes):
            col = [r["values"][j] for r in rows]
            axis_descr.append({
                "name": axis,
                "unit": _AXIS_UNITS.get(axis, ""),
                "min": min(col) if col else 0.0,
                "max": max(col) if col else 0.0,
            })
        return {"schema": 1, "axes": axis_descr, "rows": rows}

    @app.get("/api/v1/nfts/{cid}/{token}/activity-network")
    def activity_network(cid: str, token: str, request: Request):
        s = store.get_snapshot(cid)
        as_of_raw = request.query_params.get("as_of")
        try:
            as_of = int(as_of_raw) if as_of_raw else None
        except ValueError as exc:
            return _err(400, "bad_as_of", str(exc))
        net = build_transaction_network(token, s, as_of, whale_policy)
        nft = s.nft(token)
        payload = network_json(net)
        payload["image"] = f"/images/{cid}/{nft.image_ref}"
        payload["traits"] = sorted([list(t) for t in nft.traits])
        return payload

    @app.get("/images/{cid}/images/{filename}")
    def image(cid: str, filename: str):
        if "/" in filename or ".." in filename or ".." in cid or "/" in cid:
            return _err(400, "bad_path", "invalid image path")
        path = store.image_path(cid, os.path.join("images", filename))
        if not os.path.isfile(path):
            return _err(404, "unknown_image", filename)
        return FileResponse(path)

    return app
