import pytest

from nftperf.features import ScaleSpaceParams
from nftperf.model import RarityNotComputed, UnknownCollection
from nftperf.rarity import (
    RarityWeights,
    compute_collection_rarity,
    extract_collection_features,
)
from nftperf.storage import ListQuery, Store


@pytest.fixture(scope="module")
def store(tmp_path_factory, basic_dir, basic_snapshot):
    root = tmp_path_factory.mktemp("store")
    store = Store(str(root))
    store.put_snapshot(basic_dir)
    feats = extract_collection_features(
        basic_snapshot, basic_dir, ScaleSpaceParams(),
        cache=store.feature_cache("basic"), jobs=2)
    scores, pair_diffs = compute_collection_rarity(basic_snapshot, feats)
    store.save_rarity("basic", scores)
    store.save_pair_differences("basic", pair_diffs)
    return store


def test_put_get_roundtrip(store, basic_snapshot):
    assert store.get_snapshot("basic") == basic_snapshot


def test_get_unknown_collection(store):
    with pytest.raises(UnknownCollection):
        store.get_snapshot("nope")


def test_reput_replaces_atomically(tmp_path, basic_dir, basic_snapshot):
    store = Store(str(tmp_path))
    store.put_snapshot(basic_dir)
    store.put_snapshot(basic_dir)
    assert store.get_snapshot("basic") == basic_snapshot
    assert store.list_collections() == ["basic"]


def test_rarity_not_computed(tmp_path, basic_dir):
    store = Store(str(tmp_path))
    store.put_snapshot(basic_dir)
    with pytest.raises(RarityNotComputed):
        store.load_rarity("basic")
    with pytest.raises(RarityNotComputed):
        store.query_nfts("basic", ListQuery())


def test_rarity_roundtrip(store):
    scores = store.load_rarity("basic")
    assert len(scores) == 10
    for s in scores:
        assert 0.0 <= s.trait_rarity <= 1.0
        assert 0.0 <= s.image_rarity <= 1.0


def test_pair_differences_roundtrip(store):
    pd = store.load_pair_differences("basic")
    assert len(pd) == 10 * 9
    for (a, b), rec in pd.items():
        assert rec.token_a == a and rec.token_b == b
        for tag in "RGB":
            assert 0.0 <= rec.channel(tag) <= 1.0


def test_query_page_shape(store):
    page = store.query_nfts("basic", ListQuery())
    assert page["total"] == 10
    assert len(page["rows"]) == 10  # page_size 20 > collection size


def test_query_deterministic(store):
    q = ListQuery(weights=RarityWeights(0.3))
    assert store.query_nfts("basic", q) == store.query_nfts("basic", q)


def test_query_pagination_partition(store):
    seen = []
    page = 0
    while True:
        rows = store.query_nfts("basic", ListQuery(page=page, page_size=3))["rows"]
        if not rows:
            break
        seen.extend(r["token_id"] for r in rows)
        page += 1
    full = [r["token_id"] for r in store.query_nfts(
        "basic", ListQuery(page_size=200))["rows"]]
    assert seen == full
    assert len(set(seen)) == len(seen) == 10


def test_filter_zero_price(store):
    q = ListQuery(filters=(("last_price", 0.0, 0.0),))
    rows = store.query_nfts("basic", q)["rows"]
    assert rows  # never-sold tokens exist in the fixture
    assert all(r["last_price"] == 0.0 for r in rows)


def test_filters_independent_of_weights(store):
    f = (("last_price", 0.5, 10.0),)
    ids1 = {r["token_id"] for r in store.query_nfts(
        "basic", ListQuery(weights=RarityWeights(0.1), filters=f))["rows"]}
    ids2 = {r["token_id"] for r in store.query_nfts(
        "basic", ListQuery(weights=RarityWeights(0.9), filters=f))["rows"]}
    assert ids1 == ids2


def test_sort_by_trait_only_matches_weight_one(store):
    by_w1 = [r["token_id"] for r in store.query_nfts(
        "basic", ListQuery(weights=RarityWeights(1.0)))["rows"]]
    by_trait = [r["token_id"] for r in store.query_nfts(
        "basic", ListQuery(sort_key="trait_rarity"))["rows"]]
    assert by_w1 == by_trait


def test_bad_query_params():
    with pytest.raises(ValueError):
        ListQuery(sort_key="bogus")
    with pytest.raises(ValueError):
        ListQuery(filters=(("last_price", 5.0, 1.0),))
    with pytest.raises(ValueError):
        ListQuery(page_size=0)


def test_feature_cache_hit(store, basic_dir, basic_snapshot):
    # second extraction must hit the cache and return identical arrays
    import numpy as np
    params = ScaleSpaceParams()
    cache = store.feature_cache("basic")
    f1 = extract_collection_features(basic_snapshot, basic_dir, params, cache=cache)
    f2 = extract_collection_features(basic_snapshot, basic_dir, params, cache=cache)
    for t in f1:
        for tag in "RGB":
            assert np.array_equal(f1[t].channel(tag), f2[t].channel(tag))
