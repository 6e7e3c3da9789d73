import numpy as np
import pytest

from nftperf.fixtures import gen_fixture
from nftperf.ingestion import load_snapshot
from nftperf.model import Activity, ActivityKind, CollectionSnapshot, NftRecord, trait_set

DAY = 86400
T0 = 1700006400  # UTC day boundary

# one verdict line per release criterion, emitted after the test summary
ACCEPTANCE_VERDICTS: list = []


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_VERDICTS:
        return
    terminalreporter.write_line("")
    terminalreporter.write_line("release criteria:")
    for line in ACCEPTANCE_VERDICTS:
        terminalreporter.write_line(line)


def act(kind, ts, price=0.0, frm="", to="", tx=""):
    return Activity(ActivityKind(kind), ts, price, frm, to, tx)


def nft(token, activities=(), traits=(), image="images/x.png"):
    return NftRecord(token, image, trait_set(traits), tuple(activities))


def snapshot(nfts, snapshot_at=T0 + 120 * DAY, cid="test"):
    return CollectionSnapshot(cid, "Test", "test collection", "https://x", T0,
                              snapshot_at, tuple(nfts))


@pytest.fixture(scope="session")
def basic_dir(tmp_path_factory):
    out = tmp_path_factory.mktemp("fx") / "basic"
    gen_fixture("basic", str(out))
    return str(out)


@pytest.fixture(scope="session")
def wash_dir(tmp_path_factory):
    out = tmp_path_factory.mktemp("fx7") / "wash"
    gen_fixture("wash-trading", str(out))
    return str(out)


@pytest.fixture(scope="session")
def ident_dir(tmp_path_factory):
    out = tmp_path_factory.mktemp("fxi") / "ident"
    gen_fixture("identical-images", str(out))
    return str(out)


@pytest.fixture(scope="session")
def basic_snapshot(basic_dir):
    return load_snapshot(basic_dir)


@pytest.fixture(scope="session")
def wash_snapshot(wash_dir):
    return load_snapshot(wash_dir)


def make_big_activity_snapshot(n_tokens=40, n_extra=160, seed=11):
    """Deterministic synthetic snapshot with 40 mints + 160 sales/transfers."""
    rng = np.random.default_rng(seed)
    traders = [f"0xt{i}" for i in range(12)]
    holders = {}
    acts = {f"b{i:03d}": [] for i in range(n_tokens)}
    for i, token in enumerate(sorted(acts)):
        minter = traders[int(rng.integers(len(traders)))]
        acts[token].append(act("mint", T0 + (i % 10) * DAY + 60 * i, 0.0, "",
                               minter, f"{token}-mint"))
        holders[token] = minter
    tokens = sorted(acts)
    ts = T0 + 10 * DAY
    for j in range(n_extra):
        token = tokens[int(rng.integers(n_tokens))]
        ts += int(rng.integers(1800, 6 * 3600))
        holder = holders[token]
        others = [t for t in traders if t != holder]
        to = others[int(rng.integers(len(others)))]
        if rng.random() < 0.75:
            price = round(float(rng.uniform(0.05, 12.0)), 3)
            acts[token].append(act("sale", ts, price, holder, to, f"x{j}"))
        else:
            acts[token].append(act("transfer", ts, 0.0, holder, to, f"x{j}"))
        holders[token] = to
    nfts = [nft(t, acts[t]) for t in tokens]
    return snapshot(nfts, snapshot_at=ts + DAY, cid="big")


@pytest.fixture(scope="session")
def big_snapshot():
    return make_big_activity_snapshot()
