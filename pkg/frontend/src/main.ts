/** Application shell: wires state transitions to fetches and re-renders. */

import { ApiClient, ApiError } from "./api.js";
import { buildListModel } from "./listModel.js";
import { buildMarketModel } from "./marketModel.js";
import { buildNetworkModel } from "./networkModel.js";
import { buildParcoordsModel } from "./parcoordsModel.js";
import { marketUrl, matrixUrl, networkUrl, nftsUrl } from "./query.js";
import {
  applyBrush,
  clearBrush,
  initialState,
  nextPage,
  selectCollection,
  selectionColor,
  setDateWindow,
  setSearch,
  setWTrait,
  toggleSelection,
  type ViewState,
} from "./state.js";
import type { IndicatorMatrix, NftsPage } from "./types.js";
import { renderListView } from "./views/list.js";
import { renderMarketView } from "./views/market.js";
import { renderNetworkView } from "./views/network.js";
import { renderParcoords } from "./views/parcoords.js";

const API_BASE = (globalThis as { NFTPERF_API_BASE?: string }).NFTPERF_API_BASE ?? "";

const api = new ApiClient(API_BASE);
let state: ViewState = initialState();
let listPages: NftsPage[] = [];
let matrix: IndicatorMatrix | null = null;

const el = (id: string) => document.getElementById(id)!;

function showError(err: unknown): void {
  const banner = el("error-banner");
  banner.textContent =
    err instanceof ApiError ? err.message : "request failed; data may be stale";
  banner.classList.remove("hidden");
  setTimeout(() => banner.classList.add("hidden"), 5000);
}

async function refreshMarket(): Promise<void> {
  try {
    const series = await api.market(marketUrl(API_BASE, state));
    renderMarketView(el("market-view"), buildMarketModel(series.days), {
      onWindowChange(from, to) {
        state = setDateWindow(state, from, to);
        void refreshMarket();
      },
    });
  } catch (err) {
    showError(err);
  }
}

function renderList(): void {
  renderListView(
    el("list-view"),
    buildListModel(listPages, state.wTrait, state.search),
    state.wTrait,
    state.search,
    {
      onWTrait(w) {
        state = setWTrait(state, w);
        void refreshList(true);
      },
      onSearch(text) {
        state = setSearch(state, text);
        renderList();
      },
      onMore() {
        state = nextPage(state);
        void refreshList(false);
      },
      onSelect(token) {
        state = toggleSelection(state, token);
        renderIndicators();
        renderList();
        void refreshNetwork(token);
      },
      imageUrl: (p) => api.imageUrl(p),
      selectionColor: (t) => selectionColor(state, t),
    },
  );
}

async function refreshList(reset: boolean): Promise<void> {
  if (reset) {
    state = { ...state, page: 0 };
    listPages = [];
  }
  try {
    listPages = [...listPages, await api.nfts(nftsUrl(API_BASE, state))];
    renderList();
  } catch (err) {
    showError(err);
  }
}

function renderIndicators(): void {
  if (!matrix) return;
  renderParcoords(el("indicator-view"), buildParcoordsModel(matrix, state), {
    onBrush(axis, min, max) {
      state = applyBrush(state, axis, min, max);
      void refreshList(true);
    },
    onClearBrush(axis) {
      state = clearBrush(state, axis);
      void refreshList(true);
    },
    onSelect(token) {
      state = toggleSelection(state, token);
      renderIndicators();
      renderList();
      void refreshNetwork(token);
    },
  });
}

async function refreshIndicators(): Promise<void> {
  try {
    matrix = await api.indicatorMatrix(matrixUrl(API_BASE, state));
    renderIndicators();
  } catch (err) {
    showError(err);
  }
}

async function refreshNetwork(token: string): Promise<void> {
  try {
    const payload = await api.activityNetwork(
      networkUrl(API_BASE, state, token),
    );
    renderNetworkView(el("activity-view"), buildNetworkModel(payload));
  } catch (err) {
    showError(err);
  }
}

async function boot(): Promise<void> {
  const picker = el("collection-picker") as HTMLSelectElement;
  const summaries = await api.collections();
  picker.replaceChildren(
    ...summaries.map((c) => {
      const opt = document.createElement("option");
      opt.value = c.id;
      opt.textContent = `${c.name} (${c.nft_count} NFTs)`;
      return opt;
    }),
  );
  picker.addEventListener("change", () => {
    state = selectCollection(state, picker.value);
    listPages = [];
    void Promise.all([refreshMarket(), refreshList(true), refreshIndicators()]);
  });
  if (summaries.length) {
    state = selectCollection(state, summaries[0].id);
    await Promise.all([refreshMarket(), refreshList(true), refreshIndicators()]);
  }
}

boot().catch(showError);
