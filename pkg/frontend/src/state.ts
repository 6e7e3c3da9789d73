/** Application view state and its pure transition functions.
 *
 * Every transition returns a fresh state object so views can compare by
 * reference. Nothing in here touches the DOM or the network.
 */

export const SORT_KEYS = [
  "weighted_rarity",
  "trait_rarity",
  "image_rarity",
  "last_price",
  "token_id",
] as const;
export type SortKey = (typeof SORT_KEYS)[number];

/** Axes whose brushes can be forwarded to the list query as range filters. */
export const FILTERABLE_AXES = [
  "trait_rarity",
  "image_rarity",
  "last_price",
  "price_rank",
  "past_owners",
  "current_hold_time",
  "longest_hold_time",
  "sellers_pnl",
] as const;
export type FilterField = (typeof FILTERABLE_AXES)[number];

export interface RangeFilter {
  min?: number;
  max?: number;
}

export interface Selection {
  token: string;
  color: string;
}

export interface ViewState {
  collection: string | null;
  /** Shared by both market charts: their x-axes always show the same span. */
  dateWindow: { from: string | null; to: string | null };
  wTrait: number;
  sort: SortKey;
  desc: boolean;
  filters: Partial<Record<FilterField, RangeFilter>>;
  page: number;
  pageSize: number;
  search: string;
  selections: Selection[];
  hoveredToken: string | null;
}

export function initialState(): ViewState {
  return {
    collection: null,
    dateWindow: { from: null, to: null },
    wTrait: 0.5,
    sort: "weighted_rarity",
    desc: true,
    filters: {},
    page: 0,
    pageSize: 20,
    search: "",
    selections: [],
    hoveredToken: null,
  };
}

export function selectCollection(s: ViewState, id: string): ViewState {
  // a new collection invalidates everything derived from the old one
  return { ...initialState(), collection: id, wTrait: s.wTrait };
}

export function setDateWindow(
  s: ViewState,
  from: string | null,
  to: string | null,
): ViewState {
  return { ...s, dateWindow: { from, to } };
}

export function setWTrait(s: ViewState, w: number): ViewState {
  if (!(w >= 0 && w <= 1)) throw new RangeError(`w_trait out of [0,1]: ${w}`);
  return { ...s, wTrait: w, page: 0 };
}

export function setSort(s: ViewState, sort: SortKey, desc: boolean): ViewState {
  return { ...s, sort, desc, page: 0 };
}

export function setSearch(s: ViewState, text: string): ViewState {
  return { ...s, search: text };
}

/** Brushing a parallel-coordinates axis narrows the list to that range. */
export function applyBrush(
  s: ViewState,
  axis: FilterField,
  min: number,
  max: number,
): ViewState {
  if (min > max) throw new RangeError(`empty brush on ${axis}`);
  return { ...s, filters: { ...s.filters, [axis]: { min, max } }, page: 0 };
}

export function clearBrush(s: ViewState, axis: FilterField): ViewState {
  const filters = { ...s.filters };
  delete filters[axis];
  return { ...s, filters, page: 0 };
}

/** The list's More button requests the next page (rows are appended). */
export function nextPage(s: ViewState): ViewState {
  return { ...s, page: s.page + 1 };
}

const SELECTION_PALETTE = [
  "#e15759",
  "#4e79a7",
  "#f28e2b",
  "#76b7b2",
  "#59a14f",
  "#edc948",
  "#b07aa1",
  "#ff9da7",
];

/** Toggle a token's highlight; colors stay stable until deselection. */
export function toggleSelection(s: ViewState, token: string): ViewState {
  const existing = s.selections.find((x) => x.token === token);
  if (existing) {
    return { ...s, selections: s.selections.filter((x) => x.token !== token) };
  }
  const used = new Set(s.selections.map((x) => x.color));
  const color =
    SELECTION_PALETTE.find((c) => !used.has(c)) ??
    SELECTION_PALETTE[s.selections.length % SELECTION_PALETTE.length];
  return { ...s, selections: [...s.selections, { token, color }] };
}

export function selectionColor(s: ViewState, token: string): string | null {
  return s.selections.find((x) => x.token === token)?.color ?? null;
}
