/** Render model for the ranked NFT list with stacked rarity bars. */

import type { NftRow, NftsPage } from "./types.js";

export interface BarSegments {
  /** Width fraction of the trait segment: w * trait_rarity. */
  trait: number;
  /** Width fraction of the image segment: (1 - w) * image_rarity. */
  image: number;
}

export interface ListRow {
  tokenId: string;
  image: string;
  traits: { type: string; value: string }[];
  lastPrice: number;
  weightedRarity: number;
  bar: BarSegments;
}

export interface ListModel {
  rows: ListRow[];
  total: number;
  /** True while further pages exist; drives the More button. */
  moreVisible: boolean;
}

/** Every number comes straight from the payload; the only arithmetic is
 * the weighting split the stacked bar encodes. */
export function barSegments(row: NftRow, wTrait: number): BarSegments {
  return {
    trait: wTrait * row.trait_rarity,
    image: (1 - wTrait) * row.image_rarity,
  };
}

export function buildListModel(
  pages: NftsPage[],
  wTrait: number,
  search = "",
): ListModel {
  const last = pages[pages.length - 1];
  if (!last) return { rows: [], total: 0, moreVisible: false };
  const needle = search.trim().toLowerCase();
  const rows: ListRow[] = [];
  for (const page of pages) {
    for (const r of page.rows) {
      if (needle && !r.token_id.toLowerCase().includes(needle)) continue;
      rows.push({
        tokenId: r.token_id,
        image: r.image,
        traits: r.traits,
        lastPrice: r.last_price,
        weightedRarity: r.weighted_rarity,
        bar: barSegments(r, wTrait),
      });
    }
  }
  const fetched = pages.reduce((n, p) => n + p.rows.length, 0);
  return { rows, total: last.total, moreVisible: fetched < last.total };
}
