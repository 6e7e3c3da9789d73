/** Ranked NFT list: search box, weight slider, stacked rarity bars. */

import type { ListModel, ListRow } from "../listModel.js";

export interface ListViewCallbacks {
  onWTrait(w: number): void;
  onSearch(text: string): void;
  onMore(): void;
  onSelect(tokenId: string): void;
  imageUrl(path: string): string;
  selectionColor(tokenId: string): string | null;
}

const BAR_WIDTH = 140;

function rowElement(row: ListRow, cb: ListViewCallbacks): HTMLElement {
  const el = document.createElement("div");
  el.className = "nft-row";
  el.dataset.token = row.tokenId;

  const img = document.createElement("img");
  img.src = cb.imageUrl(row.image);
  img.alt = row.tokenId;
  img.width = 40;
  img.height = 40;

  const label = document.createElement("span");
  label.className = "token-label";
  label.textContent = row.tokenId;
  const color = cb.selectionColor(row.tokenId);
  if (color) label.style.color = color;

  const bar = document.createElement("div");
  bar.className = "rarity-bar";
  bar.style.width = `${BAR_WIDTH}px`;
  const traitSeg = document.createElement("div");
  traitSeg.className = "seg-trait";
  traitSeg.style.width = `${row.bar.trait * BAR_WIDTH}px`;
  const imageSeg = document.createElement("div");
  imageSeg.className = "seg-image";
  imageSeg.style.width = `${row.bar.image * BAR_WIDTH}px`;
  bar.append(traitSeg, imageSeg);

  const price = document.createElement("span");
  price.className = "last-price";
  price.textContent = row.lastPrice > 0 ? `${row.lastPrice} ETH` : "—";

  el.append(img, label, bar, price);
  el.addEventListener("click", () => cb.onSelect(row.tokenId));
  return el;
}

export function renderListView(
  container: HTMLElement,
  model: ListModel,
  wTrait: number,
  search: string,
  cb: ListViewCallbacks,
): void {
  container.replaceChildren();

  const controls = document.createElement("div");
  controls.className = "list-controls";

  const searchBox = document.createElement("input");
  searchBox.type = "search";
  searchBox.placeholder = "token id";
  searchBox.value = search;
  searchBox.addEventListener("input", () => cb.onSearch(searchBox.value));

  const slider = document.createElement("input");
  slider.type = "range";
  slider.min = "0";
  slider.max = "1";
  slider.step = "0.05";
  slider.value = String(wTrait);
  slider.title = "trait vs image rarity weight";
  slider.addEventListener("change", () => cb.onWTrait(Number(slider.value)));

  const sliderLabel = document.createElement("span");
  sliderLabel.textContent = `w_trait ${wTrait.toFixed(2)}`;

  controls.append(searchBox, slider, sliderLabel);
  container.append(controls);

  const rows = document.createElement("div");
  rows.className = "nft-rows";
  for (const row of model.rows) rows.append(rowElement(row, cb));
  container.append(rows);

  if (model.moreVisible) {
    const more = document.createElement("button");
    more.className = "more-button";
    more.textContent = "More";
    more.addEventListener("click", () => cb.onMore());
    container.append(more);
  }
}
