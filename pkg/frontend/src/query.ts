/** Translate view state into the query strings the API expects. */

import type { ViewState } from "./state.js";

/** Parameters for GET /collections/{id}/nfts derived from the state. */
export function nftsQueryParams(s: ViewState): URLSearchParams {
  const p = new URLSearchParams();
  p.set("sort", s.sort);
  p.set("desc", String(s.desc));
  p.set("w_trait", s.wTrait.toString());
  p.set("page", String(s.page));
  p.set("page_size", String(s.pageSize));
  for (const field of Object.keys(s.filters).sort()) {
    const f = s.filters[field as keyof typeof s.filters];
    if (f?.min !== undefined) p.set(`filter.${field}.min`, String(f.min));
    if (f?.max !== undefined) p.set(`filter.${field}.max`, String(f.max));
  }
  return p;
}

/** Parameters for GET /collections/{id}/market from the shared window. */
export function marketQueryParams(s: ViewState): URLSearchParams {
  const p = new URLSearchParams();
  if (s.dateWindow.from) p.set("from", s.dateWindow.from);
  if (s.dateWindow.to) p.set("to", s.dateWindow.to);
  return p;
}

export function nftsUrl(base: string, s: ViewState): string {
  return `${base}/api/v1/collections/${encodeURIComponent(
    s.collection ?? "",
  )}/nfts?${nftsQueryParams(s)}`;
}

export function marketUrl(base: string, s: ViewState): string {
  const q = marketQueryParams(s).toString();
  return (
    `${base}/api/v1/collections/${encodeURIComponent(s.collection ?? "")}` +
    `/market${q ? "?" + q : ""}`
  );
}

export function matrixUrl(base: string, s: ViewState): string {
  return `${base}/api/v1/collections/${encodeURIComponent(
    s.collection ?? "",
  )}/indicator-matrix`;
}

export function networkUrl(base: string, s: ViewState, token: string): string {
  return `${base}/api/v1/nfts/${encodeURIComponent(
    s.collection ?? "",
  )}/${encodeURIComponent(token)}/activity-network`;
}
