/** Thin fetch client with per-view request cancellation. */

import type {
  CollectionSummary,
  IndicatorMatrix,
  MarketSeries,
  NetworkPayload,
  NftsPage,
} from "./types.js";

export class ApiError extends Error {
  constructor(
    public status: number,
    public detail: string,
  ) {
    super(`API ${status}: ${detail}`);
  }
}

export class ApiClient {
  private inflight = new Map<string, AbortController>();

  constructor(public base: string = "") {}

  /** At most one in-flight request per channel; newer calls win. */
  private async get<T>(channel: string, url: string): Promise<T> {
    this.inflight.get(channel)?.abort();
    const controller = new AbortController();
    this.inflight.set(channel, controller);
    const res = await fetch(url, { signal: controller.signal });
    if (!res.ok) {
      let detail = res.statusText;
      try {
        detail = (await res.json()).error?.message ?? detail;
      } catch {
        // non-JSON error body; keep the status text
      }
      throw new ApiError(res.status, detail);
    }
    return (await res.json()) as T;
  }

  collections(): Promise<CollectionSummary[]> {
    return this.get("collections", `${this.base}/api/v1/collections`);
  }

  market(url: string): Promise<MarketSeries> {
    return this.get("market", url);
  }

  nfts(url: string): Promise<NftsPage> {
    return this.get("nfts", url);
  }

  indicatorMatrix(url: string): Promise<IndicatorMatrix> {
    return this.get("matrix", url);
  }

  activityNetwork(url: string): Promise<NetworkPayload> {
    return this.get("network", url);
  }

  imageUrl(path: string): string {
    return `${this.base}${path}`;
  }
}
