/** Render models for the two synchronized market charts.
 *
 * Both charts are dual-axis: the left axis is linear, the right axis is
 * logarithmic. Quantities destined for the log axis omit zero values (a
 * zero-volume day simply has no bar) instead of clamping them.
 */

import type { MarketDay } from "./types.js";

export interface LinePoint {
  date: string;
  value: number;
}

export interface ScatterPoint {
  timestamp: number;
  price: number;
  kind: "whale" | "normal";
}

export interface PriceChartModel {
  /** Left, linear axis. */
  marketCap: LinePoint[];
  averagePrice: LinePoint[];
  floorPrice: LinePoint[];
  /** Right, log axis; zero-volume days carry no bar. */
  volumeBars: LinePoint[];
  sales: ScatterPoint[];
}

export interface StackedBar {
  date: string;
  sales: number;
  transfers: number;
}

export interface TransactionChartModel {
  /** Left, linear axis. */
  liquidity: LinePoint[];
  /** Right, log axis; empty days carry no bar. */
  activityBars: StackedBar[];
}

export interface MarketViewModel {
  price: PriceChartModel;
  transactions: TransactionChartModel;
  /** Both x-axes always cover the same span. */
  window: { from: string; to: string } | null;
}

export function buildMarketModel(days: MarketDay[]): MarketViewModel {
  const line = (pick: (d: MarketDay) => number): LinePoint[] =>
    days.map((d) => ({ date: d.date, value: pick(d) }));

  const sales: ScatterPoint[] = [];
  for (const d of days) {
    for (const [timestamp, price] of d.whale_sales)
      sales.push({ timestamp, price, kind: "whale" });
    for (const [timestamp, price] of d.normal_sales)
      sales.push({ timestamp, price, kind: "normal" });
  }
  sales.sort((a, b) => a.timestamp - b.timestamp);

  return {
    price: {
      marketCap: line((d) => d.market_cap),
      averagePrice: line((d) => d.average_price),
      floorPrice: line((d) => d.floor_price),
      volumeBars: days
        .filter((d) => d.volume > 0)
        .map((d) => ({ date: d.date, value: d.volume })),
      sales,
    },
    transactions: {
      liquidity: line((d) => d.liquidity),
      activityBars: days
        .filter((d) => d.sales + d.transfers > 0)
        .map((d) => ({ date: d.date, sales: d.sales, transfers: d.transfers })),
    },
    window: days.length
      ? { from: days[0].date, to: days[days.length - 1].date }
      : null,
  };
}
