/** Two synchronized dual-axis market charts: prices and transactions. */

import * as d3 from "d3";
import type { MarketViewModel, LinePoint } from "../marketModel.js";

const WIDTH = 640;
const HEIGHT = 220;
const MARGIN = { top: 12, right: 48, bottom: 24, left: 56 };

export interface MarketViewCallbacks {
  onWindowChange(from: string, to: string): void;
}

const LINE_COLORS: Record<string, string> = {
  market_cap: "#4e79a7",
  average_price: "#f28e2b",
  floor_price: "#59a14f",
  liquidity: "#b07aa1",
};

function dateScale(dates: string[], left: number, right: number) {
  const parsed = dates.map((d) => new Date(d + "T00:00:00Z"));
  return d3
    .scaleUtc()
    .domain(d3.extent(parsed) as [Date, Date])
    .range([left, right]);
}

function drawLine(
  g: d3.Selection<SVGGElement, undefined, null, undefined>,
  points: LinePoint[],
  x: d3.ScaleTime<number, number>,
  y: d3.ScaleLinear<number, number>,
  color: string,
) {
  const line = d3
    .line<LinePoint>()
    .x((p) => x(new Date(p.date + "T00:00:00Z")))
    .y((p) => y(p.value));
  g.append("path")
    .datum(points)
    .attr("fill", "none")
    .attr("stroke", color)
    .attr("stroke-width", 1.5)
    .attr("d", line);
}

export function renderMarketView(
  container: HTMLElement,
  model: MarketViewModel,
  callbacks: MarketViewCallbacks,
): void {
  container.replaceChildren();
  if (!model.window) {
    const empty = document.createElement("p");
    empty.className = "empty-state";
    empty.textContent = "No market activity in the selected window.";
    container.append(empty);
    return;
  }

  const dates = model.price.marketCap.map((p) => p.date);
  const x = dateScale(dates, MARGIN.left, WIDTH - MARGIN.right);

  // ---- price chart: cap/avg/floor on the linear left axis, volume bars
  // and sale scatter on the logarithmic right axis
  const priceSvg = d3
    .create("svg")
    .attr("viewBox", `0 0 ${WIDTH} ${HEIGHT}`)
    .attr("class", "market-chart");
  const pg = priceSvg.append("g");

  const leftMax = d3.max(model.price.marketCap, (p) => p.value) ?? 1;
  const yLeft = d3
    .scaleLinear()
    .domain([0, leftMax * 1.05])
    .range([HEIGHT - MARGIN.bottom, MARGIN.top]);

  const logValues = [
    ...model.price.volumeBars.map((p) => p.value),
    ...model.price.sales.map((s) => s.price),
  ].filter((v) => v > 0);
  const yRight = d3
    .scaleLog()
    .domain([
      Math.min(0.01, d3.min(logValues) ?? 0.01),
      Math.max(1, d3.max(logValues) ?? 1),
    ])
    .range([HEIGHT - MARGIN.bottom, MARGIN.top]);

  pg.append("g")
    .attr("transform", `translate(${MARGIN.left},0)`)
    .call(d3.axisLeft(yLeft).ticks(5));
  pg.append("g")
    .attr("transform", `translate(${WIDTH - MARGIN.right},0)`)
    .call(d3.axisRight(yRight).ticks(4, "~s"));
  pg.append("g")
    .attr("transform", `translate(0,${HEIGHT - MARGIN.bottom})`)
    .call(d3.axisBottom(x).ticks(6));

  // zero-volume days have no bar at all on the log axis
  pg.append("g")
    .selectAll("rect")
    .data(model.price.volumeBars)
    .join("rect")
    .attr("x", (p) => x(new Date(p.date + "T00:00:00Z")) - 3)
    .attr("y", (p) => yRight(p.value))
    .attr("width", 6)
    .attr("height", (p) => HEIGHT - MARGIN.bottom - yRight(p.value))
    .attr("fill", "#c0c8d8");

  drawLine(pg, model.price.marketCap, x, yLeft, LINE_COLORS.market_cap);
  drawLine(pg, model.price.averagePrice, x, yLeft, LINE_COLORS.average_price);
  drawLine(pg, model.price.floorPrice, x, yLeft, LINE_COLORS.floor_price);

  pg.append("g")
    .selectAll("circle")
    .data(model.price.sales.filter((s) => s.price > 0))
    .join("circle")
    .attr("cx", (s) => x(new Date(s.timestamp * 1000)))
    .attr("cy", (s) => yRight(s.price))
    .attr("r", (s) => (s.kind === "whale" ? 4 : 2.5))
    .attr("fill", (s) => (s.kind === "whale" ? "#e15759" : "#9aa5b1"))
    .attr("opacity", 0.85);

  // ---- transaction chart: liquidity line left, stacked activity bars right
  const txSvg = d3
    .create("svg")
    .attr("viewBox", `0 0 ${WIDTH} ${HEIGHT}`)
    .attr("class", "market-chart");
  const tg = txSvg.append("g");

  const liqMax = d3.max(model.transactions.liquidity, (p) => p.value) ?? 1;
  const yLiq = d3
    .scaleLinear()
    .domain([0, Math.max(liqMax * 1.1, 1)])
    .range([HEIGHT - MARGIN.bottom, MARGIN.top]);
  const actMax =
    d3.max(model.transactions.activityBars, (b) => b.sales + b.transfers) ?? 1;
  const yAct = d3
    .scaleLog()
    .domain([0.5, Math.max(actMax, 1)])
    .range([HEIGHT - MARGIN.bottom, MARGIN.top]);

  tg.append("g")
    .attr("transform", `translate(${MARGIN.left},0)`)
    .call(d3.axisLeft(yLiq).ticks(5));
  tg.append("g")
    .attr("transform", `translate(${WIDTH - MARGIN.right},0)`)
    .call(d3.axisRight(yAct).ticks(4, "~s"));
  tg.append("g")
    .attr("transform", `translate(0,${HEIGHT - MARGIN.bottom})`)
    .call(d3.axisBottom(x).ticks(6));

  const bars = tg
    .append("g")
    .selectAll("g")
    .data(model.transactions.activityBars)
    .join("g")
    .attr(
      "transform",
      (b) => `translate(${x(new Date(b.date + "T00:00:00Z")) - 3},0)`,
    );
  bars
    .append("rect")
    .attr("width", 6)
    .attr("y", (b) => yAct(Math.max(b.sales, 0.5)))
    .attr("height", (b) => HEIGHT - MARGIN.bottom - yAct(Math.max(b.sales, 0.5)))
    .attr("fill", "#4e79a7");
  bars
    .filter((b) => b.transfers > 0)
    .append("rect")
    .attr("width", 6)
    .attr("y", (b) => yAct(b.sales + b.transfers))
    .attr("height", (b) =>
      Math.max(0, yAct(Math.max(b.sales, 0.5)) - yAct(b.sales + b.transfers)),
    )
    .attr("fill", "#f28e2b");

  drawLine(tg, model.transactions.liquidity, x, yLiq, LINE_COLORS.liquidity);

  // brushing either chart moves the shared window, so both stay aligned
  for (const svg of [priceSvg, txSvg]) {
    const brush = d3
      .brushX()
      .extent([
        [MARGIN.left, MARGIN.top],
        [WIDTH - MARGIN.right, HEIGHT - MARGIN.bottom],
      ])
      .on("end", (event: d3.D3BrushEvent<unknown>) => {
        if (!event.selection) return;
        const [x0, x1] = event.selection as [number, number];
        const fmt = d3.utcFormat("%Y-%m-%d");
        callbacks.onWindowChange(fmt(x.invert(x0)), fmt(x.invert(x1)));
      });
    const brushLayer = svg
      .append("g")
      .attr("class", "brush") as unknown as d3.Selection<
      SVGGElement,
      unknown,
      null,
      undefined
    >;
    brushLayer.call(brush);
  }

  container.append(priceSvg.node()!, txSvg.node()!);
}
