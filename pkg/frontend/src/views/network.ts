/** Force-directed activity network with concentric-ring NFT glyphs. */

import * as d3 from "d3";
import type {
  NetworkGlyphModel,
  NftGlyph,
  TraderGlyph,
} from "../networkModel.js";

const WIDTH = 720;
const HEIGHT = 480;
const NFT_RADIUS = 26;
const FOCUS_RADIUS = 36;
const TRADER_SIZE = 9;

type SimNode = d3.SimulationNodeDatum & {
  id: string;
  kind: "trader" | "nft";
  trader?: TraderGlyph;
  nft?: NftGlyph;
};

const colorOf = d3.scaleOrdinal<number, string>(d3.schemeTableau10);

function ensureHatchPattern(
  svg: d3.Selection<SVGSVGElement, undefined, null, undefined>,
): void {
  const defs = svg.append("defs");
  const pattern = defs
    .append("pattern")
    .attr("id", "ring-hatch")
    .attr("width", 4)
    .attr("height", 4)
    .attr("patternUnits", "userSpaceOnUse")
    .attr("patternTransform", "rotate(45)");
  pattern
    .append("line")
    .attr("y2", 4)
    .attr("stroke", "#555")
    .attr("stroke-width", 1.2);
}

function drawNftGlyph(
  g: d3.Selection<SVGGElement, SimNode, SVGGElement, unknown>,
  radius: (n: SimNode) => number,
): void {
  g.append("circle")
    .attr("r", (n) => radius(n))
    .attr("fill", "#fff")
    .attr("stroke", (n) => (n.nft!.isFocus ? "#222" : "#999"))
    .attr("stroke-width", (n) => (n.nft!.isFocus ? 2 : 1));

  g.each(function (n) {
    const glyph = n.nft!;
    const r = radius(n);
    const node = d3.select(this);
    // rings draw inner-to-outer in transaction order
    for (const ring of glyph.rings) {
      const arc = d3
        .arc()
        .innerRadius(ring.innerRadius * r)
        .outerRadius(ring.outerRadius * r)
        .startAngle(0)
        .endAngle(2 * Math.PI);
      node
        .append("path")
        .attr("d", arc as unknown as string)
        .attr("fill", colorOf(ring.buyerColorKey))
        .attr("opacity", 0.8);
      if (ring.hatched) {
        node
          .append("path")
          .attr("d", arc as unknown as string)
          .attr("fill", "url(#ring-hatch)");
      }
    }
    // clockwise transfer dots just outside the rim
    for (const m of glyph.markers) {
      const a = m.angle - Math.PI / 2;
      node
        .append("circle")
        .attr("cx", Math.cos(a) * (r + 5))
        .attr("cy", Math.sin(a) * (r + 5))
        .attr("r", 3.5)
        .attr("fill", colorOf(m.recipientColorKey))
        .attr("stroke", "#444");
    }
    node
      .append("text")
      .attr("y", r + 14)
      .attr("text-anchor", "middle")
      .attr("class", "glyph-label")
      .text(glyph.tokenId);
  });
}

function drawTraderGlyph(
  g: d3.Selection<SVGGElement, SimNode, SVGGElement, unknown>,
): void {
  g.each(function (n) {
    const trader = n.trader!;
    const node = d3.select(this);
    const fill = colorOf(trader.colorKey);
    trader.shapes.forEach((shape, i) => {
      const dx = (i - (trader.shapes.length - 1) / 2) * (TRADER_SIZE + 3);
      if (shape === "square") {
        node
          .append("rect")
          .attr("x", dx - TRADER_SIZE / 2)
          .attr("y", -TRADER_SIZE / 2)
          .attr("width", TRADER_SIZE)
          .attr("height", TRADER_SIZE)
          .attr("fill", fill);
      } else if (shape === "circle") {
        node
          .append("circle")
          .attr("cx", dx)
          .attr("r", TRADER_SIZE / 2)
          .attr("fill", fill);
      } else {
        node
          .append("rect")
          .attr("x", dx - TRADER_SIZE / 2)
          .attr("y", -TRADER_SIZE / 2)
          .attr("width", TRADER_SIZE)
          .attr("height", TRADER_SIZE)
          .attr("transform", `rotate(45 ${dx} 0)`)
          .attr("fill", fill);
      }
    });
    if (trader.isWhale) {
      node
        .append("circle")
        .attr("r", TRADER_SIZE + 4)
        .attr("fill", "none")
        .attr("stroke", "#e15759")
        .attr("stroke-dasharray", "3 2");
    }
    node
      .append("text")
      .attr("y", TRADER_SIZE + 12)
      .attr("text-anchor", "middle")
      .attr("class", "glyph-label")
      .text(trader.address);
  });
}

export function renderNetworkView(
  container: HTMLElement,
  model: NetworkGlyphModel,
): void {
  container.replaceChildren();
  const svg = d3
    .create("svg")
    .attr("viewBox", `0 0 ${WIDTH} ${HEIGHT}`)
    .attr("class", "network");
  ensureHatchPattern(svg);
  const root = svg.append("g");

  const zoomTarget = svg as unknown as d3.Selection<
    SVGSVGElement,
    unknown,
    null,
    undefined
  >;
  zoomTarget.call(
    d3
      .zoom<SVGSVGElement, unknown>()
      .scaleExtent([0.3, 4])
      .on("zoom", (e) => root.attr("transform", e.transform)),
  );

  const nodes: SimNode[] = [
    ...model.traders.map((t) => ({
      id: `trader:${t.address}`,
      kind: "trader" as const,
      trader: t,
    })),
    ...model.nfts.map((n) => ({
      id: `nft:${n.tokenId}`,
      kind: "nft" as const,
      nft: n,
    })),
  ];
  type SimLink = d3.SimulationLinkDatum<SimNode> & { relation: string };
  const links: SimLink[] = model.links.map((l) => ({
    source: `trader:${l.trader}`,
    target: `nft:${l.tokenId}`,
    relation: l.relation,
  }));

  const radius = (n: SimNode) =>
    n.kind === "trader"
      ? TRADER_SIZE + 6
      : n.nft!.isFocus
        ? FOCUS_RADIUS
        : NFT_RADIUS;

  const sim = d3
    .forceSimulation(nodes)
    .force(
      "link",
      d3
        .forceLink(links)
        .id((d) => (d as SimNode).id)
        .distance(90),
    )
    .force("charge", d3.forceManyBody().strength(-160))
    .force("center", d3.forceCenter(WIDTH / 2, HEIGHT / 2))
    // every node claims a collision volume equal to its drawn radius
    .force("collide", d3.forceCollide<SimNode>((n) => radius(n) + 8));

  const linkSel = root
    .append("g")
    .selectAll("line")
    .data(links)
    .join("line")
    .attr("stroke", "#bbb")
    .attr("stroke-width", 1);

  const nodeSel = root
    .append("g")
    .selectAll<SVGGElement, SimNode>("g")
    .data(nodes)
    .join("g")
    .style("cursor", "grab")
    .call(
      d3
        .drag<SVGGElement, SimNode>()
        .on("start", (e, n) => {
          if (!e.active) sim.alphaTarget(0.3).restart();
          n.fx = n.x;
          n.fy = n.y;
        })
        .on("drag", (e, n) => {
          n.fx = e.x;
          n.fy = e.y;
        })
        .on("end", (e, n) => {
          if (!e.active) sim.alphaTarget(0);
          n.fx = null;
          n.fy = null;
        }),
    );

  drawNftGlyph(nodeSel.filter((n) => n.kind === "nft"), radius);
  drawTraderGlyph(nodeSel.filter((n) => n.kind === "trader"));

  sim.on("tick", () => {
    linkSel
      .attr("x1", (l) => (l.source as SimNode).x!)
      .attr("y1", (l) => (l.source as SimNode).y!)
      .attr("x2", (l) => (l.target as SimNode).x!)
      .attr("y2", (l) => (l.target as SimNode).y!);
    nodeSel.attr("transform", (n) => `translate(${n.x},${n.y})`);
  });

  container.append(svg.node()!);
}
