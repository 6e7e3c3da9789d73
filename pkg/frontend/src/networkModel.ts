/** Glyph model for the force-directed activity network.
 *
 * The API payload is a logical graph with no coordinates; the force layout
 * itself runs client-side. This module turns the payload into drawable
 * glyph descriptions: concentric rings per sale, clockwise dots per
 * transfer, and a shape per trader behavior.
 */

import type {
  BehaviorShape,
  NetworkPayload,
  NftNode,
  TraderNode,
} from "./types.js";

/** Zero-price rings still get a sliver of ink: 5% of the glyph radius.
 * The logical 0 ETH price is preserved for tooltips. */
export const MIN_RING_FRACTION = 0.05;

export interface RingGlyph {
  orderIndex: number;
  /** Radii as fractions of the glyph radius, after the visual minimum. */
  innerRadius: number;
  outerRadius: number;
  buyerColorKey: number;
  hatched: boolean;
}

export interface MarkerGlyph {
  orderIndex: number;
  /** Radians, clockwise from 12 o'clock. */
  angle: number;
  recipientColorKey: number;
}

export interface NftGlyph {
  tokenId: string;
  isFocus: boolean;
  rings: RingGlyph[];
  markers: MarkerGlyph[];
}

export type TraderGlyphShape = "square" | "circle" | "diamond";

export interface TraderGlyph {
  address: string;
  colorKey: number;
  /** One glyph per behavior the trader exhibited, drawn side by side. */
  shapes: TraderGlyphShape[];
  isWhale: boolean;
  legend: { holdingValue: number; pnl: number; activityCount: number };
}

export interface NetworkGlyphModel {
  focusToken: string;
  traders: TraderGlyph[];
  nfts: NftGlyph[];
  links: { trader: string; tokenId: string; relation: string }[];
}

const SHAPE_BY_BEHAVIOR: Record<BehaviorShape, TraderGlyphShape> = {
  mint: "square",
  sale: "circle",
  transfer: "diamond",
};

export function visualRadius(fraction: number): number {
  return Math.max(fraction, MIN_RING_FRACTION);
}

export function buildNftGlyph(node: NftNode, focusToken: string): NftGlyph {
  const orders = [
    ...node.rings.map((r) => r.order_index),
    ...node.transfer_markers.map((m) => m.order_index),
  ];
  const slots = orders.length ? Math.max(...orders) + 1 : 1;

  const rings = [...node.rings]
    .sort((a, b) => a.order_index - b.order_index)
    .map((r) => {
      const outer = visualRadius(r.outer_fraction);
      return {
        orderIndex: r.order_index,
        innerRadius: Math.min(visualRadius(r.inner_fraction), outer),
        outerRadius: outer,
        buyerColorKey: r.buyer_color_key,
        hatched: r.shaded,
      };
    });

  // transfers are ring-less dots placed clockwise by transaction order
  const markers = node.transfer_markers.map((m) => ({
    orderIndex: m.order_index,
    angle: (m.order_index / slots) * 2 * Math.PI,
    recipientColorKey: m.recipient_color_key,
  }));

  return {
    tokenId: node.token_id,
    isFocus: node.token_id === focusToken,
    rings,
    markers,
  };
}

export function buildTraderGlyph(t: TraderNode): TraderGlyph {
  return {
    address: t.address,
    colorKey: t.color_key,
    shapes: t.behavior_shapes.map((b) => SHAPE_BY_BEHAVIOR[b]),
    isWhale: t.indicators.is_whale,
    legend: {
      holdingValue: t.indicators.holding_value,
      pnl: t.indicators.pnl,
      activityCount: t.indicators.activity_count,
    },
  };
}

export function buildNetworkModel(payload: NetworkPayload): NetworkGlyphModel {
  return {
    focusToken: payload.focus_token,
    traders: payload.trader_nodes.map(buildTraderGlyph),
    nfts: payload.nft_nodes.map((n) => buildNftGlyph(n, payload.focus_token)),
    links: payload.edges.map((e) => ({
      trader: e.trader,
      tokenId: e.token_id,
      relation: e.relation,
    })),
  };
}
