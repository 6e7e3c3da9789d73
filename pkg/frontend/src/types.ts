/** Payload shapes of the /api/v1 endpoints, mirrored field for field. */

export interface CollectionSummary {
  id: string;
  name: string;
  description: string;
  official_url: string;
  nft_count: number;
  holders: number;
  market_cap: number;
  volume: number;
  liquidity: number;
}

export interface MarketDay {
  date: string; // YYYY-MM-DD
  market_cap: number;
  average_price: number;
  floor_price: number;
  volume: number;
  liquidity: number;
  sales: number;
  transfers: number;
  whale_sales: [number, number][]; // [timestamp, price]
  normal_sales: [number, number][];
}

export interface MarketSeries {
  schema: number;
  days: MarketDay[];
}

export interface Trait {
  type: string;
  value: string;
}

export interface NftRow {
  token_id: string;
  image: string;
  traits: Trait[];
  trait_rarity: number;
  image_rarity: number;
  weighted_rarity: number;
  last_price: number;
  price_rank: number;
  past_owners: number;
  current_hold_time: number;
  longest_hold_time: number;
  sellers_pnl: number;
}

export interface NftsPage {
  total: number;
  page: number;
  page_size: number;
  rows: NftRow[];
}

export interface IndicatorAxis {
  name: string;
  min: number;
  max: number;
  unit: string;
}

export interface IndicatorMatrix {
  schema: number;
  axes: IndicatorAxis[];
  rows: { token_id: string; values: number[] }[];
}

export interface RingDescriptor {
  order_index: number;
  inner_fraction: number;
  outer_fraction: number;
  buyer_color_key: number;
  shaded: boolean;
}

export interface TransferMarker {
  order_index: number;
  recipient_color_key: number;
}

export interface NftNode {
  token_id: string;
  rings: RingDescriptor[];
  transfer_markers: TransferMarker[];
}

export type BehaviorShape = "mint" | "sale" | "transfer";

export interface TraderNode {
  address: string;
  behavior_shapes: BehaviorShape[];
  color_key: number;
  indicators: {
    holding_value: number;
    pnl: number;
    activity_count: number;
    is_whale: boolean;
  };
}

export interface NetworkEdge {
  trader: string;
  token_id: string;
  relation: string;
}

export interface NetworkPayload {
  schema: number;
  focus_token: string;
  image: string;
  traits: Trait[];
  trader_nodes: TraderNode[];
  nft_nodes: NftNode[];
  edges: NetworkEdge[];
}
