/** Render model for the indicator parallel coordinates. */

import type { IndicatorMatrix } from "./types.js";
import type { ViewState } from "./state.js";
import { selectionColor } from "./state.js";

export const DEFAULT_LINE_COLOR = "#b0b0b0";

export interface Polyline {
  tokenId: string;
  /** One 0..1 position per axis, in axis order. */
  positions: number[];
  color: string;
  highlighted: boolean;
}

export interface ParcoordsModel {
  axes: { name: string; min: number; max: number; unit: string }[];
  lines: Polyline[];
}

/** Map a value onto its axis as a 0..1 fraction; degenerate axes center. */
export function axisPosition(value: number, min: number, max: number): number {
  if (max === min) return 0.5;
  return (value - min) / (max - min);
}

export function buildParcoordsModel(
  matrix: IndicatorMatrix,
  state: ViewState,
): ParcoordsModel {
  const lines: Polyline[] = matrix.rows.map((row) => {
    const color = selectionColor(state, row.token_id);
    return {
      tokenId: row.token_id,
      positions: row.values.map((v, i) =>
        axisPosition(v, matrix.axes[i].min, matrix.axes[i].max),
      ),
      color: color ?? DEFAULT_LINE_COLOR,
      highlighted: color !== null,
    };
  });
  // highlighted polylines draw on top of the gray mass
  lines.sort((a, b) => Number(a.highlighted) - Number(b.highlighted));
  return { axes: matrix.axes, lines };
}
