/** Parallel coordinates over the indicator matrix, with axis brushing. */

import * as d3 from "d3";
import type { ParcoordsModel } from "../parcoordsModel.js";
import type { FilterField } from "../state.js";

const WIDTH = 760;
const HEIGHT = 260;
const MARGIN = { top: 28, bottom: 16, left: 40, right: 40 };

export interface ParcoordsCallbacks {
  onBrush(axis: FilterField, min: number, max: number): void;
  onClearBrush(axis: FilterField): void;
  onSelect(tokenId: string): void;
}

export function renderParcoords(
  container: HTMLElement,
  model: ParcoordsModel,
  cb: ParcoordsCallbacks,
): void {
  container.replaceChildren();
  const svg = d3
    .create("svg")
    .attr("viewBox", `0 0 ${WIDTH} ${HEIGHT}`)
    .attr("class", "parcoords");

  const xs = d3
    .scalePoint<number>()
    .domain(d3.range(model.axes.length))
    .range([MARGIN.left, WIDTH - MARGIN.right]);
  const y = d3
    .scaleLinear()
    .domain([0, 1])
    .range([HEIGHT - MARGIN.bottom, MARGIN.top]);

  const path = (positions: number[]) =>
    d3.line<number>().x((_, i) => xs(i)!).y((p) => y(p))(positions)!;

  svg
    .append("g")
    .selectAll("path")
    .data(model.lines)
    .join("path")
    .attr("d", (l) => path(l.positions))
    .attr("fill", "none")
    .attr("stroke", (l) => l.color)
    .attr("stroke-width", (l) => (l.highlighted ? 2 : 1))
    .attr("opacity", (l) => (l.highlighted ? 1 : 0.45))
    .style("cursor", "pointer")
    .on("click", (_, l) => cb.onSelect(l.tokenId));

  const axes = svg
    .append("g")
    .selectAll("g")
    .data(model.axes)
    .join("g")
    .attr("transform", (_, i) => `translate(${xs(i)},0)`);

  axes
    .append("line")
    .attr("y1", MARGIN.top)
    .attr("y2", HEIGHT - MARGIN.bottom)
    .attr("stroke", "#888");
  axes
    .append("text")
    .attr("y", MARGIN.top - 10)
    .attr("text-anchor", "middle")
    .attr("class", "axis-title")
    .text((a) => a.name);

  axes.each(function (axis) {
    const toValue = (py: number) =>
      axis.min + y.invert(py) * (axis.max - axis.min);
    const brush = d3
      .brushY()
      .extent([
        [-8, MARGIN.top],
        [8, HEIGHT - MARGIN.bottom],
      ])
      .on("end", (event: d3.D3BrushEvent<unknown>) => {
        const name = axis.name as FilterField;
        if (!event.selection) {
          cb.onClearBrush(name);
          return;
        }
        const [y0, y1] = event.selection as [number, number];
        // screen y grows downward, so y1 maps to the lower value
        cb.onBrush(name, toValue(y1), toValue(y0));
      });
    d3.select(this).append("g").attr("class", "axis-brush").call(brush);
  });

  container.append(svg.node()!);
}
