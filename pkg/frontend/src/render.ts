/**
 * Deterministic SVG rendering: per estimator one median line with markers and
 * a shaded interquartile band, legend from the estimator names, axes from the
 * swept variable. Output depends only on the parsed rows and the swept
 * variable — no timestamps, no randomness — so identical input bytes yield
 * identical SVG bytes.
 */
import { scaleLinear } from "d3-scale";
import { area, line } from "d3-shape";

import { AggregateRow, SchemaError, SweptVar } from "./schema.js";

export interface PlotSpec {
  input: string;
  swept: SweptVar;
  out: string;
  /** estimator name -> stroke color; unlisted estimators use the palette */
  styles?: Record<string, string>;
}

export const WIDTH = 640;
export const HEIGHT = 420;
const MARGIN = { top: 24, right: 16, bottom: 46, left: 58 };

const PALETTE = [
  "#1f77b4",
  "#d62728",
  "#2ca02c",
  "#9467bd",
  "#ff7f0e",
  "#8c564b",
  "#17becf",
];

const AXIS_LABEL: Record<SweptVar, string> = {
  n: "number of samples n",
  k: "sparsity k",
  eps: "contamination fraction eps",
};

/** 6-significant-digit formatting, stable across rows and platforms. */
const fmt = (v: number): string => Number(v.toPrecision(6)).toString();

interface Series {
  name: string;
  points: AggregateRow[];
}

function groupSeries(rows: AggregateRow[]): Series[] {
  const order: string[] = [];
  const by = new Map<string, AggregateRow[]>();
  for (const row of rows) {
    if (!by.has(row.estimator)) {
      by.set(row.estimator, []);
      order.push(row.estimator);
    }
    by.get(row.estimator)!.push(row);
  }
  return order.map((name) => ({
    name,
    points: [...by.get(name)!].sort((a, b) => a.swept_value - b.swept_value),
  }));
}

export function renderPlot(
  rows: AggregateRow[],
  swept: SweptVar,
  styles: Record<string, string> = {},
): string {
  const selected = rows.filter((r) => r.swept_var === swept);
  if (selected.length === 0) {
    throw new SchemaError(`no rows with swept_var=${swept}`);
  }
  for (const r of selected) {
    // upstream guarantees this; a violated band means corrupt input
    if (r.q25 > r.q75) {
      throw new SchemaError("interquartile band inverted (q25 > q75)");
    }
  }
  const series = groupSeries(selected);

  const xs = selected.map((r) => r.swept_value);
  const ys = selected.flatMap((r) => [r.q25, r.q75, r.median]);
  const xDomain: [number, number] = [Math.min(...xs), Math.max(...xs)];
  const yMax = Math.max(...ys, 1e-12);
  if (xDomain[0] === xDomain[1]) {
    xDomain[0] -= 0.5;
    xDomain[1] += 0.5;
  }
  const x = scaleLinear()
    .domain(xDomain)
    .range([MARGIN.left, WIDTH - MARGIN.right]);
  const y = scaleLinear()
    .domain([0, yMax * 1.05])
    .range([HEIGHT - MARGIN.bottom, MARGIN.top]);

  const toLine = line<AggregateRow>()
    .x((r) => x(r.swept_value))
    .y((r) => y(r.median));
  const toBand = area<AggregateRow>()
    .x((r) => x(r.swept_value))
    .y0((r) => y(r.q25))
    .y1((r) => y(r.q75));

  const parts: string[] = [];
  parts.push(
    `<svg xmlns="http://www.w3.org/2000/svg" width="${WIDTH}" height="${HEIGHT}" viewBox="0 0 ${WIDTH} ${HEIGHT}" font-family="sans-serif" font-size="12">`,
    `<rect width="${WIDTH}" height="${HEIGHT}" fill="white"/>`,
  );

  // axes with ticks
  const axisY = HEIGHT - MARGIN.bottom;
  parts.push(
    `<g class="axes" stroke="#333" fill="none">` +
      `<line x1="${MARGIN.left}" y1="${axisY}" x2="${WIDTH - MARGIN.right}" y2="${axisY}"/>` +
      `<line x1="${MARGIN.left}" y1="${MARGIN.top}" x2="${MARGIN.left}" y2="${axisY}"/>` +
      `</g>`,
  );
  for (const t of x.ticks(6)) {
    const px = x(t);
    parts.push(
      `<line x1="${fmt(px)}" y1="${axisY}" x2="${fmt(px)}" y2="${axisY + 5}" stroke="#333"/>`,
      `<text x="${fmt(px)}" y="${axisY + 18}" text-anchor="middle" fill="#333">${fmt(t)}</text>`,
    );
  }
  for (const t of y.ticks(6)) {
    const py = y(t);
    parts.push(
      `<line x1="${MARGIN.left - 5}" y1="${fmt(py)}" x2="${MARGIN.left}" y2="${fmt(py)}" stroke="#333"/>`,
      `<text x="${MARGIN.left - 8}" y="${fmt(py + 4)}" text-anchor="end" fill="#333">${fmt(t)}</text>`,
    );
  }
  parts.push(
    `<text x="${(MARGIN.left + WIDTH - MARGIN.right) / 2}" y="${HEIGHT - 10}" text-anchor="middle" fill="#333">${AXIS_LABEL[swept]}</text>`,
    `<text transform="translate(14,${(MARGIN.top + axisY) / 2}) rotate(-90)" text-anchor="middle" fill="#333">estimation error (median, IQR band)</text>`,
  );

  series.forEach((s, i) => {
    const color = styles[s.name] ?? PALETTE[i % PALETTE.length];
    const band = toBand(s.points);
    const path = toLine(s.points);
    parts.push(`<g class="series" data-estimator="${s.name}">`);
    if (band) {
      parts.push(`<path d="${band}" fill="${color}" fill-opacity="0.18" stroke="none"/>`);
    }
    if (path) {
      parts.push(`<path d="${path}" fill="none" stroke="${color}" stroke-width="1.8"/>`);
    }
    for (const p of s.points) {
      parts.push(
        `<circle cx="${fmt(x(p.swept_value))}" cy="${fmt(y(p.median))}" r="3" fill="${color}"/>`,
      );
    }
    parts.push(`</g>`);
  });

  // legend, one entry per estimator in first-seen order
  parts.push(`<g class="legend">`);
  series.forEach((s, i) => {
    const color = styles[s.name] ?? PALETTE[i % PALETTE.length];
    const ly = MARGIN.top + 8 + 18 * i;
    const lx = WIDTH - MARGIN.right - 150;
    parts.push(
      `<line x1="${lx}" y1="${ly}" x2="${lx + 22}" y2="${ly}" stroke="${color}" stroke-width="1.8"/>`,
      `<text x="${lx + 28}" y="${ly + 4}" fill="#333">${s.name}</text>`,
    );
  });
  parts.push(`</g>`, `</svg>`);
  return parts.join("\n") + "\n";
}
