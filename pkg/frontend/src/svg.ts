import { Scale, linearScale, ticks } from "./scales.js";

/** Line style per inverse temperature: solid / dotted / dot-dashed. */
export function dashForBeta(beta: number): string {
  if (beta === 32) return "3 3";
  if (beta === 100) return "8 3 2 3";
  return ""; // beta = 10 and anything unmapped: solid
}

export interface Curve {
  xs: number[];
  ys: number[];
  dash: string;
  label: string;
  markers?: boolean;
}

export interface Panel {
  title: string;
  xLabel: string;
  yLabel: string;
  curves: Curve[];
}

const W = 420;
const H = 320;
const MARGIN = { left: 64, right: 16, top: 30, bottom: 44 };

function esc(s: string): string {
  return s.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
}

function fmt(v: number): string {
  return Math.abs(v) >= 1e4 || (v !== 0 && Math.abs(v) < 1e-3)
    ? v.toExponential(1)
    : String(Number(v.toPrecision(6)));
}

function axis(x: Scale, y: Scale, xLabel: string, yLabel: string): string {
  const parts: string[] = [];
  const [x0, x1] = x.range;
  const [y0, y1] = y.range;
  parts.push(`<line x1="${x0}" y1="${y0}" x2="${x1}" y2="${y0}" stroke="black"/>`);
  parts.push(`<line x1="${x0}" y1="${y0}" x2="${x0}" y2="${y1}" stroke="black"/>`);
  for (const t of ticks(x.domain)) {
    const px = x(t);
    parts.push(`<line x1="${px}" y1="${y0}" x2="${px}" y2="${y0 + 4}" stroke="black"/>`);
    parts.push(
      `<text x="${px}" y="${y0 + 16}" font-size="10" text-anchor="middle">${fmt(t)}</text>`
    );
  }
  for (const t of ticks(y.domain)) {
    const py = y(t);
    parts.push(`<line x1="${x0 - 4}" y1="${py}" x2="${x0}" y2="${py}" stroke="black"/>`);
    parts.push(
      `<text x="${x0 - 6}" y="${py + 3}" font-size="10" text-anchor="end">${fmt(t)}</text>`
    );
  }
  const cx = (x0 + x1) / 2;
  parts.push(
    `<text x="${cx}" y="${y0 + 34}" font-size="12" text-anchor="middle">${esc(xLabel)}</text>`
  );
  const cy = (y0 + y1) / 2;
  parts.push(
    `<text x="${x0 - 48}" y="${cy}" font-size="12" text-anchor="middle" ` +
      `transform="rotate(-90 ${x0 - 48} ${cy})">${esc(yLabel)}</text>`
  );
  return parts.join("\n");
}

function renderPanel(panel: Panel, xOffset: number): string {
  const left = xOffset + MARGIN.left;
  const right = xOffset + W - MARGIN.right;
  const allX = panel.curves.flatMap((c) => c.xs);
  const allY = panel.curves.flatMap((c) => c.ys);
  const xDom: [number, number] = [Math.min(...allX), Math.max(...allX)];
  const yDom: [number, number] = [Math.min(...allY), Math.max(...allY)];
  const x = linearScale(xDom, [left, right]);
  // pixel y grows downward, so the y range is flipped
  const y = linearScale(yDom, [H - MARGIN.bottom, MARGIN.top]);
  const parts: string[] = [];
  parts.push(
    `<text x="${(left + right) / 2}" y="${MARGIN.top - 10}" font-size="13" ` +
      `text-anchor="middle">${esc(panel.title)}</text>`
  );
  parts.push(axis(x, y, panel.xLabel, panel.yLabel));
  for (const curve of panel.curves) {
    const pts = curve.xs.map((cx, i) => `${x(cx).toFixed(2)},${y(curve.ys[i]).toFixed(2)}`);
    const dash = curve.dash ? ` stroke-dasharray="${curve.dash}"` : "";
    if (curve.xs.length === 1 || curve.markers) {
      for (const p of pts) {
        const [px, py] = p.split(",");
        parts.push(`<circle cx="${px}" cy="${py}" r="3" fill="black"/>`);
      }
    }
    if (curve.xs.length > 1) {
      parts.push(
        `<polyline points="${pts.join(" ")}" fill="none" stroke="black"` +
          `${dash} data-label="${esc(curve.label)}"/>`
      );
    } else {
      // keep one polyline element per curve so counts are inspectable
      parts.push(
        `<polyline points="${pts[0]} ${pts[0]}" fill="none" stroke="black"` +
          `${dash} data-label="${esc(curve.label)}"/>`
      );
    }
  }
  return parts.join("\n");
}

export function renderSvg(panels: Panel[]): string {
  const width = W * panels.length;
  const body = panels.map((p, i) => renderPanel(p, i * W)).join("\n");
  return (
    `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${H}" ` +
    `viewBox="0 0 ${width} ${H}" font-family="sans-serif">\n` +
    `<rect width="${width}" height="${H}" fill="white"/>\n${body}\n</svg>\n`
  );
}
