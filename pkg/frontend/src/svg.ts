import { FigureSpec, Series } from "./figure.js";

const WIDTH = 640;
const HEIGHT = 420;
const MARGIN = { top: 34, right: 24, bottom: 52, left: 68 };
const PALETTE = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#8c564b", "#e377c2"];
const Z95 = 1.96;

const px = (v: number) => v.toFixed(2);

interface Scale {
  lo: number;
  hi: number;
  range0: number;
  range1: number;
}

const apply = (s: Scale, v: number) =>
  s.range0 + ((v - s.lo) / (s.hi - s.lo)) * (s.range1 - s.range0);

function padded(lo: number, hi: number): [number, number] {
  if (lo === hi) {
    const pad = Math.max(Math.abs(lo), 1) * 0.5;
    return [lo - pad, hi + pad];
  }
  const pad = (hi - lo) * 0.05;
  return [lo - pad, hi + pad];
}

function tickStep(lo: number, hi: number, count: number): number {
  const raw = (hi - lo) / count;
  const mag = Math.pow(10, Math.floor(Math.log10(raw)));
  const norm = raw / mag;
  if (norm <= 1) return mag;
  if (norm <= 2) return 2 * mag;
  if (norm <= 5) return 5 * mag;
  return 10 * mag;
}

function ticks(lo: number, hi: number, count = 5): { value: number; label: string }[] {
  const step = tickStep(lo, hi, count);
  const decimals = Math.max(0, -Math.floor(Math.log10(step)));
  const out: { value: number; label: string }[] = [];
  for (let v = Math.ceil(lo / step) * step; v <= hi + step * 1e-9; v += step) {
    const snapped = Math.round(v / step) * step;
    out.push({ value: snapped, label: snapped.toFixed(decimals) });
  }
  return out;
}

function polyline(pts: [number, number][]): string {
  return pts.map(([x, y]) => `${px(x)},${px(y)}`).join(" ");
}

/** Assemble the full SVG document.  Pure string building, no randomness. */
export function buildSvg(series: Series[], spec: FigureSpec): string {
  const xs = series.flatMap((s) => s.points.map((p) => p.x));
  const los = series.flatMap((s) =>
    s.points.map((p) => (spec.ci ? p.y - Z95 * p.se : p.y)),
  );
  const his = series.flatMap((s) =>
    s.points.map((p) => (spec.ci ? p.y + Z95 * p.se : p.y)),
  );
  const [xLo, xHi] = padded(Math.min(...xs), Math.max(...xs));
  const [yLo, yHi] = padded(Math.min(...los), Math.max(...his));

  const plot = {
    left: MARGIN.left,
    right: WIDTH - MARGIN.right,
    top: MARGIN.top,
    bottom: HEIGHT - MARGIN.bottom,
  };
  const sx: Scale = { lo: xLo, hi: xHi, range0: plot.left, range1: plot.right };
  const sy: Scale = { lo: yLo, hi: yHi, range0: plot.bottom, range1: plot.top };

  const parts: string[] = [];
  parts.push(
    `<svg xmlns="http://www.w3.org/2000/svg" width="${WIDTH}" height="${HEIGHT}" viewBox="0 0 ${WIDTH} ${HEIGHT}" font-family="sans-serif" font-size="12">`,
  );
  parts.push(`<rect width="${WIDTH}" height="${HEIGHT}" fill="white"/>`);
  parts.push(
    `<text x="${px((plot.left + plot.right) / 2)}" y="20" text-anchor="middle" font-size="14">${spec.scenario}</text>`,
  );

  for (const t of ticks(xLo, xHi)) {
    const x = apply(sx, t.value);
    parts.push(
      `<line x1="${px(x)}" y1="${px(plot.bottom)}" x2="${px(x)}" y2="${px(plot.bottom + 5)}" stroke="black"/>`,
    );
    parts.push(
      `<text x="${px(x)}" y="${px(plot.bottom + 18)}" text-anchor="middle">${t.label}</text>`,
    );
  }
  for (const t of ticks(yLo, yHi)) {
    const y = apply(sy, t.value);
    parts.push(
      `<line x1="${px(plot.left - 5)}" y1="${px(y)}" x2="${px(plot.left)}" y2="${px(y)}" stroke="black"/>`,
    );
    parts.push(
      `<text x="${px(plot.left - 8)}" y="${px(y + 4)}" text-anchor="end">${t.label}</text>`,
    );
    parts.push(
      `<line x1="${px(plot.left)}" y1="${px(y)}" x2="${px(plot.right)}" y2="${px(y)}" stroke="#dddddd"/>`,
    );
  }
  parts.push(
    `<line x1="${px(plot.left)}" y1="${px(plot.bottom)}" x2="${px(plot.right)}" y2="${px(plot.bottom)}" stroke="black"/>`,
  );
  parts.push(
    `<line x1="${px(plot.left)}" y1="${px(plot.top)}" x2="${px(plot.left)}" y2="${px(plot.bottom)}" stroke="black"/>`,
  );
  parts.push(
    `<text x="${px((plot.left + plot.right) / 2)}" y="${px(HEIGHT - 12)}" text-anchor="middle">${spec.x}</text>`,
  );
  parts.push(
    `<text x="18" y="${px((plot.top + plot.bottom) / 2)}" text-anchor="middle" transform="rotate(-90 18 ${px((plot.top + plot.bottom) / 2)})">${spec.y}</text>`,
  );

  series.forEach((s, i) => {
    const color = PALETTE[i % PALETTE.length];
    const line = s.points.map((p): [number, number] => [apply(sx, p.x), apply(sy, p.y)]);
    if (spec.ci) {
      const upper = s.points.map((p): [number, number] => [
        apply(sx, p.x),
        apply(sy, p.y + Z95 * p.se),
      ]);
      const lower = s.points.map((p): [number, number] => [
        apply(sx, p.x),
        apply(sy, p.y - Z95 * p.se),
      ]);
      parts.push(
        `<polygon class="ci-band" points="${polyline([...upper, ...lower.slice().reverse()])}" fill="${color}" fill-opacity="0.15" stroke="none"/>`,
      );
      parts.push(
        `<polyline class="ci-edge" points="${polyline(upper)}" fill="none" stroke="${color}" stroke-dasharray="4 3"/>`,
      );
      parts.push(
        `<polyline class="ci-edge" points="${polyline(lower)}" fill="none" stroke="${color}" stroke-dasharray="4 3"/>`,
      );
    }
    parts.push(
      `<polyline class="series-line" points="${polyline(line)}" fill="none" stroke="${color}" stroke-width="1.5"/>`,
    );
    for (const [x, y] of line) {
      parts.push(`<circle cx="${px(x)}" cy="${px(y)}" r="2.5" fill="${color}"/>`);
    }
  });

  series.forEach((s, i) => {
    const color = PALETTE[i % PALETTE.length];
    const ly = plot.top + 10 + i * 16;
    const lx = plot.right - 150;
    parts.push(
      `<line x1="${px(lx)}" y1="${px(ly)}" x2="${px(lx + 22)}" y2="${px(ly)}" stroke="${color}" stroke-width="1.5"/>`,
    );
    parts.push(`<text x="${px(lx + 28)}" y="${px(ly + 4)}">${s.estimator}</text>`);
  });

  parts.push("</svg>");
  return parts.join("\n") + "\n";
}
