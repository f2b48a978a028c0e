import { readFileSync, writeFileSync } from "fs";

import { parseResultsCsv } from "./csv.js";
import { FigureSpec, selectSeries } from "./figure.js";
import { buildSvg } from "./svg.js";

/** Turn CSV text into an SVG document string. */
export function renderSvg(csvText: string, spec: FigureSpec): string {
  const rows = parseResultsCsv(csvText);
  const series = selectSeries(rows, spec);
  return buildSvg(series, spec);
}

/** Read the input CSV, render, and write the SVG to disk. */
export function renderFile(inputCsv: string, spec: FigureSpec, out: string): void {
  const text = readFileSync(inputCsv, "utf8");
  writeFileSync(out, renderSvg(text, spec), "utf8");
}
