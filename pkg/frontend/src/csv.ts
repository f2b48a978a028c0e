import Papa from "papaparse";

export const REQUIRED_COLUMNS = [
  "scenario",
  "param_name",
  "param_value",
  "estimator",
  "kind",
  "estimate",
  "stderr",
  "replicates",
  "seed",
] as const;

export interface ResultRow {
  scenario: string;
  param_name: string;
  param_value: number;
  estimator: string;
  kind: string;
  estimate: number;
  stderr: number;
  replicates: number;
  seed: number;
}

/** Parse the scenario-runner CSV, checking the header and numeric fields. */
export function parseResultsCsv(text: string): ResultRow[] {
  const parsed = Papa.parse<Record<string, string>>(text.trim(), {
    header: true,
    skipEmptyLines: true,
  });
  if (parsed.errors.length > 0) {
    const e = parsed.errors[0];
    throw new Error(`csv parse error at row ${e.row}: ${e.message}`);
  }
  const fields = parsed.meta.fields ?? [];
  for (const col of REQUIRED_COLUMNS) {
    if (!fields.includes(col)) {
      throw new Error(`missing column: ${col}`);
    }
  }
  return parsed.data.map((raw, i) => {
    const num = (col: string): number => {
      const v = Number(raw[col]);
      if (!Number.isFinite(v)) {
        throw new Error(`row ${i + 2}: ${col} is not a finite number: ${JSON.stringify(raw[col])}`);
      }
      return v;
    };
    return {
      scenario: raw.scenario,
      param_name: raw.param_name,
      param_value: num("param_value"),
      estimator: raw.estimator,
      kind: raw.kind,
      estimate: num("estimate"),
      stderr: num("stderr"),
      replicates: num("replicates"),
      seed: num("seed"),
    };
  });
}
