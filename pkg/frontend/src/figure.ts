import { ResultRow } from "./csv.js";

export interface FigureSpec {
  scenario: string;
  x: string;
  y: string;
  ci: boolean;
}

export interface SeriesPoint {
  x: number;
  y: number;
  se: number;
}

export interface Series {
  estimator: string;
  points: SeriesPoint[];
}

/**
 * Filter rows to one scenario / param_name / kind and group them into
 * one series per estimator, each sorted by the parameter value.
 */
export function selectSeries(rows: ResultRow[], spec: FigureSpec): Series[] {
  const hit = rows.filter(
    (r) => r.scenario === spec.scenario && r.param_name === spec.x && r.kind === spec.y,
  );
  if (hit.length === 0) {
    throw new Error(
      `empty selection: no rows with scenario=${spec.scenario} param_name=${spec.x} kind=${spec.y}`,
    );
  }
  const byEstimator = new Map<string, SeriesPoint[]>();
  for (const r of hit) {
    let pts = byEstimator.get(r.estimator);
    if (!pts) {
      pts = [];
      byEstimator.set(r.estimator, pts);
    }
    pts.push({ x: r.param_value, y: r.estimate, se: r.stderr });
  }
  const estimators = [...byEstimator.keys()].sort();
  return estimators.map((estimator) => {
    const points = byEstimator.get(estimator)!;
    points.sort((a, b) => a.x - b.x);
    return { estimator, points };
  });
}
