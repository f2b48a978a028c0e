import { spawnSync } from "child_process";
import { mkdtempSync, readFileSync } from "fs";
import { tmpdir } from "os";
import { fileURLToPath } from "url";
import { join } from "path";
import { expect, test } from "vitest";

const here = fileURLToPath(new URL(".", import.meta.url));
const cliJs = join(here, "..", "dist", "cli.js");
const lassoCsv = join(here, "fixtures", "lasso_r60_seed1.csv");
const goldenPanel = readFileSync(join(here, "golden", "lasso_df_vs_lambda.svg"), "utf8");

const runCli = (args: string[]) => spawnSync("node", [cliJs, ...args], { encoding: "utf8" });

test("writes the figure and exits 0", () => {
  const out = join(mkdtempSync(join(tmpdir(), "plots-")), "fig.svg");
  const res = runCli([lassoCsv, "--scenario", "example-4-lasso", "--x", "lambda", "--y", "df", "--out", out]);
  expect(res.status).toBe(0);
  expect(readFileSync(out, "utf8")).toBe(goldenPanel);
});

test("reruns produce byte-identical output", () => {
  const dir = mkdtempSync(join(tmpdir(), "plots-"));
  const args = (out: string) => [
    lassoCsv, "--scenario", "example-4-lasso", "--x", "lambda", "--y", "df", "--out", out,
  ];
  expect(runCli(args(join(dir, "a.svg"))).status).toBe(0);
  expect(runCli(args(join(dir, "b.svg"))).status).toBe(0);
  expect(readFileSync(join(dir, "a.svg"))).toEqual(readFileSync(join(dir, "b.svg")));
});

test("empty selection exits nonzero with a message", () => {
  const out = join(mkdtempSync(join(tmpdir(), "plots-")), "fig.svg");
  const res = runCli([lassoCsv, "--scenario", "no-such-scenario", "--x", "lambda", "--y", "df", "--out", out]);
  expect(res.status).toBe(1);
  expect(res.stderr).toContain("empty selection");
});

test("missing column exits nonzero with a message", () => {
  const dir = mkdtempSync(join(tmpdir(), "plots-"));
  const bad = join(dir, "bad.csv");
  spawnSync("node", ["-e", `require("fs").writeFileSync(${JSON.stringify(bad)}, "a,b\\n1,2\\n")`]);
  const res = runCli([bad, "--scenario", "x", "--x", "lambda", "--y", "df", "--out", join(dir, "fig.svg")]);
  expect(res.status).toBe(1);
  expect(res.stderr).toContain("missing column");
});

test("missing required flag exits nonzero", () => {
  const res = runCli([lassoCsv, "--scenario", "example-4-lasso", "--y", "df", "--out", "/tmp/fig.svg"]);
  expect(res.status).toBe(2);
  expect(res.stderr).toContain("x");
});
