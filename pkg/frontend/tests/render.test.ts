import { describe, expect, it } from "vitest";
import { mkdtempSync, mkdirSync, writeFileSync, existsSync } from "fs";
import { tmpdir } from "os";
import path from "path";

import {
  buildHeatmap,
  buildLines,
  parseFidelityCsv,
  parseOverlapCsv,
  SchemaError,
} from "../src/renderlib.js";
import { expandBundles, parseArgs, renderToString } from "../src/render.js";

function attr(svg: string, name: string): string {
  const m = svg.match(new RegExp(`${name}="([^"]*)"`));
  if (!m) throw new Error(`attribute ${name} missing`);
  return m[1];
}

function makeOverlapCsv(): { text: string; min: number; max: number } {
  const lines = ["t,d,value"];
  let min = Infinity;
  let max = -Infinity;
  for (let ti = 0; ti <= 20; ti++) {
    for (let d = -5; d <= 5; d++) {
      const v = Math.abs(Math.sin(0.37 * ti + d)) * 0.69289642365747632;
      lines.push(`${ti * 0.25},${d},${v.toPrecision(17)}`);
      min = Math.min(min, Number(v.toPrecision(17)));
      max = Math.max(max, Number(v.toPrecision(17)));
    }
  }
  return { text: lines.join("\n") + "\n", min, max };
}

describe("csv parsing", () => {
  it("parses the documented overlap schema", () => {
    const rows = parseOverlapCsv("t,d,value\n0,0,1\n0,1,0.5\n");
    expect(rows).toHaveLength(2);
    expect(rows[1]).toEqual({ t: 0, d: 1, value: 0.5 });
  });

  it("rejects empty files and missing data", () => {
    expect(() => parseOverlapCsv("")).toThrow(SchemaError);
    expect(() => parseOverlapCsv("t,d,value\n")).toThrow(/no data rows/);
    expect(() => parseFidelityCsv("t,value\n")).toThrow(/no data rows/);
  });

  it("names the offending column and line", () => {
    expect(() => parseOverlapCsv("t,d,value\n0,0,1\n0,oops,1\n", "x.csv")).toThrow(
      /x\.csv:3: column "d"/
    );
    expect(() => parseFidelityCsv("t,value\n0\n", "f.csv")).toThrow(/f\.csv:2: expected 2 columns/);
    expect(() => parseOverlapCsv("wrong,header\n1,2,3\n", "h.csv")).toThrow(/h\.csv:1: expected header/);
  });
});

describe("heatmap", () => {
  it("reports extrema losslessly and scales max to black", () => {
    const { text, min, max } = makeOverlapCsv();
    const rows = parseOverlapCsv(text);
    const svg = buildHeatmap(rows);
    expect(Number(attr(svg, "data-min"))).toBe(min);
    expect(Number(attr(svg, "data-max"))).toBe(max);
    expect(svg).toContain(`min=${min} max=${max}`);
    expect(svg).toContain(`black = ${max}`);
  });

  it("renders one rect per nonwhite cell", () => {
    const svg = buildHeatmap(parseOverlapCsv("t,d,value\n0,0,1\n0,1,0\n1,0,0.5\n1,1,0\n"));
    const rects = svg.match(/<rect [^>]*fill="rgb/g) ?? [];
    expect(rects).toHaveLength(2); // the two zero cells stay white
  });
});

describe("lines", () => {
  it("overlays one labelled curve per bundle", () => {
    const series = [1, 2, 3, 4, 5].map((k) => ({
      label: `first ${k} harmonics`,
      points: [
        { t: 0, value: 1 },
        { t: 1, value: 1 - 0.05 * k },
        { t: 2, value: 1 - 0.1 * k },
      ],
    }));
    const svg = buildLines(series);
    expect(Number(attr(svg, "data-curves"))).toBe(5);
    expect((svg.match(/class="curve"/g) ?? [])).toHaveLength(5);
    for (const s of series) expect(svg).toContain(`>${s.label}</text>`);
  });

  it("refuses an empty curve set", () => {
    expect(() => buildLines([])).toThrow(SchemaError);
  });
});

describe("cli wiring", () => {
  it("parses arguments", () => {
    const args = parseArgs(["--bundle", "a", "--bundle", "b", "--kind", "lines", "--out", "x.svg"]);
    expect(args.bundles).toEqual(["a", "b"]);
    expect(args.kind).toBe("lines");
    expect(() => parseArgs(["--kind", "lines", "--out", "x"])).toThrow(/--bundle/);
    expect(() => parseArgs(["--bundle", "a", "--kind", "pie", "--out", "x"])).toThrow(/heatmap or lines/);
  });

  it("expands index-only directories and renders a sweep", () => {
    const root = mkdtempSync(path.join(tmpdir(), "sweep-"));
    const labels: string[] = [];
    const entries: { directory: string; label: string }[] = [];
    for (const m of [5, 13, 25, 50, 100]) {
      const dir = path.join(root, `m${m}`);
      mkdirSync(dir);
      const label = `first ${m} harmonics`;
      labels.push(label);
      entries.push({ directory: `m${m}`, label });
      writeFileSync(path.join(dir, "metadata.json"), JSON.stringify({ label }));
      writeFileSync(
        path.join(dir, "fidelity.csv"),
        "t,value\n0,1\n6.28,0.9\n12.56,0.8\n"
      );
    }
    writeFileSync(path.join(root, "index.json"), JSON.stringify({ bundles: entries }));
    expect(expandBundles([root])).toHaveLength(5);
    const svg = renderToString({ bundles: [root], kind: "lines", out: "unused.svg" });
    expect(Number(attr(svg, "data-curves"))).toBe(5);
    for (const label of labels) expect(svg).toContain(label);
  });

  it("renders a heatmap bundle and fails cleanly on an empty csv", () => {
    const dir = mkdtempSync(path.join(tmpdir(), "bundle-"));
    const { text, min, max } = makeOverlapCsv();
    writeFileSync(path.join(dir, "overlap_map.csv"), text);
    writeFileSync(path.join(dir, "metadata.json"), JSON.stringify({ label: "step modulation" }));
    const svg = renderToString({ bundles: [dir], kind: "heatmap", out: "unused.svg" });
    expect(Number(attr(svg, "data-min"))).toBe(min);
    expect(Number(attr(svg, "data-max"))).toBe(max);

    const empty = mkdtempSync(path.join(tmpdir(), "empty-"));
    writeFileSync(path.join(empty, "overlap_map.csv"), "");
    expect(() => renderToString({ bundles: [empty], kind: "heatmap", out: "nope.svg" })).toThrow(
      /is empty/
    );
    expect(existsSync("nope.svg")).toBe(false);
  });
});
