#!/usr/bin/env node
/**
 * spinring bundle renderer.
 *
 * Usage:
 *   render --bundle DIR [--bundle DIR]... --kind heatmap|lines --out FILE
 *
 * heatmap takes exactly one bundle holding overlap_map.csv; lines overlays
 * fidelity.csv curves from every bundle, labelled from each bundle's
 * metadata.json.  A bundle directory that only holds an index.json (a sweep
 * or multi-curve preset) is expanded into its listed sub-bundles.
 */

import { readFileSync, writeFileSync, existsSync } from "fs";
import path from "path";

import {
  buildHeatmap,
  buildLines,
  CurveSeries,
  parseFidelityCsv,
  parseOverlapCsv,
  SchemaError,
} from "./renderlib.js";

interface CliArgs {
  bundles: string[];
  kind: "heatmap" | "lines";
  out: string;
  title?: string;
}

export function parseArgs(argv: string[]): CliArgs {
  const bundles: string[] = [];
  let kind = "";
  let out = "";
  let title: string | undefined;
  for (let i = 0; i < argv.length; i++) {
    switch (argv[i]) {
      case "--bundle":
        bundles.push(argv[++i]);
        break;
      case "--kind":
        kind = argv[++i];
        break;
      case "--out":
        out = argv[++i];
        break;
      case "--title":
        title = argv[++i];
        break;
      default:
        throw new SchemaError(`unknown argument ${argv[i]}`);
    }
  }
  if (bundles.length === 0) throw new SchemaError("at least one --bundle is required");
  if (kind !== "heatmap" && kind !== "lines") {
    throw new SchemaError(`--kind must be heatmap or lines, got "${kind}"`);
  }
  if (!out) throw new SchemaError("--out FILE is required");
  return { bundles, kind, out, title };
}

function bundleLabel(dir: string): string {
  const metaPath = path.join(dir, "metadata.json");
  if (existsSync(metaPath)) {
    try {
      const meta = JSON.parse(readFileSync(metaPath, "utf-8"));
      if (typeof meta.label === "string" && meta.label.length > 0) return meta.label;
    } catch {
      // fall through to the directory name
    }
  }
  return path.basename(dir);
}

/** Expand index.json-only directories (sweeps, multi-curve presets). */
export function expandBundles(dirs: string[]): string[] {
  const expanded: string[] = [];
  for (const dir of dirs) {
    const indexPath = path.join(dir, "index.json");
    const hasCsv =
      existsSync(path.join(dir, "fidelity.csv")) ||
      existsSync(path.join(dir, "overlap_map.csv"));
    if (!hasCsv && existsSync(indexPath)) {
      const index = JSON.parse(readFileSync(indexPath, "utf-8"));
      for (const entry of index.bundles ?? []) {
        expanded.push(path.join(dir, entry.directory));
      }
    } else {
      expanded.push(dir);
    }
  }
  return expanded;
}

export function renderToString(args: CliArgs): string {
  const bundles = expandBundles(args.bundles);
  if (args.kind === "heatmap") {
    if (bundles.length !== 1) {
      throw new SchemaError(`heatmap takes exactly one bundle, got ${bundles.length}`);
    }
    const csvPath = path.join(bundles[0], "overlap_map.csv");
    const rows = parseOverlapCsv(readFileSync(csvPath, "utf-8"), csvPath);
    return buildHeatmap(rows, { title: args.title ?? bundleLabel(bundles[0]) });
  }
  const series: CurveSeries[] = bundles.map((dir) => {
    const csvPath = path.join(dir, "fidelity.csv");
    return {
      label: bundleLabel(dir),
      points: parseFidelityCsv(readFileSync(csvPath, "utf-8"), csvPath),
    };
  });
  return buildLines(series, { title: args.title });
}

function main(): void {
  const args = parseArgs(process.argv.slice(2));
  const svg = renderToString(args);
  writeFileSync(args.out, svg);
  console.log(`wrote ${args.out}`);
}

const invokedDirectly =
  process.argv[1] !== undefined &&
  import.meta.url === new URL(`file://${path.resolve(process.argv[1])}`).href;

if (invokedDirectly) {
  try {
    main();
  } catch (err) {
    console.error(err instanceof Error ? err.message : String(err));
    process.exit(1);
  }
}
