/**
 * Rendering core for spinring CSV bundles.
 *
 * Two plot kinds:
 *   heatmap — overlap_map.csv (t,d,value) as a white-to-black grid, the data
 *             maximum mapped to black, extrema reported losslessly in the
 *             margin (and as data-min/data-max attributes);
 *   lines   — one fidelity.csv (t,value) curve per bundle, overlaid with
 *             distinct stroke styles and a legend naming each bundle.
 *
 * Only the documented bundle schemas are read; parse errors name the file,
 * line and column that failed.
 */

// ---------------------------------------------------------------------------
// Types
// ---------------------------------------------------------------------------

export interface OverlapRow {
  t: number;
  d: number;
  value: number;
}

export interface FidelityPoint {
  t: number;
  value: number;
}

export interface CurveSeries {
  label: string;
  points: FidelityPoint[];
}

export class SchemaError extends Error {}

// ---------------------------------------------------------------------------
// CSV parsing
// ---------------------------------------------------------------------------

function splitRows(text: string): string[] {
  return text.split(/\r?\n/).filter((line) => line.trim().length > 0);
}

function parseNumber(raw: string, file: string, line: number, column: string): number {
  const value = Number(raw);
  if (raw.trim() === "" || Number.isNaN(value)) {
    throw new SchemaError(
      `${file}:${line}: column "${column}" is not a number (got ${JSON.stringify(raw)})`
    );
  }
  return value;
}

export function parseOverlapCsv(text: string, file = "overlap_map.csv"): OverlapRow[] {
  const rows = splitRows(text);
  if (rows.length === 0) {
    throw new SchemaError(`${file}: file is empty`);
  }
  if (rows[0].trim() !== "t,d,value") {
    throw new SchemaError(`${file}:1: expected header "t,d,value", got "${rows[0]}"`);
  }
  if (rows.length === 1) {
    throw new SchemaError(`${file}: no data rows`);
  }
  return rows.slice(1).map((row, i) => {
    const cells = row.split(",");
    if (cells.length !== 3) {
      throw new SchemaError(`${file}:${i + 2}: expected 3 columns, got ${cells.length}`);
    }
    return {
      t: parseNumber(cells[0], file, i + 2, "t"),
      d: parseNumber(cells[1], file, i + 2, "d"),
      value: parseNumber(cells[2], file, i + 2, "value"),
    };
  });
}

export function parseFidelityCsv(text: string, file = "fidelity.csv"): FidelityPoint[] {
  const rows = splitRows(text);
  if (rows.length === 0) {
    throw new SchemaError(`${file}: file is empty`);
  }
  if (rows[0].trim() !== "t,value") {
    throw new SchemaError(`${file}:1: expected header "t,value", got "${rows[0]}"`);
  }
  if (rows.length === 1) {
    throw new SchemaError(`${file}: no data rows`);
  }
  return rows.slice(1).map((row, i) => {
    const cells = row.split(",");
    if (cells.length !== 2) {
      throw new SchemaError(`${file}:${i + 2}: expected 2 columns, got ${cells.length}`);
    }
    return {
      t: parseNumber(cells[0], file, i + 2, "t"),
      value: parseNumber(cells[1], file, i + 2, "value"),
    };
  });
}

// ---------------------------------------------------------------------------
// Shared SVG helpers
// ---------------------------------------------------------------------------

function esc(s: string): string {
  return s.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
}

function niceTicks(min: number, max: number, count: number): number[] {
  const range = max - min || 1;
  const rough = range / count;
  const mag = Math.pow(10, Math.floor(Math.log10(rough)));
  const step = [1, 2, 5, 10].map((m) => m * mag).find((n) => n >= rough) ?? rough;
  const ticks: number[] = [];
  for (let v = Math.ceil(min / step) * step; v <= max + step * 1e-9; v += step) {
    ticks.push(Number(v.toFixed(12)));
  }
  return ticks;
}

function fmtTick(v: number): string {
  return Math.abs(v) >= 1000 || (v !== 0 && Math.abs(v) < 0.01)
    ? v.toExponential(1)
    : String(Number(v.toPrecision(6)));
}

// ---------------------------------------------------------------------------
// Heatmap
// ---------------------------------------------------------------------------

export interface HeatmapOptions {
  title?: string;
  width?: number;
  height?: number;
}

/** White-to-black heatmap; the data maximum is black, extrema go in the margin. */
export function buildHeatmap(rows: OverlapRow[], opts: HeatmapOptions = {}): string {
  const ts = [...new Set(rows.map((r) => r.t))].sort((a, b) => a - b);
  const ds = [...new Set(rows.map((r) => r.d))].sort((a, b) => a - b);
  const index = new Map<string, number>();
  for (const r of rows) index.set(`${r.t}|${r.d}`, r.value);

  let vmin = Infinity;
  let vmax = -Infinity;
  for (const r of rows) {
    if (r.value < vmin) vmin = r.value;
    if (r.value > vmax) vmax = r.value;
  }
  const scale = vmax > 0 ? vmax : 1;

  const W = opts.width ?? 760;
  const H = opts.height ?? 420;
  const ml = 56;
  const mr = 16;
  const mt = 30;
  const mb = 64;
  const pw = W - ml - mr;
  const ph = H - mt - mb;
  const cw = pw / ts.length;
  const ch = ph / ds.length;

  let s = `<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 ${W} ${H}" `;
  s += `font-family="Helvetica, Arial, sans-serif" data-min="${vmin}" data-max="${vmax}">\n`;
  s += `<rect width="${W}" height="${H}" fill="#fff"/>\n`;
  if (opts.title) {
    s += `<text x="${ml}" y="${mt - 10}" font-size="11" font-weight="600" fill="#222">${esc(opts.title)}</text>\n`;
  }
  for (let col = 0; col < ts.length; col++) {
    for (let row = 0; row < ds.length; row++) {
      const v = index.get(`${ts[col]}|${ds[row]}`);
      if (v === undefined) continue;
      const shade = Math.round(255 * (1 - Math.min(Math.max(v / scale, 0), 1)));
      if (shade === 255) continue; // white cells need no rect on white ground
      const x = ml + col * cw;
      const y = mt + ph - (row + 1) * ch;
      s += `<rect x="${x.toFixed(2)}" y="${y.toFixed(2)}" width="${(cw + 0.05).toFixed(2)}" `;
      s += `height="${(ch + 0.05).toFixed(2)}" fill="rgb(${shade},${shade},${shade})"/>\n`;
    }
  }
  // frame and axes
  s += `<rect x="${ml}" y="${mt}" width="${pw}" height="${ph}" fill="none" stroke="#333" stroke-width="0.8"/>\n`;
  for (const tick of niceTicks(ts[0], ts[ts.length - 1], 8)) {
    const x = ml + ((tick - ts[0]) / (ts[ts.length - 1] - ts[0] || 1)) * pw;
    s += `<line x1="${x.toFixed(1)}" y1="${mt + ph}" x2="${x.toFixed(1)}" y2="${mt + ph + 4}" stroke="#333" stroke-width="0.6"/>\n`;
    s += `<text x="${x.toFixed(1)}" y="${mt + ph + 15}" text-anchor="middle" font-size="8" fill="#444">${fmtTick(tick)}</text>\n`;
  }
  for (const tick of niceTicks(ds[0], ds[ds.length - 1], 8)) {
    const y = mt + ph - ((tick - ds[0]) / (ds[ds.length - 1] - ds[0] || 1)) * ph;
    s += `<line x1="${ml - 4}" y1="${y.toFixed(1)}" x2="${ml}" y2="${y.toFixed(1)}" stroke="#333" stroke-width="0.6"/>\n`;
    s += `<text x="${ml - 6}" y="${(y + 3).toFixed(1)}" text-anchor="end" font-size="8" fill="#444">${fmtTick(tick)}</text>\n`;
  }
  s += `<text x="${ml + pw / 2}" y="${H - 34}" text-anchor="middle" font-size="9" fill="#333">time (coupling units)</text>\n`;
  s += `<text x="14" y="${mt + ph / 2}" text-anchor="middle" font-size="9" fill="#333" transform="rotate(-90,14,${mt + ph / 2})">site offset d</text>\n`;
  // lossless extrema report
  s += `<text class="extrema" x="${ml}" y="${H - 18}" font-size="8" fill="#555">min=${vmin} max=${vmax}</text>\n`;
  s += `<text x="${ml}" y="${H - 8}" font-size="8" fill="#888">white = 0, black = ${vmax}</text>\n`;
  s += `</svg>\n`;
  return s;
}

// ---------------------------------------------------------------------------
// Line plot
// ---------------------------------------------------------------------------

const STROKES = [
  { color: "#000000", dash: "" },
  { color: "#d62728", dash: "6,3" },
  { color: "#1f77b4", dash: "2,2" },
  { color: "#2ca02c", dash: "8,3,2,3" },
  { color: "#9467bd", dash: "1,2" },
  { color: "#8c564b", dash: "10,4" },
];

export interface LinesOptions {
  title?: string;
  width?: number;
  height?: number;
}

/** Overlaid fidelity curves, one per bundle, with a legend of bundle labels. */
export function buildLines(series: CurveSeries[], opts: LinesOptions = {}): string {
  if (series.length === 0) {
    throw new SchemaError("no curves to plot");
  }
  const W = opts.width ?? 760;
  const H = opts.height ?? 420;
  const ml = 56;
  const mr = 16;
  const mt = 30;
  const mb = 46;
  const pw = W - ml - mr;
  const ph = H - mt - mb;

  const tMin = Math.min(...series.map((s) => s.points[0].t));
  const tMax = Math.max(...series.map((s) => s.points[s.points.length - 1].t));
  let vmin = Infinity;
  let vmax = -Infinity;
  for (const s of series) {
    for (const p of s.points) {
      if (p.value < vmin) vmin = p.value;
      if (p.value > vmax) vmax = p.value;
    }
  }
  const yLo = Math.min(0, vmin);
  const yHi = Math.max(1, vmax);
  const xOf = (t: number) => ml + ((t - tMin) / (tMax - tMin || 1)) * pw;
  const yOf = (v: number) => mt + ph - ((v - yLo) / (yHi - yLo || 1)) * ph;

  let s = `<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 ${W} ${H}" `;
  s += `font-family="Helvetica, Arial, sans-serif" data-min="${vmin}" data-max="${vmax}" data-curves="${series.length}">\n`;
  s += `<rect width="${W}" height="${H}" fill="#fff"/>\n`;
  if (opts.title) {
    s += `<text x="${ml}" y="${mt - 10}" font-size="11" font-weight="600" fill="#222">${esc(opts.title)}</text>\n`;
  }
  for (const tick of niceTicks(yLo, yHi, 5)) {
    const y = yOf(tick);
    s += `<line x1="${ml}" y1="${y.toFixed(1)}" x2="${ml + pw}" y2="${y.toFixed(1)}" stroke="#eee" stroke-width="0.5"/>\n`;
    s += `<text x="${ml - 6}" y="${(y + 3).toFixed(1)}" text-anchor="end" font-size="8" fill="#444">${fmtTick(tick)}</text>\n`;
  }
  for (const tick of niceTicks(tMin, tMax, 8)) {
    const x = xOf(tick);
    s += `<line x1="${x.toFixed(1)}" y1="${mt + ph}" x2="${x.toFixed(1)}" y2="${mt + ph + 4}" stroke="#333" stroke-width="0.6"/>\n`;
    s += `<text x="${x.toFixed(1)}" y="${mt + ph + 15}" text-anchor="middle" font-size="8" fill="#444">${fmtTick(tick)}</text>\n`;
  }
  series.forEach((sr, i) => {
    const st = STROKES[i % STROKES.length];
    const pts = sr.points.map((p) => `${xOf(p.t).toFixed(2)},${yOf(p.value).toFixed(2)}`).join(" ");
    s += `<polyline class="curve" fill="none" stroke="${st.color}" stroke-width="1.1" `;
    s += `${st.dash ? `stroke-dasharray="${st.dash}" ` : ""}points="${pts}"/>\n`;
  });
  s += `<rect x="${ml}" y="${mt}" width="${pw}" height="${ph}" fill="none" stroke="#333" stroke-width="0.8"/>\n`;
  // legend
  const legendW = Math.max(...series.map((sr) => sr.label.length)) * 5 + 30;
  const legendH = series.length * 12 + 6;
  const lx = ml + pw - legendW - 6;
  const ly = mt + 6;
  s += `<rect x="${lx}" y="${ly}" width="${legendW}" height="${legendH}" rx="2" fill="white" fill-opacity="0.88" stroke="#ccc" stroke-width="0.5"/>\n`;
  series.forEach((sr, i) => {
    const st = STROKES[i % STROKES.length];
    const yy = ly + 11 + i * 12;
    s += `<line x1="${lx + 5}" y1="${yy - 3}" x2="${lx + 21}" y2="${yy - 3}" stroke="${st.color}" stroke-width="1.1" ${st.dash ? `stroke-dasharray="${st.dash}"` : ""}/>\n`;
    s += `<text class="legend" x="${lx + 25}" y="${yy}" font-size="8" fill="#333">${esc(sr.label)}</text>\n`;
  });
  s += `<text x="${ml + pw / 2}" y="${H - 8}" text-anchor="middle" font-size="9" fill="#333">time (coupling units)</text>\n`;
  s += `<text x="14" y="${mt + ph / 2}" text-anchor="middle" font-size="9" fill="#333" transform="rotate(-90,14,${mt + ph / 2})">fidelity</text>\n`;
  s += `<text class="extrema" x="${ml}" y="${mt + ph + 28}" font-size="8" fill="#555">min=${vmin} max=${vmax}</text>\n`;
  s += `</svg>\n`;
  return s;
}
