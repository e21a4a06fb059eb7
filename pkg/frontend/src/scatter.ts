import { SweepRow, controllerLabel } from "./csv";
import { BLUE, RED, circle, rect, svgDocument, text } from "./svg";

/** Facet key: target speed column x controller sub-column. Every filtered
 * row lands in exactly one facet. */
export function facetRows(rows: SweepRow[], attackKind: string): Map<string, SweepRow[]> {
  const facets = new Map<string, SweepRow[]>();
  for (const r of rows) {
    if (r.attackKind !== attackKind) continue;
    const key = `${r.targetSpeedKmh} km/h | ${controllerLabel(r)}`;
    const list = facets.get(key);
    if (list) list.push(r);
    else facets.set(key, [r]);
  }
  return facets;
}

const FACET_W = 170;
const PANEL_H = 110;
const LEFT = 60;
const TOP = 60;
const PAD = 14;

function yScale(values: number[]): (v: number) => number {
  const max = Math.max(1e-9, ...values);
  return (v) => PANEL_H - 8 - (v / max) * (PANEL_H - 24);
}

/** Injection scatter grid: impact metric vs. attack value. Crash points sit
 * on the plain upper panel labeled with delta_v; non-crash points sit on the
 * shaded lower panel labeled with the maximum spacing error. */
export function renderInjectionScatter(rows: SweepRow[], attackKind: string): string | null {
  const facets = facetRows(rows, attackKind);
  if (facets.size === 0) return null;
  const keys = [...facets.keys()].sort(
    (a, b) => a.localeCompare(b, undefined, { numeric: true }));

  const width = LEFT + keys.length * (FACET_W + PAD) + 20;
  const height = TOP + 2 * PANEL_H + 60;
  const body: string[] = [];
  body.push(text(LEFT, 20, `${attackKind} attack impact vs. attack value`,
    'font-size="14" font-weight="bold"'));
  body.push(text(LEFT, 38,
    "upper panel: crashes (impact velocity, m/s); shaded panel: no crash (max spacing error, m)"));
  body.push(text(20, TOP + PANEL_H / 2, "crash", 'text-anchor="middle"'));
  body.push(text(20, TOP + PANEL_H + PANEL_H / 2, "no crash", 'text-anchor="middle"'));

  keys.forEach((key, i) => {
    const x0 = LEFT + i * (FACET_W + PAD);
    const facet = facets.get(key)!;
    body.push(text(x0 + FACET_W / 2, TOP - 8, key,
      'text-anchor="middle" font-size="10"'));
    // plain crash panel over shaded non-crash panel
    body.push(rect(x0, TOP, FACET_W, PANEL_H, "#ffffff", 'stroke="#999"'));
    body.push(rect(x0, TOP + PANEL_H, FACET_W, PANEL_H, BLUE,
      'stroke="#999" opacity="0.15"'));

    const values = facet.map((r) => r.attackValue ?? 0);
    const vMin = Math.min(...values);
    const vMax = Math.max(...values);
    const xOf = (v: number) =>
      x0 + 14 + (vMax > vMin ? ((v - vMin) / (vMax - vMin)) * (FACET_W - 28) : (FACET_W - 28) / 2);

    const crash = facet.filter((r) => r.crashed);
    const calm = facet.filter((r) => !r.crashed);
    const yCrash = yScale(crash.map((r) => r.deltaVMs ?? 0));
    const yCalm = yScale(calm.map((r) => r.maxSpacingErrM ?? 0));
    for (const r of crash) {
      const cx = xOf(r.attackValue ?? 0);
      const cy = TOP + yCrash(r.deltaVMs ?? 0);
      body.push(circle(cx, cy, 4, RED));
      body.push(text(cx, cy - 7, (r.deltaVMs ?? 0).toPrecision(3),
        'text-anchor="middle" font-size="9"'));
    }
    for (const r of calm) {
      const cx = xOf(r.attackValue ?? 0);
      const cy = TOP + PANEL_H + yCalm(r.maxSpacingErrM ?? 0);
      body.push(circle(cx, cy, 4, BLUE));
      body.push(text(cx, cy - 7, (r.maxSpacingErrM ?? 0).toPrecision(3),
        'text-anchor="middle" font-size="9"'));
    }
    // x-axis tick labels: one per distinct attack value
    [...new Set(values)].sort((a, b) => a - b).forEach((v) => {
      body.push(text(xOf(v), TOP + 2 * PANEL_H + 14, String(v),
        'text-anchor="middle" font-size="9"'));
    });
  });
  return svgDocument(width, height, body);
}
