import { SweepRow, controllerLabel } from "./csv";
import { BLUE, RED, line, rect, svgDocument, text } from "./svg";

export interface HeatmapCell {
  rowKey: string;     // controller / spacing variant
  colKey: string;     // target speed x jam start
  crashed: boolean;   // any repeat crashed
  value: number;      // max delta_v if crashed, else max spacing error
  repeats: number;
}

/** Aggregate jamming rows into heatmap cells; repeats combine by max
 * (worst case). A cell counts as crashed when any repeat crashed. */
export function buildHeatmapCells(rows: SweepRow[]): Map<string, HeatmapCell> {
  const cells = new Map<string, HeatmapCell>();
  for (const r of rows) {
    if (r.attackKind !== "jam") continue;
    const rowKey = controllerLabel(r);
    const colKey = `${r.targetSpeedKmh} km/h @ ${r.attackStartS} s`;
    const key = `${rowKey}|${colKey}`;
    const metric = r.crashed ? (r.deltaVMs ?? 0) : (r.maxSpacingErrM ?? 0);
    const cell = cells.get(key);
    if (!cell) {
      cells.set(key, { rowKey, colKey, crashed: r.crashed, value: metric, repeats: 1 });
    } else {
      cell.repeats += 1;
      if (r.crashed && !cell.crashed) {
        cell.crashed = true;
        cell.value = metric;
      } else if (r.crashed === cell.crashed) {
        cell.value = Math.max(cell.value, metric);
      }
    }
  }
  return cells;
}

const CELL_W = 86;
const CELL_H = 30;
const LEFT = 120;
const TOP = 70;

/** Jamming heat map: red cells with the impact velocity where the attack
 * caused an accident, blue cells with the maximum spacing error where it did
 * not. Returns null when no jamming rows exist. */
export function renderJammingHeatmap(rows: SweepRow[]): string | null {
  const cells = buildHeatmapCells(rows);
  if (cells.size === 0) return null;
  const rowKeys = [...new Set([...cells.values()].map((c) => c.rowKey))].sort();
  const colKeys = [...new Set([...cells.values()].map((c) => c.colKey))].sort(
    (a, b) => a.localeCompare(b, undefined, { numeric: true }));

  const width = LEFT + colKeys.length * CELL_W + 20;
  const height = TOP + rowKeys.length * CELL_H + 20;
  const body: string[] = [];
  body.push(text(LEFT, 20, "Jamming attack impact",
    'font-size="14" font-weight="bold"'));
  body.push(text(LEFT, 38,
    "red: accident, impact velocity (m/s); blue: no accident, max spacing error (m)"));

  colKeys.forEach((c, j) => {
    body.push(text(LEFT + j * CELL_W + CELL_W / 2, TOP - 8, c,
      'text-anchor="middle" font-size="9"'));
  });
  rowKeys.forEach((rk, i) => {
    const y = TOP + i * CELL_H;
    body.push(text(LEFT - 8, y + CELL_H / 2 + 4, rk, 'text-anchor="end"'));
    colKeys.forEach((ck, j) => {
      const cell = cells.get(`${rk}|${ck}`);
      const x = LEFT + j * CELL_W;
      if (!cell) {
        body.push(rect(x, y, CELL_W, CELL_H, "#eeeeee", 'stroke="#fff"'));
        return;
      }
      body.push(rect(x, y, CELL_W, CELL_H, cell.crashed ? RED : BLUE,
        'stroke="#ffffff"'));
      const style = cell.crashed
        ? 'text-anchor="middle" fill="#ffffff" font-style="italic"'
        : 'text-anchor="middle" fill="#ffffff" font-weight="bold"';
      body.push(text(x + CELL_W / 2, y + CELL_H / 2 + 4,
        cell.value.toPrecision(3), style));
    });
  });
  body.push(line(LEFT, TOP, LEFT + colKeys.length * CELL_W, TOP));
  return svgDocument(width, height, body);
}
