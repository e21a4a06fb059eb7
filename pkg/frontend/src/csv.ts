import * as fs from "fs";

export const EXPECTED_HEADER = [
  "run_id", "seed", "controller", "spacing_param", "target_speed_kmh",
  "attack_kind", "attack_value", "attack_start_s", "crashed", "crash_time_s",
  "crash_rear_index", "delta_v_ms", "max_spacing_err_m",
  "avg_max_spacing_err_m", "avg_max_abs_accel_ms2", "error",
];

export interface SweepRow {
  runId: string;
  seed: number;
  controller: string;
  spacingParam: number;
  targetSpeedKmh: number;
  attackKind: string;
  attackValue: number | null;
  attackStartS: number | null;
  crashed: boolean;
  crashTimeS: number | null;
  crashRearIndex: number | null;
  deltaVMs: number | null;
  maxSpacingErrM: number | null;
  avgMaxSpacingErrM: number | null;
  avgMaxAbsAccelMs2: number | null;
  error: string;
}

function num(field: string, value: string, line: number): number {
  const x = Number(value);
  if (value === "" || !Number.isFinite(x)) {
    throw new Error(`line ${line}: column ${field} is not a number: "${value}"`);
  }
  return x;
}

function optNum(field: string, value: string, line: number): number | null {
  return value === "" ? null : num(field, value, line);
}

/** Strict parser for the harness result CSV: exact header, 16 columns per
 * row, numeric columns validated. */
export function parseSweepCsv(text: string): SweepRow[] {
  const lines = text.split("\n").filter((l) => l.length > 0);
  if (lines.length === 0) throw new Error("empty CSV");
  const header = lines[0].split(",");
  if (header.join(",") !== EXPECTED_HEADER.join(",")) {
    const missing = EXPECTED_HEADER.filter((c) => !header.includes(c));
    throw new Error(
      missing.length > 0
        ? `CSV is missing required columns: ${missing.join(", ")}`
        : `unexpected CSV header: ${lines[0]}`);
  }
  const rows: SweepRow[] = [];
  for (let i = 1; i < lines.length; i++) {
    const f = lines[i].split(",");
    if (f.length !== EXPECTED_HEADER.length) {
      throw new Error(`line ${i + 1}: expected ${EXPECTED_HEADER.length} columns, got ${f.length}`);
    }
    const n = i + 1;
    if (f[15] !== "") continue; // error rows carry no metrics
    rows.push({
      runId: f[0],
      seed: num("seed", f[1], n),
      controller: f[2],
      spacingParam: num("spacing_param", f[3], n),
      targetSpeedKmh: num("target_speed_kmh", f[4], n),
      attackKind: f[5],
      attackValue: optNum("attack_value", f[6], n),
      attackStartS: optNum("attack_start_s", f[7], n),
      crashed: f[8] === "true",
      crashTimeS: optNum("crash_time_s", f[9], n),
      crashRearIndex: optNum("crash_rear_index", f[10], n),
      deltaVMs: optNum("delta_v_ms", f[11], n),
      maxSpacingErrM: optNum("max_spacing_err_m", f[12], n),
      avgMaxSpacingErrM: optNum("avg_max_spacing_err_m", f[13], n),
      avgMaxAbsAccelMs2: optNum("avg_max_abs_accel_ms2", f[14], n),
      error: f[15],
    });
  }
  return rows;
}

export function loadSweepCsv(path: string): SweepRow[] {
  return parseSweepCsv(fs.readFileSync(path, "utf-8"));
}

/** Row label: controller, with the spacing distinguishing CACC variants. */
export function controllerLabel(row: SweepRow): string {
  return row.controller === "CACC"
    ? `CACC ${row.spacingParam} m`
    : row.controller;
}
