import * as fs from "fs";
import * as os from "os";
import * as path from "path";
import { afterAll, describe, expect, it } from "vitest";

import { main } from "../src/cli";
import { EXPECTED_HEADER, loadSweepCsv, parseSweepCsv } from "../src/csv";
import { buildHeatmapCells, renderJammingHeatmap } from "../src/heatmap";
import { facetRows, renderInjectionScatter } from "../src/scatter";

const FIXTURE = path.join(__dirname, "fixture.csv");
const tmp = fs.mkdtempSync(path.join(os.tmpdir(), "plots-"));
afterAll(() => fs.rmSync(tmp, { recursive: true, force: true }));

describe("csv parsing", () => {
  it("parses the 20-row fixture", () => {
    const rows = loadSweepCsv(FIXTURE);
    expect(rows).toHaveLength(20);
    expect(rows.filter((r) => r.crashed)).toHaveLength(8);
    expect(new Set(rows.map((r) => r.attackKind))).toEqual(
      new Set(["jam", "pos_shift"]));
  });

  it("rejects a CSV with missing columns", () => {
    const text = fs.readFileSync(FIXTURE, "utf-8");
    const mangled = text.replace("delta_v_ms,", "");
    expect(() => parseSweepCsv(mangled)).toThrow(/delta_v_ms/);
  });

  it("rejects rows with the wrong column count", () => {
    const bad = EXPECTED_HEADER.join(",") + "\na,b,c\n";
    expect(() => parseSweepCsv(bad)).toThrow(/expected 16 columns/);
  });
});

describe("jamming heatmap", () => {
  const rows = loadSweepCsv(FIXTURE);

  it("aggregates repeats into one cell per variant and column", () => {
    const cells = buildHeatmapCells(rows);
    // fixture: 2 variants x (2 speeds x 3 jam starts), one repeat each
    expect(cells.size).toBe(12);
    const rowKeys = new Set([...cells.values()].map((c) => c.rowKey));
    expect(rowKeys).toEqual(new Set(["CACC 5 m", "CONSENSUS"]));
  });

  it("renders crash cells red and quiet cells blue", () => {
    const svg = renderJammingHeatmap(rows);
    expect(svg).not.toBeNull();
    expect(svg!).toContain("#c0392b");
    expect(svg!).toContain("#2980b9");
    expect(svg!).toContain("font-style=\"italic\""); // crash labels
    expect(svg!).toContain("font-weight=\"bold\"");  // spacing-error labels
  });

  it("writes an image file via the CLI", () => {
    const out = path.join(tmp, "heatmap.svg");
    expect(main(["heatmap", "--csv", FIXTURE, "--out", out])).toBe(0);
    expect(fs.existsSync(out)).toBe(true);
    expect(fs.readFileSync(out, "utf-8")).toContain("<svg");
  });

  it("returns null with no jamming rows", () => {
    expect(renderJammingHeatmap(rows.filter((r) => r.attackKind !== "jam")))
      .toBeNull();
  });
});

describe("injection scatter", () => {
  const rows = loadSweepCsv(FIXTURE);

  it("places every filtered row in exactly one facet", () => {
    const facets = facetRows(rows, "pos_shift");
    // one target speed x two controllers
    expect(facets.size).toBe(2);
    const total = [...facets.values()].reduce((n, list) => n + list.length, 0);
    expect(total).toBe(rows.filter((r) => r.attackKind === "pos_shift").length);
  });

  it("confines position-shift crash points to the consensus facet", () => {
    const facets = facetRows(rows, "pos_shift");
    for (const [key, list] of facets) {
      const crashes = list.filter((r) => r.crashed).length;
      if (key.includes("CONSENSUS")) expect(crashes).toBeGreaterThan(0);
      else expect(crashes).toBe(0);
    }
  });

  it("writes an image file via the CLI", () => {
    const out = path.join(tmp, "scatter.svg");
    expect(main(["scatter", "--csv", FIXTURE, "--out", out,
                 "--attack", "pos_shift"])).toBe(0);
    const svg = fs.readFileSync(out, "utf-8");
    expect(svg).toContain("<svg");
    expect(svg).toContain("#c0392b");
    expect(svg).toContain("#2980b9");
  });

  it("exits cleanly without an image on an empty filter", () => {
    const out = path.join(tmp, "none.svg");
    expect(main(["scatter", "--csv", FIXTURE, "--out", out,
                 "--attack", "const_speed"])).toBe(0);
    expect(fs.existsSync(out)).toBe(false);
  });
});
