import * as fs from "fs";
import { loadSweepCsv } from "./csv";
import { renderJammingHeatmap } from "./heatmap";
import { renderInjectionScatter } from "./scatter";

function parseArgs(argv: string[]): { command: string; opts: Map<string, string> } {
  const command = argv[0];
  const opts = new Map<string, string>();
  for (let i = 1; i < argv.length; i += 2) {
    if (!argv[i].startsWith("--") || i + 1 >= argv.length) {
      throw new Error(`malformed option: ${argv[i]}`);
    }
    opts.set(argv[i].slice(2), argv[i + 1]);
  }
  return { command, opts };
}

export function main(argv: string[]): number {
  let parsed;
  try {
    parsed = parseArgs(argv);
  } catch (e) {
    console.error(String(e));
    return 2;
  }
  const { command, opts } = parsed;
  const csvPath = opts.get("csv");
  const outPath = opts.get("out");
  if (!command || !csvPath || !outPath) {
    console.error("usage: plots heatmap|scatter --csv <path> --out <path> [--attack <kind>]");
    return 2;
  }
  let svg: string | null;
  try {
    const rows = loadSweepCsv(csvPath);
    if (command === "heatmap") {
      svg = renderJammingHeatmap(rows);
    } else if (command === "scatter") {
      const kind = opts.get("attack") ?? "pos_shift";
      svg = renderInjectionScatter(rows, kind);
    } else {
      console.error(`unknown command: ${command}`);
      return 2;
    }
  } catch (e) {
    console.error(String(e));
    return 1;
  }
  if (svg === null) {
    console.warn("no rows match the requested figure; no image written");
    return 0;
  }
  fs.writeFileSync(outPath, svg);
  console.log(`wrote ${outPath}`);
  return 0;
}

if (require.main === module) {
  process.exit(main(process.argv.slice(2)));
}
