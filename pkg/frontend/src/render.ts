import { existsSync, mkdirSync, statSync, writeFileSync } from "node:fs";
import { join } from "node:path";
import { buildChart, FigureSpec, FIGURES } from "./figures.js";
import { renderChart } from "./svg.js";

/** Render one figure; returns the output path. */
export function renderFigure(spec: FigureSpec, inDir: string, outDir: string): string {
  const csvPath = join(inDir, spec.inputs[0]);
  if (!existsSync(csvPath)) {
    throw new Error(`missing input ${csvPath}`);
  }
  const svg = renderChart(buildChart(spec, csvPath));
  mkdirSync(outDir, { recursive: true });
  const outPath = join(outDir, spec.output);
  writeFileSync(outPath, svg, "utf-8");
  return outPath;
}

export interface GalleryReport {
  rendered: string[];
  missing: string[];
}

/** Render every available figure and an index page listing whatever is absent. */
export function renderAll(inDir: string, outDir: string): GalleryReport {
  if (!existsSync(inDir) || !statSync(inDir).isDirectory()) {
    throw new Error(`results directory not found: ${inDir}`);
  }
  const rendered: string[] = [];
  const missing: string[] = [];
  for (const spec of FIGURES) {
    if (existsSync(join(inDir, spec.inputs[0]))) {
      renderFigure(spec, inDir, outDir);
      rendered.push(spec.id);
    } else {
      missing.push(`${spec.id} (needs ${spec.inputs[0]})`);
    }
  }
  mkdirSync(outDir, { recursive: true });
  writeFileSync(join(outDir, "index.html"), indexPage(rendered, missing), "utf-8");
  return { rendered, missing };
}

function indexPage(rendered: string[], missing: string[]): string {
  const figs = FIGURES.filter((f) => rendered.includes(f.id))
    .map((f) => `<figure><img src="${f.output}" alt="${f.id}"/><figcaption>${f.title}</figcaption></figure>`)
    .join("\n");
  const gaps =
    missing.length === 0
      ? ""
      : `<h2>Missing inputs</h2><ul>${missing.map((m) => `<li>${m}</li>`).join("")}</ul>`;
  return `<!DOCTYPE html>
<html><head><meta charset="utf-8"><title>Simulation figure gallery</title></head>
<body><h1>Simulation figure gallery</h1>
${figs}
${gaps}
</body></html>
`;
}
