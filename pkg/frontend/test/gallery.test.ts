import { cpSync, mkdtempSync, readdirSync, readFileSync, rmSync, statSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { afterEach, beforeEach, describe, expect, it } from "vitest";
import { buildChart, FIGURES } from "../src/figures.js";
import { renderAll, renderFigure } from "../src/render.js";
import { renderChart } from "../src/svg.js";

const FIXTURES = join(__dirname, "fixtures");

let workDir: string;
beforeEach(() => {
  workDir = mkdtempSync(join(tmpdir(), "gallery-"));
});
afterEach(() => {
  rmSync(workDir, { recursive: true, force: true });
});

function countMatches(text: string, re: RegExp): number {
  return (text.match(re) ?? []).length;
}

describe("figure table", () => {
  it("defines seven figures with unique ids and outputs", () => {
    expect(FIGURES).toHaveLength(7);
    expect(new Set(FIGURES.map((f) => f.id)).size).toBe(7);
    expect(new Set(FIGURES.map((f) => f.output)).size).toBe(7);
  });
});

describe("renderFigure", () => {
  it("plots one series per as_mode in the trace figure", () => {
    const out = renderFigure(FIGURES[0], FIXTURES, workDir);
    const svg = readFileSync(out, "utf-8");
    expect(countMatches(svg, /class="series"/g)).toBe(3);
    expect(svg).toContain('data-label="cuckoo"');
    expect(svg).toContain('data-label="random"');
    expect(svg).toContain('data-label="contiguous"');
  });

  it("marks the target angle on the beampattern", () => {
    const out = renderFigure(FIGURES[1], FIXTURES, workDir);
    const svg = readFileSync(out, "utf-8");
    expect(countMatches(svg, /class="series"/g)).toBe(1);
    expect(countMatches(svg, /class="marker"/g)).toBe(1);
    expect(svg).toContain(">target<");
  });

  it("draws mean lines with error bars per group in sweep figures", () => {
    const spec = FIGURES.find((f) => f.id === "wsr_vs_N")!;
    const out = renderFigure(spec, FIXTURES, workDir);
    const svg = readFileSync(out, "utf-8");
    expect(countMatches(svg, /class="series"/g)).toBe(2);
    // two seeds differ at every point, so each gets an error bar
    expect(countMatches(svg, /class="errorbar"/g)).toBe(6);
  });

  it("ignores failed rows when aggregating", () => {
    const spec = FIGURES.find((f) => f.id === "wsr_vs_N")!;
    const chart = buildChart(spec, join(FIXTURES, "sweep_N.csv"));
    for (const s of chart.series) {
      for (const v of s.y) expect(Number.isFinite(v)).toBe(true);
    }
  });

  it("is deterministic: identical input gives identical bytes", () => {
    const a = renderFigure(FIGURES[0], FIXTURES, join(workDir, "a"));
    const b = renderFigure(FIGURES[0], FIXTURES, join(workDir, "b"));
    expect(readFileSync(a, "utf-8")).toBe(readFileSync(b, "utf-8"));
  });

  it("fails naming a missing column", () => {
    writeFileSync(join(workDir, "trace.csv"), "as_mode,seed,iter\ncuckoo,0,0\n");
    expect(() => renderFigure(FIGURES[0], workDir, workDir)).toThrow(/wsr_bits/);
  });

  it("fails on an empty input", () => {
    writeFileSync(join(workDir, "trace.csv"), "as_mode,seed,iter,wsr_bits\n");
    expect(() => renderFigure(FIGURES[0], workDir, workDir)).toThrow(/no data rows/);
  });
});

describe("renderAll", () => {
  it("renders all seven figures plus an index from a full directory", () => {
    const out = join(workDir, "figs");
    const report = renderAll(FIXTURES, out);
    expect(report.rendered).toHaveLength(7);
    expect(report.missing).toHaveLength(0);
    const files = readdirSync(out);
    expect(files.filter((f) => f.endsWith(".svg"))).toHaveLength(7);
    expect(files).toContain("index.html");
  });

  it("renders available figures and lists the missing ones", () => {
    const partial = join(workDir, "partial");
    cpSync(join(FIXTURES, "trace.csv"), join(partial, "trace.csv"));
    const out = join(workDir, "figs");
    const report = renderAll(partial, out);
    expect(report.rendered).toEqual(["trace"]);
    expect(report.missing).toHaveLength(6);
    const index = readFileSync(join(out, "index.html"), "utf-8");
    expect(index).toContain("beampattern");
    expect(index).toContain("Missing inputs");
  });

  it("rejects a nonexistent directory, naming the path", () => {
    const bogus = join(workDir, "nope");
    expect(() => renderAll(bogus, workDir)).toThrow(bogus);
  });

  it("never mutates the input CSVs", () => {
    const inputs = join(workDir, "inputs");
    cpSync(FIXTURES, inputs, { recursive: true });
    const before = Object.fromEntries(
      readdirSync(inputs).map((f) => [f, readFileSync(join(inputs, f), "utf-8")]),
    );
    renderAll(inputs, join(workDir, "figs"));
    for (const [f, text] of Object.entries(before)) {
      expect(readFileSync(join(inputs, f), "utf-8")).toBe(text);
    }
  });
});

describe("renderChart", () => {
  it("fixes layout from STYLE regardless of data scale", () => {
    const chart = {
      title: "t",
      xLabel: "x",
      yLabel: "y",
      series: [{ label: "s", x: [0, 1e9], y: [1e-12, 5e-12] }],
    };
    const svg = renderChart(chart);
    expect(svg).toContain('width="640"');
    expect(svg).toContain('height="420"');
  });
});
