import { distinct, loadCsv, mean, stddev, Row } from "./csv.js";
import { Chart, Series } from "./svg.js";

export interface FigureSpec {
  id: string;
  /** Input CSV file names, resolved against the results directory. */
  inputs: string[];
  /** Column whose distinct values become the plotted series. */
  groupBy: string;
  title: string;
  xLabel: string;
  yLabel: string;
  output: string;
}

const SWEEP_COLUMNS = ["axis_value", "seed", "as_mode", "wsr_bits", "status"];

function sweepSpec(axis: string, xLabel: string): FigureSpec {
  return {
    id: `wsr_vs_${axis}`,
    inputs: [`sweep_${axis}.csv`],
    groupBy: "as_mode",
    title: `Weighted sum-rate vs ${xLabel}`,
    xLabel,
    yLabel: "WSR (bits/s/Hz)",
    output: `wsr_vs_${axis}.svg`,
  };
}

/** The seven gallery figures, in render order. */
export const FIGURES: FigureSpec[] = [
  {
    id: "trace",
    inputs: ["trace.csv"],
    groupBy: "as_mode",
    title: "Weighted sum-rate vs iteration",
    xLabel: "outer iteration",
    yLabel: "WSR (bits/s/Hz)",
    output: "trace.svg",
  },
  {
    id: "beampattern",
    inputs: ["beampattern.csv"],
    groupBy: "",
    title: "Transmit beampattern",
    xLabel: "angle (deg)",
    yLabel: "probing power (W)",
    output: "beampattern.svg",
  },
  sweepSpec("Ms", "selected antennas"),
  sweepSpec("N", "reflecting elements"),
  sweepSpec("P", "total power (dBm)"),
  sweepSpec("eta", "probing power fraction"),
  sweepSpec("rho", "transmit power split"),
];

function okRows(rows: Row[]): Row[] {
  return rows.filter((r) => r.status === "ok");
}

/** Mean line with stddev error bars across seeds, one series per group. */
function sweepChart(spec: FigureSpec, rows: Row[]): Chart {
  const usable = okRows(rows);
  if (usable.length === 0) throw new Error(`${spec.inputs[0]}: no successful rows`);
  const series: Series[] = distinct(usable, spec.groupBy).map((group) => {
    const groupRows = usable.filter((r) => r[spec.groupBy] === group);
    const xs = distinct(groupRows, "axis_value").map(Number).sort((a, b) => a - b);
    const perX = xs.map((x) =>
      groupRows.filter((r) => Number(r.axis_value) === x).map((r) => Number(r.wsr_bits)),
    );
    return {
      label: String(group),
      x: xs,
      y: perX.map(mean),
      yErr: perX.map(stddev),
    };
  });
  return { title: spec.title, xLabel: spec.xLabel, yLabel: spec.yLabel, series };
}

function traceChart(spec: FigureSpec, rows: Row[]): Chart {
  const series: Series[] = distinct(rows, spec.groupBy).map((group) => {
    const groupRows = rows.filter((r) => r[spec.groupBy] === group);
    const iters = distinct(groupRows, "iter").map(Number).sort((a, b) => a - b);
    const y = iters.map((it) =>
      mean(groupRows.filter((r) => Number(r.iter) === it).map((r) => Number(r.wsr_bits))),
    );
    return { label: String(group), x: iters, y };
  });
  return { title: spec.title, xLabel: spec.xLabel, yLabel: spec.yLabel, series };
}

function beampatternChart(spec: FigureSpec, rows: Row[]): Chart {
  const x = rows.map((r) => Number(r.angle_deg));
  const y = rows.map((r) => Number(r.power_w));
  let peak = 0;
  y.forEach((v, i) => {
    if (v > y[peak]) peak = i;
  });
  return {
    title: spec.title,
    xLabel: spec.xLabel,
    yLabel: spec.yLabel,
    series: [{ label: "probing power", x, y }],
    markerX: { x: x[peak], label: "target" },
  };
}

/** Assemble the chart for one figure from its input CSV rows. */
export function buildChart(spec: FigureSpec, csvPath: string): Chart {
  if (spec.id === "trace") {
    return traceChart(spec, loadCsv(csvPath, ["as_mode", "seed", "iter", "wsr_bits"]));
  }
  if (spec.id === "beampattern") {
    return beampatternChart(spec, loadCsv(csvPath, ["angle_deg", "power_w"]));
  }
  return sweepChart(spec, loadCsv(csvPath, SWEEP_COLUMNS));
}
