/** Minimal line-chart SVG builder; all styling constants live in STYLE. */

export const STYLE = {
  width: 640,
  height: 420,
  margin: { top: 40, right: 24, bottom: 52, left: 76 },
  colors: ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"],
  fontFamily: "sans-serif",
  fontSize: 12,
  titleSize: 15,
  ticks: 6,
} as const;

export interface Series {
  label: string;
  x: number[];
  y: number[];
  /** Optional symmetric error bar half-heights, one per point. */
  yErr?: number[];
}

export interface Chart {
  title: string;
  xLabel: string;
  yLabel: string;
  series: Series[];
  /** Optional vertical marker line (data x-coordinate) with a caption. */
  markerX?: { x: number; label: string };
}

interface Scale {
  (v: number): number;
}

function linearScale(d0: number, d1: number, r0: number, r1: number): Scale {
  const span = d1 - d0 || 1;
  return (v) => r0 + ((v - d0) / span) * (r1 - r0);
}

function ticks(lo: number, hi: number, count: number): number[] {
  const span = hi - lo || 1;
  const step = Math.pow(10, Math.floor(Math.log10(span / count)));
  const err = span / count / step;
  const mult = err >= 7.5 ? 10 : err >= 3.5 ? 5 : err >= 1.5 ? 2 : 1;
  const s = mult * step;
  const out: number[] = [];
  for (let t = Math.ceil(lo / s) * s; t <= hi + 1e-12 * span; t += s) {
    out.push(Number(t.toPrecision(12)));
  }
  return out;
}

function fmt(v: number): string {
  if (v === 0) return "0";
  const a = Math.abs(v);
  if (a >= 1e4 || a < 1e-3) return v.toExponential(1);
  return String(Number(v.toPrecision(6)));
}

function esc(s: string): string {
  return s.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
}

/** Render a chart to a standalone SVG string. */
export function renderChart(chart: Chart): string {
  const { width, height, margin, colors, fontFamily, fontSize, titleSize } = STYLE;
  const innerW = width - margin.left - margin.right;
  const innerH = height - margin.top - margin.bottom;

  const xs = chart.series.flatMap((s) => s.x);
  const ys = chart.series.flatMap((s, _) =>
    s.y.flatMap((v, i) => {
      const e = s.yErr ? s.yErr[i] : 0;
      return [v - e, v + e];
    }),
  );
  if (chart.markerX) xs.push(chart.markerX.x);
  const xLo = Math.min(...xs);
  const xHi = Math.max(...xs);
  let yLo = Math.min(...ys);
  let yHi = Math.max(...ys);
  if (yLo === yHi) {
    yLo -= 1;
    yHi += 1;
  }
  const pad = 0.05 * (yHi - yLo);
  const sx = linearScale(xLo, xHi, margin.left, margin.left + innerW);
  const sy = linearScale(yLo - pad, yHi + pad, margin.top + innerH, margin.top);

  const parts: string[] = [];
  parts.push(
    `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${height}" ` +
      `viewBox="0 0 ${width} ${height}" font-family="${fontFamily}" font-size="${fontSize}">`,
  );
  parts.push(`<rect width="${width}" height="${height}" fill="white"/>`);
  parts.push(
    `<text x="${width / 2}" y="${titleSize + 6}" text-anchor="middle" ` +
      `font-size="${titleSize}">${esc(chart.title)}</text>`,
  );

  // axes and grid
  for (const t of ticks(xLo, xHi, STYLE.ticks)) {
    const x = sx(t);
    parts.push(
      `<line x1="${x}" y1="${margin.top}" x2="${x}" y2="${margin.top + innerH}" stroke="#ddd"/>`,
      `<text x="${x}" y="${margin.top + innerH + 18}" text-anchor="middle">${fmt(t)}</text>`,
    );
  }
  for (const t of ticks(yLo - pad, yHi + pad, STYLE.ticks)) {
    const y = sy(t);
    parts.push(
      `<line x1="${margin.left}" y1="${y}" x2="${margin.left + innerW}" y2="${y}" stroke="#ddd"/>`,
      `<text x="${margin.left - 6}" y="${y + 4}" text-anchor="end">${fmt(t)}</text>`,
    );
  }
  parts.push(
    `<rect x="${margin.left}" y="${margin.top}" width="${innerW}" height="${innerH}" ` +
      `fill="none" stroke="#333"/>`,
  );
  parts.push(
    `<text x="${margin.left + innerW / 2}" y="${height - 10}" text-anchor="middle">` +
      `${esc(chart.xLabel)}</text>`,
    `<text x="18" y="${margin.top + innerH / 2}" text-anchor="middle" ` +
      `transform="rotate(-90 18 ${margin.top + innerH / 2})">${esc(chart.yLabel)}</text>`,
  );

  chart.series.forEach((s, si) => {
    const color = colors[si % colors.length];
    const pts = s.x.map((xv, i) => `${sx(xv).toFixed(2)},${sy(s.y[i]).toFixed(2)}`);
    parts.push(
      `<polyline class="series" data-label="${esc(s.label)}" points="${pts.join(" ")}" ` +
        `fill="none" stroke="${color}" stroke-width="1.8"/>`,
    );
    if (s.yErr) {
      s.x.forEach((xv, i) => {
        const e = s.yErr![i];
        if (e <= 0) return;
        const x = sx(xv);
        parts.push(
          `<line class="errorbar" x1="${x}" y1="${sy(s.y[i] - e)}" x2="${x}" ` +
            `y2="${sy(s.y[i] + e)}" stroke="${color}" stroke-width="1"/>`,
        );
      });
    }
    // legend entry
    const ly = margin.top + 8 + 16 * si;
    const lx = margin.left + innerW - 150;
    parts.push(
      `<line x1="${lx}" y1="${ly}" x2="${lx + 22}" y2="${ly}" stroke="${color}" stroke-width="1.8"/>`,
      `<text x="${lx + 28}" y="${ly + 4}">${esc(s.label)}</text>`,
    );
  });

  if (chart.markerX) {
    const x = sx(chart.markerX.x);
    parts.push(
      `<line class="marker" x1="${x}" y1="${margin.top}" x2="${x}" ` +
        `y2="${margin.top + innerH}" stroke="#000" stroke-dasharray="5,4"/>`,
      `<text x="${x + 4}" y="${margin.top + 14}">${esc(chart.markerX.label)}</text>`,
    );
  }

  parts.push("</svg>");
  return parts.join("\n");
}
