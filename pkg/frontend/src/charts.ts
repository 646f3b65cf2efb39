/**
 * Hand-rolled SVG charts. Rendering maps service numbers to pixels and does
 * nothing else numeric; every series element carries its source values in a
 * data attribute so tests can assert that plotted data equals the response.
 */

export const PALETTE = [
  "#1f6fb2",
  "#d1495b",
  "#3a7d44",
  "#8d5a97",
  "#c77d2a",
  "#3b8ea5",
  "#7a6c5d",
  "#b23a8f",
];

const NS = "http://www.w3.org/2000/svg";

interface Margins {
  left: number;
  right: number;
  top: number;
  bottom: number;
}

const M: Margins = { left: 52, right: 14, top: 12, bottom: 36 };

export interface CurveSeries {
  label: string;
  grid: number[];
  values: number[];
  color: string;
}

function el(tag: string, attrs: Record<string, string | number>): SVGElement {
  const node = document.createElementNS(NS, tag);
  for (const [key, value] of Object.entries(attrs)) {
    node.setAttribute(key, String(value));
  }
  return node;
}

function clear(svg: SVGSVGElement): { width: number; height: number } {
  while (svg.firstChild) svg.removeChild(svg.firstChild);
  const width = Number(svg.getAttribute("width") ?? 640);
  const height = Number(svg.getAttribute("height") ?? 360);
  svg.setAttribute("viewBox", `0 0 ${width} ${height}`);
  return { width, height };
}

function axis(
  svg: SVGSVGElement,
  width: number,
  height: number,
  xMax: number,
  yMax: number,
  xLabel: string,
  yLabel: string,
): void {
  svg.appendChild(
    el("line", { x1: M.left, y1: height - M.bottom, x2: width - M.right, y2: height - M.bottom, stroke: "#444" }),
  );
  svg.appendChild(el("line", { x1: M.left, y1: M.top, x2: M.left, y2: height - M.bottom, stroke: "#444" }));
  const xTicks = 5;
  for (let i = 0; i <= xTicks; i++) {
    const vx = (xMax * i) / xTicks;
    const px = M.left + ((width - M.left - M.right) * i) / xTicks;
    const text = el("text", { x: px, y: height - M.bottom + 16, "text-anchor": "middle", class: "tick" });
    text.textContent = vx >= 1000 ? `${Math.round(vx / 1000)}k` : `${Math.round(vx * 100) / 100}`;
    svg.appendChild(text);
  }
  const yTicks = 4;
  for (let i = 0; i <= yTicks; i++) {
    const vy = (yMax * i) / yTicks;
    const py = height - M.bottom - ((height - M.top - M.bottom) * i) / yTicks;
    const text = el("text", { x: M.left - 6, y: py + 4, "text-anchor": "end", class: "tick" });
    text.textContent = `${Math.round(vy * 100) / 100}`;
    svg.appendChild(text);
  }
  const xText = el("text", { x: (M.left + width - M.right) / 2, y: height - 4, "text-anchor": "middle", class: "axis-label" });
  xText.textContent = xLabel;
  svg.appendChild(xText);
  const yText = el("text", {
    x: 14,
    y: (M.top + height - M.bottom) / 2,
    "text-anchor": "middle",
    class: "axis-label",
    transform: `rotate(-90 14 ${(M.top + height - M.bottom) / 2})`,
  });
  yText.textContent = yLabel;
  svg.appendChild(yText);
}

/** Overlay rut-depth curves; the physical (0, 0) origin is prepended for display only. */
export function renderCurves(svg: SVGSVGElement, series: CurveSeries[]): void {
  const { width, height } = clear(svg);
  const xMax = Math.max(20000, ...series.flatMap((s) => s.grid));
  const yMax = Math.max(1, ...series.flatMap((s) => s.values)) * 1.1;
  axis(svg, width, height, xMax, yMax, "wheel passes", "rut depth (mm)");

  const sx = (p: number) => M.left + ((width - M.left - M.right) * p) / xMax;
  const sy = (v: number) => height - M.bottom - ((height - M.top - M.bottom) * v) / yMax;

  series.forEach((s, i) => {
    const pts = [[0, 0], ...s.grid.map((p, k) => [p, s.values[k]])];
    const path = el("polyline", {
      points: pts.map(([p, v]) => `${sx(p).toFixed(1)},${sy(v).toFixed(1)}`).join(" "),
      fill: "none",
      stroke: s.color,
      "stroke-width": 1.8,
      class: "curve-series",
      "data-label": s.label,
      "data-values": s.values.join(","),
    });
    path.setAttribute("data-index", String(i));
    svg.appendChild(path);
  });
}

export interface PsdMark {
  label: string;
  rut: number;
  fractureEnergy: number;
  quadrant: string;
  color: string;
}

/**
 * Performance-space diagram: DC(T) fracture energy (x) against rut depth at
 * 20,000 passes (y). The pass region is right of the fracture threshold and
 * below the rut threshold.
 */
export function renderPsd(
  svg: SVGSVGElement,
  marks: PsdMark[],
  rutThreshold: number,
  feThreshold: number,
): void {
  const { width, height } = clear(svg);
  const xMax = Math.max(feThreshold * 1.5, ...marks.map((m) => m.fractureEnergy * 1.15), 1);
  const yMax = Math.max(rutThreshold * 1.4, ...marks.map((m) => m.rut * 1.25), 1);
  axis(svg, width, height, xMax, yMax, "DC(T) fracture energy (J/m²)", "rut @ 20k passes (mm)");

  const sx = (v: number) => M.left + ((width - M.left - M.right) * v) / xMax;
  const sy = (v: number) => height - M.bottom - ((height - M.top - M.bottom) * v) / yMax;

  const passRegion = el("rect", {
    x: sx(feThreshold),
    y: sy(rutThreshold),
    width: Math.max(0, sx(xMax) - sx(feThreshold)),
    height: Math.max(0, sy(0) - sy(rutThreshold)),
    fill: "#3a7d44",
    opacity: 0.08,
    class: "pass-region",
  });
  svg.appendChild(passRegion);

  svg.appendChild(
    el("line", {
      x1: M.left, x2: width - M.right, y1: sy(rutThreshold), y2: sy(rutThreshold),
      stroke: "#a33", "stroke-dasharray": "6 4", class: "threshold-line",
      "data-axis": "rut", "data-value": rutThreshold,
    }),
  );
  svg.appendChild(
    el("line", {
      x1: sx(feThreshold), x2: sx(feThreshold), y1: M.top, y2: height - M.bottom,
      stroke: "#a33", "stroke-dasharray": "6 4", class: "threshold-line",
      "data-axis": "fracture_energy", "data-value": feThreshold,
    }),
  );

  for (const mark of marks) {
    svg.appendChild(
      el("circle", {
        cx: sx(mark.fractureEnergy),
        cy: sy(mark.rut),
        r: 6,
        fill: mark.color,
        class: "psd-point",
        "data-label": mark.label,
        "data-rut": mark.rut,
        "data-fe": mark.fractureEnergy,
        "data-quadrant": mark.quadrant,
      }),
    );
    const tag = el("text", { x: sx(mark.fractureEnergy) + 9, y: sy(mark.rut) + 4, class: "psd-label" });
    tag.textContent = mark.label;
    svg.appendChild(tag);
  }
}

export interface LegendEntry {
  label: string;
  color: string;
}

export function renderLegend(container: HTMLElement, entries: LegendEntry[]): void {
  container.textContent = "";
  for (const entry of entries) {
    const item = document.createElement("span");
    item.className = "legend-item";
    const swatch = document.createElement("span");
    swatch.className = "legend-swatch";
    swatch.style.backgroundColor = entry.color;
    item.appendChild(swatch);
    item.appendChild(document.createTextNode(entry.label));
    container.appendChild(item);
  }
}
