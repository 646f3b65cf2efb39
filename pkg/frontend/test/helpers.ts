import { readFileSync } from "node:fs";
import { resolve } from "node:path";

/** Mount the real index.html markup (scripts stripped) into the jsdom document. */
export function mountPage(): void {
  const raw = readFileSync(resolve(process.cwd(), "index.html"), "utf-8");
  const inner = raw
    .replace(/<script[\s\S]*?<\/script>/g, "")
    .replace(/^[\s\S]*?<html[^>]*>/, "")
    .replace(/<\/html>[\s\S]*$/, "");
  document.documentElement.innerHTML = inner;
}

export function setInput(id: string, value: string | number): void {
  const node = document.getElementById(id) as HTMLInputElement | HTMLSelectElement | null;
  if (!node) throw new Error(`no element #${id}`);
  node.value = String(value);
}

export function click(id: string): void {
  (document.getElementById(id) as HTMLButtonElement).click();
}

export function text(id: string): string {
  return document.getElementById(id)?.textContent ?? "";
}

/** Wait until the predicate holds (polling), for async DOM updates. */
export async function until(check: () => boolean, timeoutMs = 5000): Promise<void> {
  const start = Date.now();
  while (!check()) {
    if (Date.now() - start > timeoutMs) throw new Error("timed out waiting for condition");
    await new Promise((resolve) => setTimeout(resolve, 10));
  }
}

export function curvePolylines(chartId = "curve-chart"): SVGPolylineElement[] {
  return Array.from(
    document.querySelectorAll(`#${chartId} polyline.curve-series`),
  ) as SVGPolylineElement[];
}

export function plottedValues(poly: SVGPolylineElement): number[] {
  return (poly.getAttribute("data-values") ?? "").split(",").map(Number);
}
