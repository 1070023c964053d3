import { el, svgEl } from "./dom.js";
import { pointTooltip } from "./format.js";
import type { SeriesPoint, TimeseriesPayload } from "./types.js";

const WIDTH = 640;
const HEIGHT = 360;
const PAD = 42;

export interface Line {
  label: string;
  points: SeriesPoint[];
  color: string;
  dashed?: boolean;
}

function scales(lines: Line[]) {
  const xs = lines.flatMap((l) => l.points.map((p) => p[0]));
  const ys = lines.flatMap((l) => l.points.map((p) => p[1]));
  const x0 = Math.min(...xs);
  const x1 = Math.max(...xs);
  const y0 = Math.min(...ys);
  const y1 = Math.max(...ys);
  const x = (v: number) =>
    x1 === x0
      ? WIDTH / 2
      : PAD + ((v - x0) / (x1 - x0)) * (WIDTH - 2 * PAD);
  const y = (v: number) =>
    y1 === y0
      ? HEIGHT / 2
      : HEIGHT - PAD - ((v - y0) / (y1 - y0)) * (HEIGHT - 2 * PAD);
  return { x, y, x0, x1, y0, y1 };
}

/** Line chart with hover tooltips; empty series are left out. */
export function renderLineChart(
  lines: Line[],
  locale: string,
): HTMLElement {
  const box = el("div", { class: "chart-box" });
  const drawable = lines.filter((l) => l.points.length > 0);
  if (drawable.length === 0) {
    box.appendChild(el("p", { class: "chart-empty", text: "no data" }));
    return box;
  }
  const { x, y, x0, x1 } = scales(drawable);
  const svg = svgEl("svg", {
    class: "line-chart",
    viewBox: `0 0 ${WIDTH} ${HEIGHT}`,
  });
  const tooltip = el("div", { class: "chart-tooltip hidden" });

  const axis = svgEl("line", {
    class: "axis",
    x1: String(PAD),
    y1: String(HEIGHT - PAD),
    x2: String(WIDTH - PAD),
    y2: String(HEIGHT - PAD),
  });
  svg.appendChild(axis);
  for (const year of [x0, Math.round((x0 + x1) / 2), x1]) {
    const tick = svgEl("text", {
      class: "tick-label",
      x: String(x(year)),
      y: String(HEIGHT - PAD + 18),
      "text-anchor": "middle",
    });
    tick.textContent = String(year);
    svg.appendChild(tick);
  }

  for (const line of drawable) {
    const attrs: Record<string, string> = {
      class: "series-line",
      points: line.points.map(([px, py]) => `${x(px)},${y(py)}`).join(" "),
      fill: "none",
      stroke: line.color,
      "stroke-width": "2",
    };
    if (line.dashed) attrs["stroke-dasharray"] = "6 4";
    svg.appendChild(svgEl("polyline", attrs));
    for (const [year, value] of line.points) {
      const dot = svgEl("circle", {
        class: "series-point",
        cx: String(x(year)),
        cy: String(y(value)),
        r: "4",
        fill: line.color,
      });
      dot.dataset.tooltip = pointTooltip(line.label, value, year, locale);
      dot.addEventListener("mouseenter", () => {
        tooltip.textContent = dot.dataset.tooltip ?? "";
        tooltip.classList.remove("hidden");
      });
      dot.addEventListener("mouseleave", () => {
        tooltip.classList.add("hidden");
      });
      svg.appendChild(dot);
    }
  }

  const legend = el("div", { class: "chart-legend" });
  for (const line of drawable) {
    const item = el("span", { class: "legend-chip" });
    const dot = el("i", { class: "legend-dot" });
    dot.style.backgroundColor = line.color;
    item.append(dot, line.label);
    legend.appendChild(item);
  }

  box.append(svg, tooltip, legend);
  return box;
}

export function timeseriesLines(payload: TimeseriesPayload): Line[] {
  if (payload.kind === "composite") {
    return [
      {
        label: `${payload.target_region} (% of reference)`,
        points: payload.series.target_percent,
        color: "#c62828",
      },
    ];
  }
  return [
    {
      label: payload.target_region,
      points: payload.series.target,
      color: "#c62828",
    },
    {
      label: "Innovation Leaders",
      points: payload.series.innovation_leaders,
      color: "#1565c0",
    },
    {
      label: "Top 3",
      points: payload.series.top3,
      color: "#6a1b9a",
    },
    {
      label: "EU average",
      points: payload.series.eu_average,
      color: "#00838f",
    },
  ];
}

/** Modal with the four benchmark series of one indicator. */
export function renderTimeseriesModal(
  host: HTMLElement,
  payload: TimeseriesPayload,
  locale: string,
): HTMLElement {
  const overlay = el("div", { class: "modal-overlay" });
  const modal = el("div", { class: "modal" });
  const header = el("header", { class: "modal-header" });
  header.appendChild(el("h3", { text: payload.name }));
  const close = el("button", {
    class: "modal-close",
    type: "button",
    "aria-label": "close",
    text: "×",
  });
  const dismiss = () => {
    overlay.remove();
  };
  close.addEventListener("click", dismiss);
  overlay.addEventListener("click", (event) => {
    if (event.target === overlay) dismiss();
  });
  header.appendChild(close);
  modal.appendChild(header);
  modal.appendChild(renderLineChart(timeseriesLines(payload), locale));
  overlay.appendChild(modal);
  clearStale(host);
  host.appendChild(overlay);
  return overlay;
}

function clearStale(host: HTMLElement): void {
  host.querySelectorAll(".modal-overlay").forEach((n) => n.remove());
}
