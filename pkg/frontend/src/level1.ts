import { BAND_LABELS, BAND_ORDER, bandColor } from "./colors.js";
import { clear, el, svgEl } from "./dom.js";
import { formatPercent } from "./format.js";
import { harveyBall } from "./harvey.js";
import type { GraphGoal, GraphNode, GraphPayload } from "./types.js";

export interface Level1Handlers {
  openSubArea(id: string): void;
  openGoal(id: string): void;
  onHighlight?(ids: Set<string>): void;
}

const WIDTH = 560;
const HEIGHT = 440;

interface Point {
  x: number;
  y: number;
}

/** Positions from the config when present, else a small deterministic
 * force simulation (repulsion plus edge springs). */
export function layoutPositions(
  nodes: GraphNode[],
  edges: [string, string][],
): Map<string, Point> {
  const subAreas = nodes.filter((n) => n.kind === "sub_area");
  const positions = new Map<string, Point>();

  const configured = subAreas.every(
    (n) => typeof n.x === "number" && typeof n.y === "number",
  );
  if (configured && subAreas.length > 0) {
    const xs = subAreas.map((n) => n.x as number);
    const ys = subAreas.map((n) => n.y as number);
    const spanX = Math.max(...xs) - Math.min(...xs) || 1;
    const spanY = Math.max(...ys) - Math.min(...ys) || 1;
    for (const node of subAreas) {
      positions.set(node.id, {
        x: 60 + (((node.x as number) - Math.min(...xs)) / spanX) * (WIDTH - 120),
        y: 50 + (((node.y as number) - Math.min(...ys)) / spanY) * (HEIGHT - 140),
      });
    }
    return positions;
  }

  // force fallback: start on a circle, then relax
  subAreas.forEach((node, i) => {
    const angle = (2 * Math.PI * i) / subAreas.length;
    positions.set(node.id, {
      x: WIDTH / 2 + Math.cos(angle) * WIDTH * 0.35,
      y: HEIGHT / 2 + Math.sin(angle) * HEIGHT * 0.35,
    });
  });
  const ids = subAreas.map((n) => n.id);
  const k = Math.sqrt((WIDTH * HEIGHT) / Math.max(1, ids.length));
  for (let iter = 0; iter < 150; iter++) {
    const shift = new Map(ids.map((id) => [id, { x: 0, y: 0 }]));
    for (const a of ids) {
      for (const b of ids) {
        if (a === b) continue;
        const pa = positions.get(a)!;
        const pb = positions.get(b)!;
        let dx = pa.x - pb.x;
        let dy = pa.y - pb.y;
        if (dx === 0 && dy === 0) {
          // coincident nodes cannot repel; break the tie deterministically
          dx = a < b ? 0.5 : -0.5;
          dy = a < b ? -0.5 : 0.5;
        }
        const d = Math.max(12, Math.hypot(dx, dy));
        const push = (k * k) / d / d;
        shift.get(a)!.x += dx * push;
        shift.get(a)!.y += dy * push;
      }
    }
    for (const [a, b] of edges) {
      const pa = positions.get(a);
      const pb = positions.get(b);
      if (!pa || !pb) continue;
      const dx = pb.x - pa.x;
      const dy = pb.y - pa.y;
      const d = Math.hypot(dx, dy) || 1;
      const pull = (d - k) / d / 8;
      shift.get(a)!.x += dx * pull;
      shift.get(a)!.y += dy * pull;
      shift.get(b)!.x -= dx * pull;
      shift.get(b)!.y -= dy * pull;
    }
    // cooling: cap each step so the layout settles instead of bouncing
    const temperature = (WIDTH / 8) * (1 - iter / 150) + 1;
    for (const id of ids) {
      const p = positions.get(id)!;
      const s = shift.get(id)!;
      s.x += (WIDTH / 2 - p.x) * 0.03; // light gravity toward the center
      s.y += (HEIGHT / 2 - p.y) * 0.03;
      const length = Math.hypot(s.x, s.y);
      const scale = length > temperature ? temperature / length : 1;
      p.x = Math.min(WIDTH - 60, Math.max(60, p.x + s.x * scale));
      p.y = Math.min(HEIGHT - 40, Math.max(40, p.y + s.y * scale));
    }
  }
  return positions;
}

/** Apply a highlight set: a node or goal row is .highlighted exactly when
 * its id is in the set (the set comes straight from the API payload). */
export function applyHighlight(root: HTMLElement, ids: Set<string>): void {
  root.querySelectorAll<HTMLElement>("[data-node-id]").forEach((node) => {
    node.classList.toggle("highlighted", ids.has(node.dataset.nodeId!));
  });
  root.querySelectorAll<HTMLElement>("[data-goal-id]").forEach((row) => {
    row.classList.toggle("highlighted", ids.has(row.dataset.goalId!));
  });
}

function goalsMappedTo(payload: GraphPayload, subAreaId: string): string[] {
  return payload.goals
    .filter((g) => g.mapped_sub_areas.includes(subAreaId))
    .map((g) => g.id);
}

function goalRow(
  goal: GraphGoal,
  payload: GraphPayload,
  container: HTMLElement,
  handlers: Level1Handlers,
): HTMLElement {
  const row = el("li", { class: "goal-row" });
  row.dataset.goalId = goal.id;
  row.appendChild(harveyBall(goal.achievement_percent));
  const label = el("span", { class: "goal-title", text: goal.title });
  row.appendChild(label);
  if (goal.achievement_percent !== null) {
    row.appendChild(
      el("span", {
        class: "goal-percent",
        text: formatPercent(goal.achievement_percent, payload.locale),
      }),
    );
  }
  row.addEventListener("mouseenter", () => {
    const ids = new Set(goal.mapped_sub_areas);
    applyHighlight(container, ids);
    handlers.onHighlight?.(ids);
  });
  row.addEventListener("mouseleave", () => {
    applyHighlight(container, new Set());
    handlers.onHighlight?.(new Set());
  });
  row.addEventListener("click", () => handlers.openGoal(goal.id));
  return row;
}

function legend(): HTMLElement {
  const box = el("div", { class: "legend" });
  for (const band of [...BAND_ORDER, "InsufficientData" as const]) {
    const chip = el("span", { class: "legend-chip" });
    const dot = el("i", { class: "legend-dot" });
    dot.style.backgroundColor = bandColor(band);
    chip.append(dot, BAND_LABELS[band]);
    box.appendChild(chip);
  }
  return box;
}

export function renderLevel1(
  root: HTMLElement,
  payload: GraphPayload,
  handlers: Level1Handlers,
): void {
  clear(root);
  const container = el("div", { class: "level1" });

  const goalsPanel = el("section", { class: "goals-panel" });
  goalsPanel.appendChild(el("h2", { text: "Strategic goals" }));
  const byStrategy = new Map<string, GraphGoal[]>();
  for (const goal of payload.goals) {
    const bucket = byStrategy.get(goal.strategy_id) ?? [];
    bucket.push(goal);
    byStrategy.set(goal.strategy_id, bucket);
  }
  for (const [strategy, goals] of byStrategy) {
    goalsPanel.appendChild(
      el("h3", { class: "strategy-name", text: strategy }),
    );
    const list = el("ul", { class: "goal-list" });
    for (const goal of goals) {
      list.appendChild(goalRow(goal, payload, container, handlers));
    }
    goalsPanel.appendChild(list);
  }

  const graphPanel = el("section", { class: "graph-panel" });
  graphPanel.appendChild(el("h2", { text: "RTI system" }));
  graphPanel.appendChild(renderGraphSvg(payload, container, handlers));
  graphPanel.appendChild(legend());

  container.append(goalsPanel, graphPanel);
  root.appendChild(container);
}

function renderGraphSvg(
  payload: GraphPayload,
  container: HTMLElement,
  handlers: Level1Handlers,
): SVGSVGElement {
  const svg = svgEl("svg", {
    class: "area-graph",
    viewBox: `0 0 ${WIDTH} ${HEIGHT}`,
  });
  const positions = layoutPositions(payload.nodes, payload.edges);
  const areas = payload.nodes.filter((n) => n.kind === "area");
  const subAreas = payload.nodes.filter((n) => n.kind === "sub_area");

  // area anchors sit at the centroid of their sub-areas
  const areaCenters = new Map<string, Point>();
  for (const area of areas) {
    const members = (area.sub_area_ids ?? [])
      .map((id) => positions.get(id))
      .filter((p): p is Point => p !== undefined);
    if (members.length === 0) continue;
    areaCenters.set(area.id, {
      x: members.reduce((s, p) => s + p.x, 0) / members.length,
      y: members.reduce((s, p) => s + p.y, 0) / members.length,
    });
  }

  for (const area of areas) {
    const center = areaCenters.get(area.id);
    if (!center) continue;
    for (const memberId of area.sub_area_ids ?? []) {
      const p = positions.get(memberId);
      if (!p) continue;
      svg.appendChild(
        svgEl("line", {
          class: "membership-edge",
          x1: String(center.x),
          y1: String(center.y),
          x2: String(p.x),
          y2: String(p.y),
        }),
      );
    }
  }
  for (const [a, b] of payload.edges) {
    const pa = positions.get(a);
    const pb = positions.get(b);
    if (!pa || !pb) continue;
    svg.appendChild(
      svgEl("line", {
        class: "edge",
        x1: String(pa.x),
        y1: String(pa.y),
        x2: String(pb.x),
        y2: String(pb.y),
      }),
    );
  }

  for (const area of areas) {
    const center = areaCenters.get(area.id);
    if (!center) continue;
    const group = svgEl("g", { class: "graph-node area-node" });
    group.dataset.nodeId = area.id;
    const rect = svgEl("rect", {
      x: String(center.x - 9),
      y: String(center.y - 9),
      width: "18",
      height: "18",
      rx: "4",
      fill: "#44484d",
    });
    const text = svgEl("text", {
      x: String(center.x),
      y: String(center.y - 14),
      class: "area-label",
      "text-anchor": "middle",
    });
    text.textContent = area.name;
    group.append(rect, text);
    svg.appendChild(group);
  }

  for (const node of subAreas) {
    const p = positions.get(node.id);
    if (!p) continue;
    const group = svgEl("g", { class: "graph-node sub-area-node" });
    group.dataset.nodeId = node.id;
    const circle = svgEl("circle", {
      cx: String(p.x),
      cy: String(p.y),
      r: "13",
      fill: bandColor(node.band ?? "InsufficientData"),
      stroke: "#2f3237",
    });
    const text = svgEl("text", {
      x: String(p.x),
      y: String(p.y + 26),
      class: "node-label",
      "text-anchor": "middle",
    });
    text.textContent = node.name;
    group.append(circle, text);
    group.addEventListener("mouseenter", () => {
      const ids = new Set(goalsMappedTo(payload, node.id));
      applyHighlight(container, ids);
      handlers.onHighlight?.(ids);
    });
    group.addEventListener("mouseleave", () => {
      applyHighlight(container, new Set());
      handlers.onHighlight?.(new Set());
    });
    group.addEventListener("click", () => handlers.openSubArea(node.id));
    svg.appendChild(group);
  }
  return svg;
}
