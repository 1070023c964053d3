import { clear, el } from "./dom.js";
import { formatPercent } from "./format.js";
import { harveyBall } from "./harvey.js";
import { renderLineChart, type Line } from "./timeseries.js";
import type { GoalPayload } from "./types.js";

export interface GoalHandlers {
  openSubArea(id: string): void;
}

const NOT_REACHABLE = "target not reachable on current trend";
const ON_TRACK = "on track toward the target";

export function renderGoal(
  root: HTMLElement,
  payload: GoalPayload,
  locale: string,
  handlers: GoalHandlers,
): void {
  clear(root);
  const page = el("div", { class: "goal-page" });
  page.dataset.goalId = payload.id;

  const header = el("header", { class: "goal-header" });
  const back = el("button", {
    class: "back-button",
    type: "button",
    text: "← overview",
  });
  back.addEventListener("click", () => {
    window.location.hash = "#/";
  });
  header.append(back, el("h2", { text: payload.title }));
  header.appendChild(
    el("span", { class: "strategy-tag", text: payload.strategy_id }),
  );
  page.appendChild(header);

  const summary = el("div", { class: "goal-summary" });
  const achievement = payload.status?.achievement_percent ?? null;
  summary.appendChild(harveyBall(achievement, { size: 72 }));
  const caption = el("div", { class: "goal-caption" });
  if (payload.status !== null) {
    caption.appendChild(
      el("p", {
        class: "achievement-text",
        text: `achieved to ${formatPercent(
          payload.status.achievement_percent,
          locale,
        )} (${payload.status.year})`,
      }),
    );
    if (payload.status.rank !== null) {
      caption.appendChild(
        el("p", {
          class: "rank-text",
          text: `currently ranked ${payload.status.rank}`,
        }),
      );
    }
  } else {
    caption.appendChild(el("p", { text: "no current status" }));
  }
  caption.appendChild(
    el("p", {
      class: "target-text",
      text:
        `baseline ${payload.baseline.value} (${payload.baseline.year}) ` +
        `→ target ${payload.target.value} (${payload.target.year})`,
    }),
  );
  if (payload.on_track !== null) {
    const verdict = el("p", {
      class: `verdict ${payload.on_track ? "verdict-good" : "verdict-bad"}`,
      text: payload.on_track ? ON_TRACK : NOT_REACHABLE,
    });
    caption.appendChild(verdict);
  }
  summary.appendChild(caption);
  page.appendChild(summary);

  const lines: Line[] = [
    {
      label: "observed",
      points: payload.history,
      color: "#1565c0",
    },
  ];
  if (payload.projection && payload.projection.length > 0) {
    // dashed outlook, visually joined to the last observed point
    const lastObserved = payload.history[payload.history.length - 1];
    const points = lastObserved
      ? [lastObserved, ...payload.projection]
      : payload.projection;
    lines.push({
      label: "outlook",
      points,
      color: "#8d6e63",
      dashed: true,
    });
  }
  page.appendChild(renderLineChart(lines, locale));

  if (payload.mapped_sub_areas.length > 0) {
    const mapped = el("div", { class: "mapped-sub-areas" });
    mapped.appendChild(el("h3", { text: "Driven by" }));
    for (const id of payload.mapped_sub_areas) {
      const chip = el("button", {
        class: "related-chip",
        type: "button",
        text: id,
      });
      chip.addEventListener("click", () => handlers.openSubArea(id));
      mapped.appendChild(chip);
    }
    page.appendChild(mapped);
  }
  root.appendChild(page);
}
