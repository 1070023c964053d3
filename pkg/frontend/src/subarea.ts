import type { ApiClient } from "./api.js";
import { FetchSequencer } from "./api.js";
import { bandColor } from "./colors.js";
import { clear, el, svgEl } from "./dom.js";
import { formatPercent } from "./format.js";
import type {
  IndicatorEntry,
  RefName,
  Score,
  SubAreaPayload,
} from "./types.js";

export interface SubAreaHandlers {
  openSubArea(id: string): void;
  openGoal(id: string): void;
  openTimeseries(indicatorId: string): void;
  onRefChange(ref: RefName): void;
  onYearChange(year: number | null): void;
}

const REF_LABELS: Record<RefName, string> = {
  leaders: "Innovation Leaders",
  top3: "Top 3 countries",
  eu: "EU average",
};

const BAR_FULL_SCALE = 150; // percent rendered at full track width

function scoreBar(score: Score, locale: string): HTMLElement {
  const track = el("div", { class: "bar-track" });
  const fill = el("div", { class: "bar-fill" });
  if (score.percent === null) {
    fill.classList.add("bar-insufficient");
    fill.style.width = "100%";
    fill.style.backgroundColor = bandColor("InsufficientData");
    track.appendChild(fill);
    track.appendChild(el("span", { class: "bar-label", text: "no data" }));
  } else {
    const width = Math.max(
      2,
      Math.min(100, (score.percent / BAR_FULL_SCALE) * 100),
    );
    fill.style.width = `${width}%`;
    fill.style.backgroundColor = bandColor(score.band);
    track.appendChild(fill);
    track.appendChild(
      el("span", {
        class: "bar-label",
        text: formatPercent(score.percent, locale),
      }),
    );
  }
  track.dataset.band = score.band;
  return track;
}

function taxonomyMark(entry: IndicatorEntry): HTMLElement {
  // input indicators show an unfilled circle, output ones a filled circle
  const mark = el("span", {
    class: `taxonomy-mark taxonomy-${entry.taxonomy.toLowerCase()}`,
    title: `${entry.taxonomy} indicator`,
  });
  mark.textContent = entry.taxonomy === "Input" ? "○" : "●";
  return mark;
}

function indicatorRow(
  entry: IndicatorEntry,
  locale: string,
  handlers: SubAreaHandlers,
  isChild = false,
): HTMLElement[] {
  const row = el("div", {
    class: `indicator-row${isChild ? " child-row" : ""}` +
      `${entry.is_composite ? " composite-row" : ""}`,
  });
  row.dataset.indicatorId = entry.id;

  const name = el("span", { class: "indicator-name" });
  const label = el("a", { href: "#", text: entry.name });
  label.addEventListener("click", (event) => {
    event.preventDefault();
    handlers.openTimeseries(entry.id);
  });
  name.appendChild(label);
  name.appendChild(taxonomyMark(entry));
  if (entry.source_url) {
    name.appendChild(
      el("a", {
        class: "source-link",
        href: entry.source_url,
        target: "_blank",
        rel: "noopener",
        title: "original data source",
        text: "source",
      }),
    );
  }

  row.append(name, scoreBar(entry.score, locale));
  const rows: HTMLElement[] = [row];

  if (entry.is_composite && entry.children) {
    const toggle = el("button", {
      class: "expand-toggle",
      type: "button",
      "aria-expanded": "false",
      text: "+",
    });
    name.prepend(toggle);
    const childRows = entry.children.map(
      (child) => indicatorRow(child, locale, handlers, true)[0],
    );
    for (const childRow of childRows) {
      childRow.classList.add("hidden");
      rows.push(childRow);
    }
    toggle.addEventListener("click", () => {
      const expanded = toggle.getAttribute("aria-expanded") === "true";
      toggle.setAttribute("aria-expanded", String(!expanded));
      toggle.textContent = expanded ? "+" : "−";
      for (const childRow of childRows) {
        childRow.classList.toggle("hidden", expanded);
      }
    });
  }
  return rows;
}

function historySparkline(
  history: SubAreaPayload["overall_history"],
): SVGSVGElement {
  const width = 220;
  const height = 60;
  const svg = svgEl("svg", {
    class: "history-chart",
    viewBox: `0 0 ${width} ${height}`,
  });
  if (history.length === 0) return svg;
  const years = history.map((h) => h.year);
  const percents = history.map((h) => h.percent);
  const x = (year: number) =>
    years.length === 1
      ? width / 2
      : 6 + ((year - years[0]) / (years[years.length - 1] - years[0])) *
        (width - 12);
  const lo = Math.min(...percents);
  const hi = Math.max(...percents);
  const y = (p: number) =>
    hi === lo ? height / 2 : height - 8 - ((p - lo) / (hi - lo)) *
      (height - 16);
  svg.appendChild(
    svgEl("polyline", {
      class: "history-line",
      points: history.map((h) => `${x(h.year)},${y(h.percent)}`).join(" "),
      fill: "none",
    }),
  );
  for (const point of history) {
    svg.appendChild(
      svgEl("circle", {
        cx: String(x(point.year)),
        cy: String(y(point.percent)),
        r: "2.5",
        fill: bandColor(point.band),
      }),
    );
  }
  return svg;
}

export class SubAreaPage {
  private readonly sequencer = new FetchSequencer();

  constructor(
    private readonly root: HTMLElement,
    private readonly api: ApiClient,
    private readonly handlers: SubAreaHandlers,
    private readonly locale: string,
  ) {}

  /** Fetch and render; stale responses are discarded. */
  async show(id: string, ref: RefName, year: number | null): Promise<void> {
    const ticket = this.sequencer.begin();
    const payload = await this.api.subArea(id, ref, year);
    if (!this.sequencer.isCurrent(ticket)) return;
    this.render(payload);
  }

  private render(payload: SubAreaPayload): void {
    clear(this.root);
    const page = el("div", { class: "subarea" });
    page.dataset.subAreaId = payload.id;

    const header = el("header", { class: "subarea-header" });
    const back = el("button", {
      class: "back-button",
      type: "button",
      text: "← overview",
    });
    back.addEventListener("click", () => {
      window.location.hash = "#/";
    });
    header.append(back, el("h2", { text: payload.name }));
    header.appendChild(this.selector(payload));
    page.appendChild(header);

    const columns = el("div", { class: "subarea-columns" });
    columns.appendChild(this.indicatorPanel(payload));
    columns.appendChild(this.sidePanel(payload));
    page.appendChild(columns);
    this.root.appendChild(page);
  }

  /** Area J: reference region and year selection. */
  private selector(payload: SubAreaPayload): HTMLElement {
    const box = el("div", { class: "ref-year-selector" });
    const refSelect = el("select", { class: "ref-select" });
    for (const [value, label] of Object.entries(REF_LABELS)) {
      const option = el("option", { value, text: label });
      if (refFromApi(payload.ref) === value) {
        option.setAttribute("selected", "selected");
      }
      refSelect.appendChild(option);
    }
    refSelect.addEventListener("change", () => {
      this.handlers.onRefChange(refSelect.value as RefName);
    });

    const yearSelect = el("select", { class: "year-select" });
    const years = new Set(payload.overall_history.map((h) => h.year));
    if (payload.year !== null) years.add(payload.year);
    yearSelect.appendChild(el("option", { value: "", text: "latest" }));
    for (const year of [...years].sort((a, b) => b - a)) {
      const option = el("option", {
        value: String(year),
        text: String(year),
      });
      if (year === payload.year) option.setAttribute("selected", "selected");
      yearSelect.appendChild(option);
    }
    yearSelect.addEventListener("change", () => {
      this.handlers.onYearChange(
        yearSelect.value === "" ? null : Number(yearSelect.value),
      );
    });

    box.append(
      el("label", { text: "compare with" }),
      refSelect,
      el("label", { text: "year" }),
      yearSelect,
    );
    return box;
  }

  /** Area A plus per-indicator source links (B). */
  private indicatorPanel(payload: SubAreaPayload): HTMLElement {
    const panel = el("section", { class: "indicator-panel" });
    panel.appendChild(el("h3", { text: "Indicators" }));
    for (const entry of payload.indicators) {
      for (const row of indicatorRow(entry, this.locale, this.handlers)) {
        panel.appendChild(row);
      }
    }
    return panel;
  }

  /** Areas C, E, F, G, H, I. */
  private sidePanel(payload: SubAreaPayload): HTMLElement {
    const side = el("aside", { class: "subarea-side" });

    const overall = el("div", { class: "overall-box" });
    overall.appendChild(el("h3", { text: "Overall assessment" }));
    const chip = el("span", { class: "overall-chip" });
    chip.dataset.band = payload.overall.band;
    chip.style.backgroundColor = bandColor(payload.overall.band);
    chip.textContent =
      payload.overall.percent === null
        ? "no data"
        : formatPercent(payload.overall.percent, this.locale);
    overall.appendChild(chip);
    if (payload.year !== null) {
      overall.appendChild(
        el("span", { class: "overall-year", text: ` in ${payload.year}` }),
      );
    }
    overall.appendChild(historySparkline(payload.overall_history));
    side.appendChild(overall);

    if (payload.interpretation_text) {
      const interpretation = el("div", { class: "interpretation" });
      interpretation.appendChild(el("h3", { text: "Interpretation" }));
      interpretation.appendChild(
        el("p", { text: payload.interpretation_text }),
      );
      side.appendChild(interpretation);
    }

    if (payload.goals.length > 0) {
      const goals = el("div", { class: "mapped-goals" });
      goals.appendChild(el("h3", { text: "Strategic goals" }));
      for (const goal of payload.goals) {
        const link = el("a", {
          href: `#/goal/${goal.id}`,
          class: "goal-link",
          text: goal.title,
        });
        goals.appendChild(el("div", {}, [link]));
      }
      side.appendChild(goals);
    }

    if (payload.external_links.length > 0) {
      const links = el("div", { class: "external-links" });
      links.appendChild(el("h3", { text: "Related tools" }));
      for (const entry of payload.external_links) {
        links.appendChild(
          el("div", {}, [
            el("a", {
              href: entry.url,
              target: "_blank",
              rel: "noopener",
              text: entry.title,
            }),
          ]),
        );
      }
      side.appendChild(links);
    }

    if (payload.documents.length > 0) {
      const docs = el("div", { class: "documents" });
      docs.appendChild(el("h3", { text: "Documents" }));
      for (const doc of payload.documents) {
        const item = el("div", { class: "document-item" });
        item.append(
          el("span", { class: "document-kind", text: doc.kind }),
          el("a", { href: doc.url, download: "", text: doc.title }),
        );
        docs.appendChild(item);
      }
      side.appendChild(docs);
    }

    if (payload.related_sub_areas.length > 0) {
      const related = el("div", { class: "related-sub-areas" });
      related.appendChild(el("h3", { text: "Related sub-areas" }));
      for (const other of payload.related_sub_areas) {
        const chipEl = el("button", {
          class: "related-chip",
          type: "button",
          text: other.name,
        });
        chipEl.addEventListener("click", () =>
          this.handlers.openSubArea(other.id),
        );
        related.appendChild(chipEl);
      }
      side.appendChild(related);
    }
    return side;
  }
}

export function refFromApi(apiRef: string): RefName {
  if (apiRef === "Top3") return "top3";
  if (apiRef === "EuAverage") return "eu";
  return "leaders";
}
