import { HttpApi, type ApiClient } from "./api.js";
import { FetchSequencer } from "./api.js";
import { clear, el } from "./dom.js";
import { renderGoal } from "./goal.js";
import { renderLevel1 } from "./level1.js";
import {
  initialState,
  navigate,
  setRef,
  setYear,
  type Page,
  type ViewState,
} from "./state.js";
import { SubAreaPage } from "./subarea.js";
import { renderTimeseriesModal } from "./timeseries.js";
import type { RefName } from "./types.js";

function parseHash(hash: string): Page {
  const subArea = hash.match(/^#\/subarea\/([a-z0-9_-]+)/);
  if (subArea) return { kind: "subarea", id: subArea[1] };
  const goal = hash.match(/^#\/goal\/([a-z0-9_-]+)/);
  if (goal) return { kind: "goal", id: goal[1] };
  return { kind: "level1" };
}

export class App {
  private state: ViewState = initialState();
  private locale = "de-AT";
  private readonly level1Sequencer = new FetchSequencer();
  private subAreaPage: SubAreaPage | null = null;

  constructor(
    private readonly root: HTMLElement,
    private readonly api: ApiClient,
  ) {}

  start(): void {
    window.addEventListener("hashchange", () => {
      this.state = navigate(this.state, parseHash(window.location.hash));
      void this.render();
    });
    this.state = navigate(this.state, parseHash(window.location.hash));
    void this.render();
  }

  private openSubArea = (id: string): void => {
    window.location.hash = `#/subarea/${id}`;
  };

  private openGoal = (id: string): void => {
    window.location.hash = `#/goal/${id}`;
  };

  private openTimeseries = (indicatorId: string): void => {
    this.state = { ...this.state, openTimeseries: indicatorId };
    void this.api
      .timeseries(indicatorId)
      .then((payload) => {
        if (this.state.openTimeseries !== indicatorId) return;
        renderTimeseriesModal(this.root, payload, this.locale);
      })
      .catch((error) => this.showError(error));
  };

  private async render(): Promise<void> {
    const page = this.state.page;
    try {
      if (page.kind === "level1") {
        await this.renderLevel1();
      } else if (page.kind === "subarea") {
        await this.renderSubArea(page.id);
      } else {
        await this.renderGoal(page.id);
      }
    } catch (error) {
      this.showError(error);
    }
  }

  private async renderLevel1(): Promise<void> {
    const ticket = this.level1Sequencer.begin();
    const payload = await this.api.graph(this.state.ref, this.state.year);
    if (!this.level1Sequencer.isCurrent(ticket)) return;
    this.locale = payload.locale;
    renderLevel1(this.root, payload, {
      openSubArea: this.openSubArea,
      openGoal: this.openGoal,
      onHighlight: (ids) => {
        this.state = { ...this.state, highlighted: ids };
      },
    });
  }

  private async renderSubArea(id: string): Promise<void> {
    this.subAreaPage = new SubAreaPage(
      this.root,
      this.api,
      {
        openSubArea: this.openSubArea,
        openGoal: this.openGoal,
        openTimeseries: this.openTimeseries,
        onRefChange: (ref: RefName) => {
          this.state = setRef(this.state, ref);
          void this.subAreaPage?.show(id, this.state.ref, this.state.year);
        },
        onYearChange: (year: number | null) => {
          this.state = setYear(this.state, year);
          void this.subAreaPage?.show(id, this.state.ref, this.state.year);
        },
      },
      this.locale,
    );
    await this.subAreaPage.show(id, this.state.ref, this.state.year);
  }

  private async renderGoal(id: string): Promise<void> {
    const payload = await this.api.goal(id);
    renderGoal(this.root, payload, this.locale, {
      openSubArea: this.openSubArea,
    });
  }

  private showError(error: unknown): void {
    clear(this.root);
    const banner = el("div", { class: "error-banner" });
    banner.appendChild(
      el("p", { text: `could not load data: ${String(error)}` }),
    );
    const retry = el("button", {
      class: "retry-button",
      type: "button",
      text: "retry",
    });
    retry.addEventListener("click", () => void this.render());
    banner.appendChild(retry);
    this.root.appendChild(banner);
  }
}

if (typeof document !== "undefined" && document.getElementById("app")) {
  const app = new App(document.getElementById("app")!, new HttpApi());
  app.start();
}
