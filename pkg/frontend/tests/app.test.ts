import { beforeEach, describe, expect, it } from "vitest";

import type { ApiClient } from "../src/api.js";
import { App } from "../src/main.js";
import { GII_GOAL, GRAPH, ICT_TIMESERIES, SUBAREA_LEADERS }
  from "./fixtures.js";

function flush(): Promise<void> {
  return new Promise((resolve) => setTimeout(resolve, 0));
}

class GoodApi implements ApiClient {
  async graph() {
    return GRAPH;
  }

  async subArea() {
    return SUBAREA_LEADERS;
  }

  async timeseries() {
    return ICT_TIMESERIES;
  }

  async goal() {
    return GII_GOAL;
  }
}

class FailingApi extends GoodApi {
  attempts = 0;

  override async graph(): Promise<never> {
    this.attempts += 1;
    throw new Error("backend down");
  }
}

describe("application shell", () => {
  let root: HTMLElement;

  beforeEach(() => {
    window.location.hash = "#/";
    document.body.innerHTML = "<div id='app'></div>";
    root = document.getElementById("app")!;
  });

  it("renders the level-1 page from the graph payload", async () => {
    new App(root, new GoodApi()).start();
    await flush();
    expect(root.querySelectorAll("[data-node-id]").length).toBe(
      GRAPH.nodes.length,
    );
  });

  it("shows a retryable error banner when the fetch fails", async () => {
    const api = new FailingApi();
    new App(root, api).start();
    await flush();
    const banner = root.querySelector(".error-banner");
    expect(banner).not.toBeNull();
    expect(banner!.textContent).toContain("could not load data");
    const retry = root.querySelector<HTMLButtonElement>(".retry-button")!;
    retry.click();
    await flush();
    expect(api.attempts).toBe(2);
  });

  it("navigates to a sub-area page via the hash", async () => {
    new App(root, new GoodApi()).start();
    await flush();
    window.location.hash = "#/subarea/digitization";
    window.dispatchEvent(new Event("hashchange"));
    await flush();
    expect(
      root.querySelector<HTMLElement>(".subarea")!.dataset.subAreaId,
    ).toBe("digitization");
  });

  it("navigates to a goal page via the hash", async () => {
    new App(root, new GoodApi()).start();
    await flush();
    window.location.hash = "#/goal/gii_rank";
    window.dispatchEvent(new Event("hashchange"));
    await flush();
    expect(
      root.querySelector<HTMLElement>(".goal-page")!.dataset.goalId,
    ).toBe("gii_rank");
  });
});
