import type { RefName } from "./types.js";

export type Page =
  | { kind: "level1" }
  | { kind: "subarea"; id: string }
  | { kind: "goal"; id: string };

/** Client view state. ref and year persist across navigation; the
 * highlight set is only non-empty while a hover is active. */
export interface ViewState {
  page: Page;
  ref: RefName;
  year: number | null;
  highlighted: Set<string>;
  openTimeseries: string | null;
}

export function initialState(): ViewState {
  return {
    page: { kind: "level1" },
    ref: "leaders",
    year: null,
    highlighted: new Set(),
    openTimeseries: null,
  };
}

export function navigate(state: ViewState, page: Page): ViewState {
  // leaving a page clears transient hover/selection, keeps ref and year
  return {
    ...state,
    page,
    highlighted: new Set(),
    openTimeseries: null,
  };
}

export function setRef(state: ViewState, ref: RefName): ViewState {
  return { ...state, ref };
}

export function setYear(state: ViewState, year: number | null): ViewState {
  return { ...state, year };
}

export function hover(state: ViewState, ids: Iterable<string>): ViewState {
  return { ...state, highlighted: new Set(ids) };
}

export function clearHover(state: ViewState): ViewState {
  return { ...state, highlighted: new Set() };
}
