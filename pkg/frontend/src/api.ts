import type {
  GoalPayload,
  GraphPayload,
  RefName,
  SubAreaPayload,
  TimeseriesPayload,
} from "./types.js";

/** Data access used by the pages; tests substitute a fake. */
export interface ApiClient {
  graph(ref: RefName, year?: number | null): Promise<GraphPayload>;
  subArea(
    id: string,
    ref: RefName,
    year?: number | null,
  ): Promise<SubAreaPayload>;
  timeseries(indicatorId: string): Promise<TimeseriesPayload>;
  goal(id: string): Promise<GoalPayload>;
}

declare global {
  interface Window {
    RTIMON_API_BASE?: string;
  }
}

export function apiBase(): string {
  return (typeof window !== "undefined" && window.RTIMON_API_BASE) || "";
}

function query(ref: RefName, year?: number | null): string {
  const params = new URLSearchParams({ ref });
  if (year !== undefined && year !== null) params.set("year", String(year));
  return params.toString();
}

export class HttpApi implements ApiClient {
  constructor(private readonly base: string = apiBase()) {}

  private async get<T>(path: string): Promise<T> {
    const response = await fetch(`${this.base}/api/v1${path}`);
    if (!response.ok) {
      throw new Error(`GET ${path} failed: ${response.status}`);
    }
    return (await response.json()) as T;
  }

  graph(ref: RefName, year?: number | null): Promise<GraphPayload> {
    return this.get(`/graph?${query(ref, year)}`);
  }

  subArea(
    id: string,
    ref: RefName,
    year?: number | null,
  ): Promise<SubAreaPayload> {
    return this.get(`/subareas/${id}?${query(ref, year)}`);
  }

  timeseries(indicatorId: string): Promise<TimeseriesPayload> {
    return this.get(`/indicators/${indicatorId}/timeseries`);
  }

  goal(id: string): Promise<GoalPayload> {
    return this.get(`/goals/${id}`);
  }
}

/**
 * Guards a panel against out-of-order responses: only the most recently
 * started request may apply its result.
 */
export class FetchSequencer {
  private current = 0;

  begin(): number {
    return ++this.current;
  }

  isCurrent(ticket: number): boolean {
    return ticket === this.current;
  }
}
