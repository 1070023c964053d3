/** Payload shapes served by the monitoring API (api/v1). */

export type Band =
  | "Green"
  | "LightGreen"
  | "Yellow"
  | "Orange"
  | "Red"
  | "InsufficientData";

export type RefName = "leaders" | "top3" | "eu";

export interface Score {
  percent: number | null;
  band: Band;
}

export interface GraphNode {
  id: string;
  kind: "area" | "sub_area";
  name: string;
  sub_area_ids?: string[];
  area_id?: string;
  year?: number | null;
  band?: Band;
  percent?: number | null;
  x?: number;
  y?: number;
}

export interface GraphGoal {
  id: string;
  title: string;
  strategy_id: string;
  mapped_sub_areas: string[];
  achievement_percent: number | null;
  year: number | null;
}

export interface GraphPayload {
  ref: string;
  year: number | null;
  locale: string;
  nodes: GraphNode[];
  edges: [string, string][];
  goals: GraphGoal[];
}

export interface IndicatorEntry {
  id: string;
  name: string;
  unit: string;
  description: string;
  taxonomy: "Input" | "Output";
  polarity: string;
  is_composite: boolean;
  source_url: string;
  score: Score;
  children?: IndicatorEntry[];
}

export interface SubAreaPayload {
  id: string;
  name: string;
  area_id: string;
  ref: string;
  year: number | null;
  overall: Score;
  overall_history: { year: number; percent: number; band: Band }[];
  indicators: IndicatorEntry[];
  interpretation_text: string;
  goals: { id: string; title: string }[];
  external_links: { title: string; url: string }[];
  documents: { title: string; kind: string; url: string }[];
  related_sub_areas: { id: string; name: string }[];
}

export type SeriesPoint = [number, number];

export interface SingleTimeseries {
  indicator_id: string;
  name: string;
  unit: string;
  kind: "single";
  target_region: string;
  series: {
    target: SeriesPoint[];
    innovation_leaders: SeriesPoint[];
    top3: SeriesPoint[];
    eu_average: SeriesPoint[];
  };
}

export interface CompositeTimeseries {
  indicator_id: string;
  name: string;
  kind: "composite";
  ref: string;
  target_region: string;
  series: { target_percent: SeriesPoint[] };
}

export type TimeseriesPayload = SingleTimeseries | CompositeTimeseries;

export interface GoalStatus {
  year: number;
  achievement_percent: number;
  current_value: number | null;
  rank: number | null;
}

export interface GoalPayload {
  id: string;
  title: string;
  strategy_id: string;
  baseline: { year: number; value: number };
  target: { year: number; value: number };
  mapped_sub_areas: string[];
  status: GoalStatus | null;
  history: SeriesPoint[];
  projection: SeriesPoint[] | null;
  on_track: boolean | null;
}
